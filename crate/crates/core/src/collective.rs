//! Centre-of-mass (`c`) and relative (`r`) coordinates of two qudits.
//!
//! The index change is
//!
//! ```text
//! n_c = (n1 + n2)/2,   n_r = (n1 - n2)/2     ⇔     n1 = n_c + n_r,   n2 = n_c - n_r
//! ```
//!
//! with halving taken mod d. Collective kets put `c` on the high digit,
//! `|n_c⟩_c|n_r⟩_r` at flat index `n_c * d + n_r`. Collective operators are
//! obtained by conjugating single-mode operators with the permutation, so
//! the index map above is the only place the convention lives.
//!
//! A phase-space point `(q, p)` has two realizations:
//!
//! * plus: `|p;0⟩_c |q⟩_r`, the Fourier state on `c` and CB on `r`;
//! * minus: `|q⟩_c |p;0⟩_r`, the roles swapped.
//!
//! Every point state is maximally entangled in the particle coordinates and
//! the two families are mutually unbiased. The minus realization is the
//! lattice on which collective words act by hopping.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mes::mes_element;
use crate::modring::{ModInt, Prime};
use crate::schwinger::{clock_z, mub_state, shift_x, BasisLabel, RootsOfUnity};
use crate::state::{equal_up_to_global_phase, tensor, Ket, Particle, PhaseMatch, UnitaryOp, C64};
use crate::word::{Factor, Mode, Pauli, Word};

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PhasePoint {
    pub q: ModInt,
    pub p: ModInt,
}

impl PhasePoint {
    pub fn new(q: ModInt, p: ModInt) -> Self {
        assert_eq!(q.modulus(), p.modulus(), "point coordinates in different dimensions");
        Self { q, p }
    }

    pub fn modulus(self) -> Prime {
        self.q.modulus()
    }

    /// All d² points, `q`-major.
    pub fn all(d: Prime) -> Vec<PhasePoint> {
        d.residues().flat_map(|q| d.residues().map(move |p| PhasePoint { q, p })).collect()
    }
}

impl std::fmt::Display for PhasePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.q, self.p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CollectiveIndex {
    pub nc: ModInt,
    pub nr: ModInt,
}

pub fn particle_to_collective(n1: ModInt, n2: ModInt) -> CollectiveIndex {
    CollectiveIndex { nc: (n1 + n2).half(), nr: (n1 - n2).half() }
}

pub fn collective_to_particle(idx: CollectiveIndex) -> (ModInt, ModInt) {
    (idx.nc + idx.nr, idx.nc - idx.nr)
}

/// Flat particle index → flat collective index.
fn collective_flat_index(d: Prime, flat: usize) -> usize {
    let n = d.dim();
    let n1 = d.residue((flat / n) as i64);
    let n2 = d.residue((flat % n) as i64);
    let idx = particle_to_collective(n1, n2);
    idx.nc.index() * n + idx.nr.index()
}

/// The permutation `P` with `P |n1⟩|n2⟩ = |n_c⟩_c|n_r⟩_r`.
pub fn collective_permutation(d: Prime) -> UnitaryOp {
    let n = d.dim() * d.dim();
    let mut m = DMatrix::<C64>::zeros(n, n);
    for flat in 0..n {
        m[(collective_flat_index(d, flat), flat)] = C64::new(1.0, 0.0);
    }
    UnitaryOp::from_matrix_unchecked(m)
}

/// Particle-coordinate amplitudes → collective-coordinate amplitudes.
pub fn to_collective_frame(state: &Ket) -> Result<Ket> {
    let d = prime_of(state)?;
    let mut out = DVector::<C64>::zeros(state.dim());
    for (flat, a) in state.amplitudes().iter().enumerate() {
        out[collective_flat_index(d, flat)] = *a;
    }
    Ok(Ket::from_unit_vector(out))
}

/// Collective-coordinate amplitudes → particle-coordinate amplitudes.
pub fn from_collective_frame(state: &Ket) -> Result<Ket> {
    let d = prime_of(state)?;
    let mut out = DVector::<C64>::zeros(state.dim());
    for flat in 0..state.dim() {
        out[flat] = state.amplitudes()[collective_flat_index(d, flat)];
    }
    Ok(Ket::from_unit_vector(out))
}

fn prime_of(state: &Ket) -> Result<Prime> {
    let d = crate::state::local_dim(state.dim())?;
    Prime::new(d as u64)
}

fn fourier(p: ModInt) -> Ket {
    mub_state(BasisLabel::Slope(ModInt::zero(p.modulus())), p).vector
}

fn cb(q: ModInt) -> Ket {
    Ket::basis(q.modulus().dim(), q.index())
}

/// Which realization of a phase-space point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointBasis {
    /// `|p;0⟩_c |q⟩_r`
    Plus,
    /// `|q⟩_c |p;0⟩_r`
    Minus,
}

/// `|u(q,p)+⟩ = |p;0⟩_c |q⟩_r` in particle coordinates.
pub fn point_state_plus(pt: PhasePoint) -> Ket {
    let collective = tensor(&fourier(pt.p), &cb(pt.q)).expect("same dimension");
    from_collective_frame(&collective).expect("two-qudit state")
}

/// `|u(q,p)-⟩ = |q⟩_c |p;0⟩_r` in particle coordinates.
pub fn point_state_minus(pt: PhasePoint) -> Ket {
    let collective = tensor(&cb(pt.q), &fourier(pt.p)).expect("same dimension");
    from_collective_frame(&collective).expect("two-qudit state")
}

pub fn point_state(pt: PhasePoint, basis: PointBasis) -> Ket {
    match basis {
        PointBasis::Plus => point_state_plus(pt),
        PointBasis::Minus => point_state_minus(pt),
    }
}

/// The lattice realization `(q, p) ⇔ |q⟩_c |p;0⟩_r` shared by hopping and
/// line states.
pub fn lattice_state(pt: PhasePoint) -> Ket {
    point_state_minus(pt)
}

/// The CB-form maximally entangled state with index `(2q, p)`, carried into
/// collective coordinates and compared against `|p;0⟩_c |q⟩_r`.
#[derive(Debug, Clone, Copy)]
pub struct CollectiveFactorization {
    pub point: PhasePoint,
    pub matched: PhaseMatch,
    /// Exponent `k` of the measured phase `ω^k`, expected `-qp`.
    pub phase_exponent: Option<ModInt>,
}

pub fn factorize_cb_mes(pt: PhasePoint, tol: f64) -> CollectiveFactorization {
    let d = pt.modulus();
    let state = mes_element(pt.q * 2, pt.p, BasisLabel::Cb, BasisLabel::Cb).vector;
    let permuted = collective_permutation(d).apply(&state).expect("d² state");
    let product = tensor(&fourier(pt.p), &cb(pt.q)).expect("same dimension");
    let matched = equal_up_to_global_phase(&product, &permuted, tol).expect("same dimension");
    let phase_exponent = crate::schwinger::phase_exponent(matched.phase, d, 1e-6);
    CollectiveFactorization { point: pt, matched, phase_exponent }
}

/// Dense `d² × d²` matrices of every single-mode operator.
#[derive(Debug, Clone)]
pub struct CollectiveOps {
    d: Prime,
    pub z1: UnitaryOp,
    pub x1: UnitaryOp,
    pub z2: UnitaryOp,
    pub x2: UnitaryOp,
    pub zc: UnitaryOp,
    pub xc: UnitaryOp,
    pub zr: UnitaryOp,
    pub xr: UnitaryOp,
}

impl CollectiveOps {
    pub fn new(d: Prime) -> Self {
        let (z, x) = (clock_z(d), shift_x(d));
        let id = UnitaryOp::identity(d.dim());
        // Collective-frame operators pulled back to particle coordinates:
        // O_particle = P† O_collective P.
        let pull = collective_permutation(d).dagger();
        let back = |op: &UnitaryOp| pull.conjugate(op).expect("same dimension");
        Self {
            d,
            z1: z.kron(&id),
            x1: x.kron(&id),
            z2: id.kron(&z),
            x2: id.kron(&x),
            zc: back(&z.kron(&id)),
            xc: back(&x.kron(&id)),
            zr: back(&id.kron(&z)),
            xr: back(&id.kron(&x)),
        }
    }

    pub fn prime(&self) -> Prime {
        self.d
    }

    pub fn get(&self, op: Pauli, mode: Mode) -> &UnitaryOp {
        match (op, mode) {
            (Pauli::Z, Mode::Particle(Particle::One)) => &self.z1,
            (Pauli::X, Mode::Particle(Particle::One)) => &self.x1,
            (Pauli::Z, Mode::Particle(Particle::Two)) => &self.z2,
            (Pauli::X, Mode::Particle(Particle::Two)) => &self.x2,
            (Pauli::Z, Mode::Center) => &self.zc,
            (Pauli::X, Mode::Center) => &self.xc,
            (Pauli::Z, Mode::Relative) => &self.zr,
            (Pauli::X, Mode::Relative) => &self.xr,
        }
    }

    /// Dense matrix of a word whose factors all name a mode.
    pub fn word_operator(&self, word: &Word) -> Result<UnitaryOp> {
        let n = self.d.dim() * self.d.dim();
        let mut acc = UnitaryOp::identity(n);
        for f in &word.factors {
            let mode = f.mode.ok_or_else(|| {
                Error::WordParse(format!("factor `{f}` needs a mode (c, r, 1 or 2)"))
            })?;
            let power = self.d.residue(f.power).value() as i64;
            acc = acc.compose(&self.get(f.op, mode).pow(power))?;
        }
        Ok(acc)
    }
}

/// Single-qudit matrix of a word acting on `particle`. Factors may omit the
/// mode or must name that particle.
fn single_particle_operator(d: Prime, particle: Particle, word: &Word) -> Result<UnitaryOp> {
    let (z, x) = (clock_z(d), shift_x(d));
    let mut acc = UnitaryOp::identity(d.dim());
    for f in &word.factors {
        match f.mode {
            None => {}
            Some(Mode::Particle(p)) if p == particle => {}
            Some(_) => {
                return Err(Error::WordParse(format!(
                    "factor `{f}` does not act on particle {}",
                    if particle == Particle::One { 1 } else { 2 }
                )))
            }
        }
        let base = if f.op == Pauli::X { &x } else { &z };
        acc = acc.compose(&base.pow(d.residue(f.power).value() as i64))?;
    }
    Ok(acc)
}

/// Applies a single-particle word to one particle of a two-qudit state.
pub fn local_action(state: &Ket, particle: Particle, word: &Word) -> Result<Ket> {
    let d = prime_of(state)?;
    let local = single_particle_operator(d, particle, word)?;
    let id = UnitaryOp::identity(d.dim());
    let full = match particle {
        Particle::One => local.kron(&id),
        Particle::Two => id.kron(&local),
    };
    full.apply(state)
}

/// Symbolic hop: where a word sends a lattice point, and the phase `ω^k`
/// it picks up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Hop {
    pub point: PhasePoint,
    pub phase_exponent: ModInt,
}

/// Rewrites particle factors into commuting collective ones:
/// `X1 = Xr^{1/2} Xc^{1/2}`, `X2 = Xr^{-1/2} Xc^{1/2}`, `Z1 = Zr Zc`,
/// `Z2 = Zr^{-1} Zc`. Exponents are residues, so `1/2` is the modular half.
fn collective_factors(f: &Factor, d: Prime) -> Result<Vec<(Pauli, Mode, ModInt)>> {
    let k = d.residue(f.power);
    let mode = f.mode.ok_or_else(|| {
        Error::WordParse(format!("factor `{f}` needs a mode (c, r, 1 or 2)"))
    })?;
    Ok(match (f.op, mode) {
        (op, Mode::Center) => vec![(op, Mode::Center, k)],
        (op, Mode::Relative) => vec![(op, Mode::Relative, k)],
        (Pauli::X, Mode::Particle(Particle::One)) => {
            vec![(Pauli::X, Mode::Relative, k.half()), (Pauli::X, Mode::Center, k.half())]
        }
        (Pauli::X, Mode::Particle(Particle::Two)) => {
            vec![(Pauli::X, Mode::Relative, -k.half()), (Pauli::X, Mode::Center, k.half())]
        }
        (Pauli::Z, Mode::Particle(Particle::One)) => {
            vec![(Pauli::Z, Mode::Relative, k), (Pauli::Z, Mode::Center, k)]
        }
        (Pauli::Z, Mode::Particle(Particle::Two)) => {
            vec![(Pauli::Z, Mode::Relative, -k), (Pauli::Z, Mode::Center, k)]
        }
    })
}

/// Applies a word to the lattice state `|q⟩_c |p;0⟩_r` in exact arithmetic:
///
/// * `Xc^k`: `q → q + k`
/// * `Zc^k`: phase `+= k q`
/// * `Xr^k`: phase `+= k p`
/// * `Zr^k`: `p → p - k`
pub fn hop(pt: PhasePoint, word: &Word) -> Result<Hop> {
    let d = pt.modulus();
    let (mut q, mut p) = (pt.q, pt.p);
    let mut phase = ModInt::zero(d);
    for f in word.acting_order() {
        for (op, mode, k) in collective_factors(f, d)?.into_iter().rev() {
            match (op, mode) {
                (Pauli::X, Mode::Center) => q += k,
                (Pauli::Z, Mode::Center) => phase += k * q,
                (Pauli::X, Mode::Relative) => phase += k * p,
                (Pauli::Z, Mode::Relative) => p -= k,
                _ => unreachable!("collective_factors yields c/r modes only"),
            }
        }
    }
    Ok(Hop { point: PhasePoint { q, p }, phase_exponent: phase })
}

/// The dense-vector reading of a hop, found by overlap search.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DenseHop {
    pub point: Option<PhasePoint>,
    pub phase_exponent: Option<ModInt>,
    /// `|⟨lattice(point)|W|lattice(start)⟩|²`.
    pub fidelity: f64,
    pub max_error: f64,
}

/// The lattice states of one dimension with the dense operators, for
/// reading hops off full state vectors.
#[derive(Debug, Clone)]
pub struct DenseLattice {
    ops: CollectiveOps,
    roots: RootsOfUnity,
    states: Vec<Ket>,
}

impl DenseLattice {
    pub fn new(d: Prime) -> Self {
        Self {
            ops: CollectiveOps::new(d),
            roots: RootsOfUnity::new(d),
            states: PhasePoint::all(d).into_iter().map(lattice_state).collect(),
        }
    }

    pub fn ops(&self) -> &CollectiveOps {
        &self.ops
    }

    pub fn state(&self, pt: PhasePoint) -> &Ket {
        &self.states[pt.q.index() * pt.modulus().dim() + pt.p.index()]
    }

    /// Applies the word's dense matrix to the lattice state at `pt`.
    pub fn hop(&self, pt: PhasePoint, word: &Word, tol: f64) -> Result<DenseHop> {
        let op = self.ops.word_operator(word)?;
        Ok(self.hop_with(&op, pt, tol))
    }

    pub fn hop_with(&self, op: &UnitaryOp, pt: PhasePoint, tol: f64) -> DenseHop {
        let image = op.apply(self.state(pt)).expect("d² operator");
        self.locate(&image, tol)
    }

    /// Finds the lattice point whose state matches `image` up to a phase.
    pub fn locate(&self, image: &Ket, tol: f64) -> DenseHop {
        let d = self.ops.prime();
        let (cand, m) = PhasePoint::all(d)
            .into_iter()
            .map(|cand| {
                let m = equal_up_to_global_phase(self.state(cand), image, tol)
                    .expect("same dimension");
                (cand, m)
            })
            .max_by(|a, b| a.1.overlap.total_cmp(&b.1.overlap))
            .expect("at least one lattice point");
        let phase_exponent = if m.equal {
            self.roots.exponent_of(C64::from_polar(1.0, m.phase), 1e-6)
        } else {
            None
        };
        DenseHop {
            point: m.equal.then_some(cand),
            phase_exponent,
            fidelity: m.fidelity(),
            max_error: m.max_error,
        }
    }
}
