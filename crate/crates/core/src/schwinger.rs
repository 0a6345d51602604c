//! Clock and shift operators and the d+1 mutually unbiased bases they
//! generate in odd prime dimension.
//!
//! The computational basis (CB) holds the eigenvectors of the clock `Z`.
//! The remaining d bases are
//!
//! ```text
//! |m;b⟩ = d^{-1/2} Σ_n ω^{b n² - n m} |n⟩,    b, m = 0..d-1,
//! ```
//!
//! the eigenvectors of `ω^b X Z^{2b}` with eigenvalue `ω^m`. The quadratic
//! exponent is reduced mod d before it is turned into a phase, so every
//! amplitude is an exact table lookup of a d-th root of unity.

use std::f64::consts::TAU;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modring::{ModInt, Prime};
use crate::state::{Ket, UnitaryOp, C64};

/// The d-th roots of unity `ω^k = exp(2πik/d)`, computed once.
#[derive(Debug, Clone)]
pub struct RootsOfUnity {
    d: Prime,
    table: Vec<C64>,
}

impl RootsOfUnity {
    pub fn new(d: Prime) -> Self {
        let n = d.dim();
        let table = (0..n).map(|k| C64::from_polar(1.0, TAU * k as f64 / n as f64)).collect();
        Self { d, table }
    }

    pub fn prime(&self) -> Prime {
        self.d
    }

    pub fn pow(&self, k: ModInt) -> C64 {
        debug_assert_eq!(k.modulus(), self.d);
        self.table[k.index()]
    }

    pub fn pow_i(&self, k: i64) -> C64 {
        self.pow(self.d.residue(k))
    }

    /// The exponent `k` with `z ≈ ω^k`, if `z` lies within `tol` of a root.
    pub fn exponent_of(&self, z: C64, tol: f64) -> Option<ModInt> {
        self.d.residues().find(|&k| (self.pow(k) - z).norm() < tol)
    }
}

/// Converts an angle to the exponent of ω it represents, if any.
pub fn phase_exponent(phase: f64, d: Prime, tol: f64) -> Option<ModInt> {
    RootsOfUnity::new(d).exponent_of(C64::from_polar(1.0, phase), tol)
}

/// `Z|n⟩ = ω^n |n⟩`.
pub fn clock_z(d: Prime) -> UnitaryOp {
    let w = RootsOfUnity::new(d);
    let diag = DVector::from_iterator(d.dim(), d.residues().map(|n| w.pow(n)));
    UnitaryOp::from_matrix_unchecked(DMatrix::from_diagonal(&diag))
}

/// `X|n⟩ = |n+1⟩`, wrapping `|d-1⟩` to `|0⟩`.
pub fn shift_x(d: Prime) -> UnitaryOp {
    let n = d.dim();
    let m = DMatrix::from_fn(n, n, |row, col| {
        if row == (col + 1) % n { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
    });
    UnitaryOp::from_matrix_unchecked(m)
}

/// Names one of the d+1 mutually unbiased bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisLabel {
    /// The computational basis.
    Cb,
    /// The basis `|m;b⟩` with quadratic coefficient `b`.
    Slope(ModInt),
}

impl BasisLabel {
    /// All d+1 labels: CB first, then `0..d-1`.
    pub fn all(d: Prime) -> Vec<BasisLabel> {
        std::iter::once(BasisLabel::Cb).chain(d.residues().map(BasisLabel::Slope)).collect()
    }

    /// Accepts `cb` (any case), `cbdot`, `0̈`, or an integer in `0..d`.
    pub fn parse(s: &str, d: Prime) -> Result<BasisLabel> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("cb") || t.eq_ignore_ascii_case("cbdot") || t == "0\u{308}" {
            return Ok(BasisLabel::Cb);
        }
        match t.parse::<u64>() {
            Ok(b) if b < d.get() => Ok(BasisLabel::Slope(d.residue(b as i64))),
            _ => Err(Error::InvalidLabel(s.to_string())),
        }
    }

    pub fn slope(self) -> Option<ModInt> {
        match self {
            BasisLabel::Cb => None,
            BasisLabel::Slope(b) => Some(b),
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Cb => write!(f, "cb"),
            BasisLabel::Slope(b) => write!(f, "{b}"),
        }
    }
}

impl Serialize for BasisLabel {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BasisLabel::Cb => ser.serialize_str("cb"),
            BasisLabel::Slope(b) => ser.serialize_u64(b.value()),
        }
    }
}

/// Wire form of a basis label before the dimension is known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawLabel {
    Index(u64),
    Name(String),
}

impl RawLabel {
    pub fn resolve(&self, d: Prime) -> Result<BasisLabel> {
        match self {
            RawLabel::Index(b) => BasisLabel::parse(&b.to_string(), d),
            RawLabel::Name(s) => BasisLabel::parse(s, d),
        }
    }
}

/// One state of one mutually unbiased basis.
#[derive(Debug, Clone, Serialize)]
pub struct MubState {
    pub b: BasisLabel,
    pub m: ModInt,
    #[serde(rename = "ket")]
    pub vector: Ket,
}

impl MubState {
    /// The state with every CB amplitude conjugated.
    pub fn tilde(&self) -> Ket {
        tilde(&self.vector)
    }
}

/// CB amplitudes conjugated. The CB is taken to be real.
pub fn tilde(ket: &Ket) -> Ket {
    ket.conj()
}

fn mub_vector(w: &RootsOfUnity, b: BasisLabel, m: ModInt) -> Ket {
    let d = w.prime();
    match b {
        BasisLabel::Cb => Ket::basis(d.dim(), m.index()),
        BasisLabel::Slope(b) => {
            let norm = 1.0 / (d.dim() as f64).sqrt();
            let amps = d.residues().map(|n| w.pow(b * n * n - n * m) * norm);
            Ket::from_unit_vector(DVector::from_iterator(d.dim(), amps))
        }
    }
}

pub fn mub_state(b: BasisLabel, m: ModInt) -> MubState {
    if let BasisLabel::Slope(s) = b {
        assert_eq!(s.modulus(), m.modulus(), "basis and state labels in different dimensions");
    }
    let w = RootsOfUnity::new(m.modulus());
    MubState { b, m, vector: mub_vector(&w, b, m) }
}

/// The d states of basis `b`, ordered by `m`.
pub fn mub_basis(b: BasisLabel, d: Prime) -> Vec<MubState> {
    let w = RootsOfUnity::new(d);
    d.residues().map(|m| MubState { b, m, vector: mub_vector(&w, b, m) }).collect()
}

/// All d+1 bases in [`BasisLabel::all`] order.
pub fn mub_family(d: Prime) -> Vec<Vec<MubState>> {
    BasisLabel::all(d).into_iter().map(|b| mub_basis(b, d)).collect()
}

/// The operator whose eigenbasis is basis `b`: `ω^b X Z^{2b}`, or `Z` for
/// the CB.
pub fn mub_operator(b: BasisLabel, d: Prime) -> UnitaryOp {
    match b {
        BasisLabel::Cb => clock_z(d),
        BasisLabel::Slope(s) => {
            let w = RootsOfUnity::new(d);
            let xz = shift_x(d)
                .compose(&clock_z(d).pow(2 * s.value() as i64))
                .expect("same dimension");
            xz.scale(w.pow(s))
        }
    }
}

/// `max |ω^b X Z^{2b} |m;b⟩ - ω^m |m;b⟩|`.
pub fn mub_eigen_residual(b: BasisLabel, m: ModInt) -> f64 {
    let state = mub_state(b, m);
    eigen_residual(b, m, &state.vector)
}

/// Eigen-relation residual for an arbitrary candidate vector.
pub fn eigen_residual(b: BasisLabel, m: ModInt, vector: &Ket) -> f64 {
    let d = m.modulus();
    let w = RootsOfUnity::new(d);
    let image = mub_operator(b, d).apply(vector).expect("single-qudit vector");
    image.max_diff(&vector.with_phase(w.pow(m))).expect("same dimension")
}

pub fn mub_eigen_check(b: BasisLabel, m: ModInt, tol: f64) -> bool {
    mub_eigen_residual(b, m) < tol
}

/// For a family of bases: the worst Gram-matrix deviation within any basis
/// and the worst deviation of any cross-basis overlap modulus from `1/√d`.
pub fn family_errors(family: &[Vec<Ket>]) -> Result<(f64, f64)> {
    let mut ortho = 0.0f64;
    let mut unbiased = 0.0f64;
    for (i, basis) in family.iter().enumerate() {
        ortho = ortho.max(crate::state::orthonormality_error(basis)?);
        let target = 1.0 / (basis.len() as f64).sqrt();
        for other in &family[i + 1..] {
            for u in basis {
                for v in other {
                    unbiased = unbiased.max((u.inner(v)?.norm() - target).abs());
                }
            }
        }
    }
    Ok((ortho, unbiased))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::DEFAULT_TOL;

    fn p(d: u64) -> Prime {
        Prime::new(d).unwrap()
    }

    #[test]
    fn clock_and_shift_action() {
        let d = p(3);
        let w = RootsOfUnity::new(d);
        let z1 = clock_z(d).apply(&Ket::basis(3, 1)).unwrap();
        assert!(z1.max_diff(&Ket::basis(3, 1).with_phase(w.pow_i(1))).unwrap() < 1e-15);
        for d in [3, 5, 7] {
            let x = shift_x(p(d)).apply(&Ket::basis(d as usize, d as usize - 1)).unwrap();
            assert_eq!(x, Ket::basis(d as usize, 0));
        }
    }

    #[test]
    fn clock_and_shift_have_order_d() {
        for d in [3, 5, 7, 11] {
            let d = p(d);
            let id = UnitaryOp::identity(d.dim());
            assert!(clock_z(d).pow(d.get() as i64).max_diff(&id).unwrap() < 1e-12);
            assert_eq!(shift_x(d).pow(d.get() as i64), id);
        }
    }

    #[test]
    fn weyl_commutation() {
        // With Z|n⟩ = ω^n|n⟩ and X|n⟩ = |n+1⟩: ZX = ω XZ, i.e. XZ = ω^{-1} ZX.
        for d in [3, 5, 7] {
            let d = p(d);
            let w = RootsOfUnity::new(d);
            let (x, z) = (shift_x(d), clock_z(d));
            let xz = x.compose(&z).unwrap();
            let zx = z.compose(&x).unwrap();
            assert!(zx.max_diff(&xz.scale(w.pow_i(1))).unwrap() < 1e-12);
            assert!(xz.max_diff(&zx.scale(w.pow_i(-1))).unwrap() < 1e-12);
            // The opposite ordering of the phase does not hold.
            assert!(xz.max_diff(&zx.scale(w.pow_i(1))).unwrap() > 0.1);
        }
    }

    #[test]
    fn mub_state_examples() {
        let d = p(5);
        let s = mub_state(BasisLabel::Slope(d.residue(0)), d.residue(0));
        assert!(s.vector.max_diff(&Ket::uniform(5)).unwrap() < 1e-15);

        // d = 3, b = 1, m = 0: exponents n² = 0, 1, 4 ≡ 1.
        let d = p(3);
        let w = RootsOfUnity::new(d);
        let s = mub_state(BasisLabel::Slope(d.residue(1)), d.residue(0));
        let r = 1.0 / 3f64.sqrt();
        let expected = Ket::new(vec![w.pow_i(0) * r, w.pow_i(1) * r, w.pow_i(1) * r]).unwrap();
        assert!(s.vector.max_diff(&expected).unwrap() < 1e-15);

        let cb = mub_state(BasisLabel::Cb, d.residue(2));
        assert_eq!(cb.vector, Ket::basis(3, 2));
    }

    #[test]
    fn family_shape_and_unbiasedness() {
        for d in [3, 5, 7, 11] {
            let d = p(d);
            let fam = mub_family(d);
            assert_eq!(fam.len(), d.dim() + 1);
            assert_eq!(fam.iter().map(Vec::len).sum::<usize>(), d.dim() * (d.dim() + 1));
            let kets: Vec<Vec<Ket>> =
                fam.iter().map(|b| b.iter().map(|s| s.vector.clone()).collect()).collect();
            let (ortho, unbiased) = family_errors(&kets).unwrap();
            assert!(ortho < 1e-12, "d={d} ortho={ortho}");
            assert!(unbiased < 1e-12, "d={d} unbiased={unbiased}");
        }
    }

    #[test]
    fn eigen_relation_all_labels() {
        for d in [3, 5, 7] {
            let d = p(d);
            for b in BasisLabel::all(d) {
                for m in d.residues() {
                    assert!(mub_eigen_check(b, m, DEFAULT_TOL), "d={d} b={b} m={m}");
                }
            }
        }
    }

    #[test]
    fn eigen_relation_negative_control() {
        let d = p(7);
        let b = BasisLabel::Slope(d.residue(3));
        let m = d.residue(2);
        let mut amps = mub_state(b, m).vector.amplitudes().to_vec();
        amps[0] += C64::new(1e-3, 0.0);
        let perturbed = Ket::normalized(amps).unwrap();
        assert!(eigen_residual(b, m, &perturbed) > DEFAULT_TOL);
        // Wrong eigenvalue label also fails.
        assert!(eigen_residual(b, d.residue(3), &mub_state(b, m).vector) > 0.1);
    }

    #[test]
    fn tilde_examples() {
        let d = p(5);
        assert_eq!(tilde(&Ket::basis(5, 3)), Ket::basis(5, 3));
        for b in d.residues() {
            for m in d.residues() {
                let s = mub_state(BasisLabel::Slope(b), m);
                // Conjugation negates both exponents: |m;b⟩~ = |-m;-b⟩.
                let negated = mub_state(BasisLabel::Slope(-b), -m);
                assert!(s.tilde().max_diff(&negated.vector).unwrap() < 1e-15);
                assert_eq!(tilde(&s.tilde()), s.vector);
            }
        }
    }

    #[test]
    fn label_parsing() {
        let d = p(5);
        assert_eq!(BasisLabel::parse("cb", d).unwrap(), BasisLabel::Cb);
        assert_eq!(BasisLabel::parse("CBdot", d).unwrap(), BasisLabel::Cb);
        assert_eq!(BasisLabel::parse("3", d).unwrap(), BasisLabel::Slope(d.residue(3)));
        assert!(matches!(BasisLabel::parse("5", d), Err(Error::InvalidLabel(_))));
        assert!(matches!(BasisLabel::parse("x", d), Err(Error::InvalidLabel(_))));
        assert_eq!(BasisLabel::all(d).len(), 6);
    }

    #[test]
    fn exponent_recovery() {
        let d = p(7);
        let w = RootsOfUnity::new(d);
        for k in d.residues() {
            assert_eq!(w.exponent_of(w.pow(k), 1e-9), Some(k));
        }
        assert_eq!(w.exponent_of(C64::new(0.0, 1.0), 1e-9), None);
        assert_eq!(phase_exponent(TAU * 5.0 / 7.0, d, 1e-9), Some(d.residue(5)));
    }
}
