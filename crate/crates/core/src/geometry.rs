//! Straight lines in the d × d lattice of phase points and the states they
//! carry.
//!
//! A line of slope `b` and offset `m` is the point set `p = bq - m`; the CB
//! orientation is the vertical family `q = m`. Each orientation splits the
//! d² points into d parallel lines.
//!
//! The line state is the normalized sum of the lattice states
//! `|q⟩_c |p;0⟩_r` along the line. It is a two-particle product:
//!
//! ```text
//! |L(m, b)⟩ = tilde(|m/2; b/4⟩)_1 ⊗ |m/2; b/4⟩_2,     |L(m, cb)⟩ = |m⟩_1 |m⟩_2
//! ```
//!
//! with no leftover phase. Reading a product state as a sum of d maximally
//! entangled lattice states inverts its Schmidt decomposition.

use std::fmt;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::collective::{point_state, PhasePoint, PointBasis};
use crate::error::{Error, Result};
use crate::modring::{ModInt, Prime};
use crate::schwinger::{family_errors, mub_family, mub_state, phase_exponent, BasisLabel, MubState};
use crate::state::{
    equal_up_to_global_phase, orthonormality_error, schmidt_decompose, tensor, Ket, C64,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Line {
    pub b: BasisLabel,
    pub m: ModInt,
}

impl Line {
    pub fn new(b: BasisLabel, m: ModInt) -> Self {
        if let BasisLabel::Slope(s) = b {
            assert_eq!(s.modulus(), m.modulus(), "slope and offset in different dimensions");
        }
        Self { b, m }
    }

    pub fn modulus(self) -> Prime {
        self.m.modulus()
    }

    /// The d parallel lines of one orientation, ordered by offset.
    pub fn pencil(b: BasisLabel, d: Prime) -> Vec<Line> {
        d.residues().map(|m| Line::new(b, m)).collect()
    }

    /// All d(d+1) lines, orientation-major in [`BasisLabel::all`] order.
    pub fn all(d: Prime) -> Vec<Line> {
        BasisLabel::all(d).into_iter().flat_map(|b| Line::pencil(b, d)).collect()
    }

    pub fn contains(self, pt: PhasePoint) -> bool {
        match self.b {
            BasisLabel::Cb => pt.q == self.m,
            BasisLabel::Slope(s) => pt.p == s * pt.q - self.m,
        }
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b={} m={}", self.b, self.m)
    }
}

/// The d points of `line`, ordered by `q` (by `p` for the CB orientation).
pub fn line_points(line: Line) -> Vec<PhasePoint> {
    let d = line.modulus();
    match line.b {
        BasisLabel::Cb => d.residues().map(|p| PhasePoint::new(line.m, p)).collect(),
        BasisLabel::Slope(s) => {
            d.residues().map(|q| PhasePoint::new(q, s * q - line.m)).collect()
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LineState {
    pub line: Line,
    #[serde(rename = "ket")]
    pub vector: Ket,
}

/// `d^{-1/2} Σ` of the lattice states on `line`.
pub fn line_state(line: Line) -> LineState {
    line_state_with(line, PointBasis::Minus)
}

/// Line state summed over either realization of the points. Only the
/// lattice (minus) realization is guaranteed to factor into a MUB product.
pub fn line_state_with(line: Line, basis: PointBasis) -> LineState {
    let d = line.modulus().dim();
    let mut sum = nalgebra::DVector::<C64>::zeros(d * d);
    for pt in line_points(line) {
        sum += point_state(pt, basis).as_vector();
    }
    let vector = Ket::from_vector(sum).expect("the point states are orthonormal");
    LineState { line, vector }
}

/// The particle-2 factor of the lattice line state: `|m/2; b/4⟩`, or `|m⟩`
/// for the CB orientation. The particle-1 factor is its tilde.
pub fn predicted_factor(line: Line) -> MubState {
    match line.b {
        BasisLabel::Cb => mub_state(BasisLabel::Cb, line.m),
        BasisLabel::Slope(s) => mub_state(BasisLabel::Slope(s.quarter()), line.m.half()),
    }
}

/// Label of a single-qudit MUB state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MubLabel {
    pub b: BasisLabel,
    pub m: ModInt,
}

/// Finds the MUB state equal to `ket` up to a global phase, by overlap with
/// every member of the family.
pub fn identify_mub(ket: &Ket, d: Prime, tol: f64) -> Option<MubState> {
    mub_family(d).into_iter().flatten().find(|s| {
        equal_up_to_global_phase(&s.vector, ket, tol).is_ok_and(|m| m.equal)
    })
}

/// Outcome of reading a line state as a product of single-particle states.
#[derive(Debug, Clone, Serialize)]
pub struct SchmidtInversion {
    pub line: Line,
    pub points: PointBasis,
    pub second_singular_value: f64,
    pub rank_one: bool,
    pub particle_one: Option<MubLabel>,
    pub particle_two: Option<MubLabel>,
    /// Particle 1 carries the tilde of particle 2's factor.
    pub tilde_partner: bool,
    /// `k` in `|L⟩ = ω^k |f_1⟩|f_2⟩` with the library's MUB phases.
    pub global_phase_exponent: Option<ModInt>,
    /// Worst of the second singular value and the product reconstruction
    /// error.
    pub max_error: f64,
}

impl SchmidtInversion {
    pub fn passed(&self) -> bool {
        self.rank_one && self.global_phase_exponent.is_some()
    }
}

pub fn schmidt_inversion_check(line: Line, tol: f64) -> SchmidtInversion {
    schmidt_inversion_check_with(line, PointBasis::Minus, tol)
}

pub fn schmidt_inversion_check_with(line: Line, points: PointBasis, tol: f64) -> SchmidtInversion {
    let d = line.modulus();
    let state = line_state_with(line, points).vector;
    let schmidt = schmidt_decompose(&state).expect("two-qudit state");
    let second = schmidt.coefficients[1];
    let mut report = SchmidtInversion {
        line,
        points,
        second_singular_value: second,
        rank_one: second < tol,
        particle_one: None,
        particle_two: None,
        tilde_partner: false,
        global_phase_exponent: None,
        max_error: second,
    };
    if !report.rank_one {
        return report;
    }
    let (Some(f1), Some(f2)) = (
        identify_mub(&schmidt.left[0], d, tol),
        identify_mub(&schmidt.right[0], d, tol),
    ) else {
        report.max_error = 1.0;
        return report;
    };
    report.particle_one = Some(MubLabel { b: f1.b, m: f1.m });
    report.particle_two = Some(MubLabel { b: f2.b, m: f2.m });
    report.tilde_partner = equal_up_to_global_phase(&f2.tilde(), &f1.vector, tol)
        .is_ok_and(|m| m.equal);
    let product = tensor(&f1.vector, &f2.vector).expect("same dimension");
    let matched = equal_up_to_global_phase(&product, &state, tol).expect("same dimension");
    report.max_error = second.max(matched.max_error);
    if matched.equal {
        report.global_phase_exponent = phase_exponent(matched.phase, d, 1e-6);
    }
    report
}

/// One orientation's states recovered from line states.
#[derive(Debug, Clone, Serialize)]
pub struct PencilBasis {
    pub orientation: BasisLabel,
    /// Particle-2 factors ordered by line offset, phase-canonicalized.
    pub states: Vec<Ket>,
}

/// Extracts the particle-2 factor of every line state and groups them by
/// orientation into d+1 bases, checking orthonormality and mutual
/// unbiasedness.
pub fn mub_from_lines(d: Prime, tol: f64) -> Result<Vec<PencilBasis>> {
    let mut family = Vec::with_capacity(d.dim() + 1);
    for b in BasisLabel::all(d) {
        let mut states = Vec::with_capacity(d.dim());
        for line in Line::pencil(b, d) {
            let schmidt = schmidt_decompose(&line_state(line).vector)?;
            let second = schmidt.coefficients[1];
            if second >= tol {
                return Err(Error::FactorizationFailed { second });
            }
            states.push(schmidt.right[0].canonical_phase(tol));
        }
        family.push(PencilBasis { orientation: b, states });
    }
    let kets: Vec<Vec<Ket>> = family.iter().map(|p| p.states.clone()).collect();
    let (ortho, unbiased) = family_errors(&kets)?;
    let worst = ortho.max(unbiased);
    if worst >= tol {
        return Err(Error::NotOrthonormal { max_error: worst });
    }
    Ok(family)
}

/// Deviation of `Σ_m |L(m,b)⟩⟨L(m,b)|` from a rank-d orthogonal projector:
/// the larger of `|P² - P|` elementwise and `|tr P - d|`.
pub fn pencil_projector_error(b: BasisLabel, d: Prime) -> f64 {
    let n = d.dim() * d.dim();
    let mut p = DMatrix::<C64>::zeros(n, n);
    for line in Line::pencil(b, d) {
        let v = line_state(line).vector.into_vector();
        p += &v * v.adjoint();
    }
    let idem = (&p * &p - &p).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let trace = (p.trace() - C64::new(d.dim() as f64, 0.0)).norm();
    idem.max(trace)
}

/// Orthonormality error of the d line states of one orientation.
pub fn pencil_orthonormality_error(b: BasisLabel, d: Prime) -> f64 {
    let states: Vec<Ket> = Line::pencil(b, d).into_iter().map(|l| line_state(l).vector).collect();
    orthonormality_error(&states).expect("equal dimensions")
}
