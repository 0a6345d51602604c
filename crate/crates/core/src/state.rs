//! Pure states and operators on one qudit (dimension d) and two qudits
//! (dimension d²).
//!
//! Two-qudit amplitudes use a flat index with particle 1 as the high digit:
//! `|n1⟩|n2⟩` sits at `n1 * d + n2`. Since d is prime it is never a perfect
//! square, so a vector's length alone tells one qudit from two.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default absolute tolerance for every floating-point comparison.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Which particle of a two-qudit system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Particle {
    One,
    Two,
}

impl Particle {
    pub fn other(self) -> Self {
        match self {
            Particle::One => Particle::Two,
            Particle::Two => Particle::One,
        }
    }
}

/// Local dimension `d` of a two-qudit space of total dimension `dim = d²`.
pub fn local_dim(dim: usize) -> Result<usize> {
    let d = (dim as f64).sqrt().round() as usize;
    if d * d == dim && d > 1 {
        Ok(d)
    } else {
        Err(Error::DimMismatch { expected: d * d, found: dim })
    }
}

fn max_abs(m: impl IntoIterator<Item = C64>) -> f64 {
    m.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amps: DVector<C64>,
}

impl Ket {
    /// Wraps amplitudes that must already have unit norm.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let v = DVector::from_vec(amps);
        let norm = v.norm();
        if (norm - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amps: v })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        Self::from_vector(DVector::from_vec(amps))
    }

    pub fn from_vector(v: DVector<C64>) -> Result<Self> {
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amps: v.unscale(norm) })
    }

    /// Internal constructor for vectors that are unit-norm by construction.
    pub(crate) fn from_unit_vector(amps: DVector<C64>) -> Self {
        debug_assert!((amps.norm() - 1.0).abs() < 1e-8, "norm {}", amps.norm());
        Self { amps }
    }

    /// The computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        Self { amps: v }
    }

    /// The equal superposition of all basis vectors.
    pub fn uniform(dim: usize) -> Self {
        let a = 1.0 / (dim as f64).sqrt();
        Self { amps: DVector::from_element(dim, C64::new(a, 0.0)) }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.amps.as_slice()
    }

    pub fn as_vector(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn into_vector(self) -> DVector<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Ket) -> Result<C64> {
        self.same_dim(other)?;
        Ok(self.amps.dotc(&other.amps))
    }

    /// Multiplies by a unit-modulus scalar.
    pub fn with_phase(&self, phase: C64) -> Ket {
        Ket { amps: self.amps.scale_complex(phase) }
    }

    /// Complex conjugate of the computational-basis amplitudes.
    pub fn conj(&self) -> Ket {
        Ket { amps: self.amps.map(|z| z.conj()) }
    }

    /// Largest elementwise `|self_i - other_i|`.
    pub fn max_diff(&self, other: &Ket) -> Result<f64> {
        self.same_dim(other)?;
        Ok(max_abs(self.amps.iter().zip(other.amps.iter()).map(|(a, b)| a - b)))
    }

    /// Rotates the global phase so that the first amplitude with modulus
    /// above `tol` is real and positive. Intended for printing only.
    pub fn canonical_phase(&self, tol: f64) -> Ket {
        match self.amps.iter().find(|z| z.norm() > tol) {
            Some(z) => self.with_phase(z.conj() / z.norm()),
            None => self.clone(),
        }
    }

    /// Reshapes a two-qudit state into `M[n1][n2]`.
    pub fn amplitude_matrix(&self) -> Result<DMatrix<C64>> {
        let d = local_dim(self.dim())?;
        Ok(DMatrix::from_fn(d, d, |i, j| self.amps[i * d + j]))
    }

    fn same_dim(&self, other: &Ket) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexArrays {
    dim: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for Ket {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexArrays {
            dim: self.dim(),
            re: self.amps.iter().map(|z| z.re).collect(),
            im: self.amps.iter().map(|z| z.im).collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Ket {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ComplexArrays::deserialize(de)?;
        if raw.re.len() != raw.dim || raw.im.len() != raw.dim {
            return Err(D::Error::custom("`re`/`im` lengths do not match `dim`"));
        }
        let amps = raw.re.into_iter().zip(raw.im).map(|(r, i)| C64::new(r, i)).collect();
        Ket::new(amps).map_err(D::Error::custom)
    }
}

/// `a ⊗ b` for two single-qudit states of equal dimension.
pub fn tensor(a: &Ket, b: &Ket) -> Result<Ket> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(Ket { amps: a.amps.kronecker(&b.amps) })
}

/// A reduced (or any) density operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOp {
    matrix: DMatrix<C64>,
}

impl DensityOp {
    pub fn from_matrix(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(ket: &Ket) -> Self {
        Self { matrix: &ket.amps * ket.amps.adjoint() }
    }

    /// `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: DMatrix::identity(dim, dim).unscale(dim as f64) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        max_abs((&self.matrix - self.matrix.adjoint()).iter().copied())
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.matrix + self.matrix.adjoint()).unscale(2.0);
        let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Hermitian, unit trace and positive semidefinite, each within `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        self.hermiticity_error() < tol
            && (self.trace() - C64::new(1.0, 0.0)).norm() < tol
            && self.eigenvalues().first().is_none_or(|&e| e > -tol)
    }

    /// Largest elementwise deviation from another operator.
    pub fn max_diff(&self, other: &DensityOp) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(max_abs((&self.matrix - &other.matrix).iter().copied()))
    }

    /// `½ Σ |λ_i(self - other)|`.
    pub fn trace_distance(&self, other: &DensityOp) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), found: other.dim() });
        }
        let diff = DensityOp { matrix: &self.matrix - &other.matrix };
        Ok(0.5 * diff.eigenvalues().iter().map(|e| e.abs()).sum::<f64>())
    }
}

impl Serialize for DensityOp {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        // Row-major, matching the flat-index convention of kets.
        let n = self.dim();
        let flat: Vec<C64> = (0..n * n).map(|k| self.matrix[(k / n, k % n)]).collect();
        ComplexArrays {
            dim: n,
            re: flat.iter().map(|z| z.re).collect(),
            im: flat.iter().map(|z| z.im).collect(),
        }
        .serialize(ser)
    }
}

/// Reduced density operator of the `keep` particle.
pub fn partial_trace(state: &Ket, keep: Particle) -> Result<DensityOp> {
    let m = state.amplitude_matrix()?;
    let matrix = match keep {
        // ρ1[i][j] = Σ_k ψ[i,k] ψ*[j,k]
        Particle::One => &m * m.adjoint(),
        // ρ2[i][j] = Σ_k ψ[k,i] ψ*[k,j]
        Particle::Two => m.transpose() * m.map(|z| z.conj()),
    };
    Ok(DensityOp { matrix })
}

/// `state = Σ_k coefficients[k] · left[k] ⊗ right[k]`.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Nonnegative, descending.
    pub coefficients: Vec<f64>,
    pub left: Vec<Ket>,
    pub right: Vec<Ket>,
}

impl SchmidtDecomposition {
    pub fn reconstruct(&self) -> DVector<C64> {
        let d = self.left[0].dim();
        let mut v = DVector::zeros(d * d);
        for ((c, l), r) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            v += l.amps.kronecker(&r.amps).scale(*c);
        }
        v
    }

    /// Number of coefficients above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.coefficients.iter().filter(|&&c| c > tol).count()
    }
}

/// Schmidt decomposition through the singular value factorization of the
/// `d × d` amplitude matrix.
// nalgebra 0.35's complex SVD is wrong on some rank-deficient inputs (the
// all-equal matrix recomposes with O(1) error), so faer does the
// factorization.
pub fn schmidt_decompose(state: &Ket) -> Result<SchmidtDecomposition> {
    let m = state.amplitude_matrix()?;
    let d = m.nrows();
    let svd = faer::Mat::<C64>::from_fn(d, d, |i, j| m[(i, j)])
        .svd()
        .expect("SVD of a finite matrix converges");
    let (u, v, s) = (svd.U(), svd.V(), svd.S().column_vector());

    // M = Σ σ_k u_k v_k†: the particle-2 factor is conj(v_k). Values come
    // back nonincreasing.
    let coefficients = (0..d).map(|k| s[k].re).collect();
    let left = (0..d)
        .map(|k| Ket { amps: DVector::from_fn(d, |i, _| u[(i, k)]) })
        .collect();
    let right = (0..d)
        .map(|k| Ket { amps: DVector::from_fn(d, |j, _| v[(j, k)].conj()) })
        .collect();
    Ok(SchmidtDecomposition { coefficients, left, right })
}

/// How far a two-qudit state is from maximal entanglement: the larger of the
/// two reduced density operators' elementwise deviation from `I/d`.
pub fn mes_error(state: &Ket) -> Result<f64> {
    let d = local_dim(state.dim())?;
    let mixed = DensityOp::maximally_mixed(d);
    let e1 = partial_trace(state, Particle::One)?.max_diff(&mixed)?;
    let e2 = partial_trace(state, Particle::Two)?.max_diff(&mixed)?;
    Ok(e1.max(e2))
}

/// True iff both reduced density operators equal `I/d` within `tol`.
pub fn is_mes(state: &Ket, tol: f64) -> Result<bool> {
    Ok(mes_error(state)? < tol)
}

/// The Schmidt-spectrum reading of maximal entanglement: every coefficient
/// equals `1/√d` within `tol`.
pub fn is_mes_by_schmidt(state: &Ket, tol: f64) -> Result<bool> {
    let s = schmidt_decompose(state)?;
    let target = 1.0 / (s.coefficients.len() as f64).sqrt();
    Ok(s.coefficients.iter().all(|c| (c - target).abs() < tol))
}

/// Outcome of comparing two kets modulo a global phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMatch {
    pub equal: bool,
    /// `arg⟨a|b⟩` in `[0, 2π)`, so that `b ≈ e^{i·phase} a`.
    pub phase: f64,
    /// `|⟨a|b⟩|`.
    pub overlap: f64,
    /// `max_i |e^{i·phase} a_i - b_i|`.
    pub max_error: f64,
}

impl PhaseMatch {
    pub fn fidelity(&self) -> f64 {
        self.overlap * self.overlap
    }
}

pub fn equal_up_to_global_phase(a: &Ket, b: &Ket, tol: f64) -> Result<PhaseMatch> {
    let ip = a.inner(b)?;
    let phase = ip.arg().rem_euclid(TAU);
    let rotated = a.with_phase(C64::from_polar(1.0, phase));
    let max_error = rotated.max_diff(b)?;
    let overlap = ip.norm();
    Ok(PhaseMatch {
        equal: (overlap - 1.0).abs() < tol && max_error < tol,
        phase,
        overlap,
        max_error,
    })
}

/// A unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOp {
    matrix: DMatrix<C64>,
}

impl UnitaryOp {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let op = Self { matrix };
        let max_error = op.unitarity_error();
        if max_error > DEFAULT_TOL {
            return Err(Error::NotUnitary { max_error });
        }
        Ok(op)
    }

    /// Internal constructor for matrices that are unitary by construction.
    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<C64>) -> Self {
        debug_assert!(matrix.is_square());
        Self { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: DMatrix::identity(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    /// `max |U†U - I|` elementwise.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.dim();
        let g = self.matrix.adjoint() * &self.matrix;
        max_abs((g - DMatrix::<C64>::identity(n, n)).iter().copied())
    }

    pub fn dagger(&self) -> Self {
        Self { matrix: self.matrix.adjoint() }
    }

    /// `self · rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &UnitaryOp) -> Result<Self> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), found: rhs.dim() });
        }
        Ok(Self { matrix: &self.matrix * &rhs.matrix })
    }

    /// `self^k`; negative powers use the adjoint.
    pub fn pow(&self, k: i64) -> Self {
        let mut base = if k < 0 { self.dagger() } else { self.clone() };
        let mut acc = UnitaryOp::identity(self.dim());
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc.matrix = &acc.matrix * &base.matrix;
            }
            e >>= 1;
            if e > 0 {
                base.matrix = &base.matrix * &base.matrix;
            }
        }
        acc
    }

    pub fn kron(&self, rhs: &UnitaryOp) -> Self {
        Self { matrix: self.matrix.kronecker(&rhs.matrix) }
    }

    /// `self · v · self†`.
    pub fn conjugate(&self, v: &UnitaryOp) -> Result<Self> {
        self.compose(v)?.compose(&self.dagger())
    }

    pub fn apply(&self, ket: &Ket) -> Result<Ket> {
        if self.dim() != ket.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), found: ket.dim() });
        }
        Ok(Ket { amps: &self.matrix * &ket.amps })
    }

    pub fn scale(&self, phase: C64) -> Self {
        Self { matrix: self.matrix.scale_complex(phase) }
    }

    pub fn max_diff(&self, other: &UnitaryOp) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(max_abs((&self.matrix - &other.matrix).iter().copied()))
    }
}

/// Largest elementwise deviation of the Gram matrix `⟨v_i|v_j⟩` from the
/// identity.
pub fn orthonormality_error(vectors: &[Ket]) -> Result<f64> {
    let mut worst = 0.0f64;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate() {
            let expected = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a.inner(b)? - C64::new(expected, 0.0)).norm());
        }
    }
    Ok(worst)
}

trait ScaleComplex {
    fn scale_complex(&self, z: C64) -> Self;
}

impl ScaleComplex for DMatrix<C64> {
    fn scale_complex(&self, z: C64) -> Self {
        self.map(|a| a * z)
    }
}

impl ScaleComplex for DVector<C64> {
    fn scale_complex(&self, z: C64) -> Self {
        self.map(|a| a * z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn omega(d: usize, k: usize) -> C64 {
        C64::from_polar(1.0, TAU * k as f64 / d as f64)
    }

    fn bell_like(d: usize) -> Ket {
        let mut amps = vec![c(0.0, 0.0); d * d];
        for m in 0..d {
            amps[m * d + m] = c(1.0 / (d as f64).sqrt(), 0.0);
        }
        Ket::new(amps).unwrap()
    }

    #[test]
    fn tensor_flat_index() {
        let t = tensor(&Ket::basis(3, 0), &Ket::basis(3, 1)).unwrap();
        assert_eq!(t, Ket::basis(9, 1));
        let t = tensor(&Ket::basis(5, 2), &Ket::basis(5, 3)).unwrap();
        assert_eq!(t, Ket::basis(25, 13));
    }

    #[test]
    fn tensor_uniform_is_uniform() {
        let t = tensor(&Ket::uniform(5), &Ket::uniform(5)).unwrap();
        assert!(t.max_diff(&Ket::uniform(25)).unwrap() < 1e-15);
    }

    #[test]
    fn tensor_dim_mismatch() {
        let err = tensor(&Ket::uniform(3), &Ket::uniform(5)).unwrap_err();
        assert_eq!(err, Error::DimMismatch { expected: 3, found: 5 });
    }

    #[test]
    fn summed_diagonal_tensor_products() {
        let d = 7;
        let mut acc = DVector::zeros(d * d);
        for m in 0..d {
            acc += tensor(&Ket::basis(d, m), &Ket::basis(d, m)).unwrap().into_vector();
        }
        let state = Ket::from_vector(acc).unwrap();
        assert!(state.max_diff(&bell_like(d)).unwrap() < 1e-15);
    }

    #[test]
    fn partial_trace_of_product() {
        let state = tensor(&Ket::basis(3, 0), &Ket::basis(3, 0)).unwrap();
        let rho = partial_trace(&state, Particle::One).unwrap();
        let proj = DensityOp::pure(&Ket::basis(3, 0));
        assert_eq!(rho.max_diff(&proj).unwrap(), 0.0);
    }

    #[test]
    fn partial_trace_distinguishes_particles() {
        let state = tensor(&Ket::basis(3, 1), &Ket::uniform(3)).unwrap();
        let rho1 = partial_trace(&state, Particle::One).unwrap();
        let rho2 = partial_trace(&state, Particle::Two).unwrap();
        assert!(rho1.max_diff(&DensityOp::pure(&Ket::basis(3, 1))).unwrap() < 1e-15);
        assert!(rho2.max_diff(&DensityOp::pure(&Ket::uniform(3))).unwrap() < 1e-15);
    }

    #[test]
    fn partial_trace_of_diagonal_sum_is_maximally_mixed() {
        for d in [3, 5, 7] {
            let state = bell_like(d);
            for keep in [Particle::One, Particle::Two] {
                let rho = partial_trace(&state, keep).unwrap();
                assert!(rho.max_diff(&DensityOp::maximally_mixed(d)).unwrap() < 1e-15);
            }
        }
    }

    #[test]
    fn partial_trace_rejects_non_square_dim() {
        let err = partial_trace(&Ket::uniform(5), Particle::One).unwrap_err();
        assert!(matches!(err, Error::DimMismatch { .. }));
    }

    #[test]
    fn schmidt_of_product_state() {
        let state = tensor(&Ket::basis(3, 2), &Ket::uniform(3)).unwrap();
        let s = schmidt_decompose(&state).unwrap();
        assert!((s.coefficients[0] - 1.0).abs() < 1e-12);
        assert!(s.coefficients[1..].iter().all(|&x| x < 1e-12));
        assert_eq!(s.rank(1e-10), 1);
    }

    #[test]
    fn schmidt_of_two_term_product_superposition() {
        // (|00⟩ + |01⟩)/√2 = |0⟩ ⊗ (|0⟩ + |1⟩)/√2
        let h = 1.0 / 2f64.sqrt();
        let mut amps = vec![c(0.0, 0.0); 9];
        amps[0] = c(h, 0.0);
        amps[1] = c(h, 0.0);
        let s = schmidt_decompose(&Ket::new(amps).unwrap()).unwrap();
        assert!((s.coefficients[0] - 1.0).abs() < 1e-12);
        assert!(s.coefficients[1] < 1e-12);
    }

    #[test]
    fn schmidt_of_uniform_product() {
        for d in [3, 5, 7, 11] {
            let state = tensor(&Ket::uniform(d), &Ket::uniform(d)).unwrap();
            let s = schmidt_decompose(&state).unwrap();
            assert!((s.coefficients[0] - 1.0).abs() < 1e-12, "d={d}");
            assert!(s.coefficients[1] < 1e-12, "d={d}");
            assert!(Ket { amps: s.reconstruct() }.max_diff(&state).unwrap() < 1e-12);
        }
    }

    #[test]
    fn schmidt_reconstructs_and_is_descending() {
        let d = 3;
        let amps: Vec<C64> = (0..d * d).map(|k| c(k as f64 + 1.0, (k * k) as f64 - 3.0)).collect();
        let state = Ket::normalized(amps).unwrap();
        let s = schmidt_decompose(&state).unwrap();
        assert!(s.coefficients.windows(2).all(|w| w[0] >= w[1]));
        let back = Ket { amps: s.reconstruct() };
        assert!(back.max_diff(&state).unwrap() < 1e-12);
        assert!(orthonormality_error(&s.left).unwrap() < 1e-12);
        assert!(orthonormality_error(&s.right).unwrap() < 1e-12);
    }

    #[test]
    fn mes_examples() {
        assert!(is_mes(&bell_like(5), DEFAULT_TOL).unwrap());
        assert!(!is_mes(&Ket::basis(9, 0), DEFAULT_TOL).unwrap());

        // Two diagonal slots in d = 3: Schmidt spectrum (1/√2, 1/√2, 0).
        let h = 1.0 / 2f64.sqrt();
        let mut amps = vec![c(0.0, 0.0); 9];
        amps[0] = c(h, 0.0);
        amps[4] = c(h, 0.0);
        let state = Ket::new(amps).unwrap();
        assert!(!is_mes(&state, DEFAULT_TOL).unwrap());
        assert!(!is_mes_by_schmidt(&state, DEFAULT_TOL).unwrap());
        let s = schmidt_decompose(&state).unwrap();
        assert!((s.coefficients[0] - h).abs() < 1e-12);
        assert!((s.coefficients[1] - h).abs() < 1e-12);
        assert!(s.coefficients[2].abs() < 1e-12);
    }

    #[test]
    fn global_phase_examples() {
        for d in [3usize, 5, 7] {
            let a = Ket::uniform(d).with_phase(omega(d, 1));
            let b = a.with_phase(omega(d, 2));
            let m = equal_up_to_global_phase(&a, &b, DEFAULT_TOL).unwrap();
            assert!(m.equal);
            let expected = (4.0 * std::f64::consts::PI / d as f64).rem_euclid(TAU);
            assert!((m.phase - expected).abs() < 1e-12, "d={d} phase={}", m.phase);
        }
        let m = equal_up_to_global_phase(&Ket::basis(3, 0), &Ket::basis(3, 1), DEFAULT_TOL).unwrap();
        assert!(!m.equal);
        assert_eq!(m.overlap, 0.0);
    }

    #[test]
    fn global_phase_dim_mismatch() {
        let err = equal_up_to_global_phase(&Ket::uniform(3), &Ket::uniform(9), 1e-10).unwrap_err();
        assert!(matches!(err, Error::DimMismatch { .. }));
    }

    #[test]
    fn canonical_phase_makes_leading_amplitude_positive() {
        let k = Ket::normalized(vec![c(0.0, 0.0), c(0.0, 2.0), c(1.0, 1.0)]).unwrap();
        let canon = k.canonical_phase(DEFAULT_TOL);
        assert_eq!(canon.amplitudes()[0], c(0.0, 0.0));
        assert!(canon.amplitudes()[1].im.abs() < 1e-15);
        assert!(canon.amplitudes()[1].re > 0.0);
    }

    #[test]
    fn ket_constructor_checks_norm() {
        assert!(matches!(
            Ket::new(vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(Ket::normalized(vec![c(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn ket_json_shape() {
        let k = Ket::basis(3, 1).with_phase(c(0.0, 1.0));
        let json = serde_json::to_string(&k).unwrap();
        assert_eq!(json, r#"{"dim":3,"re":[0.0,0.0,0.0],"im":[0.0,1.0,0.0]}"#);
        let back: Ket = serde_json::from_str(&json).unwrap();
        assert_eq!(back, k);
        assert!(serde_json::from_str::<Ket>(r#"{"dim":2,"re":[1.0],"im":[0.0]}"#).is_err());
    }

    #[test]
    fn density_json_is_row_major() {
        let rho = DensityOp::pure(&Ket::normalized(vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap());
        let v: serde_json::Value = serde_json::to_value(&rho).unwrap();
        assert_eq!(v["dim"], 3);
        // ρ[0][1] = a0 a1* = -i/2
        assert!((v["im"][1].as_f64().unwrap() + 0.5).abs() < 1e-15);
        assert!((v["im"][3].as_f64().unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn unitary_checks() {
        let not_unitary = DMatrix::from_element(2, 2, c(1.0, 0.0));
        assert!(matches!(UnitaryOp::new(not_unitary), Err(Error::NotUnitary { .. })));
        let id = UnitaryOp::identity(4);
        assert_eq!(id.unitarity_error(), 0.0);
        assert_eq!(id.pow(-3), id);
    }

    #[test]
    fn trace_distance_of_orthogonal_projectors() {
        let a = DensityOp::pure(&Ket::basis(3, 0));
        let b = DensityOp::pure(&Ket::basis(3, 1));
        assert!((a.trace_distance(&b).unwrap() - 1.0).abs() < 1e-12);
        assert!(a.trace_distance(&a).unwrap() < 1e-15);
    }
}
