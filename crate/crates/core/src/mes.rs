//! Maximally entangled two-qudit states: the d² element MES basis generated
//! from a pair of single-particle bases, the basis-independent state `|R⟩`,
//! and relabeling unitaries that map one single-particle basis onto the CB.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modring::{ModInt, Prime};
use crate::schwinger::{clock_z, mub_basis, shift_x, tilde, BasisLabel, RootsOfUnity};
use crate::state::{orthonormality_error, Ket, UnitaryOp, C64, DEFAULT_TOL};

/// `|u^{b,b'}_{q,p}⟩ = d^{-1/2} Σ_m |m;b⟩₁ ω^{-mp} |m-q;b'⟩₂`.
#[derive(Debug, Clone, Serialize)]
pub struct MesBasisElement {
    pub q: ModInt,
    pub p: ModInt,
    pub b: BasisLabel,
    #[serde(rename = "b_prime")]
    pub b_prime: BasisLabel,
    #[serde(rename = "ket")]
    pub vector: Ket,
}

fn build_element(
    w: &RootsOfUnity,
    first: &[Ket],
    second: &[Ket],
    q: ModInt,
    p: ModInt,
) -> Ket {
    let d = w.prime();
    let mut acc = nalgebra::DVector::<C64>::zeros(d.dim() * d.dim());
    for m in d.residues() {
        let phase = w.pow(-(m * p));
        let pair = first[m.index()]
            .as_vector()
            .kronecker(second[(m - q).index()].as_vector());
        acc += pair.map(|z| z * phase);
    }
    Ket::from_vector(acc).expect("sum of orthogonal unit terms")
}

fn basis_kets(b: BasisLabel, d: Prime) -> Vec<Ket> {
    mub_basis(b, d).into_iter().map(|s| s.vector).collect()
}

/// One MES basis element.
pub fn mes_element(q: ModInt, p: ModInt, b: BasisLabel, b_prime: BasisLabel) -> MesBasisElement {
    let d = q.modulus();
    let w = RootsOfUnity::new(d);
    let vector = build_element(&w, &basis_kets(b, d), &basis_kets(b_prime, d), q, p);
    MesBasisElement { q, p, b, b_prime, vector }
}

/// All d² elements for the pair `(b, b')`, `q`-major then `p`.
pub fn mes_basis(b: BasisLabel, b_prime: BasisLabel, d: Prime) -> Vec<MesBasisElement> {
    let w = RootsOfUnity::new(d);
    let first = basis_kets(b, d);
    let second = basis_kets(b_prime, d);
    d.residues()
        .flat_map(|q| d.residues().map(move |p| (q, p)))
        .map(|(q, p)| MesBasisElement {
            q,
            p,
            b,
            b_prime,
            vector: build_element(&w, &first, &second, q, p),
        })
        .collect()
}

/// `|R⟩ = d^{-1/2} Σ_m |m;b⟩₁ |m̃;b̃⟩₂`, the same vector for every `b`.
pub fn universal_state(b: BasisLabel, d: Prime) -> Ket {
    let mut acc = nalgebra::DVector::<C64>::zeros(d.dim() * d.dim());
    for s in mub_basis(b, d) {
        acc += s.vector.as_vector().kronecker(tilde(&s.vector).as_vector());
    }
    Ket::from_vector(acc).expect("nonzero")
}

/// A unitary `U` with `U |source_k⟩ = |target_k⟩` (a CB vector).
#[derive(Debug, Clone)]
pub struct RelabelingMap {
    pub sources: Vec<Ket>,
    pub targets: Vec<ModInt>,
    pub u: UnitaryOp,
}

impl RelabelingMap {
    /// `Z̄ = U† Z U`: the clock whose eigenvectors are the source states,
    /// `Z̄ |source_k⟩ = ω^{target_k} |source_k⟩`.
    pub fn z_bar(&self) -> UnitaryOp {
        let d = self.targets[0].modulus();
        self.u.dagger().conjugate(&clock_z(d)).expect("same dimension")
    }

    /// `X̄ = U† X U`: shifts `|source_k⟩` to the source labelled `target_k + 1`.
    pub fn x_bar(&self) -> UnitaryOp {
        let d = self.targets[0].modulus();
        self.u.dagger().conjugate(&shift_x(d)).expect("same dimension")
    }
}

fn check_complete_orthonormal(sources: &[Ket]) -> Result<usize> {
    let d = sources.len();
    if let Some(bad) = sources.iter().find(|k| k.dim() != d) {
        return Err(Error::DimMismatch { expected: d, found: bad.dim() });
    }
    let max_error = orthonormality_error(sources)?;
    if max_error > DEFAULT_TOL {
        return Err(Error::NotOrthonormal { max_error });
    }
    Ok(d)
}

pub fn build_relabeling(sources: &[Ket], targets: &[ModInt]) -> Result<RelabelingMap> {
    let d = check_complete_orthonormal(sources)?;
    if targets.len() != d || targets.iter().any(|t| t.modulus().dim() != d) {
        return Err(Error::NotBijective(d));
    }
    let mut seen = vec![false; d];
    for t in targets {
        if std::mem::replace(&mut seen[t.index()], true) {
            return Err(Error::NotBijective(d));
        }
    }
    // U = Σ_k |t_k⟩⟨v_k|
    let mut m = DMatrix::<C64>::zeros(d, d);
    for (v, t) in sources.iter().zip(targets) {
        for (j, a) in v.amplitudes().iter().enumerate() {
            m[(t.index(), j)] += a.conj();
        }
    }
    Ok(RelabelingMap {
        sources: sources.to_vec(),
        targets: targets.to_vec(),
        u: UnitaryOp::from_matrix_unchecked(m),
    })
}

/// `F = Σ_k |v_k⟩ λ_k ⟨v_k|`; unit-modulus eigenvalues are required.
pub fn diagonalizer_for(sources: &[Ket], spectrum: &[C64]) -> Result<UnitaryOp> {
    let d = check_complete_orthonormal(sources)?;
    if spectrum.len() != d {
        return Err(Error::DimMismatch { expected: d, found: spectrum.len() });
    }
    let mut f = DMatrix::<C64>::zeros(d, d);
    for (v, &lambda) in sources.iter().zip(spectrum) {
        let col = v.as_vector();
        f += (col * col.adjoint()).map(|z| z * lambda);
    }
    UnitaryOp::new(f)
}

/// The d = 3 example states `(|0⟩+|1⟩)/√2, (|0⟩-|1⟩)/√2, |2⟩`.
pub fn qutrit_example_states() -> Vec<Ket> {
    let h = 1.0 / 2f64.sqrt();
    let c = |x: f64| C64::new(x, 0.0);
    vec![
        Ket::new(vec![c(h), c(h), c(0.0)]).expect("unit"),
        Ket::new(vec![c(h), c(-h), c(0.0)]).expect("unit"),
        Ket::basis(3, 2),
    ]
}
