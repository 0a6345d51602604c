//! Named verification suites. Each check reduces to one worst-case absolute
//! error; a row passes iff that error is below the tolerance.
//!
//! Checks run in parallel; rows come back in a fixed order (dimension, then
//! suite, then check), so reports are reproducible.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::collective::{
    factorize_cb_mes, local_action, point_state, DenseLattice, PhasePoint, PointBasis,
};
use crate::error::{Error, Result};
use crate::geometry::{
    mub_from_lines, predicted_factor, schmidt_inversion_check, Line, MubLabel, SchmidtInversion,
};
use crate::mes::{build_relabeling, mes_basis, mes_element, qutrit_example_states, universal_state};
use crate::modring::Prime;
use crate::random::{random_ket, random_word};
use crate::schwinger::{family_errors, mub_basis, mub_eigen_residual, mub_family, BasisLabel, RawLabel};
use crate::state::{
    equal_up_to_global_phase, mes_error, orthonormality_error, partial_trace, schmidt_decompose,
    Ket, Particle, UnitaryOp, C64,
};
use crate::word::Word;

/// Error reported when a check finds a structural mismatch (wrong label,
/// wrong point, missing factor) rather than a numerical deviation.
pub const MISMATCH: f64 = 1.0;

/// Tolerance for deciding which label, point or factor a state is. Pass or
/// fail is then decided by the numerical error against the caller's `tol`,
/// so a tiny `tol` reports tiny errors instead of mismatches.
pub const IDENTIFY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    All,
    Mub,
    Mes,
    Collective,
    Lines,
}

impl Suite {
    pub const PARTS: [Suite; 4] = [Suite::Mub, Suite::Mes, Suite::Collective, Suite::Lines];

    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => Self::PARTS.to_vec(),
            s => vec![s],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "mub" => Ok(Suite::Mub),
            "mes" => Ok(Suite::Mes),
            "collective" => Ok(Suite::Collective),
            "lines" => Ok(Suite::Lines),
            _ => Err(Error::InvalidLabel(format!("unknown suite `{s}`"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::All => "all",
            Suite::Mub => "mub",
            Suite::Mes => "mes",
            Suite::Collective => "collective",
            Suite::Lines => "lines",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub check: String,
    pub d: u64,
    /// Space-separated `key=value` pairs, empty when the check covers the
    /// whole dimension.
    pub params: String,
    pub max_error: f64,
    pub pass: bool,
    #[serde(skip)]
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub tol: f64,
    pub rows: Vec<ReportRow>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| !r.pass)
    }
}

type CheckFn = Box<dyn Fn() -> f64 + Send + Sync>;

struct Task {
    check: &'static str,
    d: Prime,
    params: String,
    run: CheckFn,
}

fn task(check: &'static str, d: Prime, params: String, run: impl Fn() -> f64 + Send + Sync + 'static) -> Task {
    Task { check, d, params, run: Box::new(run) }
}

fn run_tasks(tasks: Vec<Task>, tol: f64) -> VerificationReport {
    let rows = tasks
        .into_par_iter()
        .map(|t| {
            let start = Instant::now();
            let max_error = (t.run)();
            ReportRow {
                check: t.check.to_string(),
                d: t.d.get(),
                params: t.params,
                // NaN fails.
                pass: max_error < tol,
                max_error,
                runtime_ms: start.elapsed().as_secs_f64() * 1e3,
            }
        })
        .collect();
    VerificationReport { tol, rows }
}

/// Number of random words in the randomized hop check.
pub const RANDOM_WORDS: usize = 100;

/// Runs `suite` for every dimension in `dims`. `seed` drives the random
/// controls; the same seed gives the same rows.
pub fn run_suite(suite: Suite, dims: &[Prime], tol: f64, seed: u64) -> VerificationReport {
    let mut tasks = Vec::new();
    for &d in dims {
        for part in suite.parts() {
            match part {
                Suite::Mub => mub_tasks(d, IDENTIFY_TOL, &mut tasks),
                Suite::Mes => mes_tasks(d, seed, &mut tasks),
                Suite::Collective => collective_tasks(d, IDENTIFY_TOL, seed, &mut tasks),
                Suite::Lines => line_tasks(d, IDENTIFY_TOL, &mut tasks),
                Suite::All => unreachable!("expanded by parts()"),
            }
        }
    }
    run_tasks(tasks, tol)
}

fn kets(states: Vec<crate::schwinger::MubState>) -> Vec<Ket> {
    states.into_iter().map(|s| s.vector).collect()
}

fn mub_tasks(d: Prime, tol: f64, out: &mut Vec<Task>) {
    for b in BasisLabel::all(d) {
        out.push(task("mub.orthonormal", d, format!("b={b}"), move || {
            orthonormality_error(&kets(mub_basis(b, d))).unwrap_or(MISMATCH)
        }));
        out.push(task("mub.eigen", d, format!("b={b}"), move || {
            d.residues().map(|m| mub_eigen_residual(b, m)).fold(0.0, f64::max)
        }));
    }
    out.push(task("mub.unbiased", d, String::new(), move || {
        let family: Vec<Vec<Ket>> = mub_family(d).into_iter().map(kets).collect();
        family_errors(&family).map_or(MISMATCH, |(_, u)| u)
    }));
    out.push(task("mub.from-lines", d, String::new(), move || from_lines_error(d, tol)));
}

/// Worst deviation of the line-extracted family from the direct family
/// under the label map `m ↦ m/2`, `b ↦ b/4`.
fn from_lines_error(d: Prime, tol: f64) -> f64 {
    let Ok(family) = mub_from_lines(d, tol) else {
        return MISMATCH;
    };
    let mut worst = 0.0f64;
    for pencil in &family {
        for (m, ket) in d.residues().zip(&pencil.states) {
            let want = predicted_factor(Line::new(pencil.orientation, m));
            match equal_up_to_global_phase(&want.vector, ket, tol) {
                Ok(r) if r.equal => worst = worst.max(r.max_error),
                _ => return MISMATCH,
            }
        }
    }
    worst
}

fn rng_for(d: Prime, seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ d.get())
}

fn mes_tasks(d: Prime, seed: u64, out: &mut Vec<Task>) {
    for b in BasisLabel::all(d) {
        let params = format!("b={b} b'={b}");
        out.push(task("mes.gram", d, params.clone(), move || {
            let states: Vec<Ket> = mes_basis(b, b, d).into_iter().map(|e| e.vector).collect();
            orthonormality_error(&states).unwrap_or(MISMATCH)
        }));
        out.push(task("mes.maximal", d, params, move || {
            mes_basis(b, b, d).iter().map(|e| maximal_entanglement_error(&e.vector)).fold(0.0, f64::max)
        }));
    }
    out.push(task("mes.universal", d, String::new(), move || universal_error(d)));
    // Negative control: error 0 when a random state is rejected.
    out.push(task("mes.control-random", d, format!("seed={seed}"), move || {
        let state = random_ket(d.dim() * d.dim(), &mut rng_for(d, seed));
        match mes_error(&state) {
            Ok(e) if e > IDENTIFY_TOL => 0.0,
            _ => MISMATCH,
        }
    }));
    if d.get() == 3 {
        out.push(task("mes.relabel-example", d, String::new(), relabel_example_error));
    }
}

/// Larger of the reduced-state deviation from `I/d` and the Schmidt
/// coefficients' deviation from `1/√d`.
pub fn maximal_entanglement_error(state: &Ket) -> f64 {
    let Ok(rdm) = mes_error(state) else {
        return MISMATCH;
    };
    let Ok(s) = schmidt_decompose(state) else {
        return MISMATCH;
    };
    let target = 1.0 / (s.coefficients.len() as f64).sqrt();
    s.coefficients.iter().map(|c| (c - target).abs()).fold(rdm, f64::max)
}

/// Worst pairwise `1 - F` and amplitude deviation among the d+1 universal
/// states.
fn universal_error(d: Prime) -> f64 {
    let states: Vec<Ket> = BasisLabel::all(d).into_iter().map(|b| universal_state(b, d)).collect();
    let mut worst = 0.0f64;
    for (i, a) in states.iter().enumerate() {
        for b in &states[i + 1..] {
            let m = equal_up_to_global_phase(a, b, f64::INFINITY).expect("same dimension");
            worst = worst.max((1.0 - m.fidelity()).abs()).max(m.max_error);
        }
    }
    worst
}

/// The qutrit relabeling: `U` against its closed form, and `(I ⊗ U)`
/// carrying `Σ|n⟩|v_n⟩/√3` to `Σ|n⟩|n⟩/√3`.
pub fn relabel_example_error() -> f64 {
    let d = Prime::new(3).expect("3 is prime");
    let states = qutrit_example_states();
    let targets: Vec<_> = d.residues().collect();
    let Ok(map) = build_relabeling(&states, &targets) else {
        return MISMATCH;
    };
    let h = 1.0 / 2f64.sqrt();
    let expected = [[h, h, 0.0], [h, -h, 0.0], [0.0, 0.0, 1.0]];
    let mut worst = 0.0f64;
    for (i, row) in expected.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            worst = worst.max((map.u.matrix()[(i, j)] - C64::new(x, 0.0)).norm());
        }
    }
    let partnered = paired_sum(&states);
    let image = UnitaryOp::identity(3).kron(&map.u).apply(&partnered).expect("d² state");
    let target = universal_state(BasisLabel::Cb, d);
    let m = equal_up_to_global_phase(&target, &image, f64::INFINITY).expect("same dimension");
    worst.max(m.max_error).max((1.0 - m.fidelity()).abs())
}

/// `d^{-1/2} Σ_n |n⟩ ⊗ partners[n]`.
fn paired_sum(partners: &[Ket]) -> Ket {
    let d = partners.len();
    let mut acc = nalgebra::DVector::<C64>::zeros(d * d);
    for (n, v) in partners.iter().enumerate() {
        acc += Ket::basis(d, n).as_vector().kronecker(v.as_vector());
    }
    Ket::from_vector(acc).expect("nonzero")
}

fn collective_tasks(d: Prime, tol: f64, seed: u64, out: &mut Vec<Task>) {
    out.push(task("collective.factorization", d, String::new(), move || {
        PhasePoint::all(d)
            .into_iter()
            .map(|pt| {
                let f = factorize_cb_mes(pt, tol);
                if f.phase_exponent == Some(-(pt.q * pt.p)) {
                    f.matched.max_error.max((1.0 - f.matched.fidelity()).abs())
                } else {
                    MISMATCH
                }
            })
            .fold(0.0, f64::max)
    }));
    for (basis, name) in [(PointBasis::Plus, "plus"), (PointBasis::Minus, "minus")] {
        out.push(task("collective.points-orthonormal", d, format!("basis={name}"), move || {
            orthonormality_error(&points(d, basis)).unwrap_or(MISMATCH)
        }));
        out.push(task("collective.points-mes", d, format!("basis={name}"), move || {
            points(d, basis).iter().map(maximal_entanglement_error).fold(0.0, f64::max)
        }));
    }
    out.push(task("collective.conjugate", d, String::new(), move || conjugate_bases_error(d)));
    out.push(task("collective.hop", d, String::new(), move || generator_hop_error(d, tol)));
    let params = format!("seed={seed} words={RANDOM_WORDS}");
    out.push(task("collective.random-words", d, params, move || {
        let lattice = DenseLattice::new(d);
        let mut rng = rng_for(d, seed);
        (0..RANDOM_WORDS)
            .map(|_| hop_agreement_error(&lattice, &random_word(d.dim(), 6, &mut rng), tol))
            .fold(0.0, f64::max)
    }));
    out.push(task("collective.local-action", d, String::new(), move || local_action_error(d, tol)));
}

fn points(d: Prime, basis: PointBasis) -> Vec<Ket> {
    PhasePoint::all(d).into_iter().map(|pt| point_state(pt, basis)).collect()
}

/// Worst `| |⟨plus|minus⟩| - 1/d |` over the full overlap table.
pub fn conjugate_bases_error(d: Prime) -> f64 {
    let plus = points(d, PointBasis::Plus);
    let minus = points(d, PointBasis::Minus);
    let target = 1.0 / d.dim() as f64;
    plus.iter()
        .flat_map(|a| minus.iter().map(move |b| a.inner(b).expect("same dimension")))
        .map(|z| (z.norm() - target).abs())
        .fold(0.0, f64::max)
}

/// Symbolic hop against the dense oracle for every single-factor word and
/// the two-factor example, at every lattice point.
fn generator_hop_error(d: Prime, tol: f64) -> f64 {
    let lattice = DenseLattice::new(d);
    let words = ["Xc", "Zc", "Xr", "Zr", "X1", "Z1", "X2", "Z2", "Xc^2 Xr^6"];
    let mut worst = 0.0f64;
    for w in words {
        let word: Word = w.parse().expect("fixed word");
        worst = worst.max(hop_agreement_error(&lattice, &word, tol));
    }
    worst
}

/// Worst disagreement between the symbolic and dense hop of `word` over
/// all lattice points.
pub fn hop_agreement_error(lattice: &DenseLattice, word: &Word, tol: f64) -> f64 {
    let d = lattice.ops().prime();
    let Ok(op) = lattice.ops().word_operator(word) else {
        return MISMATCH;
    };
    let mut worst = 0.0f64;
    for pt in PhasePoint::all(d) {
        let Ok(sym) = crate::collective::hop(pt, word) else {
            return MISMATCH;
        };
        let dense = lattice.hop_with(&op, pt, tol);
        if dense.point != Some(sym.point) || dense.phase_exponent != Some(sym.phase_exponent) {
            return MISMATCH;
        }
        worst = worst.max(dense.max_error).max((1.0 - dense.fidelity).abs());
    }
    worst
}

/// `X₁²` on `|R⟩ = |0;0⟩_c|0⟩_r`: both reduced states unchanged, and the
/// image is `|0;0⟩_c|1⟩_r` up to a phase.
fn local_action_error(d: Prime, tol: f64) -> f64 {
    let r = universal_state(BasisLabel::Cb, d);
    let word: Word = "X1^2".parse().expect("fixed word");
    let Ok(out) = local_action(&r, Particle::One, &word) else {
        return MISMATCH;
    };
    let mut worst = 0.0f64;
    for keep in [Particle::One, Particle::Two] {
        let before = partial_trace(&r, keep).expect("d² state");
        let after = partial_trace(&out, keep).expect("d² state");
        worst = worst.max(before.trace_distance(&after).unwrap_or(MISMATCH));
    }
    let shifted = point_state(PhasePoint::new(d.residue(1), d.residue(0)), PointBasis::Plus);
    let m = equal_up_to_global_phase(&shifted, &out, tol).expect("same dimension");
    worst.max(m.max_error).max((1.0 - m.fidelity()).abs())
}

fn line_tasks(d: Prime, tol: f64, out: &mut Vec<Task>) {
    for line in Line::all(d) {
        out.push(task("lines.factorization", d, format!("b={} m={}", line.b, line.m), move || {
            line_error(line, tol)
        }));
    }
}

/// The lattice line state must be rank 1 with particle 2 at the predicted
/// MUB label and particle 1 at its tilde.
pub fn line_error(line: Line, tol: f64) -> f64 {
    line_report_error(&schmidt_inversion_check(line, tol))
}

/// [`line_error`] for an existing report.
pub fn line_report_error(r: &SchmidtInversion) -> f64 {
    let want = predicted_factor(r.line);
    let labels_ok = r.particle_two == Some(MubLabel { b: want.b, m: want.m }) && r.tilde_partner;
    if r.passed() && labels_ok {
        r.max_error
    } else {
        r.max_error.max(MISMATCH)
    }
}

/// A maximally entangled basis on disk: the shape written by
/// `qmes gen-mes-basis --format json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MesBasisDocument {
    pub d: u64,
    pub b: RawLabel,
    pub b_prime: RawLabel,
    pub states: Vec<MesDocumentState>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MesDocumentState {
    pub q: u64,
    pub p: u64,
    pub ket: Ket,
}

fn raw_label(b: BasisLabel) -> RawLabel {
    match b {
        BasisLabel::Cb => RawLabel::Name("cb".into()),
        BasisLabel::Slope(s) => RawLabel::Index(s.value()),
    }
}

impl MesBasisDocument {
    pub fn generate(b: BasisLabel, b_prime: BasisLabel, d: Prime) -> Self {
        let states = mes_basis(b, b_prime, d)
            .into_iter()
            .map(|e| MesDocumentState { q: e.q.value(), p: e.p.value(), ket: e.vector })
            .collect();
        Self { d: d.get(), b: raw_label(b), b_prime: raw_label(b_prime), states }
    }
}

/// Re-verifies a document offline. Malformed headers (composite `d`,
/// unknown labels) are errors; content problems become failing rows.
pub fn verify_mes_document(doc: &MesBasisDocument, tol: f64) -> Result<VerificationReport> {
    let d = Prime::new(doc.d)?;
    let b = doc.b.resolve(d)?;
    let b_prime = doc.b_prime.resolve(d)?;
    let params = format!("b={b} b'={b_prime}");
    let n = d.dim();

    let mut seen = vec![false; n * n];
    let mut coverage = 0.0;
    for s in &doc.states {
        let slot = (s.q < doc.d && s.p < doc.d).then(|| s.q as usize * n + s.p as usize);
        match slot {
            Some(i) if !std::mem::replace(&mut seen[i], true) && s.ket.dim() == n * n => {}
            _ => coverage = MISMATCH,
        }
    }
    if seen.iter().any(|x| !x) {
        coverage = MISMATCH;
    }
    let kets: Vec<Ket> = doc.states.iter().map(|s| s.ket.clone()).collect();
    let gram = if coverage == 0.0 { orthonormality_error(&kets).unwrap_or(MISMATCH) } else { MISMATCH };
    let maximal = kets.iter().map(maximal_entanglement_error).fold(0.0, f64::max);
    let reference = if coverage == 0.0 {
        doc.states
            .iter()
            .map(|s| {
                let want = mes_element(d.residue(s.q as i64), d.residue(s.p as i64), b, b_prime);
                want.vector.max_diff(&s.ket).unwrap_or(MISMATCH)
            })
            .fold(0.0, f64::max)
    } else {
        MISMATCH
    };

    let rows = [
        ("file.coverage", coverage),
        ("file.gram", gram),
        ("file.maximal", maximal),
        ("file.reference", reference),
    ]
    .into_iter()
    .map(|(check, max_error)| ReportRow {
        check: check.to_string(),
        d: d.get(),
        params: params.clone(),
        max_error,
        pass: max_error < tol,
        runtime_ms: 0.0,
    })
    .collect();
    Ok(VerificationReport { tol, rows })
}
