use std::fs;
use std::path::Path;

use serde::Serialize;

use qmes::collective::{hop as symbolic_hop, DenseLattice, PhasePoint, PointBasis};
use qmes::geometry::{schmidt_inversion_check_with, Line, MubLabel};
use qmes::mes::mes_basis;
use qmes::schwinger::{mub_family, MubState};
use qmes::verify::{
    line_report_error, run_suite, verify_mes_document, MesBasisDocument, Suite, VerificationReport,
    IDENTIFY_TOL,
};
use qmes::word::Word;
use qmes::{BasisLabel, ModInt, Prime};

use crate::output::{float, render, sig15, CliResult};
use crate::{Common, Outcome, Points};

const DEFAULT_DIMS: [u64; 3] = [3, 5, 7];

fn dims(requested: &[u64]) -> CliResult<Vec<Prime>> {
    let list = if requested.is_empty() { &DEFAULT_DIMS[..] } else { requested };
    Ok(list.iter().map(|&d| Prime::new(d)).collect::<qmes::Result<_>>()?)
}

fn verdict(pass: bool) -> Outcome {
    if pass {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

#[derive(Serialize)]
struct MubFamilyDoc {
    d: u64,
    bases: Vec<MubBasisDoc>,
}

#[derive(Serialize)]
struct MubBasisDoc {
    b: BasisLabel,
    states: Vec<MubState>,
}

pub fn gen_mub(c: &Common, d: u64) -> CliResult<Outcome> {
    let d = Prime::new(d)?;
    let doc = MubFamilyDoc {
        d: d.get(),
        bases: mub_family(d)
            .into_iter()
            .map(|states| MubBasisDoc { b: states[0].b, states })
            .collect(),
    };
    render(c, &doc, &["d", "b", "m", "n", "re", "im"], || {
        let mut rows = Vec::new();
        for basis in &doc.bases {
            for s in &basis.states {
                for (n, z) in s.vector.amplitudes().iter().enumerate() {
                    rows.push(vec![
                        d.to_string(),
                        s.b.to_string(),
                        s.m.to_string(),
                        n.to_string(),
                        float(z.re),
                        float(z.im),
                    ]);
                }
            }
        }
        rows
    })?;
    Ok(Outcome::Pass)
}

pub fn gen_mes_basis(c: &Common, d: u64, b: &str, b_prime: &str) -> CliResult<Outcome> {
    let d = Prime::new(d)?;
    let b = BasisLabel::parse(b, d)?;
    let b_prime = BasisLabel::parse(b_prime, d)?;
    let doc = MesBasisDocument::generate(b, b_prime, d);
    let header = ["d", "b", "b_prime", "q", "p", "n", "re", "im"];
    render(c, &doc, &header, || {
        let mut rows = Vec::new();
        for e in mes_basis(b, b_prime, d) {
            for (n, z) in e.vector.amplitudes().iter().enumerate() {
                rows.push(vec![
                    d.to_string(),
                    b.to_string(),
                    b_prime.to_string(),
                    e.q.to_string(),
                    e.p.to_string(),
                    n.to_string(),
                    float(z.re),
                    float(z.im),
                ]);
            }
        }
        rows
    })?;
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct ReportDoc<'a> {
    tol: f64,
    pass: bool,
    rows: Vec<RowDoc<'a>>,
}

#[derive(Serialize)]
struct RowDoc<'a> {
    check: &'a str,
    d: u64,
    params: &'a str,
    max_error: f64,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    runtime_ms: Option<f64>,
}

fn render_report(c: &Common, report: &VerificationReport, timings: bool) -> CliResult<Outcome> {
    let doc = ReportDoc {
        tol: sig15(report.tol),
        pass: report.passed(),
        rows: report
            .rows
            .iter()
            .map(|r| RowDoc {
                check: &r.check,
                d: r.d,
                params: &r.params,
                max_error: sig15(r.max_error),
                pass: r.pass,
                runtime_ms: timings.then(|| (r.runtime_ms * 1e3).round() / 1e3),
            })
            .collect(),
    };
    let mut header = vec!["check", "d", "params", "max_error", "pass"];
    if timings {
        header.push("runtime_ms");
    }
    render(c, &doc, &header, || {
        report
            .rows
            .iter()
            .map(|r| {
                let mut row = vec![
                    r.check.clone(),
                    r.d.to_string(),
                    r.params.clone(),
                    float(r.max_error),
                    r.pass.to_string(),
                ];
                if timings {
                    row.push(format!("{:.3}", r.runtime_ms));
                }
                row
            })
            .collect()
    })?;
    Ok(verdict(report.passed()))
}

pub fn verify(c: &Common, d: &[u64], suite: &str, seed: u64, timings: bool) -> CliResult<Outcome> {
    let suite: Suite = suite.parse()?;
    let report = run_suite(suite, &dims(d)?, c.tol, seed);
    render_report(c, &report, timings)
}

pub fn verify_file(c: &Common, path: &Path, timings: bool) -> CliResult<Outcome> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let doc: MesBasisDocument =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let report = verify_mes_document(&doc, c.tol)?;
    render_report(c, &report, timings)
}

#[derive(Serialize)]
struct HopDoc {
    d: u64,
    word: String,
    start: PhasePoint,
    agree: bool,
    steps: Vec<HopStep>,
}

#[derive(Serialize)]
struct HopStep {
    step: usize,
    point: PhasePoint,
    phase_exponent: ModInt,
    dense_point: Option<PhasePoint>,
    dense_phase_exponent: Option<ModInt>,
    fidelity: f64,
    max_error: f64,
    agree: bool,
}

pub fn hop(c: &Common, d: u64, q: i64, p: i64, word: &str, steps: usize) -> CliResult<Outcome> {
    let d = Prime::new(d)?;
    let word: Word = word.parse()?;
    let start = PhasePoint::new(d.residue(q), d.residue(p));
    let lattice = DenseLattice::new(d);
    let op = lattice.ops().word_operator(&word)?;

    let mut point = start;
    let mut phase = ModInt::zero(d);
    let mut state = lattice.state(start).clone();
    let mut trajectory = Vec::with_capacity(steps);
    for step in 1..=steps {
        let h = symbolic_hop(point, &word)?;
        point = h.point;
        phase += h.phase_exponent;
        state = op.apply(&state)?;
        let dense = lattice.locate(&state, IDENTIFY_TOL);
        let agree = dense.point == Some(point)
            && dense.phase_exponent == Some(phase)
            && dense.max_error < c.tol;
        trajectory.push(HopStep {
            step,
            point,
            phase_exponent: phase,
            dense_point: dense.point,
            dense_phase_exponent: dense.phase_exponent,
            fidelity: sig15(dense.fidelity),
            max_error: sig15(dense.max_error),
            agree,
        });
    }
    let agree = trajectory.iter().all(|s| s.agree);
    let doc = HopDoc { d: d.get(), word: word.to_string(), start, agree, steps: trajectory };
    let header = [
        "step", "q", "p", "phase_exponent", "dense_q", "dense_p", "dense_phase_exponent", "fidelity",
        "max_error", "agree",
    ];
    let opt = |x: Option<ModInt>| x.map_or(String::new(), |v| v.to_string());
    render(c, &doc, &header, || {
        doc.steps
            .iter()
            .map(|s| {
                vec![
                    s.step.to_string(),
                    s.point.q.to_string(),
                    s.point.p.to_string(),
                    s.phase_exponent.to_string(),
                    opt(s.dense_point.map(|x| x.q)),
                    opt(s.dense_point.map(|x| x.p)),
                    opt(s.dense_phase_exponent),
                    float(s.fidelity),
                    float(s.max_error),
                    s.agree.to_string(),
                ]
            })
            .collect()
    })?;
    Ok(verdict(agree))
}

#[derive(Serialize)]
struct LineRow {
    d: u64,
    b: BasisLabel,
    m: ModInt,
    points: PointBasis,
    schmidt_rank_ok: bool,
    second_singular_value: f64,
    particle_one: Option<MubLabel>,
    particle_two: Option<MubLabel>,
    tilde_partner: bool,
    global_phase_exponent: Option<ModInt>,
    max_error: f64,
    /// Absent for the exploratory plus realization.
    #[serde(skip_serializing_if = "Option::is_none")]
    pass: Option<bool>,
}

pub fn lines(c: &Common, d: &[u64], points: Points) -> CliResult<Outcome> {
    let basis = match points {
        Points::Lattice => PointBasis::Minus,
        Points::Plus => PointBasis::Plus,
    };
    let mut rows = Vec::new();
    for d in dims(d)? {
        for line in Line::all(d) {
            let r = schmidt_inversion_check_with(line, basis, IDENTIFY_TOL);
            let pass = (points == Points::Lattice).then(|| line_report_error(&r) < c.tol);
            rows.push(LineRow {
                d: d.get(),
                b: line.b,
                m: line.m,
                points: basis,
                schmidt_rank_ok: r.second_singular_value < c.tol,
                second_singular_value: sig15(r.second_singular_value),
                particle_one: r.particle_one,
                particle_two: r.particle_two,
                tilde_partner: r.tilde_partner,
                global_phase_exponent: r.global_phase_exponent,
                max_error: sig15(r.max_error),
                pass,
            });
        }
    }
    let header = [
        "d",
        "b",
        "m",
        "schmidt_rank_ok",
        "factor_label_b",
        "factor_label_m",
        "global_phase_exponent",
        "max_error",
    ];
    render(c, &rows, &header, || {
        rows.iter()
            .map(|r| {
                vec![
                    r.d.to_string(),
                    r.b.to_string(),
                    r.m.to_string(),
                    r.schmidt_rank_ok.to_string(),
                    r.particle_two.map_or(String::new(), |l| l.b.to_string()),
                    r.particle_two.map_or(String::new(), |l| l.m.to_string()),
                    r.global_phase_exponent.map_or(String::new(), |e| e.to_string()),
                    float(r.max_error),
                ]
            })
            .collect()
    })?;
    Ok(verdict(rows.iter().all(|r| r.pass != Some(false))))
}
