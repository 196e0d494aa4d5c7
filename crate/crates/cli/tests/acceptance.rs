//! Acceptance gate. Prints one PASS/FAIL line per criterion and fails if any
//! criterion is red. Run with
//! `cargo test -p symanzik-cli --test acceptance -- --nocapture`.

use std::fs;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symanzik_cli::{cmd_variation, cmd_verify, VariationArgs, VerifyArgs};
use symanzik_core::corpus::{generate_corpus, CorpusConfig, CorpusEntry, Family};
use symanzik_core::rational::{format_rational, integer, ratio};
use symanzik_core::suite::{run_suite_on, Sections, SuiteConfig, SuiteSummary};
use symanzik_core::symanzik::{psi_det, MomentumAssignment};
use symanzik_core::variation::{boundedness_sweep, decade_grid, PerturbationSpec};
use symanzik_core::{Multigraph, Rational, RationalMatrix};

const ORACLE_POINTS: usize = 50;
const ORACLE_LIMIT: Duration = Duration::from_secs(120);
const SWEEP_LIMIT: Duration = Duration::from_secs(300);
const MIN_SAMPLES: usize = 200;
const MIN_WEIGHT_INSTANCES: u64 = 50;
const MIN_SWEEPS: u64 = 20;
const MATRIX_INSTANCES: u64 = 100;
const K2_INSTANCES: usize = 25;
/// Exact arithmetic throughout: every comparison below is equality.
const TOLERANCE: i64 = 0;

struct Gate {
    lines: Vec<(bool, String)>,
}

impl Gate {
    fn report(&mut self, id: u32, name: &str, pass: bool, detail: String) {
        let line = format!("{} [{id}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        println!("{line}");
        self.lines.push((pass, line));
    }
}

fn run(sections: Sections, corpus: &[CorpusEntry]) -> (SuiteSummary, Duration) {
    let cfg = SuiteConfig {
        sections,
        ..SuiteConfig::default()
    };
    let start = Instant::now();
    let summary = run_suite_on(&cfg, corpus).expect("suite runs");
    (summary, start.elapsed())
}

fn all_pass(s: &SuiteSummary, names: &[&str]) -> bool {
    names.iter().all(|n| {
        let c = s.property(n);
        c.checked > 0 && c.failed() == 0
    })
}

fn counts(s: &SuiteSummary, names: &[&str]) -> String {
    names
        .iter()
        .map(|n| {
            let c = s.property(n);
            format!("{n} {}/{} (skipped {})", c.passed, c.checked, c.skipped)
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// `psi(y) = prod(y) * det(L_0)` where `L_0` is the reduced Laplacian with
/// conductances `1/y_e` (matrix-tree theorem).
fn kirchhoff_psi(g: &Multigraph, y: &[Rational]) -> Rational {
    let n = g.n();
    let mut lap = vec![vec![integer(0); n]; n];
    for (e, edge) in g.edges().iter().enumerate() {
        if edge.is_loop() {
            continue;
        }
        let c = integer(1) / &y[e];
        let (a, b) = (edge.tail, edge.head);
        lap[a][a] += &c;
        lap[b][b] += &c;
        lap[a][b] -= &c;
        lap[b][a] -= &c;
    }
    let reduced: Vec<Vec<Rational>> = lap[1..].iter().map(|r| r[1..].to_vec()).collect();
    let det = if n == 1 {
        integer(1)
    } else {
        RationalMatrix::from_rows(n - 1, reduced).unwrap().det().unwrap()
    };
    y.iter().fold(det, |acc, v| acc * v)
}

fn criterion_1(gate: &mut Gate, corpus: &[CorpusEntry]) {
    let names = ["psi_det_equals_enumeration", "phi_det_equals_enumeration"];
    let (s, elapsed) = run(Sections { oracle: true, ..Sections::NONE }, corpus);
    let samples = corpus.iter().filter(|e| e.family == Family::Sampled).count();
    let expected = (corpus.len() * ORACLE_POINTS) as u64;
    let complete = names.iter().all(|n| s.property(n).checked == expected);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut kirchhoff_ok = 0;
    let step = 10;
    for entry in corpus.iter().step_by(step) {
        let y: Vec<Rational> = (0..entry.graph.m())
            .map(|_| ratio(rng.gen_range(1..=20), rng.gen_range(1..=7)))
            .collect();
        kirchhoff_ok += usize::from(psi_det(&entry.graph, &y).unwrap() == kirchhoff_psi(&entry.graph, &y));
    }
    let kirchhoff_checked = corpus.len().div_ceil(step);

    let pass = all_pass(&s, &names)
        && complete
        && samples >= MIN_SAMPLES
        && elapsed < ORACLE_LIMIT
        && kirchhoff_ok == kirchhoff_checked;
    gate.report(
        1,
        "determinant routes equal enumeration",
        pass,
        format!(
            "{} graphs ({samples} sampled at n=6), {}, Kirchhoff cross-check {kirchhoff_ok}/{kirchhoff_checked}, tolerance {TOLERANCE}, {:.1}s (limit {}s)",
            corpus.len(),
            counts(&s, &names),
            elapsed.as_secs_f64(),
            ORACLE_LIMIT.as_secs()
        ),
    );
}

fn criterion_2(gate: &mut Gate, corpus: &[CorpusEntry]) {
    let names = [
        "tree_minor_unimodular",
        "forest_minor_squares_to_q",
        "completed_pair_identity",
        "pair_identity_up_to_sign",
    ];
    let (s, elapsed) = run(Sections { minors: true, ..Sections::NONE }, corpus);
    gate.report(
        2,
        "minor identities",
        all_pass(&s, &names),
        format!("{}, {:.1}s", counts(&s, &names), elapsed.as_secs_f64()),
    );
}

fn criterion_3(gate: &mut Gate, corpus: &[CorpusEntry]) {
    let names = ["exchange_classification"];
    let (s, elapsed) = run(Sections { exchange: true, ..Sections::NONE }, corpus);
    gate.report(
        3,
        "exchange graph connectivity and component classification",
        all_pass(&s, &names),
        format!("{}, {:.1}s", counts(&s, &names), elapsed.as_secs_f64()),
    );
}

fn criterion_4(gate: &mut Gate, corpus: &[CorpusEntry]) {
    let names = ["weight_identities", "q_consistency", "q_balance", "projection_isomorphism"];
    let (s, elapsed) = run(Sections { triple: true, ..Sections::NONE }, corpus);
    let enough = s.property("weight_identities").checked >= MIN_WEIGHT_INSTANCES;
    gate.report(
        4,
        "triple graph weight sums, q-balance, projection isomorphism",
        all_pass(&s, &names) && enough,
        format!(
            "{}, {} special-free components, {:.1}s",
            counts(&s, &names),
            s.observations.special_free_components,
            elapsed.as_secs_f64()
        ),
    );
}

/// K2 with momenta `(p, -p)`: every sweep point must give `Delta = p^2 a`.
fn k2_closed_form() -> (usize, usize) {
    let g = Multigraph::new(2, [(0, 1)]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut ok = 0;
    for _ in 0..K2_INSTANCES {
        let p = ratio(rng.gen_range(1..=9), rng.gen_range(1..=5));
        let a = ratio(rng.gen_range(-16..=16), 16);
        let y0 = ratio(rng.gen_range(1..=9), rng.gen_range(1..=4));
        let mom = MomentumAssignment::scalar(vec![p.clone(), -p.clone()]).unwrap();
        let spec = PerturbationSpec::new(
            vec![y0],
            RationalMatrix::from_rows(1, vec![vec![a.clone()]]).unwrap(),
            integer(1),
            decade_grid(1, 6),
        )
        .unwrap();
        let r = boundedness_sweep(&g, &mom, &spec, &integer(1)).unwrap();
        let expected = &p * &p * &a;
        ok += usize::from(r.points.len() == 6 && r.points.iter().all(|pt| pt.delta == expected));
    }
    (ok, K2_INSTANCES)
}

fn criterion_5(gate: &mut Gate, corpus: &[CorpusEntry]) {
    let (s, elapsed) = run(Sections { sweep: true, ..Sections::NONE }, corpus);
    let o = &s.observations;
    let complete = o.sweeps - o.sweeps_partial;
    let (k2_ok, k2_total) = k2_closed_form();
    let c1_positive = o.sandwich_min.as_ref().is_some_and(|c| *c > integer(0));
    let pass = complete >= MIN_SWEEPS
        && o.sweeps_surrogate_pass == complete
        && c1_positive
        && k2_ok == k2_total
        && all_pass(&s, &["end_to_end_degree"])
        && elapsed < SWEEP_LIMIT;
    let show = |x: &Option<Rational>| x.as_ref().map(format_rational).unwrap_or_else(|| "-".into());
    gate.report(
        5,
        "bounded variation surrogate (C = 1, t = 1e1..1e6)",
        pass,
        format!(
            "{} tails pass of {complete} complete sweeps ({} singular), sandwich [{}, {}], K2 Delta = q a {k2_ok}/{k2_total}, {}, {:.1}s (limit {}s)",
            o.sweeps_surrogate_pass,
            o.sweeps_partial,
            show(&o.sandwich_min),
            show(&o.sandwich_max),
            counts(&s, &["end_to_end_degree"]),
            elapsed.as_secs_f64(),
            SWEEP_LIMIT.as_secs()
        ),
    );
}

fn criterion_6(gate: &mut Gate) {
    let names = ["schur_ratio", "block_inverse"];
    let (s, _) = run(Sections { matrices: true, ..Sections::NONE }, &[]);
    let enough = names.iter().all(|n| s.property(n).checked == MATRIX_INSTANCES);
    gate.report(
        6,
        "Schur ratio and block inverse identities",
        all_pass(&s, &names) && enough,
        counts(&s, &names),
    );
}

const C3_DOC: &str = r#"{"version": 1, "vertices": ["0", "1", "2"],
 "edges": [{"id": 0, "tail": "0", "head": "1"}, {"id": 1, "tail": "1", "head": "2"}, {"id": 2, "tail": "2", "head": "0"}],
 "momenta": {"dim": 1, "form": [["1"]], "p": {"0": ["1"], "1": ["1"], "2": ["-2"]}}}"#;

fn criterion_7(gate: &mut Gate) {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c3.json");
    fs::write(&input, C3_DOC).unwrap();
    let files = |sub: &str, names: &[&str]| -> Vec<Vec<u8>> {
        names.iter().map(|n| fs::read(dir.path().join(sub).join(n)).unwrap()).collect()
    };

    let verify = |sub: &str| {
        let args = VerifyArgs {
            seed: 7,
            max_n: 3,
            max_m: 5,
            samples: 20,
            sample_n: Some(4),
            bound: "1".into(),
            grid: "1e1..1e6:decade".into(),
            budget_vertices: 200_000,
            out: Some(dir.path().join(sub)),
        };
        cmd_verify(&args).unwrap().code
    };
    let variation = |sub: &str| {
        let args = VariationArgs {
            input: input.clone(),
            seed: 2024,
            bound: "1".into(),
            grid: "1e1..1e6:decade".into(),
            y0: None,
            perturbation: None,
            factor: "1".into(),
            budget_vertices: 50_000,
            out: Some(dir.path().join(sub)),
        };
        cmd_variation(&args).unwrap().code
    };
    let codes = [verify("v1"), verify("v2"), variation("s1"), variation("s2")];
    let verify_same = files("v1", &["verify.json"]) == files("v2", &["verify.json"]);
    let variation_names = ["variation.json", "variation.csv"];
    let variation_same = files("s1", &variation_names) == files("s2", &variation_names);
    gate.report(
        7,
        "byte-identical reruns",
        codes == [0; 4] && verify_same && variation_same,
        format!("exit codes {codes:?}, verify.json identical {verify_same}, variation.json/csv identical {variation_same}"),
    );
}

#[test]
fn acceptance() {
    let mut gate = Gate { lines: Vec::new() };
    println!();
    let corpus = generate_corpus(&CorpusConfig::default());
    criterion_1(&mut gate, &corpus);
    criterion_2(&mut gate, &corpus);
    criterion_3(&mut gate, &corpus);
    criterion_4(&mut gate, &corpus);
    criterion_5(&mut gate, &corpus);
    criterion_6(&mut gate);
    criterion_7(&mut gate);
    let failed: Vec<&String> = gate.lines.iter().filter(|(ok, _)| !ok).map(|(_, l)| l).collect();
    assert!(failed.is_empty(), "red criteria: {failed:#?}");
}
