use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use symanzik_core::corpus::CorpusConfig;
use symanzik_core::exchange::{build_exchange_graph, verify_exchange_graph, ClassificationReport, VerifyOptions};
use symanzik_core::rational::{integer, parse_rational, ser};
use symanzik_core::suite::{run_suite, SuiteConfig, SuiteSummary};
use symanzik_core::symanzik::{phi_enum, psi_det, psi_enum, DeterminantRoute, SymanzikPolynomial};
use symanzik_core::variation::{
    boundedness_sweep, build_triple_graph, parse_grid, projection_iso_check, q_balance_check, random_matrix,
    weight_identities, PerturbationSpec, QBalanceReport, SweepReport, WeightIdentityReport, SWEEP_CSV_HEADER,
};
use symanzik_core::{Error, Rational, RationalMatrix};

use crate::document::GraphDocument;
use crate::error::{exit, CliError, Result};
use crate::{ExchangeArgs, SymanzikArgs, VariationArgs, VerifyArgs};

/// Exit code, files written and anything meant for stdout.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: u8,
    pub files: Vec<PathBuf>,
    pub stdout: String,
}

/// Writes every file into `out`; without `out` the first one goes to stdout.
fn emit(out: Option<&Path>, files: Vec<(&str, String)>, code: u8) -> Result<Outcome> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(io(dir))?;
            let mut written = Vec::new();
            for (name, contents) in files {
                let path = dir.join(name);
                fs::write(&path, contents).map_err(io(&path))?;
                written.push(path);
            }
            Ok(Outcome {
                code,
                files: written,
                stdout: String::new(),
            })
        }
        None => Ok(Outcome {
            code,
            files: Vec::new(),
            stdout: files.into_iter().next().map(|(_, s)| s).unwrap_or_default(),
        }),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn rational_arg(s: &str, what: &str) -> Result<Rational> {
    parse_rational(s).map_err(|e| CliError::Input(format!("--{what}: {e}")))
}

fn rational_list(s: &str, what: &str) -> Result<Vec<Rational>> {
    s.split(',').map(|x| rational_arg(x, what)).collect()
}

fn input_error(e: Error) -> CliError {
    match e {
        Error::InvalidSpec(msg) => CliError::Input(msg),
        e => CliError::Core(e),
    }
}

#[derive(Serialize)]
struct GraphInfo {
    vertices: usize,
    edges: usize,
    genus: usize,
}

#[derive(Serialize)]
struct Evaluation {
    #[serde(serialize_with = "ser::vec")]
    y: Vec<Rational>,
    #[serde(serialize_with = "ser::one")]
    psi_enum: Rational,
    #[serde(serialize_with = "ser::one")]
    psi_det: Rational,
    #[serde(serialize_with = "ser::opt")]
    phi_enum: Option<Rational>,
    #[serde(serialize_with = "ser::opt")]
    phi_det: Option<Rational>,
    psi_agree: bool,
    phi_agree: Option<bool>,
}

#[derive(Serialize)]
struct SymanzikOutput {
    graph: GraphInfo,
    psi: SymanzikPolynomial,
    phi: Option<SymanzikPolynomial>,
    evaluations: Vec<Evaluation>,
    agree: bool,
}

/// Polynomials as term lists plus enumeration-versus-determinant values at
/// every requested point. Writes `symanzik.json`.
pub fn cmd_symanzik(args: &SymanzikArgs) -> Result<Outcome> {
    let loaded = GraphDocument::read(&args.input)?.load()?;
    let g = &loaded.graph;
    if args.phi && loaded.momenta.is_none() {
        return Err(CliError::Input("phi requested but the document has no momenta".into()));
    }
    let genus = g.genus()?;
    let psi = psi_enum(g)?;
    let phi = loaded.momenta.as_ref().map(|mom| phi_enum(g, mom)).transpose()?;
    let route = loaded
        .momenta
        .as_ref()
        .map(|mom| DeterminantRoute::new(g, mom))
        .transpose()?;

    let points = if args.y.is_empty() {
        vec![vec![integer(1); g.m()]]
    } else {
        args.y.iter().map(|s| rational_list(s, "y")).collect::<Result<Vec<_>>>()?
    };
    let mut evaluations = Vec::with_capacity(points.len());
    for y in points {
        if y.len() != g.m() || y.iter().any(|v| *v <= integer(0)) {
            return Err(CliError::Input(format!("--y needs {} positive rationals", g.m())));
        }
        let psi_e = psi.evaluate(&y);
        let psi_d = psi_det(g, &y)?;
        let phi_e = phi.as_ref().map(|p| p.evaluate(&y));
        let phi_d = route.as_ref().map(|r| r.phi(&y)).transpose()?;
        evaluations.push(Evaluation {
            psi_agree: psi_e == psi_d,
            phi_agree: phi_e.as_ref().map(|e| Some(e) == phi_d.as_ref()),
            y,
            psi_enum: psi_e,
            psi_det: psi_d,
            phi_enum: phi_e,
            phi_det: phi_d,
        });
    }
    let agree = evaluations.iter().all(|e| e.psi_agree && e.phi_agree != Some(false));
    let report = SymanzikOutput {
        graph: GraphInfo {
            vertices: g.n(),
            edges: g.m(),
            genus,
        },
        psi,
        phi,
        evaluations,
        agree,
    };
    let code = if agree { exit::OK } else { exit::MATH };
    emit(args.out.as_deref(), vec![("symanzik.json", to_json(&report))], code)
}

#[derive(Serialize)]
struct ExchangeOutput {
    graph: GraphInfo,
    budget: usize,
    report: ClassificationReport,
}

/// Classification report as `exchange.json` and the exchange graph as
/// `exchange.dot`. Over budget, only the partial report is written.
pub fn cmd_exchange(args: &ExchangeArgs) -> Result<Outcome> {
    let loaded = GraphDocument::read(&args.input)?.load()?;
    let g = &loaded.graph;
    let info = GraphInfo {
        vertices: g.n(),
        edges: g.m(),
        genus: g.genus()?,
    };
    let options = VerifyOptions {
        budget: args.budget_vertices,
        contraction: true,
    };
    let h = match build_exchange_graph(g, args.budget_vertices) {
        Ok(h) => h,
        Err(Error::BudgetExceeded { count, cap, .. }) => {
            let mut report = ClassificationReport::partial(cap);
            report.first_counterexample = Some(format!("exchange graph has {count} vertices, budget {cap}"));
            let out = ExchangeOutput {
                graph: info,
                budget: cap,
                report,
            };
            return emit(args.out.as_deref(), vec![("exchange.json", to_json(&out))], exit::BUDGET);
        }
        Err(e) => return Err(e.into()),
    };
    let report = verify_exchange_graph(&h, options)?;
    let code = if report.passed { exit::OK } else { exit::MATH };
    let out = ExchangeOutput {
        graph: info,
        budget: args.budget_vertices,
        report,
    };
    emit(
        args.out.as_deref(),
        vec![("exchange.json", to_json(&out)), ("exchange.dot", h.to_dot())],
        code,
    )
}

#[derive(Serialize)]
struct ProjectionSummary {
    checked: usize,
    passed: usize,
}

#[derive(Serialize)]
struct TripleSummary {
    vertices: usize,
    special: usize,
    components: usize,
    weight_identities: Vec<WeightIdentityReport>,
    q_balance: QBalanceReport,
    projection: ProjectionSummary,
}

#[derive(Serialize)]
struct VariationOutput {
    seed: u64,
    graph: GraphInfo,
    spec: PerturbationSpec,
    sweep: SweepReport,
    /// `None` when the triple graph exceeds the budget.
    triple: Option<TripleSummary>,
    budget: usize,
    exact_identities_hold: bool,
}

fn read_matrix(path: &Path, m: usize) -> Result<RationalMatrix> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let rows: Vec<Vec<String>> = serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|x| rational_arg(x, "perturbation")).collect())
        .collect::<Result<Vec<Vec<Rational>>>>()?;
    if rows.len() != m || rows.iter().any(|r| r.len() != m) {
        return Err(CliError::Input(format!("--perturbation must be {m}x{m}")));
    }
    Ok(RationalMatrix::from_rows(m, rows)?)
}

/// Sweep table as `variation.csv`; sweep report and the exact triple-graph
/// identities as `variation.json`.
pub fn cmd_variation(args: &VariationArgs) -> Result<Outcome> {
    let loaded = GraphDocument::read(&args.input)?.load()?;
    let g = &loaded.graph;
    let mom = loaded
        .momenta
        .as_ref()
        .ok_or_else(|| CliError::Input("variation needs momenta".into()))?;
    let m = g.m();
    let bound = rational_arg(&args.bound, "bound")?;
    let factor = rational_arg(&args.factor, "factor")?;
    let grid = parse_grid(&args.grid).map_err(input_error)?;
    let base = match &args.y0 {
        Some(s) => rational_list(s, "y0")?,
        None => vec![integer(1); m],
    };
    if base.len() != m {
        return Err(CliError::Input(format!("--y0 needs {m} entries")));
    }
    if bound <= integer(0) {
        return Err(CliError::Input("--bound must be positive".into()));
    }
    let a = match &args.perturbation {
        Some(path) => read_matrix(path, m)?,
        None => random_matrix(m, &bound, &mut ChaCha8Rng::seed_from_u64(args.seed)),
    };
    let spec = PerturbationSpec::new(base, a, bound, grid).map_err(input_error)?;
    let sweep = boundedness_sweep(g, mom, &spec, &factor)?;

    let singular: BTreeSet<&Rational> = sweep.singular.iter().collect();
    let triple = match build_triple_graph(g, mom, args.budget_vertices) {
        Ok(tg) => {
            let weights = spec
                .grid
                .iter()
                .filter(|t| !singular.contains(t))
                .map(|t| weight_identities(&tg, &spec, t))
                .collect::<symanzik_core::Result<Vec<_>>>()?;
            let q_balance = q_balance_check(&tg);
            let mut projection = ProjectionSummary { checked: 0, passed: 0 };
            for c in (0..tg.components().len()).filter(|&c| tg.is_special_free(c)) {
                let r = projection_iso_check(&tg, c, symanzik_core::exchange::DEFAULT_VERTEX_BUDGET)?;
                projection.checked += 1;
                projection.passed += usize::from(r.holds());
            }
            Some(TripleSummary {
                vertices: tg.len(),
                special: tg.special_count(),
                components: tg.components().len(),
                weight_identities: weights,
                q_balance,
                projection,
            })
        }
        Err(Error::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let exact_identities_hold = sweep.certificate.holds
        && triple.as_ref().map_or(true, |t| {
            t.weight_identities.iter().all(|w| w.holds())
                && t.q_balance.holds()
                && t.projection.passed == t.projection.checked
        });
    let code = match (&triple, exact_identities_hold) {
        (_, false) => exit::MATH,
        (None, true) => exit::BUDGET,
        (Some(_), true) => exit::OK,
    };

    let mut csv = csv::Writer::from_writer(Vec::new());
    let write = |w: &mut csv::Writer<Vec<u8>>| -> std::result::Result<Vec<u8>, csv::Error> {
        w.write_record(SWEEP_CSV_HEADER)?;
        for p in &sweep.points {
            w.write_record(p.csv_record())?;
        }
        w.flush()?;
        Ok(w.get_ref().clone())
    };
    let table = write(&mut csv).map_err(|e| CliError::Input(format!("csv: {e}")))?;
    let table = String::from_utf8(table).expect("csv of ascii fields");

    let out = VariationOutput {
        seed: args.seed,
        graph: GraphInfo {
            vertices: g.n(),
            edges: m,
            genus: g.genus()?,
        },
        spec,
        sweep,
        triple,
        budget: args.budget_vertices,
        exact_identities_hold,
    };
    emit(
        args.out.as_deref(),
        vec![("variation.json", to_json(&out)), ("variation.csv", table)],
        code,
    )
}

fn summary_table(s: &SuiteSummary) -> String {
    let mut out = format!("{:<28} {:>10} {:>10} {:>8}\n", "property", "checked", "passed", "skipped");
    for (name, c) in &s.properties {
        out.push_str(&format!("{name:<28} {:>10} {:>10} {:>8}\n", c.checked, c.passed, c.skipped));
    }
    out.push_str(&format!("graphs: {}  passed: {}\n", s.graphs, s.passed));
    out
}

/// Runs the corpus suite and writes `verify.json`.
pub fn cmd_verify(args: &VerifyArgs) -> Result<Outcome> {
    if args.max_n < 2 {
        return Err(CliError::Input("--max-n must be at least 2".into()));
    }
    let corpus = CorpusConfig {
        max_n: args.max_n,
        max_m: args.max_m,
        loop_max_n: args.max_n.min(4),
        loop_max_m: args.max_m.min(6),
        sample_n: args.sample_n.unwrap_or(args.max_n + 1),
        sample_max_m: args.max_m,
        samples: args.samples,
        seed: args.seed,
    };
    let cfg = SuiteConfig {
        corpus,
        seed: args.seed,
        exchange_budget: args.budget_vertices,
        bound: rational_arg(&args.bound, "bound")?,
        grid: parse_grid(&args.grid).map_err(input_error)?,
        ..SuiteConfig::default()
    };
    if cfg.bound <= integer(0) {
        return Err(CliError::Input("--bound must be positive".into()));
    }
    let summary = run_suite(&cfg)?;
    let code = if summary.passed { exit::OK } else { exit::MATH };
    let mut outcome = emit(args.out.as_deref(), vec![("verify.json", to_json(&summary))], code)?;
    if args.out.is_some() {
        outcome.stdout = summary_table(&summary);
    }
    Ok(outcome)
}
