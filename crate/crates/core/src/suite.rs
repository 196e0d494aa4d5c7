//! Runs every exact property over the corpus and tallies per-property counts.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::{entry_momenta, generate_corpus, CorpusConfig, CorpusEntry, Family};
use crate::error::{Error, Result};
use crate::exchange::{verify_classification, VerifyOptions, DEFAULT_VERTEX_BUDGET};
use crate::homology::{assemble_blocks, block_inverse_identities, canonical_cycle_basis, momentum_lift_on, schur_ratio};
use crate::matrix::RationalMatrix;
use crate::rational::{integer, random_bounded, random_positive, ser};
use crate::symanzik::{minor_identities, DeterminantRoute, MomentumAssignment};
use crate::variation::{
    boundedness_sweep, build_triple_graph, decade_grid, projection_iso_check, q_balance_check,
    scaling_certificates, weight_identities, Evaluator, PerturbationSpec,
};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Sections {
    pub oracle: bool,
    pub minors: bool,
    pub exchange: bool,
    pub triple: bool,
    pub scaling: bool,
    pub sweep: bool,
    pub matrices: bool,
}

impl Sections {
    pub const ALL: Sections = Sections {
        oracle: true,
        minors: true,
        exchange: true,
        triple: true,
        scaling: true,
        sweep: true,
        matrices: true,
    };

    pub const NONE: Sections = Sections {
        oracle: false,
        minors: false,
        exchange: false,
        triple: false,
        scaling: false,
        sweep: false,
        matrices: false,
    };
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub corpus: CorpusConfig,
    pub seed: u64,
    pub sections: Sections,
    /// Random weight vectors per graph for the determinant oracle.
    pub oracle_points: usize,
    pub exchange_budget: usize,
    pub triple_budget: usize,
    pub weight_budget: usize,
    pub scaling_budget: usize,
    #[serde(serialize_with = "ser::one")]
    pub bound: Rational,
    #[serde(serialize_with = "ser::vec")]
    pub grid: Vec<Rational>,
    #[serde(serialize_with = "ser::one")]
    pub factor: Rational,
    pub matrix_instances: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            corpus: CorpusConfig::default(),
            seed: 0,
            sections: Sections::ALL,
            oracle_points: 50,
            exchange_budget: DEFAULT_VERTEX_BUDGET,
            triple_budget: 50_000,
            weight_budget: 5_000,
            scaling_budget: 1_000,
            bound: integer(1),
            grid: decade_grid(1, 6),
            factor: integer(1),
            matrix_instances: 100,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PropertyCount {
    pub checked: u64,
    pub passed: u64,
    /// Graphs left out by a budget.
    pub skipped: u64,
}

impl PropertyCount {
    pub fn failed(&self) -> u64 {
        self.checked - self.passed
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteFailure {
    pub property: &'static str,
    pub graph: String,
    pub detail: String,
}

/// Surrogate and reported-only quantities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Observations {
    pub sweeps: u64,
    pub sweeps_partial: u64,
    pub sweeps_surrogate_pass: u64,
    #[serde(serialize_with = "ser::opt")]
    pub sandwich_min: Option<Rational>,
    #[serde(serialize_with = "ser::opt")]
    pub sandwich_max: Option<Rational>,
    pub special_vertices: u64,
    pub special_grid_monotone: u64,
    pub triple_vertices: u64,
    pub special_free_components: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub config: SuiteConfig,
    pub graphs: usize,
    pub families: BTreeMap<Family, usize>,
    pub properties: BTreeMap<&'static str, PropertyCount>,
    pub observations: Observations,
    pub failures: Vec<SuiteFailure>,
    pub passed: bool,
}

impl SuiteSummary {
    pub fn property(&self, name: &str) -> PropertyCount {
        self.properties.get(name).copied().unwrap_or_default()
    }
}

/// Number of failure records kept in a summary.
pub const MAX_FAILURE_RECORDS: usize = 50;

struct Tally {
    properties: BTreeMap<&'static str, PropertyCount>,
    failures: Vec<SuiteFailure>,
    obs: Observations,
}

impl Tally {
    fn new() -> Self {
        Tally {
            properties: BTreeMap::new(),
            failures: Vec::new(),
            obs: Observations::default(),
        }
    }

    fn record(&mut self, property: &'static str, graph: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.record_many(property, graph, 1, u64::from(ok), detail);
    }

    fn record_many(&mut self, property: &'static str, graph: &str, checked: u64, passed: u64, detail: impl FnOnce() -> String) {
        let c = self.properties.entry(property).or_default();
        c.checked += checked;
        c.passed += passed;
        if passed < checked && self.failures.len() < MAX_FAILURE_RECORDS {
            self.failures.push(SuiteFailure {
                property,
                graph: graph.to_string(),
                detail: detail(),
            });
        }
    }

    fn skip(&mut self, property: &'static str) {
        self.properties.entry(property).or_default().skipped += 1;
    }
}

fn min_opt(a: &mut Option<Rational>, b: &Option<Rational>) {
    if let Some(b) = b {
        if a.as_ref().map_or(true, |a| b < a) {
            *a = Some(b.clone());
        }
    }
}

fn max_opt(a: &mut Option<Rational>, b: &Option<Rational>) {
    if let Some(b) = b {
        if a.as_ref().map_or(true, |a| b > a) {
            *a = Some(b.clone());
        }
    }
}

fn graph_rng(seed: u64, index: usize, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt ^ (index as u64).wrapping_mul(0xD134_2543_DE82_EF95))
}

/// Generates the corpus and runs the selected sections on every entry, in
/// corpus order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteSummary> {
    let corpus = generate_corpus(&cfg.corpus);
    run_suite_on(cfg, &corpus)
}

pub fn run_suite_on(cfg: &SuiteConfig, corpus: &[CorpusEntry]) -> Result<SuiteSummary> {
    let mut tally = Tally::new();
    let mut families = BTreeMap::new();
    for (index, entry) in corpus.iter().enumerate() {
        *families.entry(entry.family).or_insert(0) += 1;
        check_entry(cfg, index, entry, &mut tally)?;
    }
    if cfg.sections.matrices {
        check_matrices(cfg, &mut tally)?;
    }
    let passed = tally.properties.values().all(|c| c.failed() == 0);
    Ok(SuiteSummary {
        config: cfg.clone(),
        graphs: corpus.len(),
        families,
        properties: tally.properties,
        observations: tally.obs,
        failures: tally.failures,
        passed,
    })
}

fn check_entry(cfg: &SuiteConfig, index: usize, entry: &CorpusEntry, tally: &mut Tally) -> Result<()> {
    let g = &entry.graph;
    let key = entry.key.as_str();
    let mom = entry_momenta(entry, index, cfg.seed);
    let s = &cfg.sections;

    if s.oracle {
        check_oracle(cfg, index, entry, &mom, tally)?;
    }

    if s.minors {
        let r = minor_identities(g, &mom)?;
        let detail = || format!("{r:?}");
        tally.record_many("tree_minor_unimodular", key, r.trees as u64, (r.trees - r.tree_failures) as u64, detail);
        tally.record_many("forest_minor_squares_to_q", key, r.forests as u64, (r.forests - r.forest_failures) as u64, detail);
        tally.record_many("completed_pair_identity", key, r.pairs as u64, (r.pairs - r.pair_failures) as u64, detail);
        tally.record_many("pair_identity_up_to_sign", key, r.pairs as u64, (r.pairs - r.pair_sorted_failures) as u64, detail);
    }

    if s.exchange {
        let opts = VerifyOptions {
            budget: cfg.exchange_budget,
            contraction: true,
        };
        let r = verify_classification(g, opts)?;
        if r.partial {
            tally.skip("exchange_classification");
        } else {
            tally.record("exchange_classification", key, r.passed, || {
                r.first_counterexample.clone().unwrap_or_default()
            });
        }
    }

    if s.triple || s.scaling {
        check_triple(cfg, index, entry, &mom, tally)?;
    }

    if s.sweep {
        let mut rng = graph_rng(cfg.seed, index, 0x5357_4545_5000);
        let base: Vec<Rational> = (0..g.m()).map(|_| random_positive(&mut rng, 5, 3)).collect();
        let spec = PerturbationSpec::random(base, cfg.bound.clone(), cfg.grid.clone(), &mut rng)?;
        let r = boundedness_sweep(g, &mom, &spec, &cfg.factor)?;
        tally.record("end_to_end_degree", key, r.certificate.holds, || format!("{:?}", r.certificate));
        let o = &mut tally.obs;
        o.sweeps += 1;
        o.sweeps_partial += u64::from(r.partial);
        o.sweeps_surrogate_pass += u64::from(r.passed());
        min_opt(&mut o.sandwich_min, &r.sandwich_min);
        max_opt(&mut o.sandwich_max, &r.sandwich_max);
    }
    Ok(())
}

fn check_oracle(
    cfg: &SuiteConfig,
    index: usize,
    entry: &CorpusEntry,
    mom: &MomentumAssignment,
    tally: &mut Tally,
) -> Result<()> {
    let g = &entry.graph;
    let key = entry.key.as_str();
    let ev = Evaluator::new(g, mom)?;
    let mut rng = graph_rng(cfg.seed, index, 0x4F52_4143_4C45);
    let mut first_y = None;
    let (mut psi_ok, mut phi_ok) = (0u64, 0u64);
    for _ in 0..cfg.oracle_points {
        let y: Vec<Rational> = (0..g.m()).map(|_| random_positive(&mut rng, 20, 7)).collect();
        let (d1, d2) = ev.f_det(&y)?;
        let (e1, e2) = ev.f_enum(&y);
        psi_ok += u64::from(d1 == e1);
        phi_ok += u64::from(d2 == e2);
        first_y.get_or_insert(y);
    }
    let n = cfg.oracle_points as u64;
    tally.record_many("psi_det_equals_enumeration", key, n, psi_ok, || "psi mismatch".into());
    tally.record_many("phi_det_equals_enumeration", key, n, phi_ok, || "phi mismatch".into());

    let y: Vec<Rational> = match first_y {
        Some(y) => y,
        None => (0..g.m()).map(|_| random_positive(&mut rng, 20, 7)).collect(),
    };

    // a second lift, supported on the last spanning tree
    let basis = canonical_cycle_basis(g)?;
    let other_tree = *g.spanning_trees().trees.last().expect("connected graph has a tree");
    let lifts = (0..mom.dim())
        .map(|a| momentum_lift_on(g, &mom.coordinate(a), a, other_tree))
        .collect::<Result<Vec<_>>>()?;
    let other = DeterminantRoute::with_lifts(g.m(), basis, lifts, mom.form().clone())?;
    let phi = ev.route().phi(&y)?;
    tally.record("phi_lift_independent", key, other.phi(&y)? == phi, || format!("tree {other_tree}"));

    let t = random_positive(&mut rng, 9, 4);
    let ty: Vec<Rational> = y.iter().map(|v| v * &t).collect();
    let h = ev.genus();
    let psi = ev.route().psi(&y)?;
    let scaled = ev.f_det(&ty)?;
    let ok = scaled.0 == psi * num_traits::pow(t.clone(), h) && scaled.1 == phi * num_traits::pow(t, h + 1);
    tally.record("homogeneity", key, ok, || "scaling degree mismatch".into());
    Ok(())
}

fn check_triple(
    cfg: &SuiteConfig,
    index: usize,
    entry: &CorpusEntry,
    mom: &MomentumAssignment,
    tally: &mut Tally,
) -> Result<()> {
    const TRIPLE_PROPERTIES: [&str; 4] = ["weight_identities", "q_consistency", "q_balance", "projection_isomorphism"];
    const SCALING_PROPERTIES: [&str; 3] = ["special_xi_degree", "adjacent_xi_degree", "adjacent_zeta_degree"];
    let g = &entry.graph;
    let key = entry.key.as_str();
    let s = &cfg.sections;
    let budget = if s.triple { cfg.triple_budget } else { cfg.scaling_budget };
    let tg = match build_triple_graph(g, mom, budget) {
        Ok(tg) => tg,
        Err(Error::BudgetExceeded { .. }) => {
            let skipped = if s.triple { &TRIPLE_PROPERTIES[..] } else { &[][..] };
            for p in skipped.iter().chain(if s.scaling { &SCALING_PROPERTIES[..] } else { &[][..] }) {
                tally.skip(p);
            }
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    let mut rng = graph_rng(cfg.seed, index, 0x5452_4950_4C45);
    let base: Vec<Rational> = (0..g.m()).map(|_| random_positive(&mut rng, 5, 3)).collect();
    let spec = PerturbationSpec::random(base, cfg.bound.clone(), cfg.grid.clone(), &mut rng)?;

    if s.triple {
        tally.obs.triple_vertices += tg.len() as u64;
        if tg.len() <= cfg.weight_budget {
            let w = weight_identities(&tg, &spec, &cfg.grid[0])?;
            tally.record("weight_identities", key, w.holds(), || format!("{w:?}"));
        } else {
            tally.skip("weight_identities");
        }
        let q = q_balance_check(&tg);
        tally.record("q_consistency", key, q.q_consistent, || "q(F1) != q(F2) on a non-special vertex".into());
        tally.record_many("q_balance", key, q.special_free as u64, q.balanced as u64, || {
            format!("{:?}", q.failures.first())
        });
        tally.obs.special_free_components += q.special_free as u64;
        let (mut checked, mut passed, mut first_bad) = (0u64, 0u64, None);
        for c in 0..tg.components().len() {
            if !tg.is_special_free(c) {
                continue;
            }
            let r = projection_iso_check(&tg, c, cfg.exchange_budget)?;
            checked += 1;
            if r.holds() {
                passed += 1;
            } else if first_bad.is_none() {
                first_bad = Some(format!("{r:?}"));
            }
        }
        tally.record_many("projection_isomorphism", key, checked, passed, || first_bad.unwrap_or_default());
    }

    if s.scaling {
        if tg.len() > cfg.scaling_budget {
            for p in SCALING_PROPERTIES {
                tally.skip(p);
            }
        } else {
            let c = scaling_certificates(&tg, &spec)?;
            let detail = || format!("{c:?}");
            tally.record_many("special_xi_degree", key, c.special as u64, c.special_bounded as u64, detail);
            tally.record_many("adjacent_xi_degree", key, c.xi_pairs as u64, c.xi_pairs_bounded as u64, detail);
            tally.record_many("adjacent_zeta_degree", key, c.zeta_pairs as u64, c.zeta_pairs_bounded as u64, detail);
            tally.obs.special_vertices += c.special as u64;
            tally.obs.special_grid_monotone += c.special_grid_monotone as u64;
        }
    }
    Ok(())
}

/// Random rational matrix with entries in `[-5, 5]`, denominators at most 6.
fn random_entries<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> RationalMatrix {
    let bound = integer(5);
    let data = (0..rows)
        .map(|_| (0..cols).map(|_| random_bounded(rng, &bound, 6)).collect())
        .collect();
    RationalMatrix::from_rows(cols, data).expect("rectangular by construction")
}

/// One seeded instance of the bordered-determinant identity:
/// `schur_ratio(M, w, s) * det M = det [[M, w], [w^t, s]]`. Singular `M`
/// are redrawn.
pub fn schur_instance<R: Rng + ?Sized>(rng: &mut R) -> Result<bool> {
    loop {
        let r = rng.gen_range(1..=5);
        let m = random_entries(r, r, rng);
        let det_m = m.det()?;
        if det_m.is_zero() {
            continue;
        }
        let w = random_entries(r, 1, rng);
        let s = random_bounded(rng, &integer(5), 6);
        let corner = RationalMatrix::from_rows(1, vec![vec![s.clone()]])?;
        let full = assemble_blocks(&m, &w, &w.transpose(), &corner);
        return Ok(schur_ratio(&m, &w, &s)? * det_m == full.det()?);
    }
}

/// One seeded instance of the block inverse formulas; draws with a
/// singular block or Schur complement are redrawn.
pub fn block_inverse_instance<R: Rng + ?Sized>(rng: &mut R) -> Result<bool> {
    loop {
        let (p, q) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let m11 = random_entries(p, p, rng);
        let m12 = random_entries(p, q, rng);
        let m21 = random_entries(q, p, rng);
        let m22 = random_entries(q, q, rng);
        match block_inverse_identities(&m11, &m12, &m21, &m22) {
            Ok(r) => return Ok(r.all()),
            Err(Error::Singular(_)) => continue,
            Err(e) => return Err(e),
        }
    }
}

fn check_matrices(cfg: &SuiteConfig, tally: &mut Tally) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x4D41_5452_4958);
    for k in 0..cfg.matrix_instances {
        let ok = schur_instance(&mut rng)?;
        tally.record("schur_ratio", &format!("instance {k}"), ok, String::new);
        let ok = block_inverse_instance(&mut rng)?;
        tally.record("block_inverse", &format!("instance {k}"), ok, String::new);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes_and_is_deterministic() {
        let cfg = SuiteConfig {
            corpus: CorpusConfig::small(3, 4),
            oracle_points: 5,
            matrix_instances: 5,
            ..Default::default()
        };
        let a = run_suite(&cfg).unwrap();
        assert!(a.passed, "{:?}", a.failures);
        assert!(a.property("psi_det_equals_enumeration").checked > 0);
        assert!(a.property("projection_isomorphism").checked > 0);
        assert_eq!(a.property("schur_ratio").passed, 5);
        let b = run_suite(&cfg).unwrap();
        assert_eq!(a, b);
    }
}
