//! Exact sweeps of `Delta(t) = g2/g1 - f2/f1` along `t * y0`, and exact
//! degree certificates in `t`.

use num_traits::{Signed, Zero};
use rand::Rng;
use serde::Serialize;

use super::triple::{TripleGraph, WeightContext};
use super::{interpolation_nodes, polynomial_degree, Evaluator, PerturbationSpec, PERTURBATION_MAX_DEN};
use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::multigraph::Multigraph;
use crate::rational::{format_rational, random_positive, ser};
use crate::symanzik::MomentumAssignment;
use crate::Rational;

pub const SWEEP_CSV_HEADER: [&str; 7] = ["t", "f1", "f2", "g1", "g2", "Delta", "g1_over_f1"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepPoint {
    #[serde(serialize_with = "ser::one")]
    pub t: Rational,
    #[serde(serialize_with = "ser::one")]
    pub f1: Rational,
    #[serde(serialize_with = "ser::one")]
    pub f2: Rational,
    #[serde(serialize_with = "ser::one")]
    pub g1: Rational,
    #[serde(serialize_with = "ser::one")]
    pub g2: Rational,
    #[serde(serialize_with = "ser::one")]
    pub delta: Rational,
    #[serde(serialize_with = "ser::one")]
    pub g1_over_f1: Rational,
}

impl SweepPoint {
    /// Fields in [`SWEEP_CSV_HEADER`] order.
    pub fn csv_record(&self) -> [String; 7] {
        [&self.t, &self.f1, &self.f2, &self.g1, &self.g2, &self.delta, &self.g1_over_f1].map(format_rational)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailVerdict {
    /// `|Delta(t_{k+1}) - Delta(t_k)|` over the tail.
    #[serde(serialize_with = "ser::vec")]
    pub differences: Vec<Rational>,
    pub differences_non_increasing: bool,
    #[serde(serialize_with = "ser::opt")]
    pub range: Option<Rational>,
    #[serde(serialize_with = "ser::opt")]
    pub allowed_range: Option<Rational>,
    pub range_within: bool,
    pub pass: bool,
}

/// Judges the tail `deltas[1..]`: successive differences non-increasing and
/// range at most `factor * (1 + |last|)`.
pub fn tail_verdict(deltas: &[Rational], factor: &Rational) -> TailVerdict {
    let tail = deltas.get(1..).unwrap_or(&[]);
    let differences: Vec<Rational> = tail.windows(2).map(|w| (&w[1] - &w[0]).abs()).collect();
    let differences_non_increasing = differences.windows(2).all(|w| w[1] <= w[0]);
    let range = match (tail.iter().min(), tail.iter().max()) {
        (Some(lo), Some(hi)) => Some(hi - lo),
        _ => None,
    };
    let allowed_range = tail
        .last()
        .map(|last| factor * (Rational::from_integer(1.into()) + last.abs()));
    let range_within = matches!((&range, &allowed_range), (Some(r), Some(a)) if r <= a);
    TailVerdict {
        pass: differences_non_increasing && range_within,
        differences,
        differences_non_increasing,
        range,
        allowed_range,
        range_within,
    }
}

/// `p(t)` is a polynomial of degree at most `max_degree`; the claim is that
/// its degree is at most `bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCertificate {
    pub max_degree: usize,
    pub bound: usize,
    pub degree: Option<usize>,
    pub holds: bool,
}

impl DegreeCertificate {
    fn from_values(values: &[Rational], bound: usize) -> Self {
        let degree = polynomial_degree(values);
        DegreeCertificate {
            max_degree: values.len() - 1,
            bound,
            degree,
            holds: degree.map_or(true, |d| d <= bound),
        }
    }
}

/// Degree in `t` of `g2 f1 - g1 f2` along `t * y0` with `A` fixed. It is at
/// most `2h + 1`; degree at most `2h` is equivalent to `Delta` staying
/// bounded as `t` grows, since `g1 f1` has exact degree `2h`.
pub fn end_to_end_certificate(ev: &Evaluator, spec: &PerturbationSpec) -> Result<DegreeCertificate> {
    let h = ev.genus();
    let values = interpolation_nodes(2 * h + 2)
        .iter()
        .map(|t| {
            let (f1, f2) = ev.f_det(&spec.scaled(t))?;
            let (g1, g2) = ev.g_raw(&spec.weights(t))?;
            Ok(g2 * f1 - g1 * f2)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DegreeCertificate::from_values(&values, 2 * h))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub genus: usize,
    pub points: Vec<SweepPoint>,
    /// Grid points where `g1` or `g2` vanishes.
    #[serde(serialize_with = "ser::vec")]
    pub singular: Vec<Rational>,
    pub partial: bool,
    #[serde(serialize_with = "ser::one")]
    pub factor: Rational,
    pub verdict: TailVerdict,
    #[serde(serialize_with = "ser::opt")]
    pub sandwich_min: Option<Rational>,
    #[serde(serialize_with = "ser::opt")]
    pub sandwich_max: Option<Rational>,
    pub certificate: DegreeCertificate,
}

impl SweepReport {
    /// The tail verdict on a complete sweep.
    pub fn passed(&self) -> bool {
        !self.partial && self.verdict.pass
    }

    pub fn deltas(&self) -> Vec<Rational> {
        self.points.iter().map(|p| p.delta.clone()).collect()
    }
}

/// Evaluates every grid point. Singular points are recorded and skipped, and
/// the report is then marked partial.
pub fn boundedness_sweep(
    g: &Multigraph,
    mom: &MomentumAssignment,
    spec: &PerturbationSpec,
    factor: &Rational,
) -> Result<SweepReport> {
    if spec.m() != g.m() {
        return Err(Error::InvalidSpec(format!("spec has {} edges, graph has {}", spec.m(), g.m())));
    }
    let ev = Evaluator::new(g, mom)?;
    let mut points = Vec::with_capacity(spec.grid.len());
    let mut singular = Vec::new();
    for t in &spec.grid {
        let (f1, f2) = ev.f_checked(&spec.scaled(t))?;
        let (g1, g2) = match ev.g(spec, t) {
            Ok(v) => v,
            Err(Error::ConditionIiViolated(t)) => {
                singular.push(t);
                continue;
            }
            Err(e) => return Err(e),
        };
        let delta = &g2 / &g1 - &f2 / &f1;
        let g1_over_f1 = &g1 / &f1;
        points.push(SweepPoint {
            t: t.clone(),
            f1,
            f2,
            g1,
            g2,
            delta,
            g1_over_f1,
        });
    }
    let deltas: Vec<Rational> = points.iter().map(|p| p.delta.clone()).collect();
    let verdict = tail_verdict(&deltas, factor);
    Ok(SweepReport {
        genus: ev.genus(),
        sandwich_min: points.iter().map(|p| &p.g1_over_f1).min().cloned(),
        sandwich_max: points.iter().map(|p| &p.g1_over_f1).max().cloned(),
        partial: !singular.is_empty(),
        points,
        singular,
        factor: factor.clone(),
        verdict,
        certificate: end_to_end_certificate(&ev, spec)?,
    })
}

/// Degree certificates for the triple-graph weights: every polynomial below
/// has degree at most `2h + 1` in `t` and is claimed to have degree at most
/// `2h`, the degree of `f1^2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScalingCertificates {
    /// `xi` of special vertices.
    pub special: usize,
    pub special_bounded: usize,
    /// `xi(v) - xi(u)` over edges of the triple graph.
    pub xi_pairs: usize,
    pub xi_pairs_bounded: usize,
    /// `q(u) zeta(v) - q(v) zeta(u)` over edges between non-special vertices.
    pub zeta_pairs: usize,
    pub zeta_pairs_bounded: usize,
    /// Special vertices whose `|xi| / f1^2` is non-increasing on the grid tail.
    pub special_grid_monotone: usize,
}

impl ScalingCertificates {
    pub fn holds(&self) -> bool {
        self.special == self.special_bounded
            && self.xi_pairs == self.xi_pairs_bounded
            && self.zeta_pairs == self.zeta_pairs_bounded
    }
}

pub fn scaling_certificates(tg: &TripleGraph, spec: &PerturbationSpec) -> Result<ScalingCertificates> {
    let ev = Evaluator::new(tg.graph(), tg.momenta())?;
    let h = ev.genus();
    let nodes = interpolation_nodes(2 * h + 2);
    let mut contexts = nodes
        .iter()
        .map(|t| WeightContext::new(tg, spec, t))
        .collect::<Result<Vec<_>>>()?;
    let mut weights = |i: usize| -> (Vec<Rational>, Vec<Rational>) {
        contexts.iter_mut().map(|ctx| ctx.xi_zeta(i)).unzip()
    };
    let bounded = |values: &[Rational]| DegreeCertificate::from_values(values, 2 * h).holds;

    let mut out = ScalingCertificates::default();
    let mut cache: Vec<Option<(Vec<Rational>, Vec<Rational>)>> = vec![None; tg.len()];
    let mut get = |i: usize, weights: &mut dyn FnMut(usize) -> (Vec<Rational>, Vec<Rational>)| {
        cache[i].get_or_insert_with(|| weights(i)).clone()
    };
    for i in 0..tg.len() {
        if tg.is_special(i) {
            out.special += 1;
            let (xi, _) = get(i, &mut weights);
            if bounded(&xi) {
                out.special_bounded += 1;
            }
        }
    }
    for u in 0..tg.side_one_len() {
        for (v, _) in tg.neighbors(u) {
            let (xi_u, zeta_u) = get(u, &mut weights);
            let (xi_v, zeta_v) = get(v, &mut weights);
            out.xi_pairs += 1;
            let diff: Vec<Rational> = xi_v.iter().zip(&xi_u).map(|(a, b)| a - b).collect();
            if bounded(&diff) {
                out.xi_pairs_bounded += 1;
            }
            if let (Some(qu), Some(qv)) = (tg.q(u), tg.q(v)) {
                out.zeta_pairs += 1;
                let diff: Vec<Rational> = zeta_v
                    .iter()
                    .zip(&zeta_u)
                    .map(|(zv, zu)| qu * zv - qv * zu)
                    .collect();
                if bounded(&diff) {
                    out.zeta_pairs_bounded += 1;
                }
            }
        }
    }

    let special: Vec<usize> = (0..tg.len()).filter(|&i| tg.is_special(i)).collect();
    if !special.is_empty() && spec.grid.len() > 1 {
        let mut ratios: Vec<Vec<Rational>> = vec![Vec::new(); special.len()];
        for t in &spec.grid[1..] {
            let (f1, _) = ev.f_checked(&spec.scaled(t))?;
            let f1_sq = &f1 * &f1;
            let mut ctx = WeightContext::new(tg, spec, t)?;
            for (k, &i) in special.iter().enumerate() {
                ratios[k].push(ctx.xi_zeta(i).0.abs() / &f1_sq);
            }
        }
        out.special_grid_monotone = ratios
            .iter()
            .filter(|r| r.windows(2).all(|w| w[1] <= w[0]))
            .count();
    }
    Ok(out)
}

/// Extremes of `Delta` and `g1 / f1` over random points `y = s * u` with
/// `u_e` uniform rationals in `[1, 10]`, at one scale `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LargePointLevel {
    #[serde(serialize_with = "ser::one")]
    pub scale: Rational,
    pub samples: usize,
    pub singular: usize,
    #[serde(serialize_with = "ser::opt")]
    pub max_abs_delta: Option<Rational>,
    #[serde(serialize_with = "ser::opt")]
    pub min_g1_over_f1: Option<Rational>,
    #[serde(serialize_with = "ser::opt")]
    pub max_g1_over_f1: Option<Rational>,
}

/// Independently random large weights with the perturbation `A` of `spec`.
pub fn random_large_points<R: Rng + ?Sized>(
    ev: &Evaluator,
    a: &RationalMatrix,
    scales: &[Rational],
    samples: usize,
    rng: &mut R,
) -> Result<Vec<LargePointLevel>> {
    let m = a.rows();
    let ten = Rational::from_integer(10.into());
    let mut out = Vec::with_capacity(scales.len());
    for scale in scales {
        let mut level = LargePointLevel {
            scale: scale.clone(),
            samples,
            singular: 0,
            max_abs_delta: None,
            min_g1_over_f1: None,
            max_g1_over_f1: None,
        };
        for _ in 0..samples {
            let y: Vec<Rational> = (0..m)
                .map(|_| {
                    let u = random_positive(rng, 9 * PERTURBATION_MAX_DEN, PERTURBATION_MAX_DEN);
                    let u = u.min(ten.clone()).max(Rational::from_integer(1.into()));
                    u * scale
                })
                .collect();
            let (f1, f2) = ev.f_det(&y)?;
            let w = RationalMatrix::diagonal(&y).add(a)?;
            let (g1, g2) = ev.g_raw(&w)?;
            if g1.is_zero() || g2.is_zero() {
                level.singular += 1;
                continue;
            }
            let delta = (&g2 / &g1 - &f2 / &f1).abs();
            let ratio = &g1 / &f1;
            if level.max_abs_delta.as_ref().map_or(true, |d| &delta > d) {
                level.max_abs_delta = Some(delta);
            }
            if level.min_g1_over_f1.as_ref().map_or(true, |r| &ratio < r) {
                level.min_g1_over_f1 = Some(ratio.clone());
            }
            if level.max_g1_over_f1.as_ref().map_or(true, |r| &ratio > r) {
                level.max_g1_over_f1 = Some(ratio);
            }
        }
        out.push(level);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{integer, ratio};
    use crate::variation::{build_triple_graph, decade_grid, DEFAULT_TRIPLE_BUDGET};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| integer(x)).collect()
    }

    fn c3() -> Multigraph {
        Multigraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn c3_mom() -> MomentumAssignment {
        MomentumAssignment::scalar(ints(&[1, 1, -2])).unwrap()
    }

    #[test]
    fn k2_delta_is_q_times_a() {
        let g = Multigraph::new(2, [(0, 1)]).unwrap();
        let mom = MomentumAssignment::scalar(vec![ratio(3, 2), ratio(-3, 2)]).unwrap();
        let a = RationalMatrix::from_rows(1, vec![vec![ratio(1, 2)]]).unwrap();
        let spec = PerturbationSpec::new(ints(&[2]), a, integer(1), decade_grid(1, 6)).unwrap();
        let r = boundedness_sweep(&g, &mom, &spec, &integer(1)).unwrap();
        assert!(r.passed());
        assert_eq!(r.points.len(), 6);
        for p in &r.points {
            assert_eq!(p.delta, ratio(9, 4) * ratio(1, 2));
            assert_eq!(p.g1_over_f1, integer(1));
        }
        assert_eq!(r.verdict.range, Some(integer(0)));
        assert!(r.certificate.holds);
    }

    #[test]
    fn zero_perturbation_gives_zero_delta() {
        let spec = PerturbationSpec::new(ints(&[1, 2, 3]), RationalMatrix::zeros(3, 3), integer(1), decade_grid(1, 4)).unwrap();
        let r = boundedness_sweep(&c3(), &c3_mom(), &spec, &integer(1)).unwrap();
        assert!(r.points.iter().all(|p| p.delta.is_zero()));
        assert!(r.passed());
        assert_eq!(r.certificate.degree, None);
    }

    #[test]
    fn c3_regression_anchor() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let spec = PerturbationSpec::random(ints(&[1, 1, 1]), integer(1), decade_grid(1, 6), &mut rng).unwrap();
        let r = boundedness_sweep(&c3(), &c3_mom(), &spec, &integer(1)).unwrap();
        assert!(r.passed(), "{:?}", r.verdict);
        let diffs = &r.verdict.differences;
        assert!(diffs.windows(2).all(|w| w[1] < w[0]));
        assert!(r.certificate.holds);
        assert!(r.sandwich_min.as_ref().unwrap().is_positive());
        let last = r.points.last().unwrap();
        assert_eq!(format_rational(&last.delta), "18127221343/15724813322");
    }

    #[test]
    fn tail_verdict_flags_growth() {
        let v = tail_verdict(&ints(&[0, 1, 2, 4]), &integer(1));
        assert!(!v.differences_non_increasing);
        let v = tail_verdict(&[integer(100), integer(3), ratio(5, 2), ratio(12, 5)], &integer(1));
        assert!(v.pass);
        let v = tail_verdict(&ints(&[0, 20, 5, 0]), &integer(1));
        assert!(!v.range_within);
    }

    #[test]
    fn singular_point_gives_partial_report() {
        let g = Multigraph::new(2, [(0, 1)]).unwrap();
        let mom = MomentumAssignment::scalar(ints(&[1, -1])).unwrap();
        let a = RationalMatrix::from_rows(1, vec![vec![integer(-1)]]).unwrap();
        let spec = PerturbationSpec::new(ints(&[1]), a, integer(1), ints(&[1, 2, 3])).unwrap();
        let r = boundedness_sweep(&g, &mom, &spec, &integer(1)).unwrap();
        assert!(r.partial);
        assert_eq!(r.singular, vec![integer(1)]);
        assert_eq!(r.points.len(), 2);
        assert!(!r.passed());
    }

    #[test]
    fn certificates_on_small_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for g in [
            c3(),
            Multigraph::new(2, [(0, 1), (0, 1), (0, 1)]).unwrap(),
            Multigraph::new(3, [(0, 1), (1, 2), (0, 1)]).unwrap(),
        ] {
            let p: Vec<i64> = match g.n() {
                2 => vec![2, -2],
                _ => vec![1, 2, -3],
            };
            let mom = MomentumAssignment::scalar(ints(&p)).unwrap();
            let tg = build_triple_graph(&g, &mom, DEFAULT_TRIPLE_BUDGET).unwrap();
            let spec = PerturbationSpec::random(vec![integer(1); g.m()], integer(1), decade_grid(1, 4), &mut rng).unwrap();
            let c = scaling_certificates(&tg, &spec).unwrap();
            assert!(c.holds(), "{c:?}");
        }
    }

    #[test]
    fn large_points_are_reported() {
        let ev = Evaluator::new(&c3(), &c3_mom()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = crate::variation::random_matrix(3, &integer(1), &mut rng);
        let levels = random_large_points(&ev, &a, &decade_grid(2, 3), 5, &mut rng).unwrap();
        assert_eq!(levels.len(), 2);
        assert!(levels.iter().all(|l| l.max_abs_delta.is_some()));
    }
}
