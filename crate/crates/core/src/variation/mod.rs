//! Bounded perturbations of the edge-weight form: `f1, f2, g1, g2`, the
//! triple graph with its weights, and the boundedness sweep.

mod sweep;
mod triple;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::multigraph::Multigraph;
use crate::rational::{format_rational, parse_rational, random_bounded, ser};
use crate::symanzik::{phi_enum, psi_enum, DeterminantRoute, MomentumAssignment, SymanzikPolynomial};
use crate::Rational;

pub use sweep::{
    boundedness_sweep, end_to_end_certificate, random_large_points, scaling_certificates,
    tail_verdict, DegreeCertificate, LargePointLevel, ScalingCertificates, SweepPoint, SweepReport,
    TailVerdict, SWEEP_CSV_HEADER,
};
pub use triple::{
    build_triple_graph, projection_iso_check, q_balance_check, weight_identities, zeta_spread,
    ProjectionReport, QBalanceReport, TripleGraph, TripleVertex, WeightContext,
    WeightIdentityReport, ZetaSpread, DEFAULT_TRIPLE_BUDGET,
};

/// Largest denominator used when sampling entries of `A`.
pub const PERTURBATION_MAX_DEN: i64 = 16;

/// Base weights `y0`, perturbation `A` with `|A_ij| <= bound`, and the
/// scaling grid `t_1 < ... < t_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerturbationSpec {
    #[serde(serialize_with = "ser::vec")]
    pub base: Vec<Rational>,
    #[serde(serialize_with = "ser::matrix")]
    pub a: RationalMatrix,
    #[serde(serialize_with = "ser::one")]
    pub bound: Rational,
    #[serde(serialize_with = "ser::vec")]
    pub grid: Vec<Rational>,
}

impl PerturbationSpec {
    pub fn new(
        base: Vec<Rational>,
        a: RationalMatrix,
        bound: Rational,
        grid: Vec<Rational>,
    ) -> Result<Self> {
        let m = base.len();
        if base.iter().any(|y| !y.is_positive()) {
            return Err(Error::InvalidSpec("base weights must be positive".into()));
        }
        if a.shape() != (m, m) {
            return Err(Error::InvalidSpec(format!(
                "A is {}x{}, expected {m}x{m}",
                a.rows(),
                a.cols()
            )));
        }
        if !bound.is_positive() {
            return Err(Error::InvalidSpec("bound must be positive".into()));
        }
        for i in 0..m {
            for j in 0..m {
                if a[(i, j)].abs() > bound {
                    return Err(Error::InvalidSpec(format!(
                        "|A[{i}][{j}]| = {} exceeds bound {}",
                        format_rational(&a[(i, j)].abs()),
                        format_rational(&bound)
                    )));
                }
            }
        }
        check_grid(&grid)?;
        Ok(PerturbationSpec {
            base,
            a,
            bound,
            grid,
        })
    }

    /// `A` sampled entrywise: denominator uniform in `1..=16`, then the
    /// numerator uniform among values keeping the entry in `[-bound, bound]`.
    pub fn random<R: Rng + ?Sized>(
        base: Vec<Rational>,
        bound: Rational,
        grid: Vec<Rational>,
        rng: &mut R,
    ) -> Result<Self> {
        let a = random_matrix(base.len(), &bound, rng);
        Self::new(base, a, bound, grid)
    }

    pub fn m(&self) -> usize {
        self.base.len()
    }

    /// `t * y0`.
    pub fn scaled(&self, t: &Rational) -> Vec<Rational> {
        self.base.iter().map(|y| y * t).collect()
    }

    /// `diag(t * y0) + A`.
    pub fn weights(&self, t: &Rational) -> RationalMatrix {
        RationalMatrix::diagonal(&self.scaled(t))
            .add(&self.a)
            .expect("shapes checked at construction")
    }
}

pub fn random_matrix<R: Rng + ?Sized>(m: usize, bound: &Rational, rng: &mut R) -> RationalMatrix {
    let rows = (0..m)
        .map(|_| (0..m).map(|_| random_bounded(rng, bound, PERTURBATION_MAX_DEN)).collect())
        .collect();
    RationalMatrix::from_rows(m, rows).expect("square by construction")
}

fn check_grid(grid: &[Rational]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidSpec("empty grid".into()));
    }
    if grid.iter().any(|t| !t.is_positive()) {
        return Err(Error::InvalidSpec("grid points must be positive".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSpec("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// `10^from, 10^(from+1), ..., 10^to`.
pub fn decade_grid(from: u32, to: u32) -> Vec<Rational> {
    (from..=to)
        .map(|k| Rational::from_integer(num_traits::pow(BigInt::from(10), k as usize)))
        .collect()
}

/// Parses `"1e1..1e6:decade"` or a comma-separated list of rationals.
pub fn parse_grid(s: &str) -> Result<Vec<Rational>> {
    let s = s.trim();
    let bad = |why: &str| Error::InvalidSpec(format!("grid {s:?}: {why}"));
    let grid = if let Some(range) = s.strip_suffix(":decade") {
        let (lo, hi) = range.split_once("..").ok_or_else(|| bad("expected a..b:decade"))?;
        let exponent = |x: &str| -> Result<u32> {
            let x = x.trim();
            let e = x
                .strip_prefix("1e")
                .ok_or_else(|| bad("decade endpoints must look like 1eK"))?;
            e.parse().map_err(|_| bad("bad exponent"))
        };
        let (a, b) = (exponent(lo)?, exponent(hi)?);
        if a > b {
            return Err(bad("empty decade range"));
        }
        decade_grid(a, b)
    } else {
        s.split(',')
            .map(|x| parse_rational(x).map_err(|e| bad(&e)))
            .collect::<Result<Vec<_>>>()?
    };
    check_grid(&grid)?;
    Ok(grid)
}

/// Both Symanzik routes for one graph and momentum assignment.
#[derive(Clone, Debug)]
pub struct Evaluator {
    route: DeterminantRoute,
    psi: SymanzikPolynomial,
    phi: SymanzikPolynomial,
    genus: usize,
}

impl Evaluator {
    pub fn new(g: &Multigraph, mom: &MomentumAssignment) -> Result<Self> {
        let psi = psi_enum(g)?;
        Ok(Evaluator {
            route: DeterminantRoute::new(g, mom)?,
            genus: psi.degree(),
            phi: phi_enum(g, mom)?,
            psi,
        })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn route(&self) -> &DeterminantRoute {
        &self.route
    }

    /// `(f1, f2)` by the enumeration polynomials.
    pub fn f_enum(&self, y: &[Rational]) -> (Rational, Rational) {
        (self.psi.evaluate(y), self.phi.evaluate(y))
    }

    /// `(f1, f2)` by determinants.
    pub fn f_det(&self, y: &[Rational]) -> Result<(Rational, Rational)> {
        Ok((self.route.psi(y)?, self.route.phi(y)?))
    }

    /// Determinant values, rejected if the enumeration disagrees.
    pub fn f_checked(&self, y: &[Rational]) -> Result<(Rational, Rational)> {
        let det = self.f_det(y)?;
        let en = self.f_enum(y);
        if det != en {
            return Err(Error::OracleMismatch(format!(
                "det ({}, {}) vs enum ({}, {})",
                det.0, det.1, en.0, en.1
            )));
        }
        Ok(det)
    }

    /// `(g1, g2)` at an arbitrary weight matrix, without the invertibility check.
    pub fn g_raw(&self, w: &RationalMatrix) -> Result<(Rational, Rational)> {
        Ok((self.route.psi_weighted(w)?, self.route.phi_weighted(w)?))
    }

    /// `(g1, g2)` at `diag(t y0) + A`; a vanishing determinant is reported
    /// as a violation of invertibility at `t`.
    pub fn g(&self, spec: &PerturbationSpec, t: &Rational) -> Result<(Rational, Rational)> {
        let (g1, g2) = self.g_raw(&spec.weights(t))?;
        if g1.is_zero() || g2.is_zero() {
            return Err(Error::ConditionIiViolated(t.clone()));
        }
        Ok((g1, g2))
    }
}

/// `(f1, f2) = (det(M Y M^t), det(N Y N^t))`, checked against enumeration.
pub fn eval_f(g: &Multigraph, mom: &MomentumAssignment, y: &[Rational]) -> Result<(Rational, Rational)> {
    Evaluator::new(g, mom)?.f_checked(y)
}

/// `(g1, g2)` at `Y + A` with `Y = diag(t y0)`.
pub fn eval_g(
    g: &Multigraph,
    mom: &MomentumAssignment,
    spec: &PerturbationSpec,
    t: &Rational,
) -> Result<(Rational, Rational)> {
    if spec.m() != g.m() {
        return Err(Error::InvalidSpec(format!(
            "spec has {} edges, graph has {}",
            spec.m(),
            g.m()
        )));
    }
    Evaluator::new(g, mom)?.g(spec, t)
}

/// Exact degree of a polynomial `p(t)` known to have degree at most
/// `max_degree`, from its values at `t = 1, ..., max_degree + 1`. `None` for
/// the zero polynomial.
pub fn polynomial_degree(values: &[Rational]) -> Option<usize> {
    // Newton divided differences at nodes 1, 2, ..., k; the highest nonzero
    // coefficient gives the degree.
    let mut table = values.to_vec();
    let mut degree = if table[0].is_zero() { None } else { Some(0) };
    for j in 1..values.len() {
        let span = Rational::from_integer(BigInt::from(j));
        for i in (j..values.len()).rev() {
            table[i] = (&table[i] - &table[i - 1]) / &span;
        }
        if !table[j].is_zero() {
            degree = Some(j);
        }
    }
    degree
}

/// The interpolation nodes `1, ..., k` used by [`polynomial_degree`].
pub fn interpolation_nodes(k: usize) -> Vec<Rational> {
    (1..=k).map(|i| Rational::from_integer(BigInt::from(i))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{integer, ratio};
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
    fn grid_parsing() {
        assert_eq!(parse_grid("1e1..1e3:decade").unwrap(), ints(&[10, 100, 1000]));
        assert_eq!(parse_grid("1/2, 3").unwrap(), vec![ratio(1, 2), integer(3)]);
        assert!(parse_grid("3,2").is_err());
        assert!(parse_grid("1e3..1e1:decade").is_err());
        assert!(parse_grid("0,1").is_err());
        assert!(parse_grid("").is_err());
    }

    #[test]
    fn spec_validation() {
        let a = RationalMatrix::from_i64_rows(&[&[2]]);
        assert!(PerturbationSpec::new(ints(&[1]), a.clone(), integer(1), ints(&[10])).is_err());
        assert!(PerturbationSpec::new(ints(&[1]), a.clone(), integer(2), ints(&[10])).is_ok());
        assert!(PerturbationSpec::new(ints(&[0]), a, integer(2), ints(&[10])).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = PerturbationSpec::random(ints(&[1, 2, 3]), ratio(1, 2), ints(&[10]), &mut rng).unwrap();
        assert_eq!(s.a.shape(), (3, 3));
        assert_eq!(s.weights(&integer(10))[(1, 1)], integer(20) + &s.a[(1, 1)]);
    }

    #[test]
    fn f_examples() {
        assert_eq!(eval_f(&c3(), &c3_mom(), &ints(&[1, 1, 1])).unwrap(), (integer(3), integer(6)));
        assert_eq!(eval_f(&c3(), &c3_mom(), &ints(&[2, 3, 5])).unwrap(), (integer(10), integer(76)));
        let k2 = Multigraph::new(2, [(0, 1)]).unwrap();
        let mom = MomentumAssignment::scalar(vec![ratio(2, 3), ratio(-2, 3)]).unwrap();
        assert_eq!(eval_f(&k2, &mom, &[ratio(5, 7)]).unwrap(), (integer(1), ratio(4, 9) * ratio(5, 7)));
    }

    #[test]
    fn g_examples() {
        let k2 = Multigraph::new(2, [(0, 1)]).unwrap();
        let mom = MomentumAssignment::scalar(ints(&[3, -3])).unwrap();
        let a = RationalMatrix::from_rows(1, vec![vec![ratio(-1, 2)]]).unwrap();
        let spec = PerturbationSpec::new(ints(&[2]), a, integer(1), ints(&[10])).unwrap();
        let t = integer(10);
        assert_eq!(eval_g(&k2, &mom, &spec, &t).unwrap(), (integer(1), integer(9) * (integer(20) - ratio(1, 2))));

        let zero = PerturbationSpec::new(ints(&[1, 2, 3]), RationalMatrix::zeros(3, 3), integer(1), ints(&[7])).unwrap();
        let t = integer(7);
        assert_eq!(
            eval_g(&c3(), &c3_mom(), &zero, &t).unwrap(),
            eval_f(&c3(), &c3_mom(), &zero.scaled(&t)).unwrap()
        );

        // A = -t y0 on K2 makes g2 vanish.
        let a = RationalMatrix::from_rows(1, vec![vec![integer(-1)]]).unwrap();
        let spec = PerturbationSpec::new(ints(&[1]), a, integer(1), ints(&[1])).unwrap();
        assert_eq!(
            eval_g(&k2, &mom, &spec, &integer(1)).unwrap_err(),
            Error::ConditionIiViolated(integer(1))
        );
    }

    #[test]
    fn g_matches_mixed_minor_expansion() {
        let g = c3();
        let mom = c3_mom();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let spec = PerturbationSpec::random(ints(&[1, 2, 3]), integer(1), ints(&[100]), &mut rng).unwrap();
        let t = integer(100);
        let w = spec.weights(&t);
        let route = DeterminantRoute::new(&g, &mom).unwrap();
        let m = &route.basis().matrix;
        let lift = crate::homology::momentum_lift_on(&g, &mom.coordinate(0), 0, route.basis().tree).unwrap();
        let n = crate::homology::extended_matrix(route.basis(), &lift).unwrap();
        let expand = |x: &RationalMatrix| -> Rational {
            use itertools::Itertools;
            let rows: Vec<usize> = (0..x.rows()).collect();
            let subsets: Vec<Vec<usize>> = (0..3).combinations(x.rows()).collect();
            let mut s = Rational::zero();
            for i in &subsets {
                for j in &subsets {
                    s += x.minor_det(&rows, i).unwrap() * w.minor_det(i, j).unwrap() * x.minor_det(&rows, j).unwrap();
                }
            }
            s
        };
        assert_eq!(eval_g(&g, &mom, &spec, &t).unwrap(), (expand(m), expand(&n)));
    }

    #[test]
    fn degree_recovery() {
        let p = |t: &Rational| t * t * t - integer(2) * t + integer(5);
        let vals: Vec<Rational> = interpolation_nodes(6).iter().map(p).collect();
        assert_eq!(polynomial_degree(&vals), Some(3));
        assert_eq!(polynomial_degree(&[integer(0), integer(0)]), None);
        assert_eq!(polynomial_degree(&[integer(4), integer(4), integer(4)]), Some(0));
    }
}
