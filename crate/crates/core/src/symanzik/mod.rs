//! First and second Symanzik polynomials, computed by enumeration and by
//! determinants of the cycle and extended matrices.

mod polynomial;

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::edgeset::EdgeSubset;
use crate::error::{Error, Result};
use crate::homology::{canonical_cycle_basis, momentum_lift_on, CycleBasis, MomentumLift};
use crate::matrix::{gram, RationalMatrix};
use crate::multigraph::Multigraph;
use crate::rational::ser;
use crate::Rational;

pub use polynomial::SymanzikPolynomial;

/// External momenta `p_v in R^D` with a symmetric bilinear form on `R^D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MomentumAssignment {
    dim: usize,
    #[serde(serialize_with = "ser::matrix")]
    form: RationalMatrix,
    #[serde(serialize_with = "ser_vectors")]
    p: Vec<Vec<Rational>>,
}

fn ser_vectors<S: serde::Serializer>(rows: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(rows.len()))?;
    for r in rows {
        let strs: Vec<String> = r.iter().map(|x| x.to_string()).collect();
        seq.serialize_element(&strs)?;
    }
    seq.end()
}

impl MomentumAssignment {
    /// Validates shapes, symmetry of `form` and conservation.
    pub fn new(form: RationalMatrix, p: Vec<Vec<Rational>>) -> Result<Self> {
        if !form.is_square() {
            return Err(Error::NotSquare(form.rows(), form.cols()));
        }
        let dim = form.rows();
        if dim == 0 {
            return Err(Error::InvalidMomenta("dimension must be positive".into()));
        }
        if form.transpose() != form {
            return Err(Error::InvalidMomenta("bilinear form is not symmetric".into()));
        }
        if let Some((v, pv)) = p.iter().enumerate().find(|(_, pv)| pv.len() != dim) {
            return Err(Error::InvalidMomenta(format!(
                "vertex {v} has {} coordinates, expected {dim}",
                pv.len()
            )));
        }
        for a in 0..dim {
            if !p.iter().map(|pv| &pv[a]).sum::<Rational>().is_zero() {
                return Err(Error::MomentumNotConserved(a));
            }
        }
        Ok(MomentumAssignment { dim, form, p })
    }

    /// `D = 1` with form `[1]`.
    pub fn scalar(p: Vec<Rational>) -> Result<Self> {
        Self::euclidean(p.into_iter().map(|x| vec![x]).collect(), 1)
    }

    pub fn euclidean(p: Vec<Vec<Rational>>, dim: usize) -> Result<Self> {
        Self::new(RationalMatrix::identity(dim), p)
    }

    pub fn zero(n: usize, dim: usize) -> Self {
        MomentumAssignment {
            dim,
            form: RationalMatrix::identity(dim),
            p: vec![vec![Rational::zero(); dim]; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn form(&self) -> &RationalMatrix {
        &self.form
    }

    pub fn vertex(&self, v: usize) -> &[Rational] {
        &self.p[v]
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.p
    }

    /// Coordinate `a` of every vertex momentum.
    pub fn coordinate(&self, a: usize) -> Vec<Rational> {
        self.p.iter().map(|pv| pv[a].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.p.iter().flatten().all(Zero::is_zero)
    }

    /// `a^t Q b`.
    pub fn pair(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let mut s = Rational::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let q = &self.form[(i, j)];
                if !q.is_zero() {
                    s += q * &a[i] * &b[j];
                }
            }
        }
        s
    }

    /// Sum of `p_v` over `vertices`.
    pub fn total(&self, vertices: &[usize]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for &v in vertices {
            for (o, x) in out.iter_mut().zip(&self.p[v]) {
                *o += x;
            }
        }
        out
    }

    fn check_graph(&self, g: &Multigraph) -> Result<()> {
        if self.n() != g.n() {
            return Err(Error::InvalidMomenta(format!(
                "{} vertex momenta for {} vertices",
                self.n(),
                g.n()
            )));
        }
        Ok(())
    }
}

/// `-<p_X, p_Y>` for the two components `X`, `Y` of the 2-forest `f`.
pub fn q_of_forest(g: &Multigraph, f: EdgeSubset, mom: &MomentumAssignment) -> Result<Rational> {
    mom.check_graph(g)?;
    if !g.is_spanning_2forest(f) {
        return Err(Error::NotSpanningTwoForest(f));
    }
    let part = g.forest_partition(f)?;
    let px = mom.total(&part.blocks()[0]);
    let py = mom.total(&part.blocks()[1]);
    Ok(-mom.pair(&px, &py))
}

fn genus_of(g: &Multigraph) -> Result<usize> {
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    g.genus()
}

/// `sum_T prod_{e not in T} y_e`.
pub fn psi_enum(g: &Multigraph) -> Result<SymanzikPolynomial> {
    let h = genus_of(g)?;
    let m = g.m();
    let trees = g.spanning_trees();
    Ok(SymanzikPolynomial::from_terms(
        m,
        h,
        trees.trees.into_iter().map(|t| (t.complement(m), Rational::from_integer(1.into()))),
    ))
}

/// `sum_F q(F) prod_{e not in F} y_e`.
pub fn phi_enum(g: &Multigraph, mom: &MomentumAssignment) -> Result<SymanzikPolynomial> {
    let h = genus_of(g)?;
    mom.check_graph(g)?;
    let m = g.m();
    let mut terms = Vec::new();
    for f in g.spanning_2forests()? {
        terms.push((f.complement(m), q_of_forest(g, f, mom)?));
    }
    Ok(SymanzikPolynomial::from_terms(m, h + 1, terms))
}

/// Cycle basis and per-coordinate momentum lifts, prepared once so that
/// `psi` and `phi` can be evaluated at many weight matrices.
#[derive(Clone, Debug)]
pub struct DeterminantRoute {
    m: usize,
    basis: CycleBasis,
    form: RationalMatrix,
    /// `(factor, N)` pairs; `phi = sum factor * det(N W N^t)` with the
    /// polarization combinations folded in.
    phi_terms: Vec<(Rational, RationalMatrix)>,
}

impl DeterminantRoute {
    /// Canonical cycle basis and lifts supported on its tree.
    pub fn new(g: &Multigraph, mom: &MomentumAssignment) -> Result<Self> {
        mom.check_graph(g)?;
        let basis = canonical_cycle_basis(g)?;
        let lifts = (0..mom.dim())
            .map(|a| momentum_lift_on(g, &mom.coordinate(a), a, basis.tree))
            .collect::<Result<Vec<_>>>()?;
        Self::with_lifts(g.m(), basis, lifts, mom.form().clone())
    }

    /// Uses the given lifts, one per coordinate, in coordinate order.
    pub fn with_lifts(
        m: usize,
        basis: CycleBasis,
        lifts: Vec<MomentumLift>,
        form: RationalMatrix,
    ) -> Result<Self> {
        let dim = form.rows();
        if lifts.len() != dim || lifts.iter().any(|l| l.omega.len() != m) {
            return Err(Error::InvalidMomenta(format!(
                "expected {dim} lifts of length {m}"
            )));
        }
        let quarter = Rational::new(1.into(), 4.into());
        let stack = |omega: Vec<Rational>| -> Result<RationalMatrix> {
            basis
                .matrix
                .vstack(&RationalMatrix::from_rows(m, vec![omega])?)
        };
        let mut phi_terms = Vec::new();
        for a in 0..dim {
            for b in a..dim {
                let q = &form[(a, b)];
                if q.is_zero() {
                    continue;
                }
                let (wa, wb) = (&lifts[a].omega, &lifts[b].omega);
                if a == b {
                    phi_terms.push((q.clone(), stack(wa.clone())?));
                } else {
                    // Q_ab + Q_ba = 2 Q_ab, times the 1/4 of polarization
                    let c = q * &quarter * Rational::from_integer(2.into());
                    let plus: Vec<Rational> = wa.iter().zip(wb).map(|(x, y)| x + y).collect();
                    let minus: Vec<Rational> = wa.iter().zip(wb).map(|(x, y)| x - y).collect();
                    phi_terms.push((c.clone(), stack(plus)?));
                    phi_terms.push((-c, stack(minus)?));
                }
            }
        }
        Ok(DeterminantRoute {
            m,
            basis,
            form,
            phi_terms,
        })
    }

    pub fn basis(&self) -> &CycleBasis {
        &self.basis
    }

    pub fn form(&self) -> &RationalMatrix {
        &self.form
    }

    fn check_w(&self, w: &RationalMatrix) -> Result<()> {
        if w.shape() != (self.m, self.m) {
            return Err(Error::ShapeMismatch {
                op: "weight matrix",
                left: (self.m, self.m),
                right: w.shape(),
            });
        }
        Ok(())
    }

    /// `det(M W M^t)` for an arbitrary `m x m` weight matrix.
    pub fn psi_weighted(&self, w: &RationalMatrix) -> Result<Rational> {
        self.check_w(w)?;
        gram(&self.basis.matrix, w)?.det()
    }

    /// Bilinear-form combination of `det(N W N^t)` over coordinate lifts.
    pub fn phi_weighted(&self, w: &RationalMatrix) -> Result<Rational> {
        self.check_w(w)?;
        let mut total = Rational::zero();
        for (c, n) in &self.phi_terms {
            total += c * gram(n, w)?.det()?;
        }
        Ok(total)
    }

    pub fn psi(&self, y: &[Rational]) -> Result<Rational> {
        self.psi_weighted(&self.diag(y)?)
    }

    pub fn phi(&self, y: &[Rational]) -> Result<Rational> {
        self.phi_weighted(&self.diag(y)?)
    }

    fn diag(&self, y: &[Rational]) -> Result<RationalMatrix> {
        check_positive(y, self.m)?;
        Ok(RationalMatrix::diagonal(y))
    }
}

fn check_positive(y: &[Rational], m: usize) -> Result<()> {
    if y.len() != m || y.iter().any(|v| !v.is_positive()) {
        return Err(Error::InvalidWeights { expected: m });
    }
    Ok(())
}

/// `det(M diag(y) M^t)`.
pub fn psi_det(g: &Multigraph, y: &[Rational]) -> Result<Rational> {
    check_positive(y, g.m())?;
    let basis = canonical_cycle_basis(g)?;
    gram(&basis.matrix, &RationalMatrix::diagonal(y))?.det()
}

/// `det(N diag(y) N^t)`, polarized over coordinates when `D > 1`.
pub fn phi_det(g: &Multigraph, mom: &MomentumAssignment, y: &[Rational]) -> Result<Rational> {
    DeterminantRoute::new(g, mom)?.phi(y)
}

/// `phi / psi` at `y`.
pub fn ratio(g: &Multigraph, mom: &MomentumAssignment, y: &[Rational]) -> Result<Rational> {
    let route = DeterminantRoute::new(g, mom)?;
    let psi = route.psi(y)?;
    if psi.is_zero() {
        return Err(Error::VanishingPsi);
    }
    Ok(route.phi(y)? / psi)
}

/// Counts for the unimodularity of tree minors of `M`, the forest minors
/// `det(N_{F^c})^2 = q(F)` and the product identity on vertex-equivalent
/// forest pairs completed by a common edge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MinorIdentityReport {
    pub trees: usize,
    pub tree_failures: usize,
    pub forests: usize,
    pub forest_failures: usize,
    pub pairs: usize,
    pub pair_failures: usize,
    /// Pairs where the identity fails up to sign with columns in edge order.
    pub pair_sorted_failures: usize,
}

impl MinorIdentityReport {
    pub fn holds(&self) -> bool {
        self.tree_failures == 0
            && self.forest_failures == 0
            && self.pair_failures == 0
            && self.pair_sorted_failures == 0
    }
}

/// Requires scalar momenta.
pub fn minor_identities(g: &Multigraph, mom: &MomentumAssignment) -> Result<MinorIdentityReport> {
    if mom.dim() != 1 {
        return Err(Error::InvalidMomenta(format!("expected scalar momenta, got dimension {}", mom.dim())));
    }
    mom.check_graph(g)?;
    let m = g.m();
    let basis = canonical_cycle_basis(g)?;
    let lift = momentum_lift_on(g, &mom.coordinate(0), 0, basis.tree)?;
    let n = crate::homology::extended_matrix(&basis, &lift)?;
    let rows_m: Vec<usize> = (0..basis.genus()).collect();
    let rows_n: Vec<usize> = (0..=basis.genus()).collect();
    let tree_minor = |t: EdgeSubset| basis.matrix.minor_det(&rows_m, &t.complement(m).to_vec());
    let one = Rational::from_integer(1.into());
    let mut report = MinorIdentityReport::default();

    for t in g.spanning_trees().trees {
        let d = tree_minor(t)?;
        report.trees += 1;
        if &d * &d != one {
            report.tree_failures += 1;
        }
    }

    let mut by_partition: BTreeMap<Vec<usize>, Vec<(EdgeSubset, Rational, Rational)>> = BTreeMap::new();
    for f in g.spanning_2forests()? {
        let d = n.minor_det(&rows_n, &f.complement(m).to_vec())?;
        let q = q_of_forest(g, f, mom)?;
        report.forests += 1;
        if &d * &d != q {
            report.forest_failures += 1;
        }
        let labels = g.forest_partition(f)?.labels().to_vec();
        by_partition.entry(labels).or_default().push((f, d, q));
    }
    // Columns of N ordered as T^c followed by e.
    let completed_minor = |f: EdgeSubset, e: usize| -> Result<Rational> {
        let mut cols = f.with(e).complement(m).to_vec();
        cols.push(e);
        n.minor_det(&rows_n, &cols)
    };
    for (labels, group) in &by_partition {
        let cross = g.crossing_edges(&crate::multigraph::VertexPartition::from_labels(labels));
        for e in cross {
            let minors = group
                .iter()
                .map(|(f, _, _)| Ok((completed_minor(*f, e)?, tree_minor(f.with(e))?)))
                .collect::<Result<Vec<_>>>()?;
            for ((_, d1, q1), (n1, m1)) in group.iter().zip(&minors) {
                for ((_, d2, _), (n2, m2)) in group.iter().zip(&minors) {
                    report.pairs += 1;
                    let rhs = q1 * m1 * m2;
                    if n1 * n2 != rhs {
                        report.pair_failures += 1;
                    }
                    if (d1 * d2).abs() != rhs.abs() {
                        report.pair_sorted_failures += 1;
                    }
                }
            }
        }
    }
    Ok(report)
}
