//! The triple graph on `(F1, F2, T)` and `(T1, T2, F)` triples, its special
//! vertices, the vertex weights `xi`/`zeta`, and the structure of its
//! special-free components.

use std::collections::HashMap;

use num_traits::Zero;
use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::{Evaluator, PerturbationSpec};
use crate::edgeset::EdgeSubset;
use crate::error::{Error, Result};
use crate::exchange::{build_exchange_graph, check_isomorphism, EmbeddingReport, ExchangeVertex, Side};
use crate::homology::{canonical_cycle_basis, extended_matrix, momentum_lift_on};
use crate::matrix::RationalMatrix;
use crate::multigraph::{Multigraph, VertexPartition};
use crate::rational::ser;
use crate::symanzik::{q_of_forest, MomentumAssignment};
use crate::Rational;

/// Default cap on the number of triple-graph vertices.
pub const DEFAULT_TRIPLE_BUDGET: usize = 50_000;

/// Side 1: `parts = [F1, F2, T]`; side 2: `parts = [T1, T2, F]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TripleVertex {
    pub side: Side,
    pub parts: [EdgeSubset; 3],
}

impl std::fmt::Display for TripleVertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let side = if self.side == Side::One { 1 } else { 2 };
        let [a, b, c] = self.parts;
        write!(f, "{side}:({a}, {b}, {c})")
    }
}

/// Vertices are indexed implicitly: side 1 first, ordered by
/// `(F1, F2, T)`, then side 2 ordered by `(T1, T2, F)`, each coordinate by
/// enumeration order of trees and 2-forests.
#[derive(Clone, Debug)]
pub struct TripleGraph {
    graph: Multigraph,
    mom: MomentumAssignment,
    trees: Vec<EdgeSubset>,
    forests: Vec<EdgeSubset>,
    tree_index: HashMap<EdgeSubset, usize>,
    forest_index: HashMap<EdgeSubset, usize>,
    crossing: Vec<EdgeSubset>,
    /// Vertex set of the component of `F` containing vertex 0.
    side_mask: Vec<Vec<bool>>,
    q: Vec<Rational>,
    /// `det M_{T^c}` per tree.
    tree_minor: Vec<Rational>,
    /// `det N^a_{F^c}` per forest, per momentum coordinate `a`.
    forest_minor: Vec<Vec<Rational>>,
    side_one: usize,
    component: Vec<usize>,
    components: Vec<Vec<usize>>,
    special_free: Vec<bool>,
}

pub fn build_triple_graph(g: &Multigraph, mom: &MomentumAssignment, budget: usize) -> Result<TripleGraph> {
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let trees = g.spanning_trees().trees;
    let forests = g.spanning_2forests()?;
    let (nt, nf) = (trees.len(), forests.len());
    let side_one = nf * nf * nt;
    let total = side_one + nt * nt * nf;
    if total > budget {
        return Err(Error::BudgetExceeded {
            what: "triple graph vertices",
            count: total,
            cap: budget,
        });
    }
    let mut crossing = Vec::with_capacity(nf);
    let mut side_mask = Vec::with_capacity(nf);
    let mut q = Vec::with_capacity(nf);
    for &f in &forests {
        let labels = g.component_labels(f);
        let p = VertexPartition::from_labels(&labels);
        crossing.push(g.crossing_edges(&p));
        side_mask.push(labels.iter().map(|&l| l == labels[0]).collect());
        q.push(q_of_forest(g, f, mom)?);
    }

    let basis = canonical_cycle_basis(g)?;
    let rows_m: Vec<usize> = (0..basis.genus()).collect();
    let rows_n: Vec<usize> = (0..=basis.genus()).collect();
    let tree_minor = trees
        .iter()
        .map(|t| basis.matrix.minor_det(&rows_m, &t.complement(g.m()).to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let extended = (0..mom.dim())
        .map(|a| {
            let lift = momentum_lift_on(g, &mom.coordinate(a), a, basis.tree)?;
            extended_matrix(&basis, &lift)
        })
        .collect::<Result<Vec<_>>>()?;
    let forest_minor = forests
        .iter()
        .map(|f| {
            let cols = f.complement(g.m()).to_vec();
            extended
                .iter()
                .map(|n| n.minor_det(&rows_n, &cols))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut tg = TripleGraph {
        graph: g.clone(),
        mom: mom.clone(),
        tree_index: trees.iter().enumerate().map(|(i, &t)| (t, i)).collect(),
        forest_index: forests.iter().enumerate().map(|(i, &f)| (f, i)).collect(),
        trees,
        forests,
        crossing,
        side_mask,
        q,
        tree_minor,
        forest_minor,
        side_one,
        component: Vec::new(),
        components: Vec::new(),
        special_free: Vec::new(),
    };

    let mut uf = UnionFind::new(total);
    for i in 0..side_one {
        for (j, _) in tg.neighbors(i) {
            uf.union(i, j);
        }
    }
    let mut label_of_root: HashMap<usize, usize> = HashMap::new();
    let mut component = Vec::with_capacity(total);
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut special_free: Vec<bool> = Vec::new();
    for i in 0..total {
        let next = label_of_root.len();
        let c = *label_of_root.entry(uf.find(i)).or_insert(next);
        if c == components.len() {
            components.push(Vec::new());
            special_free.push(true);
        }
        components[c].push(i);
        if tg.is_special(i) {
            special_free[c] = false;
        }
        component.push(c);
    }
    tg.component = component;
    tg.components = components;
    tg.special_free = special_free;
    Ok(tg)
}

impl TripleGraph {
    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn momenta(&self) -> &MomentumAssignment {
        &self.mom
    }

    pub fn len(&self) -> usize {
        self.component.len()
    }

    pub fn is_empty(&self) -> bool {
        self.component.is_empty()
    }

    pub fn side_one_len(&self) -> usize {
        self.side_one
    }

    pub fn side_two_len(&self) -> usize {
        self.len() - self.side_one
    }

    fn decode(&self, i: usize) -> (Side, usize, usize, usize) {
        let (nt, nf) = (self.trees.len(), self.forests.len());
        if i < self.side_one {
            (Side::One, i / (nf * nt), (i / nt) % nf, i % nt)
        } else {
            let j = i - self.side_one;
            (Side::Two, j / (nt * nf), (j / nf) % nt, j % nf)
        }
    }

    fn encode(&self, side: Side, a: usize, b: usize, c: usize) -> usize {
        let (nt, nf) = (self.trees.len(), self.forests.len());
        match side {
            Side::One => (a * nf + b) * nt + c,
            Side::Two => self.side_one + (a * nt + b) * nf + c,
        }
    }

    pub fn vertex(&self, i: usize) -> TripleVertex {
        let (side, a, b, c) = self.decode(i);
        let parts = match side {
            Side::One => [self.forests[a], self.forests[b], self.trees[c]],
            Side::Two => [self.trees[a], self.trees[b], self.forests[c]],
        };
        TripleVertex { side, parts }
    }

    pub fn index(&self, v: &TripleVertex) -> Option<usize> {
        let [a, b, c] = v.parts;
        Some(match v.side {
            Side::One => self.encode(
                Side::One,
                *self.forest_index.get(&a)?,
                *self.forest_index.get(&b)?,
                *self.tree_index.get(&c)?,
            ),
            Side::Two => self.encode(
                Side::Two,
                *self.tree_index.get(&a)?,
                *self.tree_index.get(&b)?,
                *self.forest_index.get(&c)?,
            ),
        })
    }

    /// `(neighbour, pivot edge)` pairs.
    pub fn neighbors(&self, i: usize) -> Vec<(usize, usize)> {
        let (side, a, b, c) = self.decode(i);
        match side {
            Side::One => {
                let t = self.trees[c];
                let (f1, f2) = (self.forests[a], self.forests[b]);
                t.intersection(self.crossing[a])
                    .intersection(self.crossing[b])
                    .iter()
                    .map(|e| {
                        let j = self.encode(
                            Side::Two,
                            self.tree_index[&f1.with(e)],
                            self.tree_index[&f2.with(e)],
                            self.forest_index[&t.without(e)],
                        );
                        (j, e)
                    })
                    .collect()
            }
            Side::Two => {
                let (t1, t2) = (self.trees[a], self.trees[b]);
                let f = self.forests[c];
                t1.intersection(t2)
                    .intersection(self.crossing[c])
                    .iter()
                    .map(|e| {
                        let j = self.encode(
                            Side::One,
                            self.forest_index[&t1.without(e)],
                            self.forest_index[&t2.without(e)],
                            self.tree_index[&f.with(e)],
                        );
                        (j, e)
                    })
                    .collect()
            }
        }
    }

    pub fn edge_count(&self) -> usize {
        (0..self.side_one).map(|i| self.neighbors(i).len()).sum()
    }

    /// Side 1: the two forests induce different vertex bipartitions.
    /// Side 2: some edge of `T1 Δ T2` completes `F` to a spanning tree.
    pub fn is_special(&self, i: usize) -> bool {
        let (side, a, b, c) = self.decode(i);
        match side {
            Side::One => self.side_mask[a] != self.side_mask[b],
            Side::Two => !self.trees[a]
                .symmetric_difference(self.trees[b])
                .intersection(self.crossing[c])
                .is_empty(),
        }
    }

    /// `q(F)` on side 2, `q(F1)` on non-special side 1, `None` otherwise.
    pub fn q(&self, i: usize) -> Option<&Rational> {
        let (side, a, _, c) = self.decode(i);
        match side {
            Side::Two => Some(&self.q[c]),
            Side::One if !self.is_special(i) => Some(&self.q[a]),
            Side::One => None,
        }
    }

    pub fn component_of(&self, i: usize) -> usize {
        self.component[i]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn is_special_free(&self, c: usize) -> bool {
        self.special_free[c]
    }

    pub fn special_count(&self) -> usize {
        (0..self.len()).filter(|&i| self.is_special(i)).count()
    }
}

/// Per-`(t, A)` caches for the weights `xi` and `zeta`.
pub struct WeightContext<'a> {
    tg: &'a TripleGraph,
    w: RationalMatrix,
    tree_mono: Vec<Rational>,
    forest_mono: Vec<Rational>,
    forest_pairs: HashMap<(usize, usize), (Rational, Rational)>,
    tree_pairs: HashMap<(usize, usize), Rational>,
}

fn monomial(y: &[Rational], s: EdgeSubset) -> Rational {
    s.iter().fold(Rational::from_integer(1.into()), |acc, e| acc * &y[e])
}

impl<'a> WeightContext<'a> {
    /// Weights at `Y = diag(t y0)` and `Y + A`.
    pub fn new(tg: &'a TripleGraph, spec: &PerturbationSpec, t: &Rational) -> Result<Self> {
        let m = tg.graph.m();
        if spec.m() != m {
            return Err(Error::InvalidSpec(format!("spec has {} edges, graph has {m}", spec.m())));
        }
        let y = spec.scaled(t);
        Ok(WeightContext {
            tg,
            w: spec.weights(t),
            tree_mono: tg.trees.iter().map(|s| monomial(&y, s.complement(m))).collect(),
            forest_mono: tg.forests.iter().map(|s| monomial(&y, s.complement(m))).collect(),
            forest_pairs: HashMap::new(),
            tree_pairs: HashMap::new(),
        })
    }

    fn mixed_minor(&self, i: EdgeSubset, j: EdgeSubset) -> Rational {
        let m = self.tg.graph.m();
        self.w
            .minor_det(&i.complement(m).to_vec(), &j.complement(m).to_vec())
            .expect("complements of equal-size sets")
    }

    /// `(det (Y+A)_{F1^c,F2^c}, sum_ab Q_ab n_a(F1) n_b(F2) det (Y+A)_{F1^c,F2^c})`.
    fn forest_pair(&mut self, a: usize, b: usize) -> &(Rational, Rational) {
        if !self.forest_pairs.contains_key(&(a, b)) {
            let tg = self.tg;
            let det = self.mixed_minor(tg.forests[a], tg.forests[b]);
            let dim = tg.mom.dim();
            let mut nq = Rational::zero();
            for x in 0..dim {
                for z in 0..dim {
                    let q = &tg.mom.form()[(x, z)];
                    if !q.is_zero() {
                        nq += q * &tg.forest_minor[a][x] * &tg.forest_minor[b][z];
                    }
                }
            }
            let weighted = nq * &det;
            self.forest_pairs.insert((a, b), (det, weighted));
        }
        &self.forest_pairs[&(a, b)]
    }

    fn tree_pair(&mut self, a: usize, b: usize) -> &Rational {
        if !self.tree_pairs.contains_key(&(a, b)) {
            let det = self.mixed_minor(self.tg.trees[a], self.tg.trees[b]);
            self.tree_pairs.insert((a, b), det);
        }
        &self.tree_pairs[&(a, b)]
    }

    /// `(xi, zeta)` of vertex `i`.
    pub fn xi_zeta(&mut self, i: usize) -> (Rational, Rational) {
        let tg = self.tg;
        let (side, a, b, c) = tg.decode(i);
        match side {
            Side::One => {
                let mono = self.tree_mono[c].clone();
                let (det, weighted) = self.forest_pair(a, b);
                (det * &mono, weighted * &mono)
            }
            Side::Two => {
                let mono = self.forest_mono[c].clone();
                let xi = self.tree_pair(a, b) * &mono;
                let factor = &tg.tree_minor[a] * &tg.tree_minor[b] * &tg.q[c];
                let zeta = factor * &xi;
                (xi, zeta)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightIdentityReport {
    #[serde(serialize_with = "ser::one")]
    pub t: Rational,
    #[serde(serialize_with = "ser::one")]
    pub side_one_sum: Rational,
    #[serde(serialize_with = "ser::one")]
    pub g2_f1: Rational,
    #[serde(serialize_with = "ser::one")]
    pub side_two_sum: Rational,
    #[serde(serialize_with = "ser::one")]
    pub g1_f2: Rational,
    pub side_one_holds: bool,
    pub side_two_holds: bool,
}

impl WeightIdentityReport {
    pub fn holds(&self) -> bool {
        self.side_one_holds && self.side_two_holds
    }
}

/// Sums `zeta` over each side and compares with `g2 f1` and `g1 f2`.
pub fn weight_identities(tg: &TripleGraph, spec: &PerturbationSpec, t: &Rational) -> Result<WeightIdentityReport> {
    let ev = Evaluator::new(&tg.graph, &tg.mom)?;
    let (f1, f2) = ev.f_checked(&spec.scaled(t))?;
    let (g1, g2) = ev.g_raw(&spec.weights(t))?;
    let mut ctx = WeightContext::new(tg, spec, t)?;
    let mut sums = [Rational::zero(), Rational::zero()];
    for i in 0..tg.len() {
        let (_, zeta) = ctx.xi_zeta(i);
        sums[usize::from(i >= tg.side_one)] += zeta;
    }
    let [side_one_sum, side_two_sum] = sums;
    let g2_f1 = g2 * &f1;
    let g1_f2 = g1 * &f2;
    Ok(WeightIdentityReport {
        t: t.clone(),
        side_one_holds: side_one_sum == g2_f1,
        side_two_holds: side_two_sum == g1_f2,
        side_one_sum,
        g2_f1,
        side_two_sum,
        g1_f2,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QBalanceFailure {
    pub component: usize,
    #[serde(serialize_with = "ser::one")]
    pub side_one: Rational,
    #[serde(serialize_with = "ser::one")]
    pub side_two: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QBalanceReport {
    pub components: usize,
    pub special_free: usize,
    pub balanced: usize,
    /// `q(F1) = q(F2)` on every non-special side-1 vertex.
    pub q_consistent: bool,
    pub failures: Vec<QBalanceFailure>,
}

impl QBalanceReport {
    pub fn holds(&self) -> bool {
        self.q_consistent && self.failures.is_empty()
    }
}

/// Compares the two sides' sums of `q` on every special-free component.
pub fn q_balance_check(tg: &TripleGraph) -> QBalanceReport {
    let mut q_consistent = true;
    let mut failures = Vec::new();
    let mut special_free = 0;
    for (c, members) in tg.components.iter().enumerate() {
        if !tg.special_free[c] {
            continue;
        }
        special_free += 1;
        let mut sums = [Rational::zero(), Rational::zero()];
        for &i in members {
            let (side, a, b, _) = tg.decode(i);
            if side == Side::One && tg.q[a] != tg.q[b] {
                q_consistent = false;
            }
            sums[usize::from(side == Side::Two)] += tg.q(i).expect("defined off special vertices");
        }
        let [side_one, side_two] = sums;
        if side_one != side_two {
            failures.push(QBalanceFailure {
                component: c,
                side_one,
                side_two,
            });
        }
    }
    QBalanceReport {
        components: tg.components.len(),
        special_free,
        balanced: special_free - failures.len(),
        q_consistent,
        failures,
    }
}

/// Spread of `zeta / q` over a special-free component, relative to `f1^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaSpread {
    pub component: usize,
    pub vertices: usize,
    #[serde(serialize_with = "ser::opt")]
    pub spread_over_f1_squared: Option<Rational>,
}

pub fn zeta_spread(tg: &TripleGraph, spec: &PerturbationSpec, t: &Rational) -> Result<Vec<ZetaSpread>> {
    let y = spec.scaled(t);
    let ev = Evaluator::new(&tg.graph, &tg.mom)?;
    let (f1, _) = ev.f_checked(&y)?;
    let f1_sq = &f1 * &f1;
    let mut ctx = WeightContext::new(tg, spec, t)?;
    let mut out = Vec::new();
    for (c, members) in tg.components.iter().enumerate() {
        if !tg.special_free[c] {
            continue;
        }
        let ratios: Vec<Rational> = members
            .iter()
            .filter_map(|&i| {
                let q = tg.q(i)?.clone();
                if q.is_zero() {
                    return None;
                }
                Some(ctx.xi_zeta(i).1 / q)
            })
            .collect();
        let spread = match (ratios.iter().min(), ratios.iter().max()) {
            (Some(lo), Some(hi)) => Some((hi - lo) / &f1_sq),
            _ => None,
        };
        out.push(ZetaSpread {
            component: c,
            vertices: members.len(),
            spread_over_f1_squared: spread,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectionReport {
    pub component: usize,
    pub vertices: usize,
    /// The three vertex relations coincide.
    pub relations_agree: bool,
    pub classes: VertexPartition,
    /// The per-class trees are the same for every member.
    pub taus_constant: bool,
    pub taus_are_trees: bool,
    /// `T1` and `T2` agree outside the classes on every side-2 member.
    pub trees_agree_outside: bool,
    pub edge_multiset_constant: bool,
    pub g0_vertices: usize,
    pub g0_edges: usize,
    pub embedding: EmbeddingReport,
}

impl ProjectionReport {
    pub fn holds(&self) -> bool {
        self.relations_agree
            && self.taus_constant
            && self.taus_are_trees
            && self.trees_agree_outside
            && self.edge_multiset_constant
            && self.embedding.holds()
    }
}

/// Contracts the classes of a special-free component, builds the exchange
/// graph of the contracted multigraph `G0` and checks that the projection is
/// a graph isomorphism onto it.
pub fn projection_iso_check(tg: &TripleGraph, component: usize, budget: usize) -> Result<ProjectionReport> {
    if !tg.special_free[component] {
        return Err(Error::SpecialComponent(component));
    }
    let g = &tg.graph;
    let n = g.n();
    let members = &tg.components[component];
    let coarsest = VertexPartition::from_labels(&vec![0; n]);
    let mut rel = [coarsest.clone(), coarsest.clone(), coarsest];
    let rest_partition = |tree: EdgeSubset, forest_idx: usize| {
        VertexPartition::from_labels(&g.component_labels(tree.difference(tg.crossing[forest_idx])))
    };
    for &i in members {
        let (side, a, b, c) = tg.decode(i);
        match side {
            Side::Two => {
                rel[0] = rel[0].meet(&rest_partition(tg.trees[a], c));
                rel[1] = rel[1].meet(&rest_partition(tg.trees[b], c));
            }
            Side::One => rel[2] = rel[2].meet(&rest_partition(tg.trees[c], a)),
        }
    }
    let relations_agree = rel[0] == rel[1] && rel[1] == rel[2];
    let classes = rel[0].clone();

    let taus_of = |v: &TripleVertex| -> Vec<[EdgeSubset; 3]> {
        classes
            .blocks()
            .iter()
            .map(|x| v.parts.map(|p| g.induced_edges(x, p)))
            .collect()
    };
    let reference = taus_of(&tg.vertex(members[0]));
    let taus_constant = members.iter().all(|&i| taus_of(&tg.vertex(i)) == reference);
    let taus_are_trees = classes.blocks().iter().zip(&reference).all(|(x, taus)| {
        taus.iter().all(|&t| t.len() + 1 == x.len() && g.is_acyclic(t))
    });
    let tau_union = |k: usize| {
        reference
            .iter()
            .fold(EdgeSubset::EMPTY, |acc, taus| acc.union(taus[k]))
    };
    let (tau1, tau2) = (tau_union(0), tau_union(1));

    let cross = g.crossing_edges(&classes);
    let split = |i: usize| -> (EdgeSubset, EdgeSubset) {
        let v = tg.vertex(i);
        let [a, b, c] = v.parts;
        match v.side {
            Side::Two => (a.intersection(cross), c.intersection(cross)),
            Side::One => {
                let _ = b;
                (a.intersection(cross), c.intersection(cross))
            }
        }
    };
    let mut trees_agree_outside = true;
    for &i in members {
        let v = tg.vertex(i);
        if v.side == Side::Two && v.parts[0].difference(tau1) != v.parts[1].difference(tau2) {
            trees_agree_outside = false;
        }
    }
    let (e12, e3) = split(members[0]);
    let (union, doubled) = (e12.union(e3), e12.intersection(e3));
    let edge_multiset_constant = members.iter().all(|&i| {
        let (a, b) = split(i);
        a.union(b) == union && a.intersection(b) == doubled
    });

    let mut g0_edges = Vec::new();
    let mut copy0 = HashMap::new();
    let mut copy1 = HashMap::new();
    for e in union {
        let edge = g.edge(e);
        let ends = (classes.block_of(edge.tail), classes.block_of(edge.head));
        copy0.insert(e, g0_edges.len());
        g0_edges.push(ends);
        if doubled.contains(e) {
            copy1.insert(e, g0_edges.len());
            g0_edges.push(ends);
        }
    }
    let g0 = Multigraph::new(classes.len(), g0_edges.iter().copied())?;
    let project = |i: usize| -> ExchangeVertex {
        let (a, b) = split(i);
        let first: EdgeSubset = a.iter().map(|e| copy0[&e]).collect();
        let second: EdgeSubset = b
            .iter()
            .map(|e| *copy1.get(&e).unwrap_or(&copy0[&e]))
            .collect();
        match tg.vertex(i).side {
            Side::One => ExchangeVertex::side_one(first, second),
            Side::Two => ExchangeVertex::side_two(first, second),
        }
    };

    let embedding = match build_exchange_graph(&g0, budget) {
        Ok(h0) => {
            let image: Vec<Option<usize>> = members.iter().map(|&i| h0.find(&project(i))).collect();
            let position: HashMap<usize, usize> =
                members.iter().enumerate().map(|(k, &i)| (i, k)).collect();
            let source_edges: Vec<(usize, usize)> = members
                .iter()
                .filter(|&&i| i < tg.side_one)
                .flat_map(|&i| {
                    tg.neighbors(i)
                        .into_iter()
                        .map(|(j, _)| (position[&i], position[&j]))
                        .collect::<Vec<_>>()
                })
                .collect();
            check_isomorphism(&image, &source_edges, &h0)
        }
        Err(Error::NotConnected) => EmbeddingReport::default(),
        Err(e) => return Err(e),
    };

    Ok(ProjectionReport {
        component,
        vertices: members.len(),
        relations_agree,
        classes: classes.clone(),
        taus_constant,
        taus_are_trees,
        trees_agree_outside,
        edge_multiset_constant,
        g0_vertices: g0.n(),
        g0_edges: g0.m(),
        embedding,
    })
}
