//! Cycle space, momentum lifts and the matrices `M` (cycle basis) and `N`
//! (cycle basis extended by a lift of the external momenta).

mod blocks;

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Zero};
use petgraph::unionfind::UnionFind;

use crate::edgeset::EdgeSubset;
use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::multigraph::Multigraph;
use crate::Rational;

pub use blocks::{assemble_blocks, block_inverse_identities, schur_ratio, BlockInverseReport};

/// Incidence matrix of the boundary map: column `e` is `head(e) - tail(e)`.
pub fn boundary_matrix(g: &Multigraph) -> RationalMatrix {
    let mut b = RationalMatrix::zeros(g.n(), g.m());
    for (e, edge) in g.edges().iter().enumerate() {
        if edge.is_loop() {
            continue;
        }
        b[(edge.head, e)] += Rational::one();
        b[(edge.tail, e)] -= Rational::one();
    }
    b
}

/// Lexicographically least spanning tree (greedy over edge ids).
pub fn canonical_tree(g: &Multigraph) -> Result<EdgeSubset> {
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let mut uf = UnionFind::new(g.n());
    Ok((0..g.m())
        .filter(|&e| {
            let edge = g.edge(e);
            uf.union(edge.tail, edge.head)
        })
        .collect())
}

/// Fundamental-cycle basis of `H_1` relative to a spanning tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleBasis {
    pub tree: EdgeSubset,
    /// Non-tree edge defining each row, in increasing id order.
    pub defining_edges: Vec<usize>,
    /// `h x m` matrix with entries in {-1, 0, 1}.
    pub matrix: RationalMatrix,
}

impl CycleBasis {
    pub fn genus(&self) -> usize {
        self.matrix.rows()
    }
}

/// Tree paths `from -> to` as `(edge, +1 if traversed tail->head else -1)`.
fn tree_path(g: &Multigraph, tree: EdgeSubset, from: usize, to: usize) -> Vec<(usize, i64)> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.n()];
    for e in tree {
        let edge = g.edge(e);
        adj[edge.tail].push((edge.head, e));
        adj[edge.head].push((edge.tail, e));
    }
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; g.n()];
    let mut seen = vec![false; g.n()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(v) = stack.pop() {
        if v == to {
            break;
        }
        for &(w, e) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some((v, e));
                stack.push(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut v = to;
    while v != from {
        let (u, e) = parent[v].expect("tree spans the graph");
        let sign = if g.edge(e).tail == u { 1 } else { -1 };
        path.push((e, sign));
        v = u;
    }
    path.reverse();
    path
}

/// One row per non-tree edge `e`: `e` with coefficient +1, closed by the
/// tree path from `head(e)` back to `tail(e)`.
pub fn cycle_basis(g: &Multigraph, tree: EdgeSubset) -> Result<CycleBasis> {
    if !g.is_spanning_tree(tree) {
        return Err(Error::NotSpanningTree(tree));
    }
    let defining_edges: Vec<usize> = tree.complement(g.m()).to_vec();
    let mut matrix = RationalMatrix::zeros(defining_edges.len(), g.m());
    for (row, &e) in defining_edges.iter().enumerate() {
        matrix[(row, e)] = Rational::one();
        let edge = g.edge(e);
        for (f, sign) in tree_path(g, tree, edge.head, edge.tail) {
            matrix[(row, f)] = Rational::from_integer(sign.into());
        }
    }
    Ok(CycleBasis {
        tree,
        defining_edges,
        matrix,
    })
}

pub fn canonical_cycle_basis(g: &Multigraph) -> Result<CycleBasis> {
    cycle_basis(g, canonical_tree(g)?)
}

/// An edge vector `omega` with `boundary(omega) = p` for one momentum coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentumLift {
    pub coordinate: usize,
    pub omega: Vec<Rational>,
}

/// Lift supported on the canonical tree.
pub fn momentum_lift(g: &Multigraph, p: &[Rational], coordinate: usize) -> Result<MomentumLift> {
    momentum_lift_on(g, p, coordinate, canonical_tree(g)?)
}

/// Lift supported on `tree`, solved by leaf elimination: the tree edge above
/// a subtree carries the subtree's total momentum.
pub fn momentum_lift_on(
    g: &Multigraph,
    p: &[Rational],
    coordinate: usize,
    tree: EdgeSubset,
) -> Result<MomentumLift> {
    if p.len() != g.n() {
        return Err(Error::InvalidMomenta(format!(
            "{} vertex values for {} vertices",
            p.len(),
            g.n()
        )));
    }
    if !p.iter().sum::<Rational>().is_zero() {
        return Err(Error::MomentumNotConserved(coordinate));
    }
    if !g.is_spanning_tree(tree) {
        return Err(Error::NotSpanningTree(tree));
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.n()];
    for e in tree {
        let edge = g.edge(e);
        adj[edge.tail].push((edge.head, e));
        adj[edge.head].push((edge.tail, e));
    }
    // DFS preorder from vertex 0, then accumulate subtree sums in reverse
    let mut order = Vec::with_capacity(g.n());
    let mut parent_edge: Vec<Option<usize>> = vec![None; g.n()];
    let mut parent: Vec<usize> = vec![usize::MAX; g.n()];
    let mut seen = vec![false; g.n()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &(w, e) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                parent_edge[w] = Some(e);
                stack.push(w);
            }
        }
    }
    let mut subtotal: Vec<Rational> = p.to_vec();
    let mut omega = vec![Rational::zero(); g.m()];
    for &v in order.iter().rev() {
        let Some(e) = parent_edge[v] else { continue };
        let total = subtotal[v].clone();
        omega[e] = if g.edge(e).head == v { total.clone() } else { -total.clone() };
        subtotal[parent[v]] += total;
    }
    Ok(MomentumLift { coordinate, omega })
}

/// `N`: the rows of `M` followed by `omega`.
pub fn extended_matrix(basis: &CycleBasis, lift: &MomentumLift) -> Result<RationalMatrix> {
    let row = RationalMatrix::from_rows(lift.omega.len(), vec![lift.omega.clone()])?;
    basis.matrix.vstack(&row)
}

/// Coefficients `det(X_I)^2` of `prod_{i in I} W_ii` over all `r`-subsets `I`
/// of columns with a nonzero maximal minor.
pub fn cauchy_binet_expand(
    x: &RationalMatrix,
    w: &RationalMatrix,
) -> Result<BTreeMap<EdgeSubset, Rational>> {
    if !w.is_square() || w.rows() != x.cols() {
        return Err(Error::ShapeMismatch {
            op: "cauchy_binet_expand",
            left: x.shape(),
            right: w.shape(),
        });
    }
    if !w.is_diagonal() {
        return Err(Error::NotDiagonal);
    }
    if x.cols() > crate::edgeset::MAX_EDGES {
        return Err(Error::TooManyEdges(x.cols()));
    }
    let rows: Vec<usize> = (0..x.rows()).collect();
    let mut out = BTreeMap::new();
    if x.rows() > x.cols() {
        return Ok(out);
    }
    for cols in (0..x.cols()).combinations(x.rows()) {
        let d = x.minor_det(&rows, &cols)?;
        if !d.is_zero() {
            out.insert(cols.into_iter().collect(), &d * &d);
        }
    }
    Ok(out)
}

/// `sum_I coeff_I * prod_{i in I} w_i`.
pub fn evaluate_expansion(expansion: &BTreeMap<EdgeSubset, Rational>, w: &[Rational]) -> Rational {
    expansion
        .iter()
        .map(|(s, c)| s.iter().fold(c.clone(), |acc, i| acc * &w[i]))
        .sum()
}
