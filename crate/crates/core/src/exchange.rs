//! Exchange graph between spanning trees and spanning 2-forests: pivoting,
//! components, saturated sets and the classification of components.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use itertools::Itertools;
use petgraph::unionfind::UnionFind;
use serde::{Serialize, Serializer};

use crate::edgeset::EdgeSubset;
use crate::error::{Error, Result};
use crate::multigraph::{Multigraph, VertexPartition};

/// Default cap on the number of exchange-graph vertices.
pub const DEFAULT_VERTEX_BUDGET: usize = 200_000;

/// Largest vertex count accepted by the subset search for saturated sets.
pub const MAX_SATURATION_VERTICES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// `(forest, tree)`
    One,
    /// `(tree, forest)`
    Two,
}

impl Serialize for Side {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(match self {
            Side::One => 1,
            Side::Two => 2,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ExchangeVertex {
    pub side: Side,
    pub first: EdgeSubset,
    pub second: EdgeSubset,
}

impl ExchangeVertex {
    pub fn side_one(forest: EdgeSubset, tree: EdgeSubset) -> Self {
        ExchangeVertex {
            side: Side::One,
            first: forest,
            second: tree,
        }
    }

    pub fn side_two(tree: EdgeSubset, forest: EdgeSubset) -> Self {
        ExchangeVertex {
            side: Side::Two,
            first: tree,
            second: forest,
        }
    }

    pub fn tree(&self) -> EdgeSubset {
        match self.side {
            Side::One => self.second,
            Side::Two => self.first,
        }
    }

    pub fn forest(&self) -> EdgeSubset {
        match self.side {
            Side::One => self.first,
            Side::Two => self.second,
        }
    }

    pub fn union(&self) -> EdgeSubset {
        self.first.union(self.second)
    }
}

impl std::fmt::Display for ExchangeVertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let side = match self.side {
            Side::One => 1,
            Side::Two => 2,
        };
        write!(f, "{side}:({}, {})", self.first, self.second)
    }
}

fn illegal(edge: usize, reason: &str) -> Error {
    Error::IllegalPivot {
        edge,
        reason: reason.to_string(),
    }
}

/// The neighbour of `v` across the pivot involving `e`.
pub fn pivot(g: &Multigraph, v: &ExchangeVertex, e: usize) -> Result<ExchangeVertex> {
    let (t, f) = (v.tree(), v.forest());
    if !t.is_disjoint(f) || !g.is_spanning_tree(t) || !g.is_spanning_2forest(f) {
        return Err(illegal(e, "not a vertex of the exchange graph"));
    }
    if !t.contains(e) {
        return Err(illegal(e, "edge is not in the tree"));
    }
    if !g.is_spanning_2forest(t.without(e)) {
        return Err(illegal(e, "T - e is not a spanning 2-forest"));
    }
    if !g.is_spanning_tree(f.with(e)) {
        return Err(illegal(e, "F + e is not a spanning tree"));
    }
    Ok(match v.side {
        Side::One => ExchangeVertex::side_two(f.with(e), t.without(e)),
        Side::Two => ExchangeVertex::side_one(t.without(e), f.with(e)),
    })
}

/// The exchange graph of a connected multigraph, with components numbered in
/// order of their first vertex.
#[derive(Clone, Debug)]
pub struct ExchangeGraph {
    graph: Multigraph,
    vertices: Vec<ExchangeVertex>,
    /// `(neighbour, pivot edge)`
    adjacency: Vec<Vec<(usize, usize)>>,
    component: Vec<usize>,
    components: Vec<Vec<usize>>,
    index: HashMap<ExchangeVertex, usize>,
}

pub fn build_exchange_graph(g: &Multigraph, budget: usize) -> Result<ExchangeGraph> {
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let trees = g.spanning_trees().trees;
    let forests = if g.n() >= 2 {
        g.spanning_2forests()?
    } else {
        Vec::new()
    };
    let pairs = trees
        .iter()
        .map(|t| forests.iter().filter(|f| f.is_disjoint(*t)).count())
        .sum::<usize>();
    if 2 * pairs > budget {
        return Err(Error::BudgetExceeded {
            what: "exchange graph vertices",
            count: 2 * pairs,
            cap: budget,
        });
    }
    let crossing: HashMap<EdgeSubset, EdgeSubset> = forests
        .iter()
        .map(|&f| {
            let p = g.forest_partition(f).expect("enumerated 2-forest");
            (f, g.crossing_edges(&p))
        })
        .collect();

    let mut vertices = Vec::with_capacity(2 * pairs);
    for &t in &trees {
        for &f in forests.iter().filter(|f| f.is_disjoint(t)) {
            vertices.push(ExchangeVertex::side_one(f, t));
            vertices.push(ExchangeVertex::side_two(t, f));
        }
    }
    let index: HashMap<ExchangeVertex, usize> =
        vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();

    let mut adjacency = vec![Vec::new(); vertices.len()];
    let mut uf = UnionFind::new(vertices.len());
    for (i, v) in vertices.iter().enumerate() {
        let (t, f) = (v.tree(), v.forest());
        for e in t.intersection(crossing[&f]) {
            let w = match v.side {
                Side::One => ExchangeVertex::side_two(f.with(e), t.without(e)),
                Side::Two => ExchangeVertex::side_one(t.without(e), f.with(e)),
            };
            let j = index[&w];
            adjacency[i].push((j, e));
            uf.union(i, j);
        }
    }
    let mut label_of_root: HashMap<usize, usize> = HashMap::new();
    let mut component = Vec::with_capacity(vertices.len());
    let mut components: Vec<Vec<usize>> = Vec::new();
    for i in 0..vertices.len() {
        let root = uf.find(i);
        let next = label_of_root.len();
        let c = *label_of_root.entry(root).or_insert(next);
        if c == components.len() {
            components.push(Vec::new());
        }
        components[c].push(i);
        component.push(c);
    }
    Ok(ExchangeGraph {
        graph: g.clone(),
        vertices,
        adjacency,
        component,
        components,
        index,
    })
}

impl ExchangeGraph {
    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn vertices(&self) -> &[ExchangeVertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &ExchangeVertex {
        &self.vertices[i]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn find(&self, v: &ExchangeVertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// `(neighbour, pivot edge)` pairs of vertex `i`.
    pub fn neighbors(&self, i: usize) -> &[(usize, usize)] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    /// Each undirected edge once as `(i, j, pivot edge)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (i, adj) in self.adjacency.iter().enumerate() {
            for &(j, e) in adj {
                if i < j {
                    out.push((i, j, e));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn component_of(&self, i: usize) -> usize {
        self.component[i]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// True iff there is exactly one component.
    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    /// Graphviz rendering: one cluster per component, side 1 in blue and
    /// side 2 in red, edges labelled by the pivot edge.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph exchange {\n  node [style=filled, shape=box];\n");
        for (c, members) in self.components.iter().enumerate() {
            let _ = writeln!(out, "  subgraph cluster_{c} {{\n    label=\"component {c}\";");
            for &i in members {
                let v = &self.vertices[i];
                let color = match v.side {
                    Side::One => "lightblue",
                    Side::Two => "salmon",
                };
                let _ = writeln!(
                    out,
                    "    v{i} [label=\"{} | {}\", fillcolor={color}];",
                    v.first, v.second
                );
            }
            out.push_str("  }\n");
        }
        for (i, j, e) in self.edges() {
            let _ = writeln!(out, "  v{i} -- v{j} [label=\"e{e}\"];");
        }
        out.push_str("}\n");
        out
    }
}

/// A spanning tree `T` and 2-forest `F` with `T ⊔ F = s`, if one exists.
pub fn split_tree_forest(g: &Multigraph, s: EdgeSubset) -> Option<(EdgeSubset, EdgeSubset)> {
    let n = g.n();
    if n < 2 || s.len() != 2 * n - 3 {
        return None;
    }
    s.iter()
        .combinations(n - 1)
        .map(|c| c.into_iter().collect::<EdgeSubset>())
        .find(|&t| g.is_spanning_tree(t) && g.is_spanning_2forest(s.difference(t)))
        .map(|t| (t, s.difference(t)))
}

/// `|G0[X]| = 2|X| - 2`.
pub fn is_saturated(g: &Multigraph, g0: EdgeSubset, x: &[usize]) -> bool {
    !x.is_empty() && g.induced_edges(x, g0).len() + 2 == 2 * x.len()
}

/// Partition of `V` into maximal saturated sets of `g0`. Overlapping
/// saturated sets have a saturated union, so merging every saturated subset
/// yields the maximal ones.
pub fn saturated_partition(g: &Multigraph, g0: EdgeSubset) -> Result<VertexPartition> {
    if split_tree_forest(g, g0).is_none() {
        return Err(Error::NotTreeForestSplit(g0));
    }
    let n = g.n();
    if n > MAX_SATURATION_VERTICES {
        return Err(Error::BudgetExceeded {
            what: "vertices for saturated-set search",
            count: n,
            cap: MAX_SATURATION_VERTICES,
        });
    }
    let ends: Vec<u32> = g0
        .iter()
        .map(|e| {
            let edge = g.edge(e);
            (1u32 << edge.tail) | (1u32 << edge.head)
        })
        .collect();
    let mut uf = UnionFind::new(n);
    for mask in 1u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if size < 2 {
            continue;
        }
        let inside = ends.iter().filter(|&&m| m & mask == m).count();
        if inside + 2 == 2 * size {
            let first = mask.trailing_zeros() as usize;
            for v in 0..n {
                if mask & (1 << v) != 0 {
                    uf.union(first, v);
                }
            }
        }
    }
    let labels: Vec<usize> = (0..n).map(|v| uf.find(v)).collect();
    Ok(VertexPartition::from_labels(&labels))
}

fn coarsest(n: usize) -> VertexPartition {
    VertexPartition::from_labels(&vec![0; n])
}

/// The vertex relations of a component computed four ways, plus the
/// saturated partition of its spanning subgraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    /// From side-1 members: components of `T \ E(P(F))`.
    pub from_side_one: VertexPartition,
    /// From side-2 members: components of `T \ E(P(F))`.
    pub from_side_two: VertexPartition,
    /// Meet of `P(F)` over side-1 members.
    pub split_side_one: VertexPartition,
    /// Meet of `P(F)` over side-2 members.
    pub split_side_two: VertexPartition,
    pub saturated: VertexPartition,
}

impl EquivalenceReport {
    pub fn partition(&self) -> &VertexPartition {
        &self.from_side_one
    }

    pub fn relations_agree(&self) -> bool {
        self.from_side_one == self.from_side_two
    }

    pub fn splits_agree(&self) -> bool {
        self.from_side_one == self.split_side_one && self.from_side_one == self.split_side_two
    }

    pub fn matches_saturated(&self) -> bool {
        self.from_side_one == self.saturated
    }

    pub fn consistent(&self) -> bool {
        self.relations_agree() && self.splits_agree() && self.matches_saturated()
    }
}

pub fn vertex_equivalence(h: &ExchangeGraph, component: usize) -> Result<EquivalenceReport> {
    let g = h.graph();
    let members = &h.components()[component];
    let n = g.n();
    let mut rel = [coarsest(n), coarsest(n)];
    let mut split = [coarsest(n), coarsest(n)];
    for &i in members {
        let v = h.vertex(i);
        let side = match v.side {
            Side::One => 0,
            Side::Two => 1,
        };
        let p = g.forest_partition(v.forest())?;
        let rest = v.tree().difference(g.crossing_edges(&p));
        rel[side] = rel[side].meet(&VertexPartition::from_labels(&g.component_labels(rest)));
        split[side] = split[side].meet(&p);
    }
    let g0 = h.vertex(members[0]).union();
    let [from_side_one, from_side_two] = rel;
    let [split_side_one, split_side_two] = split;
    Ok(EquivalenceReport {
        from_side_one,
        from_side_two,
        split_side_one,
        split_side_two,
        saturated: saturated_partition(g, g0)?,
    })
}

/// `(G0; saturated blocks X_j; (A[X_j], B[X_j]))` of a vertex `(A, B)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ComponentProfile {
    pub g0: EdgeSubset,
    pub saturated: VertexPartition,
    pub block_trees: Vec<(EdgeSubset, EdgeSubset)>,
}

impl ComponentProfile {
    /// Union of the block trees.
    pub fn block_edges(&self) -> EdgeSubset {
        self.block_trees
            .iter()
            .fold(EdgeSubset::EMPTY, |acc, (a, b)| acc.union(*a).union(*b))
    }
}

#[derive(Default)]
struct ProfileCache {
    saturated: HashMap<EdgeSubset, VertexPartition>,
}

impl ProfileCache {
    fn profile(&mut self, g: &Multigraph, v: &ExchangeVertex) -> Result<ComponentProfile> {
        let g0 = v.union();
        if !self.saturated.contains_key(&g0) {
            self.saturated.insert(g0, saturated_partition(g, g0)?);
        }
        let saturated = self.saturated[&g0].clone();
        let block_trees = saturated
            .blocks()
            .iter()
            .map(|x| (g.induced_edges(x, v.first), g.induced_edges(x, v.second)))
            .collect();
        Ok(ComponentProfile {
            g0,
            saturated,
            block_trees,
        })
    }
}

/// Profile of the first vertex of `component`.
pub fn component_profile(h: &ExchangeGraph, component: usize) -> Result<ComponentProfile> {
    let rep = h.components()[component][0];
    ProfileCache::default().profile(h.graph(), h.vertex(rep))
}

/// Outcome of comparing a graph mapped vertex-wise onto an exchange graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub injective: bool,
    pub surjective: bool,
    pub edges_preserved: bool,
    pub target_connected: bool,
}

impl EmbeddingReport {
    pub fn holds(&self) -> bool {
        self.injective && self.surjective && self.edges_preserved && self.target_connected
    }
}

/// Checks that `image` (indexed by local source vertex) is a graph
/// isomorphism from the source onto a connected `target`. `source_edges`
/// use local indices.
pub fn check_isomorphism(
    image: &[Option<usize>],
    source_edges: &[(usize, usize)],
    target: &ExchangeGraph,
) -> EmbeddingReport {
    let mapped: Vec<usize> = image.iter().flatten().copied().collect();
    let distinct: BTreeSet<usize> = mapped.iter().copied().collect();
    let injective = mapped.len() == image.len() && distinct.len() == mapped.len();
    let surjective = distinct.len() == target.len();
    let norm = |a: usize, b: usize| (a.min(b), a.max(b));
    let source: Option<BTreeSet<(usize, usize)>> = source_edges
        .iter()
        .map(|&(a, b)| Some(norm(image[a]?, image[b]?)))
        .collect();
    let target_edges: BTreeSet<(usize, usize)> =
        target.edges().into_iter().map(|(a, b, _)| (a, b)).collect();
    let source_count: BTreeSet<(usize, usize)> =
        source_edges.iter().map(|&(a, b)| norm(a, b)).collect();
    let edges_preserved = match source {
        Some(s) => s.len() == source_count.len() && s == target_edges,
        None => false,
    };
    EmbeddingReport {
        injective,
        surjective,
        edges_preserved,
        target_connected: target.is_connected(),
    }
}

/// Contracts the block trees of `profile` inside `G0` and checks that the
/// induced vertex map is an isomorphism onto the (connected) exchange graph
/// of the contraction.
pub fn contraction_check(
    h: &ExchangeGraph,
    component: usize,
    profile: &ComponentProfile,
    budget: usize,
) -> Result<EmbeddingReport> {
    let g = h.graph();
    let (sub, ids) = g.spanning_subgraph(profile.g0);
    let local = |s: EdgeSubset| -> EdgeSubset {
        s.iter()
            .filter_map(|e| ids.binary_search(&e).ok())
            .collect()
    };
    let quotient = sub.contract(local(profile.block_edges()));
    let target = build_exchange_graph(&quotient.graph, budget)?;
    let project = |s: EdgeSubset| -> EdgeSubset {
        local(s)
            .iter()
            .filter_map(|e| quotient.edge_map[e])
            .collect()
    };
    let members = &h.components()[component];
    let position: HashMap<usize, usize> = members.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let image: Vec<Option<usize>> = members
        .iter()
        .map(|&i| {
            let v = h.vertex(i);
            target.find(&ExchangeVertex {
                side: v.side,
                first: project(v.first),
                second: project(v.second),
            })
        })
        .collect();
    let source_edges: Vec<(usize, usize)> = members
        .iter()
        .flat_map(|&i| h.neighbors(i).iter().map(move |&(j, _)| (i, j)))
        .filter(|(i, j)| i < j)
        .map(|(i, j)| (position[&i], position[&j]))
        .collect();
    Ok(check_isomorphism(&image, &source_edges, &target))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConnectivityCriterion {
    pub connected: bool,
    /// `E(G)` is a disjoint union of a spanning tree and a spanning 2-forest.
    pub splits: bool,
    /// All saturated sets of `E(G)` are singletons (only meaningful if `splits`).
    pub singletons: Option<bool>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub id: usize,
    pub size: usize,
    pub side_one: usize,
    pub side_two: usize,
    pub profile: ComponentProfile,
    pub g0_constant: bool,
    pub profile_constant: bool,
    pub blocks_valid: bool,
    pub exact_set: bool,
    pub equivalence: EquivalenceReport,
    pub witnesses_cross_blocks: bool,
    pub contraction: Option<EmbeddingReport>,
}

impl ComponentReport {
    pub fn passed(&self) -> bool {
        self.g0_constant
            && self.profile_constant
            && self.blocks_valid
            && self.exact_set
            && self.equivalence.consistent()
            && self.witnesses_cross_blocks
            && self.contraction.map_or(true, |c| c.holds())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    /// Budget exceeded: nothing below was checked.
    pub partial: bool,
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
    pub isolated_vertices: usize,
    pub criterion: ConnectivityCriterion,
    /// `sum_c |predicted(c) Δ members(c)|`.
    pub classification_mismatches: usize,
    pub component_reports: Vec<ComponentReport>,
    pub first_counterexample: Option<String>,
    pub passed: bool,
}

impl ClassificationReport {
    /// The report for an exchange graph over `budget`.
    pub fn partial(budget: usize) -> Self {
        ClassificationReport {
            partial: true,
            vertices: 0,
            edges: 0,
            components: 0,
            isolated_vertices: 0,
            criterion: ConnectivityCriterion::default(),
            classification_mismatches: 0,
            component_reports: Vec::new(),
            first_counterexample: Some(format!("exchange graph exceeds budget {budget}")),
            passed: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub budget: usize,
    pub contraction: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            budget: DEFAULT_VERTEX_BUDGET,
            contraction: true,
        }
    }
}

fn blocks_valid(g: &Multigraph, p: &ComponentProfile) -> bool {
    p.saturated
        .blocks()
        .iter()
        .zip(&p.block_trees)
        .all(|(x, &(a, b))| {
            let is_tree = |t: EdgeSubset| t.len() + 1 == x.len() && g.is_acyclic(t);
            is_tree(a)
                && is_tree(b)
                && a.is_disjoint(b)
                && g.induced_edges(x, p.g0) == a.union(b)
        })
}

/// Builds the exchange graph and checks the connectivity criterion and the
/// classification of components by `(G0; block trees)`.
pub fn verify_classification(g: &Multigraph, options: VerifyOptions) -> Result<ClassificationReport> {
    let h = match build_exchange_graph(g, options.budget) {
        Ok(h) => h,
        Err(Error::BudgetExceeded { .. }) => return Ok(ClassificationReport::partial(options.budget)),
        Err(e) => return Err(e),
    };
    verify_exchange_graph(&h, options)
}

pub fn verify_exchange_graph(h: &ExchangeGraph, options: VerifyOptions) -> Result<ClassificationReport> {
    let g = h.graph();
    let mut counterexample: Option<String> = None;
    let mut note = |msg: String| {
        if counterexample.is_none() {
            counterexample = Some(msg);
        }
    };

    let isolated: Vec<usize> = (0..h.len()).filter(|&i| h.degree(i) == 0).collect();
    if let Some(&i) = isolated.first() {
        note(format!("isolated vertex {}", h.vertex(i)));
    }

    let all = g.all_edges().difference(g.loops());
    let splits = h.vertices().iter().any(|v| v.union() == all);
    let singletons = if splits {
        Some(saturated_partition(g, all)?.all_singletons())
    } else {
        None
    };
    let criterion = ConnectivityCriterion {
        connected: h.is_connected(),
        splits,
        singletons,
        holds: h.is_connected() == (splits && singletons == Some(true)),
    };
    if !criterion.holds {
        note(format!("connectivity criterion fails: {criterion:?}"));
    }

    let mut cache = ProfileCache::default();
    let mut profiles = Vec::with_capacity(h.len());
    for v in h.vertices() {
        profiles.push(cache.profile(g, v)?);
    }
    let mut groups: HashMap<&ComponentProfile, Vec<usize>> = HashMap::new();
    for (i, p) in profiles.iter().enumerate() {
        groups.entry(p).or_default().push(i);
    }

    let mut mismatches = 0;
    let mut reports = Vec::with_capacity(h.component_count());
    for (c, members) in h.components().iter().enumerate() {
        let rep = &profiles[members[0]];
        let g0_constant = members.iter().all(|&i| h.vertex(i).union() == rep.g0);
        let profile_constant = members.iter().all(|&i| &profiles[i] == rep);
        let predicted: BTreeSet<usize> = groups[rep].iter().copied().collect();
        let actual: BTreeSet<usize> = members.iter().copied().collect();
        let diff = predicted.symmetric_difference(&actual).count();
        mismatches += diff;
        let equivalence = vertex_equivalence(h, c)?;
        let witnesses_cross_blocks = members.iter().all(|&i| {
            h.neighbors(i).iter().all(|&(_, e)| {
                let edge = g.edge(e);
                !rep.saturated.same_block(edge.tail, edge.head)
            })
        });
        let contraction = if options.contraction {
            Some(contraction_check(h, c, rep, options.budget)?)
        } else {
            None
        };
        let report = ComponentReport {
            id: c,
            size: members.len(),
            side_one: members.iter().filter(|&&i| h.vertex(i).side == Side::One).count(),
            side_two: members.iter().filter(|&&i| h.vertex(i).side == Side::Two).count(),
            profile: rep.clone(),
            g0_constant,
            profile_constant,
            blocks_valid: blocks_valid(g, rep),
            exact_set: diff == 0,
            equivalence,
            witnesses_cross_blocks,
            contraction,
        };
        if !report.passed() {
            note(format!("component {c} (first vertex {}) fails: {report:?}", h.vertex(members[0])));
        }
        reports.push(report);
    }

    let passed = isolated.is_empty()
        && criterion.holds
        && mismatches == 0
        && reports.iter().all(ComponentReport::passed);
    Ok(ClassificationReport {
        partial: false,
        vertices: h.len(),
        edges: h.edge_count(),
        components: h.component_count(),
        isolated_vertices: isolated.len(),
        criterion,
        classification_mismatches: mismatches,
        component_reports: reports,
        first_counterexample: counterexample,
        passed,
    })
}
