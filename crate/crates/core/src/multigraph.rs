//! Oriented multigraphs with parallel edges and self-loops, and the
//! spanning-tree / spanning-2-forest combinatorics built on them.

use itertools::Itertools;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::edgeset::{EdgeSubset, MAX_EDGES};
use crate::error::{Error, Result};

/// An oriented edge `tail -> head`. `tail == head` is a self-loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

/// Finite oriented multigraph on vertices `0..n` with edges `0..m` in list
/// order. Connectivity is not assumed; operations that need it check.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Multigraph {
    n: usize,
    edges: Vec<Edge>,
}

/// Result of [`Multigraph::spanning_trees`]. A disconnected graph yields no
/// trees and sets `disconnected`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTrees {
    pub trees: Vec<EdgeSubset>,
    pub disconnected: bool,
}

/// Quotient produced by [`Multigraph::contract`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub graph: Multigraph,
    /// Old vertex id to new vertex id (surjective).
    pub vertex_map: Vec<usize>,
    /// Old edge id to new edge id; `None` for contracted edges.
    pub edge_map: Vec<Option<usize>>,
}

impl Multigraph {
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let edges: Vec<Edge> = edges
            .into_iter()
            .map(|(tail, head)| Edge { tail, head })
            .collect();
        if edges.len() > MAX_EDGES {
            return Err(Error::TooManyEdges(edges.len()));
        }
        for (id, e) in edges.iter().enumerate() {
            for v in [e.tail, e.head] {
                if v >= n {
                    return Err(Error::InvalidEndpoint { edge: id, vertex: v, n });
                }
            }
        }
        Ok(Multigraph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    pub fn all_edges(&self) -> EdgeSubset {
        EdgeSubset::full(self.m())
    }

    pub fn loops(&self) -> EdgeSubset {
        self.edges
            .iter()
            .positions(Edge::is_loop)
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.component_count(self.all_edges()) == 1
    }

    /// First Betti number `m - n + 1` of a connected graph.
    pub fn genus(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::NotConnected);
        }
        Ok(self.m() + 1 - self.n)
    }

    fn union_find(&self, s: EdgeSubset) -> UnionFind<usize> {
        let mut uf = UnionFind::new(self.n);
        for e in s {
            let edge = self.edges[e];
            uf.union(edge.tail, edge.head);
        }
        uf
    }

    /// Number of connected components of the spanning subgraph `(V, s)`.
    pub fn component_count(&self, s: EdgeSubset) -> usize {
        let uf = self.union_find(s);
        (0..self.n).filter(|&v| uf.find(v) == v).count()
    }

    /// Component labels of `(V, s)`, numbered in order of first vertex.
    pub fn component_labels(&self, s: EdgeSubset) -> Vec<usize> {
        let uf = self.union_find(s);
        let mut rep_label = vec![usize::MAX; self.n];
        let mut next = 0;
        (0..self.n)
            .map(|v| {
                let r = uf.find(v);
                if rep_label[r] == usize::MAX {
                    rep_label[r] = next;
                    next += 1;
                }
                rep_label[r]
            })
            .collect()
    }

    /// `s` contains no cycle (a self-loop is a cycle).
    pub fn is_acyclic(&self, s: EdgeSubset) -> bool {
        let mut uf = UnionFind::new(self.n);
        s.iter().all(|e| {
            let edge = self.edges[e];
            uf.union(edge.tail, edge.head)
        })
    }

    pub fn is_spanning_forest_with(&self, s: EdgeSubset, components: usize) -> bool {
        s.is_subset(self.all_edges())
            && self.n >= components
            && s.len() + components == self.n
            && self.is_acyclic(s)
    }

    pub fn is_spanning_tree(&self, s: EdgeSubset) -> bool {
        self.is_spanning_forest_with(s, 1)
    }

    pub fn is_spanning_2forest(&self, s: EdgeSubset) -> bool {
        self.is_spanning_forest_with(s, 2)
    }

    fn acyclic_subsets(&self, size: usize) -> Vec<EdgeSubset> {
        let candidates: Vec<usize> = (0..self.m()).filter(|&e| !self.edges[e].is_loop()).collect();
        candidates
            .into_iter()
            .combinations(size)
            .map(|c| c.into_iter().collect::<EdgeSubset>())
            .filter(|&s| self.is_acyclic(s))
            .collect()
    }

    /// All spanning trees in lexicographic order.
    pub fn spanning_trees(&self) -> SpanningTrees {
        if !self.is_connected() {
            return SpanningTrees {
                trees: Vec::new(),
                disconnected: true,
            };
        }
        SpanningTrees {
            trees: self.acyclic_subsets(self.n - 1),
            disconnected: false,
        }
    }

    /// All spanning 2-forests in lexicographic order.
    pub fn spanning_2forests(&self) -> Result<Vec<EdgeSubset>> {
        if self.n < 2 {
            return Err(Error::NoTwoForest(self.n));
        }
        Ok(self.acyclic_subsets(self.n - 2))
    }

    /// The partition of `V` into the vertex sets of the two components of `f`.
    pub fn forest_partition(&self, f: EdgeSubset) -> Result<VertexPartition> {
        if !self.is_spanning_2forest(f) {
            return Err(Error::NotSpanningTwoForest(f));
        }
        Ok(VertexPartition::from_labels(&self.component_labels(f)))
    }

    /// Edges joining two different blocks of `p`.
    pub fn crossing_edges(&self, p: &VertexPartition) -> EdgeSubset {
        self.edges
            .iter()
            .positions(|e| p.block_of(e.tail) != p.block_of(e.head))
            .collect()
    }

    /// Edges of `within` with both endpoints in `vertices` (self-loops included).
    pub fn induced_edges(&self, vertices: &[usize], within: EdgeSubset) -> EdgeSubset {
        let mut inside = vec![false; self.n];
        for &v in vertices {
            inside[v] = true;
        }
        within
            .iter()
            .filter(|&e| inside[self.edges[e].tail] && inside[self.edges[e].head])
            .collect()
    }

    /// The spanning subgraph with edge set `s`, re-indexed in increasing id
    /// order, together with the original id of each new edge.
    pub fn spanning_subgraph(&self, s: EdgeSubset) -> (Multigraph, Vec<usize>) {
        let ids = s.to_vec();
        let graph = Multigraph::new(self.n, ids.iter().map(|&e| (self.edges[e].tail, self.edges[e].head)))
            .expect("subgraph of a valid graph");
        (graph, ids)
    }

    /// Identifies the endpoints of every edge of `s` and drops the edges of
    /// `s`. The remaining edges keep their relative order; an edge outside `s`
    /// whose endpoints get identified survives as a self-loop.
    pub fn contract(&self, s: EdgeSubset) -> Contraction {
        let vertex_map = self.component_labels(s);
        let classes = vertex_map.iter().copied().max().map_or(0, |k| k + 1);
        let mut edge_map = vec![None; self.m()];
        let mut edges = Vec::new();
        for (id, e) in self.edges.iter().enumerate() {
            if s.contains(id) {
                continue;
            }
            edge_map[id] = Some(edges.len());
            edges.push((vertex_map[e.tail], vertex_map[e.head]));
        }
        let graph = Multigraph::new(classes, edges).expect("quotient of a valid graph");
        Contraction {
            graph,
            vertex_map,
            edge_map,
        }
    }
}

/// A partition of `0..n` into non-empty disjoint blocks, kept canonical:
/// blocks sorted internally and ordered by smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexPartition {
    labels: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl VertexPartition {
    /// Builds the partition whose blocks are the level sets of `labels`.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut canon = vec![usize::MAX; labels.iter().copied().max().map_or(0, |k| k + 1)];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let labels = labels
            .iter()
            .enumerate()
            .map(|(v, &l)| {
                if canon[l] == usize::MAX {
                    canon[l] = blocks.len();
                    blocks.push(Vec::new());
                }
                blocks[canon[l]].push(v);
                canon[l]
            })
            .collect();
        VertexPartition { labels, blocks }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &v in block {
                if v >= n {
                    return Err(Error::InvalidPartition(format!("vertex {v} out of range")));
                }
                if labels[v] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("vertex {v} repeated")));
                }
                labels[v] = b;
            }
        }
        if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidPartition(format!("vertex {v} not covered")));
        }
        Ok(Self::from_labels(&labels))
    }

    pub fn singletons(n: usize) -> Self {
        Self::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn same_block(&self, u: usize, v: usize) -> bool {
        self.labels[u] == self.labels[v]
    }

    pub fn all_singletons(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// Common refinement: `u, v` share a block iff they do in both.
    pub fn meet(&self, other: &VertexPartition) -> VertexPartition {
        assert_eq!(self.n(), other.n());
        let pairs: Vec<(usize, usize)> = self
            .labels
            .iter()
            .zip(&other.labels)
            .map(|(&a, &b)| (a, b))
            .collect();
        let mut ids = std::collections::HashMap::new();
        let labels: Vec<usize> = pairs
            .iter()
            .map(|p| {
                let next = ids.len();
                *ids.entry(*p).or_insert(next)
            })
            .collect();
        Self::from_labels(&labels)
    }
}

impl Serialize for VertexPartition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks.serialize(serializer)
    }
}
