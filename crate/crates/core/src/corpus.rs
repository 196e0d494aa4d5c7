//! The verification corpus: isomorphism classes of small connected
//! multigraphs, enumerated exhaustively or sampled, with seeded momenta.

use std::collections::HashSet;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::multigraph::Multigraph;
use crate::rational::ratio;
use crate::symanzik::MomentumAssignment;
use crate::{RationalMatrix, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Every loopless class within the caps.
    Loopless,
    /// Every class with at least one self-loop within the loop caps.
    WithLoops,
    /// Distinct seeded samples at a fixed vertex count.
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusConfig {
    pub max_n: usize,
    pub max_m: usize,
    pub loop_max_n: usize,
    pub loop_max_m: usize,
    pub sample_n: usize,
    pub sample_max_m: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            max_n: 5,
            max_m: 10,
            loop_max_n: 4,
            loop_max_m: 6,
            sample_n: 6,
            sample_max_m: 10,
            samples: 200,
            seed: 0,
        }
    }
}

impl CorpusConfig {
    /// Exhaustive families only, capped at `max_n` vertices and `max_m` edges.
    pub fn small(max_n: usize, max_m: usize) -> Self {
        CorpusConfig {
            max_n,
            max_m,
            loop_max_n: max_n.min(4),
            loop_max_m: max_m.min(6),
            samples: 0,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub family: Family,
    /// Canonical form: `n` followed by edge multiplicities over the slots
    /// `(0,1), (0,2), ..., (n-2,n-1)` and then the loops `0..n`.
    pub key: String,
    pub graph: Multigraph,
}

fn slots(n: usize, loops: bool) -> Vec<(usize, usize)> {
    let mut s: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    if loops {
        s.extend((0..n).map(|v| (v, v)));
    }
    s
}

/// Lexicographically largest multiplicity vector over all relabellings.
fn canonical(n: usize, mult: &[u8], all_slots: &[(usize, usize)], perms: &[Vec<usize>]) -> Vec<u8> {
    let index = |a: usize, b: usize| -> usize {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        if a == b {
            n * (n - 1) / 2 + a
        } else {
            a * n - a * (a + 1) / 2 + (b - a - 1)
        }
    };
    let mut best = mult.to_vec();
    let mut buf = vec![0u8; mult.len()];
    for perm in perms {
        buf.iter_mut().for_each(|x| *x = 0);
        for (k, &(a, b)) in all_slots.iter().enumerate() {
            if mult[k] > 0 {
                buf[index(perm[a], perm[b])] = mult[k];
            }
        }
        if buf > best {
            best.copy_from_slice(&buf);
        }
    }
    best
}

fn graph_of(n: usize, mult: &[u8], all_slots: &[(usize, usize)]) -> Multigraph {
    let edges = all_slots
        .iter()
        .zip(mult)
        .flat_map(|(&s, &k)| std::iter::repeat(s).take(k as usize));
    Multigraph::new(n, edges).expect("slots are in range")
}

fn key_of(n: usize, mult: &[u8]) -> String {
    format!("{n}:{}", mult.iter().join(","))
}

/// Visits every multiplicity vector over `k` slots with total `m`.
fn for_each_multiset(k: usize, m: usize, f: &mut dyn FnMut(&[u8])) {
    fn rec(pos: usize, left: usize, cur: &mut Vec<u8>, f: &mut dyn FnMut(&[u8])) {
        if pos + 1 == cur.len() {
            cur[pos] = left as u8;
            f(cur);
            return;
        }
        for c in (0..=left).rev() {
            cur[pos] = c as u8;
            rec(pos + 1, left - c, cur, f);
        }
    }
    if k == 0 {
        return;
    }
    let mut cur = vec![0u8; k];
    rec(0, m, &mut cur, f);
}

/// All isomorphism classes of connected multigraphs on `n >= 2` vertices
/// with exactly `m` edges; with `loops`, only classes having a self-loop.
pub fn enumerate_classes(n: usize, m: usize, loops: bool) -> Vec<(String, Multigraph)> {
    let all_slots = slots(n, true);
    let pairs = n * (n - 1) / 2;
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let usable = if loops { all_slots.len() } else { pairs };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for_each_multiset(usable, m, &mut |partial| {
        let mut mult = partial.to_vec();
        mult.resize(all_slots.len(), 0);
        if loops && mult[pairs..].iter().all(|&k| k == 0) {
            return;
        }
        let g = graph_of(n, &mult, &all_slots);
        if !g.is_connected() {
            return;
        }
        let c = canonical(n, &mult, &all_slots, &perms);
        if seen.insert(c.clone()) {
            out.push((key_of(n, &c), graph_of(n, &c, &all_slots)));
        }
    });
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Distinct connected classes on `n` vertices with `n - 1 ..= max_m` edges:
/// a random recursive spanning tree on a shuffled vertex order plus uniformly
/// random extra slots, one in ten a self-loop.
pub fn sample_classes(n: usize, max_m: usize, count: usize, seed: u64) -> Vec<(String, Multigraph)> {
    let all_slots = slots(n, true);
    let pairs = n * (n - 1) / 2;
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let slot_index = |a: usize, b: usize| all_slots.iter().position(|&s| s == (a.min(b), a.max(b))).unwrap();
    let mut attempts = 0;
    while out.len() < count && attempts < 100 * count.max(1) {
        attempts += 1;
        let m = rng.gen_range(n - 1..=max_m);
        let mut mult = vec![0u8; all_slots.len()];
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        for i in 1..n {
            let j = rng.gen_range(0..i);
            mult[slot_index(order[i], order[j])] += 1;
        }
        for _ in n - 1..m {
            let k = if rng.gen_range(0..10) == 0 {
                pairs + rng.gen_range(0..n)
            } else {
                rng.gen_range(0..pairs)
            };
            mult[k] += 1;
        }
        let c = canonical(n, &mult, &all_slots, &perms);
        if seen.insert(c.clone()) {
            out.push((key_of(n, &c), graph_of(n, &c, &all_slots)));
        }
    }
    out
}

/// Loopless classes first, then loop classes, then samples; within a
/// family by `(n, m, key)`.
pub fn generate_corpus(cfg: &CorpusConfig) -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    let mut push = |family: Family, classes: Vec<(String, Multigraph)>| {
        out.extend(classes.into_iter().map(|(key, graph)| CorpusEntry { family, key, graph }));
    };
    for n in 2..=cfg.max_n {
        for m in n - 1..=cfg.max_m {
            push(Family::Loopless, enumerate_classes(n, m, false));
        }
    }
    for n in 2..=cfg.loop_max_n {
        for m in n..=cfg.loop_max_m {
            push(Family::WithLoops, enumerate_classes(n, m, true));
        }
    }
    if cfg.samples > 0 && cfg.sample_n >= 2 {
        let mut sampled = sample_classes(cfg.sample_n, cfg.sample_max_m, cfg.samples, cfg.seed);
        sampled.sort_by(|a, b| (a.1.m(), &a.0).cmp(&(b.1.m(), &b.0)));
        push(Family::Sampled, sampled);
    }
    out
}

/// Scalar momenta `p_v = a/b` with `|a| <= 5`, `b <= 4`, conserved by the
/// last vertex. At least one momentum is nonzero.
pub fn random_scalar_momenta<R: Rng + ?Sized>(n: usize, rng: &mut R) -> MomentumAssignment {
    loop {
        let mut p: Vec<Rational> = (0..n - 1)
            .map(|_| ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4)))
            .collect();
        let last: Rational = -p.iter().sum::<Rational>();
        p.push(last);
        if p.iter().any(|x| *x != Rational::from_integer(0.into())) {
            return MomentumAssignment::scalar(p).expect("conserved by construction");
        }
    }
}

/// `dim`-dimensional momenta under the given form, conserved by the last vertex.
pub fn random_momenta<R: Rng + ?Sized>(
    n: usize,
    form: RationalMatrix,
    rng: &mut R,
) -> Result<MomentumAssignment> {
    let dim = form.rows();
    let mut p: Vec<Vec<Rational>> = (0..n - 1)
        .map(|_| (0..dim).map(|_| ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4))).collect())
        .collect();
    let last: Vec<Rational> = (0..dim).map(|a| -p.iter().map(|v| &v[a]).sum::<Rational>()).collect();
    p.push(last);
    MomentumAssignment::new(form, p)
}

/// Seeded scalar momenta for the `index`-th corpus entry.
pub fn entry_momenta(entry: &CorpusEntry, index: usize, seed: u64) -> MomentumAssignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    random_scalar_momenta(entry.graph.n(), &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_class_counts() {
        // connected multigraphs: n=2 with m edges is one class each
        assert_eq!(enumerate_classes(2, 3, false).len(), 1);
        // n=3, m=2: the path; m=3: triangle and doubled path
        assert_eq!(enumerate_classes(3, 2, false).len(), 1);
        assert_eq!(enumerate_classes(3, 3, false).len(), 2);
        // triangle with a doubled side; paths with multiplicities (3,1), (2,2)
        assert_eq!(enumerate_classes(3, 4, false).len(), 3);
        // simple connected graphs on 4 vertices with 3 edges: path and star
        assert_eq!(enumerate_classes(4, 3, false).len(), 2);
        // loops: K2 plus one loop
        assert_eq!(enumerate_classes(2, 2, true).len(), 1);
    }

    #[test]
    fn classes_are_pairwise_non_isomorphic() {
        let classes = enumerate_classes(4, 4, false);
        let keys: HashSet<&String> = classes.iter().map(|(k, _)| k).collect();
        assert_eq!(keys.len(), classes.len());
        for (_, g) in &classes {
            assert!(g.is_connected());
            assert_eq!(g.m(), 4);
        }
    }

    #[test]
    fn corpus_is_deterministic() {
        let cfg = CorpusConfig {
            max_n: 3,
            max_m: 4,
            loop_max_n: 3,
            loop_max_m: 4,
            sample_n: 5,
            sample_max_m: 7,
            samples: 10,
            seed: 7,
        };
        let a = generate_corpus(&cfg);
        let b = generate_corpus(&cfg);
        assert_eq!(a, b);
        assert_eq!(a.iter().filter(|e| e.family == Family::Sampled).count(), 10);
        let m0 = entry_momenta(&a[0], 0, 1);
        assert_eq!(m0, entry_momenta(&b[0], 0, 1));
    }
}
