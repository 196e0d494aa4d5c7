use itertools::Itertools;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symanzik_core::corpus::{random_momenta, random_scalar_momenta};
use symanzik_core::exchange::{build_exchange_graph, pivot, verify_exchange_graph, VerifyOptions};
use symanzik_core::rational::{integer, ratio};
use symanzik_core::symanzik::{phi_enum, psi_enum, q_of_forest, DeterminantRoute, MomentumAssignment};
use symanzik_core::variation::{
    boundedness_sweep, build_triple_graph, decade_grid, q_balance_check, weight_identities, PerturbationSpec,
};
use symanzik_core::{EdgeSubset, Multigraph, Rational, RationalMatrix};

/// Connected multigraph: a random recursive tree plus extra edges, loops allowed.
fn connected_multigraph(max_n: usize, max_extra: usize) -> impl Strategy<Value = Multigraph> {
    (2..=max_n).prop_flat_map(move |n| {
        let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|i| (0..i).boxed()).collect();
        let extra = proptest::collection::vec((0..n, 0..n), 0..=max_extra);
        (Just(n), parents, extra).prop_map(|(n, parents, extra)| {
            let tree = parents.into_iter().enumerate().map(|(i, p)| (p, i + 1));
            Multigraph::new(n, tree.chain(extra)).unwrap()
        })
    })
}

/// Components of `s` by repeated relaxation, independent of the library.
fn components(n: usize, g: &Multigraph, s: EdgeSubset) -> Vec<usize> {
    let mut label: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for e in s.iter() {
            let edge = g.edge(e);
            let lo = label[edge.tail].min(label[edge.head]);
            for v in [edge.tail, edge.head] {
                if label[v] != lo {
                    label[v] = lo;
                    changed = true;
                }
            }
        }
        if !changed {
            return label;
        }
    }
}

fn component_count(n: usize, g: &Multigraph, s: EdgeSubset) -> usize {
    let mut l = components(n, g, s);
    l.sort_unstable();
    l.dedup();
    l.len()
}

/// Brute force over all `k`-subsets of edges.
fn brute_force_forests(g: &Multigraph, k: usize) -> Vec<EdgeSubset> {
    let (n, m) = (g.n(), g.m());
    (0u64..1 << m)
        .map(EdgeSubset::from_bits)
        .filter(|s| s.len() == n - k && component_count(n, g, *s) == k)
        .sorted()
        .collect()
}

fn reduced_laplacian_det(g: &Multigraph) -> Rational {
    let n = g.n();
    let mut lap = vec![vec![integer(0); n]; n];
    for edge in g.edges().iter().filter(|e| !e.is_loop()) {
        let (a, b) = (edge.tail, edge.head);
        lap[a][a] += integer(1);
        lap[b][b] += integer(1);
        lap[a][b] -= integer(1);
        lap[b][a] -= integer(1);
    }
    let rows = lap[1..].iter().map(|r| r[1..].to_vec()).collect();
    RationalMatrix::from_rows(n - 1, rows).unwrap().det().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn tree_and_forest_enumeration_match_brute_force(g in connected_multigraph(5, 4)) {
        let mut trees = g.spanning_trees().trees;
        let mut forests = g.spanning_2forests().unwrap();
        trees.sort();
        forests.sort();
        prop_assert_eq!(&trees, &brute_force_forests(&g, 1));
        prop_assert_eq!(&forests, &brute_force_forests(&g, 2));
        prop_assert_eq!(integer(trees.len() as i64), reduced_laplacian_det(&g));
        prop_assert!(trees.iter().all(|t| t.is_disjoint(g.loops())));
    }

    #[test]
    fn determinants_match_enumeration(g in connected_multigraph(5, 4), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mom = random_scalar_momenta(g.n(), &mut rng);
        let route = DeterminantRoute::new(&g, &mom).unwrap();
        let psi = psi_enum(&g).unwrap();
        let phi = phi_enum(&g, &mom).unwrap();
        let h = g.genus().unwrap();
        prop_assert_eq!(psi.degree(), h);
        prop_assert_eq!(phi.degree(), h + 1);
        let y: Vec<Rational> = (0..g.m()).map(|e| ratio(e as i64 + 2, 3)).collect();
        prop_assert_eq!(route.psi(&y).unwrap(), psi.evaluate(&y));
        prop_assert_eq!(route.phi(&y).unwrap(), phi.evaluate(&y));
    }

    #[test]
    fn minkowski_momenta_match_enumeration(g in connected_multigraph(4, 3), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let form = RationalMatrix::diagonal(&[integer(1), integer(-1)]);
        let mom = random_momenta(g.n(), form, &mut rng).unwrap();
        let route = DeterminantRoute::new(&g, &mom).unwrap();
        let y: Vec<Rational> = (0..g.m()).map(|e| ratio(7 - e as i64 % 5, 2)).collect();
        prop_assert_eq!(route.phi(&y).unwrap(), phi_enum(&g, &mom).unwrap().evaluate(&y));
    }

    #[test]
    fn q_is_minus_pairing_across_components(g in connected_multigraph(5, 3), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mom = random_scalar_momenta(g.n(), &mut rng);
        for f in g.spanning_2forests().unwrap() {
            let label = components(g.n(), &g, f);
            let side = |c: usize| -> Rational {
                (0..g.n()).filter(|&v| (label[v] == label[0]) == (c == 0)).map(|v| mom.vertex(v)[0].clone()).sum()
            };
            prop_assert_eq!(q_of_forest(&g, f, &mom).unwrap(), -(side(0) * side(1)));
        }
    }

    #[test]
    fn pivots_are_involutive_and_classification_holds(g in connected_multigraph(4, 3)) {
        let h = build_exchange_graph(&g, 200_000).unwrap();
        for i in 0..h.len() {
            for &(j, e) in h.neighbors(i) {
                let v = h.vertex(i);
                let w = pivot(&g, v, e).unwrap();
                prop_assert_eq!(&w, h.vertex(j));
                prop_assert_eq!(&pivot(&g, &w, e).unwrap(), v);
            }
        }
        let r = verify_exchange_graph(&h, VerifyOptions::default()).unwrap();
        prop_assert!(r.passed, "{:?}", r.first_counterexample);
    }

    #[test]
    fn weight_sums_and_q_balance(g in connected_multigraph(4, 2), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mom = random_scalar_momenta(g.n(), &mut rng);
        let tg = build_triple_graph(&g, &mom, 20_000).unwrap();
        let base = vec![integer(1); g.m()];
        let spec = PerturbationSpec::random(base, integer(1), decade_grid(1, 3), &mut rng).unwrap();
        for t in &spec.grid {
            let w = weight_identities(&tg, &spec, t).unwrap();
            prop_assert!(w.holds(), "{:?}", w);
        }
        prop_assert!(q_balance_check(&tg).holds());
    }

    #[test]
    fn k2_delta_is_q_times_a(p in 1i64..20, a in -16i64..=16, y0 in 1i64..10) {
        let g = Multigraph::new(2, [(0, 1)]).unwrap();
        let p = ratio(p, 3);
        let mom = MomentumAssignment::scalar(vec![p.clone(), -p.clone()]).unwrap();
        let a = ratio(a, 16);
        let spec = PerturbationSpec::new(
            vec![integer(y0)],
            RationalMatrix::from_rows(1, vec![vec![a.clone()]]).unwrap(),
            integer(1),
            decade_grid(1, 4),
        ).unwrap();
        let r = boundedness_sweep(&g, &mom, &spec, &integer(1)).unwrap();
        let expected = &p * &p * &a;
        prop_assert!(r.points.iter().all(|pt| pt.delta == expected));
        prop_assert!(r.passed());
    }
}
