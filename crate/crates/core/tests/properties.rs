//! Randomized invariants over small graphs.

mod common;

use intlattice::Int;
use proptest::prelude::*;
use twocycle::crossing::{random_generic_drawing, signed_crossing};
use twocycle::forms::{
    contract_form, is_two_cycle, kuratowski_form, subdivide_form, two_cycle_lattice,
    uncontract_form, Form2, SigmaMode,
};
use twocycle::homology::h2_lattice;
use twocycle::modules::{is_rs_connected, linkage_module};
use twocycle::patterns::{
    enumerate_all_kuratowski, enumerate_cycles, enumerate_disjoint_cycle_pairs, Caps,
};
use twocycle::{EdgeVector, Graph};

/// A simple graph on `n` vertices keeping each edge of `K_n` by mask bit.
fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut edges = vec![];
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, &edges)
}

fn small_graph(nmin: usize, nmax: usize) -> impl Strategy<Value = Graph> {
    (nmin..=nmax, any::<u64>()).prop_map(|(n, mask)| graph_from_mask(n, mask))
}

/// Dense graphs on 5 to 7 vertices, where Kuratowski subgraphs are common.
fn dense_graph() -> impl Strategy<Value = Graph> {
    (5usize..=7, any::<u64>(), any::<u64>()).prop_map(|(n, a, b)| graph_from_mask(n, a | b))
}

fn sparse_form() -> impl Strategy<Value = Form2> {
    proptest::collection::vec((0usize..8, 0usize..8, -5i64..=5), 0..12).prop_map(|entries| {
        let mut d = Form2::new();
        for (e, f, x) in entries {
            d.add(e, f, &Int::from(x));
        }
        d
    })
}

fn combination(basis: &[Vec<Int>], coeffs: &[i64]) -> Vec<Int> {
    let dim = basis.first().map_or(0, Vec::len);
    let mut out = vec![Int::ZERO; dim];
    for (b, &c) in basis.iter().zip(coeffs.iter().cycle()) {
        for (o, x) in out.iter_mut().zip(b) {
            *o += &(&Int::from(c) * x);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transpose_is_an_involution(d in sparse_form()) {
        prop_assert_eq!(d.transpose().transpose(), d.clone());
        let s = SigmaMode::Sym.apply(&d);
        prop_assert_eq!(s.transpose(), s);
        let k = SigmaMode::Skew.apply(&d);
        prop_assert_eq!(k.transpose(), k.scaled(&Int::from(-1i64)));
    }

    #[test]
    fn coboundaries_sum_to_zero(g in small_graph(1, 8)) {
        let mut total = EdgeVector::new();
        for v in 0..g.n() {
            total = total.plus(&g.delta(v).unwrap());
        }
        prop_assert!(total.is_empty());
        for c in enumerate_cycles(&g, &Caps::default()).unwrap() {
            prop_assert!(g.is_circulation(&c.chi(&g)));
        }
    }

    #[test]
    fn sym_and_skew_sit_inside_plain(g in small_graph(5, 7), coeffs in proptest::collection::vec(-3i64..=3, 1..6)) {
        let plain = two_cycle_lattice(&g, SigmaMode::Plain);
        let sym = two_cycle_lattice(&g, SigmaMode::Sym);
        let skew = two_cycle_lattice(&g, SigmaMode::Skew);
        for d in sym.basis_forms().iter().chain(skew.basis_forms().iter()) {
            prop_assert!(plain.contains(d));
        }
        let d = plain.key.form(&combination(plain.lattice.basis(), &coeffs));
        prop_assert!(sym.contains(&SigmaMode::Sym.apply(&d)));
        prop_assert!(skew.contains(&SigmaMode::Skew.apply(&d)));
    }

    #[test]
    fn h2_agrees_with_form_lattice(g in small_graph(4, 7)) {
        prop_assert_eq!(h2_lattice(&g), two_cycle_lattice(&g, SigmaMode::Plain).lattice);
    }

    #[test]
    fn kuratowski_forms_are_symmetric_two_cycles(g in dense_graph()) {
        let hs = enumerate_all_kuratowski(&g, &Caps::default()).unwrap();
        for h in hs.iter().take(20) {
            h.certify(&g).unwrap();
            let d = kuratowski_form(&g, h, 1);
            prop_assert_eq!(d.transpose(), d.clone());
            prop_assert!(is_two_cycle(&g, &d).is_ok());
            let mut support = d.support_edges();
            support.sort_unstable();
            let mut edges = h.edge_set();
            edges.sort_unstable();
            prop_assert_eq!(support, edges);
        }
    }

    #[test]
    fn subdivision_keeps_rank(g in small_graph(5, 7), pieces in proptest::collection::vec(1usize..=3, 21)) {
        let sub = g.subdivide(&pieces[..g.m()]);
        let l = two_cycle_lattice(&g, SigmaMode::Plain);
        let ls = two_cycle_lattice(&sub.graph, SigmaMode::Plain);
        prop_assert_eq!(l.rank(), ls.rank());
        for d in l.basis_forms() {
            prop_assert!(ls.contains(&subdivide_form(&d, &sub)));
        }
    }

    #[test]
    fn crossings_are_antisymmetric(g in small_graph(4, 8), seed in any::<u64>()) {
        let dr = random_generic_drawing(&g, seed).unwrap();
        for f in 0..g.m() {
            for h in 0..g.m() {
                if f != h && !g.adjacent(f, h) {
                    let a = signed_crossing(&g, &dr, f, h).unwrap();
                    prop_assert_eq!(a, -signed_crossing(&g, &dr, h, f).unwrap());
                }
            }
        }
        prop_assert_eq!(random_generic_drawing(&g, seed).unwrap(), dr);
    }

    #[test]
    fn separations_are_deterministic(g in small_graph(4, 8), k in 1usize..=3) {
        if g.is_connected() {
            let a = g.enumerate_separations(k);
            prop_assert_eq!(&a, &g.enumerate_separations(k));
            // reversing the labels gives the same number of separations
            let n = g.n();
            let rev: Vec<(usize, usize)> = g.edges().iter().map(|&(x, y)| (n - 1 - x, n - 1 - y)).collect();
            prop_assert_eq!(Graph::from_edges(n, &rev).enumerate_separations(k).len(), a.len());
        }
    }

    #[test]
    fn disjoint_pairs_come_in_both_orders(g in small_graph(6, 8)) {
        let pairs = enumerate_disjoint_cycle_pairs(&g, &Caps::default()).unwrap();
        for (c, d) in &pairs {
            prop_assert!(pairs.iter().any(|(x, y)| x == d && y == c));
        }
    }

    #[test]
    fn contraction_lifts_round_trip(g in small_graph(5, 7), e in any::<prop::sample::Index>(), coeffs in proptest::collection::vec(-3i64..=3, 1..6)) {
        if g.m() > 0 {
            let e = e.index(g.m());
            let c = g.contract(e).unwrap();
            let l2 = two_cycle_lattice(&c.graph, SigmaMode::Plain);
            let d2 = l2.key.form(&combination(l2.lattice.basis(), &coeffs));
            let up = uncontract_form(&g, e, &d2).unwrap();
            prop_assert!(is_two_cycle(&g, &up).is_ok());
            prop_assert_eq!(contract_form(&g, &up, e).unwrap().0, d2);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cycle_count_matches_oracle(g in small_graph(3, 6)) {
        prop_assert_eq!(enumerate_cycles(&g, &Caps::default()).unwrap().len(), common::cycle_count(&g));
    }

    #[test]
    fn linkage_rank_matches_oracle(g in small_graph(4, 6), m1 in 1u32..64, m2 in 1u32..64) {
        let r1: Vec<usize> = (0..g.n()).filter(|i| m1 >> i & 1 == 1).collect();
        let r2: Vec<usize> = (0..g.n()).filter(|i| m2 >> i & 1 == 1).collect();
        let l = linkage_module(&g, &r1, &r2, &Caps::default()).unwrap();
        prop_assert_eq!(l.rank(), common::linkage_rank(&g, &r1, &r2));
    }

    #[test]
    fn rs_connectivity_matches_oracle(g in small_graph(4, 7), m1 in 0u32..128, m2 in 0u32..128) {
        let r: Vec<usize> = (0..g.n()).filter(|i| m1 >> i & 1 == 1).collect();
        let s: Vec<usize> = (0..g.n()).filter(|i| m2 >> i & 1 == 1).collect();
        prop_assert_eq!(is_rs_connected(&g, &r, &s), common::rs_connected(&g, &r, &s));
    }

    #[test]
    fn internal_4_connectivity_matches_oracle(g in small_graph(5, 8)) {
        prop_assert_eq!(g.is_internally_4_connected(), common::internally_4_connected(&g));
    }
}
