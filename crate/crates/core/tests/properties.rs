use std::sync::Arc;

use invexp::automata::{
    complete, coset_membership, product_contains, stallings_coset, stallings_subgroup,
    subgroup_basis, transition_monoid, CosetSpec,
};
use invexp::graphs::AGraph;
use invexp::groups::{AbTower, Group};
use invexp::labellings::klein_group;
use invexp::relational::{hom_exists, RelStructure};
use invexp::words::{Alphabet, Letter, Word};
use proptest::prelude::*;

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..2 * rank, 0..=max_len)
        .prop_map(|codes| Word(codes.into_iter().map(Letter::from_code).collect()))
}

fn gens(rank: usize) -> impl Strategy<Value = Vec<Word>> {
    prop::collection::vec(word(rank, 5), 1..=3)
}

/// Partial injections on `n` points, one per letter.
fn agraph(rank: usize) -> impl Strategy<Value = AGraph> {
    (1usize..=4).prop_flat_map(move |n| {
        let points: Vec<u32> = (0..n as u32).collect();
        let letter = (
            Just(points).prop_shuffle(),
            prop::collection::vec(any::<bool>(), n),
        );
        prop::collection::vec(letter, rank).prop_map(move |maps| {
            let mut g = AGraph::new(rank, n);
            for (i, (perm, keep)) in maps.into_iter().enumerate() {
                for v in 0..n {
                    if keep[v] {
                        g.set_edge(v as u32, Letter::pos(i), perm[v]).unwrap();
                    }
                }
            }
            g
        })
    })
}

fn structure(n: usize, max_tuples: usize) -> impl Strategy<Value = RelStructure> {
    let pair = (0..n as u32, 0..n as u32);
    (
        prop::collection::vec(pair.clone(), 0..=max_tuples),
        prop::collection::vec(0..n as u32, 0..=2),
    )
        .prop_map(move |(edges, marks)| {
            let sig = vec![("E".to_string(), 2), ("P".to_string(), 1)];
            let mut s = RelStructure::new(sig, (0..n).map(|i| format!("x{i}")).collect());
            for (a, b) in edges {
                s.add_tuple(0, vec![a, b]).unwrap();
            }
            for m in marks {
                s.add_tuple(1, vec![m]).unwrap();
            }
            s
        })
}

fn is_hom(t: &RelStructure, y: &RelStructure, f: &[u32]) -> bool {
    t.relations.iter().zip(&y.relations).all(|(rt, ry)| {
        rt.iter()
            .all(|tup| ry.contains(&tup.iter().map(|&x| f[x as usize]).collect::<Vec<_>>()))
    })
}

fn brute_hom(t: &RelStructure, y: &RelStructure) -> bool {
    let (n, m) = (t.size(), y.size());
    if n == 0 {
        return true;
    }
    if m == 0 {
        return false;
    }
    let mut f = vec![0u32; n];
    loop {
        if is_hom(t, y, &f) {
            return true;
        }
        let mut i = 0;
        while i < n {
            f[i] += 1;
            if (f[i] as usize) < m {
                break;
            }
            f[i] = 0;
            i += 1;
        }
        if i == n {
            return false;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reduction_laws(w in word(3, 12), v in word(3, 12)) {
        let r = w.reduce();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.reduce(), r.clone());
        prop_assert_eq!(w.invert().invert(), w.clone());
        prop_assert_eq!(w.invert().reduce(), r.invert());
        prop_assert!(w.concat(&w.invert()).is_dyck());
        prop_assert_eq!(w.concat(&v).reduce(), r.concat(&v.reduce()).reduce());
    }

    #[test]
    fn words_print_and_parse(w in word(3, 10)) {
        let ab = Alphabet::standard(3);
        prop_assert_eq!(ab.parse_word(&ab.format_word(&w)).unwrap(), w);
    }

    #[test]
    fn stallings_graph_is_an_invariant_of_the_subgroup(gs in gens(2), swap in any::<bool>()) {
        let s = stallings_subgroup(2, &gs);
        prop_assert!(s.check_folded());
        for g in &gs {
            prop_assert!(coset_membership(&s, g));
            prop_assert!(coset_membership(&s, &g.invert()));
        }
        let mut moved = gs.clone();
        if moved.len() > 1 {
            moved[0] = moved[0].concat(&moved[1].invert());
        }
        moved.reverse();
        if swap {
            moved = moved.iter().map(|g| g.invert()).collect();
        }
        let t = stallings_subgroup(2, &moved);
        prop_assert_eq!(s.canonical_form(), t.canonical_form());
        let basis = subgroup_basis(&s);
        let u = stallings_subgroup(2, &basis);
        prop_assert_eq!(s.canonical_form(), u.canonical_form());
    }

    #[test]
    fn cosets_contain_their_translates(gs in gens(2), rep in word(2, 4), k in 0usize..3) {
        let h = stallings_subgroup(2, &gs);
        let c = stallings_coset(&h, &rep);
        let elem = Word::concat_all(gs.iter().cycle().take(k)).concat(&rep);
        prop_assert!(coset_membership(&c, &elem));
        let spec = CosetSpec::new(gs.clone(), rep.clone());
        prop_assert!(product_contains(2, &[spec.clone(), spec.inverse()], &Word::empty()));
    }

    #[test]
    fn transition_monoid_is_a_homomorphic_image(g in agraph(2), u in word(2, 6), v in word(2, 6)) {
        let m = transition_monoid(&g, 1 << 16).unwrap();
        let (x, y) = (m.evaluate(&u), m.evaluate(&v));
        prop_assert_eq!(m.evaluate(&u.concat(&v)), m.mul(x, y));
        prop_assert_eq!(m.evaluate(&u.invert()), m.inv(x));
        prop_assert!(m.leq(x, m.evaluate(&u.reduce())));
        prop_assert!(m.is_idempotent(m.evaluate(&u.concat(&u.invert()))));
    }

    #[test]
    fn completion_extends_the_graph(g in agraph(2), w in word(2, 8)) {
        let (c, group) = complete(&g, 1 << 16).unwrap();
        prop_assert!(c.is_complete());
        for (v, a, t) in g.positive_edges() {
            prop_assert_eq!(c.target(v, a), Some(t));
        }
        if let Some(t) = g.follow(0, &w) {
            prop_assert_eq!(c.follow(0, &w), Some(t));
        }
        prop_assert_eq!(group.follow(0, &w.concat(&w.invert())), 0);
    }

    #[test]
    fn hom_search_matches_brute_force(t in structure(4, 5), y in structure(4, 6)) {
        let found = hom_exists(&t, &y, 1 << 20).unwrap();
        prop_assert_eq!(found.is_some(), brute_hom(&t, &y));
        if let Some(f) = found {
            prop_assert!(is_hom(&t, &y, &f));
        }
    }

    #[test]
    fn weight_is_additive(a in structure(4, 4), b in structure(3, 4)) {
        let u = a.disjoint_union(&b).unwrap();
        prop_assert_eq!(u.weight(), a.weight() + b.weight());
        prop_assert_eq!(u.size(), a.size() + b.size());
    }

    #[test]
    fn expansion_is_a_homomorphic_image(u in word(2, 8), v in word(2, 8)) {
        let t = AbTower::new(Arc::new(klein_group())).expand(2).unwrap();
        let (x, y) = (t.eval(&u), t.eval(&v));
        prop_assert_eq!(t.eval(&u.concat(&v)), t.mul(&x, &y));
        prop_assert_eq!(t.eval(&u.invert()), t.inv(&x));
        prop_assert_eq!(t.eval(&u.reduce()), x);
        let g = t.base().follow(0, &u);
        prop_assert_eq!(t.components(x).inner, g);
    }
}
