//! Word and coset labellings of Serre graphs, commuting checks, tree
//! witnesses, relabelling searches and the expansion-series experiments.

mod arborise;
mod relabel;
mod section5;
mod separation;

use std::collections::{HashMap, VecDeque};

pub use arborise::{arborise, TreeWitness};
pub use relabel::{relabel_search, verify_suitable, RelabelIndex, SuitabilityReport};
pub use section5::{
    build_w_word, klein_counterexample, klein_group, klein_instance, verify_identity_54,
    Identity54Report, KleinCheck, KleinInstance, KleinReport, KLEIN_EDGES,
};
pub use separation::{rz_separation, RzMode, RzReport};

use crate::automata::{product_contains, CosetSpec};
use crate::error::{Error, Result};
use crate::graphs::{LabelledGraph, SerreGraph};
use crate::groups::{EnumGroup, Evaluator, Group, GroupHandle};
use crate::words::Word;

/// One word per directed edge, with `label(inv e) = label(e)⁻¹`.
pub type WordLabelling = LabelledGraph<Word>;

/// One coset per directed edge; the inverse edge carries the inverse coset.
pub type CosetLabelling = LabelledGraph<CosetSpec>;

/// The cycle graph `C_n`: edges `i → i + 1 (mod n)`.
pub fn cycle_graph(n: usize) -> SerreGraph {
    let mut g = SerreGraph::new(n);
    for i in 0..n {
        g.add_edge(i as u32, ((i + 1) % n) as u32);
    }
    g
}

/// Whether every vertex has degree 2 and the graph is one cycle.
fn cycle_order(g: &SerreGraph) -> Option<Vec<usize>> {
    let n = g.num_vertices();
    if n == 0 || !g.is_connected() || g.num_geometric_edges() != n {
        return None;
    }
    if (0..n as u32).any(|v| g.degree(v) != 2) {
        return None;
    }
    let adj = g.adjacency();
    let mut path = Vec::with_capacity(n);
    let mut last = usize::MAX;
    let mut v = 0usize;
    for _ in 0..n {
        let e = *adj[v].iter().find(|&&e| e ^ 1 != last)?;
        path.push(e);
        last = e;
        v = g.omega(e) as usize;
    }
    (v == 0).then_some(path)
}

/// Spanning forest in BFS order: for each non-root vertex, the edge from its
/// parent; roots are listed separately.
pub(crate) fn spanning_forest(g: &SerreGraph) -> (Vec<u32>, Vec<usize>) {
    let n = g.num_vertices();
    let adj = g.adjacency();
    let mut seen = vec![false; n];
    let mut roots = Vec::new();
    let mut tree = Vec::new();
    for r in 0..n {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        roots.push(r as u32);
        let mut q = VecDeque::from([r]);
        while let Some(v) = q.pop_front() {
            for &e in &adj[v] {
                let w = g.omega(e) as usize;
                if !seen[w] {
                    seen[w] = true;
                    tree.push(e);
                    q.push_back(w);
                }
            }
        }
    }
    (roots, tree)
}

/// Whether every closed path's label evaluates to the identity.
///
/// Each component is checked through potentials along a spanning tree, which
/// is equivalent to checking its basic cycles.
pub fn labelling_commutes<G: Evaluator>(l: &WordLabelling, g: &G) -> bool {
    let graph = &l.graph;
    let (roots, tree) = spanning_forest(graph);
    let mut pot: Vec<Option<G::Value>> = vec![None; graph.num_vertices()];
    for r in roots {
        pot[r as usize] = Some(g.unit());
    }
    let walk =
        |from: &G::Value, w: &Word| w.letters().iter().fold(from.clone(), |v, &x| g.step(&v, x));
    for &e in &tree {
        let p = pot[graph.alpha(e) as usize].clone().unwrap();
        pot[graph.omega(e) as usize] = Some(walk(&p, l.label(e)));
    }
    graph.positive_edges().all(|e| {
        let a = pot[graph.alpha(e) as usize].as_ref().unwrap();
        walk(a, l.label(e)) == *pot[graph.omega(e) as usize].as_ref().unwrap()
    })
}

/// Outcome of a coset-labelling commuting check.
#[derive(Clone, Debug)]
pub struct CosetVerdict {
    pub commutes: bool,
    /// `false` only for the bounded free-group search.
    pub exact: bool,
    /// A covering G-commuting word labelling, when one was reconstructed.
    pub witness: Option<WordLabelling>,
}

/// Words of `⟨gens⟩` reaching each element of the image subgroup in `g`.
fn image_words(g: &EnumGroup, gens: &[Word]) -> HashMap<u32, Word> {
    let vals: Vec<(u32, Word)> = gens
        .iter()
        .flat_map(|w| {
            [
                (g.follow(0, w), w.clone()),
                (g.follow(0, &w.invert()), w.invert()),
            ]
        })
        .collect();
    let mut out = HashMap::from([(0u32, Word::empty())]);
    let mut q = VecDeque::from([0u32]);
    while let Some(h) = q.pop_front() {
        for (s, w) in &vals {
            let t = Group::mul(g, &h, s);
            if !out.contains_key(&t) {
                let word = out[&h].concat(w);
                out.insert(t, word);
                q.push_back(t);
            }
        }
    }
    out
}

/// Decides whether a coset labelling covers a G-commuting word labelling.
///
/// For an enumerable group the potentials `x_v` with `x_α⁻¹x_ω` in the image
/// of each edge coset are searched by backtracking. For the free group only
/// cycle graphs are decided exactly; other graphs give an error (see
/// [`coset_commutes_bounded`]).
pub fn coset_commutes(l: &CosetLabelling, g: &GroupHandle, budget: usize) -> Result<CosetVerdict> {
    match g {
        GroupHandle::Enum(e) => coset_commutes_enum(l, e, budget),
        GroupHandle::Free { rank } => {
            let order = cycle_order(&l.graph).ok_or_else(|| {
                Error::Unsupported(
                    "coset labellings over the free group are decided only on cycle graphs; \
                     use the bounded search"
                        .into(),
                )
            })?;
            let cosets: Vec<CosetSpec> = order.iter().map(|&e| l.label(e).clone()).collect();
            let commutes = product_contains(*rank, &cosets, &Word::empty());
            Ok(CosetVerdict {
                commutes,
                exact: true,
                witness: None,
            })
        }
        GroupHandle::Tower(_) => Err(Error::Unsupported(
            "materialize the tower before checking coset labellings".into(),
        )),
    }
}

fn coset_commutes_enum(l: &CosetLabelling, g: &EnumGroup, budget: usize) -> Result<CosetVerdict> {
    let graph = &l.graph;
    let n = graph.num_vertices();
    // image coset S_k r_k per positive edge, with words reaching each element
    let images: Vec<(HashMap<u32, Word>, u32)> = graph
        .positive_edges()
        .map(|e| {
            let c = l.label(e);
            (image_words(g, &c.gens), g.follow(0, &c.rep))
        })
        .collect();
    let member = |e: usize, d: u32| -> bool {
        let (s, r) = &images[e / 2];
        let d = if e.is_multiple_of(2) { d } else { g.inv(&d) };
        s.contains_key(&Group::mul(g, &d, &g.inv(r)))
    };
    let (roots, tree) = spanning_forest(graph);
    let mut order: Vec<u32> = roots.clone();
    order.extend(tree.iter().map(|&e| graph.omega(e)));
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v as usize] = i;
    }
    // edges checked once both endpoints are assigned
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in graph.positive_edges() {
        let (a, b) = (graph.alpha(e) as usize, graph.omega(e) as usize);
        let late = if pos[a] >= pos[b] { a } else { b };
        checks[pos[late]].push(e);
    }
    let is_root: Vec<bool> = {
        let mut r = vec![false; n];
        for &v in &roots {
            r[v as usize] = true;
        }
        r
    };
    let mut pot = vec![0u32; n];
    let mut nodes = 0usize;
    let found = search_potentials(
        g, graph, &order, &is_root, &checks, &member, &mut pot, 0, &mut nodes, budget,
    )?;
    if !found {
        return Ok(CosetVerdict {
            commutes: false,
            exact: true,
            witness: None,
        });
    }
    let labels = graph
        .positive_edges()
        .map(|e| {
            let d = Group::mul(
                g,
                &g.inv(&pot[graph.alpha(e) as usize]),
                &pot[graph.omega(e) as usize],
            );
            let (s, r) = &images[e / 2];
            let h = Group::mul(g, &d, &g.inv(r));
            s[&h].concat(&l.label(e).rep)
        })
        .collect();
    Ok(CosetVerdict {
        commutes: true,
        exact: true,
        witness: Some(LabelledGraph::from_graph(graph.clone(), labels)?),
    })
}

#[allow(clippy::too_many_arguments)]
fn search_potentials(
    g: &EnumGroup,
    graph: &SerreGraph,
    order: &[u32],
    is_root: &[bool],
    checks: &[Vec<usize>],
    member: &dyn Fn(usize, u32) -> bool,
    pot: &mut [u32],
    i: usize,
    nodes: &mut usize,
    budget: usize,
) -> Result<bool> {
    if i == order.len() {
        return Ok(true);
    }
    let v = order[i] as usize;
    // roots can be fixed at 1 by left translation of a component
    let candidates: Vec<u32> = if is_root[v] {
        vec![0]
    } else {
        g.elements().collect()
    };
    for x in candidates {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::Budget {
                what: "potential search nodes",
                limit: budget,
                reached: *nodes,
            });
        }
        pot[v] = x;
        let ok = checks[i].iter().all(|&e| {
            let d = Group::mul(
                g,
                &g.inv(&pot[graph.alpha(e) as usize]),
                &pot[graph.omega(e) as usize],
            );
            member(e, d)
        });
        if ok
            && search_potentials(
                g,
                graph,
                order,
                is_root,
                checks,
                member,
                pot,
                i + 1,
                nodes,
                budget,
            )?
        {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Bounded search over the free group: potentials are reduced words formed
/// from coset elements of length at most `max_len` along a spanning forest.
/// A positive answer is exact; a negative one is not.
pub fn coset_commutes_bounded(
    l: &CosetLabelling,
    rank: usize,
    max_len: usize,
    budget: usize,
) -> Result<CosetVerdict> {
    use crate::automata::{coset_membership, coset_words};
    let graph = &l.graph;
    let graphs: Vec<_> = graph
        .positive_edges()
        .map(|e| l.label(e).graph(rank))
        .collect();
    let (_, tree) = spanning_forest(graph);
    let choices: Vec<Vec<Word>> = tree
        .iter()
        .map(|&e| {
            let ws = coset_words(&graphs[e / 2], max_len);
            if e % 2 == 0 {
                ws
            } else {
                ws.iter().map(|w| w.invert()).collect()
            }
        })
        .collect();
    let mut pot = vec![Word::empty(); graph.num_vertices()];
    let mut pick = vec![0usize; tree.len()];
    let mut steps = 0usize;
    loop {
        steps += 1;
        if steps > budget {
            return Err(Error::Budget {
                what: "bounded coset search",
                limit: budget,
                reached: steps,
            });
        }
        if choices.iter().any(|c| c.is_empty()) {
            break;
        }
        for (t, &e) in tree.iter().enumerate() {
            let p = pot[graph.alpha(e) as usize].clone();
            pot[graph.omega(e) as usize] = p.concat(&choices[t][pick[t]]).reduce();
        }
        let labels: Vec<Word> = graph
            .positive_edges()
            .map(|e| {
                pot[graph.alpha(e) as usize]
                    .invert()
                    .concat(&pot[graph.omega(e) as usize])
                    .reduce()
            })
            .collect();
        if graph
            .positive_edges()
            .all(|e| coset_membership(&graphs[e / 2], &labels[e / 2]))
        {
            return Ok(CosetVerdict {
                commutes: true,
                exact: true,
                witness: Some(LabelledGraph::from_graph(graph.clone(), labels)?),
            });
        }
        // odometer over tree-edge choices
        let mut t = 0;
        while t < pick.len() {
            pick[t] += 1;
            if pick[t] < choices[t].len() {
                break;
            }
            pick[t] = 0;
            t += 1;
        }
        if t == pick.len() {
            break;
        }
    }
    Ok(CosetVerdict {
        commutes: false,
        exact: false,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::parse_cycles;
    use crate::words::Alphabet;

    fn w(s: &str) -> Word {
        Alphabet::standard(2).parse_word(s).unwrap()
    }

    fn klein() -> EnumGroup {
        EnumGroup::from_permutations(
            2,
            4,
            &[
                parse_cycles("(1 2)", 4).unwrap(),
                parse_cycles("(3 4)", 4).unwrap(),
            ],
            10,
        )
        .unwrap()
    }

    #[test]
    fn word_labellings() {
        let c2 = cycle_graph(2);
        let free = GroupHandle::free(2);
        let l = LabelledGraph::from_graph(c2.clone(), vec![w("a"), w("a'")]).unwrap();
        assert!(labelling_commutes(&l, &free));
        let l = LabelledGraph::from_graph(c2, vec![w("a"), w("b")]).unwrap();
        assert!(!labelling_commutes(&l, &klein()));
        let z2 = EnumGroup::from_permutations(2, 2, &[vec![1, 0], vec![1, 0]], 10).unwrap();
        assert!(labelling_commutes(&l, &z2));
        let mut tree = SerreGraph::new(3);
        tree.add_edge(0, 1);
        tree.add_edge(2, 1);
        let l = LabelledGraph::from_graph(tree, vec![w("ab"), w("b'")]).unwrap();
        assert!(labelling_commutes(&l, &free));
    }

    #[test]
    fn coset_labellings() {
        let c2 = cycle_graph(2);
        let free = GroupHandle::free(2);
        let bad = LabelledGraph::from_graph(
            c2.clone(),
            vec![
                CosetSpec::new(vec![w("a")], w("b")),
                CosetSpec::new(vec![w("a")], Word::empty()),
            ],
        )
        .unwrap();
        assert!(!coset_commutes(&bad, &free, 1000).unwrap().commutes);
        let k = GroupHandle::enumerable(klein());
        let v = coset_commutes(&bad, &k, 1000).unwrap();
        assert!(!v.commutes);
        let triv = GroupHandle::enumerable(EnumGroup::trivial(2));
        let v = coset_commutes(&bad, &triv, 1000).unwrap();
        assert!(v.commutes);
        assert!(labelling_commutes(
            &v.witness.unwrap(),
            &EnumGroup::trivial(2)
        ));
        let subs = LabelledGraph::from_graph(
            c2,
            vec![
                CosetSpec::subgroup(vec![w("a")]),
                CosetSpec::subgroup(vec![]),
            ],
        )
        .unwrap();
        let v = coset_commutes(&subs, &k, 1000).unwrap();
        assert!(v.commutes);
        let mut path = SerreGraph::new(3);
        path.add_edge(0, 1);
        path.add_edge(1, 2);
        let l = LabelledGraph::from_graph(
            path,
            vec![CosetSpec::subgroup(vec![]), CosetSpec::subgroup(vec![])],
        )
        .unwrap();
        assert!(coset_commutes(&l, &free, 10).is_err());
        assert!(coset_commutes_bounded(&l, 2, 2, 100).unwrap().commutes);
    }

    #[test]
    fn cycles_detected() {
        assert_eq!(cycle_order(&cycle_graph(3)).unwrap().len(), 3);
        let mut g = SerreGraph::new(2);
        g.add_edge(0, 1);
        g.add_edge(0, 1);
        assert!(cycle_order(&g).is_some());
        g.add_edge(0, 1);
        assert!(cycle_order(&g).is_none());
    }
}
