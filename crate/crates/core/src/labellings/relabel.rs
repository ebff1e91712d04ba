use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graphs::{LabelledGraph, SerreGraph};
use crate::groups::{Evaluator, GElem, Group, GroupHandle};
use crate::par::{self, Mode};
use crate::words::{words_up_to, Word};

use super::{labelling_commutes, spanning_forest, WordLabelling};

type Key<V> = (V, Option<GElem>);

/// Reduced forms reachable within one value class, each with the
/// shortlex-least word producing it.
#[derive(Clone, Debug, Default)]
struct Class {
    list: Vec<(Word, Word)>,
    by_red: HashMap<Word, usize>,
}

/// All words up to a length, grouped by `(M-value, H-value)` and then by
/// reduced form.
pub struct RelabelIndex<V> {
    max_len: usize,
    classes: HashMap<Key<V>, Class>,
}

impl<V: Clone + Eq + std::hash::Hash + Send + Sync> RelabelIndex<V> {
    pub fn build<M>(
        m: &M,
        h: Option<&GroupHandle>,
        rank: usize,
        max_len: usize,
        mode: Mode,
        budget: usize,
    ) -> Result<RelabelIndex<V>>
    where
        M: Evaluator<Value = V>,
    {
        let count: usize = (0..=max_len).map(|k| (2 * rank).pow(k as u32)).sum();
        if count > budget {
            return Err(Error::Budget {
                what: "relabelling words",
                limit: budget,
                reached: count,
            });
        }
        let words = words_up_to(rank, max_len);
        let keyed = par::map(mode, &words, |w| {
            ((m.value(w), h.map(|h| h.value(w))), w.reduce())
        });
        let mut classes: HashMap<Key<V>, Class> = HashMap::new();
        for (w, (key, red)) in words.into_iter().zip(keyed) {
            let c = classes.entry(key).or_default();
            if !c.by_red.contains_key(&red) {
                c.by_red.insert(red.clone(), c.list.len());
                c.list.push((red, w));
            }
        }
        Ok(RelabelIndex { max_len, classes })
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// The least F-commuting relabelling with matching values, if any.
    ///
    /// Tree-edge reduced forms are enumerated in spanning-tree order, each
    /// from shortest least word upwards; non-tree edges are then forced.
    pub fn search<M>(
        &self,
        l: &WordLabelling,
        m: &M,
        h: Option<&GroupHandle>,
        budget: usize,
    ) -> Result<Option<WordLabelling>>
    where
        M: Evaluator<Value = V>,
    {
        let graph = &l.graph;
        let mut classes = Vec::with_capacity(graph.num_geometric_edges());
        for e in graph.positive_edges() {
            let v = l.label(e);
            let key = (m.value(v), h.map(|h| h.value(v)));
            match self.classes.get(&key) {
                Some(c) => classes.push(c),
                None => return Ok(None),
            }
        }
        let (roots, tree) = spanning_forest(graph);
        let n = graph.num_vertices();
        let mut step_of = vec![0usize; n];
        for (i, &e) in tree.iter().enumerate() {
            step_of[graph.omega(e) as usize] = i + 1;
        }
        let mut in_tree = vec![false; graph.num_geometric_edges()];
        for &e in &tree {
            in_tree[e / 2] = true;
        }
        let mut checks: Vec<Vec<usize>> = vec![Vec::new(); tree.len() + 1];
        for e in graph.positive_edges() {
            if !in_tree[e / 2] {
                let s = step_of[graph.alpha(e) as usize].max(step_of[graph.omega(e) as usize]);
                checks[s].push(e);
            }
        }
        let mut st = Search {
            graph,
            classes: &classes,
            tree: &tree,
            checks: &checks,
            pot: vec![Vec::new(); n],
            pick: vec![0; tree.len()],
            nodes: 0,
            budget,
        };
        let _ = roots;
        if !st.forced_ok(0) || !st.run(0)? {
            return Ok(None);
        }
        let mut labels = vec![Word::empty(); graph.num_geometric_edges()];
        for (i, &e) in tree.iter().enumerate() {
            labels[e / 2] = classes[e / 2].list[st.pick[i]].1.clone();
        }
        for e in graph.positive_edges() {
            if !in_tree[e / 2] {
                let r = st.required(e);
                labels[e / 2] = classes[e / 2].list[classes[e / 2].by_red[&r]].1.clone();
            }
        }
        Ok(Some(LabelledGraph::from_graph(graph.clone(), labels)?))
    }
}

struct Search<'a> {
    graph: &'a SerreGraph,
    classes: &'a [&'a Class],
    tree: &'a [usize],
    checks: &'a [Vec<usize>],
    pot: Vec<Vec<crate::words::Letter>>,
    pick: Vec<usize>,
    nodes: usize,
    budget: usize,
}

impl Search<'_> {
    fn required(&self, e: usize) -> Word {
        let a = Word(self.pot[self.graph.alpha(e) as usize].clone());
        let b = Word(self.pot[self.graph.omega(e) as usize].clone());
        a.invert().concat(&b).reduce()
    }

    fn forced_ok(&self, step: usize) -> bool {
        self.checks[step]
            .iter()
            .all(|&e| self.classes[e / 2].by_red.contains_key(&self.required(e)))
    }

    fn run(&mut self, i: usize) -> Result<bool> {
        if i == self.tree.len() {
            return Ok(true);
        }
        let e = self.tree[i];
        let class = self.classes[e / 2];
        let parent = self.pot[self.graph.alpha(e) as usize].clone();
        let child = self.graph.omega(e) as usize;
        for (k, (red, _)) in class.list.iter().enumerate() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Budget {
                    what: "relabelling search nodes",
                    limit: self.budget,
                    reached: self.nodes,
                });
            }
            let step = if e.is_multiple_of(2) {
                red.clone()
            } else {
                red.invert()
            };
            let mut p = parent.clone();
            for &x in step.letters() {
                crate::words::push_reduced(&mut p, x);
            }
            self.pot[child] = p;
            self.pick[i] = k;
            if self.forced_ok(i + 1) && self.run(i + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Builds the index and searches once.
pub fn relabel_search<M: Evaluator>(
    l: &WordLabelling,
    m: &M,
    h: Option<&GroupHandle>,
    rank: usize,
    max_len: usize,
    budget: usize,
) -> Result<Option<WordLabelling>> {
    RelabelIndex::build(m, h, rank, max_len, Mode::default(), budget)?.search(l, m, h, budget)
}

/// Result of an exhaustive suitability run.
#[derive(Clone, Debug)]
pub struct SuitabilityReport {
    pub label_len: usize,
    pub relabel_len: usize,
    pub strengthened: bool,
    pub labellings: usize,
    pub commuting: usize,
    /// Witnesses found and re-verified independently.
    pub verified: usize,
    pub failure_count: usize,
    /// The first failures in enumeration order.
    pub failures: Vec<WordLabelling>,
}

impl SuitabilityReport {
    pub fn is_verified(&self) -> bool {
        self.failure_count == 0
    }
}

const KEPT_FAILURES: usize = 16;

/// Checks every G-commuting labelling of `e` with labels of length at most
/// `label_len` for an M-related (and, if `strengthened` is given, also
/// H-related) F-commuting relabelling of length at most `relabel_len`.
#[allow(clippy::too_many_arguments)]
pub fn verify_suitable<M: Evaluator>(
    m: &M,
    e: &SerreGraph,
    g: &GroupHandle,
    label_len: usize,
    relabel_len: usize,
    strengthened: Option<&GroupHandle>,
    mode: Mode,
    budget: usize,
) -> Result<SuitabilityReport> {
    let rank = g.rank();
    let words = words_up_to(rank, label_len);
    let k = e.num_geometric_edges();
    let total = words
        .len()
        .checked_pow(k as u32)
        .filter(|&t| t <= budget)
        .ok_or(Error::Budget {
            what: "labellings",
            limit: budget,
            reached: budget.saturating_add(1),
        })?;
    let index = RelabelIndex::build(m, strengthened, rank, relabel_len, mode, budget)?;
    let free = GroupHandle::free(rank);
    let ids: Vec<usize> = (0..total).collect();
    let outcomes = par::try_map(mode, &ids, |&id| -> Result<Option<(bool, usize)>> {
        let mut rest = id;
        let labels: Vec<Word> = (0..k)
            .map(|_| {
                let w = words[rest % words.len()].clone();
                rest /= words.len();
                w
            })
            .collect();
        let l = LabelledGraph::from_graph(e.clone(), labels)?;
        if !labelling_commutes(&l, g) {
            return Ok(None);
        }
        match index.search(&l, m, strengthened, budget)? {
            Some(u) => {
                let sound = labelling_commutes(&u, &free)
                    && e.positive_edges().all(|f| {
                        m.value(u.label(f)) == m.value(l.label(f))
                            && strengthened
                                .is_none_or(|h| h.value(u.label(f)) == h.value(l.label(f)))
                    });
                if !sound {
                    return Err(Error::invalid("relabelling witness failed re-verification"));
                }
                Ok(Some((true, id)))
            }
            None => Ok(Some((false, id))),
        }
    })?;
    let mut report = SuitabilityReport {
        label_len,
        relabel_len,
        strengthened: strengthened.is_some(),
        labellings: total,
        commuting: 0,
        verified: 0,
        failure_count: 0,
        failures: Vec::new(),
    };
    for (ok, id) in outcomes.into_iter().flatten() {
        report.commuting += 1;
        if ok {
            report.verified += 1;
        } else {
            report.failure_count += 1;
            if report.failures.len() < KEPT_FAILURES {
                let mut rest = id;
                let labels = (0..k)
                    .map(|_| {
                        let w = words[rest % words.len()].clone();
                        rest /= words.len();
                        w
                    })
                    .collect();
                report
                    .failures
                    .push(LabelledGraph::from_graph(e.clone(), labels)?);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::AGraph;
    use crate::groups::EnumGroup;
    use crate::labellings::cycle_graph;
    use crate::words::{Alphabet, Letter};

    fn w(s: &str) -> Word {
        Alphabet::standard(1).parse_word(s).unwrap()
    }

    fn edge_monoid() -> crate::inverse_monoids::InverseMonoid {
        let mut g = AGraph::new(1, 2);
        g.set_edge(0, Letter::pos(0), 1).unwrap();
        crate::automata::transition_monoid(&g, 100).unwrap()
    }

    #[test]
    fn commuting_input_is_kept() {
        let m = edge_monoid();
        let l = LabelledGraph::from_graph(cycle_graph(2), vec![w("a"), w("a'")]).unwrap();
        let u = relabel_search(&l, &m, None, 1, 3, 10_000).unwrap().unwrap();
        assert_eq!(u, l);
    }

    #[test]
    fn loop_edge() {
        let m = edge_monoid();
        let mut g = SerreGraph::new(1);
        g.add_edge(0, 0);
        let l = LabelledGraph::from_graph(g, vec![w("aa'")]).unwrap();
        let u = relabel_search(&l, &m, None, 1, 2, 10_000).unwrap().unwrap();
        assert!(u.label(0).is_dyck());
        let l = LabelledGraph::from_graph(l.graph.clone(), vec![w("a")]).unwrap();
        assert!(relabel_search(&l, &m, None, 1, 4, 10_000)
            .unwrap()
            .is_none());
    }

    #[test]
    fn tree_is_vacuous() {
        let m = edge_monoid();
        let mut t = SerreGraph::new(2);
        t.add_edge(0, 1);
        let g = GroupHandle::enumerable(EnumGroup::trivial(1));
        let r = verify_suitable(&m, &t, &g, 2, 2, None, Mode::Sequential, 1 << 20).unwrap();
        assert_eq!(r.labellings, 7);
        assert_eq!(r.commuting, 7);
        assert!(r.is_verified());
    }

    #[test]
    fn trivial_group_is_not_suitable() {
        let m = edge_monoid();
        let g = GroupHandle::enumerable(EnumGroup::trivial(1));
        let r =
            verify_suitable(&m, &cycle_graph(2), &g, 1, 3, None, Mode::Parallel, 1 << 20).unwrap();
        assert!(!r.is_verified());
    }
}
