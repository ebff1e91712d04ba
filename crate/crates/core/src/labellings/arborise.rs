use crate::error::{Error, Result};
use crate::graphs::{contract_degree2, fold, LabelledGraph, NONE};
use crate::inverse_monoids::InverseMonoid;
use crate::words::{Letter, Word};

use super::WordLabelling;

/// A word-labelled tree with the cycle vertices `o_0, …, o_{n−1}` embedded.
///
/// Factor `u_i` runs from `o_i` to `o_{i+1 mod n}`.
#[derive(Clone, Debug)]
pub struct TreeWitness {
    pub tree: WordLabelling,
    pub embed: Vec<u32>,
}

impl TreeWitness {
    /// Label of the reduced tree path `o_i → o_{i+1}`.
    pub fn path_word(&self, i: usize) -> Word {
        let n = self.embed.len();
        let p = self
            .tree
            .graph
            .tree_geodesic(self.embed[i], self.embed[(i + 1) % n]);
        self.tree.path_label(&p)
    }

    pub fn diameter(&self) -> usize {
        self.tree.graph.tree_diameter().unwrap_or(0)
    }

    /// Checks diameter `≤ n − 1` and `[u_i] ≤ [w(π_i)]` in `m`.
    pub fn check(&self, us: &[Word], m: &InverseMonoid) -> bool {
        let n = us.len();
        self.tree.graph.is_tree()
            && self.diameter() < n.max(1)
            && us
                .iter()
                .enumerate()
                .all(|(i, u)| m.leq(m.evaluate(u), m.evaluate(&self.path_word(i))))
    }

    /// `u_i u_i⁻¹ w(π_i)` on the cycle, which F-commutes and is M-related.
    pub fn relabelling(&self, us: &[Word]) -> Vec<Word> {
        us.iter()
            .enumerate()
            .map(|(i, u)| Word::concat_all([u, &u.invert(), &self.path_word(i)]))
            .collect()
    }
}

/// Builds a tree of diameter at most `n − 1` dominating the factors of a
/// Dyck product in `m`.
///
/// Rotations are scanned in order and the first Dyck proper prefix splits
/// the problem; the two subtrees are joined by an empty-labelled edge.
/// Otherwise the reduced factors are laid out on a cycle, folded, and
/// unmarked degree-2 arcs are contracted.
pub fn arborise(us: &[Word], m: &InverseMonoid) -> Result<TreeWitness> {
    if us.is_empty() {
        return Err(Error::invalid("arborise needs at least one factor"));
    }
    if !Word::concat_all(us).is_dyck() {
        return Err(Error::Precondition(
            "arborise: the product of the factors is not a Dyck word".into(),
        ));
    }
    let rank = m.rank();
    if us.iter().any(|u| u.min_rank() > rank) {
        return Err(Error::invalid("factor uses letters outside the alphabet"));
    }
    // factor i ends at vertex (i + 1) mod n
    let ends: Vec<usize> = (0..us.len()).map(|i| (i + 1) % us.len()).collect();
    let (tree, map) = build(us, &ends, us.len(), rank)?;
    Ok(TreeWitness { tree, embed: map })
}

/// Tree for a cyclic sequence of factors; `ends[j]` is the vertex at the end
/// of `words[j]` (and the start of `words[j + 1]`). Returns the tree and the
/// map from vertex ids to tree vertices (`NONE` for ids not in this part).
fn build(
    words: &[Word],
    ends: &[usize],
    total: usize,
    rank: usize,
) -> Result<(WordLabelling, Vec<u32>)> {
    let n = words.len();
    for r in 0..n {
        let mut acc = Vec::new();
        for k in 1..n {
            for &x in words[(r + k - 1) % n].letters() {
                crate::words::push_reduced(&mut acc, x);
            }
            if acc.is_empty() {
                let first: Vec<usize> = (r..r + k).map(|j| j % n).collect();
                let second: Vec<usize> = (r + k..r + n).map(|j| j % n).collect();
                let pick = |ix: &[usize]| {
                    (
                        ix.iter().map(|&j| words[j].clone()).collect::<Vec<_>>(),
                        ix.iter().map(|&j| ends[j]).collect::<Vec<_>>(),
                    )
                };
                let (w1, e1) = pick(&first);
                let (w2, e2) = pick(&second);
                let (t1, m1) = build(&w1, &e1, total, rank)?;
                let (t2, m2) = build(&w2, &e2, total, rank)?;
                let bridge_from = m1[*e1.last().unwrap()];
                let bridge_to = m2[*e2.last().unwrap()];
                return Ok(join(&t1, &m1, &t2, &m2, bridge_from, bridge_to));
            }
        }
    }
    lay_out_and_fold(words, ends, total, rank)
}

fn join(
    t1: &WordLabelling,
    m1: &[u32],
    t2: &WordLabelling,
    m2: &[u32],
    from: u32,
    to: u32,
) -> (WordLabelling, Vec<u32>) {
    let off = t1.graph.num_vertices() as u32;
    let mut t = t1.clone();
    for _ in 0..t2.graph.num_vertices() {
        t.add_vertex();
    }
    for e in t2.graph.positive_edges() {
        t.add_edge(
            t2.graph.alpha(e) + off,
            t2.graph.omega(e) + off,
            t2.label(e).clone(),
        );
    }
    t.add_edge(from, to + off, Word::empty());
    let map = m1
        .iter()
        .zip(m2)
        .map(|(&a, &b)| {
            if a != NONE {
                a
            } else if b != NONE {
                b + off
            } else {
                NONE
            }
        })
        .collect();
    (t, map)
}

fn lay_out_and_fold(
    words: &[Word],
    ends: &[usize],
    total: usize,
    rank: usize,
) -> Result<(WordLabelling, Vec<u32>)> {
    let n = words.len();
    let mut cyc: LabelledGraph<Letter> = LabelledGraph::new(n);
    // vertex j of the layout is ends[j]; factor j starts at ends[j − 1]
    for j in 0..n {
        let from = ((j + n - 1) % n) as u32;
        let to = j as u32;
        let v = words[j].reduce();
        let mut cur = from;
        for (i, &x) in v.letters().iter().enumerate() {
            let next = if i + 1 == v.len() {
                to
            } else {
                cyc.add_vertex()
            };
            cyc.add_edge(cur, next, x);
            cur = next;
        }
        if v.is_empty() && from != to {
            return Err(Error::Precondition(
                "arborise: unexpected Dyck factor in the unsplit case".into(),
            ));
        }
    }
    let (folded, vmap) = fold(&cyc, rank);
    let letters = folded.to_labelled();
    let labels: Vec<Word> = letters
        .positive_labels()
        .into_iter()
        .map(Word::letter)
        .collect();
    let tree = LabelledGraph::from_graph(letters.graph.clone(), labels)?;
    let mut protected = vec![false; tree.graph.num_vertices()];
    for &v in &vmap[..n] {
        protected[v as usize] = true;
    }
    let (tree, cmap) = contract_degree2(&tree, &protected)?;
    let mut map = vec![NONE; total];
    for j in 0..n {
        map[ends[j]] = cmap[vmap[j] as usize];
    }
    Ok((tree, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::AGraph;
    use crate::groups::GroupHandle;
    use crate::labellings::{cycle_graph, labelling_commutes};
    use crate::words::Alphabet;

    fn w(s: &str) -> Word {
        Alphabet::standard(2).parse_word(s).unwrap()
    }

    fn monoid() -> InverseMonoid {
        let mut g = AGraph::new(2, 3);
        g.set_edge(0, Letter::pos(0), 1).unwrap();
        g.set_edge(1, Letter::pos(1), 2).unwrap();
        g.set_edge(2, Letter::pos(0), 0).unwrap();
        crate::automata::transition_monoid(&g, 1000).unwrap()
    }

    #[test]
    fn two_factors() {
        let m = monoid();
        let us = [w("ab"), w("b'a'")];
        let t = arborise(&us, &m).unwrap();
        assert_eq!(t.tree.graph.num_vertices(), 2);
        assert_eq!(t.tree.graph.num_geometric_edges(), 1);
        assert_eq!(t.path_word(0), w("ab"));
        assert!(t.check(&us, &m));
    }

    #[test]
    fn single_dyck_factor() {
        let m = monoid();
        let us = [w("abb'a'")];
        let t = arborise(&us, &m).unwrap();
        assert_eq!(t.tree.graph.num_vertices(), 1);
        assert!(t.path_word(0).is_empty());
        assert!(t.check(&us, &m));
    }

    #[test]
    fn split_case() {
        let m = monoid();
        let us = [w("ab"), w("b'a'"), w("ba"), w("a'b'")];
        let t = arborise(&us, &m).unwrap();
        assert!(t.diameter() <= 3);
        assert!(t.check(&us, &m));
        let empty_edges = t
            .tree
            .graph
            .positive_edges()
            .filter(|&e| t.tree.label(e).is_empty())
            .count();
        assert_eq!(empty_edges, 1);
        let relabel = LabelledGraph::from_graph(cycle_graph(4), t.relabelling(&us)).unwrap();
        assert!(labelling_commutes(&relabel, &GroupHandle::free(2)));
    }

    #[test]
    fn rejects_non_dyck() {
        assert!(arborise(&[w("a")], &monoid()).is_err());
    }
}
