//! Stallings graphs of subgroups and cosets, membership, bases, completion,
//! transition monoids and reduced-language acceptors.

use std::collections::VecDeque;

use crate::error::Result;
use crate::graphs::{fold, AGraph, Involutive, LabelledGraph, NONE};
use crate::groups::EnumGroup;
use crate::inverse_monoids::InverseMonoid;
use crate::words::{all_letters, Letter, Word};

/// A coset `Hg` given by generators of `H` and a representative `g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CosetSpec {
    pub gens: Vec<Word>,
    pub rep: Word,
}

impl CosetSpec {
    pub fn new(gens: Vec<Word>, rep: Word) -> CosetSpec {
        CosetSpec { gens, rep }
    }

    pub fn subgroup(gens: Vec<Word>) -> CosetSpec {
        CosetSpec::new(gens, Word::empty())
    }

    /// `(Hg)⁻¹ = g⁻¹Hg · g⁻¹`.
    pub fn inverse(&self) -> CosetSpec {
        let gi = self.rep.invert();
        let gens = self
            .gens
            .iter()
            .map(|h| Word::concat_all([&gi, h, &self.rep]).reduce())
            .collect();
        CosetSpec::new(gens, gi.reduce())
    }

    pub fn graph(&self, rank: usize) -> AGraph {
        stallings_coset(&stallings_subgroup(rank, &self.gens), &self.rep)
    }
}

impl Involutive for CosetSpec {
    fn involute(&self) -> Self {
        self.inverse()
    }
}

fn bouquet(gens: &[Word]) -> LabelledGraph<Letter> {
    let mut g = LabelledGraph::new(1);
    for w in gens {
        let w = w.reduce();
        if !w.is_empty() {
            add_arc(&mut g, 0, &w, Some(0));
        }
    }
    g
}

/// Adds a path labelled `w` from `from`, ending at `to` (or a fresh vertex).
fn add_arc(g: &mut LabelledGraph<Letter>, from: u32, w: &Word, to: Option<u32>) -> u32 {
    let mut cur = from;
    let n = w.len();
    for (i, &x) in w.letters().iter().enumerate() {
        let next = match to {
            Some(t) if i + 1 == n => t,
            _ => g.add_vertex(),
        };
        g.add_edge(cur, next, x);
        cur = next;
    }
    cur
}

/// The Stallings graph `S_H` of `H = ⟨gens⟩`, pointed at `ι`.
pub fn stallings_subgroup(rank: usize, gens: &[Word]) -> AGraph {
    let (f, vmap) = fold(&bouquet(gens), rank);
    let mut f = f;
    f.iota = Some(vmap[0]);
    let pruned = f.prune();
    let mut out = pruned.induced(&pruned.reachable(pruned.iota.unwrap())).0;
    // renumber canonically so equal subgroups give equal graphs
    normalize(&mut out);
    out
}

fn normalize(g: &mut AGraph) {
    let cf = g.canonical_form();
    let mut out = AGraph::new(g.rank(), g.num_vertices());
    let k = 2 * g.rank();
    for v in 0..g.num_vertices() {
        for c in 0..k {
            let w = cf.trans[v * k + c];
            if w != NONE && c % 2 == 0 {
                out.set_edge(v as u32, Letter::from_code(c), w).unwrap();
            }
        }
    }
    out.iota = cf.iota;
    out.tau = cf.tau;
    *g = out;
}

/// The Stallings graph of the coset `Hg`, with `τ` the end of the `g`-arc.
pub fn stallings_coset(h: &AGraph, g: &Word) -> AGraph {
    let iota = h.iota.unwrap_or(0);
    let (h, map) = h.induced(&h.reachable(iota));
    let iota = map[iota as usize];
    let mut lg = h.to_labelled();
    let end = add_arc(&mut lg, iota, &g.reduce(), None);
    let (mut f, vmap) = fold(&lg, h.rank());
    f.iota = Some(vmap[iota as usize]);
    f.tau = Some(vmap[end as usize]);
    normalize(&mut f);
    f
}

/// Whether `red(w)` labels a path `ι → τ` (`τ = ι` if unset).
pub fn coset_membership(s: &AGraph, w: &Word) -> bool {
    let iota = s.iota.unwrap_or(0);
    s.follow(iota, &w.reduce()) == Some(s.tau.unwrap_or(iota))
}

/// BFS spanning tree of an A-graph from `root`: `(parent, letter)` per vertex.
pub fn spanning_tree(s: &AGraph, root: u32) -> Vec<Option<(u32, Letter)>> {
    let n = s.num_vertices();
    let mut prev = vec![None; n];
    let mut seen = vec![false; n];
    seen[root as usize] = true;
    let mut q = VecDeque::from([root]);
    while let Some(v) = q.pop_front() {
        for x in all_letters(s.rank()) {
            if let Some(w) = s.target(v, x) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    prev[w as usize] = Some((v, x));
                    q.push_back(w);
                }
            }
        }
    }
    prev
}

/// Label of the tree path from the root to `v`.
pub fn tree_word(prev: &[Option<(u32, Letter)>], v: u32) -> Word {
    let mut letters = Vec::new();
    let mut cur = v;
    while let Some((p, x)) = prev[cur as usize] {
        letters.push(x);
        cur = p;
    }
    letters.reverse();
    Word(letters)
}

/// A free basis of `L(ι, s)`: one word per non-tree geometric edge.
pub fn subgroup_basis(s: &AGraph) -> Vec<Word> {
    let iota = s.iota.unwrap_or(0);
    let prev = spanning_tree(s, iota);
    let reach = s.reachable(iota);
    let mut out = Vec::new();
    for (v, a, w) in s.positive_edges() {
        if !reach[v as usize] {
            continue;
        }
        if prev[w as usize] == Some((v, a)) || prev[v as usize] == Some((w, a.inverse())) {
            continue;
        }
        let word = Word::concat_all([
            &tree_word(&prev, v),
            &Word::letter(a),
            &tree_word(&prev, w).invert(),
        ]);
        out.push(word.reduce());
    }
    out
}

/// Reduced labels of paths `ι → τ` of length at most `max_len`, i.e. the
/// reduced elements of the coset up to that length, in shortlex order.
pub fn coset_words(s: &AGraph, max_len: usize) -> Vec<Word> {
    let iota = s.iota.unwrap_or(0);
    let tau = s.tau.unwrap_or(iota);
    let mut out = Vec::new();
    let mut layer: Vec<(u32, Word)> = vec![(iota, Word::empty())];
    for len in 0..=max_len {
        out.extend(layer.iter().filter(|p| p.0 == tau).map(|p| p.1.clone()));
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for (v, w) in &layer {
            for x in all_letters(s.rank()) {
                if w.0.last() == Some(&x.inverse()) {
                    continue;
                }
                if let Some(t) = s.target(*v, x) {
                    let mut u = w.0.clone();
                    u.push(x);
                    next.push((t, Word(u)));
                }
            }
        }
        layer = next;
    }
    out
}

/// `T(K)`: the inverse monoid of partial bijections induced by words.
pub fn transition_monoid(g: &AGraph, budget: usize) -> Result<InverseMonoid> {
    let gens: Vec<Vec<u32>> = (0..g.rank())
        .map(|i| g.letter_map(Letter::pos(i)))
        .collect();
    InverseMonoid::generate(g.num_vertices(), g.rank(), &gens, budget)
}

/// Same-set completion: each undefined domain point, in vertex order, is
/// sent to the next unused range point.
pub fn complete_graph(g: &AGraph) -> AGraph {
    let mut out = g.clone();
    let n = g.num_vertices() as u32;
    for i in 0..g.rank() {
        let a = Letter::pos(i);
        let dom: Vec<u32> = (0..n).filter(|&v| g.target(v, a).is_none()).collect();
        let ran: Vec<u32> = (0..n)
            .filter(|&v| g.target(v, a.inverse()).is_none())
            .collect();
        for (&d, &r) in dom.iter().zip(&ran) {
            out.set_edge(d, a, r)
                .expect("matching preserves foldedness");
        }
    }
    out
}

/// Completion together with its transition group.
pub fn complete(g: &AGraph, budget: usize) -> Result<(AGraph, EnumGroup)> {
    let c = complete_graph(g);
    let gens: Vec<Vec<u32>> = (0..c.rank())
        .map(|i| c.letter_map(Letter::pos(i)))
        .collect();
    let group = EnumGroup::from_permutations(c.rank(), c.num_vertices(), &gens, budget)?;
    Ok((c, group))
}

/// A nondeterministic acceptor over `Ã` with silent transitions.
#[derive(Clone, Debug)]
pub struct ReducedAcceptor {
    rank: usize,
    trans: Vec<Vec<(Letter, u32)>>,
    silent: Vec<Vec<u32>>,
    pub initial: Vec<u32>,
    pub finals: Vec<u32>,
}

impl ReducedAcceptor {
    pub fn new(rank: usize, states: usize) -> ReducedAcceptor {
        ReducedAcceptor {
            rank,
            trans: vec![Vec::new(); states],
            silent: vec![Vec::new(); states],
            initial: Vec::new(),
            finals: Vec::new(),
        }
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    pub fn add_state(&mut self) -> u32 {
        self.trans.push(Vec::new());
        self.silent.push(Vec::new());
        (self.trans.len() - 1) as u32
    }

    pub fn add_transition(&mut self, p: u32, x: Letter, q: u32) {
        if !self.trans[p as usize].contains(&(x, q)) {
            self.trans[p as usize].push((x, q));
        }
    }

    pub fn add_silent(&mut self, p: u32, q: u32) -> bool {
        if p == q || self.silent[p as usize].contains(&q) {
            return false;
        }
        self.silent[p as usize].push(q);
        true
    }

    /// Acceptor of a single word.
    pub fn from_word(rank: usize, w: &Word) -> ReducedAcceptor {
        let mut m = ReducedAcceptor::new(rank, w.len() + 1);
        for (i, &x) in w.letters().iter().enumerate() {
            m.add_transition(i as u32, x, i as u32 + 1);
        }
        m.initial = vec![0];
        m.finals = vec![w.len() as u32];
        m
    }

    /// Appends an A-graph read from `start` to `end`; returns the state offset.
    pub fn append_graph(&mut self, g: &AGraph) -> u32 {
        let off = self.num_states() as u32;
        for _ in 0..g.num_vertices() {
            self.add_state();
        }
        for v in 0..g.num_vertices() as u32 {
            for x in all_letters(self.rank) {
                if let Some(w) = g.target(v, x) {
                    self.add_transition(off + v, x, off + w);
                }
            }
        }
        off
    }

    fn closure_from(&self, s: u32) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        seen[s as usize] = true;
        let mut stack = vec![s];
        while let Some(p) = stack.pop() {
            for &q in &self.silent[p as usize] {
                if !seen[q as usize] {
                    seen[q as usize] = true;
                    stack.push(q);
                }
            }
        }
        seen
    }

    /// Adds silent `p → r` whenever `p —x→ q ⇝ q' —x⁻¹→ r`, to a fixpoint.
    pub fn saturate(&mut self) {
        loop {
            let mut changed = false;
            for p in 0..self.num_states() {
                let outs = self.trans[p].clone();
                for (x, q) in outs {
                    let cl = self.closure_from(q);
                    let mut adds = Vec::new();
                    for (q2, inside) in cl.iter().enumerate() {
                        if !inside {
                            continue;
                        }
                        for &(y, r) in &self.trans[q2] {
                            if y == x.inverse() {
                                adds.push(r);
                            }
                        }
                    }
                    for r in adds {
                        changed |= self.add_silent(p as u32, r);
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    pub fn accepts(&self, w: &Word) -> bool {
        let close = |set: &mut Vec<bool>| {
            let mut stack: Vec<u32> = (0..set.len() as u32).filter(|&s| set[s as usize]).collect();
            while let Some(p) = stack.pop() {
                for &q in &self.silent[p as usize] {
                    if !set[q as usize] {
                        set[q as usize] = true;
                        stack.push(q);
                    }
                }
            }
        };
        let mut cur = vec![false; self.num_states()];
        for &s in &self.initial {
            cur[s as usize] = true;
        }
        close(&mut cur);
        for &x in w.letters() {
            let mut next = vec![false; self.num_states()];
            for p in 0..self.num_states() {
                if cur[p] {
                    for &(y, q) in &self.trans[p] {
                        if y == x {
                            next[q as usize] = true;
                        }
                    }
                }
            }
            close(&mut next);
            cur = next;
        }
        self.finals.iter().any(|&f| cur[f as usize])
    }
}

/// Saturated copy of an acceptor; accepts exactly the reduced forms of the
/// original language among reduced words.
pub fn reduced_acceptor(m: &ReducedAcceptor) -> ReducedAcceptor {
    let mut out = m.clone();
    out.saturate();
    out
}

/// Decides `red(target) ∈ L₁ ⋯ L_n` for path languages of A-graphs, each
/// given with its start and end vertex.
pub fn product_contains_graphs(rank: usize, parts: &[(AGraph, u32, u32)], target: &Word) -> bool {
    let mut m = ReducedAcceptor::new(rank, 0);
    let mut prev_end: Option<u32> = None;
    for (i, (g, s, e)) in parts.iter().enumerate() {
        let off = m.append_graph(g);
        match prev_end {
            None => m.initial = vec![off + s],
            Some(pe) => {
                m.add_silent(pe, off + s);
            }
        }
        prev_end = Some(off + e);
        if i + 1 == parts.len() {
            m.finals = vec![off + e];
        }
    }
    m.saturate();
    m.accepts(&target.reduce())
}

/// Decides `red(target) ∈ H₁g₁ ⋯ H_ng_n` exactly.
pub fn product_contains(rank: usize, cosets: &[CosetSpec], target: &Word) -> bool {
    let parts: Vec<(AGraph, u32, u32)> = cosets
        .iter()
        .map(|c| {
            let g = c.graph(rank);
            let (i, t) = (g.iota.unwrap(), g.tau.unwrap());
            (g, i, t)
        })
        .collect();
    product_contains_graphs(rank, &parts, target)
}
