//! Serre graphs, labelled graphs, folding and structural utilities.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::words::{all_letters, Letter, Word};

/// Sentinel for an undefined vertex.
pub const NONE: u32 = u32::MAX;

/// A finite graph with an edge involution.
///
/// Edge ids come in pairs `2k, 2k + 1` with `inv(e) = e ^ 1`; the even id is
/// the positive orientation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SerreGraph {
    n: usize,
    src: Vec<u32>,
}

impl SerreGraph {
    pub fn new(n: usize) -> SerreGraph {
        SerreGraph { n, src: Vec::new() }
    }

    pub fn add_vertex(&mut self) -> u32 {
        self.n += 1;
        (self.n - 1) as u32
    }

    /// Adds a geometric edge `a → b` and returns its positive id.
    pub fn add_edge(&mut self, a: u32, b: u32) -> usize {
        assert!((a as usize) < self.n && (b as usize) < self.n);
        self.src.push(a);
        self.src.push(b);
        self.src.len() - 2
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    /// Number of directed edges (twice the geometric count).
    pub fn num_edge_ids(&self) -> usize {
        self.src.len()
    }

    pub fn num_geometric_edges(&self) -> usize {
        self.src.len() / 2
    }

    pub fn alpha(&self, e: usize) -> u32 {
        self.src[e]
    }

    pub fn omega(&self, e: usize) -> u32 {
        self.src[e ^ 1]
    }

    pub fn inv(e: usize) -> usize {
        e ^ 1
    }

    pub fn positive_edges(&self) -> impl Iterator<Item = usize> {
        (0..self.src.len()).step_by(2)
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.alpha(e) == self.omega(e)
    }

    /// Outgoing directed edges of each vertex, in id order.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in 0..self.src.len() {
            adj[self.src[e] as usize].push(e);
        }
        adj
    }

    /// Geometric degree; a loop counts once.
    pub fn degree(&self, v: u32) -> usize {
        self.positive_edges()
            .filter(|&e| self.alpha(e) == v || self.omega(e) == v)
            .count()
    }

    /// Component id per vertex, plus the number of components.
    pub fn components(&self) -> (Vec<u32>, usize) {
        let adj = self.adjacency();
        let mut comp = vec![NONE; self.n];
        let mut c = 0u32;
        for s in 0..self.n {
            if comp[s] != NONE {
                continue;
            }
            comp[s] = c;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &e in &adj[v] {
                    let w = self.omega(e) as usize;
                    if comp[w] == NONE {
                        comp[w] = c;
                        stack.push(w);
                    }
                }
            }
            c += 1;
        }
        (comp, c as usize)
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.components().1 == 1
    }

    pub fn cyclomatic_number(&self) -> usize {
        let (_, c) = self.components();
        self.num_geometric_edges() + c - self.n
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.cyclomatic_number() == 0
    }

    /// Least subgraph containing the seed, closed under `α`, `ω` and inversion.
    ///
    /// Returns the subgraph together with the old-to-new vertex map and the
    /// list of old positive edge ids kept (in new order).
    pub fn spanned_subgraph(
        &self,
        vertices: &[u32],
        edges: &[usize],
    ) -> (SerreGraph, Vec<u32>, Vec<usize>) {
        let mut keep_v = vec![false; self.n];
        let mut keep_e = vec![false; self.num_geometric_edges()];
        for &v in vertices {
            keep_v[v as usize] = true;
        }
        for &e in edges {
            keep_e[e / 2] = true;
            keep_v[self.alpha(e) as usize] = true;
            keep_v[self.omega(e) as usize] = true;
        }
        let mut vmap = vec![NONE; self.n];
        let mut out = SerreGraph::new(0);
        for v in 0..self.n {
            if keep_v[v] {
                vmap[v] = out.add_vertex();
            }
        }
        let mut kept = Vec::new();
        for e in self.positive_edges() {
            if keep_e[e / 2] {
                out.add_edge(vmap[self.alpha(e) as usize], vmap[self.omega(e) as usize]);
                kept.push(e);
            }
        }
        (out, vmap, kept)
    }

    /// Adds a fresh vertex `v₀ = n` and one edge `v₀ → v` for every old vertex.
    pub fn cone_graph(&self) -> SerreGraph {
        let mut g = self.clone();
        let v0 = g.add_vertex();
        for v in 0..self.n as u32 {
            g.add_edge(v0, v);
        }
        g
    }

    /// BFS spanning tree from `root`: parent edge per vertex (directed towards
    /// the child), `usize::MAX` at the root and at unreached vertices.
    pub fn bfs_tree(&self, root: u32) -> Vec<usize> {
        let adj = self.adjacency();
        let mut parent = vec![usize::MAX; self.n];
        let mut seen = vec![false; self.n];
        seen[root as usize] = true;
        let mut q = VecDeque::from([root as usize]);
        while let Some(v) = q.pop_front() {
            for &e in &adj[v] {
                let w = self.omega(e) as usize;
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = e;
                    q.push_back(w);
                }
            }
        }
        parent
    }

    /// Directed edge path from the tree root to `v`.
    pub fn tree_path(&self, parent: &[usize], v: u32) -> Vec<usize> {
        let mut path = Vec::new();
        let mut cur = v as usize;
        while parent[cur] != usize::MAX {
            let e = parent[cur];
            path.push(e);
            cur = self.alpha(e) as usize;
        }
        path.reverse();
        path
    }

    /// One closed path per non-tree geometric edge, based at vertex 0.
    pub fn basic_cycles(&self) -> Result<Vec<Vec<usize>>> {
        if !self.is_connected() {
            return Err(Error::Precondition(
                "basic_cycles: graph is disconnected".into(),
            ));
        }
        let parent = self.bfs_tree(0);
        let mut in_tree = vec![false; self.num_geometric_edges()];
        for &e in &parent {
            if e != usize::MAX {
                in_tree[e / 2] = true;
            }
        }
        let mut out = Vec::new();
        for e in self.positive_edges() {
            if in_tree[e / 2] {
                continue;
            }
            let mut cyc = self.tree_path(&parent, self.alpha(e));
            cyc.push(e);
            let back = self.tree_path(&parent, self.omega(e));
            cyc.extend(back.iter().rev().map(|&f| f ^ 1));
            out.push(cyc);
        }
        Ok(out)
    }

    /// Longest edge-path distance between two vertices of a tree.
    pub fn tree_diameter(&self) -> Result<usize> {
        if !self.is_tree() {
            return Err(Error::Precondition("tree_diameter: not a tree".into()));
        }
        let far = |s: u32| {
            let d = self.distances(s);
            let (v, &m) = d.iter().enumerate().max_by_key(|p| *p.1).unwrap();
            (v as u32, m)
        };
        let (v, _) = far(0);
        Ok(far(v).1 as usize)
    }

    /// BFS edge distances from `s` (`u32::MAX` if unreachable).
    pub fn distances(&self, s: u32) -> Vec<u32> {
        let adj = self.adjacency();
        let mut d = vec![u32::MAX; self.n];
        d[s as usize] = 0;
        let mut q = VecDeque::from([s as usize]);
        while let Some(v) = q.pop_front() {
            for &e in &adj[v] {
                let w = self.omega(e) as usize;
                if d[w] == u32::MAX {
                    d[w] = d[v] + 1;
                    q.push_back(w);
                }
            }
        }
        d
    }

    /// The reduced (backtrack-free) edge path between two vertices of a tree.
    pub fn tree_geodesic(&self, from: u32, to: u32) -> Vec<usize> {
        let parent = self.bfs_tree(from);
        self.tree_path(&parent, to)
    }
}

/// Labels that carry an involution compatible with edge inversion.
pub trait Involutive: Clone {
    fn involute(&self) -> Self;
}

impl Involutive for Letter {
    fn involute(&self) -> Self {
        self.inverse()
    }
}

impl Involutive for Word {
    fn involute(&self) -> Self {
        self.invert()
    }
}

/// A Serre graph with `label(inv e) = label(e)⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledGraph<L> {
    pub graph: SerreGraph,
    labels: Vec<L>,
}

impl<L: Involutive> LabelledGraph<L> {
    pub fn new(n: usize) -> Self {
        LabelledGraph {
            graph: SerreGraph::new(n),
            labels: Vec::new(),
        }
    }

    /// Labels an existing graph from one label per positive edge.
    pub fn from_graph(graph: SerreGraph, positive_labels: Vec<L>) -> Result<Self> {
        if positive_labels.len() != graph.num_geometric_edges() {
            return Err(Error::invalid("label count does not match edge count"));
        }
        let mut labels = Vec::with_capacity(graph.num_edge_ids());
        for l in positive_labels {
            let inv = l.involute();
            labels.push(l);
            labels.push(inv);
        }
        Ok(LabelledGraph { graph, labels })
    }

    pub fn add_vertex(&mut self) -> u32 {
        self.graph.add_vertex()
    }

    pub fn add_edge(&mut self, a: u32, b: u32, label: L) -> usize {
        let e = self.graph.add_edge(a, b);
        let inv = label.involute();
        self.labels.push(label);
        self.labels.push(inv);
        e
    }

    pub fn label(&self, e: usize) -> &L {
        &self.labels[e]
    }

    pub fn positive_labels(&self) -> Vec<L> {
        self.labels.iter().step_by(2).cloned().collect()
    }
}

impl LabelledGraph<Word> {
    /// Concatenated label of an edge path.
    pub fn path_label(&self, path: &[usize]) -> Word {
        Word::concat_all(path.iter().map(|&e| self.label(e)))
    }
}

/// Replaces each maximal arc through unprotected degree-2 vertices of a tree
/// by one edge labelled with the concatenated word.
///
/// Returns the contracted tree and a map from old vertices to new ones
/// (`NONE` for contracted vertices).
pub fn contract_degree2(
    t: &LabelledGraph<Word>,
    protected: &[bool],
) -> Result<(LabelledGraph<Word>, Vec<u32>)> {
    let g = &t.graph;
    if !g.is_tree() {
        return Err(Error::Precondition(
            "contract_degree2: input is not a tree".into(),
        ));
    }
    let n = g.num_vertices();
    let adj = g.adjacency();
    let contractible = |v: usize| !protected.get(v).copied().unwrap_or(false) && adj[v].len() == 2;
    let mut vmap = vec![NONE; n];
    let mut out = LabelledGraph::new(0);
    for v in 0..n {
        if !contractible(v) {
            vmap[v] = out.add_vertex();
        }
    }
    if vmap.iter().all(|&x| x == NONE) {
        // a bare path with no endpoints kept cannot occur in a tree
        return Ok((t.clone(), (0..n as u32).collect()));
    }
    let mut used = vec![false; g.num_geometric_edges()];
    for v in 0..n {
        if contractible(v) {
            continue;
        }
        for &e0 in &adj[v] {
            if used[e0 / 2] {
                continue;
            }
            let mut path = vec![e0];
            used[e0 / 2] = true;
            let mut cur = g.omega(e0) as usize;
            let mut last = e0;
            while contractible(cur) {
                let next = *adj[cur].iter().find(|&&f| f != (last ^ 1)).unwrap();
                used[next / 2] = true;
                path.push(next);
                last = next;
                cur = g.omega(next) as usize;
            }
            out.add_edge(vmap[v], vmap[cur], t.path_label(&path));
        }
    }
    Ok((out, vmap))
}

/// A folded `Ã`-labelled graph with optional base and terminal vertices.
///
/// Transitions are stored densely as `trans[v * 2r + code(x)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AGraph {
    rank: usize,
    trans: Vec<u32>,
    pub iota: Option<u32>,
    pub tau: Option<u32>,
}

impl AGraph {
    pub fn new(rank: usize, n: usize) -> AGraph {
        AGraph {
            rank,
            trans: vec![NONE; n * 2 * rank],
            iota: None,
            tau: None,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_vertices(&self) -> usize {
        if self.rank == 0 {
            0
        } else {
            self.trans.len() / (2 * self.rank)
        }
    }

    pub fn add_vertex(&mut self) -> u32 {
        let v = self.num_vertices() as u32;
        self.trans.extend(std::iter::repeat_n(NONE, 2 * self.rank));
        v
    }

    #[inline]
    pub fn target(&self, v: u32, x: Letter) -> Option<u32> {
        let t = self.trans[v as usize * 2 * self.rank + x.code()];
        (t != NONE).then_some(t)
    }

    #[inline]
    pub(crate) fn raw(&self, v: u32, code: usize) -> u32 {
        self.trans[v as usize * 2 * self.rank + code]
    }

    /// Adds `v —x→ w` (and the inverse edge); errors if this would unfold.
    pub fn set_edge(&mut self, v: u32, x: Letter, w: u32) -> Result<()> {
        let k = 2 * self.rank;
        let (i, j) = (
            v as usize * k + x.code(),
            w as usize * k + x.inverse().code(),
        );
        if (self.trans[i] != NONE && self.trans[i] != w)
            || (self.trans[j] != NONE && self.trans[j] != v)
        {
            return Err(Error::invalid("edge would make the graph unfolded"));
        }
        self.trans[i] = w;
        self.trans[j] = v;
        Ok(())
    }

    /// Number of defined transitions out of `v`.
    pub fn out_count(&self, v: u32) -> usize {
        let k = 2 * self.rank;
        self.trans[v as usize * k..(v as usize + 1) * k]
            .iter()
            .filter(|&&t| t != NONE)
            .count()
    }

    /// Positive edges `(v, a, w)` ordered by vertex then letter.
    pub fn positive_edges(&self) -> Vec<(u32, Letter, u32)> {
        let mut out = Vec::new();
        for v in 0..self.num_vertices() as u32 {
            for i in 0..self.rank {
                if let Some(w) = self.target(v, Letter::pos(i)) {
                    out.push((v, Letter::pos(i), w));
                }
            }
        }
        out
    }

    pub fn num_positive_edges(&self) -> usize {
        (0..self.num_vertices() as u32)
            .map(|v| {
                (0..self.rank)
                    .filter(|&i| self.target(v, Letter::pos(i)).is_some())
                    .count()
            })
            .sum()
    }

    pub fn follow(&self, v: u32, w: &Word) -> Option<u32> {
        let mut cur = v;
        for &x in w.letters() {
            cur = self.target(cur, x)?;
        }
        Some(cur)
    }

    pub fn is_complete(&self) -> bool {
        self.trans.iter().all(|&t| t != NONE)
    }

    /// `[x]` as a partial map on vertices.
    pub fn letter_map(&self, x: Letter) -> Vec<u32> {
        (0..self.num_vertices() as u32)
            .map(|v| self.raw(v, x.code()))
            .collect()
    }

    pub fn to_labelled(&self) -> LabelledGraph<Letter> {
        let mut g = LabelledGraph::new(self.num_vertices());
        for (v, a, w) in self.positive_edges() {
            g.add_edge(v, w, a);
        }
        g
    }

    /// Graph shortest path label from `s` to `t` (BFS in letter order).
    pub fn path_word(&self, s: u32, t: u32) -> Option<Word> {
        let n = self.num_vertices();
        let mut prev: Vec<Option<(u32, Letter)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s as usize] = true;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            if v == t {
                break;
            }
            for x in all_letters(self.rank) {
                if let Some(w) = self.target(v, x) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        prev[w as usize] = Some((v, x));
                        q.push_back(w);
                    }
                }
            }
        }
        if !seen[t as usize] {
            return None;
        }
        let mut letters = Vec::new();
        let mut cur = t;
        while let Some((p, x)) = prev[cur as usize] {
            letters.push(x);
            cur = p;
        }
        letters.reverse();
        Some(Word(letters))
    }

    /// Vertices reachable from `s`.
    pub fn reachable(&self, s: u32) -> Vec<bool> {
        let mut seen = vec![false; self.num_vertices()];
        seen[s as usize] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for c in 0..2 * self.rank {
                let w = self.raw(v, c);
                if w != NONE && !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Keeps the vertices flagged in `keep`, renumbering in order.
    pub fn induced(&self, keep: &[bool]) -> (AGraph, Vec<u32>) {
        let mut map = vec![NONE; self.num_vertices()];
        let mut n = 0u32;
        for (v, &k) in keep.iter().enumerate() {
            if k {
                map[v] = n;
                n += 1;
            }
        }
        let mut out = AGraph::new(self.rank, n as usize);
        for v in 0..self.num_vertices() {
            if !keep[v] {
                continue;
            }
            for c in 0..2 * self.rank {
                let w = self.raw(v as u32, c);
                if w != NONE && keep[w as usize] {
                    out.trans[map[v] as usize * 2 * self.rank + c] = map[w as usize];
                }
            }
        }
        out.iota = self
            .iota
            .and_then(|v| (map[v as usize] != NONE).then(|| map[v as usize]));
        out.tau = self
            .tau
            .and_then(|v| (map[v as usize] != NONE).then(|| map[v as usize]));
        (out, map)
    }

    /// Removes hanging trees: vertices other than the marked ones with at most
    /// one incident edge end, repeatedly.
    pub fn prune(&self) -> AGraph {
        let n = self.num_vertices();
        let mut alive = vec![true; n];
        let mut deg: Vec<usize> = (0..n as u32).map(|v| self.out_count(v)).collect();
        let marked = |v: usize| self.iota == Some(v as u32) || self.tau == Some(v as u32);
        let mut stack: Vec<usize> = (0..n).filter(|&v| !marked(v) && deg[v] <= 1).collect();
        while let Some(v) = stack.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for c in 0..2 * self.rank {
                let w = self.raw(v as u32, c);
                if w != NONE && alive[w as usize] {
                    deg[w as usize] -= 1;
                    if !marked(w as usize) && deg[w as usize] <= 1 {
                        stack.push(w as usize);
                    }
                }
            }
        }
        self.induced(&alive).0
    }

    /// Relabels vertices in BFS order from the base point (or vertex 0),
    /// following letters in canonical order; unreached vertices follow.
    pub fn canonical_form(&self) -> CanonicalForm {
        let n = self.num_vertices();
        let k = 2 * self.rank;
        let mut order: Vec<u32> = Vec::with_capacity(n);
        let mut newid = vec![NONE; n];
        let mut starts: Vec<u32> = self.iota.into_iter().collect();
        starts.extend(0..n as u32);
        for s in starts {
            if newid[s as usize] != NONE {
                continue;
            }
            newid[s as usize] = order.len() as u32;
            order.push(s);
            let mut head = order.len() - 1;
            while head < order.len() {
                let v = order[head];
                head += 1;
                for c in 0..k {
                    let w = self.raw(v, c);
                    if w != NONE && newid[w as usize] == NONE {
                        newid[w as usize] = order.len() as u32;
                        order.push(w);
                    }
                }
            }
        }
        let mut trans = Vec::with_capacity(n * k);
        for &v in &order {
            for c in 0..k {
                let w = self.raw(v, c);
                trans.push(if w == NONE { NONE } else { newid[w as usize] });
            }
        }
        CanonicalForm {
            rank: self.rank,
            trans,
            iota: self.iota.map(|v| newid[v as usize]),
            tau: self.tau.map(|v| newid[v as usize]),
        }
    }

    /// Checks the involution and folding invariants directly.
    pub fn check_folded(&self) -> bool {
        (0..self.num_vertices() as u32).all(|v| {
            all_letters(self.rank).all(|x| match self.target(v, x) {
                Some(w) => self.target(w, x.inverse()) == Some(v),
                None => true,
            })
        })
    }

    /// Induced sub-A-graph on the edges whose letter index is in `letters`.
    pub fn restrict_letters(&self, letters: &[bool]) -> AGraph {
        let mut out = self.clone();
        let k = 2 * self.rank;
        for v in 0..self.num_vertices() {
            for c in 0..k {
                if !letters[c / 2] {
                    out.trans[v * k + c] = NONE;
                }
            }
        }
        out
    }
}

/// Canonical relabelling of an A-graph; equal iff isomorphic as pointed graphs
/// (for graphs connected from the base point).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    pub rank: usize,
    pub trans: Vec<u32>,
    pub iota: Option<u32>,
    pub tau: Option<u32>,
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }
}

/// Stallings folding: the maximal folded quotient and the vertex surjection.
///
/// Vertices of the result are numbered by the least original vertex in each
/// class.
pub fn fold(g: &LabelledGraph<Letter>, rank: usize) -> (AGraph, Vec<u32>) {
    fold_edges(
        g.graph.num_vertices(),
        rank,
        (0..g.graph.num_edge_ids()).map(|e| (g.graph.alpha(e), *g.label(e), g.graph.omega(e))),
    )
}

/// Folds a graph given as directed edges (both orientations must be present).
pub(crate) fn fold_edges(
    n: usize,
    rank: usize,
    edges: impl Iterator<Item = (u32, Letter, u32)>,
) -> (AGraph, Vec<u32>) {
    let k = 2 * rank;
    let mut uf = UnionFind::new(n);
    let mut trans = vec![NONE; n * k];
    let mut pending: Vec<(u32, u32)> = Vec::new();
    for (a, x, b) in edges {
        let slot = &mut trans[a as usize * k + x.code()];
        if *slot == NONE {
            *slot = b;
        } else if *slot != b {
            pending.push((*slot, b));
        }
    }
    while let Some((a, b)) = pending.pop() {
        let (a, b) = (uf.find(a), uf.find(b));
        if a == b {
            continue;
        }
        let (r, o) = if a < b { (a, b) } else { (b, a) };
        uf.parent[o as usize] = r;
        for c in 0..k {
            let t = std::mem::replace(&mut trans[o as usize * k + c], NONE);
            if t == NONE {
                continue;
            }
            let slot = trans[r as usize * k + c];
            if slot == NONE {
                trans[r as usize * k + c] = t;
            } else {
                pending.push((slot, t));
            }
        }
    }
    let mut newid = vec![NONE; n];
    let mut m = 0u32;
    for v in 0..n as u32 {
        if uf.find(v) == v {
            newid[v as usize] = m;
            m += 1;
        }
    }
    let mut out = AGraph::new(rank, m as usize);
    for v in 0..n as u32 {
        if uf.find(v) != v {
            continue;
        }
        for c in 0..k {
            let t = trans[v as usize * k + c];
            if t != NONE {
                out.trans[newid[v as usize] as usize * k + c] = newid[uf.find(t) as usize];
            }
        }
    }
    let vmap: Vec<u32> = (0..n as u32).map(|v| newid[uf.find(v) as usize]).collect();
    debug_assert!(out.check_folded());
    (out, vmap)
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Letter = Letter::pos(0);
    const B: Letter = Letter::pos(1);

    #[test]
    fn fold_merges_cofinal_edges() {
        let mut g = LabelledGraph::new(3);
        g.add_edge(0, 1, A);
        g.add_edge(0, 2, A);
        let (f, vmap) = fold(&g, 1);
        assert_eq!(f.num_vertices(), 2);
        assert_eq!(vmap, vec![0, 1, 1]);
        assert_eq!(f.num_positive_edges(), 1);
    }

    #[test]
    fn fold_cycle_to_loop() {
        let mut g = LabelledGraph::new(3);
        g.add_edge(0, 1, A);
        g.add_edge(1, 2, B);
        g.add_edge(2, 0, A.inverse());
        let (f, _) = fold(&g, 2);
        assert_eq!(f.num_vertices(), 2);
        assert_eq!(f.target(0, A), Some(1));
        assert_eq!(f.target(1, B), Some(1));
        assert_eq!(f.num_positive_edges(), 2);
    }

    #[test]
    fn fold_fixpoint() {
        let mut g = LabelledGraph::new(2);
        g.add_edge(0, 1, A);
        g.add_edge(1, 0, B);
        let (f, vmap) = fold(&g, 2);
        assert_eq!(vmap, vec![0, 1]);
        assert_eq!(f.to_labelled().graph.num_geometric_edges(), 2);
    }

    #[test]
    fn cyclomatic_examples() {
        let mut t = SerreGraph::new(4);
        t.add_edge(0, 1);
        t.add_edge(1, 2);
        t.add_edge(1, 3);
        assert_eq!(t.cyclomatic_number(), 0);
        let mut c3 = SerreGraph::new(3);
        c3.add_edge(0, 1);
        c3.add_edge(1, 2);
        c3.add_edge(2, 0);
        assert_eq!(c3.cyclomatic_number(), 1);
        let mut theta = SerreGraph::new(2);
        for _ in 0..3 {
            theta.add_edge(0, 1);
        }
        assert_eq!(theta.cyclomatic_number(), 2);
        let cycles = theta.basic_cycles().unwrap();
        assert_eq!(cycles.len(), 2);
        assert!(cycles.iter().all(|c| c.len() == 2));
        assert_eq!(c3.basic_cycles().unwrap()[0].len(), 3);
        assert!(t.basic_cycles().unwrap().is_empty());
        assert!(SerreGraph::new(2).basic_cycles().is_err());
    }

    #[test]
    fn spanned_and_cone() {
        let mut p = SerreGraph::new(3);
        let e0 = p.add_edge(0, 1);
        let e1 = p.add_edge(1, 2);
        let (s, _, _) = p.spanned_subgraph(&[2], &[]);
        assert_eq!((s.num_vertices(), s.num_geometric_edges()), (1, 0));
        let (s, _, _) = p.spanned_subgraph(&[], &[e1 ^ 1]);
        assert_eq!((s.num_vertices(), s.num_geometric_edges()), (2, 1));
        let (s, _, _) = p.spanned_subgraph(&[], &[e0, e1]);
        assert_eq!((s.num_vertices(), s.num_geometric_edges()), (3, 2));

        let c = SerreGraph::new(2).cone_graph();
        assert_eq!((c.num_vertices(), c.num_geometric_edges()), (3, 2));
        let mut c2 = SerreGraph::new(2);
        c2.add_edge(0, 1);
        c2.add_edge(1, 0);
        let c = c2.cone_graph();
        assert_eq!((c.num_vertices(), c.num_geometric_edges()), (3, 4));
        let c = SerreGraph::new(1).cone_graph();
        assert_eq!((c.num_vertices(), c.num_geometric_edges()), (2, 1));
    }

    #[test]
    fn contraction() {
        let w = |x: Letter| Word::letter(x);
        let mut t = LabelledGraph::new(3);
        t.add_edge(0, 1, w(A));
        t.add_edge(1, 2, w(B));
        let (c, vmap) = contract_degree2(&t, &[true, false, true]).unwrap();
        assert_eq!(c.graph.num_geometric_edges(), 1);
        assert_eq!(vmap, vec![0, NONE, 1]);
        assert_eq!(c.label(0), &Word(vec![A, B]));

        let (c, _) = contract_degree2(&t, &[true, true, true]).unwrap();
        assert_eq!(c, t);

        let mut star = LabelledGraph::new(4);
        for v in 1..4 {
            star.add_edge(0, v, w(A));
        }
        let (c, _) = contract_degree2(&star, &[false; 4]).unwrap();
        assert_eq!(c.graph.num_geometric_edges(), 3);

        let mut cyc = LabelledGraph::new(2);
        cyc.add_edge(0, 1, w(A));
        cyc.add_edge(1, 0, w(A));
        assert!(contract_degree2(&cyc, &[true, true]).is_err());
    }

    #[test]
    fn canonical_form_ignores_numbering() {
        let mut g = LabelledGraph::new(3);
        g.add_edge(0, 1, A);
        g.add_edge(1, 2, B);
        let (mut f1, _) = fold(&g, 2);
        f1.iota = Some(0);
        let mut h = LabelledGraph::new(3);
        h.add_edge(2, 0, B);
        h.add_edge(1, 2, A);
        let (mut f2, _) = fold(&h, 2);
        f2.iota = Some(1);
        assert_eq!(f1.canonical_form(), f2.canonical_form());
    }
}
