use std::collections::HashSet;

use super::{EnumGroup, Group};
use crate::automata::complete_graph;
use crate::error::{Error, Result};
use crate::graphs::{fold_edges, AGraph, CanonicalForm, SerreGraph};
use crate::words::{all_letters, Letter, Word};

/// An `n`-cyclic configuration `(P_i, g_i)` in the Cayley graph of a group.
///
/// Each `P_i` is spanned by its listed vertices and Cayley edges `(g, a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigSpec {
    pub vertices: Vec<Vec<u32>>,
    pub edges: Vec<Vec<(u32, usize)>>,
    pub points: Vec<u32>,
}

struct Piece {
    verts: Vec<bool>,
    edges: HashSet<(u32, usize)>,
}

impl ConfigSpec {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn pieces(&self, g: &EnumGroup) -> Result<Vec<Piece>> {
        let n = self.len();
        if n < 2 || self.vertices.len() != n || self.edges.len() != n {
            return Err(Error::invalid(
                "configuration needs n ≥ 2 subgraphs and points",
            ));
        }
        let mut out = Vec::new();
        for i in 0..n {
            let mut verts = vec![false; g.order()];
            for &v in &self.vertices[i] {
                if v as usize >= g.order() {
                    return Err(Error::invalid("vertex out of range"));
                }
                verts[v as usize] = true;
            }
            let mut edges = HashSet::new();
            for &(v, a) in &self.edges[i] {
                if v as usize >= g.order() || a >= g.rank() {
                    return Err(Error::invalid("edge out of range"));
                }
                verts[v as usize] = true;
                verts[g.step(v, Letter::pos(a)) as usize] = true;
                edges.insert((v, a));
            }
            out.push(Piece { verts, edges });
        }
        Ok(out)
    }

    /// Checks the defining conditions against `g`'s Cayley graph.
    pub fn validate(&self, g: &EnumGroup) -> Result<()> {
        let n = self.len();
        let ps = self.pieces(g)?;
        for (i, p) in ps.iter().enumerate() {
            if !piece_connected(g, &p.verts, &p.edges) {
                return Err(Error::invalid(format!(
                    "P{} is empty or disconnected",
                    i + 1
                )));
            }
        }
        if self.points[n - 1] != 0 {
            return Err(Error::invalid("the last point must be the identity"));
        }
        if n == 2 {
            let verts: Vec<bool> = (0..g.order())
                .map(|v| ps[0].verts[v] && ps[1].verts[v])
                .collect();
            let edges: HashSet<(u32, usize)> =
                ps[0].edges.intersection(&ps[1].edges).copied().collect();
            let (g1, g2) = (self.points[0] as usize, self.points[1] as usize);
            if !verts[g1] || !verts[g2] {
                return Err(Error::invalid("points must lie in P1 ∩ P2"));
            }
            let comp = piece_components(g, &verts, &edges);
            if comp[g1] == comp[g2] {
                return Err(Error::invalid(
                    "points lie in the same component of P1 ∩ P2",
                ));
            }
        } else {
            for i in 0..n {
                let gi = self.points[i] as usize;
                if !ps[i].verts[gi] || !ps[(i + 1) % n].verts[gi] {
                    return Err(Error::invalid(format!(
                        "g{} must lie in P{} ∩ P{}",
                        i + 1,
                        i + 1,
                        (i + 1) % n + 1
                    )));
                }
                let (a, b, c) = (&ps[(i + n - 1) % n], &ps[i], &ps[(i + 1) % n]);
                if (0..g.order()).any(|v| a.verts[v] && b.verts[v] && c.verts[v]) {
                    return Err(Error::invalid(format!(
                        "triple intersection at P{} is nonempty",
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

fn piece_components(g: &EnumGroup, verts: &[bool], edges: &HashSet<(u32, usize)>) -> Vec<u32> {
    let mut sg = SerreGraph::new(g.order());
    for &(v, a) in edges {
        sg.add_edge(v, g.step(v, Letter::pos(a)));
    }
    let (comp, _) = sg.components();
    comp.iter()
        .enumerate()
        .map(|(v, &c)| if verts[v] { c } else { u32::MAX })
        .collect()
}

fn piece_connected(g: &EnumGroup, verts: &[bool], edges: &HashSet<(u32, usize)>) -> bool {
    let comp = piece_components(g, verts, edges);
    let mut cs = comp.iter().filter(|&&c| c != u32::MAX);
    match cs.next() {
        None => false,
        Some(&c0) => cs.all(|&c| c == c0),
    }
}

/// A group avoiding the configuration, mapping onto `g`.
///
/// Glues `P₁ ⊔ ⋯ ⊔ P_n` at `g_i` for `i < n`, folds, completes, and returns
/// the `A`-generated direct product of the transition group with `g`.
pub fn avoidance_group(g: &EnumGroup, config: &ConfigSpec, budget: usize) -> Result<EnumGroup> {
    config.validate(g)?;
    let ps = config.pieces(g)?;
    let n = ps.len();
    let order = g.order();
    let vid = |i: usize, v: u32| (i * order) as u32 + v;
    let mut edges = Vec::new();
    for (i, p) in ps.iter().enumerate() {
        for &(v, a) in &p.edges {
            let w = g.step(v, Letter::pos(a));
            edges.push((vid(i, v), Letter::pos(a), vid(i, w)));
            edges.push((vid(i, w), Letter::neg(a), vid(i, v)));
        }
    }
    // glue through auxiliary hub vertices joined by a fresh letter
    let rank = g.rank();
    let glue = Letter::pos(rank);
    let mut next_hub = n * order;
    for i in 0..n - 1 {
        let gi = config.points[i];
        let hub = next_hub as u32;
        next_hub += 1;
        for v in [vid(i, gi), vid(i + 1, gi)] {
            edges.push((hub, glue, v));
            edges.push((v, glue.inverse(), hub));
        }
    }
    let (folded, vmap) = fold_edges(next_hub, rank + 1, edges.into_iter());
    // keep only the glued piece vertices and drop the auxiliary letter
    let mut keep = vec![false; folded.num_vertices()];
    for (i, p) in ps.iter().enumerate() {
        for v in 0..order {
            if p.verts[v] {
                keep[vmap[vid(i, v as u32) as usize] as usize] = true;
            }
        }
    }
    let (sub, _) = folded.induced(&keep);
    let mut pg = AGraph::new(rank, sub.num_vertices());
    for (v, a, w) in sub.positive_edges() {
        if a.index() < rank {
            pg.set_edge(v, a, w)?;
        }
    }
    let c = complete_graph(&pg);
    let d = c.num_vertices();
    let mut gens = Vec::with_capacity(rank);
    for i in 0..rank {
        let a = Letter::pos(i);
        let mut perm = c.letter_map(a);
        perm.extend(g.elements().map(|h| d as u32 + g.step(h, a)));
        gens.push(perm);
    }
    EnumGroup::from_permutations(rank, d + order, &gens, budget)
}

/// Searches for `u_i` labelling a path `g_{i−1} → g_i` inside `P_i` with
/// `[u₁⋯u_n]_H = 1`, over paths of length at most `max_len`.
pub fn avoidance_violation(
    h: &EnumGroup,
    g: &EnumGroup,
    config: &ConfigSpec,
    max_len: usize,
) -> Result<Option<Vec<Word>>> {
    config.validate(g)?;
    let ps = config.pieces(g)?;
    let n = ps.len();
    let mut per: Vec<Vec<Word>> = Vec::new();
    for i in 0..n {
        let from = config.points[(i + n - 1) % n];
        let to = config.points[i];
        let mut found = Vec::new();
        let mut stack = vec![(from, Word::empty())];
        while let Some((v, w)) = stack.pop() {
            if v == to {
                found.push(w.clone());
            }
            if w.len() == max_len {
                continue;
            }
            for x in all_letters(g.rank()) {
                let t = g.step(v, x);
                let key = if x.is_inverse() {
                    (t, x.index())
                } else {
                    (v, x.index())
                };
                if ps[i].edges.contains(&key) {
                    let mut w2 = w.clone();
                    w2.0.push(x);
                    stack.push((t, w2));
                }
            }
        }
        per.push(found);
    }
    let mut idx = vec![0usize; n];
    if per.iter().any(|p| p.is_empty()) {
        return Ok(None);
    }
    loop {
        let word = Word::concat_all(idx.iter().enumerate().map(|(i, &k)| &per[i][k]));
        if h.eval(&word) == 0 {
            return Ok(Some(
                idx.iter()
                    .enumerate()
                    .map(|(i, &k)| per[i][k].clone())
                    .collect(),
            ));
        }
        let mut j = 0;
        loop {
            if j == n {
                return Ok(None);
            }
            idx[j] += 1;
            if idx[j] < per[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Letter subsets as bitmasks.
fn mask_letters(mask: u32, rank: usize) -> Vec<bool> {
    (0..rank).map(|i| mask >> i & 1 == 1).collect()
}

/// An `E`-labelled amalgamation chain with the data it was built from.
pub struct ChainReport {
    pub graph: AGraph,
    pub subsets: Vec<u32>,
    pub glue: Vec<u32>,
}

/// Glues copies of the coset graphs `H[B_i]`, identifying `γ_i` in copy `i`
/// with `1` in copy `i + 1`, then folds.
pub fn amalgamation_chain(h: &EnumGroup, subsets: &[u32], glue: &[u32]) -> Result<ChainReport> {
    let n = subsets.len();
    let r = h.rank();
    let full = (1u32 << r) - 1;
    if n == 0 || glue.len() != n {
        return Err(Error::invalid("need one glue point per subset"));
    }
    let comps: Vec<Vec<bool>> = subsets
        .iter()
        .map(|&b| {
            if b & !full != 0 {
                return Err(Error::invalid("subset uses unknown letters"));
            }
            Ok(h.letter_subgroup(&mask_letters(b, r)))
        })
        .collect::<Result<_>>()?;
    for i in 0..n {
        if !comps[i][glue[i] as usize] {
            return Err(Error::invalid(format!(
                "γ{} is not in H[B{}]",
                i + 1,
                i + 1
            )));
        }
    }
    for i in 1..n.saturating_sub(1) {
        let left = h.letter_subgroup(&mask_letters(subsets[i - 1] & subsets[i], r));
        let right = h.letter_subgroup(&mask_letters(subsets[i] & subsets[i + 1], r));
        let g = glue[i];
        if h.elements()
            .any(|x| left[x as usize] && right[Group::mul(h, &Group::inv(h, &g), &x) as usize])
        {
            return Err(Error::Precondition(format!(
                "H[B{}∩B{}] meets γ{}·H[B{}∩B{}]",
                i,
                i + 1,
                i + 1,
                i + 1,
                i + 2
            )));
        }
    }
    let order = h.order();
    let vid = |i: usize, v: u32| (i * order) as u32 + v;
    let mut edges = Vec::new();
    for (i, c) in comps.iter().enumerate() {
        let letters = mask_letters(subsets[i], r);
        for v in h.elements().filter(|&v| c[v as usize]) {
            for x in all_letters(r).filter(|x| letters[x.index()]) {
                edges.push((vid(i, v), x, vid(i, h.step(v, x))));
            }
        }
    }
    let glue_letter = Letter::pos(r);
    let mut nv = n * order;
    for i in 0..n - 1 {
        let hub = nv as u32;
        nv += 1;
        for v in [vid(i, glue[i]), vid(i + 1, 0)] {
            edges.push((hub, glue_letter, v));
            edges.push((v, glue_letter.inverse(), hub));
        }
    }
    let (folded, vmap) = fold_edges(nv, r + 1, edges.into_iter());
    let mut keep = vec![false; folded.num_vertices()];
    for (i, c) in comps.iter().enumerate() {
        for v in h.elements().filter(|&v| c[v as usize]) {
            keep[vmap[vid(i, v) as usize] as usize] = true;
        }
    }
    let (sub, _) = folded.induced(&keep);
    let mut graph = AGraph::new(r, sub.num_vertices());
    for (v, a, w) in sub.positive_edges() {
        if a.index() < r {
            graph.set_edge(v, a, w)?;
        }
    }
    graph.iota = Some(vmap[vid(0, 0) as usize]);
    Ok(ChainReport {
        graph,
        subsets: subsets.to_vec(),
        glue: glue.to_vec(),
    })
}

fn forms_from_every_base(g: &AGraph) -> HashSet<CanonicalForm> {
    (0..g.num_vertices() as u32)
        .map(|v| {
            let mut h = g.clone();
            h.iota = Some(v);
            h.tau = None;
            h.canonical_form()
        })
        .collect()
}

/// Components of a graph using only letters in `mask`, each as a graph.
fn letter_components(g: &AGraph, mask: u32) -> Vec<AGraph> {
    let r = g.rank();
    let sub = g.restrict_letters(&mask_letters(mask, r));
    let mut seen = vec![false; sub.num_vertices()];
    let mut out = Vec::new();
    for v in 0..sub.num_vertices() as u32 {
        if seen[v as usize] {
            continue;
        }
        let reach = sub.reachable(v);
        for (u, &k) in reach.iter().enumerate() {
            seen[u] |= k;
        }
        let (mut c, _) = sub.induced(&reach);
        c.iota = None;
        c.tau = None;
        out.push(c);
    }
    out
}

/// Checks that every `C`-component (`C ⊊ B`) of the chain is a coset graph
/// `γH[C]` or a `C`-chain of length at most `n`. Returns the number of
/// components matched as cosets, as chains, and unmatched.
pub fn chain_components_ok(
    h: &EnumGroup,
    chain: &ChainReport,
    budget: usize,
) -> Result<(usize, usize, usize)> {
    let r = h.rank();
    let b = chain.subsets.iter().fold(0u32, |acc, &s| acc | s);
    let n = chain.subsets.len();
    let (mut cosets, mut chains, mut bad) = (0, 0, 0);
    let mut work = 0usize;
    let mut c = b;
    loop {
        // proper subsets of b, including the empty set
        c = c.wrapping_sub(1) & b;
        let coset = {
            let comp = h.letter_subgroup(&mask_letters(c, r));
            let cg = h.cayley_graph().restrict_letters(&mask_letters(c, r));
            let (mut cg, _) = cg.induced(&comp);
            cg.iota = Some(0);
            cg.canonical_form()
        };
        let mut chain_forms: Option<HashSet<CanonicalForm>> = None;
        for comp in letter_components(&chain.graph, c) {
            let forms = forms_from_every_base(&comp);
            if forms.contains(&coset) {
                cosets += 1;
                continue;
            }
            if chain_forms.is_none() {
                chain_forms = Some(all_chain_forms(h, c, n, budget, &mut work)?);
            }
            if forms
                .iter()
                .any(|f| chain_forms.as_ref().unwrap().contains(f))
            {
                chains += 1;
            } else {
                bad += 1;
            }
        }
        if c == 0 {
            break;
        }
    }
    Ok((cosets, chains, bad))
}

fn all_chain_forms(
    h: &EnumGroup,
    c: u32,
    max_len: usize,
    budget: usize,
    work: &mut usize,
) -> Result<HashSet<CanonicalForm>> {
    let r = h.rank();
    let subs: Vec<u32> = (0..c).filter(|&s| s & !c == 0).collect();
    let mut out = HashSet::new();
    for len in 1..=max_len {
        let mut idx = vec![0usize; len];
        'outer: loop {
            let subsets: Vec<u32> = idx.iter().map(|&i| subs[i]).collect();
            let comps: Vec<Vec<u32>> = subsets
                .iter()
                .map(|&s| {
                    let m = h.letter_subgroup(&mask_letters(s, r));
                    h.elements().filter(|&x| m[x as usize]).collect()
                })
                .collect();
            let mut gidx = vec![0usize; len];
            loop {
                *work += 1;
                if *work > budget {
                    return Err(Error::Budget {
                        what: "chain search",
                        limit: budget,
                        reached: *work,
                    });
                }
                let glue: Vec<u32> = gidx.iter().enumerate().map(|(i, &k)| comps[i][k]).collect();
                if let Ok(rep) = amalgamation_chain(h, &subsets, &glue) {
                    for f in forms_from_every_base(&rep.graph) {
                        out.insert(f);
                    }
                }
                let mut j = 0;
                loop {
                    if j == len {
                        break;
                    }
                    gidx[j] += 1;
                    if gidx[j] < comps[j].len() {
                        break;
                    }
                    gidx[j] = 0;
                    j += 1;
                }
                if j == len {
                    break;
                }
            }
            let mut j = 0;
            loop {
                if j == len {
                    break 'outer;
                }
                idx[j] += 1;
                if idx[j] < subs.len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
    }
    Ok(out)
}

/// A coset cycle `η₁G[E₁] ∪ ⋯ ∪ η_nG[E_n]`, letter subsets as bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetCycle {
    pub subsets: Vec<u32>,
    pub etas: Vec<u32>,
}

/// Cycles found with `η₁ = 1`, capped at `max_report`.
#[derive(Clone, Debug, Default)]
pub struct CosetCycleReport {
    pub cycles: Vec<CosetCycle>,
    pub counts: Vec<(usize, usize)>,
    pub truncated: bool,
}

impl CosetCycleReport {
    pub fn total(&self) -> usize {
        self.counts.iter().map(|c| c.1).sum()
    }
}

/// Enumerates coset cycles of lengths `2..=n` in the Cayley graph of `g`.
pub fn detect_coset_cycles(
    g: &EnumGroup,
    n: usize,
    max_report: usize,
    budget: usize,
) -> Result<CosetCycleReport> {
    let r = g.rank();
    let full = (1u32 << r) - 1;
    let order = g.order();
    let masks: Vec<u32> = (0..full).collect();
    let sub: Vec<Vec<bool>> = (0..=full)
        .map(|m| g.letter_subgroup(&mask_letters(m, r)))
        .collect();
    // prod[x][y][k]: k ∈ G[x]·G[y]
    let mut prod = vec![vec![Vec::new(); (full + 1) as usize]; (full + 1) as usize];
    for x in 0..=full as usize {
        let xs: Vec<u32> = g.elements().filter(|&e| sub[x][e as usize]).collect();
        for y in 0..=full as usize {
            let mut set = vec![false; order];
            for &a in &xs {
                for b in g.elements().filter(|&e| sub[y][e as usize]) {
                    set[Group::mul(g, &a, &b) as usize] = true;
                }
            }
            prod[x][y] = set;
        }
    }
    let mut report = CosetCycleReport::default();
    let mut work = 0usize;
    for len in 2..=n {
        let mut count = 0usize;
        let mut idx = vec![0usize; len];
        loop {
            let es: Vec<u32> = idx.iter().map(|&i| masks[i]).collect();
            let mut etas = vec![0u32; len];
            search_etas(
                g,
                &es,
                &sub,
                &prod,
                &mut etas,
                1,
                &mut |etas| {
                    count += 1;
                    if report.cycles.len() < max_report {
                        report.cycles.push(CosetCycle {
                            subsets: es.clone(),
                            etas: etas.to_vec(),
                        });
                    } else {
                        report.truncated = true;
                    }
                },
                &mut work,
                budget,
            )?;
            let mut j = 0;
            while j < len {
                idx[j] += 1;
                if idx[j] < masks.len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == len {
                break;
            }
        }
        report.counts.push((len, count));
    }
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn search_etas(
    g: &EnumGroup,
    es: &[u32],
    sub: &[Vec<bool>],
    prod: &[Vec<Vec<bool>>],
    etas: &mut Vec<u32>,
    pos: usize,
    emit: &mut dyn FnMut(&[u32]),
    work: &mut usize,
    budget: usize,
) -> Result<()> {
    let n = es.len();
    *work += 1;
    if *work > budget {
        return Err(Error::Budget {
            what: "coset cycle search",
            limit: budget,
            reached: *work,
        });
    }
    // link i → i+1 holds iff η_i⁻¹η_{i+1} ∈ G[E_i] and ∉ G[E_{i−1}∩E_i]G[E_i∩E_{i+1}]
    let ok = |i: usize, etas: &[u32]| {
        let d = Group::mul(g, &Group::inv(g, &etas[i]), &etas[(i + 1) % n]) as usize;
        let prev = es[(i + n - 1) % n];
        let next = es[(i + 1) % n];
        sub[es[i] as usize][d] && !prod[(prev & es[i]) as usize][(es[i] & next) as usize][d]
    };
    if pos == n {
        if ok(n - 1, etas) {
            emit(etas);
        }
        return Ok(());
    }
    let base = etas[pos - 1];
    for h in g
        .elements()
        .filter(|&h| sub[es[pos - 1] as usize][h as usize])
    {
        etas[pos] = Group::mul(g, &base, &h);
        if ok(pos - 1, etas) {
            search_etas(g, es, sub, prod, etas, pos + 1, emit, work, budget)?;
        }
    }
    Ok(())
}
