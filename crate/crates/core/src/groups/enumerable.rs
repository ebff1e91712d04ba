use std::collections::{HashMap, VecDeque};

use super::Group;
use crate::error::{Error, Result};
use crate::graphs::AGraph;
use crate::words::{all_letters, Letter, Word};

/// Largest order for which a full multiplication table is kept.
const TABLE_LIMIT: usize = 1024;

/// A finite `A`-generated group with listable elements.
///
/// Elements are dense ids with `0` the identity, numbered in BFS order from
/// the identity so that `word(g)` is the shortlex-least word for `g`.
#[derive(Clone, Debug)]
pub struct EnumGroup {
    rank: usize,
    rmul: Vec<u32>,
    words: Vec<Word>,
    inv: Vec<u32>,
    table: Option<Vec<u32>>,
    action: Option<(usize, Vec<u32>)>,
}

/// BFS closure of the identity under right multiplication by letters.
pub(crate) fn enumerate<G: Group>(
    g: &G,
    budget: usize,
) -> Result<(Vec<G::Elem>, Vec<u32>, Vec<Word>)> {
    let k = 2 * g.rank();
    let mut elems = vec![g.identity()];
    let mut index: HashMap<G::Elem, u32> = HashMap::from([(g.identity(), 0)]);
    let mut words = vec![Word::empty()];
    let mut rmul = Vec::new();
    let mut head = 0;
    while head < elems.len() {
        let e = elems[head].clone();
        for c in 0..k {
            let f = g.push(&e, Letter::from_code(c));
            let id = match index.get(&f) {
                Some(&i) => i,
                None => {
                    if elems.len() >= budget {
                        return Err(Error::Budget {
                            what: "group elements",
                            limit: budget,
                            reached: elems.len() + 1,
                        });
                    }
                    let i = elems.len() as u32;
                    index.insert(f.clone(), i);
                    elems.push(f);
                    let mut w = words[head].clone();
                    w.0.push(Letter::from_code(c));
                    words.push(w);
                    i
                }
            };
            rmul.push(id);
        }
        head += 1;
    }
    Ok((elems, rmul, words))
}

impl EnumGroup {
    fn from_parts(rank: usize, rmul: Vec<u32>, words: Vec<Word>) -> EnumGroup {
        let n = words.len();
        let k = 2 * rank;
        let follow = |mut a: u32, w: &Word| {
            for x in w.letters() {
                a = rmul[a as usize * k + x.code()];
            }
            a
        };
        let inv: Vec<u32> = words.iter().map(|w| follow(0, &w.invert())).collect();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for a in 0..n as u32 {
                for w in &words {
                    t.push(follow(a, w));
                }
            }
            t
        });
        EnumGroup {
            rank,
            rmul,
            words,
            inv,
            table,
            action: None,
        }
    }

    /// Closure of any hashable group implementation.
    pub fn from_group<G: Group>(g: &G, budget: usize) -> Result<(EnumGroup, Vec<G::Elem>)> {
        let (elems, rmul, words) = enumerate(g, budget)?;
        Ok((EnumGroup::from_parts(g.rank(), rmul, words), elems))
    }

    /// The group generated by one permutation per positive letter, acting on
    /// the right of `0..degree`.
    pub fn from_permutations(
        rank: usize,
        degree: usize,
        gens: &[Vec<u32>],
        budget: usize,
    ) -> Result<EnumGroup> {
        let pg = PermGens::new(rank, degree, gens)?;
        let (elems, rmul, words) = enumerate(&pg, budget)?;
        let mut g = EnumGroup::from_parts(rank, rmul, words);
        let mut flat = Vec::with_capacity(elems.len() * degree);
        for e in &elems {
            flat.extend_from_slice(e);
        }
        g.action = Some((degree, flat));
        Ok(g)
    }

    pub fn trivial(rank: usize) -> EnumGroup {
        EnumGroup::from_permutations(rank, 1, &vec![vec![0]; rank], 1).unwrap()
    }

    /// Builds from a right-multiplication table `n × 2r` with identity `0`.
    pub fn from_rmul(rank: usize, rmul: Vec<u32>) -> Result<EnumGroup> {
        let k = 2 * rank;
        let n = rmul.len() / k;
        if n == 0 || rmul.len() != n * k || rmul.iter().any(|&t| t as usize >= n) {
            return Err(Error::invalid("malformed multiplication table"));
        }
        // renumber in BFS order so words are shortlex-least
        let mut order = vec![0u32];
        let mut newid = vec![u32::MAX; n];
        newid[0] = 0;
        let mut words = vec![Word::empty()];
        let mut q = VecDeque::from([0u32]);
        while let Some(v) = q.pop_front() {
            for c in 0..k {
                let w = rmul[v as usize * k + c];
                if newid[w as usize] == u32::MAX {
                    newid[w as usize] = order.len() as u32;
                    order.push(w);
                    let mut word = words[newid[v as usize] as usize].clone();
                    word.0.push(Letter::from_code(c));
                    words.push(word);
                    q.push_back(w);
                }
            }
        }
        if order.len() != n {
            return Err(Error::invalid(
                "multiplication table is not generated by the letters",
            ));
        }
        let mut out = Vec::with_capacity(n * k);
        for &v in &order {
            for c in 0..k {
                out.push(newid[rmul[v as usize * k + c] as usize]);
            }
        }
        Ok(EnumGroup::from_parts(rank, out, words))
    }

    pub fn order(&self) -> usize {
        self.words.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order() as u32
    }

    pub fn word(&self, g: u32) -> &Word {
        &self.words[g as usize]
    }

    pub fn rmul_table(&self) -> &[u32] {
        &self.rmul
    }

    #[inline]
    pub fn step(&self, g: u32, x: Letter) -> u32 {
        self.rmul[g as usize * 2 * self.rank + x.code()]
    }

    pub fn follow(&self, mut g: u32, w: &Word) -> u32 {
        for &x in w.letters() {
            g = self.step(g, x);
        }
        g
    }

    /// Permutation degree and the image of point `v` under element `g`.
    pub fn degree(&self) -> Option<usize> {
        self.action.as_ref().map(|a| a.0)
    }

    pub fn perm(&self, g: u32) -> Option<&[u32]> {
        self.action
            .as_ref()
            .map(|(d, flat)| &flat[g as usize * d..(g as usize + 1) * d])
    }

    pub fn element_order(&self, g: u32) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = Group::mul(self, &x, &g);
            k += 1;
        }
        k
    }

    /// The Cayley graph as a complete A-graph based at the identity.
    pub fn cayley_graph(&self) -> AGraph {
        let mut out = AGraph::new(self.rank, self.order());
        for g in self.elements() {
            for i in 0..self.rank {
                let a = Letter::pos(i);
                out.set_edge(g, a, self.step(g, a))
                    .expect("Cayley graph is folded");
            }
        }
        out.iota = Some(0);
        out
    }

    /// Signed Cayley-edge keys `(g, a)` traversed by `w` from `base`.
    pub fn cayley_path(&self, base: u32, w: &Word) -> Vec<(u32, usize, i8)> {
        let mut out = Vec::with_capacity(w.len());
        let mut g = base;
        for &x in w.letters() {
            let h = self.step(g, x);
            if x.is_inverse() {
                out.push((h, x.index(), -1));
            } else {
                out.push((g, x.index(), 1));
            }
            g = h;
        }
        out
    }

    /// Membership bitset of the subgroup generated by the given elements.
    pub fn subgroup_closure(&self, gens: &[u32]) -> Vec<bool> {
        let mut inside = vec![false; self.order()];
        inside[0] = true;
        let mut stack = vec![0u32];
        while let Some(h) = stack.pop() {
            for &s in gens {
                for t in [
                    Group::mul(self, &h, &s),
                    Group::mul(self, &h, &self.inv[s as usize]),
                ] {
                    if !inside[t as usize] {
                        inside[t as usize] = true;
                        stack.push(t);
                    }
                }
            }
        }
        inside
    }

    /// The subgroup `G[S]` generated by the letters flagged in `letters`.
    pub fn letter_subgroup(&self, letters: &[bool]) -> Vec<bool> {
        let mut inside = vec![false; self.order()];
        inside[0] = true;
        let mut stack = vec![0u32];
        while let Some(h) = stack.pop() {
            for x in all_letters(self.rank) {
                if !letters[x.index()] {
                    continue;
                }
                let t = self.step(h, x);
                if !inside[t as usize] {
                    inside[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        inside
    }
}

impl Group for EnumGroup {
    type Elem = u32;

    fn rank(&self) -> usize {
        self.rank
    }

    fn identity(&self) -> u32 {
        0
    }

    fn push(&self, g: &u32, x: Letter) -> u32 {
        self.step(*g, x)
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        match &self.table {
            Some(t) => t[*a as usize * self.order() + *b as usize],
            None => self.follow(*a, &self.words[*b as usize]),
        }
    }

    fn inv(&self, a: &u32) -> u32 {
        self.inv[*a as usize]
    }
}

/// Generators of a permutation group, used for closure.
pub(crate) struct PermGens {
    rank: usize,
    degree: usize,
    letters: Vec<Vec<u32>>,
}

impl PermGens {
    pub(crate) fn new(rank: usize, degree: usize, gens: &[Vec<u32>]) -> Result<PermGens> {
        if gens.len() != rank {
            return Err(Error::invalid("one permutation per letter required"));
        }
        let mut letters = Vec::with_capacity(2 * rank);
        for p in gens {
            let mut inv = vec![u32::MAX; degree];
            if p.len() != degree {
                return Err(Error::invalid("permutation has wrong degree"));
            }
            for (i, &j) in p.iter().enumerate() {
                if j as usize >= degree || inv[j as usize] != u32::MAX {
                    return Err(Error::invalid("not a permutation"));
                }
                inv[j as usize] = i as u32;
            }
            letters.push(p.clone());
            letters.push(inv);
        }
        Ok(PermGens {
            rank,
            degree,
            letters,
        })
    }
}

impl Group for PermGens {
    type Elem = Box<[u32]>;

    fn rank(&self) -> usize {
        self.rank
    }

    fn identity(&self) -> Box<[u32]> {
        (0..self.degree as u32).collect()
    }

    fn push(&self, g: &Box<[u32]>, x: Letter) -> Box<[u32]> {
        let p = &self.letters[x.code()];
        g.iter().map(|&v| p[v as usize]).collect()
    }

    fn mul(&self, a: &Box<[u32]>, b: &Box<[u32]>) -> Box<[u32]> {
        a.iter().map(|&v| b[v as usize]).collect()
    }

    fn inv(&self, a: &Box<[u32]>) -> Box<[u32]> {
        let mut out = vec![0u32; a.len()];
        for (i, &j) in a.iter().enumerate() {
            out[j as usize] = i as u32;
        }
        out.into()
    }
}

/// Parses cycle notation such as `(1 2)(3 4)` on points `1..=degree`.
pub fn parse_cycles(s: &str, degree: usize) -> Result<Vec<u32>> {
    let mut perm: Vec<u32> = (0..degree as u32).collect();
    let mut seen = vec![false; degree];
    let s = s.trim();
    if s.is_empty() || s == "()" || s == "id" {
        return Ok(perm);
    }
    for cyc in s.split(')') {
        let cyc = cyc.trim();
        if cyc.is_empty() {
            continue;
        }
        let body = cyc
            .strip_prefix('(')
            .ok_or_else(|| Error::invalid(format!("bad cycle {cyc:?}")))?;
        let pts: Vec<usize> = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::invalid(format!("bad point {t:?}")))
            })
            .collect::<Result<_>>()?;
        for &p in &pts {
            if p == 0 || p > degree || seen[p - 1] {
                return Err(Error::invalid(format!("bad or repeated point {p}")));
            }
            seen[p - 1] = true;
        }
        for i in 0..pts.len() {
            perm[pts[i] - 1] = (pts[(i + 1) % pts.len()] - 1) as u32;
        }
    }
    Ok(perm)
}
