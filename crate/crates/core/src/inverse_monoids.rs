//! Finite `A`-generated inverse monoids of partial bijections.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::automata::{subgroup_basis, CosetSpec};
use crate::error::{Error, Result};
use crate::graphs::{AGraph, NONE};
use crate::groups::{EnumGroup, Evaluator, Group};
use crate::words::{all_letters, Letter, Word};

/// An element id; `0` is the identity.
pub type MElem = u32;

/// Partial bijections on `0..carrier`, acting on the right, closed under
/// composition and inversion. Elements are numbered in BFS order from the
/// identity, so `word(x)` is a shortlex-least word with value `x`.
#[derive(Clone, Debug)]
pub struct InverseMonoid {
    carrier: usize,
    rank: usize,
    elems: Vec<Box<[u32]>>,
    index: HashMap<Box<[u32]>, u32>,
    rtab: Vec<u32>,
    inv: Vec<u32>,
    words: Vec<Word>,
}

fn compose(x: &[u32], y: &[u32]) -> Box<[u32]> {
    x.iter()
        .map(|&v| if v == NONE { NONE } else { y[v as usize] })
        .collect()
}

fn invert_map(x: &[u32]) -> Box<[u32]> {
    let mut out = vec![NONE; x.len()];
    for (i, &j) in x.iter().enumerate() {
        if j != NONE {
            out[j as usize] = i as u32;
        }
    }
    out.into()
}

impl InverseMonoid {
    /// Closure of one partial bijection per positive letter.
    pub fn generate(
        carrier: usize,
        rank: usize,
        gens: &[Vec<u32>],
        budget: usize,
    ) -> Result<InverseMonoid> {
        if gens.len() != rank {
            return Err(Error::invalid("one map per letter required"));
        }
        let mut letter_maps: Vec<Box<[u32]>> = Vec::with_capacity(2 * rank);
        for g in gens {
            if g.len() != carrier {
                return Err(Error::invalid("map has wrong carrier size"));
            }
            let mut hit = vec![false; carrier];
            for &t in g {
                if t != NONE {
                    if t as usize >= carrier || hit[t as usize] {
                        return Err(Error::invalid("map is not a partial bijection"));
                    }
                    hit[t as usize] = true;
                }
            }
            letter_maps.push(g.clone().into());
            letter_maps.push(invert_map(g));
        }
        let id: Box<[u32]> = (0..carrier as u32).collect();
        let mut elems = vec![id.clone()];
        let mut index = HashMap::from([(id, 0u32)]);
        let mut words = vec![Word::empty()];
        let mut rtab = Vec::new();
        let mut head = 0;
        while head < elems.len() {
            for (c, lm) in letter_maps.iter().enumerate() {
                let y = compose(&elems[head], lm);
                let i = match index.get(&y) {
                    Some(&i) => i,
                    None => {
                        if elems.len() >= budget {
                            return Err(Error::Budget {
                                what: "monoid elements",
                                limit: budget,
                                reached: elems.len() + 1,
                            });
                        }
                        let i = elems.len() as u32;
                        index.insert(y.clone(), i);
                        elems.push(y);
                        let mut w = words[head].clone();
                        w.0.push(Letter::from_code(c));
                        words.push(w);
                        i
                    }
                };
                rtab.push(i);
            }
            head += 1;
        }
        let inv = elems.iter().map(|x| index[&invert_map(x)]).collect();
        Ok(InverseMonoid {
            carrier,
            rank,
            elems,
            index,
            rtab,
            inv,
            words,
        })
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn elements(&self) -> impl Iterator<Item = MElem> {
        0..self.order() as u32
    }

    pub fn identity(&self) -> MElem {
        0
    }

    pub fn map(&self, x: MElem) -> &[u32] {
        &self.elems[x as usize]
    }

    pub fn word(&self, x: MElem) -> &Word {
        &self.words[x as usize]
    }

    pub fn find(&self, map: &[u32]) -> Option<MElem> {
        self.index.get(map).copied()
    }

    #[inline]
    pub fn push(&self, x: MElem, a: Letter) -> MElem {
        self.rtab[x as usize * 2 * self.rank + a.code()]
    }

    pub fn evaluate(&self, w: &Word) -> MElem {
        w.letters().iter().fold(0, |x, &a| self.push(x, a))
    }

    pub fn mul(&self, x: MElem, y: MElem) -> MElem {
        self.index[&compose(self.map(x), self.map(y))]
    }

    pub fn inv(&self, x: MElem) -> MElem {
        self.inv[x as usize]
    }

    /// `x ≤ y` iff `x` is a restriction of `y`.
    pub fn leq(&self, x: MElem, y: MElem) -> bool {
        self.map(x)
            .iter()
            .zip(self.map(y))
            .all(|(&a, &b)| a == NONE || a == b)
    }

    pub fn is_idempotent(&self, x: MElem) -> bool {
        self.map(x)
            .iter()
            .enumerate()
            .all(|(i, &j)| j == NONE || j == i as u32)
    }

    pub fn idempotents(&self) -> Vec<MElem> {
        self.elements().filter(|&x| self.is_idempotent(x)).collect()
    }

    /// `xx⁻¹`, the identity on the domain of `x`.
    pub fn domain_idempotent(&self, x: MElem) -> MElem {
        self.mul(x, self.inv(x))
    }

    /// Elements `y` with `yy⁻¹ = xx⁻¹`, in id order.
    pub fn r_class(&self, x: MElem) -> Vec<MElem> {
        let dom = |y: MElem| self.map(y).iter().map(|&t| t != NONE).collect::<Vec<_>>();
        let d = dom(x);
        self.elements().filter(|&y| dom(y) == d).collect()
    }

    /// The Schützenberger graph of `x`, with `ι = xx⁻¹` and `τ = x`, and the
    /// element represented by each vertex.
    pub fn schutzenberger_graph(&self, x: MElem) -> (AGraph, Vec<MElem>) {
        let class = self.r_class(x);
        let pos: HashMap<MElem, u32> = class
            .iter()
            .enumerate()
            .map(|(i, &y)| (y, i as u32))
            .collect();
        let mut g = AGraph::new(self.rank, class.len());
        for (i, &y) in class.iter().enumerate() {
            for k in 0..self.rank {
                let a = Letter::pos(k);
                if let Some(&j) = pos.get(&self.push(y, a)) {
                    g.set_edge(i as u32, a, j)
                        .expect("Schützenberger graphs are folded");
                }
            }
        }
        g.iota = Some(pos[&self.domain_idempotent(x)]);
        g.tau = Some(pos[&x]);
        (g, class)
    }

    /// `φ(x) = Hg` from the Schützenberger graph of `x`.
    pub fn canonical_coset(&self, x: MElem) -> CosetSpec {
        let (g, _) = self.schutzenberger_graph(x);
        let rep = g
            .path_word(g.iota.unwrap(), g.tau.unwrap())
            .expect("the R-class is strongly connected");
        CosetSpec::new(subgroup_basis(&g), rep.reduce())
    }

    /// Closure of `(1, 1)` in `M × G` under the letters.
    fn pair_closure(
        &self,
        g: &EnumGroup,
        budget: usize,
    ) -> Result<Vec<((MElem, u32), Option<(usize, Letter)>)>> {
        if g.rank() != self.rank {
            return Err(Error::invalid("alphabet sizes differ"));
        }
        let mut seen = HashSet::from([(0u32, 0u32)]);
        let mut out = vec![((0u32, 0u32), None)];
        let mut q = VecDeque::from([0usize]);
        while let Some(i) = q.pop_front() {
            let (m, h) = out[i].0;
            for a in all_letters(self.rank) {
                let next = (self.push(m, a), g.step(h, a));
                if seen.insert(next) {
                    if out.len() >= budget {
                        return Err(Error::Budget {
                            what: "pair closure",
                            limit: budget,
                            reached: out.len() + 1,
                        });
                    }
                    out.push((next, Some((i, a))));
                    q.push_back(out.len() - 1);
                }
            }
        }
        Ok(out)
    }

    /// Whether `[w]_G = 1` forces `[w]_M` idempotent.
    pub fn extends(&self, g: &EnumGroup, budget: usize) -> Result<bool> {
        Ok(self.extends_witness(g, budget)?.is_none())
    }

    /// A word `w` with `[w]_G = 1` but `[w]_M` not idempotent, if any.
    pub fn extends_witness(&self, g: &EnumGroup, budget: usize) -> Result<Option<Word>> {
        let pairs = self.pair_closure(g, budget)?;
        for (i, &((m, h), _)) in pairs.iter().enumerate() {
            if h == 0 && !self.is_idempotent(m) {
                let mut letters = Vec::new();
                let mut cur = i;
                while let Some((p, a)) = pairs[cur].1 {
                    letters.push(a);
                    cur = p;
                }
                letters.reverse();
                return Ok(Some(Word(letters)));
            }
        }
        Ok(None)
    }
}

impl Evaluator for InverseMonoid {
    type Value = MElem;

    fn unit(&self) -> MElem {
        0
    }

    fn step(&self, v: &MElem, x: Letter) -> MElem {
        self.push(*v, x)
    }
}
