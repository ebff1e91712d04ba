use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use super::{EnumGroup, Group};
use crate::error::{Error, Result};
use crate::graphs::SerreGraph;
use crate::words::{all_letters, Letter, Word};

/// An element `(K, g)` of the Margolis–Meakin expansion `M(Q)`.
///
/// `edges` is a bitset over Cayley-edge keys `g·rank + a` of `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MMElem {
    pub edges: Vec<u64>,
    pub point: u32,
}

/// `M(Q)` for an enumerable `Q`.
#[derive(Clone)]
pub struct MMExpansion {
    q: Arc<EnumGroup>,
    blocks: usize,
}

impl MMExpansion {
    pub fn new(q: Arc<EnumGroup>) -> MMExpansion {
        let blocks = (q.order() * q.rank()).div_ceil(64);
        MMExpansion { q, blocks }
    }

    pub fn group(&self) -> &Arc<EnumGroup> {
        &self.q
    }

    pub fn edge_key(&self, g: u32, a: usize) -> usize {
        g as usize * self.q.rank() + a
    }

    fn set(edges: &mut [u64], k: usize) {
        edges[k / 64] |= 1 << (k % 64);
    }

    fn bits(edges: &[u64]) -> impl Iterator<Item = usize> + '_ {
        edges.iter().enumerate().flat_map(|(i, &b)| {
            (0..64)
                .filter(move |j| b >> j & 1 == 1)
                .map(move |j| i * 64 + j)
        })
    }

    pub fn unit(&self) -> MMElem {
        MMElem {
            edges: vec![0; self.blocks],
            point: 0,
        }
    }

    pub fn push(&self, e: &MMElem, x: Letter) -> MMElem {
        let mut out = e.clone();
        let h = self.q.step(e.point, x);
        let key = if x.is_inverse() {
            self.edge_key(h, x.index())
        } else {
            self.edge_key(e.point, x.index())
        };
        Self::set(&mut out.edges, key);
        out.point = h;
        out
    }

    /// `(edge set of π₁(w), [w]_Q)`.
    pub fn eval(&self, w: &Word) -> MMElem {
        w.letters()
            .iter()
            .fold(self.unit(), |e, &x| self.push(&e, x))
    }

    fn shift(&self, g: u32, edges: &[u64], into: &mut [u64]) {
        let r = self.q.rank();
        for k in Self::bits(edges) {
            let (h, a) = ((k / r) as u32, k % r);
            Self::set(into, self.edge_key(Group::mul(&*self.q, &g, &h), a));
        }
    }

    /// `(K, g)(L, h) = (K ∪ ᵍL, gh)`.
    pub fn mul(&self, x: &MMElem, y: &MMElem) -> MMElem {
        let mut edges = x.edges.clone();
        self.shift(x.point, &y.edges, &mut edges);
        MMElem {
            edges,
            point: Group::mul(&*self.q, &x.point, &y.point),
        }
    }

    pub fn inv(&self, x: &MMElem) -> MMElem {
        let gi = Group::inv(&*self.q, &x.point);
        let mut edges = vec![0; self.blocks];
        self.shift(gi, &x.edges, &mut edges);
        MMElem { edges, point: gi }
    }

    /// `(K, g) ≤ (L, h)` iff `K ⊇ L` and `g = h`.
    pub fn leq(&self, x: &MMElem, y: &MMElem) -> bool {
        x.point == y.point && x.edges.iter().zip(&y.edges).all(|(a, b)| a & b == *b)
    }

    pub fn is_idempotent(&self, x: &MMElem) -> bool {
        x.point == 0
    }

    /// Cayley edges `(g, a)` of an element's edge set.
    pub fn edge_list(&self, x: &MMElem) -> Vec<(u32, usize)> {
        let r = self.q.rank();
        Self::bits(&x.edges)
            .map(|k| ((k / r) as u32, k % r))
            .collect()
    }

    /// Validates a pair against the connectivity invariant.
    pub fn element(&self, edges: &[(u32, usize)], point: u32) -> Result<MMElem> {
        let mut e = self.unit();
        for &(g, a) in edges {
            if g as usize >= self.q.order() || a >= self.q.rank() {
                return Err(Error::invalid("edge key out of range"));
            }
            Self::set(&mut e.edges, self.edge_key(g, a));
        }
        e.point = point;
        if !self.is_connected_with(&e) {
            return Err(Error::invalid(
                "edge set must span a connected subgraph containing 1 and the point",
            ));
        }
        Ok(e)
    }

    fn is_connected_with(&self, e: &MMElem) -> bool {
        let n = self.q.order();
        let mut g = SerreGraph::new(n);
        let mut touched = vec![false; n];
        touched[0] = true;
        touched[e.point as usize] = true;
        for (h, a) in self.edge_list(e) {
            let t = self.q.step(h, Letter::pos(a));
            g.add_edge(h, t);
            touched[h as usize] = true;
            touched[t as usize] = true;
        }
        let (comp, _) = g.components();
        (0..n).all(|v| !touched[v] || comp[v] == comp[0])
    }

    /// All elements of the `A`-generated monoid, by BFS closure.
    pub fn enumerate(&self, budget: usize) -> Result<Vec<MMElem>> {
        let mut seen: HashMap<MMElem, ()> = HashMap::new();
        let mut out = vec![self.unit()];
        seen.insert(self.unit(), ());
        let mut q = VecDeque::from([self.unit()]);
        while let Some(e) = q.pop_front() {
            for x in all_letters(self.q.rank()) {
                let f = self.push(&e, x);
                if seen.contains_key(&f) {
                    continue;
                }
                if out.len() >= budget {
                    return Err(Error::Budget {
                        what: "expansion elements",
                        limit: budget,
                        reached: out.len() + 1,
                    });
                }
                seen.insert(f.clone(), ());
                out.push(f.clone());
                q.push_back(f);
            }
        }
        Ok(out)
    }
}
