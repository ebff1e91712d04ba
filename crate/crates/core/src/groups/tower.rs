use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::{EnumGroup, Group};
use crate::error::{Error, Result};
use crate::words::Letter;

/// An element of `(free Ab_p on G × A) ⋊ G` over the previous level `G`.
///
/// `vec` holds `(inner, letter index, residue)` entries sorted by key with
/// nonzero residues; `inner` is the projection to the previous level. All
/// element references are ids of the previous level.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TElem {
    pub vec: Vec<(u32, u16, u32)>,
    pub inner: u32,
}

#[derive(Default)]
struct Interner {
    map: HashMap<Arc<TElem>, u32>,
    elems: Vec<Arc<TElem>>,
}

/// One expansion level with its interning store.
pub struct AbLevel {
    p: u32,
    store: RwLock<Interner>,
}

impl AbLevel {
    fn new(p: u32) -> AbLevel {
        AbLevel {
            p,
            store: RwLock::new(Interner::default()),
        }
    }

    fn get(&self, id: u32) -> Arc<TElem> {
        self.store.read().unwrap().elems[id as usize].clone()
    }

    fn intern(&self, e: TElem) -> u32 {
        if let Some(&id) = self.store.read().unwrap().map.get(&e) {
            return id;
        }
        let mut st = self.store.write().unwrap();
        if let Some(&id) = st.map.get(&e) {
            return id;
        }
        let id = st.elems.len() as u32;
        let e = Arc::new(e);
        st.elems.push(e.clone());
        st.map.insert(e, id);
        id
    }

    fn len(&self) -> usize {
        self.store.read().unwrap().elems.len()
    }
}

/// A lazy tower `Ab_{p_t} ⋯ Ab_{p_1}(G₀)` over an enumerable base.
///
/// Level 0 is the base group; an element at level `ℓ > 0` is an interned id.
/// Ids depend on evaluation order and are never printed.
#[derive(Clone)]
pub struct AbTower {
    base: Arc<EnumGroup>,
    levels: Vec<Arc<AbLevel>>,
}

impl AbTower {
    pub fn new(base: Arc<EnumGroup>) -> AbTower {
        AbTower {
            base,
            levels: Vec::new(),
        }
    }

    /// One more expansion on top; lower levels are shared.
    pub fn expand(&self, p: u32) -> Result<AbTower> {
        if p < 2 {
            return Err(Error::invalid("expansion exponent must be at least 2"));
        }
        let mut levels = self.levels.clone();
        levels.push(Arc::new(AbLevel::new(p)));
        Ok(AbTower {
            base: self.base.clone(),
            levels,
        })
    }

    /// The tower truncated to its lowest `depth` expansions.
    pub fn truncate(&self, depth: usize) -> AbTower {
        AbTower {
            base: self.base.clone(),
            levels: self.levels[..depth].to_vec(),
        }
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn base(&self) -> &Arc<EnumGroup> {
        &self.base
    }

    pub fn exponents(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.p).collect()
    }

    /// Number of distinct elements interned at each level so far.
    pub fn interned_counts(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }

    pub fn identity_at(&self, l: usize) -> u32 {
        if l == 0 {
            return 0;
        }
        self.levels[l - 1].intern(TElem {
            vec: Vec::new(),
            inner: self.identity_at(l - 1),
        })
    }

    pub fn push_at(&self, l: usize, g: u32, x: Letter) -> u32 {
        if l == 0 {
            return self.base.step(g, x);
        }
        let lev = &self.levels[l - 1];
        let e = lev.get(g);
        let a = x.index() as u16;
        let (key, delta, inner) = if x.is_inverse() {
            let h = self.push_at(l - 1, e.inner, x);
            (h, lev.p - 1, h)
        } else {
            (e.inner, 1, self.push_at(l - 1, e.inner, x))
        };
        let mut vec = e.vec.clone();
        match vec.binary_search_by(|t| (t.0, t.1).cmp(&(key, a))) {
            Ok(i) => {
                let r = (vec[i].2 + delta) % lev.p;
                if r == 0 {
                    vec.remove(i);
                } else {
                    vec[i].2 = r;
                }
            }
            Err(i) => vec.insert(i, (key, a, delta)),
        }
        lev.intern(TElem { vec, inner })
    }

    fn normalize(&self, l: usize, mut vec: Vec<(u32, u16, u32)>) -> Vec<(u32, u16, u32)> {
        let p = self.levels[l - 1].p;
        vec.sort_unstable_by_key(|t| (t.0, t.1));
        let mut out: Vec<(u32, u16, u32)> = Vec::with_capacity(vec.len());
        for (k, a, r) in vec {
            match out.last_mut() {
                Some(last) if last.0 == k && last.1 == a => last.2 = (last.2 + r) % p,
                _ => out.push((k, a, r % p)),
            }
        }
        out.retain(|t| t.2 != 0);
        out
    }

    /// `(x, g)(y, h) = (x + ᵍy, gh)`.
    pub fn mul_at(&self, l: usize, a: u32, b: u32) -> u32 {
        if l == 0 {
            return Group::mul(&*self.base, &a, &b);
        }
        let (x, y) = (self.levels[l - 1].get(a), self.levels[l - 1].get(b));
        if y.vec.is_empty() && y.inner == self.identity_at(l - 1) {
            return a;
        }
        let mut vec = x.vec.clone();
        for &(k, c, r) in &y.vec {
            vec.push((self.mul_at(l - 1, x.inner, k), c, r));
        }
        let vec = self.normalize(l, vec);
        let inner = self.mul_at(l - 1, x.inner, y.inner);
        self.levels[l - 1].intern(TElem { vec, inner })
    }

    /// `(x, g)⁻¹ = (−ᵍ⁻¹x, g⁻¹)`.
    pub fn inv_at(&self, l: usize, a: u32) -> u32 {
        if l == 0 {
            return Group::inv(&*self.base, &a);
        }
        let p = self.levels[l - 1].p;
        let x = self.levels[l - 1].get(a);
        let gi = self.inv_at(l - 1, x.inner);
        let vec = x
            .vec
            .iter()
            .map(|&(k, c, r)| (self.mul_at(l - 1, gi, k), c, p - r))
            .collect();
        let vec = self.normalize(l, vec);
        self.levels[l - 1].intern(TElem { vec, inner: gi })
    }

    /// `ᵍy`: left translation of a kernel vector by a previous-level element.
    pub fn shift_at(&self, l: usize, g: u32, vec: &[(u32, u16, u32)]) -> Vec<(u32, u16, u32)> {
        let v = vec
            .iter()
            .map(|&(k, c, r)| (self.mul_at(l - 1, g, k), c, r))
            .collect();
        self.normalize(l, v)
    }

    /// Vector and projection of a top-level element.
    pub fn components(&self, a: u32) -> TElem {
        assert!(self.depth() > 0);
        (*self.levels[self.depth() - 1].get(a)).clone()
    }

    pub fn components_at(&self, l: usize, a: u32) -> TElem {
        (*self.levels[l - 1].get(a)).clone()
    }

    /// Interns an arbitrary semidirect-product element at level `l`.
    pub fn from_components_at(&self, l: usize, vec: Vec<(u32, u16, u32)>, inner: u32) -> u32 {
        let vec = self.normalize(l, vec);
        self.levels[l - 1].intern(TElem { vec, inner })
    }

    /// Projects a level-`l` element to level `to ≤ l`.
    pub fn project(&self, l: usize, mut a: u32, to: usize) -> u32 {
        for k in (to + 1..=l).rev() {
            a = self.levels[k - 1].get(a).inner;
        }
        a
    }

    /// For a top-level `a = (y, g)` and a kernel vector `x`, returns the
    /// commutator `[a, (x, 1)]` computed by multiplication together with the
    /// closed form `(ᵍx − x, 1)`.
    pub fn kernel_commutator(&self, a: u32, x: &[(u32, u16, u32)]) -> (u32, u32) {
        let l = self.depth();
        let p = self.levels[l - 1].p;
        let one = self.identity_at(l - 1);
        let b = self.from_components_at(l, x.to_vec(), one);
        let prod = self.mul_at(l, a, b);
        let prod = self.mul_at(l, prod, self.inv_at(l, a));
        let computed = self.mul_at(l, prod, self.inv_at(l, b));
        let g = self.components(a).inner;
        let mut v = self.shift_at(l, g, x);
        v.extend(x.iter().map(|&(k, c, r)| (k, c, p - r % p)));
        (computed, self.from_components_at(l, v, one))
    }

    /// Order of a top-level element, by iteration.
    pub fn element_order(&self, a: u32, budget: usize) -> Result<usize> {
        let l = self.depth();
        let one = self.identity_at(l);
        let mut x = a;
        let mut k = 1;
        while x != one {
            x = self.mul_at(l, x, a);
            k += 1;
            if k > budget {
                return Err(Error::Budget {
                    what: "element order",
                    limit: budget,
                    reached: k,
                });
            }
        }
        Ok(k)
    }
}

impl Group for AbTower {
    type Elem = u32;

    fn rank(&self) -> usize {
        self.base.rank()
    }

    fn identity(&self) -> u32 {
        self.identity_at(self.depth())
    }

    fn push(&self, g: &u32, x: Letter) -> u32 {
        self.push_at(self.depth(), *g, x)
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.mul_at(self.depth(), *a, *b)
    }

    fn inv(&self, a: &u32) -> u32 {
        self.inv_at(self.depth(), *a)
    }
}
