//! Group handles with word evaluation: enumerable groups, lazy `Ab_p`
//! towers, the free group, Margolis–Meakin expansions, and the group
//! constructions built from them.

mod constructions;
mod enumerable;
mod mm;
mod tower;

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

pub use constructions::{
    amalgamation_chain, avoidance_group, avoidance_violation, chain_components_ok,
    detect_coset_cycles, ChainReport, ConfigSpec, CosetCycle, CosetCycleReport,
};
pub use enumerable::{parse_cycles, EnumGroup};
pub use mm::{MMElem, MMExpansion};
pub use tower::{AbTower, TElem};

use crate::error::{Error, Result};
use crate::words::{Letter, Word};

/// An `A`-generated group with exact element equality.
pub trait Group: Send + Sync {
    type Elem: Clone + Eq + Hash + Debug + Send + Sync;

    fn rank(&self) -> usize;
    fn identity(&self) -> Self::Elem;
    /// Right multiplication by a letter.
    fn push(&self, g: &Self::Elem, x: Letter) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn eval_from(&self, g: &Self::Elem, w: &Word) -> Self::Elem {
        w.letters().iter().fold(g.clone(), |e, &x| self.push(&e, x))
    }

    fn eval(&self, w: &Word) -> Self::Elem {
        self.eval_from(&self.identity(), w)
    }

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }
}

/// Anything words can be evaluated in: groups and finite inverse monoids.
pub trait Evaluator: Sync {
    type Value: Clone + Eq + Hash + Debug + Send + Sync;

    fn unit(&self) -> Self::Value;
    fn step(&self, v: &Self::Value, x: Letter) -> Self::Value;

    fn value(&self, w: &Word) -> Self::Value {
        w.letters()
            .iter()
            .fold(self.unit(), |v, &x| self.step(&v, x))
    }
}

macro_rules! group_evaluator {
    ($($t:ty),*) => {$(
        impl Evaluator for $t {
            type Value = <$t as Group>::Elem;
            fn unit(&self) -> Self::Value {
                self.identity()
            }
            fn step(&self, v: &Self::Value, x: Letter) -> Self::Value {
                self.push(v, x)
            }
        }
    )*};
}

group_evaluator!(EnumGroup, AbTower, GroupHandle);

impl Evaluator for MMExpansion {
    type Value = MMElem;

    fn unit(&self) -> MMElem {
        MMExpansion::unit(self)
    }

    fn step(&self, v: &MMElem, x: Letter) -> MMElem {
        self.push(v, x)
    }
}

/// Uniform handle over the three kinds of groups.
#[derive(Clone)]
pub enum GroupHandle {
    Enum(Arc<EnumGroup>),
    Tower(AbTower),
    Free { rank: usize },
}

/// An element of some [`GroupHandle`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GElem {
    Enum(u32),
    Tower(u32),
    Free(Word),
}

impl GroupHandle {
    pub fn enumerable(g: EnumGroup) -> GroupHandle {
        GroupHandle::Enum(Arc::new(g))
    }

    pub fn free(rank: usize) -> GroupHandle {
        GroupHandle::Free { rank }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GroupHandle::Enum(_) => "enumerable",
            GroupHandle::Tower(_) => "ab-tower",
            GroupHandle::Free { .. } => "free",
        }
    }

    pub fn as_enum(&self) -> Option<&Arc<EnumGroup>> {
        match self {
            GroupHandle::Enum(g) => Some(g),
            _ => None,
        }
    }

    pub fn as_tower(&self) -> Option<&AbTower> {
        match self {
            GroupHandle::Tower(t) => Some(t),
            _ => None,
        }
    }

    pub fn equal(&self, a: &GElem, b: &GElem) -> bool {
        a == b
    }
}

impl Group for GroupHandle {
    type Elem = GElem;

    fn rank(&self) -> usize {
        match self {
            GroupHandle::Enum(g) => g.rank(),
            GroupHandle::Tower(t) => t.rank(),
            GroupHandle::Free { rank } => *rank,
        }
    }

    fn identity(&self) -> GElem {
        match self {
            GroupHandle::Enum(_) => GElem::Enum(0),
            GroupHandle::Tower(t) => GElem::Tower(t.identity()),
            GroupHandle::Free { .. } => GElem::Free(Word::empty()),
        }
    }

    fn push(&self, g: &GElem, x: Letter) -> GElem {
        match (self, g) {
            (GroupHandle::Enum(h), GElem::Enum(e)) => GElem::Enum(h.step(*e, x)),
            (GroupHandle::Tower(t), GElem::Tower(e)) => GElem::Tower(t.push(e, x)),
            (GroupHandle::Free { .. }, GElem::Free(w)) => {
                let mut v = w.0.clone();
                crate::words::push_reduced(&mut v, x);
                GElem::Free(Word(v))
            }
            _ => panic!("element does not belong to this group handle"),
        }
    }

    fn mul(&self, a: &GElem, b: &GElem) -> GElem {
        match (self, a, b) {
            (GroupHandle::Enum(h), GElem::Enum(x), GElem::Enum(y)) => GElem::Enum(h.mul(x, y)),
            (GroupHandle::Tower(t), GElem::Tower(x), GElem::Tower(y)) => GElem::Tower(t.mul(x, y)),
            (GroupHandle::Free { .. }, GElem::Free(x), GElem::Free(y)) => {
                GElem::Free(x.concat(y).reduce())
            }
            _ => panic!("element does not belong to this group handle"),
        }
    }

    fn inv(&self, a: &GElem) -> GElem {
        match (self, a) {
            (GroupHandle::Enum(h), GElem::Enum(x)) => GElem::Enum(h.inv(x)),
            (GroupHandle::Tower(t), GElem::Tower(x)) => GElem::Tower(t.inv(x)),
            (GroupHandle::Free { .. }, GElem::Free(x)) => GElem::Free(x.invert()),
            _ => panic!("element does not belong to this group handle"),
        }
    }
}

/// `^{Ab_p}G` as a lazy tower handle.
pub fn ab_expansion(g: &GroupHandle, p: u32) -> Result<GroupHandle> {
    match g {
        GroupHandle::Enum(e) => Ok(GroupHandle::Tower(AbTower::new(e.clone()).expand(p)?)),
        GroupHandle::Tower(t) => Ok(GroupHandle::Tower(t.expand(p)?)),
        GroupHandle::Free { .. } => Err(Error::Unsupported(
            "Ab_p expansion of the free group is not finite".into(),
        )),
    }
}

/// Number of expansions applied by [`suitable_group`].
pub fn suitable_depth(n: usize, k: usize) -> usize {
    n.saturating_sub(1) * k + 1
}

/// `(n−1)k + 1` iterated `Ab_p` expansions of `base`.
pub fn suitable_group(base: &GroupHandle, p: u32, n: usize, k: usize) -> Result<GroupHandle> {
    suitable_group_with(base, &vec![p; suitable_depth(n, k)])
}

/// Iterated expansions with one exponent per iteration.
pub fn suitable_group_with(base: &GroupHandle, exponents: &[u32]) -> Result<GroupHandle> {
    exponents
        .iter()
        .try_fold(base.clone(), |g, &p| ab_expansion(&g, p))
}

/// Closure of the generators of any handle into an enumerable group.
pub fn materialize(g: &GroupHandle, max_size: usize) -> Result<EnumGroup> {
    Ok(EnumGroup::from_group(g, max_size)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;

    fn z2(rank: usize) -> GroupHandle {
        let mut gens = vec![vec![1, 0]];
        gens.extend(std::iter::repeat_n(vec![0, 1], rank - 1));
        GroupHandle::enumerable(EnumGroup::from_permutations(rank, 2, &gens, 10).unwrap())
    }

    #[test]
    fn free_handle() {
        let f = GroupHandle::free(2);
        let w = Alphabet::standard(2).parse_word("aa'").unwrap();
        assert_eq!(f.eval(&w), GElem::Free(Word::empty()));
        assert!(ab_expansion(&f, 2).is_err());
    }

    #[test]
    fn materialized_sizes() {
        let t1 = GroupHandle::enumerable(EnumGroup::trivial(1));
        assert_eq!(
            materialize(&ab_expansion(&t1, 2).unwrap(), 100)
                .unwrap()
                .order(),
            2
        );
        let t2 = GroupHandle::enumerable(EnumGroup::trivial(2));
        assert_eq!(
            materialize(&ab_expansion(&t2, 2).unwrap(), 100)
                .unwrap()
                .order(),
            4
        );
        // Cayley graph of Z₂ over {a} has one independent cycle: 2¹ · 2
        let g = materialize(&ab_expansion(&z2(1), 2).unwrap(), 100).unwrap();
        assert_eq!(g.order(), 4);
        let err = materialize(&ab_expansion(&z2(2), 2).unwrap(), 10).unwrap_err();
        assert!(matches!(err, Error::Budget { reached: 11, .. }));
    }

    #[test]
    fn depth_formula() {
        assert_eq!(suitable_depth(1, 5), 1);
        assert_eq!(suitable_depth(4, 0), 1);
        assert_eq!(suitable_depth(2, 1), 2);
        assert_eq!(suitable_depth(3, 2), 5);
        let g = suitable_group(&z2(1), 2, 3, 2).unwrap();
        assert_eq!(g.as_tower().unwrap().depth(), 5);
    }
}
