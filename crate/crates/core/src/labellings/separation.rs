use std::collections::HashMap;
use std::sync::Arc;

use crate::automata::{
    complete, coset_membership, coset_words, product_contains, transition_monoid, CosetSpec,
};
use crate::error::{Error, Result};
use crate::graphs::AGraph;
use crate::groups::{materialize, suitable_group, EnumGroup, Evaluator, GElem, Group, GroupHandle};
use crate::words::Word;

/// How separation was confirmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RzMode {
    /// The whole product set was enumerated in the materialized group.
    Exact { order: usize },
    /// Only products of factors up to a reduced length were compared.
    Bounded,
}

#[derive(Clone, Debug)]
pub struct RzReport {
    pub mode: RzMode,
    pub verify_len: usize,
    pub monoid_order: usize,
    pub base_order: usize,
    pub depth: usize,
    /// Products `h₁⋯h_n` compared in the bounded check.
    pub products_checked: usize,
    /// Bounded products with the same value as `g`.
    pub violations: usize,
    /// The exact verdict, when available.
    pub exact_separated: Option<bool>,
}

impl RzReport {
    pub fn separated(&self) -> bool {
        self.violations == 0 && self.exact_separated != Some(false)
    }
}

fn disjoint_union(parts: &[AGraph], rank: usize) -> AGraph {
    let total = parts.iter().map(|g| g.num_vertices()).sum();
    let mut out = AGraph::new(rank, total);
    let mut off = 0u32;
    for g in parts {
        for (v, a, w) in g.positive_edges() {
            out.set_edge(v + off, a, w + off)
                .expect("disjoint parts stay folded");
        }
        off += g.num_vertices() as u32;
    }
    out
}

/// Searches a factorization `g = h₁⋯h_n` with factors of reduced length at
/// most `max_len`, for the precondition report.
fn factorization(rank: usize, cosets: &[CosetSpec], g: &Word, max_len: usize) -> Option<Vec<Word>> {
    let graphs: Vec<AGraph> = cosets.iter().map(|c| c.graph(rank)).collect();
    let lists: Vec<Vec<Word>> = graphs[..graphs.len() - 1]
        .iter()
        .map(|s| coset_words(s, max_len))
        .collect();
    let last = graphs.last().unwrap();
    let mut pick = vec![0usize; lists.len()];
    if lists.iter().any(|l| l.is_empty()) {
        return None;
    }
    loop {
        let prefix = Word::concat_all(pick.iter().zip(&lists).map(|(&i, l)| &l[i]));
        let rest = prefix.invert().concat(g).reduce();
        if coset_membership(last, &rest) {
            let mut out: Vec<Word> = pick
                .iter()
                .zip(&lists)
                .map(|(&i, l)| l[i].clone())
                .collect();
            out.push(rest);
            return Some(out);
        }
        let mut t = 0;
        while t < pick.len() {
            pick[t] += 1;
            if pick[t] < lists[t].len() {
                break;
            }
            pick[t] = 0;
            t += 1;
        }
        if t == pick.len() {
            return None;
        }
    }
}

/// Builds a finite quotient separating `g` from `H₁g₁⋯H_ng_n`.
///
/// `S` is the disjoint union of the coset graphs, `G₀` the transition group
/// of its completion, and the result `n` iterated `Ab_p` expansions of `G₀`.
/// Separation is checked on all factor products up to `verify_len`, and
/// exactly when the result materializes within `max_order` elements; the
/// exact case returns the materialized group.
pub fn rz_separation(
    rank: usize,
    cosets: &[CosetSpec],
    g: &Word,
    p: u32,
    verify_len: usize,
    max_order: usize,
    budget: usize,
) -> Result<(GroupHandle, RzReport)> {
    if cosets.is_empty() {
        return Err(Error::invalid("at least one coset is required"));
    }
    if product_contains(rank, cosets, g) {
        let msg = match factorization(rank, cosets, g, verify_len.max(g.len()) + 4) {
            Some(f) => {
                let parts: Vec<String> = f.iter().map(|w| w.to_string()).collect();
                format!("{g} lies in the product: {g} = {}", parts.join(" · "))
            }
            None => format!("{g} lies in the product"),
        };
        return Err(Error::Precondition(msg));
    }
    let graphs: Vec<AGraph> = cosets.iter().map(|c| c.graph(rank)).collect();
    let s = disjoint_union(&graphs, rank);
    let monoid_order = transition_monoid(&s, budget)?.order();
    let (_, g0) = complete(&s, budget)?;
    let base_order = g0.order();
    let n = cosets.len();
    let tower = suitable_group(&GroupHandle::enumerable(g0), p, n, 1)?;
    let depth = tower.as_tower().map(|t| t.depth()).unwrap_or(0);
    let materialized = match materialize(&tower, max_order) {
        Ok(e) => Some(Arc::new(e)),
        Err(Error::Budget { .. }) => None,
        Err(e) => return Err(e),
    };
    let handle = match &materialized {
        Some(e) => GroupHandle::Enum(e.clone()),
        None => tower,
    };
    let factors: Vec<Vec<Word>> = graphs.iter().map(|s| coset_words(s, verify_len)).collect();
    let (products_checked, violations) = bounded_check(&handle, &factors, g, budget)?;
    let exact_separated = materialized.as_ref().map(|e| !exact_contains(e, cosets, g));
    let mode = match &materialized {
        Some(e) => RzMode::Exact { order: e.order() },
        None => RzMode::Bounded,
    };
    Ok((
        handle,
        RzReport {
            mode,
            verify_len,
            monoid_order,
            base_order,
            depth,
            products_checked,
            violations,
            exact_separated,
        },
    ))
}

fn bounded_check(
    h: &GroupHandle,
    factors: &[Vec<Word>],
    g: &Word,
    budget: usize,
) -> Result<(usize, usize)> {
    let target = h.value(g);
    let mut layer: HashMap<GElem, usize> = HashMap::from([(h.identity(), 1)]);
    for l in factors {
        let vals: Vec<GElem> = l.iter().map(|w| h.value(w)).collect();
        let mut next: HashMap<GElem, usize> = HashMap::new();
        for (a, &k) in &layer {
            for b in &vals {
                *next.entry(h.mul(a, b)).or_default() += k;
            }
        }
        if next.len() > budget {
            return Err(Error::Budget {
                what: "bounded separation products",
                limit: budget,
                reached: next.len(),
            });
        }
        layer = next;
    }
    let checked = factors.iter().map(|l| l.len()).product();
    Ok((checked, layer.get(&target).copied().unwrap_or(0)))
}

/// Whether `[g]` lies in the image of the product set.
fn exact_contains(e: &EnumGroup, cosets: &[CosetSpec], g: &Word) -> bool {
    let n = e.order();
    let mut set = vec![false; n];
    set[0] = true;
    for c in cosets {
        let gens: Vec<u32> = c.gens.iter().map(|w| e.follow(0, w)).collect();
        let sub = e.subgroup_closure(&gens);
        let r = e.follow(0, &c.rep);
        let coset: Vec<u32> = (0..n as u32)
            .filter(|&x| sub[x as usize])
            .map(|x| Group::mul(e, &x, &r))
            .collect();
        let mut next = vec![false; n];
        for a in (0..n as u32).filter(|&a| set[a as usize]) {
            for &b in &coset {
                next[Group::mul(e, &a, &b) as usize] = true;
            }
        }
        set = next;
    }
    set[e.follow(0, g) as usize]
}
