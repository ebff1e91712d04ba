//! Acceptance run, one PASS/FAIL line per criterion.
//!
//!  1. Subgroup membership against a naive folding oracle and bounded
//!     generator products: 200 subgroups, 50 queries each, < 30 s.
//!  2. Products of cosets against bounded factor enumeration and finite
//!     permutation quotients: 100 instances, < 60 s.
//!  3. Inverse-monoid laws on 50 random A-graphs; the single-edge monoid has
//!     6 elements; Dyck words up to length 8 are idempotent.
//!  4. Schützenberger path criterion and the canonical coset replay on 20
//!     random monoids of at most 50 elements.
//!  5. 500 arborisations: diameter, per-edge order, F-commuting relabelling,
//!     < 120 s.
//!  6. Suitability of the depth-2 expansion for the single-edge monoid on
//!     `C₂`, zero failures, < 10 min.
//!  7. Ten separation instances, bounded checks clean, at least 3 exact.
//!  8. 500 kernel commutators in `Ab₂(Klein)`.
//!  9. The commutator identity for t ∈ {1, 2}, exponents in {2, 3}; each
//!     t = 2 case < 10 s.
//! 10. The Klein counterexample for (2) and (2, 2), < 5 min, and exit code 1
//!     from `ash-verify --strengthened`.
//! 11. The two-coset extension instance and the trivial-group control.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use invexp::automata::{
    complete, coset_membership, coset_words, product_contains, stallings_subgroup,
    transition_monoid, CosetSpec,
};
use invexp::graphs::{AGraph, LabelledGraph, NONE};
use invexp::groups::{materialize, suitable_group, AbTower, EnumGroup, Group, GroupHandle};
use invexp::inverse_monoids::{InverseMonoid, MElem};
use invexp::labellings::{
    arborise, cycle_graph, klein_counterexample, klein_group, labelling_commutes, rz_separation,
    verify_identity_54, verify_suitable, RzMode,
};
use invexp::par::Mode;
use invexp::relational::{coloured_cycle, coset_pair_problem, eppa_check};
use invexp::words::{reduced_words_up_to, words_up_to, Alphabet, Letter, Word};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BUDGET: usize = 1 << 24;

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || {
        format!("{what} took {t:.1?}, limit {limit:?}")
    })
}

fn random_letter(rng: &mut ChaCha8Rng, rank: usize) -> Letter {
    Letter::from_code(rng.gen_range(0..2 * rank))
}

fn random_word(rng: &mut ChaCha8Rng, rank: usize, len: usize) -> Word {
    Word((0..len).map(|_| random_letter(rng, rank)).collect())
}

fn random_reduced(rng: &mut ChaCha8Rng, rank: usize, len: usize) -> Word {
    let mut v: Vec<Letter> = Vec::with_capacity(len);
    while v.len() < len {
        let x = random_letter(rng, rank);
        if v.last() != Some(&x.inverse()) {
            v.push(x);
        }
    }
    Word(v)
}

/// Folding by repeated pairwise merging on a plain edge list.
struct NaiveFold {
    edges: Vec<(u32, usize, u32)>,
}

impl NaiveFold {
    fn bouquet(gens: &[Word]) -> NaiveFold {
        let mut edges = Vec::new();
        let mut next = 1u32;
        for g in gens {
            let g = g.reduce();
            let n = g.len();
            let mut cur = 0u32;
            for (i, &x) in g.letters().iter().enumerate() {
                let to = if i + 1 == n {
                    0
                } else {
                    next += 1;
                    next - 1
                };
                if x.is_inverse() {
                    edges.push((to, x.index(), cur));
                } else {
                    edges.push((cur, x.index(), to));
                }
                cur = to;
            }
        }
        let mut f = NaiveFold { edges };
        f.fold();
        f
    }

    fn fold(&mut self) {
        loop {
            let mut merge = None;
            'scan: for (i, &(s1, a1, t1)) in self.edges.iter().enumerate() {
                for &(s2, a2, t2) in &self.edges[i + 1..] {
                    if a1 == a2 && s1 == s2 && t1 != t2 {
                        merge = Some((t1.min(t2), t1.max(t2)));
                        break 'scan;
                    }
                    if a1 == a2 && t1 == t2 && s1 != s2 {
                        merge = Some((s1.min(s2), s1.max(s2)));
                        break 'scan;
                    }
                }
            }
            let Some((keep, gone)) = merge else { return };
            let r = |v: u32| if v == gone { keep } else { v };
            let mut seen = BTreeSet::new();
            self.edges = self
                .edges
                .iter()
                .map(|&(s, a, t)| (r(s), a, r(t)))
                .filter(|e| seen.insert(*e))
                .collect();
        }
    }

    fn read(&self, w: &Word) -> Option<u32> {
        let mut cur = 0u32;
        for &x in w.letters() {
            cur = if x.is_inverse() {
                self.edges
                    .iter()
                    .find(|&&(_, a, t)| a == x.index() && t == cur)?
                    .0
            } else {
                self.edges
                    .iter()
                    .find(|&&(s, a, _)| a == x.index() && s == cur)?
                    .2
            };
        }
        Some(cur)
    }

    fn contains(&self, w: &Word) -> bool {
        self.read(w) == Some(0)
    }
}

/// Reduced products of at most `k` generators or inverses.
fn bounded_products(gens: &[Word], k: usize) -> HashSet<Word> {
    let mut letters: Vec<Word> = gens.iter().map(|g| g.reduce()).collect();
    letters.extend(gens.iter().map(|g| g.invert().reduce()));
    let mut all = HashSet::from([Word::empty()]);
    let mut layer = vec![Word::empty()];
    for _ in 0..k {
        let mut next = Vec::new();
        for w in &layer {
            for g in &letters {
                let p = w.concat(g).reduce();
                if all.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        layer = next;
    }
    all
}

fn crit1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut cases, mut members, mut by_products) = (0usize, 0usize, 0usize);
    for _ in 0..200 {
        let k = rng.gen_range(1..=3);
        let gens: Vec<Word> = (0..k)
            .map(|_| {
                let l = rng.gen_range(1..=6);
                random_reduced(&mut rng, 2, l)
            })
            .collect();
        let s = stallings_subgroup(2, &gens);
        let naive = NaiveFold::bouquet(&gens);
        let products = bounded_products(&gens, 4);
        let mut short: Vec<&Word> = products.iter().filter(|w| w.len() <= 8).collect();
        short.sort();
        for q in 0..50 {
            let w = if q % 2 == 0 && !short.is_empty() {
                let mut v = (*short.choose(&mut rng).unwrap()).clone();
                v.0.shuffle(&mut rng);
                if rng.gen_bool(0.5) {
                    (*short.choose(&mut rng).unwrap()).clone()
                } else {
                    v
                }
            } else {
                let l = rng.gen_range(0..=8);
                random_word(&mut rng, 2, l)
            };
            let got = coset_membership(&s, &w);
            let found = products.contains(&w.reduce());
            let expect = found || naive.contains(&w.reduce());
            ensure(got == expect, || {
                format!("subgroup {gens:?}, word {w}: got {got}, oracle {expect}")
            })?;
            cases += 1;
            members += got as usize;
            by_products += found as usize;
        }
    }
    within(start, Duration::from_secs(30), "membership")?;
    Ok(format!(
        "{cases} queries agree ({members} members, {by_products} confirmed as products of ≤ 4 generators)"
    ))
}

/// A permutation image of `F(a, b)`, acting on the right.
struct PermQuotient {
    gens: Vec<Vec<u8>>,
}

impl PermQuotient {
    fn random(rng: &mut ChaCha8Rng, degree: usize) -> PermQuotient {
        let gens = (0..2)
            .map(|_| {
                let mut p: Vec<u8> = (0..degree as u8).collect();
                p.shuffle(rng);
                p
            })
            .collect();
        PermQuotient { gens }
    }

    fn compose(x: &[u8], y: &[u8]) -> Vec<u8> {
        x.iter().map(|&i| y[i as usize]).collect()
    }

    fn letter(&self, x: Letter) -> Vec<u8> {
        let p = &self.gens[x.index()];
        if !x.is_inverse() {
            return p.clone();
        }
        let mut q = vec![0u8; p.len()];
        for (i, &j) in p.iter().enumerate() {
            q[j as usize] = i as u8;
        }
        q
    }

    fn image(&self, w: &Word) -> Vec<u8> {
        let id: Vec<u8> = (0..self.gens[0].len() as u8).collect();
        w.letters()
            .iter()
            .fold(id, |acc, &x| Self::compose(&acc, &self.letter(x)))
    }

    fn coset_image(&self, c: &CosetSpec) -> HashSet<Vec<u8>> {
        let gens: Vec<Vec<u8>> = c.gens.iter().map(|g| self.image(g)).collect();
        let id: Vec<u8> = (0..self.gens[0].len() as u8).collect();
        let mut sub = HashSet::from([id.clone()]);
        let mut todo = vec![id];
        while let Some(x) = todo.pop() {
            for g in &gens {
                let y = Self::compose(&x, g);
                if sub.insert(y.clone()) {
                    todo.push(y);
                }
            }
        }
        let r = self.image(&c.rep);
        sub.iter().map(|h| Self::compose(h, &r)).collect()
    }

    fn excludes(&self, cosets: &[CosetSpec], g: &Word) -> bool {
        let mut acc: HashSet<Vec<u8>> = HashSet::from([(0..self.gens[0].len() as u8).collect()]);
        for c in cosets {
            let img = self.coset_image(c);
            acc = acc
                .iter()
                .flat_map(|x| img.iter().map(move |y| Self::compose(x, y)))
                .collect();
        }
        !acc.contains(&self.image(g))
    }
}

fn naive_coset_contains(c: &CosetSpec, w: &Word) -> bool {
    NaiveFold::bouquet(&c.gens).contains(&w.concat(&c.rep.invert()).reduce())
}

fn crit2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let short = reduced_words_up_to(2, 4);
    let (mut positive, mut negative, mut open) = (0, 0, 0);
    for inst in 0..100 {
        let n = rng.gen_range(1..=3);
        let cosets: Vec<CosetSpec> = (0..n)
            .map(|_| {
                let k = rng.gen_range(1..=2);
                let gens = (0..k)
                    .map(|_| {
                        let l = rng.gen_range(1..=4);
                        random_reduced(&mut rng, 2, l)
                    })
                    .collect();
                let l = rng.gen_range(0..=3);
                CosetSpec::new(gens, random_reduced(&mut rng, 2, l))
            })
            .collect();
        let lists: Vec<Vec<Word>> = cosets
            .iter()
            .map(|c| {
                short
                    .iter()
                    .filter(|w| naive_coset_contains(c, w))
                    .cloned()
                    .collect()
            })
            .collect();
        let target = if inst % 2 == 0 && lists.iter().all(|l| !l.is_empty()) {
            Word::concat_all(lists.iter().map(|l| l.choose(&mut rng).unwrap())).reduce()
        } else {
            let l = rng.gen_range(0..=6);
            random_word(&mut rng, 2, l)
        };
        let got = product_contains(2, &cosets, &target);
        let witness = witness_search(&lists, &target);
        if witness {
            ensure(got, || {
                format!("{cosets:?} ∋ {target} by enumeration, decided false")
            })?;
            positive += 1;
            continue;
        }
        let excluded = (0..30).any(|_| {
            let d = rng.gen_range(2..=5);
            PermQuotient::random(&mut rng, d).excludes(&cosets, &target)
        });
        if excluded {
            ensure(!got, || {
                format!("{target} excluded by a quotient of {cosets:?}, decided true")
            })?;
            negative += 1;
        } else {
            open += 1;
        }
    }
    within(start, Duration::from_secs(60), "products")?;
    Ok(format!(
        "{positive} witnessed, {negative} excluded by quotients, {open} undecided by the oracles; no disagreement"
    ))
}

fn witness_search(lists: &[Vec<Word>], target: &Word) -> bool {
    fn go(lists: &[Vec<Word>], rest: &Word) -> bool {
        match lists {
            [] => rest.is_empty(),
            [last] => last.contains(rest),
            [first, more @ ..] => first
                .iter()
                .any(|f| go(more, &f.invert().concat(rest).reduce())),
        }
    }
    go(lists, &target.reduce())
}

fn random_agraph(rng: &mut ChaCha8Rng, rank: usize, n: usize) -> AGraph {
    let mut g = AGraph::new(rank, n);
    for i in 0..rank {
        let mut p: Vec<u32> = (0..n as u32).collect();
        p.shuffle(rng);
        for (v, &w) in p.iter().enumerate() {
            if rng.gen_bool(0.7) {
                g.set_edge(v as u32, Letter::pos(i), w).unwrap();
            }
        }
    }
    g
}

fn mul_table(m: &InverseMonoid) -> Vec<MElem> {
    let n = m.order();
    let mut t = vec![0; n * n];
    for x in m.elements() {
        for y in m.elements() {
            t[x as usize * n + y as usize] = m.mul(x, y);
        }
    }
    t
}

fn monoid_laws(m: &InverseMonoid) -> Result<(), String> {
    let n = m.order();
    let t = mul_table(m);
    let mul = |x: MElem, y: MElem| t[x as usize * n + y as usize];
    for x in m.elements() {
        let xi = m.inv(x);
        ensure(m.inv(xi) == x, || format!("(x⁻¹)⁻¹ ≠ x for {x}"))?;
        ensure(mul(mul(x, xi), x) == x, || format!("xx⁻¹x ≠ x for {x}"))?;
        for y in m.elements() {
            let yx: Vec<u32> = m
                .map(x)
                .iter()
                .map(|&v| {
                    if v == NONE {
                        NONE
                    } else {
                        m.map(y)[v as usize]
                    }
                })
                .collect();
            ensure(m.map(mul(x, y)) == &yx[..], || {
                format!("product {x}·{y} is not composition")
            })?;
            ensure(m.inv(mul(x, y)) == mul(m.inv(y), xi), || {
                format!("(xy)⁻¹ ≠ y⁻¹x⁻¹ for {x}, {y}")
            })?;
            let below = mul(mul(x, xi), y) == x;
            ensure(m.leq(x, y) == below, || {
                format!("order and xx⁻¹y disagree on {x}, {y}")
            })?;
            for z in m.elements() {
                ensure(mul(mul(x, y), z) == mul(x, mul(y, z)), || {
                    format!("associativity fails on {x}, {y}, {z}")
                })?;
            }
        }
    }
    let idem = m.idempotents();
    for &e in &idem {
        for &f in &idem {
            ensure(mul(e, f) == mul(f, e), || {
                format!("idempotents {e}, {f} do not commute")
            })?;
        }
    }
    Ok(())
}

fn crit3() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let dyck: Vec<Word> = words_up_to(2, 8)
        .into_iter()
        .filter(|w| w.is_dyck())
        .collect();
    let mut largest = 0;
    for _ in 0..50 {
        let n = rng.gen_range(1..=4);
        let g = random_agraph(&mut rng, 2, n);
        let m = transition_monoid(&g, BUDGET).map_err(|e| e.to_string())?;
        largest = largest.max(m.order());
        monoid_laws(&m)?;
        for w in &dyck {
            ensure(m.is_idempotent(m.evaluate(w)), || {
                format!("Dyck word {w} not idempotent")
            })?;
        }
    }
    let mut edge = AGraph::new(1, 2);
    edge.set_edge(0, Letter::pos(0), 1).unwrap();
    let e = transition_monoid(&edge, BUDGET).map_err(|e| e.to_string())?;
    ensure(e.order() == 6, || {
        format!("single-edge monoid has {} elements", e.order())
    })?;
    let e1 = e.evaluate(&Alphabet::standard(1).parse_word("a").unwrap());
    ensure(e.r_class(e1).len() == 2, || {
        "R-class of [a] is not of size 2".into()
    })?;
    Ok(format!(
        "50 monoids (largest {largest}) satisfy all laws; {} Dyck words idempotent; single edge gives 6 elements; {:.1?}",
        dyck.len(),
        start.elapsed()
    ))
}

fn small_monoid(rng: &mut ChaCha8Rng, max: usize) -> InverseMonoid {
    loop {
        let n = rng.gen_range(2..=4);
        let g = random_agraph(rng, 2, n);
        if let Ok(m) = transition_monoid(&g, max + 1) {
            if m.order() <= max && m.order() > 2 {
                return m;
            }
        }
    }
}

fn show_map(x: &[u32]) -> String {
    let parts: Vec<String> = x
        .iter()
        .map(|&v| if v == NONE { "-".into() } else { v.to_string() })
        .collect();
    format!("[{}]", parts.join(" "))
}

fn crit4() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let short = words_up_to(2, 6);
    let long = words_up_to(2, 8);
    let (mut checks, mut attained, mut elements) = (0usize, 0usize, 0usize);
    let mut missing: Vec<String> = Vec::new();
    let mut short_of = 0usize;
    for _ in 0..20 {
        let m = small_monoid(&mut rng, 50);
        let values: Vec<MElem> = short.iter().map(|w| m.evaluate(w)).collect();
        let mut fibres: HashMap<MElem, HashSet<Word>> = HashMap::new();
        for w in &long {
            fibres.entry(m.evaluate(w)).or_default().insert(w.reduce());
        }
        for x in m.elements() {
            elements += 1;
            let (s, _) = m.schutzenberger_graph(x);
            let (iota, tau) = (s.iota.unwrap(), s.tau.unwrap());
            for (w, &v) in short.iter().zip(&values) {
                let path = s.follow(iota, w) == Some(tau);
                ensure(path == m.leq(x, v), || {
                    format!("element {x}, word {w}: path {path}")
                })?;
                checks += 1;
            }
            let cg = m.canonical_coset(x).graph(2);
            let fibre = fibres.get(&x).cloned().unwrap_or_default();
            for r in &fibre {
                ensure(coset_membership(&cg, r), || {
                    format!("{r} has value {x} but is outside φ")
                })?;
            }
            let bound = 8usize.saturating_sub(m.carrier());
            let before = missing.len();
            for c in coset_words(&cg, bound) {
                if fibre.contains(&c) {
                    attained += 1;
                } else {
                    let maps: Vec<String> = (0..2)
                        .map(|i| show_map(m.map(m.evaluate(&Word::letter(Letter::pos(i))))))
                        .collect();
                    missing.push(format!(
                        "{c} ∈ φ(x) for x = {} (letters {}) needs |w| > 8",
                        show_map(m.map(x)),
                        maps.join(", ")
                    ));
                }
            }
            short_of += (missing.len() > before) as usize;
        }
    }
    let head = format!(
        "{checks} path checks agree with the order; every fibre lies in its coset; \
         {attained} short coset elements attained"
    );
    ensure(missing.is_empty(), || {
        format!(
            "{head}; {} coset words of reduced length ≤ L − |carrier| have no preimage of length ≤ L, \
             at {short_of} of {elements} elements; first: {}",
            missing.len(),
            missing[0]
        )
    })?;
    Ok(format!("{head}; {:.1?}", start.elapsed()))
}

/// A random Dyck word cut into `n` factors of length at most 6.
fn dyck_factors(rng: &mut ChaCha8Rng, n: usize) -> Vec<Word> {
    let lens: Vec<usize> = loop {
        let l: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=6)).collect();
        if l.iter().sum::<usize>() % 2 == 0 {
            break l;
        }
    };
    let total: usize = lens.iter().sum();
    let mut stack: Vec<Letter> = Vec::new();
    let mut word = Vec::with_capacity(total);
    for i in 0..total {
        let left = total - i;
        let push = stack.len() + 1 < left && (stack.is_empty() || rng.gen_bool(0.5));
        if push {
            let x = random_letter(rng, 2);
            stack.push(x);
            word.push(x);
        } else {
            word.push(stack.pop().unwrap().inverse());
        }
    }
    let mut out = Vec::new();
    let mut at = 0;
    for l in lens {
        out.push(Word(word[at..at + l].to_vec()));
        at += l;
    }
    out
}

fn crit5() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let free = GroupHandle::free(2);
    let monoids: Vec<InverseMonoid> = (0..10).map(|_| small_monoid(&mut rng, 2000)).collect();
    let mut max_diam = 0;
    for k in 0..500 {
        let m = &monoids[k % 10];
        let n = rng.gen_range(1..=6);
        let us = dyck_factors(&mut rng, n);
        let t = arborise(&us, m).map_err(|e| format!("arborise {us:?}: {e}"))?;
        ensure(t.tree.graph.is_tree(), || {
            format!("{us:?}: witness is not a tree")
        })?;
        ensure(t.diameter() < n.max(1), || {
            format!("{us:?}: diameter {}", t.diameter())
        })?;
        for (i, u) in us.iter().enumerate() {
            ensure(m.leq(m.evaluate(u), m.evaluate(&t.path_word(i))), || {
                format!("{us:?}: factor {i} not below its tree path")
            })?;
        }
        let relabel = t.relabelling(&us);
        for (u, v) in us.iter().zip(&relabel) {
            ensure(m.evaluate(u) == m.evaluate(v), || {
                format!("{us:?}: relabelling changes {u}")
            })?;
        }
        let l = LabelledGraph::from_graph(cycle_graph(n), relabel).map_err(|e| e.to_string())?;
        ensure(labelling_commutes(&l, &free), || {
            format!("{us:?}: relabelling not F-commuting")
        })?;
        max_diam = max_diam.max(t.diameter());
    }
    within(start, Duration::from_secs(120), "arborisation")?;
    Ok(format!(
        "500 factorizations, max diameter {max_diam}, all checks hold; {:.1?}",
        start.elapsed()
    ))
}

fn crit6() -> Outcome {
    let start = Instant::now();
    let mut edge = AGraph::new(2, 2);
    edge.set_edge(0, Letter::pos(0), 1).unwrap();
    edge.set_edge(0, Letter::pos(1), 0).unwrap();
    edge.set_edge(1, Letter::pos(1), 1).unwrap();
    let m = transition_monoid(&edge, BUDGET).map_err(|e| e.to_string())?;
    let (_, g0) = complete(&edge, BUDGET).map_err(|e| e.to_string())?;
    let g = suitable_group(&GroupHandle::enumerable(g0), 2, 2, 1).map_err(|e| e.to_string())?;
    let rep = verify_suitable(&m, &cycle_graph(2), &g, 3, 6, None, Mode::default(), BUDGET)
        .map_err(|e| e.to_string())?;
    ensure(rep.failure_count == 0, || {
        format!(
            "{} of {} commuting labellings unrelabelled",
            rep.failure_count, rep.commuting
        )
    })?;
    within(start, Duration::from_secs(600), "suitability")?;
    Ok(format!(
        "|M| = {}, {} labellings, {} G-commuting, all relabelled; {:.1?}",
        m.order(),
        rep.labellings,
        rep.commuting,
        start.elapsed()
    ))
}

fn crit7() -> Outcome {
    let start = Instant::now();
    let ab = Alphabet::standard(2);
    let w = |s: &str| ab.parse_word(s).unwrap();
    let coset =
        |gens: &[&str], rep: &str| CosetSpec::new(gens.iter().map(|g| w(g)).collect(), w(rep));
    let instances = [
        (coset(&["a"], ""), coset(&["b"], ""), "ba"),
        (coset(&["a"], ""), coset(&["b"], ""), "ab'a"),
        (coset(&["aa"], ""), coset(&["bb"], ""), "ab"),
        (coset(&["a"], ""), coset(&["b"], ""), "bab"),
        (coset(&["a"], ""), coset(&["a"], ""), "b"),
        (coset(&["ab"], ""), coset(&["ba"], ""), "a"),
        (coset(&["aba'"], ""), coset(&["b"], ""), "a"),
        (coset(&["a", "bab'"], ""), coset(&["bb"], ""), "b"),
        (coset(&["aa"], "a"), coset(&["bb"], "b"), ""),
        (coset(&["aaa"], ""), coset(&["bbb"], ""), "ab"),
    ];
    let mut exact = 0;
    let mut orders = Vec::new();
    for (c1, c2, g) in &instances {
        let cs = [c1.clone(), c2.clone()];
        let g = w(g);
        ensure(!product_contains(2, &cs, &g), || {
            format!("{g} lies in {cs:?}")
        })?;
        let (_, rep) =
            rz_separation(2, &cs, &g, 2, 5, 1 << 16, BUDGET).map_err(|e| e.to_string())?;
        ensure(rep.violations == 0, || {
            format!("{g}: {} bounded violations", rep.violations)
        })?;
        if let RzMode::Exact { order } = rep.mode {
            ensure(rep.exact_separated == Some(true), || {
                format!("{g}: exact check fails")
            })?;
            exact += 1;
            orders.push(order);
        }
    }
    ensure(exact >= 3, || {
        format!("only {exact} instances verified exactly")
    })?;
    Ok(format!(
        "10 instances separated, {exact} exact (orders {orders:?}); {:.1?}",
        start.elapsed()
    ))
}

fn crit8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let tower = AbTower::new(Arc::new(klein_group()))
        .expand(2)
        .map_err(|e| e.to_string())?;
    let one = tower.identity_at(0);
    let q = klein_group().order() as u32;
    let random_vec = |rng: &mut ChaCha8Rng| -> Vec<(u32, u16, u32)> {
        let mut v = Vec::new();
        for k in 0..q {
            for c in 0..2u16 {
                if rng.gen_bool(0.3) {
                    v.push((k, c, 1));
                }
            }
        }
        v
    };
    let (mut trivial, mut nontrivial) = (0, 0);
    for _ in 0..500 {
        let l = rng.gen_range(0..=8);
        let a = tower.eval(&random_word(&mut rng, 2, l));
        let y = random_vec(&mut rng);
        let a2 = tower.mul(&a, &tower.from_components_at(1, y, one));
        let x = random_vec(&mut rng);
        let (c1, closed1) = tower.kernel_commutator(a, &x);
        let (c2, closed2) = tower.kernel_commutator(a2, &x);
        ensure(c1 == closed1 && c2 == closed2, || {
            "commutator differs from closed form".into()
        })?;
        ensure(c1 == c2, || "commutator depends on the kernel part".into())?;
        let g = tower.components(a).inner;
        let fixed = tower.from_components_at(1, tower.shift_at(1, g, &x), one)
            == tower.from_components_at(1, x.clone(), one);
        ensure((c1 == tower.identity()) == fixed, || {
            "nontriviality criterion fails".into()
        })?;
        if fixed {
            trivial += 1;
        } else {
            nontrivial += 1;
        }
    }
    Ok(format!(
        "500 triples: {nontrivial} nontrivial, {trivial} trivial, all consistent"
    ))
}

fn crit9() -> Outcome {
    let mut lines = Vec::new();
    for ms in [
        vec![2],
        vec![3],
        vec![2, 2],
        vec![2, 3],
        vec![3, 2],
        vec![3, 3],
    ] {
        let start = Instant::now();
        let r = verify_identity_54(ms.len(), &ms).map_err(|e| e.to_string())?;
        ensure(r.identity_holds && r.nontrivial_holds, || {
            format!("{ms:?}: {}", r.line())
        })?;
        if ms.len() == 2 {
            within(start, Duration::from_secs(10), &format!("t = 2, {ms:?}"))?;
        }
        lines.push(format!("{ms:?} {:.1?}", start.elapsed()));
    }
    Ok(format!(
        "identity and nontriviality hold for {}",
        lines.join(", ")
    ))
}

fn crit10() -> Outcome {
    let start = Instant::now();
    let mut orders = Vec::new();
    for ms in [vec![2], vec![2, 2]] {
        let r = klein_counterexample(&ms, 6, BUDGET).map_err(|e| e.to_string())?;
        ensure(r.all_pass(), || format!("{ms:?}: {}", r.lines().join("; ")))?;
        orders.push(r.b_order);
    }
    within(start, Duration::from_secs(300), "counterexample")?;
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = invexp::cli::run_with(
        [
            "invexp",
            "ash-verify",
            "--strengthened",
            "--t",
            "1",
            "--m",
            "2",
        ],
        &mut out,
        &mut err,
    );
    let text = String::from_utf8_lossy(&out);
    ensure(code == 1, || {
        format!("ash-verify --strengthened exited {code}")
    })?;
    ensure(text.contains("SUITABLE: FAIL"), || {
        "no suitability failure reported".into()
    })?;
    Ok(format!(
        "all checks pass for (2) and (2, 2), b orders {orders:?}; strengthened relabelling absent, exit 1; {:.1?}",
        start.elapsed()
    ))
}

fn crit11() -> Outcome {
    let ab = Alphabet::standard(1);
    let w = |s: &str| ab.parse_word(s).unwrap();
    let c1 = CosetSpec::new(vec![w("aa")], w("a"));
    let c2 = CosetSpec::new(vec![w("aa")], Word::empty());
    let cs = [c1.clone(), c2.clone()];
    ensure(!product_contains(1, &cs, &Word::empty()), || {
        "1 lies in the product".into()
    })?;
    let x = coset_pair_problem(1, &c1, &c2).map_err(|e| e.to_string())?;
    let (h, _) =
        rz_separation(1, &cs, &Word::empty(), 2, 3, 1 << 16, BUDGET).map_err(|e| e.to_string())?;
    let g = match h {
        GroupHandle::Enum(e) => e,
        other => Arc::new(materialize(&other, 1 << 16).map_err(|e| e.to_string())?),
    };
    let sigma = [coloured_cycle(2)];
    let (_, rep) = eppa_check(&x, &sigma, &g, BUDGET).map_err(|e| e.to_string())?;
    ensure(rep.passes(), || format!("separating group fails: {rep:?}"))?;
    let (_, ctl) =
        eppa_check(&x, &sigma, &EnumGroup::trivial(1), BUDGET).map_err(|e| e.to_string())?;
    ensure(!ctl.extends && !ctl.induced && !ctl.sigma_free, || {
        format!("trivial control does not fail as predicted: {ctl:?}")
    })?;
    Ok(format!(
        "group of order {} gives an induced Σ-free extension of size {}; trivial group fails (extends, induced, Σ-free all false)",
        g.order(),
        rep.size
    ))
}

fn main() {
    let criteria: [Check; 11] = [
        ("membership", crit1),
        ("products", crit2),
        ("monoid laws", crit3),
        ("path criterion and canonical coset", crit4),
        ("arborisation", crit5),
        ("suitability", crit6),
        ("separation", crit7),
        ("kernel commutators", crit8),
        ("commutator identity", crit9),
        ("klein counterexample", crit10),
        ("extension property", crit11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = f();
        let t = start.elapsed();
        match r {
            Ok(d) => println!("PASS {:>2} {name}: {d} [{t:.1?}]", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {d} [{t:.1?}]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
