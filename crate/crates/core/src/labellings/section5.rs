use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graphs::{LabelledGraph, SerreGraph};
use crate::groups::{AbTower, EnumGroup, Group, MMElem, MMExpansion};
use crate::words::{reduced_words_up_to, substitute, Alphabet, Letter, Word};

use super::WordLabelling;

fn commutator(a: &Word, b: &Word) -> Word {
    Word::concat_all([a, b, &a.invert(), &b.invert()])
}

fn check_exponents(t: usize, ms: &[u32]) -> Result<()> {
    if t == 0 || ms.len() != t {
        return Err(Error::invalid("need t ≥ 1 and exactly t exponents"));
    }
    if ms.iter().any(|&m| m < 2) {
        return Err(Error::invalid("exponents must be at least 2"));
    }
    Ok(())
}

/// `[xyx⁻¹, z^{m₁}, z^{m₁m₂}, …, z^{m₁⋯m_{t−1}}]`, left-nested with
/// `[u, v] = uvu⁻¹v⁻¹`.
pub fn build_w_word(t: usize, ms: &[u32], x: &Word, y: &Word, z: &Word) -> Result<Word> {
    check_exponents(t, ms)?;
    let mut w = Word::concat_all([x, y, &x.invert()]);
    let mut e: i64 = 1;
    for &m in &ms[..t - 1] {
        e *= m as i64;
        w = commutator(&w, &z.pow(e));
    }
    Ok(w)
}

#[derive(Clone, Debug)]
pub struct Identity54Report {
    pub identity_holds: bool,
    pub nontrivial_holds: bool,
    pub base_order: usize,
    pub depth: usize,
}

impl Identity54Report {
    pub fn line(&self) -> String {
        let v = |b: bool| if b { "holds" } else { "fails" };
        format!(
            "identity(1): {}; nontrivial(2): {}",
            v(self.identity_holds),
            v(self.nontrivial_holds)
        )
    }
}

/// `Z_m³` on `3m` points, one cycle per generator.
fn cube(m: u32) -> Result<EnumGroup> {
    let m = m as usize;
    let gens: Vec<Vec<u32>> = (0..3)
        .map(|k| {
            (0..3 * m as u32)
                .map(|p| {
                    let p = p as usize;
                    if p / m == k {
                        (k * m + (p % m + 1) % m) as u32
                    } else {
                        p as u32
                    }
                })
                .collect()
        })
        .collect();
    EnumGroup::from_permutations(3, 3 * m, &gens, 1 << 16)
}

/// Evaluates both sides of `w(x,y,z) = w(1,y,z)` and checks `w(1,y,z) ≠ 1`
/// in the free `{x,y,z}`-generated object, realized as expansions with
/// exponents `m₂, …, m_t` over `Z_{m₁}³`.
pub fn verify_identity_54(t: usize, ms: &[u32]) -> Result<Identity54Report> {
    check_exponents(t, ms)?;
    let base = Arc::new(cube(ms[0])?);
    let mut tower = AbTower::new(base.clone());
    for &m in &ms[1..] {
        tower = tower.expand(m)?;
    }
    let gen = |i: usize| Word::letter(Letter::pos(i));
    let (x, y, z) = (gen(0), gen(1), gen(2));
    let lhs = build_w_word(t, ms, &x, &y, &z)?;
    let rhs = build_w_word(t, ms, &Word::empty(), &y, &z)?;
    let (l, r) = (tower.eval(&lhs), tower.eval(&rhs));
    Ok(Identity54Report {
        identity_holds: l == r,
        nontrivial_holds: r != tower.identity(),
        base_order: base.order(),
        depth: tower.depth(),
    })
}

/// Names of the positive Cayley edges of the Klein group, as
/// `(name, element word, letter)`.
pub const KLEIN_EDGES: [(&str, &str, usize); 8] = [
    ("c", "b", 1),
    ("d", "1", 1),
    ("e", "1", 0),
    ("f", "a", 0),
    ("g", "a", 1),
    ("h", "ab", 1),
    ("i", "ab", 0),
    ("j", "b", 0),
];

/// The data of the Klein construction for exponents `m₁, …, m_t`.
pub struct KleinInstance {
    pub q: Arc<EnumGroup>,
    /// Cayley-edge key `(element, letter)` of each named edge.
    pub keys: Vec<(u32, usize)>,
    pub b_word_1: Word,
    pub b_word_2: Word,
    pub u1: Word,
    pub u2: Word,
    /// Edge names of the two target subgraphs.
    pub a1: Vec<&'static str>,
    pub a2: Vec<&'static str>,
    pub h: AbTower,
    pub mm: MMExpansion,
}

impl KleinInstance {
    fn key(&self, name: &str) -> (u32, usize) {
        let i = KLEIN_EDGES.iter().position(|e| e.0 == name).unwrap();
        self.keys[i]
    }

    pub fn mm_target(&self, names: &[&str]) -> Result<MMElem> {
        let edges: Vec<(u32, usize)> = names.iter().map(|n| self.key(n)).collect();
        self.mm.element(&edges, 0)
    }

    /// The labelling `e_i ↦ u_i` of two parallel edges `o → p`.
    pub fn labelling(&self) -> WordLabelling {
        let mut g = SerreGraph::new(2);
        g.add_edge(0, 1);
        g.add_edge(0, 1);
        LabelledGraph::from_graph(g, vec![self.u1.clone(), self.u2.clone()])
            .expect("two labels for two edges")
    }
}

/// The Klein four-group generated by `a = (1 2)` and `b = (3 4)`.
pub fn klein_group() -> EnumGroup {
    EnumGroup::from_permutations(2, 4, &[vec![1, 0, 2, 3], vec![0, 1, 3, 2]], 16)
        .expect("the Klein group is small")
}

/// Rewrites a word over the named Cayley edges as the `A`-word tracing the
/// same path from `1`.
fn trace(q: &EnumGroup, keys: &[(u32, usize)], w: &Word) -> Result<Word> {
    let mut cur = 0u32;
    let mut out = Vec::with_capacity(w.len());
    for &x in w.letters() {
        let (g, a) = keys[x.index()];
        let end = q.step(g, Letter::pos(a));
        if x.is_inverse() {
            if cur != end {
                return Err(Error::invalid("edge word is not a path"));
            }
            out.push(Letter::neg(a));
            cur = g;
        } else {
            if cur != g {
                return Err(Error::invalid("edge word is not a path"));
            }
            out.push(Letter::pos(a));
            cur = end;
        }
    }
    if cur != 0 {
        return Err(Error::invalid("edge word is not closed at 1"));
    }
    Ok(Word(out))
}

pub fn klein_instance(ms: &[u32]) -> Result<KleinInstance> {
    let t = ms.len();
    check_exponents(t, ms)?;
    let q = Arc::new(klein_group());
    let ab = Alphabet::standard(2);
    let keys: Vec<(u32, usize)> = KLEIN_EDGES
        .iter()
        .map(|&(_, g, a)| Ok((q.follow(0, &ab.parse_word(g)?), a)))
        .collect::<Result<_>>()?;
    let names = Alphabet::new(KLEIN_EDGES.iter().map(|e| e.0))?;
    let cw = |s: &str| names.parse_word(s);
    let (x, y, z) = (
        Word::letter(Letter::pos(0)),
        Word::letter(Letter::pos(1)),
        Word::letter(Letter::pos(2)),
    );
    let w = build_w_word(t, ms, &x, &y, &z)?;
    let b_word_1 = substitute(&w, &[cw("e")?, cw("gh")?, cw("dc")?]);
    let b_word_2 = substitute(&w, &[cw("f'")?, cw("gh")?, cw("dc")?]);
    let u1 = trace(&q, &keys, &b_word_1)?;
    let u2 = trace(&q, &keys, &b_word_2)?;
    let mut a1 = vec!["e", "g", "h"];
    let mut a2 = vec!["f", "g", "h"];
    if t >= 2 {
        a1.extend(["c", "d"]);
        a2.extend(["c", "d"]);
    }
    let mut h = AbTower::new(q.clone());
    for &m in ms {
        h = h.expand(m)?;
    }
    Ok(KleinInstance {
        mm: MMExpansion::new(q.clone()),
        q,
        keys,
        b_word_1,
        b_word_2,
        u1,
        u2,
        a1,
        a2,
        h,
    })
}

/// One named check of the counterexample.
#[derive(Clone, Debug)]
pub struct KleinCheck {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct KleinReport {
    pub checks: Vec<KleinCheck>,
    pub b_order: usize,
}

impl KleinReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                format!(
                    "{} {}: {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                )
            })
            .collect()
    }
}

/// Runs the four checks: the `M(Q)`-values of `u₁, u₂`; equality of their
/// values in `H`; exclusion of every power of `b` from that value; and the
/// structural fact that every common upper bound in `M(Q)` is a `b`-power,
/// confirmed on all reduced words up to `bound_len`.
pub fn klein_counterexample(ms: &[u32], bound_len: usize, budget: usize) -> Result<KleinReport> {
    let k = klein_instance(ms)?;
    let mm = &k.mm;
    let (m1, m2) = (mm.eval(&k.u1), mm.eval(&k.u2));
    let (t1, t2) = (k.mm_target(&k.a1)?, k.mm_target(&k.a2)?);
    let check1 = KleinCheck {
        name: "(i) mm values",
        pass: m1 == t1 && m2 == t2,
        detail: format!(
            "[u1]_M = (A1, 1) with A1 = {{{}}}, [u2]_M = (A2, 1) with A2 = {{{}}}",
            k.a1.join(","),
            k.a2.join(",")
        ),
    };
    let h = &k.h;
    let (h1, h2) = (h.eval(&k.u1), h.eval(&k.u2));
    let check2 = KleinCheck {
        name: "(ii) commuting over H",
        pass: h1 == h2,
        detail: format!("[u1]_H = [u2]_H at depth {}", h.depth()),
    };
    let b = h.eval(&Word::letter(Letter::pos(1)));
    let b_order = h.element_order(b, budget)?;
    let mut power = h.identity();
    let mut hit = None;
    for i in 0..b_order {
        if power == h1 {
            hit = Some(i);
            break;
        }
        power = h.mul(&power, &b);
    }
    let check3 = KleinCheck {
        name: "(iii) b-power exclusion",
        pass: hit.is_none(),
        detail: match hit {
            None => format!("[b^k]_H ≠ [u1]_H for all 0 ≤ k < {b_order} = ord(b)"),
            Some(i) => format!("[b^{i}]_H = [u1]_H"),
        },
    };
    let common: Vec<&str> = k.a1.iter().copied().filter(|n| k.a2.contains(n)).collect();
    let b_only = b_only_component(&k, &common);
    let mut bounds = 0usize;
    let mut non_b = None;
    for v in reduced_words_up_to(2, bound_len) {
        let mv = mm.eval(&v);
        if mm.leq(&m1, &mv) && mm.leq(&m2, &mv) {
            bounds += 1;
            if v.letters().iter().any(|x| x.index() != 1) {
                non_b = Some(v);
                break;
            }
        }
    }
    let check4 = KleinCheck {
        name: "(iv) common upper bounds",
        pass: b_only && non_b.is_none(),
        detail: match &non_b {
            None => format!(
                "A1 ∩ A2 = {{{}}} reaches only b-edges from 1; reduced upper bounds up to length {bound_len}: {bounds}, all b-powers",
                common.join(",")
            ),
            Some(v) => format!("upper bound {v} is not a b-power"),
        },
    };
    Ok(KleinReport {
        checks: vec![check1, check2, check3, check4],
        b_order,
    })
}

/// Whether the component of `1` in the subgraph on the given edges uses only
/// `b`-edges.
fn b_only_component(k: &KleinInstance, names: &[&str]) -> bool {
    let n = k.q.order();
    let mut g = SerreGraph::new(n);
    let mut letter = Vec::new();
    for name in names {
        let (v, a) = k.key(name);
        g.add_edge(v, k.q.step(v, Letter::pos(a)));
        letter.push(a);
    }
    let (comp, _) = g.components();
    g.positive_edges()
        .all(|e| comp[g.alpha(e) as usize] != comp[0] || letter[e / 2] == 1)
}
