//! Finite relational structures, partial automorphisms given as A-graphs,
//! group extensions `X_P G`, homomorphism search and consolidated
//! structures of graphs.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::automata::CosetSpec;
use crate::error::{Error, Result};
use crate::graphs::{AGraph, SerreGraph};
use crate::groups::{EnumGroup, Group};
use crate::words::{Alphabet, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelStructure {
    pub signature: Vec<(String, usize)>,
    pub names: Vec<String>,
    pub relations: Vec<BTreeSet<Vec<u32>>>,
}

impl RelStructure {
    pub fn new(signature: Vec<(String, usize)>, names: Vec<String>) -> RelStructure {
        let relations = vec![BTreeSet::new(); signature.len()];
        RelStructure {
            signature,
            names,
            relations,
        }
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn symbol(&self, name: &str) -> Option<usize> {
        self.signature.iter().position(|s| s.0 == name)
    }

    pub fn add_tuple(&mut self, r: usize, t: Vec<u32>) -> Result<()> {
        let (name, arity) = &self.signature[r];
        if t.len() != *arity {
            return Err(Error::invalid(format!(
                "tuple of length {} for {name} of arity {arity}",
                t.len()
            )));
        }
        if t.iter().any(|&x| x as usize >= self.size()) {
            return Err(Error::invalid("tuple entry outside the universe"));
        }
        self.relations[r].insert(t);
        Ok(())
    }

    pub fn tuple_count(&self) -> usize {
        self.relations.iter().map(|r| r.len()).sum()
    }

    /// Elements occurring in no tuple.
    pub fn relation_free(&self) -> Vec<u32> {
        let mut used = vec![false; self.size()];
        for t in self.relations.iter().flatten() {
            for &x in t {
                used[x as usize] = true;
            }
        }
        (0..self.size() as u32)
            .filter(|&x| !used[x as usize])
            .collect()
    }

    /// Relation-free elements plus tuples.
    pub fn weight(&self) -> usize {
        self.relation_free().len() + self.tuple_count()
    }

    fn arities(&self) -> Vec<usize> {
        self.signature.iter().map(|s| s.1).collect()
    }

    pub fn disjoint_union(&self, other: &RelStructure) -> Result<RelStructure> {
        if self.arities() != other.arities() {
            return Err(Error::invalid("signatures differ"));
        }
        let off = self.size() as u32;
        let mut out = self.clone();
        out.names.extend(other.names.iter().cloned());
        for (r, rel) in other.relations.iter().enumerate() {
            for t in rel {
                out.relations[r].insert(t.iter().map(|x| x + off).collect());
            }
        }
        Ok(out)
    }

    /// Parses `sig R 2`, `elem x` and `tuple R x y` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<RelStructure> {
        let mut s = RelStructure::new(Vec::new(), Vec::new());
        let mut index: HashMap<String, u32> = HashMap::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            let err = |m: &str| Error::format(ln + 1, m);
            match f[0] {
                "sig" => {
                    if f.len() != 3 {
                        return Err(err("expected `sig <symbol> <arity>`"));
                    }
                    if s.symbol(f[1]).is_some() {
                        return Err(err("duplicate symbol"));
                    }
                    let arity = f[2].parse().map_err(|_| err("bad arity"))?;
                    s.signature.push((f[1].to_string(), arity));
                    s.relations.push(BTreeSet::new());
                }
                "elem" => {
                    for name in &f[1..] {
                        if index.contains_key(*name) {
                            return Err(err("duplicate element"));
                        }
                        index.insert(name.to_string(), s.names.len() as u32);
                        s.names.push(name.to_string());
                    }
                }
                "tuple" => {
                    let r = f
                        .get(1)
                        .and_then(|n| s.symbol(n))
                        .ok_or_else(|| err("unknown symbol"))?;
                    let t = f[2..]
                        .iter()
                        .map(|n| index.get(*n).copied().ok_or_else(|| err("unknown element")))
                        .collect::<Result<Vec<u32>>>()?;
                    s.add_tuple(r, t).map_err(|e| err(&e.to_string()))?;
                }
                _ => return Err(err("unknown directive")),
            }
        }
        Ok(s)
    }
}

impl fmt::Display for RelStructure {
    /// The file format, with tuples in sorted order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, arity) in &self.signature {
            writeln!(f, "sig {name} {arity}")?;
        }
        for name in &self.names {
            writeln!(f, "elem {name}")?;
        }
        for (r, rel) in self.relations.iter().enumerate() {
            for t in rel {
                write!(f, "tuple {}", self.signature[r].0)?;
                for &x in t {
                    write!(f, " {}", self.names[x as usize])?;
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// A homomorphism `t → y` by backtracking, or `None`.
///
/// Signatures are matched by position and arity. Each tuple is checked as
/// soon as its last entry is assigned.
pub fn hom_exists(t: &RelStructure, y: &RelStructure, budget: usize) -> Result<Option<Vec<u32>>> {
    if t.arities() != y.arities() {
        return Err(Error::invalid("signatures differ"));
    }
    let n = t.size();
    let mut due: Vec<Vec<(usize, &Vec<u32>)>> = vec![Vec::new(); n];
    for (r, rel) in t.relations.iter().enumerate() {
        for tup in rel {
            match tup.iter().max() {
                Some(&m) => due[m as usize].push((r, tup)),
                None if y.relations[r].is_empty() => return Ok(None),
                None => {}
            }
        }
    }
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let m = y.size() as u32;
    let mut map = vec![0u32; n];
    let mut i = 0usize;
    let mut nodes = 0usize;
    let mut fresh = true;
    loop {
        if !fresh {
            map[i] += 1;
        }
        fresh = false;
        if map[i] >= m {
            map[i] = 0;
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            continue;
        }
        nodes += 1;
        if nodes > budget {
            return Err(Error::Budget {
                what: "homomorphism search nodes",
                limit: budget,
                reached: nodes,
            });
        }
        let ok = due[i].iter().all(|(r, tup)| {
            let img: Vec<u32> = tup.iter().map(|&x| map[x as usize]).collect();
            y.relations[*r].contains(&img)
        });
        if ok {
            if i + 1 == n {
                return Ok(Some(map));
            }
            i += 1;
            fresh = true;
        }
    }
}

pub fn sigma_free(y: &RelStructure, sigma: &[RelStructure], budget: usize) -> Result<bool> {
    for t in sigma {
        if hom_exists(t, y, budget)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A structure with partial automorphisms, one per letter.
#[derive(Clone)]
pub struct ExtensionProblem {
    pub structure: RelStructure,
    pub partials: AGraph,
}

impl ExtensionProblem {
    pub fn new(structure: RelStructure, partials: AGraph) -> Result<ExtensionProblem> {
        if partials.num_vertices() != structure.size() {
            return Err(Error::invalid("partials and universe differ in size"));
        }
        let p = ExtensionProblem {
            structure,
            partials,
        };
        for x in (0..p.partials.rank()).flat_map(|i| [Letter::pos(i), Letter::neg(i)]) {
            if let Some((r, t)) = p.non_preserved(x) {
                return Err(Error::Invalid(format!(
                    "letter {} is not a partial automorphism: tuple {:?} of {}",
                    Alphabet::standard(p.partials.rank()).format_letter(x),
                    t,
                    p.structure.signature[r].0
                )));
            }
        }
        Ok(p)
    }

    fn non_preserved(&self, x: Letter) -> Option<(usize, Vec<u32>)> {
        for (r, rel) in self.structure.relations.iter().enumerate() {
            for t in rel {
                let img: Option<Vec<u32>> = t.iter().map(|&v| self.partials.target(v, x)).collect();
                if let Some(img) = img {
                    if !rel.contains(&img) {
                        return Some((r, t.clone()));
                    }
                }
            }
        }
        None
    }

    /// A word `w` and distinct `x, y` with `x·w = y` and `[w]_G = 1`.
    pub fn violation(&self, g: &EnumGroup) -> Option<(u32, u32, Word)> {
        let n = g.order();
        let p = &self.partials;
        for x in 0..p.num_vertices() as u32 {
            let mut prev: HashMap<(u32, u32), (u32, u32, Letter)> = HashMap::new();
            let mut queue = VecDeque::from([(x, 0u32)]);
            prev.insert((x, 0), (x, 0, Letter::pos(0)));
            while let Some((v, h)) = queue.pop_front() {
                if h == 0 && v != x {
                    let mut w = Vec::new();
                    let mut cur = (v, h);
                    while cur != (x, 0) {
                        let (pv, ph, a) = prev[&cur];
                        w.push(a);
                        cur = (pv, ph);
                    }
                    w.reverse();
                    return Some((x, v, Word(w)));
                }
                for a in (0..p.rank()).flat_map(|i| [Letter::pos(i), Letter::neg(i)]) {
                    if let Some(u) = p.target(v, a) {
                        let k = (u, g.step(h, a));
                        if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(k) {
                            e.insert((v, h, a));
                            queue.push_back(k);
                        }
                    }
                }
            }
            debug_assert!(prev.len() <= n * p.num_vertices());
        }
        None
    }
}

/// `X_P G` with the embedding of `X` and the action of each letter.
#[derive(Clone, Debug)]
pub struct Extension {
    pub structure: RelStructure,
    pub embed: Vec<u32>,
    /// Per positive letter, its permutation of the extended universe.
    pub actions: Vec<Vec<u32>>,
}

impl Extension {
    pub fn embedding_injective(&self) -> bool {
        let set: BTreeSet<u32> = self.embed.iter().copied().collect();
        set.len() == self.embed.len()
    }

    /// Whether the letter actions are bijections preserving every relation.
    pub fn actions_are_automorphisms(&self) -> bool {
        let n = self.structure.size();
        self.actions.iter().all(|act| {
            let img: BTreeSet<u32> = act.iter().copied().collect();
            img.len() == n
                && self.structure.relations.iter().all(|rel| {
                    rel.iter().all(|t| {
                        rel.contains(&t.iter().map(|&x| act[x as usize]).collect::<Vec<_>>())
                    })
                })
        })
    }

    /// Whether each letter action extends the corresponding partial map.
    pub fn extends_partials(&self, p: &AGraph) -> bool {
        p.positive_edges().iter().all(|&(v, a, w)| {
            self.actions[a.index()][self.embed[v as usize] as usize] == self.embed[w as usize]
        })
    }
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        parent[x as usize] = parent[parent[x as usize] as usize];
        x = parent[x as usize];
    }
    x
}

/// `(X × G)/Θ(P)` with relations `⋃ R^X g`; errors if `g` does not extend
/// the partials.
pub fn extend_by_group(x: &ExtensionProblem, g: &EnumGroup) -> Result<Extension> {
    if let Some((a, b, w)) = x.violation(g) {
        return Err(Error::Precondition(format!(
            "the group does not extend the partials: {} · {w} = {} with [{w}] = 1",
            x.structure.names[a as usize], x.structure.names[b as usize]
        )));
    }
    extend_unchecked(x, g)
}

/// The quotient construction without the extension check.
pub fn extend_unchecked(x: &ExtensionProblem, g: &EnumGroup) -> Result<Extension> {
    if g.rank() != x.partials.rank() {
        return Err(Error::invalid("group and partials have different ranks"));
    }
    let (nx, ng) = (x.structure.size(), g.order());
    let id = |v: u32, h: u32| v * ng as u32 + h;
    let mut parent: Vec<u32> = (0..(nx * ng) as u32).collect();
    for (v, a, w) in x.partials.positive_edges() {
        for h in g.elements() {
            let left = id(v, Group::mul(g, &g.step(0, a), &h));
            let (r1, r2) = (find(&mut parent, left), find(&mut parent, id(w, h)));
            if r1 != r2 {
                parent[r1.max(r2) as usize] = r1.min(r2);
            }
        }
    }
    let mut class = vec![u32::MAX; nx * ng];
    let mut names = Vec::new();
    for k in 0..(nx * ng) as u32 {
        let r = find(&mut parent, k);
        if class[r as usize] == u32::MAX {
            class[r as usize] = names.len() as u32;
            let (v, h) = (k / ng as u32, k % ng as u32);
            names.push(if h == 0 {
                x.structure.names[v as usize].clone()
            } else {
                format!("{}·{}", x.structure.names[v as usize], g.word(h))
            });
        }
        class[k as usize] = class[r as usize];
    }
    let mut y = RelStructure::new(x.structure.signature.clone(), names);
    for (r, rel) in x.structure.relations.iter().enumerate() {
        for t in rel {
            for h in g.elements() {
                y.relations[r].insert(t.iter().map(|&v| class[id(v, h) as usize]).collect());
            }
        }
    }
    let mut actions = vec![vec![0u32; y.size()]; g.rank()];
    for (i, act) in actions.iter_mut().enumerate() {
        for k in 0..(nx * ng) as u32 {
            let (v, h) = (k / ng as u32, k % ng as u32);
            act[class[k as usize] as usize] = class[id(v, g.step(h, Letter::pos(i))) as usize];
        }
    }
    let embed = (0..nx as u32).map(|v| class[id(v, 0) as usize]).collect();
    Ok(Extension {
        structure: y,
        embed,
        actions,
    })
}

/// Whether `x` embeds as an induced substructure.
pub fn is_induced(x: &RelStructure, y: &Extension) -> bool {
    if !y.embedding_injective() {
        return false;
    }
    let mut inv = HashMap::new();
    for (v, &e) in y.embed.iter().enumerate() {
        inv.insert(e, v as u32);
    }
    y.structure
        .relations
        .iter()
        .zip(&x.relations)
        .all(|(ry, rx)| {
            let restricted: BTreeSet<Vec<u32>> = ry
                .iter()
                .filter_map(|t| {
                    t.iter()
                        .map(|e| inv.get(e).copied())
                        .collect::<Option<Vec<u32>>>()
                })
                .collect();
            &restricted == rx
        })
}

/// The consolidated structure `C` on edge ids and its quotient `C*` on
/// geometric edges.
///
/// `R_v` enumerates the edges ending at `v`: positive edges first, then
/// inverse edges, each by increasing id.
pub fn consolidated_structure(e: &SerreGraph) -> Result<(RelStructure, RelStructure)> {
    if e.positive_edges().any(|k| e.is_loop(k)) {
        return Err(Error::Precondition(
            "consolidated structures need a loop-free graph".into(),
        ));
    }
    let n = e.num_vertices();
    let mut into: Vec<Vec<usize>> = vec![Vec::new(); n];
    for k in e.positive_edges() {
        into[e.omega(k) as usize].push(k);
    }
    for k in e.positive_edges() {
        into[e.alpha(k) as usize].push(SerreGraph::inv(k));
    }
    let signature: Vec<(String, usize)> =
        (0..n).map(|v| (format!("R{v}"), into[v].len())).collect();
    let edge_name = |k: usize| {
        if k.is_multiple_of(2) {
            format!("e{}", k / 2)
        } else {
            format!("e{}'", k / 2)
        }
    };
    let names: Vec<String> = (0..e.num_edge_ids()).map(edge_name).collect();
    let mut c = RelStructure::new(signature.clone(), names);
    let star_names = (0..e.num_geometric_edges())
        .map(|k| format!("e{k}"))
        .collect();
    let mut star = RelStructure::new(signature, star_names);
    for (v, ks) in into.iter().enumerate() {
        c.add_tuple(v, ks.iter().map(|&k| k as u32).collect())?;
        star.add_tuple(v, ks.iter().map(|&k| (k / 2) as u32).collect())?;
    }
    Ok((c, star))
}

#[derive(Clone, Debug)]
pub struct EppaReport {
    pub extends: bool,
    pub violation: Option<Word>,
    pub size: usize,
    pub induced: bool,
    pub sigma_free: bool,
    pub automorphisms: bool,
}

impl EppaReport {
    pub fn passes(&self) -> bool {
        self.extends && self.induced && self.sigma_free && self.automorphisms
    }
}

/// Builds `X_P G` and checks induced-ness, Σ-freeness and that every
/// letter acts as an automorphism extending its partial map. A group that
/// does not extend the partials is reported and the quotient is still
/// examined.
pub fn eppa_check(
    x: &ExtensionProblem,
    sigma: &[RelStructure],
    g: &EnumGroup,
    budget: usize,
) -> Result<(Extension, EppaReport)> {
    let violation = x.violation(g).map(|v| v.2);
    let ext = extend_unchecked(x, g)?;
    let report = EppaReport {
        extends: violation.is_none(),
        violation,
        size: ext.structure.size(),
        induced: is_induced(&x.structure, &ext),
        sigma_free: sigma_free(&ext.structure, sigma, budget)?,
        automorphisms: ext.actions_are_automorphisms() && ext.extends_partials(&x.partials),
    };
    Ok((ext, report))
}

/// The coloured `n`-cycle: `R_i = {(c_{i−1}, c_i)}`, equal to `C*` of the
/// directed `n`-cycle up to renaming.
pub fn coloured_cycle(n: usize) -> RelStructure {
    let mut g = SerreGraph::new(n);
    for i in 0..n {
        g.add_edge(i as u32, ((i + 1) % n) as u32);
    }
    let (_, star) = consolidated_structure(&g).expect("cycles of length ≥ 2 are loop-free");
    star
}

/// The two-coset instance on `S₁ ⊔ S₂`: `R₁` holds the pairs reachable
/// from `(τ₁, ι₂)` in `S₁ × S₂`, `R₂` those reachable from `(τ₂, ι₁)` in
/// `S₂ × S₁`. Partials are the letter actions of the two graphs.
pub fn coset_pair_problem(rank: usize, c1: &CosetSpec, c2: &CosetSpec) -> Result<ExtensionProblem> {
    let (s1, s2) = (c1.graph(rank), c2.graph(rank));
    let (n1, n2) = (s1.num_vertices(), s2.num_vertices());
    let mut p = AGraph::new(rank, n1 + n2);
    for (v, a, w) in s1.positive_edges() {
        p.set_edge(v, a, w)?;
    }
    for (v, a, w) in s2.positive_edges() {
        p.set_edge(v + n1 as u32, a, w + n1 as u32)?;
    }
    let names = (0..n1)
        .map(|v| format!("s1_{v}"))
        .chain((0..n2).map(|v| format!("s2_{v}")))
        .collect();
    let sig = vec![("R1".to_string(), 2), ("R2".to_string(), 2)];
    let mut s = RelStructure::new(sig, names);
    let marks = |g: &AGraph| match (g.iota, g.tau) {
        (Some(i), Some(t)) => Ok((i, t)),
        _ => Err(Error::invalid("coset graph without marks")),
    };
    let ((i1, t1), (i2, t2)) = (marks(&s1)?, marks(&s2)?);
    for (x, y) in product_orbit(&s1, &s2, t1, i2) {
        s.add_tuple(0, vec![x, y + n1 as u32])?;
    }
    for (x, y) in product_orbit(&s2, &s1, t2, i1) {
        s.add_tuple(1, vec![x + n1 as u32, y])?;
    }
    ExtensionProblem::new(s, p)
}

fn product_orbit(a: &AGraph, b: &AGraph, x: u32, y: u32) -> BTreeSet<(u32, u32)> {
    let mut seen = BTreeSet::from([(x, y)]);
    let mut stack = vec![(x, y)];
    while let Some((u, v)) = stack.pop() {
        for l in (0..a.rank()).flat_map(|i| [Letter::pos(i), Letter::neg(i)]) {
            if let (Some(u2), Some(v2)) = (a.target(u, l), b.target(v, l)) {
                if seen.insert((u2, v2)) {
                    stack.push((u2, v2));
                }
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Alphabet::standard(1).parse_word(s).unwrap()
    }

    fn brute_hom(t: &RelStructure, y: &RelStructure) -> bool {
        let (n, m) = (t.size(), y.size());
        let total = m.pow(n as u32);
        (0..total).any(|mut code| {
            let map: Vec<u32> = (0..n)
                .map(|_| {
                    let d = code % m;
                    code /= m;
                    d as u32
                })
                .collect();
            t.relations.iter().zip(&y.relations).all(|(rt, ry)| {
                rt.iter().all(|tup| {
                    ry.contains(&tup.iter().map(|&x| map[x as usize]).collect::<Vec<_>>())
                })
            })
        }) || (n == 0)
    }

    #[test]
    fn parse_round_trip() {
        let s = RelStructure::parse("sig R 2\nelem x y\ntuple R x y\n").unwrap();
        assert_eq!(RelStructure::parse(&s.to_string()).unwrap(), s);
        assert_eq!(s.weight(), 1);
        assert!(RelStructure::parse("sig R 2\nelem x\ntuple R x\n").is_err());
    }

    #[test]
    fn weights() {
        let s = RelStructure::new(vec![], vec!["a".into(), "b".into(), "c".into()]);
        assert_eq!(s.weight(), 3);
        assert_eq!(coloured_cycle(4).weight(), 4);
    }

    #[test]
    fn homs() {
        let c3 = coloured_cycle(3);
        assert!(hom_exists(&c3, &c3, 1000).unwrap().is_some());
        let mut y = c3.clone();
        y.relations[2].clear();
        assert!(hom_exists(&c3, &y, 1000).unwrap().is_none());
        assert!(!brute_hom(&c3, &y));
        let one = RelStructure::new(c3.signature.clone(), vec!["p".into()]);
        assert!(hom_exists(&one, &c3, 10).unwrap().is_some());
    }

    #[test]
    fn consolidated_c2() {
        let mut g = SerreGraph::new(2);
        g.add_edge(0, 1);
        g.add_edge(1, 0);
        let (c, star) = consolidated_structure(&g).unwrap();
        assert_eq!(c.size(), 4);
        assert_eq!(c.tuple_count(), 2);
        assert_eq!(star.size(), 2);
        let r1: Vec<_> = star.relations[1].iter().cloned().collect();
        assert_eq!(r1, vec![vec![0, 1]]);
    }

    #[test]
    fn edge_extension() {
        let s = RelStructure::new(vec![], vec!["x1".into(), "x2".into()]);
        let mut p = AGraph::new(1, 2);
        p.set_edge(0, Letter::pos(0), 1).unwrap();
        let x = ExtensionProblem::new(s, p).unwrap();
        let z2 = EnumGroup::from_permutations(1, 2, &[vec![1, 0]], 10).unwrap();
        let e = extend_by_group(&x, &z2).unwrap();
        assert_eq!(e.structure.size(), 2);
        assert!(e.extends_partials(&x.partials));
        assert!(extend_by_group(&x, &EnumGroup::trivial(1)).is_err());
    }

    #[test]
    fn coset_pair_instance() {
        let c1 = CosetSpec::new(vec![w("aa")], w("a"));
        let c2 = CosetSpec::subgroup(vec![w("aa")]);
        let x = coset_pair_problem(1, &c1, &c2).unwrap();
        let sigma = [coloured_cycle(2)];
        let z2 = EnumGroup::from_permutations(1, 2, &[vec![1, 0]], 10).unwrap();
        let (_, r) = eppa_check(&x, &sigma, &z2, 1 << 16).unwrap();
        assert!(r.passes(), "{r:?}");
        let (_, r) = eppa_check(&x, &sigma, &EnumGroup::trivial(1), 1 << 16).unwrap();
        assert!(!r.extends && !r.induced && !r.sigma_free);
    }
}
