//! Line-oriented input formats. `#` starts a comment everywhere.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::automata::CosetSpec;
use crate::error::{Error, Result};
use crate::graphs::{AGraph, LabelledGraph, SerreGraph};
use crate::groups::{parse_cycles, suitable_group_with, EnumGroup, GroupHandle};
use crate::labellings::{CosetLabelling, WordLabelling};
use crate::words::{Alphabet, Letter, Word};

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

/// Non-empty, comment-stripped lines with 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap().trim();
        (!line.is_empty()).then(|| (i + 1, line.split_whitespace().collect()))
    })
}

fn word(alpha: &Alphabet, s: &str, line: usize) -> Result<Word> {
    alpha.parse_word(s).map_err(|e| Error::format(line, e))
}

fn alphabet(fields: &[&str], line: usize) -> Result<Alphabet> {
    Alphabet::new(fields.iter().copied()).map_err(|e| Error::format(line, e))
}

/// A graph file: vertices by name, positive edges with optional word labels.
pub struct GraphFile {
    pub alphabet: Option<Alphabet>,
    pub vertices: Vec<String>,
    pub edge_ids: Vec<String>,
    pub graph: SerreGraph,
    pub labels: Vec<Option<Word>>,
    pub iota: Option<u32>,
    pub tau: Option<u32>,
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<GraphFile> {
        let mut g = GraphFile {
            alphabet: None,
            vertices: Vec::new(),
            edge_ids: Vec::new(),
            graph: SerreGraph::new(0),
            labels: Vec::new(),
            iota: None,
            tau: None,
        };
        let mut vindex: HashMap<String, u32> = HashMap::new();
        for (ln, f) in lines(text) {
            let err = |m: &str| Error::format(ln, m);
            match f[0] {
                "alphabet" if g.alphabet.is_none() => g.alphabet = Some(alphabet(&f[1..], ln)?),
                "vertex" if f.len() == 2 => {
                    if vindex
                        .insert(f[1].to_string(), g.vertices.len() as u32)
                        .is_some()
                    {
                        return Err(err("duplicate vertex"));
                    }
                    g.vertices.push(f[1].to_string());
                    g.graph.add_vertex();
                }
                "edge" if f.len() == 4 || f.len() == 5 => {
                    if g.edge_ids.iter().any(|e| e == f[1]) {
                        return Err(err("duplicate edge id"));
                    }
                    let v = |n: &str| vindex.get(n).copied().ok_or_else(|| err("unknown vertex"));
                    let (a, b) = (v(f[2])?, v(f[3])?);
                    let label = match f.get(4) {
                        None => None,
                        Some(s) => {
                            let alpha = g
                                .alphabet
                                .as_ref()
                                .ok_or_else(|| err("label before alphabet"))?;
                            Some(word(alpha, s, ln)?)
                        }
                    };
                    g.graph.add_edge(a, b);
                    g.edge_ids.push(f[1].to_string());
                    g.labels.push(label);
                }
                "mark" if f.len() == 3 => {
                    let v = vindex
                        .get(f[2])
                        .copied()
                        .ok_or_else(|| err("unknown vertex"))?;
                    match f[1] {
                        "iota" => g.iota = Some(v),
                        "tau" => g.tau = Some(v),
                        _ => return Err(err("mark must be iota or tau")),
                    }
                }
                _ => return Err(err("unrecognized line")),
            }
        }
        Ok(g)
    }

    pub fn load(path: &Path) -> Result<GraphFile> {
        GraphFile::parse(&read(path)?).map_err(|e| in_file(path, e))
    }

    pub fn alphabet(&self) -> Result<&Alphabet> {
        self.alphabet
            .as_ref()
            .ok_or_else(|| Error::invalid("graph file declares no alphabet"))
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_ids.iter().position(|e| e == id)
    }

    /// Labels subdivided into letter edges, ready for folding.
    pub fn letter_graph(&self) -> Result<(LabelledGraph<Letter>, usize)> {
        let rank = self.alphabet()?.rank();
        let mut out = LabelledGraph::new(self.vertices.len());
        for (i, e) in self.graph.positive_edges().enumerate() {
            let w = self.labels[i]
                .as_ref()
                .ok_or_else(|| Error::invalid(format!("edge {} has no label", self.edge_ids[i])))?;
            let (src, dst) = (self.graph.alpha(e), self.graph.omega(e));
            if w.is_empty() {
                return Err(Error::invalid(format!(
                    "edge {} has an empty label",
                    self.edge_ids[i]
                )));
            }
            let mut cur = src;
            for (k, &x) in w.letters().iter().enumerate() {
                let next = if k + 1 == w.len() {
                    dst
                } else {
                    out.add_vertex()
                };
                out.add_edge(cur, next, x);
                cur = next;
            }
        }
        Ok((out, rank))
    }

    /// The graph as an `A`-graph; every label must be one letter and the
    /// result folded.
    pub fn agraph(&self) -> Result<AGraph> {
        let rank = self.alphabet()?.rank();
        let mut a = AGraph::new(rank, self.vertices.len());
        for (i, e) in self.graph.positive_edges().enumerate() {
            let x = match self.labels[i].as_ref().map(|w| w.letters()) {
                Some([x]) => *x,
                _ => {
                    return Err(Error::invalid(format!(
                        "edge {} needs a single-letter label",
                        self.edge_ids[i]
                    )))
                }
            };
            a.set_edge(self.graph.alpha(e), x, self.graph.omega(e))
                .map_err(|_| {
                    Error::invalid(format!(
                        "edge {} makes the graph unfolded",
                        self.edge_ids[i]
                    ))
                })?;
        }
        a.iota = self.iota;
        a.tau = self.tau;
        Ok(a)
    }
}

pub fn in_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Format { line, msg } => Error::Format {
            line,
            msg: format!("{}: {msg}", path.display()),
        },
        e => e,
    }
}

/// Writes an `A`-graph in the graph file format with vertices `v0, v1, …`.
pub fn format_agraph(g: &AGraph, alpha: &Alphabet) -> String {
    let mut s = String::new();
    writeln!(s, "alphabet {}", alpha.names().join(" ")).unwrap();
    for v in 0..g.num_vertices() {
        writeln!(s, "vertex v{v}").unwrap();
    }
    for (i, (v, x, w)) in g.positive_edges().into_iter().enumerate() {
        writeln!(s, "edge e{i} v{v} v{w} {}", alpha.format_letter(x)).unwrap();
    }
    if let Some(v) = g.iota {
        writeln!(s, "mark iota v{v}").unwrap();
    }
    if let Some(v) = g.tau {
        writeln!(s, "mark tau v{v}").unwrap();
    }
    s
}

pub fn agraph_dot(g: &AGraph, alpha: &Alphabet) -> String {
    let mut s = String::from("digraph G {\n");
    for v in 0..g.num_vertices() {
        let shape = match (Some(v as u32) == g.iota, Some(v as u32) == g.tau) {
            (true, true) => "doubleoctagon",
            (true, false) => "box",
            (false, true) => "doublecircle",
            _ => "circle",
        };
        writeln!(s, "  v{v} [shape={shape}];").unwrap();
    }
    for (v, x, w) in g.positive_edges() {
        writeln!(s, "  v{v} -> v{w} [label=\"{}\"];", alpha.format_letter(x)).unwrap();
    }
    s.push_str("}\n");
    s
}

pub fn labelled_dot(g: &SerreGraph, names: &[String], labels: &[String]) -> String {
    let mut s = String::from("digraph G {\n");
    for name in names {
        writeln!(s, "  \"{name}\";").unwrap();
    }
    for (i, e) in g.positive_edges().enumerate() {
        let (a, b) = (g.alpha(e) as usize, g.omega(e) as usize);
        writeln!(
            s,
            "  \"{}\" -> \"{}\" [label=\"{}\"];",
            names[a], names[b], labels[i]
        )
        .unwrap();
    }
    s.push_str("}\n");
    s
}

/// Named subgroups and cosets.
pub struct SubgroupFile {
    pub alphabet: Alphabet,
    pub entries: Vec<(String, CosetSpec)>,
}

impl SubgroupFile {
    pub fn parse(text: &str) -> Result<SubgroupFile> {
        let mut alpha: Option<Alphabet> = None;
        let mut entries: Vec<(String, CosetSpec)> = Vec::new();
        for (ln, f) in lines(text) {
            let err = |m: &str| Error::format(ln, m);
            match (f[0], f.len()) {
                ("alphabet", n) if n > 1 && alpha.is_none() => alpha = Some(alphabet(&f[1..], ln)?),
                ("subgroup", 2) => {
                    if entries.iter().any(|e| e.0 == f[1]) {
                        return Err(err("duplicate subgroup name"));
                    }
                    entries.push((f[1].to_string(), CosetSpec::subgroup(Vec::new())));
                }
                ("gen" | "rep", 2) => {
                    let a = alpha
                        .as_ref()
                        .ok_or_else(|| err("alphabet must come first"))?;
                    let w = word(a, f[1], ln)?;
                    let cur = &mut entries.last_mut().ok_or_else(|| err("no subgroup open"))?.1;
                    if f[0] == "gen" {
                        cur.gens.push(w);
                    } else {
                        cur.rep = w;
                    }
                }
                _ => return Err(err("unrecognized line")),
            }
        }
        let alphabet = alpha.ok_or_else(|| Error::format(0, "missing alphabet line"))?;
        Ok(SubgroupFile { alphabet, entries })
    }

    pub fn load(path: &Path) -> Result<SubgroupFile> {
        SubgroupFile::parse(&read(path)?).map_err(|e| in_file(path, e))
    }

    pub fn get(&self, name: &str) -> Result<&CosetSpec> {
        self.entries
            .iter()
            .find(|e| e.0 == name)
            .map(|e| &e.1)
            .ok_or_else(|| Error::invalid(format!("no subgroup named {name:?}")))
    }

    /// The named entry, or the only one when no name is given.
    pub fn pick(&self, name: Option<&str>) -> Result<&CosetSpec> {
        match name {
            Some(n) => self.get(n),
            None if self.entries.len() == 1 => Ok(&self.entries[0].1),
            None => Err(Error::invalid("several subgroups in the file; pass --name")),
        }
    }
}

/// `alphabet`, `degree` and one `perm <letter> <cycles>` line per letter.
pub fn parse_perm_file(text: &str, budget: usize) -> Result<(Alphabet, EnumGroup)> {
    let mut alpha: Option<Alphabet> = None;
    let mut degree: Option<usize> = None;
    let mut perms: HashMap<usize, Vec<u32>> = HashMap::new();
    for (ln, f) in lines(text) {
        let err = |m: &str| Error::format(ln, m);
        match f[0] {
            "alphabet" if alpha.is_none() => alpha = Some(alphabet(&f[1..], ln)?),
            "degree" if f.len() == 2 => degree = Some(f[1].parse().map_err(|_| err("bad degree"))?),
            "perm" if f.len() >= 2 => {
                let a = alpha
                    .as_ref()
                    .ok_or_else(|| err("alphabet must come first"))?;
                let d = degree.ok_or_else(|| err("degree must come first"))?;
                let i = a.index_of(f[1]).ok_or_else(|| err("unknown letter"))?;
                let p = parse_cycles(&f[2..].join(" "), d).map_err(|e| err(&e.to_string()))?;
                if perms.insert(i, p).is_some() {
                    return Err(err("letter given twice"));
                }
            }
            _ => return Err(err("unrecognized line")),
        }
    }
    let alpha = alpha.ok_or_else(|| Error::format(0, "missing alphabet line"))?;
    let d = degree.ok_or_else(|| Error::format(0, "missing degree line"))?;
    let identity: Vec<u32> = (0..d as u32).collect();
    let gens: Vec<Vec<u32>> = (0..alpha.rank())
        .map(|i| perms.remove(&i).unwrap_or_else(|| identity.clone()))
        .collect();
    let g = EnumGroup::from_permutations(alpha.rank(), d, &gens, budget)?;
    Ok((alpha, g))
}

pub fn load_perm_file(path: &Path, budget: usize) -> Result<(Alphabet, EnumGroup)> {
    parse_perm_file(&read(path)?, budget).map_err(|e| in_file(path, e))
}

/// A group recipe: `base perm <file>` then `abexp <p>` lines, or `free <alphabet>`.
pub fn load_recipe(path: &Path, budget: usize) -> Result<(Alphabet, GroupHandle)> {
    let text = read(path)?;
    let dir = path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    let mut base: Option<(Alphabet, GroupHandle)> = None;
    let mut exps = Vec::new();
    for (ln, f) in lines(&text) {
        let err = |m: &str| in_file(path, Error::format(ln, m));
        match (f[0], base.is_some()) {
            ("base", false) if f.len() == 3 && f[1] == "perm" => {
                let (a, g) = load_perm_file(&dir.join(f[2]), budget)?;
                base = Some((a, GroupHandle::enumerable(g)));
            }
            ("free", false) if f.len() > 1 => {
                let a = alphabet(&f[1..], ln).map_err(|e| in_file(path, e))?;
                let r = a.rank();
                base = Some((a, GroupHandle::free(r)));
            }
            ("abexp", true) if f.len() == 2 => {
                exps.push(f[1].parse::<u32>().map_err(|_| err("bad exponent"))?)
            }
            _ => return Err(err("unrecognized line")),
        }
    }
    let (alpha, g) = base.ok_or_else(|| in_file(path, Error::format(0, "recipe has no base")))?;
    Ok((alpha, suitable_group_with(&g, &exps)?))
}

pub fn enumerable(g: &GroupHandle, what: &str) -> Result<Arc<EnumGroup>> {
    g.as_enum()
        .cloned()
        .ok_or_else(|| Error::Unsupported(format!("{what} needs an enumerable base group")))
}

/// Word and coset labellings over the edges of a graph file.
pub enum LabellingFile {
    Words(WordLabelling),
    Cosets(CosetLabelling),
}

pub fn parse_labelling(
    text: &str,
    graph: &GraphFile,
    alpha: &Alphabet,
    subgroups: Option<&SubgroupFile>,
) -> Result<LabellingFile> {
    let m = graph.edge_ids.len();
    let mut words: Vec<Option<Word>> = vec![None; m];
    let mut cosets: Vec<Option<CosetSpec>> = vec![None; m];
    for (ln, f) in lines(text) {
        let err = |m: &str| Error::format(ln, m);
        let idx = |id: &str| graph.edge_index(id).ok_or_else(|| err("unknown edge id"));
        match (f[0], f.len()) {
            ("wordlabel", 3) => {
                let i = idx(f[1])?;
                if words[i].replace(word(alpha, f[2], ln)?).is_some() {
                    return Err(err("edge labelled twice"));
                }
            }
            ("cosetlabel", 4) => {
                let i = idx(f[1])?;
                let subs = subgroups.ok_or_else(|| err("coset labels need a subgroup file"))?;
                let h = subs.get(f[2]).map_err(|e| err(&e.to_string()))?;
                let c = CosetSpec::new(h.gens.clone(), word(alpha, f[3], ln)?);
                if cosets[i].replace(c).is_some() {
                    return Err(err("edge labelled twice"));
                }
            }
            _ => return Err(err("unrecognized line")),
        }
    }
    let nw = words.iter().filter(|w| w.is_some()).count();
    let nc = cosets.iter().filter(|c| c.is_some()).count();
    let missing = || Error::format(0, "every edge needs exactly one label of one kind");
    if nw == m && nc == 0 {
        let labels = words.into_iter().map(Option::unwrap).collect();
        Ok(LabellingFile::Words(LabelledGraph::from_graph(
            graph.graph.clone(),
            labels,
        )?))
    } else if nc == m && nw == 0 && m > 0 {
        let labels = cosets.into_iter().map(Option::unwrap).collect();
        Ok(LabellingFile::Cosets(LabelledGraph::from_graph(
            graph.graph.clone(),
            labels,
        )?))
    } else {
        Err(missing())
    }
}

pub fn load_labelling(
    path: &Path,
    graph: &GraphFile,
    alpha: &Alphabet,
    subgroups: Option<&SubgroupFile>,
) -> Result<LabellingFile> {
    parse_labelling(&read(path)?, graph, alpha, subgroups).map_err(|e| in_file(path, e))
}

/// `point <word>`, `vertex <i> <word>` and `edge <i> <word> <letter>` lines
/// describing an `n`-cyclic configuration; pieces are numbered from 1.
pub fn parse_config(
    text: &str,
    alpha: &Alphabet,
    g: &EnumGroup,
) -> Result<crate::groups::ConfigSpec> {
    let mut spec = crate::groups::ConfigSpec {
        vertices: Vec::new(),
        edges: Vec::new(),
        points: Vec::new(),
    };
    let grow = |spec: &mut crate::groups::ConfigSpec, i: usize| {
        while spec.vertices.len() < i {
            spec.vertices.push(Vec::new());
            spec.edges.push(Vec::new());
        }
    };
    for (ln, f) in lines(text) {
        let err = |m: &str| Error::format(ln, m);
        let piece = |s: &str| match s.parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i),
            _ => Err(err("pieces are numbered from 1")),
        };
        match (f[0], f.len()) {
            ("point", 2) => spec.points.push(g.follow(0, &word(alpha, f[1], ln)?)),
            ("vertex", 3) => {
                let i = piece(f[1])?;
                grow(&mut spec, i);
                spec.vertices[i - 1].push(g.follow(0, &word(alpha, f[2], ln)?));
            }
            ("edge", 4) => {
                let i = piece(f[1])?;
                grow(&mut spec, i);
                let a = alpha.index_of(f[3]).ok_or_else(|| err("unknown letter"))?;
                spec.edges[i - 1].push((g.follow(0, &word(alpha, f[2], ln)?), a));
            }
            _ => return Err(err("unrecognized line")),
        }
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let text = "alphabet a b\nvertex p\nvertex q\nedge e0 p q a\nedge e1 q q b\nmark iota p\n";
        let g = GraphFile::parse(text).unwrap();
        let a = g.agraph().unwrap();
        let back = GraphFile::parse(&format_agraph(&a, g.alphabet().unwrap())).unwrap();
        assert_eq!(back.agraph().unwrap().canonical_form(), a.canonical_form());
        assert!(matches!(
            GraphFile::parse("vertex p\nedge e0 p r\n"),
            Err(Error::Format { line: 2, .. })
        ));
    }

    #[test]
    fn subgroups_and_perms() {
        let s = SubgroupFile::parse("alphabet a b\nsubgroup H\ngen aa\ngen b\nrep a\n").unwrap();
        let h = s.pick(None).unwrap();
        assert_eq!(h.gens.len(), 2);
        assert_eq!(h.rep.len(), 1);
        let (_, g) =
            parse_perm_file("alphabet a b\ndegree 4\nperm a (1 2)\nperm b (3 4)\n", 100).unwrap();
        assert_eq!(g.order(), 4);
    }
}
