use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use super::config::{OutputFormat, RunConfig};
use super::files::{self, GraphFile, LabellingFile, SubgroupFile};
use super::{Command, Outcome};
use crate::automata::{
    complete, coset_membership, product_contains, stallings_subgroup, subgroup_basis,
    transition_monoid, CosetSpec,
};
use crate::error::{Error, Result};
use crate::graphs::{fold, AGraph};
use crate::groups::{
    ab_expansion, amalgamation_chain, avoidance_group, avoidance_violation, chain_components_ok,
    detect_coset_cycles, materialize, suitable_group, suitable_group_with, EnumGroup, GroupHandle,
    MMExpansion,
};
use crate::inverse_monoids::InverseMonoid;
use crate::labellings::{
    arborise, build_w_word, coset_commutes, coset_commutes_bounded, klein_counterexample,
    klein_instance, labelling_commutes, relabel_search, rz_separation, verify_identity_54,
    verify_suitable, WordLabelling,
};
use crate::par::Mode;
use crate::relational::{
    coloured_cycle, consolidated_structure, coset_pair_problem, eppa_check, extend_by_group,
    is_induced, ExtensionProblem, RelStructure,
};
use crate::words::{Alphabet, Word};

struct Report {
    text: String,
    failed: bool,
}

impl Report {
    fn new() -> Report {
        Report {
            text: String::new(),
            failed: false,
        }
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        writeln!(self.text, "{key}: {value}").unwrap();
        self
    }

    fn line(&mut self, s: impl std::fmt::Display) -> &mut Self {
        writeln!(self.text, "{s}").unwrap();
        self
    }

    fn raw(&mut self, s: &str) -> &mut Self {
        self.text.push_str(s);
        self
    }

    fn done(self) -> Result<Outcome> {
        Ok(Outcome {
            text: self.text,
            failed: self.failed,
        })
    }
}

fn parse(alpha: &Alphabet, s: &str) -> Result<Word> {
    alpha.parse_word(s)
}

fn graph_report(g: &AGraph, alpha: &Alphabet, cfg: &RunConfig, r: &mut Report) {
    match cfg.format {
        OutputFormat::Dot => {
            r.raw(&files::agraph_dot(g, alpha));
        }
        OutputFormat::Text => {
            r.kv("VERTICES", g.num_vertices())
                .kv("EDGES", g.num_positive_edges())
                .raw(&files::format_agraph(g, alpha));
        }
    }
}

fn load_agraph(path: &Path) -> Result<(Alphabet, AGraph)> {
    let gf = GraphFile::load(path)?;
    let g = gf.agraph()?;
    Ok((gf.alphabet()?.clone(), g))
}

fn load_monoid(path: &Path, cfg: &RunConfig) -> Result<(Alphabet, AGraph, InverseMonoid)> {
    let (alpha, g) = load_agraph(path)?;
    let m = transition_monoid(&g, cfg.max_elements)?;
    Ok((alpha, g, m))
}

fn coset_list(subs: &SubgroupFile, names: &[String]) -> Result<Vec<CosetSpec>> {
    names.iter().map(|n| subs.get(n).cloned()).collect()
}

fn enum_group(path: &Path, cfg: &RunConfig, what: &str) -> Result<(Alphabet, Arc<EnumGroup>)> {
    let (alpha, g) = files::load_recipe(path, cfg.max_elements)?;
    let e = match &g {
        GroupHandle::Enum(e) => e.clone(),
        GroupHandle::Tower(_) => Arc::new(materialize(&g, cfg.max_elements)?),
        GroupHandle::Free { .. } => {
            return Err(Error::Unsupported(format!("{what} needs a finite group")))
        }
    };
    Ok((alpha, e))
}

fn same_alphabet(a: &Alphabet, b: &Alphabet) -> Result<()> {
    if a.names() != b.names() {
        return Err(Error::invalid(format!(
            "alphabets differ: {} versus {}",
            a.names().join(" "),
            b.names().join(" ")
        )));
    }
    Ok(())
}

fn word_labels(l: &WordLabelling, gf: &GraphFile, alpha: &Alphabet, r: &mut Report) {
    for (i, e) in l.graph.positive_edges().enumerate() {
        r.kv(
            &format!("EDGE {}", gf.edge_ids[i]),
            alpha.format_word(l.label(e)),
        );
    }
}

fn load_word_labelling(
    graph: &Path,
    labels: &Path,
    alpha: &Alphabet,
) -> Result<(GraphFile, WordLabelling)> {
    let gf = GraphFile::load(graph)?;
    match files::load_labelling(labels, &gf, alpha, None)? {
        LabellingFile::Words(l) => Ok((gf, l)),
        LabellingFile::Cosets(_) => Err(Error::invalid("expected word labels")),
    }
}

fn set_literal(alpha: &Alphabet, s: &str) -> Result<u32> {
    let w = parse(alpha, s)?;
    Ok(w.letters().iter().fold(0u32, |m, x| m | 1 << x.index()))
}

pub fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Outcome> {
    let mut r = Report::new();
    let budget = cfg.max_elements;
    match cmd {
        Command::Fold { graph } => {
            let gf = GraphFile::load(graph)?;
            let (lg, rank) = gf.letter_graph()?;
            let (mut g, vmap) = fold(&lg, rank);
            g.iota = gf.iota.map(|v| vmap[v as usize]);
            g.tau = gf.tau.map(|v| vmap[v as usize]);
            graph_report(&g, gf.alphabet()?, cfg, &mut r);
        }
        Command::Stallings { subgroups, name } => {
            let subs = SubgroupFile::load(subgroups)?;
            let h = subs.pick(name.as_deref())?;
            let mut g = stallings_subgroup(subs.alphabet.rank(), &h.gens);
            g.tau = g.iota;
            if cfg.format == OutputFormat::Text {
                r.kv("RANK", subgroup_basis(&g).len());
            }
            graph_report(&g, &subs.alphabet, cfg, &mut r);
        }
        Command::Coset {
            subgroups,
            name,
            rep,
        } => {
            let subs = SubgroupFile::load(subgroups)?;
            let mut c = subs.pick(name.as_deref())?.clone();
            if let Some(w) = rep {
                c.rep = parse(&subs.alphabet, w)?;
            }
            graph_report(&c.graph(subs.alphabet.rank()), &subs.alphabet, cfg, &mut r);
        }
        Command::Member {
            subgroup,
            name,
            word,
        } => {
            let subs = SubgroupFile::load(subgroup)?;
            let c = subs.pick(name.as_deref())?;
            let w = parse(&subs.alphabet, word)?;
            r.line(coset_membership(&c.graph(subs.alphabet.rank()), &w));
        }
        Command::Basis { subgroups, name } => {
            let subs = SubgroupFile::load(subgroups)?;
            let h = subs.pick(name.as_deref())?;
            let basis = subgroup_basis(&stallings_subgroup(subs.alphabet.rank(), &h.gens));
            r.kv("RANK", basis.len());
            for w in &basis {
                r.kv("GEN", subs.alphabet.format_word(w));
            }
        }
        Command::Monoid { graph, list } => {
            let (alpha, g, m) = load_monoid(graph, cfg)?;
            r.kv("CARRIER", g.num_vertices())
                .kv("ORDER", m.order())
                .kv("IDEMPOTENTS", m.idempotents().len());
            if *list {
                for x in m.elements() {
                    let tag = if m.is_idempotent(x) {
                        " idempotent"
                    } else {
                        ""
                    };
                    r.kv(
                        &format!("ELEMENT {x}"),
                        format!("{}{tag}", alpha.format_word(m.word(x))),
                    );
                }
            }
        }
        Command::Schutz { graph, word } => {
            let (alpha, _, m) = load_monoid(graph, cfg)?;
            let x = m.evaluate(&parse(&alpha, word)?);
            let (sg, class) = m.schutzenberger_graph(x);
            if cfg.format == OutputFormat::Text {
                r.kv("ELEMENT", alpha.format_word(m.word(x)));
                for (i, &y) in class.iter().enumerate() {
                    r.kv(&format!("VERTEX v{i}"), alpha.format_word(m.word(y)));
                }
            }
            graph_report(&sg, &alpha, cfg, &mut r);
        }
        Command::Phi { graph, word } => {
            let (alpha, _, m) = load_monoid(graph, cfg)?;
            let c = m.canonical_coset(m.evaluate(&parse(&alpha, word)?));
            r.kv("GENERATORS", c.gens.len());
            for w in &c.gens {
                r.kv("GEN", alpha.format_word(w));
            }
            r.kv("REP", alpha.format_word(&c.rep));
        }
        Command::Complete { graph } => {
            let (alpha, g) = load_agraph(graph)?;
            let (cg, grp) = complete(&g, budget)?;
            let m = transition_monoid(&g, budget)?;
            r.kv("GROUP_ORDER", grp.order())
                .kv("EXTENDS", m.extends(&grp, budget)?);
            graph_report(&cg, &alpha, cfg, &mut r);
        }
        Command::Product {
            subgroups,
            names,
            word,
        } => {
            let subs = SubgroupFile::load(subgroups)?;
            let cosets = coset_list(&subs, names)?;
            let w = parse(&subs.alphabet, word)?;
            r.kv(
                "CONTAINS",
                product_contains(subs.alphabet.rank(), &cosets, &w),
            );
        }
        Command::RzSeparate {
            subgroups,
            names,
            word,
            p,
            verify_len,
            max_order,
        } => {
            let subs = SubgroupFile::load(subgroups)?;
            let cosets = coset_list(&subs, names)?;
            let w = parse(&subs.alphabet, word)?;
            let rank = subs.alphabet.rank();
            let (_, rep) = rz_separation(
                rank,
                &cosets,
                &w,
                *p,
                *verify_len,
                max_order.unwrap_or(budget),
                cfg.max_nodes,
            )?;
            r.kv("MONOID_ORDER", rep.monoid_order)
                .kv("BASE_ORDER", rep.base_order)
                .kv("DEPTH", rep.depth);
            match rep.mode {
                crate::labellings::RzMode::Exact { order } => {
                    r.kv("MODE", format!("exact (order {order})"))
                }
                crate::labellings::RzMode::Bounded => r.kv("MODE", "bounded"),
            };
            r.kv("VERIFY_LEN", rep.verify_len)
                .kv("PRODUCTS_CHECKED", rep.products_checked)
                .kv("VIOLATIONS", rep.violations);
            if let Some(e) = rep.exact_separated {
                r.kv("EXACT_SEPARATED", e);
            }
            r.kv("SEPARATED", rep.separated());
            r.failed = !rep.separated();
        }
        Command::Cayley { group } => {
            let (alpha, g) = enum_group(group, cfg, "cayley")?;
            let mut cg = g.cayley_graph();
            cg.iota = Some(0);
            if cfg.format == OutputFormat::Text {
                r.kv("ORDER", g.order());
            }
            graph_report(&cg, &alpha, cfg, &mut r);
        }
        Command::Abexp {
            group,
            p,
            materialize: mat,
        } => {
            let (_, g) = files::load_recipe(group, budget)?;
            let h = ab_expansion(&g, *p)?;
            let t = h.as_tower().expect("expansions are towers");
            r.kv("DEPTH", t.depth())
                .kv("EXPONENTS", join(&t.exponents()))
                .kv("BASE_ORDER", t.base().order());
            if *mat {
                r.kv("ORDER", materialize(&h, budget)?.order());
            }
        }
        Command::Materialize { group } => {
            let (_, g) = files::load_recipe(group, budget)?;
            let e = materialize(&g, budget)?;
            r.kv("KIND", g.kind()).kv("ORDER", e.order());
        }
        Command::Mm {
            group,
            word,
            enumerate,
        } => {
            let (alpha, q) = enum_group(group, cfg, "mm")?;
            let mm = MMExpansion::new(q.clone());
            if let Some(w) = word {
                let x = mm.eval(&parse(&alpha, w)?);
                r.kv("POINT", alpha.format_word(q.word(x.point)));
                let edges: Vec<String> = mm
                    .edge_list(&x)
                    .iter()
                    .map(|&(g, a)| format!("({}, {})", alpha.format_word(q.word(g)), alpha.name(a)))
                    .collect();
                r.kv("EDGES", edges.len()).kv("EDGE_SET", edges.join(" "));
                r.kv("IDEMPOTENT", mm.is_idempotent(&x));
            }
            if *enumerate {
                r.kv("ORDER", mm.enumerate(budget)?.len());
            }
            if word.is_none() && !enumerate {
                return Err(Error::invalid("pass --word or --enumerate"));
            }
        }
        Command::Suitable {
            group,
            p,
            n,
            k,
            exponents,
            materialize: mat,
        } => {
            let (_, g) = files::load_recipe(group, budget)?;
            let h = match exponents {
                Some(e) => suitable_group_with(&g, e)?,
                None => suitable_group(&g, *p, *n, *k)?,
            };
            let t = h
                .as_tower()
                .ok_or_else(|| Error::invalid("no expansions requested"))?;
            r.kv("DEPTH", t.depth())
                .kv("EXPONENTS", join(&t.exponents()));
            if *mat {
                r.kv("ORDER", materialize(&h, budget)?.order());
            }
        }
        Command::Avoid {
            group,
            configuration,
        } => {
            let (alpha, g) = enum_group(group, cfg, "avoid")?;
            let spec = files::parse_config(&files::read(configuration)?, &alpha, &g)
                .map_err(|e| files::in_file(configuration, e))?;
            let h = avoidance_group(&g, &spec, budget)?;
            r.kv("N", spec.len()).kv("ORDER", h.order());
            match avoidance_violation(&h, &g, &spec, cfg.max_len)? {
                None => {
                    r.kv(
                        "VIOLATION",
                        format!("none up to path length {}", cfg.max_len),
                    );
                }
                Some(ws) => {
                    let ws: Vec<String> = ws.iter().map(|w| alpha.format_word(w)).collect();
                    r.kv("VIOLATION", ws.join(" · "));
                    r.failed = true;
                }
            }
        }
        Command::Chain {
            group,
            subsets,
            glue,
        } => {
            let (alpha, h) = enum_group(group, cfg, "chain")?;
            let masks = subsets
                .iter()
                .map(|s| set_literal(&alpha, s))
                .collect::<Result<Vec<_>>>()?;
            let points = glue
                .iter()
                .map(|s| Ok(h.follow(0, &parse(&alpha, s)?)))
                .collect::<Result<Vec<_>>>()?;
            let chain = amalgamation_chain(&h, &masks, &points)?;
            let (cosets, chains, bad) = chain_components_ok(&h, &chain, cfg.max_nodes)?;
            r.kv("VERTICES", chain.graph.num_vertices())
                .kv("EDGES", chain.graph.num_positive_edges())
                .kv("COSET_COMPONENTS", cosets)
                .kv("CHAIN_COMPONENTS", chains)
                .kv("UNMATCHED_COMPONENTS", bad);
            r.failed = bad > 0;
        }
        Command::CosetCycles {
            group,
            n,
            max_report,
        } => {
            let (alpha, g) = enum_group(group, cfg, "coset-cycles")?;
            let rep = detect_coset_cycles(&g, *n, *max_report, cfg.max_nodes)?;
            for &(len, count) in &rep.counts {
                r.kv(&format!("CYCLES_LENGTH_{len}"), count);
            }
            r.kv("TOTAL", rep.total()).kv("TRUNCATED", rep.truncated);
            for c in &rep.cycles {
                let parts: Vec<String> = c
                    .subsets
                    .iter()
                    .zip(&c.etas)
                    .map(|(&s, &eta)| {
                        let letters: String = (0..alpha.rank())
                            .filter(|i| s >> i & 1 == 1)
                            .map(|i| alpha.name(i))
                            .collect::<Vec<_>>()
                            .join("");
                        format!("{}[{}]", alpha.format_word(g.word(eta)), letters)
                    })
                    .collect();
                r.kv("CYCLE", parts.join(" "));
            }
        }
        Command::LabelCheck {
            graph,
            labels,
            group,
        } => {
            let (alpha, g) = files::load_recipe(group, budget)?;
            let (_, l) = load_word_labelling(graph, labels, &alpha)?;
            r.kv("GROUP", g.kind())
                .kv("COMMUTES", labelling_commutes(&l, &g));
        }
        Command::CosetCheck {
            graph,
            labels,
            subgroups,
            group,
        } => {
            let (alpha, g) = files::load_recipe(group, budget)?;
            let subs = SubgroupFile::load(subgroups)?;
            same_alphabet(&alpha, &subs.alphabet)?;
            let gf = GraphFile::load(graph)?;
            let l = match files::load_labelling(labels, &gf, &alpha, Some(&subs))? {
                LabellingFile::Cosets(l) => l,
                LabellingFile::Words(_) => return Err(Error::invalid("expected coset labels")),
            };
            let v = match coset_commutes(&l, &g, cfg.max_nodes) {
                Err(Error::Unsupported(_)) if matches!(g, GroupHandle::Free { .. }) => {
                    coset_commutes_bounded(&l, alpha.rank(), cfg.max_len, cfg.max_nodes)?
                }
                other => other?,
            };
            r.kv("COMMUTES", v.commutes).kv("EXACT", v.exact);
            if !v.exact && !v.commutes {
                r.kv(
                    "BOUND",
                    format!("coset elements of length at most {}", cfg.max_len),
                );
            }
            if let Some(w) = &v.witness {
                word_labels(w, &gf, &alpha, &mut r);
            }
        }
        Command::Arborise { monoid, factors } => {
            let (alpha, _, m) = load_monoid(monoid, cfg)?;
            let us = factors
                .iter()
                .map(|s| parse(&alpha, s))
                .collect::<Result<Vec<_>>>()?;
            let t = arborise(&us, &m)?;
            let ok = t.check(&us, &m);
            r.kv("FACTORS", us.len())
                .kv("TREE_VERTICES", t.tree.graph.num_vertices())
                .kv("DIAMETER", t.diameter())
                .kv("DIAMETER_BOUND", us.len().saturating_sub(1));
            for i in 0..us.len() {
                r.kv(&format!("PATH {i}"), alpha.format_word(&t.path_word(i)));
            }
            for (i, w) in t.relabelling(&us).iter().enumerate() {
                r.kv(&format!("RELABEL {i}"), alpha.format_word(w));
            }
            r.kv("CHECK", if ok { "PASS" } else { "FAIL" });
            r.failed = !ok;
        }
        Command::Relabel {
            graph,
            labels,
            monoid,
            group,
        } => {
            let (alpha, _, m) = load_monoid(monoid, cfg)?;
            let (gf, l) = load_word_labelling(graph, labels, &alpha)?;
            let h = match group {
                Some(p) => {
                    let (a2, h) = files::load_recipe(p, budget)?;
                    same_alphabet(&alpha, &a2)?;
                    Some(h)
                }
                None => None,
            };
            match relabel_search(&l, &m, h.as_ref(), alpha.rank(), cfg.max_len, cfg.max_nodes)? {
                Some(u) => {
                    r.kv("RELABELLING", "found");
                    word_labels(&u, &gf, &alpha, &mut r);
                }
                None => {
                    r.kv("RELABELLING", format!("none up to length {}", cfg.max_len));
                    r.failed = true;
                }
            }
        }
        Command::AshVerify {
            monoid,
            graph,
            group,
            label_len,
            relabel_len,
            strengthened,
            t,
            m,
        } => match monoid {
            None => ash_klein(*t, m, *relabel_len, strengthened.is_some(), cfg, &mut r)?,
            Some(mpath) => {
                let (alpha, _, mon) = load_monoid(mpath, cfg)?;
                let e = GraphFile::load(
                    graph
                        .as_deref()
                        .ok_or_else(|| Error::invalid("--graph is required"))?,
                )?;
                let gpath = group
                    .as_deref()
                    .ok_or_else(|| Error::invalid("--group is required"))?;
                let (a2, g) = files::load_recipe(gpath, budget)?;
                same_alphabet(&alpha, &a2)?;
                let s = match strengthened {
                    Some(Some(p)) => Some(files::load_recipe(p, budget)?.1),
                    Some(None) => {
                        return Err(Error::invalid("--strengthened needs a group recipe here"))
                    }
                    None => None,
                };
                let rep = verify_suitable(
                    &mon,
                    &e.graph,
                    &g,
                    *label_len,
                    *relabel_len,
                    s.as_ref(),
                    Mode::default(),
                    cfg.max_nodes,
                )?;
                r.kv("LABEL_LEN", rep.label_len)
                    .kv("RELABEL_LEN", rep.relabel_len)
                    .kv("STRENGTHENED", rep.strengthened)
                    .kv("LABELLINGS", rep.labellings)
                    .kv("COMMUTING", rep.commuting)
                    .kv("VERIFIED", rep.verified)
                    .kv("FAILURES", rep.failure_count);
                for f in &rep.failures {
                    let ws: Vec<String> = f
                        .positive_labels()
                        .iter()
                        .map(|w| alpha.format_word(w))
                        .collect();
                    r.kv("FAILURE", ws.join(" "));
                }
                r.kv(
                    "SUITABLE",
                    if rep.is_verified() {
                        "verified within bounds"
                    } else {
                        "FAIL"
                    },
                );
                r.failed = !rep.is_verified();
            }
        },
        Command::WWord { t, m } => {
            let xyz = Alphabet::new(["x", "y", "z"])?;
            let g = |i| Word::letter(crate::words::Letter::pos(i));
            let w = build_w_word(*t, m, &g(0), &g(1), &g(2))?;
            let w1 = build_w_word(*t, m, &Word::empty(), &g(1), &g(2))?;
            r.kv("W", xyz.format_word(&w))
                .kv("W_X1", xyz.format_word(&w1))
                .kv("LENGTH", w.len());
        }
        Command::Lemma54 { t, m } => {
            let rep = verify_identity_54(*t, m)?;
            r.line(rep.line());
            r.kv("BASE_ORDER", rep.base_order).kv("DEPTH", rep.depth);
            r.failed = !(rep.identity_holds && rep.nontrivial_holds);
        }
        Command::Klein { t, m, bound_len } => {
            if *t != m.len() {
                return Err(Error::invalid("--m needs exactly t exponents"));
            }
            let rep = klein_counterexample(m, *bound_len, cfg.max_nodes)?;
            let k = klein_instance(m)?;
            let ab = Alphabet::standard(2);
            r.kv("U1", ab.format_word(&k.u1))
                .kv("U2", ab.format_word(&k.u2))
                .kv("B_ORDER", rep.b_order);
            for l in rep.lines() {
                r.line(l);
            }
            r.failed = !rep.all_pass();
        }
        Command::Structure { file, consolidated } => {
            if let Some(p) = file {
                let s = RelStructure::parse(&files::read(p)?).map_err(|e| files::in_file(p, e))?;
                r.kv("SIZE", s.size())
                    .kv("SYMBOLS", s.signature.len())
                    .kv("TUPLES", s.tuple_count())
                    .kv("RELATION_FREE", s.relation_free().len())
                    .kv("WEIGHT", s.weight());
            }
            if let Some(p) = consolidated {
                let gf = GraphFile::load(p)?;
                let (c, star) = consolidated_structure(&gf.graph)?;
                r.line("# C")
                    .raw(&c.to_string())
                    .line("# C*")
                    .raw(&star.to_string());
            }
        }
        Command::Extend {
            structure,
            partials,
            group,
        } => {
            let (alpha, g) = enum_group(group, cfg, "extend")?;
            let x = load_problem(structure, partials, &alpha)?;
            let ext = extend_by_group(&x, &g)?;
            r.kv("GROUP_ORDER", g.order())
                .kv("SIZE", ext.structure.size())
                .kv("INDUCED", is_induced(&x.structure, &ext))
                .kv("AUTOMORPHISMS", ext.actions_are_automorphisms());
            r.raw(&ext.structure.to_string());
        }
        Command::Eppa {
            structure,
            partials,
            group,
            sigma,
            subgroups,
            names,
            trivial,
        } => {
            let (x, sig, g, alpha) = match subgroups {
                Some(sp) => {
                    let subs = SubgroupFile::load(sp)?;
                    let cs = coset_list(&subs, names)?;
                    if cs.len() != 2 {
                        return Err(Error::invalid("the coset instance takes two names"));
                    }
                    let rank = subs.alphabet.rank();
                    let x = coset_pair_problem(rank, &cs[0], &cs[1])?;
                    let g = if *trivial {
                        Arc::new(EnumGroup::trivial(rank))
                    } else if let Some(gp) = group {
                        enum_group(gp, cfg, "eppa")?.1
                    } else {
                        let (h, _) =
                            rz_separation(rank, &cs, &Word::empty(), 2, 3, budget, cfg.max_nodes)?;
                        match h {
                            GroupHandle::Enum(e) => e,
                            _ => {
                                return Err(Error::budget_hint(
                                    "rz group did not materialize",
                                    budget,
                                ))
                            }
                        }
                    };
                    (x, vec![coloured_cycle(2)], g, subs.alphabet.clone())
                }
                None => {
                    let sp = structure
                        .as_deref()
                        .ok_or_else(|| Error::invalid("--structure is required"))?;
                    let pp = partials
                        .as_deref()
                        .ok_or_else(|| Error::invalid("--partials is required"))?;
                    let gpath = group
                        .as_deref()
                        .ok_or_else(|| Error::invalid("--group is required"))?;
                    let (alpha, g) = if *trivial {
                        let gf = GraphFile::load(pp)?;
                        let a = gf.alphabet()?.clone();
                        let r = a.rank();
                        (a, Arc::new(EnumGroup::trivial(r)))
                    } else {
                        enum_group(gpath, cfg, "eppa")?
                    };
                    let x = load_problem(sp, pp, &alpha)?;
                    let sig = sigma
                        .iter()
                        .map(|p| {
                            RelStructure::parse(&files::read(p)?).map_err(|e| files::in_file(p, e))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    (x, sig, g, alpha)
                }
            };
            let (_, rep) = eppa_check(&x, &sig, &g, cfg.max_nodes)?;
            r.kv("GROUP_ORDER", g.order())
                .kv("EXTENSION_SIZE", rep.size)
                .kv("EXTENDS", rep.extends);
            if let Some(w) = &rep.violation {
                r.kv("VIOLATION", alpha.format_word(w));
            }
            r.kv("INDUCED", rep.induced)
                .kv("SIGMA_FREE", rep.sigma_free)
                .kv("AUTOMORPHISMS", rep.automorphisms)
                .kv("EPPA", if rep.passes() { "PASS" } else { "FAIL" });
            r.failed = !rep.passes();
        }
        Command::ExportDot { graph } => {
            let gf = GraphFile::load(graph)?;
            let labels: Vec<String> = gf
                .labels
                .iter()
                .map(|l| match (l, &gf.alphabet) {
                    (Some(w), Some(a)) => a.format_word(w),
                    _ => String::new(),
                })
                .collect();
            r.raw(&files::labelled_dot(&gf.graph, &gf.vertices, &labels));
        }
    }
    r.done()
}

fn join(xs: &[u32]) -> String {
    xs.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn load_problem(structure: &Path, partials: &Path, alpha: &Alphabet) -> Result<ExtensionProblem> {
    let s =
        RelStructure::parse(&files::read(structure)?).map_err(|e| files::in_file(structure, e))?;
    let gf = GraphFile::load(partials)?;
    same_alphabet(alpha, gf.alphabet()?)?;
    let g = gf.agraph()?;
    if gf.vertices.len() != s.size() {
        return Err(Error::invalid(
            "partials must name every element of the structure",
        ));
    }
    let pos: Vec<u32> = gf
        .vertices
        .iter()
        .map(|n| {
            s.names
                .iter()
                .position(|m| m == n)
                .map(|i| i as u32)
                .ok_or_else(|| Error::invalid(format!("partials vertex {n} is not an element")))
        })
        .collect::<Result<_>>()?;
    let mut p = AGraph::new(alpha.rank(), s.size());
    for (v, x, w) in g.positive_edges() {
        p.set_edge(pos[v as usize], x, pos[w as usize])?;
    }
    ExtensionProblem::new(s, p)
}

fn ash_klein(
    t: usize,
    m: &[u32],
    relabel_len: usize,
    strengthened: bool,
    cfg: &RunConfig,
    r: &mut Report,
) -> Result<()> {
    if t != m.len() {
        return Err(Error::invalid("--m needs exactly t exponents"));
    }
    let k = klein_instance(m)?;
    let l = k.labelling();
    let ab = Alphabet::standard(2);
    let h = GroupHandle::Tower(k.h.clone());
    r.kv("INSTANCE", format!("klein t={t} m={}", join(m)))
        .kv("U1", ab.format_word(&k.u1))
        .kv("U2", ab.format_word(&k.u2))
        .kv("H_COMMUTES", labelling_commutes(&l, &h))
        .kv("STRENGTHENED", strengthened)
        .kv("RELABEL_LEN", relabel_len);
    let target = if strengthened { Some(&h) } else { None };
    let found = relabel_search(&l, &k.mm, target, 2, relabel_len, cfg.max_nodes)?;
    match &found {
        Some(u) => {
            let ws: Vec<String> = u
                .positive_labels()
                .iter()
                .map(|w| ab.format_word(w))
                .collect();
            r.kv("RELABELLING", ws.join(" "));
        }
        None => {
            r.kv("RELABELLING", format!("none up to length {relabel_len}"));
        }
    }
    if strengthened {
        let rep = klein_counterexample(m, relabel_len, cfg.max_nodes)?;
        for l in rep.lines() {
            r.line(l);
        }
        let absent = found.is_none() && rep.all_pass();
        r.kv(
            "SUITABLE",
            if absent {
                "FAIL (strengthened relabelling absent: bounded search and b-power argument)"
            } else {
                "inconclusive"
            },
        );
    }
    r.failed = found.is_none();
    Ok(())
}

impl Error {
    fn budget_hint(what: &'static str, limit: usize) -> Error {
        Error::Budget {
            what,
            limit,
            reached: limit,
        }
    }
}
