use std::path::PathBuf;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut full = vec!["invexp"];
    full.extend_from_slice(args);
    let code = invexp::cli::run_with(full, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn member_prints_a_bare_verdict() {
    let h = data("h.sub");
    assert_eq!(
        run(&["member", "--subgroup", &h, "--word", "a"]),
        (0, "false\n".into(), String::new())
    );
    assert_eq!(
        run(&["member", "--subgroup", &h, "--word", "a'a'"]).1,
        "true\n"
    );
}

#[test]
fn single_edge_monoid() {
    let (code, out, _) = run(&["monoid", "--graph", &data("edge.graph")]);
    assert_eq!(code, 0);
    assert!(out.contains("ORDER: 6\n"), "{out}");
    assert!(out.contains("IDEMPOTENTS: 4\n"), "{out}");
}

#[test]
fn product_of_letter_subgroups() {
    let c = data("cosets.sub");
    assert_eq!(
        run(&[
            "product",
            "--subgroups",
            &c,
            "--names",
            "A,B",
            "--word",
            "ba"
        ])
        .1,
        "CONTAINS: false\n"
    );
    assert_eq!(
        run(&[
            "product",
            "--subgroups",
            &c,
            "--names",
            "A,B",
            "--word",
            "a'b"
        ])
        .1,
        "CONTAINS: true\n"
    );
}

#[test]
fn commutator_identity_line() {
    let (code, out, _) = run(&["lemma54", "--t", "2", "--m", "2,2"]);
    assert_eq!(code, 0);
    assert!(
        out.starts_with("identity(1): holds; nontrivial(2): holds\n"),
        "{out}"
    );
}

#[test]
fn klein_checks_all_pass() {
    let (code, out, _) = run(&["klein", "--t", "1", "--m", "2"]);
    assert_eq!(code, 0);
    assert_eq!(
        out.lines().filter(|l| l.starts_with("PASS ")).count(),
        4,
        "{out}"
    );
    assert!(!out.contains("FAIL"), "{out}");
}

#[test]
fn strengthened_relabelling_is_absent() {
    let (code, out, _) = run(&["ash-verify", "--strengthened"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("RELABELLING: none up to length 6\n"), "{out}");
    assert!(out.contains("SUITABLE: FAIL"), "{out}");
    let (code, out, _) = run(&["ash-verify"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn separation_and_extension() {
    let c = data("cosets.sub");
    let (code, out, _) = run(&[
        "rz-separate",
        "--subgroups",
        &c,
        "--names",
        "A,B",
        "--word",
        "ba",
    ]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = run(&[
        "rz-separate",
        "--subgroups",
        &c,
        "--names",
        "A,B",
        "--word",
        "ab",
    ]);
    assert_eq!(code, 2, "{out}");
    let p = data("pair.sub");
    let (code, out, _) = run(&["eppa", "--subgroups", &p, "--names", "H1,H2"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = run(&["eppa", "--subgroups", &p, "--names", "H1,H2", "--trivial"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("EXTENDS: false"), "{out}");
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("invexp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.sub");
    std::fs::write(&bad, "alphabet a b\nsubgroup H\ngen a%\n").unwrap();
    let (code, _, err) = run(&["member", "--subgroup", bad.to_str().unwrap(), "--word", "a"]);
    assert_eq!(code, 3);
    assert!(err.contains("line 3"), "{err}");
    let (code, _, err) = run(&[
        "--max-elements",
        "3",
        "monoid",
        "--graph",
        &data("edge.graph"),
    ]);
    assert_eq!(code, 4, "{err}");
    assert_eq!(run(&["member", "--word", "a"]).0, 2);
    assert_eq!(run(&["no-such-command"]).0, 2);
    let (code, _, err) = run(&[
        "monoid",
        "--graph",
        dir.join("missing.graph").to_str().unwrap(),
    ]);
    assert_eq!(code, 2, "{err}");
    let cfg = dir.join("bad.toml");
    std::fs::write(&cfg, "max_len = 4\nbogus = 1\n").unwrap();
    let (code, _, err) = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "lemma54",
        "--t",
        "1",
        "--m",
        "2",
    ]);
    assert_eq!(code, 3, "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    let g = data("edge.graph");
    let once = run(&["monoid", "--graph", &g, "--list"]);
    assert_eq!(once, run(&["monoid", "--graph", &g, "--list"]));
    let k = run(&["klein", "--t", "2", "--m", "2,2"]);
    assert_eq!(k, run(&["klein", "--t", "2", "--m", "2,2"]));
    let dot = run(&[
        "stallings",
        "--subgroups",
        &data("h.sub"),
        "--format",
        "dot",
    ]);
    assert_eq!(dot.0, 0);
    assert!(dot.1.starts_with("digraph"), "{}", dot.1);
    assert_eq!(
        dot,
        run(&[
            "stallings",
            "--subgroups",
            &data("h.sub"),
            "--format",
            "dot"
        ])
    );
}
