use std::path::Path;
use std::process::{Command, Output};

fn contmodel(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_contmodel"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const EXAMPLE: &str = "min(P, Q, 1 -. min(P, Q))";

fn example_factors(dir: &Path, r: &str) {
    let factor = |p: &str, q: &str| {
        format!("vocabulary\npredicate P 0\npredicate Q 0\nuniverse 1\nP = {p}\nQ = {q}\n")
    };
    std::fs::write(dir.join("m1.gst"), factor(r, "0")).unwrap();
    std::fs::write(dir.join("m2.gst"), factor("0", r)).unwrap();
}

#[test]
fn check_reports_the_example_violation() {
    let dir = tempfile::tempdir().unwrap();
    for r in ["1/4", "1/2"] {
        example_factors(dir.path(), r);
        let o = contmodel(
            &[
                "check",
                "--formula",
                EXAMPLE,
                "--in",
                "m1.gst",
                "m2.gst",
                "--format",
                "json",
            ],
            dir.path(),
        );
        assert_eq!(o.status.code(), Some(1));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["product_value"], r);
        assert_eq!(v["factor_values"], serde_json::json!(["0", "0"]));
        assert_eq!(v["verdict"], "violated");
        assert_eq!(v["epsilon"], "0");
    }
}

#[test]
fn check_passes_a_conditional_sentence() {
    let dir = tempfile::tempdir().unwrap();
    example_factors(dir.path(), "1/2");
    let o = contmodel(
        &[
            "check",
            "--formula",
            "max(P, Q)",
            "--in",
            "m1.gst",
            "m2.gst",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("verdict: preserved"));
}

#[test]
fn classify_emits_flags_and_paths() {
    let dir = tempfile::tempdir().unwrap();
    let o = contmodel(
        &["classify", "--formula", "P +. Q", "--format", "json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["conditional"]["holds"], false);
    assert!(v["conditional"]["violation"].is_array());
    assert_eq!(v["restricted"]["holds"], true);

    std::fs::write(dir.path().join("theta.txt"), "forall x . (~P(x) | Q(x))").unwrap();
    let o = contmodel(
        &["classify", "--logic", "fo", "--formula", "theta.txt"],
        dir.path(),
    );
    assert_eq!(stdout(&o).trim(), "horn");
}

#[test]
fn translate_and_parse() {
    let dir = tempfile::tempdir().unwrap();
    let o = contmodel(
        &["translate", "--formula", "exists x . (P(x) & ~Q)"],
        dir.path(),
    );
    assert_eq!(stdout(&o).trim(), "inf x . max(P(x), 1 -. Q)");
    let o = contmodel(
        &["parse", "--vocab", "predicate P 1", "sup x . P(x)"],
        dir.path(),
    );
    assert!(stdout(&o).starts_with("sup x . P(x)"));
    let o = contmodel(&["parse", "--vocab", "predicate P 1", "P"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn down_up_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let m = "vocabulary\npredicate P 1\nuniverse 2\nP 0 = 1/4\nP 1 = 1\n";
    std::fs::write(dir.path().join("m.gst"), m).unwrap();
    let o = contmodel(
        &["down", "--grid", "2", "--in", "m.gst", "--out", "k.fst"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let k = std::fs::read_to_string(dir.path().join("k.fst")).unwrap();
    assert!(
        k.contains("P_le_1_4 0 = true")
            && k.contains("P_le_0 0 = false")
            && k.contains("P_le_3_4 1 = false")
    );
    let o = contmodel(
        &["up", "--grid", "2", "--in", "k.fst", "--out", "back.gst"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(dir.path().join("back.gst")).unwrap(),
        m
    );
}

#[test]
fn down_rejects_unreduced_input() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("m.gst"),
        "vocabulary\npredicate P 1\nuniverse 2\nP 0 = 0\nP 1 = 0\n",
    )
    .unwrap();
    let o = contmodel(&["down", "--in", "m.gst"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn products_of_each_kind() {
    let dir = tempfile::tempdir().unwrap();
    example_factors(dir.path(), "1/2");
    let o = contmodel(
        &[
            "product", "--kind", "reduced", "--filter", "kernel=1", "--in", "m1.gst", "m2.gst",
        ],
        dir.path(),
    );
    assert!(stdout(&o).contains("P = 0\nQ = 1/2"), "{}", stdout(&o));
    let fo = |p: &str, q: &str| {
        format!("vocabulary\npredicate P 0\npredicate Q 0\nuniverse 1\nP = {p}\nQ = {q}\n")
    };
    std::fs::write(dir.path().join("k1.fst"), fo("true", "false")).unwrap();
    std::fs::write(dir.path().join("k2.fst"), fo("false", "true")).unwrap();
    let o = contmodel(
        &[
            "product", "--kind", "fo", "--in", "k1.fst", "k2.fst", "--out", "k.fst",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let k = std::fs::read_to_string(dir.path().join("k.fst")).unwrap();
    assert!(k.contains("P = false\nQ = false"));
    let o = contmodel(
        &["eval", "--logic", "fo", "--in", "k.fst", "P | Q"],
        dir.path(),
    );
    assert_eq!(stdout(&o).trim(), "false");
    let o = contmodel(
        &[
            "product",
            "--filter",
            "kernel=0,5",
            "--in",
            "m1.gst",
            "m2.gst",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn search_finds_the_example_and_nothing_for_conditional() {
    let dir = tempfile::tempdir().unwrap();
    let o = contmodel(
        &["search", "--formula", EXAMPLE, "--out", "w.json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    let w: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("w.json")).unwrap()).unwrap();
    assert!(w["witness"]["trial"].as_u64().unwrap() < 1000);
    let o = contmodel(
        &[
            "search",
            "--formula",
            "sup x . max(P(x) -. 1/2, 1 -. Q(x))",
            "--trials",
            "200",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn suites_report_json_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let run = |out: &str| {
        let o = contmodel(&["suite", "example-reproduction", "--out", out], dir.path());
        assert_eq!(o.status.code(), Some(0));
        std::fs::read_to_string(dir.path().join(out)).unwrap()
    };
    let a = run("a.json");
    assert_eq!(a, run("b.json"));
    assert!(a.contains("\"product_value\": \"1/2\""));
    let o = contmodel(
        &["suite", "limsup-identity", "--trials", "5", "--seed", "9"],
        dir.path(),
    );
    assert!(stdout(&o).contains("PASS"));
    assert_eq!(
        contmodel(&["suite", "nope"], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        contmodel(&["frobnicate"], dir.path()).status.code(),
        Some(2)
    );
}
