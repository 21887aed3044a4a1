use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_labelforge"));
    c.env_remove("LABELFORGE_GUARD");
    c
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

/// Value of a `key  value` report line.
fn field(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| {
            l.strip_prefix(key)
                .filter(|r| r.starts_with(' '))
                .map(|r| r.trim().to_string())
        })
        .unwrap_or_else(|| panic!("no {key} in:\n{report}"))
}

fn without_timing(report: &str) -> String {
    report
        .lines()
        .filter(|l| !l.starts_with("timing_ms"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn gen_examples() {
    let dir = TempDir::new().unwrap();
    let o = run(dir.path(), &["gen", "norm", "--q", "5", "--d", "2", "-o", "g.el"]);
    assert_eq!(code(&o), 0);
    assert_eq!(field(&stdout(&o), "n"), "20");
    assert!(fs::read_to_string(dir.path().join("g.el")).unwrap().starts_with("20\n"));

    let o = run(dir.path(), &["gen", "u", "--k", "2", "--d", "2", "-o", "u.el"]);
    assert_eq!(field(&stdout(&o), "n"), "10");
    assert_eq!(field(&stdout(&o), "edges"), "8");

    let o = run(dir.path(), &["gen", "gnp", "--n", "10", "--p", "0", "--seed", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "10\n");
}

#[test]
fn gen_rejects_bad_flags() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&run(dir.path(), &["gen", "gnp", "--n", "10", "--p", "0.5"])), 2);
    assert_eq!(
        code(&run(
            dir.path(),
            &["gen", "gnp", "--n", "10", "--p", "3/2", "--seed", "1"]
        )),
        2
    );
    assert_eq!(code(&run(dir.path(), &["gen", "norm", "--q", "4", "--d", "2"])), 2);
    assert_eq!(code(&run(dir.path(), &["gen", "wheel", "--n", "4"])), 2);
    assert_eq!(code(&run(dir.path(), &["gen", "path"])), 2);
}

#[test]
fn gnp_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let args = ["gen", "gnp", "--n", "50", "--p", "1/2", "--seed", "7"];
    assert_eq!(stdout(&run(dir.path(), &args)), stdout(&run(dir.path(), &args)));
}

#[test]
fn label_bit_examples() {
    let dir = TempDir::new().unwrap();
    write(&dir, "p4.el", "4\n0 1\n1 2\n2 3\n");
    write(&dir, "id.ord", "4\n0 1 2 3\n");
    let o = run(
        dir.path(),
        &[
            "label", "--in", "p4.el", "--scheme", "interval", "--order", "id.ord", "-o", "p4.lab",
        ],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(field(&stdout(&o), "max_label_bits"), "10");

    run(dir.path(), &["gen", "clique", "--n", "4", "-o", "k4.el"]);
    let o = run(
        dir.path(),
        &["label", "--in", "k4.el", "--scheme", "degeneracy", "-o", "k4.lab"],
    );
    assert_eq!(field(&stdout(&o), "max_label_bits"), "8");

    run(dir.path(), &["gen", "empty", "--n", "8", "-o", "e8.el"]);
    let o = run(
        dir.path(),
        &["label", "--in", "e8.el", "--scheme", "interval", "-o", "e8.lab"],
    );
    assert_eq!(field(&stdout(&o), "max_label_bits"), "3");
    assert!(field(&stdout(&o), "check.factor2_certificate").starts_with("pass"));
}

#[test]
fn label_missing_input_is_io_error() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        code(&run(dir.path(), &["label", "--in", "nope.el", "--scheme", "interval"])),
        1
    );
}

#[test]
fn query_uses_labels_only() {
    let dir = TempDir::new().unwrap();
    write(&dir, "k2.el", "2\n0 1\n");
    run(
        dir.path(),
        &["label", "--in", "k2.el", "--scheme", "interval", "-o", "k2.lab"],
    );
    run(dir.path(), &["gen", "empty", "--n", "5", "-o", "e5.el"]);
    run(
        dir.path(),
        &["label", "--in", "e5.el", "--scheme", "degeneracy", "-o", "e5.lab"],
    );
    fs::remove_file(dir.path().join("k2.el")).unwrap();
    fs::remove_file(dir.path().join("e5.el")).unwrap();

    let o = run(dir.path(), &["query", "--labels", "k2.lab", "--u", "0", "--v", "1"]);
    assert_eq!((code(&o), stdout(&o)), (0, "true\n".to_string()));
    for (u, v) in [("0", "4"), ("3", "2")] {
        let o = run(dir.path(), &["query", "--labels", "e5.lab", "--u", u, "--v", v]);
        assert_eq!(stdout(&o), "false\n");
    }
    assert_eq!(
        code(&run(
            dir.path(),
            &["query", "--labels", "k2.lab", "--u", "1", "--v", "1"]
        )),
        2
    );
    assert_eq!(
        code(&run(
            dir.path(),
            &["query", "--labels", "k2.lab", "--u", "0", "--v", "9"]
        )),
        1
    );
    assert_eq!(
        code(&run(
            dir.path(),
            &["query", "--labels", "gone.lab", "--u", "0", "--v", "1"]
        )),
        1
    );
}

#[test]
fn query_matches_graph_on_every_pair() {
    let dir = TempDir::new().unwrap();
    let g = stdout(&run(
        dir.path(),
        &["gen", "gnp", "--n", "9", "--p", "0.4", "--seed", "3"],
    ));
    write(&dir, "g.el", &g);
    let graph = labelforge::graph::parse_edge_list(&g).unwrap();
    for scheme in ["interval", "degeneracy"] {
        run(
            dir.path(),
            &["label", "--in", "g.el", "--scheme", scheme, "-o", "g.lab"],
        );
        for u in 0..9 {
            for v in (u + 1)..9 {
                let o = run(
                    dir.path(),
                    &[
                        "query",
                        "--labels",
                        "g.lab",
                        "--u",
                        &u.to_string(),
                        "--v",
                        &v.to_string(),
                    ],
                );
                assert_eq!(stdout(&o).trim() == "true", graph.has_edge(u, v), "{scheme} {u} {v}");
            }
        }
    }
}

#[test]
fn verify_honest_and_dishonest_labels() {
    let dir = TempDir::new().unwrap();
    run(dir.path(), &["gen", "norm", "--q", "7", "--d", "2", "-o", "g.el"]);
    run(dir.path(), &["gen", "cycle", "--n", "42", "-o", "c.el"]);
    for scheme in ["interval", "degeneracy"] {
        run(
            dir.path(),
            &["label", "--in", "g.el", "--scheme", scheme, "-o", "g.lab"],
        );
        let o = run(dir.path(), &["verify", "--in", "g.el", "--labels", "g.lab"]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        assert!(field(&stdout(&o), "check.decode").starts_with("pass (861 pairs, 0 mismatches"));
        let o = run(dir.path(), &["verify", "--in", "c.el", "--labels", "g.lab"]);
        assert_ne!(code(&o), 0);
        assert!(field(&stdout(&o), "check.decode").starts_with("FAIL"));
    }
}

#[test]
fn reports_are_deterministic_and_json_sidecar_parses() {
    let dir = TempDir::new().unwrap();
    run(
        dir.path(),
        &["gen", "gnp", "--n", "30", "--p", "0.3", "--seed", "11", "-o", "g.el"],
    );
    let args = [
        "label", "--in", "g.el", "--scheme", "interval", "-o", "g.lab", "--json", "r.json",
    ];
    let a = stdout(&run(dir.path(), &args));
    let b = stdout(&run(dir.path(), &args));
    assert_eq!(without_timing(&a), without_timing(&b));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(json["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert!(json["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["name"] == "factor2_certificate"));
}

#[test]
fn analyze_examples() {
    let dir = TempDir::new().unwrap();
    write(&dir, "k3.el", "3\n0 1\n1 2\n0 2\n");
    let o = run(
        dir.path(),
        &["analyze", "u-free", "--in", "k3.el", "--k", "1", "--d", "1"],
    );
    assert_eq!(stdout(&o).lines().next(), Some("U-free: true"));
    write(&dir, "p3.el", "3\n0 1\n1 2\n");
    let o = run(
        dir.path(),
        &["analyze", "u-free", "--in", "p3.el", "--k", "1", "--d", "1"],
    );
    assert_eq!(stdout(&o).lines().next(), Some("U-free: false"));
    assert_eq!(field(&stdout(&o), "witness"), "A=[0] B=[2, 1]");

    write(&dir, "c4.el", "4\n0 1\n1 2\n2 3\n0 3\n");
    let o = run(dir.path(), &["analyze", "kst", "--in", "c4.el", "--s", "2", "--t", "2"]);
    assert_eq!(stdout(&o).lines().next(), Some("K_{2,2}-free: false"));

    let o = run(dir.path(), &["analyze", "vc", "--in", "k3.el"]);
    assert_eq!(field(&stdout(&o), "vc_dimension"), "1");

    let o = run(dir.path(), &["analyze", "shatter", "--in", "k3.el", "--t", "1"]);
    assert_eq!(field(&stdout(&o), "shatter"), "2");
    assert_eq!(field(&stdout(&o), "exact"), "true");

    run(dir.path(), &["gen", "norm", "--q", "5", "--d", "2", "-o", "g.el"]);
    let o = run(
        dir.path(),
        &["analyze", "shatter", "--in", "g.el", "--t", "3", "--k", "2", "--d", "2"],
    );
    assert_eq!(code(&o), 0);
    assert!(field(&stdout(&o), "check.u_free_bound").starts_with("pass"));

    let o = run(
        dir.path(),
        &[
            "analyze",
            "universal",
            "--n",
            "4",
            "--scheme",
            "interval",
            "--max-entries",
            "2",
            "--check-all",
        ],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(field(&stdout(&o), "embedded"), "64");
}

#[test]
fn guard_refusal_exits_3() {
    let dir = TempDir::new().unwrap();
    // C(42, 6) = 5245786 coordinate sets
    run(dir.path(), &["gen", "norm", "--q", "7", "--d", "2", "-o", "g.el"]);
    let o = run(dir.path(), &["analyze", "shatter", "--in", "g.el", "--t", "6"]);
    assert_eq!(code(&o), 3);
    let o = bin()
        .current_dir(dir.path())
        .env("LABELFORGE_GUARD", "10000000")
        .args(["analyze", "shatter", "--in", "g.el", "--t", "6"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let o = run(
        dir.path(),
        &[
            "analyze", "shatter", "--in", "g.el", "--t", "6", "--trials", "50", "--seed", "1",
        ],
    );
    assert_eq!((code(&o), field(&stdout(&o), "exact")), (0, "false".to_string()));
}

#[test]
fn bench_scaling_table() {
    let dir = TempDir::new().unwrap();
    let o = run(
        dir.path(),
        &["bench", "scaling", "--family", "norm", "--d", "2", "--qs", "5,7,11,13"],
    );
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let header = text.lines().position(|l| l.trim_start().starts_with("q ")).unwrap();
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(header + 1)
        .take_while(|l| !l.is_empty())
        .map(|l| l.split_whitespace().collect())
        .collect();
    assert_eq!(rows.len(), 4);
    let n: Vec<&str> = rows.iter().map(|r| r[1]).collect();
    assert_eq!(n, ["20", "42", "110", "156"]);
    let alt: Vec<&str> = rows.iter().map(|r| r[4]).collect();
    assert_eq!(alt, ["8", "12", "20", "24"]);
    assert!(rows.iter().all(|r| r[8] == "pass"));
    // the ratio creeps up slowly rather than falling
    assert_eq!(field(&text, "trend.alt_ratio_nonincreasing"), "false");
    assert_eq!(field(&text, "trend.alt_ratio_max_growth"), "1.074");
}
