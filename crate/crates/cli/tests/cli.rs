//! End-to-end tests of the `tempoflow` binary: exit codes, output
//! formats, and determinism.

use assert_cmd::Command;
use predicates::prelude::*;

const TOY: &str = "s\ty\t1\t5\ns\tz\t2\t3\ny\tz\t3\t5\ny\tt\t4\t4\nz\tt\t5\t1\n";
const CYCLES: &str = "a\tb\t1\t3\nb\ta\t2\t3\na\tc\t4\t4\nc\ta\t6\t3\n";

fn tempoflow() -> Command {
    Command::cargo_bin("tempoflow").unwrap()
}

fn write(dir: &tempfile::TempDir, name: &str, content: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn ingest_canonicalizes_and_summarizes() {
    let dir = tempfile::tempdir().unwrap();
    // Shuffled input: canonical output is sorted by edge id then time,
    // where ids follow first appearance in the input.
    let f = write(&dir, "g.tsv", "z\tt\t5\t1\ns\ty\t1\t5\ny\tt\t4\t4\ns\tz\t2\t3\ny\tz\t3\t5\n");
    tempoflow()
        .args(["ingest", &f])
        .assert()
        .success()
        .stdout("z\tt\t5\t1\ns\tz\t2\t3\ns\ty\t1\t5\ny\tz\t3\t5\ny\tt\t4\t4\n")
        .stderr(predicate::str::contains("4 vertices, 5 edges, 5 interactions"));
}

#[test]
fn ingest_reads_stdin_and_applies_window() {
    tempoflow()
        .args(["ingest", "-", "--window", "2", "4"])
        .write_stdin(TOY)
        .assert()
        .success()
        .stdout("s\tz\t2\t3\ny\tz\t3\t5\ny\tt\t4\t4\n");
}

#[test]
fn ingest_csv() {
    tempoflow()
        .args(["ingest", "-", "--format", "csv"])
        .write_stdin("s, t, 1, 2\n")
        .assert()
        .success()
        .stdout("s\tt\t1\t2\n");
}

#[test]
fn malformed_record_is_a_data_error() {
    tempoflow()
        .args(["ingest", "-"])
        .write_stdin("s t one 2\n")
        .assert()
        .code(2)
        .stderr(predicate::str::contains("line 1"));
}

#[test]
fn missing_file_is_a_data_error() {
    tempoflow()
        .args(["ingest", "/definitely/not/here.tsv"])
        .assert()
        .code(2);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    tempoflow().args(["ingest", "-", "--bogus"]).assert().code(1);
}

#[test]
fn flow_greedy_trace_matches_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "g.tsv", TOY);
    let out = tempoflow()
        .args(["flow", &f, "--source", "s", "--sink", "t", "--method", "greedy", "--trace"])
        .assert()
        .success()
        .stdout(predicate::str::contains("value=1 method=greedy"))
        .get_output()
        .stdout
        .clone();
    let text = String::from_utf8(out).unwrap();
    // Buffer columns of the toy network after each interaction.
    assert!(text.contains("3\ty->z\t5\t5\tinf\t0\t8\t0"), "{text}");
    assert!(text.contains("5\tz->t\t1\t1\tinf\t0\t7\t1"), "{text}");
}

#[test]
fn flow_exact_methods_agree() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "g.tsv", TOY);
    for method in ["lp", "pre", "presim"] {
        tempoflow()
            .args(["flow", &f, "--source", "s", "--sink", "t", "--method", method])
            .assert()
            .success()
            .stdout(predicate::str::contains("value=5"));
    }
}

#[test]
fn flow_emit_lp_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "g.tsv", TOY);
    let lp1 = dir.path().join("a.lp");
    let lp2 = dir.path().join("b.lp");
    for lp in [&lp1, &lp2] {
        tempoflow()
            .args(["flow", &f, "--source", "s", "--sink", "t", "--method", "lp"])
            .args(["--emit-lp", &lp.to_string_lossy()])
            .assert()
            .success();
    }
    let a = std::fs::read_to_string(&lp1).unwrap();
    let b = std::fs::read_to_string(&lp2).unwrap();
    assert_eq!(a, b);
    assert!(a.starts_with("Maximize\n"), "{a}");
    assert!(a.ends_with("End\n"), "{a}");
}

#[test]
fn flow_unknown_vertex_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "g.tsv", TOY);
    tempoflow()
        .args(["flow", &f, "--source", "nope", "--sink", "t", "--method", "lp"])
        .assert()
        .code(2);
}

#[test]
fn flow_bad_method_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "g.tsv", TOY);
    tempoflow()
        .args(["flow", &f, "--source", "s", "--sink", "t", "--method", "simplex"])
        .assert()
        .code(1);
}

#[test]
fn extract_lists_cycle_instances() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "g.tsv", CYCLES);
    tempoflow()
        .args(["extract", &f, "--hops", "2"])
        .assert()
        .success()
        .stdout(predicate::str::contains("a\t4\t4\t4"))
        .stderr(predicate::str::contains("3 instances"));
}

#[test]
fn extract_seed_pair_mode() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "g.tsv", TOY);
    tempoflow()
        .args(["extract", &f, "--hops", "3", "--source", "s", "--sink", "t"])
        .assert()
        .success()
        .stdout(predicate::str::contains("s->t"));
}

#[test]
fn extract_bad_hops_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "g.tsv", CYCLES);
    tempoflow().args(["extract", &f, "--hops", "9"]).assert().code(1);
}

#[test]
fn precompute_then_pb_matches_gb() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "g.tsv", CYCLES);
    let pat = write(&dir, "p.txt", "a.1 -> b\nb -> a.2\n");
    let tbl = dir.path().join("tables");
    tempoflow()
        .args(["precompute", &f, "--hops", "2", "--cyclic"])
        .args(["--out", &tbl.to_string_lossy()])
        .assert()
        .success()
        .stdout(predicate::str::contains("rows"));
    let gb = tempoflow()
        .args(["patterns", &f, "--pattern", &pat])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let pb = tempoflow()
        .args(["patterns", &f, "--pattern", &pat, "--method", "pb"])
        .args(["--tables", &tbl.to_string_lossy()])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    assert_eq!(gb, pb);
    let text = String::from_utf8(gb).unwrap();
    assert!(text.contains("a=a b=b value=3"), "{text}");
    assert!(text.contains("instances=4 avg_flow=1.50"), "{text}");
}

#[test]
fn patterns_limit_caps_output() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "g.tsv", CYCLES);
    let pat = write(&dir, "p.txt", "a.1 -> b\nb -> a.2\n");
    tempoflow()
        .args(["patterns", &f, "--pattern", &pat, "--limit", "1"])
        .assert()
        .success()
        .stdout(predicate::str::contains("instances=1"));
}

#[test]
fn patterns_bad_pattern_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "g.tsv", CYCLES);
    let pat = write(&dir, "p.txt", "a -> b\nc -> d\n"); // two sources
    tempoflow()
        .args(["patterns", &f, "--pattern", &pat])
        .assert()
        .code(2);
}

#[test]
fn nonrigid_mode_reports_anchors() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "g.tsv", CYCLES);
    let tbl = dir.path().join("tables");
    tempoflow()
        .args(["precompute", &f, "--hops", "2", "--cyclic"])
        .args(["--out", &tbl.to_string_lossy()])
        .assert()
        .success();
    tempoflow()
        .args(["patterns", &f, "--min-paths", "2"])
        .args(["--tables", &tbl.to_string_lossy()])
        .assert()
        .success()
        .stdout(predicate::str::contains("anchor=a paths=2 value=6"));
}

#[test]
fn bench_synthetic_is_deterministic() {
    let run = || {
        tempoflow()
            .args(["bench", "--synthetic", "8,10,30,c,4", "--seed", "3", "--reps", "1"])
            .assert()
            .success()
            .get_output()
            .stdout
            .clone()
    };
    let a = String::from_utf8(run()).unwrap();
    let b = String::from_utf8(run()).unwrap();
    // Timing columns vary; everything else must match. Compare with the
    // runtime columns blanked.
    let strip = |s: &str| {
        s.lines()
            .map(|l| {
                let cols: Vec<&str> = l.split_whitespace().collect();
                if cols.first().map_or(false, |c| c.starts_with("synth-")) {
                    format!("{} {} {} {} {}", cols[0], cols[1], cols[2], cols[7], cols[8])
                } else if l.contains("_us") || l.starts_with('C') || l.starts_with('<') {
                    String::new()
                } else {
                    l.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&a), strip(&b));
    assert!(a.contains("class"), "{a}");
    assert!(a.contains("--- csv ---"), "{a}");
}

#[test]
fn bench_classifies_all_three_classes() {
    for (class, expect) in [("a", " A "), ("b", " B "), ("c", " C ")] {
        let spec = format!("8,10,30,{class},8");
        let out = tempoflow()
            .args(["bench", "--synthetic", &spec, "--reps", "1"])
            .assert()
            .success()
            .get_output()
            .stdout
            .clone();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains(expect), "class {class}: {text}");
    }
}

#[test]
fn bench_over_extracted_instances() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "g.tsv", CYCLES);
    tempoflow()
        .args(["bench", &f, "--reps", "1", "--jobs", "2"])
        .assert()
        .success()
        .stdout(predicate::str::contains("seed-a"));
}

#[test]
fn bench_without_input_is_a_usage_error() {
    tempoflow().arg("bench").assert().code(1);
}
