use std::path::PathBuf;
use std::process::Command;

use mixlogic::derivation::{check, library};
use mixlogic_cli::deriv_file::{read_derivation, write_derivation};
use mixlogic_cli::fixture_files;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(rel: &str) -> String {
    root().join(rel).display().to_string()
}

fn run(args: &[&str]) -> mixlogic_cli::Outcome {
    let mut argv = vec!["mixlogic"];
    argv.extend_from_slice(args);
    mixlogic_cli::run(argv)
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_mixlogic");
    let ok = Command::new(bin).args(["reduce", "--head-c", r"((\x.(C)\y.x) a b)"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "a\n");
    let parse = Command::new(bin).args(["reduce", r"(\x. x"]).output().unwrap();
    assert_eq!(parse.status.code(), Some(2));
    let failed = Command::new(bin).args(["typecheck", &fixture("invalid/C_in_AF2.deriv")]).output().unwrap();
    assert_eq!(failed.status.code(), Some(1));
}

#[test]
fn head_c_reduction_of_abort() {
    let out = run(&["reduce", "--head-c", r"((\x.(C)\y.x) a b)"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "a\n"));
}

#[test]
fn trace_lines() {
    let out = run(&["reduce", "--head", "--trace", r"(\x. \y. x) a b"]);
    assert_eq!(out.stdout, "step 1: beta @ fun => (\\y. a) b\nstep 2: beta @ root => a\na\n");
    let json = run(&["reduce", "--trace", "--trace-format", "structured", r"(\x. x) a"]);
    let v: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
    assert_eq!(v["steps"][0]["rule"], "beta");
    assert_eq!(v["result"], "a");
}

#[test]
fn budget_exhaustion_is_a_failure() {
    let out = run(&["--budget", "10", "reduce", "--head", r"(\x. x x) (\x. x x)"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("exhausted"), "{}", out.stderr);
}

#[test]
fn value_of_church_three() {
    let out = run(&["value", &fixture("terms/church3.lc")]);
    assert_eq!(out.stdout, "n=3 m=3 I=[3, 2, 1, 0] r=[0, 1, 2, 3]\n");
    let control = run(&["value", &fixture("terms/control3.lc")]);
    assert!(control.stdout.starts_with("n=3 "), "{}", control.stdout);
}

#[test]
fn translations() {
    let out = run(&["translate", "--mode=simple-godel", "forall X (X(0) -> X(x))"]);
    assert_eq!(out.stdout, "forall X. ~X(0) -> ~X(x)\n");
    let out = run(&["translate", "--mode", "godel", "N^C[x]"]);
    assert_eq!(out.stdout, "N*[x]\n");
    let out = run(&["translate", "--mode", "classical", "forall X. ~~X -> X"]);
    assert_eq!(out.stdout, "forall Xc. ~~Xc -> Xc\n");
}

#[test]
fn classifiers() {
    assert_eq!(run(&["classify", "--kind", "polarity", "N[x]"]).stdout, "Positive\n");
    assert_eq!(run(&["classify", "--kind", "classical-type", "A -> _|_"]).stdout, "classical\n");
    assert_eq!(run(&["classify", "--kind", "classical-type", "A -> B"]).stdout, "not classical\n");
    let k = run(&["classify", "--kind", "mu-integer", r"\x. \f. mu a.[a] f (mu b.[a] f x)"]);
    assert_eq!(k.stdout, "n=1 vacuous\n");
    let k = run(&["classify", "--kind", "mu-integer", r"\x. \f. mu a.[b] f x"]);
    assert_eq!((k.code, k.stdout.as_str()), (1, ""));
    assert!(k.stderr.contains("free mu-variable"), "{}", k.stderr);
    let k = run(&["classify", "--kind", "mu-integer", &fixture("mu/church3.mu")]);
    assert_eq!(k.stdout, "n=3\n");
}

#[test]
fn rep_sets() {
    assert_eq!(run(&["rep", "f (f x)"]).stdout, "{2}\n");
    assert_eq!(run(&["rep", r"\x. \f. mu a.[a] f (mu b.[a] f x)"]).stdout, "{1}\n");
    assert_eq!(run(&["rep", r"\x. \f. mu a.[a] f (mu b.[a] f (f x))"]).stdout, "{2}\n");
    assert_eq!(run(&["rep", r"\x. \f. mu a.[a] f (mu b.[a] x)"]).stdout, "{}\n");
    assert_eq!(run(&["rep", r"\x. \f. mu a.[b] f x"]).stdout, "all\n");
}

#[test]
fn storage_and_characterization() {
    let out = run(&["storage-verify", "--candidate", "T2", "--n", "0..3"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.lines().count(), 12);
    let lazy = run(&["storage-verify", "--candidate", r"\n. \f. f n", "--n", "2..2"]);
    assert_eq!(lazy.code, 0, "value-level agreement only");
    let lazy = run(&["storage-verify", "--candidate", &fixture("terms/lazy.lc"), "--n", "0..2"]);
    assert_eq!(lazy.code, 1);
    let mu = run(&["storage-verify", "--mode", "mu", "--candidate", "T1", "--n", "0..3"]);
    assert_eq!(mu.code, 0, "{}", mu.stdout);
    assert_eq!(run(&["characterize", "--type", "bottom", "--candidate", "abort"]).stdout, "confirmed\n");
    assert_eq!(run(&["characterize", "--type", "cc", "--candidate", "Cwrap"]).stdout, "shape m=1 j=1\n");
    let no = run(&["characterize", "--type", "cc", "--candidate", r"\x. x"]);
    assert_eq!(no.code, 1);
}

#[test]
fn typecheck_reports_paths_and_positions() {
    let ok = run(&["typecheck", &fixture("derivations/zero.deriv")]);
    assert_eq!(ok.stdout, "valid (AF2): |- \\x. \\f. x : N[0]\n");
    let bad = run(&["typecheck", &fixture("invalid/church3_wrong_numeral.deriv")]);
    assert_eq!(bad.code, 1);
    assert!(bad.stderr.contains("node 0.0.0.0: BadWitness"), "{}", bad.stderr);

    let dir = std::env::temp_dir().join(format!("mixlogic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("broken.deriv");
    std::fs::write(&file, "(derivation (system AF2)\n  (rule Ax (ctx (x \"X(0) ->\")) (term \"x\") (type \"X(0)\")))\n").unwrap();
    let out = run(&["typecheck", file.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    let expected = format!("{}:2:", file.display());
    assert!(out.stderr.contains(&expected), "{}", out.stderr);
}

#[test]
fn embedding_prints_a_checkable_derivation() {
    let out = run(&["typecheck", "--embed", &fixture("derivations/control3.deriv")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let d = read_derivation(&out.stdout).unwrap();
    assert!(check(&d).is_ok());
}

#[test]
fn derivation_files_round_trip() {
    for (name, d) in library::all() {
        let text = std::fs::read_to_string(root().join(format!("derivations/{name}.deriv"))).unwrap();
        let back = read_derivation(&text).unwrap();
        assert_eq!(write_derivation(&back), text, "{name}");
        assert_eq!(write_derivation(&d), text, "{name}");
    }
}

#[test]
fn fixture_tree_matches_library() {
    for (rel, text) in fixture_files::render() {
        let on_disk = std::fs::read_to_string(root().join(&rel)).unwrap_or_default();
        assert_eq!(on_disk, text, "{} is stale; run `mixlogic fixtures write`", rel.display());
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["--trace", "reduce", "--mu", "muC (\\k. k z) w"];
    assert_eq!(run(&args), run(&args));
    let a = run(&["fixtures", "run-all", "--fixture-dir", &fixture("")]);
    assert_eq!(a.code, 0, "{}", a.stdout);
}
