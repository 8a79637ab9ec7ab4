use std::path::PathBuf;
use std::process::{Command, Output};

fn pblocks(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pblocks"))
        .args(args)
        .output()
        .unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pblocks-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn permutation_file_matches_builtin() {
    let path = scratch(
        "s3.json",
        r#"{"type":"permutation","degree":3,"generators":[[2,1,3],[2,3,1]]}"#,
    );
    let from_file = pblocks(&["classes", path.to_str().unwrap()]);
    assert!(from_file.status.success());
    let text = stdout(&from_file);
    assert!(text.contains("order 6"), "{text}");
    let verify = pblocks(&["verify", path.to_str().unwrap(), "-p", "2,3", "--json"]);
    assert_eq!(verify.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&verify.stdout).unwrap();
    assert_eq!(report["route_ii"]["constant"], false);
    assert_eq!(report["equivalent"], true);
}

#[test]
fn cayley_file_is_checked() {
    let c3 = scratch(
        "c3.json",
        r#"{"type":"cayley","table":[[0,1,2],[1,2,0],[2,0,1]]}"#,
    );
    let ok = pblocks(&["chartable", c3.to_str().unwrap()]);
    assert!(ok.status.success());
    let broken = scratch(
        "bad.json",
        r#"{"type":"cayley","table":[[0,1,2],[1,0,0],[2,0,1]]}"#,
    );
    let bad = pblocks(&["chartable", broken.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error:"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify", "builtin:alternating:5", "-p", "7"][..],
        &["verify", "builtin:alternating:5", "-p", "2,2"],
        &["verify", "builtin:alternating:5", "-p", "4"],
        &["classes", "builtin:symmetric:9"],
        &["classes", "builtin:cyclic:20000"],
        &[
            "verify21",
            "builtin:symmetric:4",
            "-p",
            "2",
            "-z",
            "(1 2 3 4)",
        ],
        &["frobenius", "/nonexistent/group.json"],
        &["no-such-command"],
    ] {
        let o = pblocks(args);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn small_budget_still_verifies_through_class_algebra() {
    let o = pblocks(&[
        "verify",
        "builtin:alternating:5",
        "-p",
        "2,3,5",
        "--budget",
        "10",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["route_ii"]["value"], "1080");
    assert_eq!(
        report["route_ii"]["methods_used"],
        serde_json::json!(["classalgebra", "character"])
    );
}

#[test]
fn table_for_another_group_is_rejected() {
    let exported = pblocks(&["chartable", "builtin:cyclic:4", "--json"]);
    let path = scratch("c4-table.json", &stdout(&exported));
    let o = pblocks(&[
        "blocks",
        "builtin:product:cyclic:2,cyclic:2",
        "--table",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let same = pblocks(&[
        "blocks",
        "builtin:cyclic:4",
        "--table",
        path.to_str().unwrap(),
    ]);
    assert!(same.status.success());
}

#[test]
fn help_and_version() {
    let o = pblocks(&["--help"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for sub in [
        "classes",
        "chartable",
        "blocks",
        "sections",
        "verify",
        "verify21",
        "frobenius",
    ] {
        assert!(text.contains(sub), "{sub} missing from help");
    }
    assert!(pblocks(&["--version"]).status.success());
}
