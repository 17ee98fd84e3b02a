//! Golden-file tests pinning the exact report bytes (text and JSON) for
//! every verb. Regenerate with UPDATE_GOLDEN=1 after an intentional
//! format change and review the diff.

use std::process::Command;

fn run(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_perpcalc"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).expect("reports are utf-8"),
        out.status.code().unwrap_or(-1),
    )
}

fn check(name: &str, expected_exit: i32, args: &[&str]) {
    let (stdout, code) = run(args);
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    if std::env::var("UPDATE_GOLDEN").is_ok() {
        std::fs::write(&path, &stdout).expect("golden written");
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("missing golden {path}: {e} (run with UPDATE_GOLDEN=1)"));
    assert_eq!(stdout, expected, "golden mismatch for {name}");
    assert_eq!(code, expected_exit, "exit code mismatch for {name}");
}

#[test]
fn ring_info_golden() {
    let args = ["ring-info", "tri 2 over gf 2 1"];
    check("ring_info.txt", 0, &args);
    check("ring_info.json", 0, &[&args[..], &["--json"]].concat());
}

#[test]
fn ring_audit_golden() {
    let args = ["ring-audit", "zmod 6"];
    check("ring_audit.txt", 0, &args);
    check("ring_audit.json", 0, &[&args[..], &["--json"]].concat());
}

#[test]
fn pf_check_golden() {
    let args = ["pf-check", "zmod 4"];
    check("pf_check.txt", 0, &args);
    check("pf_check.json", 0, &[&args[..], &["--json"]].concat());
}

#[test]
fn pf_check_negative_golden() {
    let args = ["pf-check", "tri 2 over gf 2 1"];
    check("pf_check_negative.txt", 2, &args);
    check("pf_check_negative.json", 2, &[&args[..], &["--json"]].concat());
}

#[test]
fn perp_golden() {
    let args = [
        "perp",
        "zmod 4",
        "--module",
        "free 1",
        "--gens",
        "2",
        "--dual-gens",
        "2",
    ];
    check("perp.txt", 0, &args);
    check("perp.json", 0, &[&args[..], &["--json"]].concat());
}

#[test]
fn theorem_verify_golden() {
    let args = ["theorem-verify", "zmod 4"];
    check("theorem_verify.txt", 0, &args);
    check("theorem_verify.json", 0, &[&args[..], &["--json"]].concat());
}

#[test]
fn witness_find_golden() {
    let args = ["witness-find", "quot gf2 [x,y]/(x^2,xy,y^2)"];
    check("witness_find.txt", 0, &args);
    check("witness_find.json", 0, &[&args[..], &["--json"]].concat());
}

#[test]
fn gallery_golden() {
    let args = ["gallery", "--example", "ii", "--truncation", "8"];
    check("gallery.txt", 0, &args);
    check("gallery.json", 0, &[&args[..], &["--json"]].concat());
}

#[test]
fn oracle_crosscheck_golden() {
    let args = ["oracle-crosscheck", "zmod 4", "--module", "free 2"];
    check("oracle_crosscheck.txt", 0, &args);
    check("oracle_crosscheck.json", 0, &[&args[..], &["--json"]].concat());
}

#[test]
fn usage_and_guard_exit_codes() {
    let (_, code) = run(&["pf-check", "zmod one"]);
    assert_eq!(code, 3, "syntax errors exit 3");
    let (_, code) = run(&["pf-check", "zmod 512"]);
    assert_eq!(code, 4, "guard violations exit 4");
    let (stdout, code) = run(&["theorem-verify", "zmod 8", "--timeout-secs", "0"]);
    assert_eq!(code, 4, "timeouts exit 4");
    assert!(
        stdout.contains("aborted"),
        "timeout emits a partial-progress report"
    );
    let (_, code) = run(&["no-such-verb"]);
    assert_eq!(code, 3, "unknown verbs exit 3");
}
