//! Reports must be byte-identical across consecutive runs, with and
//! without the cache, and a warm cache must replay the cold run's bytes.

use std::path::Path;
use std::process::Command;

fn run(args: &[&str], cache: Option<&Path>) -> (Vec<u8>, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_perpcalc"));
    cmd.args(args);
    if let Some(dir) = cache {
        cmd.arg("--cache-dir").arg(dir);
    }
    let out = cmd.output().expect("binary runs");
    (out.stdout, out.status.code().unwrap_or(-1))
}

fn commands() -> Vec<Vec<&'static str>> {
    let mut all = Vec::new();
    for json in [false, true] {
        let mut base: Vec<Vec<&'static str>> = vec![
            vec!["ring-info", "tri 2 over gf 2 1"],
            vec!["ring-audit", "zmod 6"],
            vec!["pf-check", "zmod 4"],
            vec!["perp", "zmod 4", "--module", "free 1", "--gens", "2"],
            vec!["theorem-verify", "zmod 4"],
            vec!["witness-find", "quot gf2 [x,y]/(x^2,xy,y^2)"],
            vec!["gallery", "--example", "ii", "--truncation", "8"],
            vec!["oracle-crosscheck", "zmod 4", "--module", "free 2"],
        ];
        if json {
            for cmd in base.iter_mut() {
                cmd.push("--json");
            }
        }
        all.extend(base);
    }
    all
}

#[test]
fn reports_are_byte_identical_across_runs_and_cache_modes() {
    for cmd in commands() {
        let (first, code1) = run(&cmd, None);
        let (second, code2) = run(&cmd, None);
        assert_eq!(first, second, "uncached runs differ for {cmd:?}");
        assert_eq!(code1, code2);

        let dir = tempfile::tempdir().expect("tempdir");
        let (cold, code3) = run(&cmd, Some(dir.path()));
        let (hot, code4) = run(&cmd, Some(dir.path()));
        assert_eq!(cold, hot, "cold and hot cache runs differ for {cmd:?}");
        assert_eq!(code3, code4);
        assert_eq!(
            first, cold,
            "cache mode changes the report bytes for {cmd:?}"
        );
        assert_eq!(code1, code3);
        // exactly one cache file per (hash, tag)
        let entries: Vec<_> = std::fs::read_dir(dir.path())
            .unwrap()
            .filter_map(|e| e.ok())
            .filter(|e| e.path().extension().is_some_and(|x| x == "json"))
            .collect();
        assert_eq!(entries.len(), 1, "one cache entry expected for {cmd:?}");
    }
}

#[test]
fn corrupted_cache_entries_are_recomputed() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cmd = ["pf-check", "zmod 4"];
    let (cold, _) = run(&cmd, Some(dir.path()));
    // clobber every entry
    for e in std::fs::read_dir(dir.path()).unwrap().filter_map(|e| e.ok()) {
        std::fs::write(e.path(), b"not json at all").unwrap();
    }
    let (recomputed, code) = run(&cmd, Some(dir.path()));
    assert_eq!(cold, recomputed, "corrupt entry must be recomputed");
    assert_eq!(code, 0);
    // the overwritten entry is valid again
    let (hot, _) = run(&cmd, Some(dir.path()));
    assert_eq!(cold, hot);
}

#[test]
fn timings_flag_is_the_only_nondeterminism_escape_hatch() {
    let cmd = ["pf-check", "zmod 4", "--with-timings", "--json"];
    let (out, _) = run(&cmd, None);
    let text = String::from_utf8(out).unwrap();
    assert!(text.contains("timings_ms"));
    let (plain, _) = run(&["pf-check", "zmod 4", "--json"], None);
    let plain = String::from_utf8(plain).unwrap();
    assert!(!plain.contains("timings_ms"));
}
