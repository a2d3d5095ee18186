use std::path::Path;
use std::process::{Command, Output};

fn rhombic(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rhombic"))
        .args(args)
        .env("RHOMBIC_CACHE_DIR", cache)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn spec_examples() {
    let dir = tempfile::tempdir().unwrap();
    for (args, expected) in [
        (&["cost", "24"][..], "6\n"),
        (&["bk", "251"], "29\n"),
        (&["mcd", "3"], "59\n"),
        (&["cost", "41^11-1"], "741858080\n"),
        (&["classnum", "131"], "5\n"),
        (&["cost", "20", "--classes", "1"], "4\n"),
        (&["cost", "4", "--classes", "1"], "none\n"),
        (&["witness", "24"], "[5,2,2]\n[4,4]\n"),
    ] {
        let o = rhombic(dir.path(), args);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout(&o), expected, "{args:?}");
    }
}

#[test]
fn json_and_csv_formats() {
    let dir = tempfile::tempdir().unwrap();
    let o = rhombic(dir.path(), &["--format", "json", "witness", "24"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v, serde_json::json!([[5, 2, 2], [4, 4]]));

    let o = rhombic(dir.path(), &["--format", "csv", "mcd", "5"]);
    assert_eq!(stdout(&o), "m,D,i,h\n5,131,16,5\n");

    let o = rhombic(dir.path(), &["--format", "json", "bounds", "25"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["exact"], "19");
    let thm2 = v["methods"].as_array().unwrap().iter().find(|m| m["id"] == "thm2").unwrap();
    assert_eq!(thm2["value"], "14.000000");
    assert_eq!(thm2["case"], "Y5");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(rhombic(dir.path(), &["cost", "25"]).status.code(), Some(1));
    assert_eq!(rhombic(dir.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(rhombic(dir.path(), &["--table-limit", "100", "cost", "4"]).status.code(), Some(1));
    assert_eq!(rhombic(dir.path(), &["witness", "30000"]).status.code(), Some(2));
    assert_eq!(rhombic(dir.path(), &["mcd", "3", "--cap", "50"]).status.code(), Some(2));
    assert_eq!(rhombic(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn tables_match_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = rhombic(dir.path(), &["tables", "appendix"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), rhombic::tables::GOLDEN_APPENDIX);
    assert!(stdout(&o).contains("1254,44,35,\"[35,8,3,2];[34,12]\"\n"));
    assert_eq!(stdout(&o).lines().count(), 52);

    let out = dir.path().join("out");
    let o = rhombic(dir.path(), &["tables", "mcd", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(out.join("mcd.csv")).unwrap(), rhombic::tables::GOLDEN_MCD);
}

#[test]
fn analyze_and_dsgen_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = rhombic(dir.path(), &["dsgen", "--group", "13", "--set", "0,1,3,9"]);
    assert!(o.status.success());
    let path = dir.path().join("f.json");
    std::fs::write(&path, &o.stdout).unwrap();

    let o = rhombic(dir.path(), &["--format", "json", "analyze", path.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["V"], 10);
    assert_eq!(v["N2"], 12);
    assert_eq!(v["in_c3"], true);

    let o = rhombic(dir.path(), &["dsgen", "--function", path.to_str().unwrap()]);
    assert_eq!(stdout(&o), "0,1,3,9\n");

    let mono = dir.path().join("m.json");
    std::fs::write(&mono, r#"{"domain": {"kind": "ext_field", "p": 3, "n": 3}, "monomial": 4}"#).unwrap();
    let o = rhombic(dir.path(), &["analyze", mono.to_str().unwrap()]);
    let text = stdout(&o);
    assert!(text.contains("planar true\n") && text.contains("V 14\n"), "{text}");
}

#[test]
fn output_is_deterministic_and_cache_independent() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--format", "csv", "xset", "--limit", "3000"];
    let first = rhombic(dir.path(), &args);
    assert!(dir.path().join("cost_table.csv").exists());
    let second = rhombic(dir.path(), &args);
    assert_eq!(first.stdout, second.stdout);
    let fresh = tempfile::tempdir().unwrap();
    assert_eq!(rhombic(fresh.path(), &args).stdout, first.stdout);
    let threads = rhombic(fresh.path(), &["--threads", "1", "--format", "csv", "xset", "--limit", "3000"]);
    assert_eq!(threads.stdout, first.stdout);
}
