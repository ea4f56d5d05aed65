use std::fs;
use std::process::Command;

use nakajima::bv_ring::{Mode, SurfaceModel};
use nakajima_cli::cache::{Cache, Lookup};
use nakajima_cli::commands::{matrix_record, CacheStatus};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nakajima"))
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::open(dir.path()).unwrap();
    let m = SurfaceModel::diagonal(&[2], Mode::Chow);
    let expr = "[e(v1), ft(delta)] - 1/2*h";
    let (fresh, s0) = matrix_record(&m, expr, 3, None).unwrap();
    assert_eq!(s0, CacheStatus::Disabled);
    let (first, s1) = matrix_record(&m, expr, 3, Some(&cache)).unwrap();
    let (second, s2) = matrix_record(&m, expr, 3, Some(&cache)).unwrap();
    assert_eq!((s1, s2), (CacheStatus::Miss, CacheStatus::Hit));
    assert_eq!(fresh, first);
    assert_eq!(fresh, second);

    // the key depends on the canonical print, so equivalent spellings share an entry
    let (_, s3) = matrix_record(&m, "[e(v1),ft(delta)]-1/2*h", 3, Some(&cache)).unwrap();
    assert_eq!(s3, CacheStatus::Hit);
    let (_, s4) = matrix_record(&m, expr, 2, Some(&cache)).unwrap();
    assert_eq!(s4, CacheStatus::Miss);
    let c = m.clone().with_mode(Mode::Cohomology);
    assert_ne!(Cache::key(&m, "h", 2), Cache::key(&c, "h", 2));
}

#[test]
fn corrupt_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::open(dir.path()).unwrap();
    let m = SurfaceModel::diagonal(&[2], Mode::Chow);
    let (good, _) = matrix_record(&m, "e(v1) . e(v1)", 2, Some(&cache)).unwrap();
    let canonical = good.expr.clone();
    let path = cache.path(&Cache::key(&m, &canonical, 2));
    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, text.replacen("\"2\"", "\"3\"", 1)).unwrap();
    assert_eq!(cache.load(&Cache::key(&m, &canonical, 2)), Lookup::Corrupt);
    let (again, status) = matrix_record(&m, "e(v1) . e(v1)", 2, Some(&cache)).unwrap();
    assert_eq!(status, CacheStatus::Recomputed);
    assert_eq!(again, good);
    fs::write(&path, "truncated").unwrap();
    assert_eq!(cache.load(&Cache::key(&m, &canonical, 2)), Lookup::Corrupt);
    let (_, status) = matrix_record(&m, "e(v1) . e(v1)", 2, Some(&cache)).unwrap();
    assert_eq!(status, CacheStatus::Recomputed);
    assert!(matches!(
        cache.load(&Cache::key(&m, &canonical, 2)),
        Lookup::Hit(_)
    ));
}

#[test]
fn matrix_edge_cases() {
    let out = bin()
        .args(["matrix", "h", "--n", "0", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["source_basis"].as_array().unwrap().len(), 1);
    assert_eq!(v["target_basis"].as_array().unwrap().len(), 1);
    assert!(v["entries"].as_array().unwrap().is_empty());

    let out = bin()
        .args(["matrix", "L0", "--n", "3", "--format", "csv"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 26);
    for r in rows {
        let f: Vec<&str> = r.split(',').collect();
        assert_eq!(f[0], f[1]);
        assert_eq!(f[2], "-3");
    }
}

#[test]
fn exit_codes_and_output_file() {
    let out = bin().args(["matrix", "e(v9)"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown basis label"));

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("rel.json");
    let out = bin()
        .args([
            "verify",
            "relations",
            "--n",
            "1",
            "--format",
            "json",
            "--out",
        ])
        .arg(&file)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(v["failed"], 0);

    // an isotropic class has no f
    let model = dir.path().join("hyp.json");
    fs::write(
        &model,
        r#"{"rank": 2, "gram": [[0, 1], [1, 0]], "points": 0, "mode": "chow"}"#,
    )
    .unwrap();
    let out = bin()
        .args(["matrix", "f(v1)", "--model"])
        .arg(&model)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("isotropic"));
}

#[test]
fn wedge_and_spectrum() {
    let out = bin().args(["wedge", "e^f", "--n", "1"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("rho(e^f) = 1/2*h"));
    let out = bin().args(["spectrum", "--n", "2"]).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}
