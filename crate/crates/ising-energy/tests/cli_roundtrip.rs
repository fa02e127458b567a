//! End-to-end CLI checks: determinism of emitted artifacts, domain
//! round-trips through files, and the verify exit status.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ising-energy"))
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

#[test]
fn sweep_json_is_byte_identical_across_runs() {
    let dir1 = tempdir("sweep-a");
    let dir2 = tempdir("sweep-b");
    for dir in [&dir1, &dir2] {
        let status = bin()
            .args([
                "sweep",
                "--region",
                "disk:0,0,1",
                "--a",
                "0,0",
                "--meshes",
                "1/4,1/8",
                "--name",
                "det",
                "--out-dir",
                dir.to_str().unwrap(),
            ])
            .status()
            .expect("run sweep");
        assert!(status.success());
    }
    // Data files are byte-identical; wall times only live in the sidecar.
    assert_eq!(read(&dir1.join("det.json")), read(&dir2.join("det.json")));
    let csv1 = read(&dir1.join("det.csv"));
    let csv2 = read(&dir2.join("det.csv"));
    // The CSV carries a wall-seconds column; everything else must agree.
    for (l1, l2) in csv1.lines().zip(csv2.lines()) {
        let strip = |l: &str| {
            let cols: Vec<&str> = l.split(',').collect();
            cols.iter()
                .enumerate()
                .filter(|(i, _)| *i != 6)
                .map(|(_, c)| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        assert_eq!(strip(l1), strip(l2));
    }
}

#[test]
fn mc_estimate_is_seed_deterministic() {
    let dir = tempdir("mc");
    let domain_path = dir.join("domain.json");
    let status = bin()
        .args([
            "discretize",
            "--region",
            "square:1",
            "--mesh",
            "1/5",
            "--out",
            "domain.json",
            "--out-dir",
            dir.to_str().unwrap(),
        ])
        .status()
        .expect("discretize");
    assert!(status.success());

    let run = |out: &str| {
        let status = bin()
            .args([
                "mc",
                "--domain",
                domain_path.to_str().unwrap(),
                "--boundary",
                "plus",
                "--a",
                "0.5,0.5",
                "--sweeps",
                "2000",
                "--burn-in",
                "100",
                "--seed",
                "99",
                "--out",
                out,
                "--out-dir",
                dir.to_str().unwrap(),
            ])
            .status()
            .expect("mc");
        assert!(status.success());
        read(&dir.join(out))
    };
    assert_eq!(run("est1.json"), run("est2.json"));
}

#[test]
fn solve_export_has_one_row_per_medial_vertex() {
    let dir = tempdir("solve");
    let status = bin()
        .args([
            "discretize",
            "--region",
            "rect:0,0,1,0.67",
            "--mesh",
            "1/3",
            "--out",
            "cell.json",
            "--out-dir",
            dir.to_str().unwrap(),
        ])
        .status()
        .expect("discretize");
    assert!(status.success());
    let status = bin()
        .args([
            "solve",
            "--domain",
            dir.join("cell.json").to_str().unwrap(),
            "--a",
            "0.5,0.33",
            "--out",
            "field.csv",
            "--out-dir",
            dir.to_str().unwrap(),
        ])
        .status()
        .expect("solve");
    assert!(status.success());
    let csv = read(&dir.join("field.csv"));
    let lines: Vec<&str> = csv.lines().collect();
    // Header + one row per medial vertex (4 interior + 8 boundary for the
    // unit cell), exactly one of them the source.
    assert_eq!(lines.len(), 1 + 12);
    assert_eq!(lines.iter().filter(|l| l.ends_with("source")).count(), 1);
    assert_eq!(lines.iter().filter(|l| l.ends_with("boundary")).count(), 8);
}

#[test]
fn coupling_table_contains_exact_rows() {
    let dir = tempdir("coupling");
    let status = bin()
        .args([
            "coupling",
            "--radius",
            "5",
            "--out",
            "c0.csv",
            "--out-dir",
            dir.to_str().unwrap(),
        ])
        .status()
        .expect("coupling");
    assert!(status.success());
    let csv = read(&dir.join("c0.csv"));
    let exact_rows = csv.lines().filter(|l| l.ends_with(",exact")).count();
    assert_eq!(exact_rows, 12);
    assert!(csv.lines().any(|l| l.starts_with("1,0,0.25,0,")));
}

#[test]
fn energy_and_integral_export() {
    let dir = tempdir("energy");
    assert!(bin()
        .args([
            "discretize",
            "--region",
            "square:1",
            "--mesh",
            "1/6",
            "--out",
            "dom.json",
            "--out-dir",
            dir.to_str().unwrap(),
        ])
        .status()
        .unwrap()
        .success());
    let out = bin()
        .args([
            "energy",
            "--domain",
            dir.join("dom.json").to_str().unwrap(),
            "--a",
            "0.5,0.5",
            "--out",
            "energy.json",
            "--out-dir",
            dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&read(&dir.join("energy.json"))).unwrap();
    let plus = doc["plus"].as_f64().unwrap();
    let free = doc["free"].as_f64().unwrap();
    assert!(plus > 0.0 && (plus + free).abs() < 1e-15);

    assert!(bin()
        .args([
            "export",
            "--kind",
            "integral",
            "--domain",
            dir.join("dom.json").to_str().unwrap(),
            "--a",
            "0.5,0.5",
            "--out",
            "integral.csv",
            "--out-dir",
            dir.to_str().unwrap(),
        ])
        .status()
        .unwrap()
        .success());
    let csv = read(&dir.join("integral.csv"));
    // One value per primal and dual vertex plus the boundary entries:
    // 5×5 square at mesh 1/6 has 25 vertices, 16 dual vertices, 20 primal
    // and 16 dual boundary entries.
    assert_eq!(csv.lines().count(), 1 + 25 + 16 + 20 + 16);
}

#[test]
fn verify_quick_exits_zero() {
    let out = bin()
        .args(["verify", "--level", "quick"])
        .output()
        .expect("verify");
    assert!(
        out.status.success(),
        "verify failed:\n{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().filter(|l| l.starts_with("[PASS]")).count() >= 9);
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn oracle_json_round_trip() {
    let dir = tempdir("oracle");
    let status = bin()
        .args([
            "discretize",
            "--region",
            "rect:0,0,1,0.67",
            "--mesh",
            "1/3",
            "--out",
            "cell.json",
            "--out-dir",
            dir.to_str().unwrap(),
        ])
        .status()
        .expect("discretize");
    assert!(status.success());
    let out = bin()
        .args([
            "oracle",
            "--domain",
            dir.join("cell.json").to_str().unwrap(),
            "--a",
            "0.5,0.33",
        ])
        .output()
        .expect("oracle");
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json");
    let z = v["z_sum"].as_f64().unwrap();
    let zp = v["z_plus"].as_f64().unwrap();
    let zm = v["z_minus"].as_f64().unwrap();
    assert!((zp + zm - z).abs() < 1e-14);
    assert!((v["spinor"][0].as_f64().unwrap() - zp / z).abs() < 1e-14);
}

fn tempdir(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("ising-energy-test-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).expect("create temp dir");
    dir
}
