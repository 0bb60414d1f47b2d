use std::process::{Command, Output};

use lmg_cli::codec::{decode_spectrum_json, decode_sweep_csv, SPECTRUM_CSV_HEADER};
use lmg_core::Half;

fn lmg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lmg")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = lmg(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows = rdr.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn spectrum_n8_accounts_for_256_states() {
    let (header, rows) = csv_rows(&ok(&["spectrum", "--n", "8", "--delta", "1"]));
    assert_eq!(header, SPECTRUM_CSV_HEADER);
    let total: u64 = rows.iter().map(|r| r[4].parse::<u64>().unwrap()).sum();
    assert_eq!(total, 256);
    let energies: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(energies.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn spectrum_single_particle() {
    let (_, rows) = csv_rows(&ok(&["spectrum", "--n", "1", "--delta", "5"]));
    let energies: Vec<&str> = rows.iter().map(|r| r[3].as_str()).collect();
    assert_eq!(energies, ["-0.5", "0.5"]);
}

#[test]
fn spectrum_json_matches_schema() {
    let text = ok(&["spectrum", "--n", "7", "--delta", "2", "--format", "json"]);
    let schema: serde_json::Value =
        serde_json::from_str(include_str!("../../../docs/spectrum-report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(validator.is_valid(&doc), "{:?}", validator.iter_errors(&doc).map(|e| e.to_string()).collect::<Vec<_>>());

    let report = decode_spectrum_json(&text).unwrap();
    assert_eq!(report.entries.iter().map(|e| e.degeneracy).sum::<u64>(), 128);
    assert_eq!(report.units, "epsilon");

    let mut broken = doc.clone();
    broken.as_object_mut().unwrap().remove("units");
    assert!(!validator.is_valid(&broken));
    let mut broken = doc.clone();
    broken["entries"][0]["j"] = "7/3".into();
    assert!(!validator.is_valid(&broken));

    // the large-N sector shifts are surds
    let text = ok(&["spectrum", "--n", "8", "--format", "json"]);
    assert!(validator.is_valid(&serde_json::from_str(&text).unwrap()));
}

#[test]
fn epsilon_rescales_energies() {
    let base = decode_spectrum_json(&ok(&["spectrum", "--n", "5", "--delta", "1.5", "--format", "json"])).unwrap();
    let scaled =
        decode_spectrum_json(&ok(&["spectrum", "--n", "5", "--delta", "1.5", "--format", "json", "--epsilon", "2.5"]))
            .unwrap();
    assert_eq!(scaled.units, "absolute");
    assert_eq!(scaled.params.epsilon, 2.5);
    for (a, b) in base.entries.iter().zip(&scaled.entries) {
        assert_eq!(a.energy * 2.5, b.energy);
        assert_eq!(a.degeneracy, b.degeneracy);
    }
}

#[test]
fn sweep_layout_and_determinism() {
    let args = ["sweep", "--n", "7", "--delta-min", "0", "--delta-max", "10", "--steps", "200"];
    let text = ok(&args);
    assert!(text.starts_with("delta,j,J,c,index,energy\n"));
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    let rows = decode_sweep_csv(&text).unwrap();
    // one row per grid point and block eigenvalue; the distinct blocks of N = 7 span 8 + 6 + 4 + 2 states
    assert_eq!(rows.len(), 201 * 20);
    assert_eq!(rows.first().unwrap().delta, 0.0);
    assert_eq!(rows.last().unwrap().delta, 10.0);
    assert_eq!(ok(&args), text);
}

#[test]
fn sweep_single_point_is_unperturbed() {
    let text = ok(&["sweep", "--n", "8", "--delta-max", "0", "--steps", "1"]);
    let rows = decode_sweep_csv(&text).unwrap();
    assert!(rows.iter().all(|r| r.delta == 0.0));
    for twice in [0i64, 2, 4, 6, 8] {
        let j = Half::from_twice(twice);
        let mut got: Vec<f64> = rows.iter().filter(|r| r.j == j).map(|r| r.energy).collect();
        got.sort_by(f64::total_cmp);
        let want: Vec<f64> = (-twice / 2..=twice / 2).map(|m| m as f64).collect();
        assert_eq!(got, want, "j = {j}");
    }
}

#[test]
fn sweep_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let stdout = ok(&["sweep", "--n", "4", "--delta-max", "2", "--steps", "4", "--out", path.to_str().unwrap()]);
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(decode_sweep_csv(&text).unwrap().len(), 5 * (5 + 3 + 1));
}

#[test]
fn verify_small_is_exact_at_zero_delta() {
    let (header, rows) = csv_rows(&ok(&["verify", "--n-max", "2"]));
    assert_eq!(header, ["check", "n", "delta", "value", "tolerance", "status", "detail"]);
    assert!(rows.iter().all(|r| r[5] == "pass"));
    for r in rows.iter().filter(|r| r[2] == "0") {
        assert_eq!(r[3], "0", "{r:?}");
    }
}

#[test]
fn verify_up_to_ten_passes() {
    let text = ok(&["verify", "--n-max", "10", "--tol", "1e-9", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["passed"], true);
    let checks = doc["checks"].as_array().unwrap();
    for name in ["fock-vs-jblock", "fock-vs-split", "jblock-vs-split", "fock-commutators", "rep-commutators", "casimir-scalar"] {
        assert!(checks.iter().any(|c| c["name"] == name && c["n"] == 10), "{name}");
    }
}

#[test]
fn verify_reports_injected_fault() {
    let out = lmg(&["verify", "--n-max", "2", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(4));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("fock-vs-split"), "{stderr}");
    let (_, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert!(rows.iter().any(|r| r[5] == "fail"));
}

fn table(n: &str, delta: &str) -> Vec<Vec<String>> {
    let (header, rows) = csv_rows(&ok(&["table", "--n", n, "--delta", delta]));
    assert_eq!(header, ["j", "m_j", "J", "index", "energy", "closed_form", "closed_form_energy"]);
    rows
}

fn energies(rows: &[Vec<String>], j: &str, big_j: &str) -> Vec<f64> {
    rows.iter().filter(|r| r[0] == j && r[2] == big_j).map(|r| r[4].parse().unwrap()).collect()
}

#[test]
fn table_seven_at_unit_delta() {
    let rows = table("7", "1");
    let root = (1.0f64 + 3.0 / 49.0).sqrt();
    let mut want = vec![-0.5 - root, 0.5 - root, root - 0.5, root + 0.5];
    want.sort_by(f64::total_cmp);
    let got = energies(&rows, "3/2", "1/2");
    assert_eq!(got.len(), 4);
    for (g, w) in got.iter().zip(&want) {
        assert!(close(*g, *w, 1e-10), "{g} vs {w}");
    }
    assert!(rows.iter().filter(|r| r[0] == "3/2").all(|r| r[1] == "14"));
}

#[test]
fn table_eight() {
    let rows = table("8", "2");
    let a = (1.0f64 + 9.0 * 4.0 / 64.0).sqrt();
    let b = (4.0f64 + 3.0 * 4.0 / 16.0).sqrt();
    let got = energies(&rows, "2", "1/2");
    assert!(got.len() == 2 && close(got[0], -a, 1e-10) && close(got[1], a, 1e-10), "{got:?}");
    let got = energies(&rows, "2", "1");
    assert!(got.len() == 3 && close(got[0], -b, 1e-10) && got[1].abs() < 1e-12 && close(got[2], b, 1e-10), "{got:?}");

    for r in table("8", "0") {
        let e: f64 = r[4].parse().unwrap();
        assert_eq!(e, e.round(), "{r:?}");
        if !r[6].is_empty() {
            assert_eq!(r[6].parse::<f64>().unwrap(), e, "{r:?}");
        }
    }
}

#[test]
fn supplementary_report() {
    let args = ["supplementary", "--n", "8", "--j", "4", "--j-max", "6", "--delta", "1", "--format", "json"];
    let text = ok(&args);
    assert_eq!(ok(&args), text);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let reps = doc["representations"].as_array().unwrap();
    let lmg_reps = lmg_core::algebra::decompose(Half::from_int(4), 8).unwrap();
    assert_eq!(doc["lmg"], lmg_reps.len());
    for rep in &lmg_reps {
        assert!(
            reps.iter().any(|r| r["kind"] == "LMG" && r["J"] == rep.big_j.to_string() && r["c"] == rep.c.to_string()),
            "{rep}"
        );
    }
    for r in reps {
        if let Some(p) = r["min_product"].as_f64() {
            assert!(p >= 0.0);
        }
        let dim = r["J"].as_str().unwrap().parse::<Half>().unwrap().twice() + 1;
        assert_eq!(r["eigenvalues"].as_array().unwrap().len() as i64, dim);
    }
    assert!(reps.iter().any(|r| r["kind"] == "supplementary"));
}

#[test]
fn outputs_are_byte_identical() {
    for args in [
        &["spectrum", "--n", "9", "--delta", "0.7"][..],
        &["spectrum", "--n", "6", "--delta", "3", "--format", "json"],
        &["table", "--n", "8", "--delta", "1.25", "--format", "json"],
        &["verify", "--n-max", "4", "--delta", "2"],
    ] {
        assert_eq!(ok(args), ok(args), "{args:?}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("out.csv");
    let out = lmg(&["spectrum", "--n", "3", "--out", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    for args in [&["spectrum", "--n", "0"][..], &["sweep", "--n", "4", "--delta-min", "3", "--delta-max", "1"], &["verify", "--tol", "-1"]] {
        assert_eq!(lmg(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(lmg(&["spectrum", "--n", "63"]).status.code(), Some(2));
    assert_eq!(lmg(&["--help"]).status.code(), Some(0));
    assert_eq!(lmg(&["--version"]).status.code(), Some(0));
}
