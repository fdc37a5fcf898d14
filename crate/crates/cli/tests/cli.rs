use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tpgr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tpgr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json_report(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = tpgr(&all);
    let text = if out.stdout.is_empty() { &out.stderr } else { &out.stdout };
    let v: Value = serde_json::from_slice(text)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(text)));
    (code(&out), v)
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check `{name}`"))
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    rdr.records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn verify_theorem2_passes() {
    let (c, rep) = json_report(&["verify", "--metric", "theorem2", "--t", "-1:4.4:40", "--r", "0.05:20:40log"]);
    assert_eq!(c, 0);
    assert_eq!(rep["sign_convention"], "+1");
    assert_eq!(rep["seed"], 42);
    assert!(check(&rep, "max_zero_scaled_ricci")["value"].as_f64().unwrap() <= 1e-7);
}

#[test]
fn verify_minkowski_has_zero_residual() {
    let (c, rep) = json_report(&["verify", "--metric", "minkowski"]);
    assert_eq!(c, 0);
    assert_eq!(check(&rep, "max_zero_scaled_ricci")["value"], 0.0);
}

#[test]
fn perturbed_file_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("perturbed.metric");
    let out = tpgr(&["catalog", "--name", "theorem2", "--emit", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let perturbed: String = text
        .lines()
        .map(|l| {
            if l.starts_with("g[2][2]") {
                format!("{l}+0.001*r\n")
            } else {
                format!("{l}\n")
            }
        })
        .collect();
    assert_ne!(perturbed, text);
    std::fs::write(&path, perturbed).unwrap();
    let (c, rep) = json_report(&["verify", "--metric", path.to_str().unwrap()]);
    assert_eq!(c, 1);
    assert!(check(&rep, "max_zero_scaled_ricci")["value"].as_f64().unwrap() > 1e-6);
    assert_eq!(rep["metric"]["name"], "theorem2");
}

#[test]
fn curvature_table_at_the_origin_of_time() {
    let (c, rep) = json_report(&["curvature", "--metric", "theorem2", "--at", "t=0,r=1"]);
    assert_eq!(c, 0);
    let k = check(&rep, "K");
    assert_eq!(k["status"], "pass");
    assert!((k["value"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    assert_eq!(k["expected"], 0.75);
    let r0131 = check(&rep, "R_0131");
    assert!((r0131["value"].as_f64().unwrap() - 0.125).abs() < 1e-12);
    assert_eq!(r0131["expected"], 0.125);
}

#[test]
fn curvature_of_schwarzschild() {
    let (c, rep) = json_report(&["curvature", "--metric", "schwarzschild", "--M", "1", "--at", "r=4,theta=1.1"]);
    assert_eq!(c, 0);
    for name in ["Ric_00", "Ric_11", "Ric_22", "Ric_33", "Ric_03"] {
        assert_eq!(check(&rep, name)["status"], "pass");
    }
    assert!((check(&rep, "K")["value"].as_f64().unwrap() - 48.0 / 4096.0).abs() < 1e-15);
}

#[test]
fn curvature_at_a_degenerate_point_is_a_domain_error() {
    let out = tpgr(&["curvature", "--at", "t=-1.5707963267948966,r=1"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside the regular domain"));
}

#[test]
fn null_curves_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curves.csv");
    let out = tpgr(&["nullcurves", "--t0", "0.5", "--r0", "1", "--branch", "both", "--r-end", "50", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let header = std::fs::read_to_string(&path).unwrap();
    assert!(header.starts_with("curve_id,branch,r,t,residual\n"));
    let rows = read_csv(&path);
    let ids: std::collections::BTreeSet<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(ids.len(), 2);
    for row in &rows {
        let t: f64 = row[3].parse().unwrap();
        let res: f64 = row[4].parse().unwrap();
        assert!(res <= 1e-6);
        if row[1] == "plus" {
            assert!(t < 1.5 * std::f64::consts::PI - 1e-3);
        }
        // 17 significant digits: one leading digit and 16 after the point.
        let mantissa = row[2].split('e').next().unwrap();
        assert_eq!(mantissa.trim_start_matches('-').len(), 18, "{}", row[2]);
    }
    let last_plus = rows.iter().rfind(|r| r[1] == "plus").unwrap();
    assert_eq!(last_plus[2].parse::<f64>().unwrap(), 50.0);
}

#[test]
fn minkowski_null_curves_are_straight() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat.csv");
    let out = tpgr(&["nullcurves", "--metric", "minkowski", "--t0", "0.2", "--r0", "1,2", "--r-end", "5", "--step", "0.1", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let rows = read_csv(&path);
    let ids: std::collections::BTreeSet<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(ids.len(), 4);
    for row in rows {
        let (r, t): (f64, f64) = (row[2].parse().unwrap(), row[3].parse().unwrap());
        let r0 = if row[0] == "0" || row[0] == "1" { 1.0 } else { 2.0 };
        let want = if row[1] == "plus" { 0.2 + (r - r0) } else { 0.2 - (r - r0) };
        assert!((t - want).abs() < 1e-12, "{row:?}");
    }
}

#[test]
fn scan_reports_the_cubic_slope() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let (c, rep) = json_report(&["scan", "--t", "0:0:1", "--r", "1e-4:1e-1:31log", "--out", path.to_str().unwrap()]);
    assert_eq!(c, 0);
    let slope = rep["data"]["fits"][0]["slope"].as_f64().unwrap();
    assert!((slope + 3.0).abs() <= 1e-3, "{slope}");
    let rows = read_csv(&path);
    assert_eq!(rows.len(), 31);
    assert_eq!(rep["data"]["loci"][0]["kind"], "essential");
}

#[test]
fn scan_toward_the_degenerate_time() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let (_, rep) = json_report(&["scan", "--t", "-1.5697963267948966:-1:12", "--r", "1:1:1", "--out", path.to_str().unwrap()]);
    let rows = read_csv(&path);
    let first = &rows[0];
    assert!(first[2].parse::<f64>().unwrap() < 1e-12);
    assert!(first[4].parse::<f64>().unwrap() > 1e6);
    let loci = rep["data"]["loci"].as_array().unwrap();
    assert!(loci.iter().any(|l| l["kind"] == "non_essential" && l["coordinate"] == "t"));
}

#[test]
fn minkowski_scan_is_flat() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    let out = tpgr(&["scan", "--metric", "minkowski", "--t", "-1:1:3", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(read_csv(&path).iter().all(|r| r[2].parse::<f64>().unwrap() == 0.0));
}

#[test]
fn slice_at_t_zero() {
    let (c, rep) = json_report(&["slice", "--metric", "theorem2", "--t0", "0", "--r", "4"]);
    assert_eq!(c, 0);
    let rr = check(&rep, "dr^2 (r=4)");
    assert_eq!(rr["value"], -0.5);
    assert_eq!(rr["expected"], -0.5);
    assert_eq!(check(&rep, "dtheta^2 (r=4)")["value"], -0.5);
}

#[test]
fn slice_in_a_degenerate_band_is_a_domain_error() {
    let out = tpgr(&["slice", "--t0", "-1.5707963267948966", "--r", "4"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn killing_residuals() {
    let (c, rep) = json_report(&["killing", "--metric", "theorem2", "--xi", "0,0,1,0", "--at", "t=1,r=2"]);
    assert_eq!(c, 0);
    assert!(check(&rep, "normalized_residual")["value"].as_f64().unwrap() <= 1e-9);
    let (c, rep) = json_report(&["killing", "--xi", "1,0,0,0", "--at", "t=0,r=1"]);
    assert_eq!(c, 1);
    let k22 = check(&rep, "K_22")["value"].as_f64().unwrap();
    assert!((k22 + 2.0).abs() <= 2e-6);
}

#[test]
fn catalog_member_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t1.metric");
    let p = path.to_str().unwrap();
    let out = tpgr(&[
        "catalog", "--name", "theorem1", "--f", "2+cos(2*t)", "--c", "1+0.3*sin(t)", "--q", "sin(t)", "--H0", "t",
        "--H1", "1+t^2", "--emit", p,
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let (c, rep) = json_report(&["verify", "--metric", p]);
    assert_eq!(c, 0);
    assert_eq!(rep["metric"]["name"], "theorem1");
    let text = std::fs::read_to_string(&path).unwrap();
    let back = tpgr_cli::parse_metric_file(&text, "x").unwrap();
    assert_eq!(tpgr_cli::emit_metric_file(&back), text);
}

#[test]
fn catalog_without_emit_prints_the_file() {
    let out = tpgr(&["catalog", "--name", "schwarzschild", "--M", "2"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("name = schwarzschild\n"));
    assert!(text.contains("param M = 2e0"));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.metric");
    std::fs::write(&bad, "coords = t, r, theta, phi\nmetric = 1\n").unwrap();
    let out = tpgr(&["verify", "--metric", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2: unknown key `metric`"));

    std::fs::write(&bad, "coords = t, r, theta, phi\ng[0][0] = 1+*r\n").unwrap();
    let out = tpgr(&["verify", "--metric", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("position"));

    assert_eq!(code(&tpgr(&["verify", "--metric", "no-such-metric"])), 2);
    assert_eq!(code(&tpgr(&["verify", "--t", "1:2"])), 2);
    assert_eq!(code(&tpgr(&["killing", "--xi", "1,0,0"])), 2);
    assert_eq!(code(&tpgr(&["frobnicate"])), 2);
}

#[test]
fn numeric_errors_exit_3() {
    assert_eq!(code(&tpgr(&["verify", "--metric", "schwarzschild", "--M", "-1"])), 3);
    assert_eq!(code(&tpgr(&["nullcurves", "--t0", "-1.5707963267948966"])), 3);
    assert_eq!(code(&tpgr(&["verify", "--metric", "theorem1", "--f", "sin(t)"])), 3);
}

#[test]
fn seeded_runs_are_reproducible() {
    let args = ["verify", "--metric", "theorem1", "--random", "--seed", "7", "--samples", "20", "--t", "0:1:3", "--r", "1:2:3"];
    let (c1, a) = json_report(&args);
    let (c2, b) = json_report(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a["metric"]["hash"], b["metric"]["hash"]);
    assert_eq!(a["checks"], b["checks"]);
    assert_eq!(a["seed"], 7);
}
