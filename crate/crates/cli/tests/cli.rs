use std::process::{Command, Output};

fn shellspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shellspec")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn reformat(rows: &[Vec<f64>], header: &[String], ints: &[&str]) -> String {
    let mut out = header.join(",") + "\n";
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .zip(header)
            .map(|(x, h)| if ints.contains(&h.as_str()) { format!("{}", *x as i64) } else { format!("{x:.11e}") })
            .collect();
        out += &(cells.join(",") + "\n");
    }
    out
}

const ANNULUS: [&str; 6] = ["--dim", "2", "--alpha", "1", "--beta", "15"];

#[test]
fn spectrum_at_negative_h() {
    let mut args = vec!["spectrum"];
    args.extend(ANNULUS);
    args.extend(["--h", "-0.8", "--count", "4"]);
    let o = shellspec(&args);
    assert!(o.status.success());
    let text = stdout(&o);
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["k", "tau", "l", "j", "multiplicity"]);
    assert_eq!(rows.len(), 4);
    assert!((rows[1][1] - 0.0100829).abs() < 1e-6 && rows[1][2] == 0.0);
    for r in &rows[2..] {
        assert!((r[1] - 0.0126485).abs() < 1e-6 && r[2] == 1.0 && r[4] == 2.0);
    }
    assert_eq!(reformat(&rows, &header, &["k", "l", "j", "multiplicity"]), text);
}

#[test]
fn spectrum_methods_agree() {
    let mut args = vec!["spectrum"];
    args.extend(ANNULUS);
    args.extend(["--h", "-0.8", "--count", "6", "--method", "both", "--format", "json"]);
    let o = shellspec(&args);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "spectrum");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for r in rows {
        for key in ["k", "tau", "l", "j", "multiplicity", "delta_bessel"] {
            assert!(r.get(key).is_some(), "{key}");
        }
        assert!(r["delta_bessel"].as_f64().unwrap() < 1e-8);
    }
}

#[test]
fn dirichlet_spelling() {
    let mut args = vec!["spectrum"];
    args.extend(ANNULUS);
    for (h, ok) in [("inf", true), ("INF", true), ("Inf", true), ("1e999", false), ("infinity", false), ("nan", false)] {
        let mut a = args.clone();
        a.extend(["--h", h, "--count", "2"]);
        let o = shellspec(&a);
        assert_eq!(o.status.success(), ok, "{h}");
        if !ok {
            assert_eq!(o.status.code(), Some(2), "{h}");
        }
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(shellspec(&["spectrum", "--dim", "2"]).status.code(), Some(2));
    assert_eq!(shellspec(&["spectrum", "--dim", "2", "--alpha", "2", "--beta", "1", "--h", "0", "--count", "2"]).status.code(), Some(2));
    assert_eq!(
        shellspec(&["spectrum", "--dim", "3", "--alpha", "0.5", "--beta", "1", "--h", "0", "--count", "2", "--method", "bessel"]).status.code(),
        Some(2)
    );
    assert_eq!(shellspec(&["thresholds", "--which", "h1", "--dim", "2", "--beta", "1", "--l", "1"]).status.code(), Some(2));
    assert_eq!(shellspec(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        shellspec(&["bound", "--domain", "blob", "--dim", "2", "--alpha", "0.3", "--beta", "1", "--l", "0", "--h", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn tolerance_flags() {
    let base = ["spectrum", "--dim", "2", "--alpha", "0.5", "--beta", "1", "--h", "0", "--count", "3"];
    for bad in ["0", "-1", "nan", "inf"] {
        let flag = format!("--tol-eig={bad}");
        let mut a = base.to_vec();
        a.push(&flag);
        assert_eq!(shellspec(&a).status.code(), Some(2), "{bad}");
    }
    let mut a = base.to_vec();
    a.extend(["--tol-eig", "1e-10"]);
    assert!(shellspec(&a).status.success());
}

#[test]
fn solver_failures_exit_3() {
    // a relative quadrature tolerance far below roundoff cannot be met
    let o = shellspec(&[
        "bound", "--domain", "eccentric:d=0.2", "--dim", "2", "--alpha", "0.3", "--beta", "1", "--l", "1", "--h", "0",
        "--tol-quad", "1e-300",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("tolerance"));
}

#[test]
fn figure_one() {
    let dir = std::env::temp_dir().join(format!("shellspec-fig1-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fig1.csv");
    // 152 points put a node at h = −0.8
    let o = shellspec(&["figure", "--id", "fig1", "--out", path.to_str().unwrap(), "--points", "152"]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["h", "tau_02", "tau_11"]);
    assert_eq!(rows.len(), 152);
    assert_eq!(rows[0][0], -1.01);
    assert_eq!(rows[151][0], 0.5);
    let at = rows.iter().find(|r| (r[0] + 0.8).abs() < 1e-9).unwrap();
    assert!((at[1] - 0.0100829).abs() < 1e-6 && (at[2] - 0.0126485).abs() < 1e-6);
    assert!(rows.windows(2).all(|w| w[1][0] > w[0][0] && w[1][1] > w[0][1] && w[1][2] > w[0][2]));
    assert_eq!(reformat(&rows, &header, &[]), text);

    let diff: Vec<f64> = rows.iter().map(|r| r[1] - r[2]).collect();
    let changes: Vec<f64> =
        rows.windows(2).zip(diff.windows(2)).filter(|(_, d)| d[0].signum() != d[1].signum()).map(|(w, _)| w[1][0]).collect();
    // one sign change in (−0.8, 0) and another just above h₁ ≈ −0.991
    assert_eq!(changes.iter().filter(|&&h| -0.8 < h && h <= 0.0).count(), 1);
    assert_eq!(changes.len(), 2);
    assert!(changes[0] < -0.9);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn figure_four() {
    let o = shellspec(&["figure", "--id", "fig4"]);
    assert!(o.status.success());
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["alpha", "tau1_inner_disk", "tau2_sqrt2_shell", "mu2_disk_const"]);
    assert_eq!(rows.len(), 99);
    assert!(rows.windows(2).all(|w| w[1][0] > w[0][0]));
    let mut window = 0;
    for r in &rows {
        assert!((r[3] - 3.38995771667).abs() < 1e-10);
        if (0.2 - 1e-12..=0.6 + 1e-12).contains(&r[0]) {
            window += 1;
            assert!(r[1].min(r[3]) > r[2], "{r:?}");
        }
    }
    assert_eq!(window, 41);
}

#[test]
fn thresholds_on_the_annulus() {
    let run = |which: &str, extra: &[&str]| {
        let mut args = vec!["thresholds", "--which", which];
        args.extend(ANNULUS);
        args.extend(["--l", "1"]);
        args.extend(extra);
        let o = shellspec(&args);
        assert!(o.status.success(), "{which}");
        csv_rows(&stdout(&o))
    };
    let (header, h1) = run("h1", &[]);
    assert_eq!(header, ["value", "bracket_lo", "bracket_hi", "residual", "iterations"]);
    assert!(h1[0][0] < 0.0 && h1[0][3] < 1e-9);
    let (_, h0) = run("h0", &[]);
    assert!(h0[0][0] >= h1[0][0]);
    let (_, c) = run("crossing", &["--range", "-1.01", "0.5"]);
    assert_eq!(c.iter().filter(|r| -0.8 < r[0] && r[0] < 0.0).count(), 1);
    assert_eq!(c.len(), 2);
    assert!(c.windows(2).all(|w| w[0][0] < w[1][0]));
}

#[test]
fn alpha_star_needs_no_inner_radius() {
    let o = shellspec(&["thresholds", "--which", "alpha-star", "--dim", "2", "--beta", "1", "--l", "1", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let a = v["rows"][0]["value"].as_f64().unwrap();
    assert!(0.0 < a && a < 1.0);
}

#[test]
fn bound_cases() {
    let run = |domain: &str, l: &str, h: &str| {
        let o = shellspec(&["bound", "--domain", domain, "--dim", "2", "--alpha", "0.3", "--beta", "1", "--l", l, "--h", h]);
        assert!(o.status.success(), "{domain}");
        let (header, rows) = csv_rows(&stdout(&o));
        assert_eq!(header, ["quotient", "tau_l1", "gap"]);
        rows[0].clone()
    };
    assert!(run("concentric", "1", "-0.8")[2].abs() < 1e-7);
    let ecc = run("eccentric:d=0.21", "1", "-0.8");
    assert!(ecc[2] > 1e-6);
    for domain in ["concentric", "eccentric:d=0.21", "star:q=4,coeffs=0.1;0.03"] {
        let r = run(domain, "0", "0");
        assert!(r[0].abs() < 1e-10, "{domain}: {r:?}");
    }
    assert!(run("star:q=8,coeffs=0.12;-0.04,rot=0.3", "1", "inf")[2] >= -1e-7);
}

#[test]
fn output_independent_of_threads_and_format() {
    let args = ["spectrum", "--dim", "2", "--alpha", "0.4", "--beta", "1", "--h", "0.5", "--count", "10", "--method", "both"];
    let run = |threads: &str, format: &str| {
        let mut a = args.to_vec();
        a.extend(["--format", format]);
        let o = Command::new(env!("CARGO_BIN_EXE_shellspec")).args(&a).env("RAYON_NUM_THREADS", threads).output().unwrap();
        assert!(o.status.success());
        stdout(&o)
    };
    let csv1 = run("1", "csv");
    assert_eq!(csv1, run("4", "csv"));
    assert_eq!(run("1", "json"), run("4", "json"));
    let (_, rows) = csv_rows(&csv1);
    let v: serde_json::Value = serde_json::from_str(&run("2", "json")).unwrap();
    for (r, j) in rows.iter().zip(v["rows"].as_array().unwrap()) {
        assert_eq!(r[1], j["tau"].as_f64().unwrap());
    }
}

#[test]
fn verify_fast_suite_is_deterministic() {
    let a = shellspec(&["verify", "--suite", "fast"]);
    let b = shellspec(&["verify", "--suite", "fast"]);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let lines: Vec<&str> = text.lines().filter(|l| l.starts_with("criterion")).collect();
    assert_eq!(lines.len(), 11);
    // the sweep criterion fails on the second crossing; every other one passes
    for l in &lines {
        assert_eq!(l.contains(" PASS "), !l.starts_with("criterion  3 "), "{l}");
    }
    assert_eq!(a.status.code(), Some(1));
}

fn schema_type_ok(t: &str, v: &serde_json::Value) -> bool {
    match t {
        "string" => v.is_string(),
        "number" => v.is_number(),
        "null" => v.is_null(),
        _ => false,
    }
}

#[test]
fn json_matches_published_schema() {
    let schema: serde_json::Value =
        serde_json::from_str(include_str!("../schema/output-record.schema.json")).unwrap();
    let props = schema["properties"].as_object().unwrap();
    let commands: [&[&str]; 3] = [
        &["spectrum", "--dim", "2", "--alpha", "0.4", "--beta", "1", "--h", "inf", "--count", "3", "--method", "both"],
        &["thresholds", "--which", "h0", "--dim", "3", "--alpha", "0.5", "--beta", "1", "--l", "1"],
        &["bound", "--domain", "concentric", "--dim", "3", "--alpha", "0.5", "--beta", "1", "--l", "1", "--h", "0.5"],
    ];
    for args in commands {
        let mut a = args.to_vec();
        a.extend(["--format", "json"]);
        let o = shellspec(&a);
        assert!(o.status.success(), "{args:?}");
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        let obj = v.as_object().unwrap();
        let required: Vec<&str> = schema["required"].as_array().unwrap().iter().map(|k| k.as_str().unwrap()).collect();
        let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        keys.sort();
        let mut want = required.clone();
        want.sort();
        assert_eq!(keys, want);
        assert_eq!(v["schema_version"], props["schema_version"]["const"]);
        assert!(props["command"]["enum"].as_array().unwrap().contains(&v["command"]));
        for map in ["parameters", "diagnostics"] {
            assert!(v[map].as_object().unwrap().values().all(|x| x.is_string()), "{map}");
        }
        let columns: Vec<&str> =
            schema["$defs"]["columns"][args[0]].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
        let cell_types = props["rows"]["items"]["additionalProperties"]["type"].as_array().unwrap();
        for row in v["rows"].as_array().unwrap() {
            for (k, x) in row.as_object().unwrap() {
                assert!(columns.contains(&k.as_str()), "{k}");
                assert!(cell_types.iter().any(|t| schema_type_ok(t.as_str().unwrap(), x)), "{k}: {x}");
            }
        }
    }
}
