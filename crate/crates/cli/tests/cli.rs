use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, SQRT_2};
use std::io::Write;
use std::process::{Command, Output};

use loxo_core::autoparallel::collinearity_residual;

fn loxo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loxo"))
        .args(args)
        .env_remove("LOXO_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_records(o: &Output) -> Vec<serde_json::Value> {
    String::from_utf8(o.stderr.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("stderr line is a JSON record"))
        .collect()
}

/// Header plus numeric rows; non-numeric cells become NaN.
fn csv_table(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| {
            rec.unwrap()
                .iter()
                .map(|c| c.parse().unwrap_or(f64::NAN))
                .collect()
        })
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<f64>], name: &str) -> Vec<f64> {
    let k = header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[k]).collect()
}

#[test]
fn project_sphere_to_mercator() {
    let o = loxo(&[
        "project", "--chart", "sphere", "--to", "mercator", "--point", "0.5,0.3", "--R", "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = csv_table(&stdout(&o));
    assert_eq!(h, ["phi", "theta", "x", "y"]);
    assert_eq!(rows.len(), 1);
    assert!((rows[0][2] - 0.5).abs() < 1e-15);
    // asinh(tan 0.3)
    assert!((rows[0][3] - 0.304_603_974_401_704_1).abs() < 1e-15);
}

#[test]
fn project_scales_with_radius_and_inverts() {
    let o = loxo(&["project", "--point", "0.5,0.3", "--R", "2", "--phi0", "0.1"]);
    let (_, rows) = csv_table(&stdout(&o));
    assert!((rows[0][2] - 0.8).abs() < 1e-15);
    assert!((rows[0][3] - 0.609_207_948_803_408_2).abs() < 1e-14);

    let o = loxo(&["project", "--invert", "--point", "0,0", "--phi0", "0.7"]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = csv_table(&stdout(&o));
    assert_eq!(h, ["x", "y", "phi", "theta"]);
    assert_eq!(rows[0][2..], [0.7, 0.0]);
}

#[test]
fn project_gauss_chain() {
    let o = loxo(&[
        "project",
        "--chart",
        "gauss",
        "--to",
        "flattened",
        "--point",
        "1,2",
        "--sigma-min",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let (_, rows) = csv_table(&stdout(&o));
    // normalized (1, 1) -> flattened (1, sqrt 2)
    assert!((rows[0][2] - 1.0).abs() < 1e-15);
    assert!((rows[0][3] - SQRT_2).abs() < 1e-15);
    let o = loxo(&[
        "project",
        "--chart",
        "gauss",
        "--to",
        "flattened",
        "--point",
        "1,2",
        "--R",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_records(&o)[0]["code"], "precondition");
}

#[test]
fn malformed_point_is_a_usage_error() {
    let o = loxo(&["project", "--point", "0.5;x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    let rec = &stderr_records(&o)[0];
    assert_eq!(rec["code"], "usage");
    assert_eq!(rec["field"], "point");
}

#[test]
fn domain_error_names_field() {
    let o = loxo(&["project", "--chart", "sphere", "--point", "0,2"]);
    assert_eq!(o.status.code(), Some(2));
    let rec = &stderr_records(&o)[0];
    assert_eq!(rec["code"], "domain");
    assert_eq!(rec["field"], "theta");
}

#[test]
fn sphere_loxodrome_rows_and_image() {
    let o = loxo(&[
        "loxodrome",
        "--course",
        "pi/3",
        "--grid",
        "100",
        "--to",
        "mercator",
        "--t-end",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = csv_table(&stdout(&o));
    assert_eq!(h, ["t", "a", "b", "x", "y"]);
    assert_eq!(rows.len(), 100);
    let image: Vec<[f64; 2]> = rows.iter().map(|r| [r[3], r[4]]).collect();
    assert!(collinearity_residual(&image) <= 1e-10);
}

#[test]
fn pseudosphere_loxodrome_formula() {
    let o = loxo(&[
        "loxodrome",
        "--chart",
        "pseudosphere",
        "--course",
        "pi/4",
        "--phi0",
        "0.5",
        "--t-end",
        "2",
        "--dt",
        "0.01",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = csv_table(&stdout(&o));
    assert_eq!(rows.len(), 201);
    let (t, a, b) = (
        column(&h, &rows, "t"),
        column(&h, &rows, "a"),
        column(&h, &rows, "b"),
    );
    for k in 0..t.len() {
        let expect = 0.5 + FRAC_PI_4.tan() * (t[k] / SQRT_2).exp();
        assert!((a[k] - expect).abs() < 1e-12 * expect);
        assert_eq!(b[k], t[k]);
    }
    assert!((a[200] - 4.613_250_378_782_927).abs() < 1e-14);
}

#[test]
fn zero_grid_and_bad_course() {
    let o = loxo(&["loxodrome", "--course", "1", "--grid", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let o = loxo(&["loxodrome", "--course", "pi/2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_records(&o)[0]["field"], "course");
    let o = loxo(&["loxodrome"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_records(&o)[0]["field"], "course");
}

#[test]
fn fields_sphere_connection_column() {
    let o = loxo(&[
        "fields",
        "--point",
        "1,0;1,pi/6;1,pi/4",
        "--field",
        "connection",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let values: Vec<f64> = text
        .lines()
        .filter(|l| l.contains(",phi_theta_phi,"))
        .map(|l| l.split(',').nth(4).unwrap().parse().unwrap())
        .collect();
    let expect = [0.0, -FRAC_PI_6.tan(), -1.0];
    assert_eq!(values.len(), 3);
    for (v, e) in values.iter().zip(expect) {
        assert!((v - e).abs() < 1e-12);
    }
    assert_eq!(text.lines().count(), 1 + 3 * 8);
}

#[test]
fn fields_pseudosphere_constant_and_flat() {
    let o = loxo(&["fields", "--chart", "pseudosphere", "--R", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let gammas: Vec<f64> = text
        .lines()
        .filter(|l| l.contains(",connection,phi_u_phi,"))
        .map(|l| l.split(',').nth(4).unwrap().parse().unwrap())
        .collect();
    assert_eq!(gammas.len(), 25);
    assert!(gammas.iter().all(|g| (g + 1.0 / 3.0).abs() < 1e-12));
    let riemann: Vec<&str> = text.lines().filter(|l| l.contains(",riemann,")).collect();
    assert_eq!(riemann.len(), 25 * 16);
    assert!(riemann.iter().all(|l| l.ends_with(",ZERO")));
}

#[test]
fn fields_row_errors_and_total_failure() {
    let o = loxo(&[
        "fields",
        "--chart",
        "pseudosphere",
        "--point",
        "0,1;0,-1",
        "--field",
        "torsion",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stderr_records(&o).len(), 1);
    assert_eq!(stdout(&o).lines().count(), 1 + 8);
    let o = loxo(&["fields", "--chart", "pseudosphere", "--point", "0,-1;0,-2"]);
    assert_eq!(o.status.code(), Some(3));
    let recs = stderr_records(&o);
    assert_eq!(recs.len(), 2);
    assert!(recs.iter().all(|r| r["field"] == "u"));
}

#[test]
fn verify_subset_and_json() {
    let o = loxo(&["verify", "--only", "gudermannian"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 3);
    assert!(text.ends_with("1/1 criteria passed\n"));

    let o = loxo(&["verify", "--json", "--only", "kappa"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["group"], "kappa");
    assert_eq!(v[0]["passed"], true);

    let o = loxo(&["verify", "--only", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gauss_family_columns() {
    let o = loxo(&["gauss", "--course", "pi/4", "--grid", "21"]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = csv_table(&stdout(&o));
    assert_eq!(
        h,
        [
            "t",
            "mu",
            "sigma",
            "mu_norm",
            "sigma_norm",
            "phi",
            "u",
            "x_flat",
            "y_flat"
        ]
    );
    assert_eq!(rows.len(), 21);
    let sigma = column(&h, &rows, "sigma");
    assert!(sigma.windows(2).all(|w| w[1] > w[0]));
    let flat: Vec<[f64; 2]> = rows.iter().map(|r| [r[7], r[8]]).collect();
    assert!(collinearity_residual(&flat) <= 1e-10);

    let o2 = loxo(&[
        "gauss",
        "--course",
        "pi/4",
        "--grid",
        "21",
        "--sigma-min",
        "2",
    ]);
    let (h2, rows2) = csv_table(&stdout(&o2));
    for (a, b) in sigma.iter().zip(column(&h2, &rows2, "sigma")) {
        assert_eq!(b, 2.0 * a);
    }
}

#[test]
fn gauss_truncation_warns() {
    let o = loxo(&["gauss", "--course", "pi/4", "--t-end", "3", "--dt", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let (_, rows) = csv_table(&stdout(&o));
    assert_eq!(rows.len(), 3);
    let recs = stderr_records(&o);
    assert_eq!(recs[0]["code"], "region-exit");
}

#[test]
fn json_mirrors_csv() {
    let csv_out = loxo(&["loxodrome", "--course", "0.4", "--grid", "7"]);
    let json_out = loxo(&["loxodrome", "--course", "0.4", "--grid", "7", "--json"]);
    let (h, rows) = csv_table(&stdout(&csv_out));
    let v: serde_json::Value = serde_json::from_slice(&json_out.stdout).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), rows.len());
    for (obj, row) in arr.iter().zip(&rows) {
        let keys: Vec<&String> = obj.as_object().unwrap().keys().collect();
        assert_eq!(keys, h.iter().collect::<Vec<_>>());
        for (name, x) in h.iter().zip(row) {
            assert_eq!(obj[name].as_f64().unwrap(), *x);
        }
    }
}

#[test]
fn commands_are_deterministic() {
    for args in [
        &[
            "loxodrome",
            "--course",
            "2",
            "--grid",
            "50",
            "--to",
            "mercator",
        ][..],
        &["fields", "--chart", "pseudosphere"][..],
        &["gauss", "--course", "pi/4", "--json"][..],
    ] {
        assert_eq!(loxo(args).stdout, loxo(args).stdout);
    }
}

#[test]
fn config_precedence() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(
        file,
        "R = 2\ncourse = \"pi/4\"\ngrid = 3\nformat = \"json\""
    )
    .unwrap();
    let path = file.path().to_str().unwrap();

    let o = loxo(&["--config", path, "loxodrome", "--to", "mercator"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    // x = R tan(course) t / R with t = 1 at the end
    assert!((v[2]["x"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((v[2]["a"].as_f64().unwrap() - 0.5).abs() < 1e-12);

    let o = loxo(&[
        "--config",
        path,
        "loxodrome",
        "--R",
        "1",
        "--grid",
        "2",
        "--csv",
    ]);
    let (_, rows) = csv_table(&stdout(&o));
    assert_eq!(rows.len(), 2);
    assert!((rows[1][1] - 1.0).abs() < 1e-12);

    let env = Command::new(env!("CARGO_BIN_EXE_loxo"))
        .args(["loxodrome"])
        .env("LOXO_CONFIG", path)
        .output()
        .unwrap();
    assert_eq!(env.stdout, loxo(&["--config", path, "loxodrome"]).stdout);
}

#[test]
fn bad_config_is_rejected() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "radius = 2").unwrap();
    let o = loxo(&[
        "--config",
        file.path().to_str().unwrap(),
        "verify",
        "--only",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_records(&o)[0]["code"], "config");
    let o = loxo(&["--config", "/nonexistent/loxo.toml", "verify"]);
    assert_eq!(o.status.code(), Some(2));
}
