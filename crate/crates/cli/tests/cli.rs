use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;
use triwell::spectra::{find_ep3_continued, retuned_approach};

fn run(dir: &Path, args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_triwell"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn ok(dir: &Path, args: &[&str]) {
    let (code, _, err) = run(dir, args);
    assert_eq!(code, 0, "{args:?}: {err}");
}

fn csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn spectrum_hermitian_sweep() {
    let dir = TempDir::new().unwrap();
    ok(
        dir.path(),
        &[
            "spectrum",
            "--b",
            "6.1",
            "--big-gamma",
            "1.002",
            "--gamma",
            "0:0.06:0.01",
        ],
    );
    let (header, rows) = csv(&dir.path().join("spectrum.csv"));
    assert_eq!(header, ["gamma", "root_index", "re_k", "im_k", "residual"]);
    assert_eq!(rows.len(), 21);
    assert!(rows.iter().all(|r| r[3] == 0.0 && r[4] <= 1e-10));
}

#[test]
fn spectrum_decoupled_limit() {
    let dir = TempDir::new().unwrap();
    ok(
        dir.path(),
        &[
            "spectrum",
            "--b",
            "100",
            "--big-gamma",
            "1.002",
            "--gamma",
            "0.3",
        ],
    );
    let (_, rows) = csv(&dir.path().join("spectrum.csv"));
    let mut ks: Vec<(f64, f64)> = rows.iter().map(|r| (r[2], r[3])).collect();
    ks.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.total_cmp(&a.1)));
    let expected = [(0.501, 0.0), (0.5, 0.15), (0.5, -0.15)];
    assert_eq!(ks.len(), 3);
    for (k, e) in ks.iter().zip(&expected) {
        assert!(
            (k.0 - e.0).abs() < 1e-10 && (k.1 - e.1).abs() < 1e-10,
            "{k:?}"
        );
    }
}

#[test]
fn usage_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let cases: &[&[&str]] = &[
        &[
            "spectrum",
            "--b",
            "6.1",
            "--big-gamma",
            "1.002",
            "--gamma",
            "",
        ],
        &[
            "spectrum",
            "--b",
            "-1",
            "--big-gamma",
            "1.002",
            "--gamma",
            "0",
        ],
        &[
            "spectrum",
            "--b",
            "6.1",
            "--big-gamma",
            "1.002",
            "--gamma",
            "0.1:0:0.01",
        ],
        &["find-ep3", "--big-gamma", "1.002", "--guess", "0.06,6.2"],
        &[
            "waveguide",
            "--n0",
            "3.3",
            "--delta-n",
            "1e-3",
            "--lambda0",
            "1.55",
            "--a",
            "0",
        ],
        &[
            "evolve",
            "--gamma",
            "0",
            "--b",
            "6.1",
            "--big-gamma",
            "1.002",
            "--width",
            "0",
        ],
        &["modes", "--gamma", "0", "--b", "6.1"],
    ];
    for args in cases {
        let (code, _, _) = run(dir.path(), args);
        assert_eq!(code, 2, "{args:?}");
    }
}

fn mode_profiles(dir: &Path) -> Vec<Vec<(f64, f64, f64)>> {
    (1..=3)
        .map(|i| {
            let (_, rows) = csv(&dir.join(format!("mode_{i}.csv")));
            rows.iter().map(|r| (r[0], r[1], r[2])).collect()
        })
        .collect()
}

#[test]
fn hermitian_middle_mode_is_imaginary() {
    let dir = TempDir::new().unwrap();
    ok(
        dir.path(),
        &[
            "modes",
            "--gamma",
            "0",
            "--b",
            "6.1",
            "--big-gamma",
            "1.002",
        ],
    );
    let modes = mode_profiles(dir.path());
    let middle = &modes[1];
    let scale = middle.iter().map(|p| p.2.abs()).fold(0.0, f64::max);
    assert!(scale > 0.01);
    assert!(middle.iter().all(|p| p.1.abs() <= 1e-12 * scale));
    // Odd in x.
    let n = middle.len();
    for i in 0..n {
        assert!((middle[i].2 + middle[n - 1 - i].2).abs() <= 1e-10 * scale);
    }
    let side = json(&dir.path().join("modes.json"));
    assert_eq!(side["modes"].as_array().unwrap().len(), 3);
    assert_eq!(side["modes"][1]["branch"], "gamma_zero_limit");
}

/// Grid indices of local maxima of |Ψ|.
fn peaks(profile: &[(f64, f64, f64)]) -> Vec<usize> {
    let mag: Vec<f64> = profile.iter().map(|p| p.1.hypot(p.2)).collect();
    (1..mag.len() - 1)
        .filter(|&i| mag[i] > mag[i - 1] && mag[i] >= mag[i + 1])
        .collect()
}

#[test]
fn near_ep3_profiles_coincide() {
    let dir = TempDir::new().unwrap();
    ok(
        dir.path(),
        &[
            "modes",
            "--gamma",
            "0.065",
            "--b",
            "6.2075",
            "--big-gamma",
            "1.002",
        ],
    );
    let modes = mode_profiles(dir.path());
    let at = peaks(&modes[0]);
    assert_eq!(at.len(), 3);
    for &i in &at {
        let mags: Vec<f64> = modes.iter().map(|m| m[i].1.hypot(m[i].2)).collect();
        let top = mags.iter().cloned().fold(0.0, f64::max);
        let low = mags.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(top - low <= 0.05 * top, "x = {}: {mags:?}", modes[0][i].0);
    }
}

/// Largest complex difference from mode 1 at its |Ψ| peaks, relative to the
/// peak height.
fn profile_spread(modes: &[Vec<(f64, f64, f64)>]) -> f64 {
    let at = peaks(&modes[0]);
    assert_eq!(at.len(), 3);
    let mut worst: f64 = 0.0;
    for &i in &at {
        let top = modes[0][i].1.hypot(modes[0][i].2);
        for m in &modes[1..] {
            let d = (m[i].1 - modes[0][i].1).hypot(m[i].2 - modes[0][i].2);
            worst = worst.max(d / top);
        }
    }
    worst
}

#[test]
fn complex_profiles_merge_at_the_ep3() {
    // Moving gamma alone leaves a complex pair, so b is re-tuned to keep all
    // three modes real. The roots split as the square root of the distance.
    let ep3 = find_ep3_continued(1.002).unwrap();
    let mut spreads = Vec::new();
    for delta in [1e-3, 1e-4, 1e-5, 1e-6] {
        let pt = retuned_approach(&ep3, ep3.gamma - delta).unwrap();
        let gamma = format!("{}", pt.params.gamma());
        let b = format!("{}", pt.params.b());
        let dir = TempDir::new().unwrap();
        ok(
            dir.path(),
            &[
                "modes",
                "--gamma",
                &gamma,
                "--b",
                &b,
                "--big-gamma",
                "1.002",
            ],
        );
        spreads.push(profile_spread(&mode_profiles(dir.path())));
    }
    for w in spreads.windows(2) {
        let ratio = w[0] / w[1];
        assert!((2.0..=5.0).contains(&ratio), "{spreads:?}");
    }
    assert!(spreads[2] <= 0.05 && spreads[3] <= 0.05, "{spreads:?}");
}

#[test]
fn single_point_x_grid() {
    let dir = TempDir::new().unwrap();
    ok(
        dir.path(),
        &[
            "modes",
            "--gamma",
            "0.02",
            "--b",
            "6.1",
            "--big-gamma",
            "1.002",
            "--x",
            "0",
        ],
    );
    let (_, rows) = csv(&dir.path().join("mode_1.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][1], 2.0);
}

fn evolve_meta(dir: &Path, gamma: &str, b: &str, extra: &[&str]) -> Value {
    let mut args = vec!["evolve", "--gamma", gamma, "--b", b, "--big-gamma", "1.002"];
    args.extend_from_slice(extra);
    ok(dir, &args);
    json(&dir.join("evolve.json"))
}

#[test]
fn beat_period_lengthens_with_gain() {
    let dir = TempDir::new().unwrap();
    let small = ["--t", "0:10:10", "--x", "0"];
    let hermitian = f(&evolve_meta(dir.path(), "0", "6.1", &small)["beat_period"]);
    let gained = f(&evolve_meta(dir.path(), "0.06", "6.1", &small)["beat_period"]);
    assert!(hermitian < 0.5 * gained, "{hermitian} vs {gained}");
}

#[test]
fn single_mode_field_is_static() {
    let dir = TempDir::new().unwrap();
    evolve_meta(
        dir.path(),
        "0.03",
        "6.1",
        &["--coeffs", "1,0,0", "--t", "0:500:50", "--x", "-8:8:2"],
    );
    let (header, rows) = csv(&dir.path().join("field.csv"));
    assert_eq!(header, ["t", "x", "intensity"]);
    assert_eq!(rows.len(), 11 * 9);
    for r in &rows {
        let first = rows.iter().find(|s| s[1] == r[1]).unwrap();
        assert!((r[2] - first[2]).abs() <= 1e-10 * first[2]);
    }
}

#[test]
fn near_ep3_intensity_dwarfs_hermitian_run() {
    let dir = TempDir::new().unwrap();
    let base = f(&evolve_meta(dir.path(), "0", "6.1", &["--quiet"])["peak"]["intensity"]);
    let near = f(&evolve_meta(dir.path(), "0.065", "6.2075", &["--quiet"])["peak"]["intensity"]);
    assert!(near >= 1e2 * base, "{near} vs {base}");
    let (_, rows) = csv(&dir.path().join("field.csv"));
    assert_eq!(rows.len(), 601 * 601);
}

#[test]
fn ep3_reference_and_round_trip() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["find-ep3", "--big-gamma", "1.002"]);
    let path = dir.path().join("ep3.json");
    let sol = json(&path);
    assert!((f(&sol["gamma"]) - 0.065278).abs() < 1e-4);
    assert!((f(&sol["b"]) - 6.20124).abs() < 1e-4);
    assert!((f(&sol["k"]) - 0.495849).abs() < 1e-4);

    let again = TempDir::new().unwrap();
    ok(
        again.path(),
        &[
            "find-ep3",
            "--big-gamma",
            "1.002",
            "--guess-file",
            path.to_str().unwrap(),
        ],
    );
    let re = json(&again.path().join("ep3.json"));
    assert!(re["iterations"].as_u64().unwrap() <= 2);
}

#[test]
fn ep3_upper_member() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["find-ep3", "--big-gamma", "1.11"]);
    let sol = json(&dir.path().join("ep3.json"));
    assert!((f(&sol["gamma"]) - 0.64).abs() < 1e-2);
    assert!((f(&sol["b"]) - 2.40).abs() < 1e-2);
    assert!((f(&sol["k"]) - 0.30).abs() < 1e-2);
}

#[test]
fn ep3_trace_is_monotone() {
    let dir = TempDir::new().unwrap();
    ok(
        dir.path(),
        &[
            "find-ep3",
            "--big-gamma",
            "1.002",
            "--trace",
            "1.002:1.11:20",
        ],
    );
    let (header, rows) = csv(&dir.path().join("ep3_trace.csv"));
    assert_eq!(header[..4], ["big_gamma", "gamma", "b", "k"]);
    assert_eq!(rows.len(), 20);
    assert!(rows
        .windows(2)
        .all(|w| w[1][1] > w[0][1] && w[1][2] < w[0][2]));
    let summary = json(&dir.path().join("ep3.json"));
    assert_eq!(summary["trace"]["gamma_increasing"], true);
}

#[test]
fn ep3_beyond_family_exits_3() {
    let dir = TempDir::new().unwrap();
    let (code, _, err) = run(dir.path(), &["find-ep3", "--big-gamma", "1.2"]);
    assert_eq!(code, 3);
    assert!(err.contains("last point"), "{err}");
}

#[test]
fn waveguide_mapping() {
    let dir = TempDir::new().unwrap();
    let base = [
        "waveguide",
        "--n0",
        "3.3",
        "--delta-n",
        "1e-3",
        "--lambda0",
        "1.55",
        "--a",
        "5",
    ];
    let mut args = base.to_vec();
    args.extend(["--k", "0.495849", "--b", "6.20124"]);
    ok(dir.path(), &args);
    let w = json(&dir.path().join("waveguide.json"));
    let ell = f(&w["ell"]);
    assert!((ell - 3.036).abs() / 3.036 <= 5e-4);
    assert!((f(&w["big_l"]) - ell * ell / 5.0).abs() < 1e-12);
    assert_eq!(f(&w["gamma"]), 0.0);
    let beta = &w["beta"][0]["beta"];
    assert!(f(&beta["re"]) > 3.3 * f(&w["k0"]));
    assert_eq!(f(&beta["im"]), 0.0);
    assert!(f(&w["separation"]["microns"]) > 11.4);
}

#[test]
fn identical_runs_are_byte_identical() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let args = [
        "spectrum",
        "--b",
        "6.1",
        "--big-gamma",
        "1.002",
        "--gamma",
        "0:0.2:0.05",
        "--format",
        "json",
    ];
    ok(a.path(), &args);
    ok(b.path(), &args);
    assert_eq!(
        fs::read(a.path().join("spectrum.json")).unwrap(),
        fs::read(b.path().join("spectrum.json")).unwrap()
    );
}

#[test]
fn config_file_defaults_and_override() {
    let dir = TempDir::new().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(
        &conf,
        "# sweep\nb = 6.1\nbig-gamma = 1.002\ngamma = 0:0.02:0.01\nquiet = true\n",
    )
    .unwrap();
    let conf = conf.to_str().unwrap();
    let (code, stdout, _) = run(dir.path(), &["spectrum", "--config", conf]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let (_, rows) = csv(&dir.path().join("spectrum.csv"));
    assert_eq!(rows.len(), 9);
    ok(
        dir.path(),
        &["spectrum", "--config", conf, "--gamma", "0.05"],
    );
    let (_, rows) = csv(&dir.path().join("spectrum.csv"));
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[0] == 0.05));
}

#[test]
fn json_numbers_carry_seventeen_digits() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["find-ep3", "--big-gamma", "1.002"]);
    let text = fs::read_to_string(dir.path().join("ep3.json")).unwrap();
    let line = text.lines().find(|l| l.contains("\"gamma\"")).unwrap();
    let mantissa = line.split(':').nth(1).unwrap().trim().trim_end_matches(',');
    let digits = mantissa
        .split(['e', 'E'])
        .next()
        .unwrap()
        .replace(['.', '-'], "");
    assert_eq!(digits.len(), 17, "{mantissa}");
}
