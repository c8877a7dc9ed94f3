use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use envcontour::config::{parse_config, Method};
use envcontour::output::read_polylines;
use envcontour::{Error, JointModel};
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_envcontour");

fn envcontour(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stderr_record(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is one JSON record")
}

const MIXTURE2: &str = include_str!("../examples/configs/mixture2.toml");

#[test]
fn mixture2_config_builds_the_preset_model() {
    let config = parse_config(MIXTURE2).unwrap();
    assert_eq!(config.method, Method::Hdc);
    let parsed = config.model().unwrap();
    let preset = JointModel::mixture(15.0, 0.5);
    for x in [
        [3.0, 8.0],
        [0.95, 14.8],
        [12.0, 13.0],
        [0.2, 5.0],
        [1.5, 15.2],
    ] {
        let (a, b) = (parsed.joint_pdf(&x).unwrap(), preset.joint_pdf(&x).unwrap());
        assert!(
            (a - b).abs() <= 1e-15 * b.abs().max(f64::MIN_POSITIVE),
            "{x:?}: {a} vs {b}"
        );
    }
}

#[test]
fn hdc_writes_contour_mask_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let res = envcontour(&["hdc", "--return-period", "25", "--out", out]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );

    let meta: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("hdc_T25_meta.json")).unwrap())
            .unwrap();
    let f_m = meta["f_m"].as_f64().unwrap();
    assert!((f_m - 1.7e-6).abs() / 1.7e-6 < 0.05, "{f_m}");
    let hs_max = meta["extremes"]["max"][0].as_f64().unwrap();
    assert!((hs_max - 16.79).abs() < 0.05, "{hs_max}");
    assert_eq!(meta["component_count"], 1);
    assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"));
    let hash = meta["config_sha256"].as_str().unwrap().to_owned();
    assert_eq!(hash.len(), 64);

    let csv = fs::read_to_string(dir.path().join("hdc_T25.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        format!(
            "# envcontour {} config_sha256={hash}",
            env!("CARGO_PKG_VERSION")
        )
    );
    assert_eq!(lines.next().unwrap(), "Hs [m],Tz [s]");
    let polylines = read_polylines(&dir.path().join("hdc_T25.csv")).unwrap();
    assert_eq!(polylines.len(), 1);
    assert_eq!(polylines[0].first(), polylines[0].last());

    let mask: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("hdc_T25_mask.json")).unwrap())
            .unwrap();
    let runs: usize = mask["runs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_u64().unwrap() as usize)
        .sum();
    let shape: usize = mask["shape"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_u64().unwrap() as usize)
        .product();
    assert_eq!(runs, shape);
}

#[test]
fn mixture2_contour_has_two_polylines_separated_by_blank_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("m2.toml");
    fs::write(&cfg, MIXTURE2).unwrap();
    let out = dir.path().join("out");
    let res = envcontour(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let csv = fs::read_to_string(out.join("hdc_T25.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| l.is_empty()).count(), 1);
    assert_eq!(read_polylines(&out.join("hdc_T25.csv")).unwrap().len(), 2);
}

#[test]
fn sample_with_zero_count_has_no_points() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let res = envcontour(&["sample", "--count", "0", "--out", out]);
    assert!(res.status.success());
    let path = dir.path().join("samples.csv");
    assert!(read_polylines(&path).unwrap().is_empty());
    assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 2);
}

fn assert_same_tree(a: &Path, b: &Path) {
    let mut names: Vec<_> = fs::read_dir(a)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(!names.is_empty());
    for n in names {
        assert_eq!(
            fs::read(a.join(&n)).unwrap(),
            fs::read(b.join(&n)).unwrap(),
            "{n:?} differs"
        );
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for sub in [
        vec!["sample", "--count", "2000", "--seed", "3"],
        vec!["iform", "--return-period", "1", "--return-period", "25"],
        vec!["equishape"],
        vec!["hdc", "--return-period", "10", "--cell-size", "0.1"],
    ] {
        let a = dir.path().join(format!("{}-a", sub[0]));
        let b = dir.path().join(format!("{}-b", sub[0]));
        for out in [&a, &b] {
            let mut args = sub.clone();
            args.extend(["--out", out.to_str().unwrap()]);
            assert!(envcontour(&args).status.success());
        }
        assert_same_tree(&a, &b);
    }
}

#[test]
fn mc_and_grid_study_write_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(
        &cfg,
        "method = \"mc\"\npreset = \"vanem2012\"\nreturn_periods = [1]\n[mc]\nn_samples = 50000\n[grid_study]\ncell_lengths = [0.1, 0.5, 2.0]\n",
    )
    .unwrap();
    let out = dir.path().join("o");
    let o = out.to_str().unwrap();
    let c = cfg.to_str().unwrap();
    assert!(envcontour(&["mc", "--config", c, "--out", o])
        .status
        .success());
    let mc = read_polylines(&out.join("mc_T1.csv")).unwrap();
    assert_eq!(mc.len(), 1);
    assert!(envcontour(&["grid-study", "--config", c, "--out", o])
        .status
        .success());
    let table = fs::read_to_string(out.join("grid_study_T1.csv")).unwrap();
    let rows: Vec<&str> = table.lines().skip(2).collect();
    assert_eq!(rows.len(), 3);
    assert!(
        rows[0].starts_with("0.1,") && rows[0].contains(",1,"),
        "{}",
        rows[0]
    );
}

#[test]
fn exit_codes_follow_error_class() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();

    let bad = dir.path().join("bad.toml");
    fs::write(
        &bad,
        "method = \"hdc\"\npreset = \"vanem2012\"\nunknown_key = 1\n",
    )
    .unwrap();
    let res = envcontour(&["run", "--config", bad.to_str().unwrap(), "--out", out]);
    assert_eq!(res.status.code(), Some(2));
    let rec = stderr_record(&res);
    assert_eq!(rec["error"]["class"], "parse");
    assert!(rec["error"]["message"].as_str().unwrap().contains("line 3"));

    let shape = dir.path().join("shape.toml");
    fs::write(
        &shape,
        "method = \"sample\"\n[[variables]]\nname = \"Hs\"\ndist = { family = \"weibull\", scale = 2.776, shape = -1, location = 0.8888 }\n",
    )
    .unwrap();
    let res = envcontour(&["run", "--config", shape.to_str().unwrap(), "--out", out]);
    assert_eq!(res.status.code(), Some(3));
    assert!(stderr_record(&res)["error"]["message"]
        .as_str()
        .unwrap()
        .contains("variables[0].dist.shape"));

    let res = envcontour(&["hdc", "--cell-size", "0.001", "--out", out]);
    assert_eq!(res.status.code(), Some(5));
    assert_eq!(stderr_record(&res)["error"]["class"], "resource");

    let tight = dir.path().join("tight.toml");
    fs::write(
        &tight,
        "method = \"hdc\"\npreset = \"vanem2012\"\n[grid]\ncell_size = 0.1\nlower = [0, 0]\nupper = [8, 10]\n",
    )
    .unwrap();
    let res = envcontour(&["run", "--config", tight.to_str().unwrap(), "--out", out]);
    assert_eq!(res.status.code(), Some(4));
    assert!(stderr_record(&res)["error"]["message"]
        .as_str()
        .unwrap()
        .contains("enlarge"));

    let res = envcontour(&["hdc", "--config", "/nonexistent/config.toml", "--out", out]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn error_classes_map_to_codes() {
    let e = parse_config("method = 3").unwrap_err();
    assert!(matches!(e, Error::Parse(_)));
    assert_eq!(e.class().exit_code(), 2);
}
