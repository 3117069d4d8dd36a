use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use expansive::config::ExperimentConfig;
use expansive::runner::{execute, run_experiment, Status};
use expansive::{exit_code, RunError};
use serde_json::Value;

fn workspace() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn bundled(name: &str) -> ExperimentConfig {
    ExperimentConfig::load(&workspace().join("configs").join(format!("{name}.json"))).unwrap()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_expansive"))
}

fn report(dir: &Path) -> Value {
    serde_json::from_slice(&fs::read(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn bundled_configs_match_the_schema_and_parse() {
    let schema: Value =
        serde_json::from_slice(&fs::read(workspace().join("docs/experiment-config.schema.json")).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let mut n = 0;
    for entry in fs::read_dir(workspace().join("configs")).unwrap() {
        let path = entry.unwrap().path();
        let doc: Value = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
        assert!(validator.is_valid(&doc), "{} violates the schema", path.display());
        ExperimentConfig::load(&path).unwrap();
        n += 1;
    }
    assert!(n >= 10);
}

#[test]
fn schema_and_parser_reject_the_same_mistakes() {
    let schema: Value =
        serde_json::from_slice(&fs::read(workspace().join("docs/experiment-config.schema.json")).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let good = r#"{"system": {"id": "cat_map"}, "operation": {"op": "orbit", "point": [0.1, 0.2], "forward": 2}, "output_dir": "o"}"#;
    let bad = [
        r#"{"system": {"id": "cat_map"}, "operation": {"op": "orbit", "point": [0.1, 0.2], "forward": 2, "x": 1}, "output_dir": "o"}"#,
        r#"{"system": {"id": "cat_map"}, "operation": {"op": "orbit", "point": [0.1, 0.2]}, "output_dir": "o"}"#,
        r#"{"system": {"id": "cat_map"}, "operation": {"op": "spin"}, "output_dir": "o"}"#,
        r#"{"system": {"id": "horseshoe"}, "operation": {"op": "catalog"}, "output_dir": "o"}"#,
        r#"{"system": {"id": "cat_map"}, "operation": {"op": "catalog"}}"#,
        r#"{"system": {"id": "cat_map"}, "operation": {"op": "catalog"}, "output_dir": "o", "seed": -1}"#,
        r#"{"system": {"id": "cat_map"}, "operation": {"op": "test", "notion": {"kind": "dw"}, "delta": 0.1, "horizon": 3,
            "seeds": {"kind": "segments", "count": 2, "length": 0.01, "gap": 0.001}}, "output_dir": "o"}"#,
    ];
    assert!(validator.is_valid(&serde_json::from_str(good).unwrap()));
    ExperimentConfig::from_json(good).unwrap();
    for b in bad {
        assert!(!validator.is_valid(&serde_json::from_str(b).unwrap()), "schema accepts {b}");
        assert!(matches!(ExperimentConfig::from_json(b), Err(RunError::Config(_))), "parser accepts {b}");
    }
}

#[test]
fn saddle_stable_set_config_overlays_e_and_reports_hausdorff() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = bundled("saddle-stable-set");
    cfg.output_dir = dir.path().to_path_buf();
    let out = run_experiment(&cfg).unwrap();
    assert_eq!(out.status(), Status::Pass, "{}", out.report.reason);
    let r = report(dir.path());
    let d = r["results"]["hausdorff"]["distance"].as_f64().unwrap();
    assert!(d <= 0.01, "Hausdorff distance {d}");
    let svg = fs::read_to_string(dir.path().join("stable_set.svg")).unwrap();
    let segs = cfg.build_system().unwrap().saddle().unwrap().geometry.segments().len();
    assert_eq!(svg.matches(r#"class="segment""#).count(), segs);
    assert!(svg.matches(r#"class="point""#).count() > 1000);
    for f in ["stable_set.csv", "stable_set.json", "e_segments.json", "report.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}

#[test]
fn malformed_config_exits_2_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = dir.path().join("broken.json");
    fs::write(
        &cfg,
        format!(r#"{{"system": {{"id": "cat_map"}}, "operation": {{"op": "catalog", "output_dir": "{}""#, out.display()),
    )
    .unwrap();
    let st = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(st.status.code(), Some(exit_code::CONFIG));
    assert!(String::from_utf8_lossy(&st.stderr).contains("invalid config"));
    assert!(!out.exists());

    // well-formed JSON, but a parameter the library rejects
    fs::write(
        &cfg,
        format!(
            r#"{{"system": {{"id": "cat_map"}}, "operation": {{"op": "ball", "centers": {{"points": [[0.5, 0.5]]}},
                "delta": 0.05, "horizon": 3, "grid": 0.02}}, "output_dir": "{}"}}"#,
            out.display()
        ),
    )
    .unwrap();
    let st = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(st.status.code(), Some(exit_code::CONFIG));
    assert!(!out.exists());
}

fn all_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn reruns_are_byte_identical() {
    for name in ["cat-ball", "annulus-partial", "solenoid-cw", "circle-dim", "e-figure"] {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        for d in [&a, &b] {
            let st = bin()
                .args(["run", "--config"])
                .arg(workspace().join(format!("configs/{name}.json")))
                .arg("--out")
                .arg(d.path())
                .output()
                .unwrap();
            assert!(st.status.success(), "{name}: {}", String::from_utf8_lossy(&st.stderr));
        }
        let (fa, fb) = (all_bytes(a.path()), all_bytes(b.path()));
        assert!(fa.len() >= 2);
        assert_eq!(fa, fb, "{name}");
    }
}

#[test]
fn seed_changes_random_centers_only() {
    let mut cfg = bundled("cat-ball");
    let a = execute(&cfg).unwrap();
    cfg.seed += 1;
    let b = execute(&cfg).unwrap();
    assert_ne!(a.file("ball_0.csv"), b.file("ball_0.csv"));
    assert_ne!(a.report.config_hash, b.report.config_hash);
    assert_eq!(a.status(), b.status());
}

#[test]
fn reports_carry_version_and_config_hash() {
    let cfg = bundled("cat-orbit");
    let out = execute(&cfg).unwrap();
    let r: Value = serde_json::from_slice(out.file("report.json").unwrap()).unwrap();
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["library"], format!("expansive {}", env!("CARGO_PKG_VERSION")));
    assert_eq!(r["config_hash"], cfg.hash());
    assert_eq!(r["experiment"]["operation"]["op"], "orbit");
    assert!(r["experiment"].get("output_dir").is_none());
    assert_eq!(r["artifacts"], serde_json::json!(["orbit.csv"]));
}

#[test]
fn exit_codes_follow_the_verdict() {
    let run = |name: &str| {
        let d = tempfile::tempdir().unwrap();
        let st = bin()
            .args(["run", "--config"])
            .arg(workspace().join(format!("configs/{name}.json")))
            .arg("--out")
            .arg(d.path())
            .output()
            .unwrap();
        (st.status.code().unwrap(), report(d.path()))
    };
    let (code, r) = run("cat-cw");
    assert_eq!((code, r["status"].as_str().unwrap()), (exit_code::PASS, "pass"));
    let (code, r) = run("cat-dw");
    assert_eq!((code, r["status"].as_str().unwrap()), (exit_code::FAIL, "fail"));
    assert_eq!(r["exit_code"], exit_code::FAIL);

    // a ball wider than its window is reported, not trusted
    let d = tempfile::tempdir().unwrap();
    let st = bin()
        .args(["ball", "--system", "cat_map", "--point", "0.2,0.4", "--delta", "1", "--horizon", "3"])
        .args(["--grid", "0.002", "--window-half", "0.02", "--out"])
        .arg(d.path())
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(exit_code::INCONCLUSIVE));
    assert_eq!(report(d.path())["status"], "inconclusive");
}

#[test]
fn oracle_beyond_its_limit_is_a_resource_error() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("big.json");
    fs::write(
        &cfg,
        r#"{"system": {"id": "irregular_saddle_2d"}, "operation": {"op": "dim", "oracle": true, "epsilon": 0.1,
            "cloud": {"kind": "circle", "center": [0, 0], "radius": 0.3, "h": 0.005}}, "output_dir": "unused"}"#,
    )
    .unwrap();
    let out = d.path().join("o");
    let st = bin().args(["run", "--config"]).arg(&cfg).arg("--out").arg(&out).output().unwrap();
    assert_eq!(st.status.code(), Some(exit_code::RESOURCE));
    assert!(!out.exists());
}

#[test]
fn flags_build_the_same_experiment_as_a_config() {
    let d = tempfile::tempdir().unwrap();
    let st = bin()
        .args(["orbit", "--system", "cat_map", "--point", "0.1,0.2", "--back", "5", "--forward", "5", "--out"])
        .arg(d.path())
        .output()
        .unwrap();
    assert!(st.status.success());
    assert_eq!(report(d.path())["config_hash"], bundled("cat-orbit").hash());

    let st = bin()
        .args(["run", "--config"])
        .arg(workspace().join("configs/cat-orbit.json"))
        .args(["--horizon", "3", "--out"])
        .arg(d.path().join("x"))
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(exit_code::CONFIG), "--horizon has no meaning for an orbit");

    let st = bin()
        .args(["test", "--system", "cat_map", "--notion", "cw", "--delta", "0.1", "--horizon", "40"])
        .args(["--seeds", r#"{"kind": "segments", "count": 50, "length": 0.001, "gap": 0.0001}"#, "--out"])
        .arg(d.path().join("t"))
        .output()
        .unwrap();
    assert!(st.status.success());
    assert_eq!(report(&d.path().join("t"))["config_hash"], bundled("cat-cw").hash());
}

#[test]
fn dim_and_render_round_trip_through_csv() {
    let d = tempfile::tempdir().unwrap();
    let st = bin()
        .args(["run", "--config"])
        .arg(workspace().join("configs/circle-dim.json"))
        .arg("--out")
        .arg(d.path())
        .output()
        .unwrap();
    assert!(st.status.success());
    let r = report(d.path());
    assert_eq!((r["results"]["lower"].as_u64(), r["results"]["upper"].as_u64()), (Some(1), Some(1)));
    let cover: Value = serde_json::from_slice(&fs::read(d.path().join("cover.json")).unwrap()).unwrap();
    let svg = fs::read_to_string(d.path().join("cover.svg")).unwrap();
    assert_eq!(svg.matches(r#"class="box""#).count() as u64, cover["size"].as_u64().unwrap());

    let again = d.path().join("again");
    let st = bin()
        .args(["dim", "--cloud"])
        .arg(d.path().join("cloud.csv"))
        .args(["--epsilon", "0.1", "--out"])
        .arg(&again)
        .output()
        .unwrap();
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    assert_eq!(fs::read(again.join("cover.json")).unwrap(), fs::read(d.path().join("cover.json")).unwrap());

    let fig = d.path().join("fig");
    let st = bin()
        .args(["render", "--cloud"])
        .arg(d.path().join("cloud.csv"))
        .arg("--out")
        .arg(&fig)
        .output()
        .unwrap();
    assert!(st.status.success());
    let svg = fs::read_to_string(fig.join("figure.svg")).unwrap();
    assert_eq!(svg.matches(r#"class="point""#).count() as u64, r["results"]["points"].as_u64().unwrap());
}

#[test]
fn three_dimensional_render_asks_for_a_projection() {
    let d = tempfile::tempdir().unwrap();
    let scan = d.path().join("scan");
    let st = bin()
        .args(["stable-set", "--system", "irregular_saddle_3d", "--lo", "0,0,-0.1", "--hi", "1,1,0.1"])
        .args(["--grid", "0.05", "--horizon", "10", "--out"])
        .arg(&scan)
        .output()
        .unwrap();
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    let csv = scan.join("stable_set.csv");
    let flat = d.path().join("flat");
    let st = bin().args(["render", "--cloud"]).arg(&csv).arg("--out").arg(&flat).output().unwrap();
    assert_eq!(st.status.code(), Some(exit_code::OTHER));
    assert!(String::from_utf8_lossy(&st.stderr).contains("projection"));
    assert!(!flat.exists());
    let st = bin()
        .args(["render", "--project", "0,2", "--cloud"])
        .arg(&csv)
        .arg("--out")
        .arg(&flat)
        .output()
        .unwrap();
    assert!(st.status.success());
    assert!(flat.join("figure.svg").exists());
}

#[test]
fn catalog_lists_every_system() {
    let d = tempfile::tempdir().unwrap();
    let st = bin().args(["catalog", "--out"]).arg(d.path()).output().unwrap();
    assert!(st.status.success());
    let text = String::from_utf8(st.stdout).unwrap();
    for id in ["cat_map", "annulus_time_one", "irregular_saddle_2d", "irregular_saddle_3d", "doubling_circle", "solenoid_shift"] {
        assert!(text.contains(id), "{id}");
    }
    assert_eq!(report(d.path())["results"].as_array().unwrap().len(), 6);
}

#[test]
fn solenoid_dw_is_a_config_error() {
    let mut cfg = bundled("solenoid-cw");
    if let expansive::config::Operation::Test { notion, .. } = &mut cfg.operation {
        *notion = expansive::config::NotionSpec::Dw { d: 0 };
    }
    assert!(matches!(execute(&cfg), Err(RunError::Config(_))));
}
