use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_cracktip");

const BASE: &str = r#"
[crack]
chains = [[[0.0, 0.0], [-1.0, 0.0]]]

[boundary]
kind = "zero"

[mesh]
radius = 1.0
h = 0.1
"#;

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn cracktip(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn validate_reports_clean_and_faulty_configs() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write_config(dir.path(), "ok.toml", BASE);
    let o = cracktip(&["validate", "--config", ok.to_str().unwrap()]);
    assert!(o.status.success());
    let r = stdout_json(&o);
    assert_eq!(r["valid"], true);
    assert_eq!(r["diagnostics"].as_array().unwrap().len(), 0);

    let bad = write_config(dir.path(), "bad.toml", &format!("{BASE}\n[blowup]\nannulus = [0.5, 2.0]\n"));
    let o = cracktip(&["validate", "--config", bad.to_str().unwrap()]);
    assert!(o.status.success());
    let r = stdout_json(&o);
    assert_eq!(r["valid"], false);
    let d = r["diagnostics"].as_array().unwrap();
    assert_eq!(d.len(), 1);
    assert_eq!(d[0]["field"], "blowup.annulus");
    assert_eq!(d[0]["severity"], "error");

    let limit = write_config(
        dir.path(),
        "limit.toml",
        &format!("{BASE}\n[limit]\nkappa = [1.0, 0.0]\nincrement = [[[0.0, 0.0], [3.0, 0.0]]]\n"),
    );
    let r = stdout_json(&cracktip(&["validate", "--config", limit.to_str().unwrap()]));
    let errors: Vec<&Value> = r["diagnostics"].as_array().unwrap().iter().filter(|d| d["severity"] == "error").collect();
    assert_eq!(errors.len(), 1);
    assert_eq!(errors[0]["field"], "limit.increment");
}

#[test]
fn zero_data_solve_reports_zero_energy() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "zero.toml", BASE);
    let out = dir.path().join("out");
    let o = cracktip(&["solve", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m = json(&out.join("manifest.json"));
    assert_eq!(m["subcommand"], "solve");
    assert_eq!(m["summary"]["solve.energy"], 0.0);
    assert_eq!(json(&out.join("solve.json"))["energy"], 0.0);
    let vtk = std::fs::read_to_string(out.join("solve.vtk")).unwrap();
    assert!(vtk.starts_with("# vtk DataFile Version 3.0"));
}

#[test]
fn spectrum_csv_lists_the_six_roots() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "s.json", &std::fs::read_to_string(dir_of_scenarios().join("spectrum.json")).unwrap());
    let out = dir.path().join("out");
    let o = cracktip(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("spectrum.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("lambda,multiplicity"));
    let rows: Vec<(f64, usize)> = lines
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    let expect = [0.5, 1.5, 2.0, 2.5, 3.0, 3.5];
    assert_eq!(rows.len(), expect.len());
    for ((l, m), e) in rows.iter().zip(expect) {
        assert!((l - e).abs() < 1e-8);
        assert_eq!(*m, if e == 2.0 { 1 } else { 2 });
    }
    assert!(out.join("paper_mode_audit.txt").exists());
}

#[test]
fn manifest_hashes_every_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.toml",
        &(BASE.replace("kind = \"zero\"", "kind = \"singular\"\nkappa = [1.0, 0.5]")
            + "\n[airy]\n[blowup]\neps = [0.2, 0.1]\nsamples = 64\n"),
    );
    let out = dir.path().join("out");
    let o = cracktip(&["all", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--jobs", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m = json(&out.join("manifest.json"));
    let files = m["files"].as_array().unwrap();
    let mut listed: Vec<String> = files.iter().map(|f| f["path"].as_str().unwrap().to_string()).collect();
    for f in files {
        let bytes = std::fs::read(out.join(f["path"].as_str().unwrap())).unwrap();
        assert_eq!(f["sha256"], cracktip::output::sha256_hex(&bytes));
        assert_eq!(f["bytes"], bytes.len());
    }
    let mut on_disk: Vec<String> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n != "manifest.json")
        .collect();
    on_disk.sort();
    listed.sort();
    assert_eq!(listed, on_disk);
    for name in ["solve.json", "airy.json", "decay.csv", "blowup.csv", "blowup_airy.csv"] {
        assert!(listed.iter().any(|l| l == name), "{name}");
    }
    assert_eq!(m["modules"]["cracktip-core"], env!("CARGO_PKG_VERSION"));
    let text = std::fs::read_to_string(&cfg).unwrap();
    let parsed = cracktip::ScenarioConfig::from_toml_str(&text).unwrap();
    assert_eq!(m["config_sha256"], cracktip::output::sha256_hex(&parsed.canonical_bytes()));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();

    let invalid = write_config(dir.path(), "invalid.toml", &BASE.replace("h = 0.1", "h = -0.1"));
    let o = cracktip(&["solve", "--config", invalid.to_str().unwrap(), "--out", out]);
    assert_eq!(o.status.code(), Some(2));
    let first: Value = serde_json::from_slice(o.stderr.split(|&b| b == b'\n').next().unwrap()).unwrap();
    assert_eq!(first["field"], "mesh");

    let garbled = write_config(dir.path(), "garbled.toml", "[crack\n");
    assert_eq!(cracktip(&["solve", "--config", garbled.to_str().unwrap(), "--out", out]).status.code(), Some(2));

    let missing = dir.path().join("missing.toml");
    assert_eq!(cracktip(&["solve", "--config", missing.to_str().unwrap(), "--out", out]).status.code(), Some(4));

    // the circle at 0.8 misses a crack of length 0.5
    let short = write_config(
        dir.path(),
        "short.toml",
        &(BASE.replace("[-1.0, 0.0]", "[-0.5, 0.0]") + "\n[airy]\npoincare_radius = 0.8\n"),
    );
    let o = cracktip(&["airy", "--config", short.to_str().unwrap(), "--out", out]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let last = o.stderr.split(|&b| b == b'\n').rfind(|l| !l.is_empty()).unwrap();
    let last: Value = serde_json::from_slice(last).unwrap();
    assert_eq!(last["kind"], "numerical");

    let ok = write_config(dir.path(), "ok.toml", BASE);
    let blocker = dir.path().join("blocker");
    std::fs::write(&blocker, "").unwrap();
    let o = cracktip(&["solve", "--config", ok.to_str().unwrap(), "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn output_defaults_to_the_config_field() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from_config");
    let cfg = write_config(dir.path(), "c.toml", &format!("output = {:?}\n{BASE}", target.to_str().unwrap()));
    assert!(cracktip(&["solve", "--config", cfg.to_str().unwrap()]).status.success());
    assert!(target.join("manifest.json").exists());
}

fn dir_of_scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

#[test]
fn shipped_scenarios_validate() {
    for entry in std::fs::read_dir(dir_of_scenarios()).unwrap() {
        let p = entry.unwrap().path();
        let cfg = cracktip::ScenarioConfig::load(&p).unwrap();
        assert!(!cracktip::config::has_errors(&cfg.validate()), "{}", p.display());
    }
}
