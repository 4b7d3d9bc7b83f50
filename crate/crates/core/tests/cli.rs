use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kirchhoff-lab"))
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const FIXTURE: &str = r#"
output = "unused"
[domain]
shape = "disk"
radius = 1.0
resolution = 32
[params]
a = 0.25
b = 0.25
alpha = 1.0
p = 2.0
[branch]
s = 1.0
"#;

#[test]
fn branch_fixture_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", FIXTURE);
    let prefix = dir.path().join("run").to_string_lossy().into_owned();
    let out = bin()
        .args(["branch", "--config"])
        .arg(&cfg)
        .args(["--out", &prefix])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(format!("{prefix}.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "root").unwrap();
    let roots: Vec<f64> = lines
        .map(|l| l.split(',').nth(col).unwrap().parse().unwrap())
        .collect();
    let sq3 = 3f64.sqrt();
    assert_eq!(roots.len(), 2);
    assert!((roots[0] - (2.0 - sq3).powi(2)).abs() < 1e-12);
    assert!((roots[1] - (2.0 + sq3).powi(2)).abs() < 1e-10);
    // 17 significant digits with '.' as decimal separator
    assert!(csv.contains("7.1796769724490"));
    assert!(csv.contains("1.3928203230275"));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{prefix}.report.json")).unwrap())
            .unwrap();
    assert_eq!(report["command"], "branch");
    assert_eq!(report["config"]["params"]["a"], 0.25);
    assert_eq!(report["config"]["output"], prefix.as_str());
}

#[test]
fn invalid_hypothesis_names_condition() {
    let dir = tempfile::tempdir().unwrap();
    let text = FIXTURE.replace("p = 2.0", "p = 5.0").replace("[branch]\ns = 1.0\n", "")
        + "[perturbation]\nkind = \"superlinear\"\nlambda = 1.0\nq = 6.0\n[tolerances]\ncg = -1.0\n";
    let cfg = write(dir.path(), "bad.toml", &text);
    let out = bin()
        .args(["continuation", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "hypothesis");
    let v: Vec<String> = serde_json::from_value(err["violations"].clone()).unwrap();
    assert!(v.iter().any(|m| m.contains("(H2) requires 1 < q < p")));
    assert!(v.iter().any(|m| m.contains("tolerances.cg")));
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"
output = "unused"
[domain]
shape = "disk"
radius = 1.0
resolution = 48
[params]
a = 1.0
b = 1.0
alpha = 1.0
p = 0.5
[perturbation]
kind = "sublinear"
mu = 1.0
q = 0.7
q1 = 0.8
[sweep]
variable = "b"
values = [0.5, 1.0, 2.0]
"#;
    let cfg = write(dir.path(), "s.toml", text);
    let mut reports = Vec::new();
    for (i, threads) in ["1", "3"].iter().enumerate() {
        let prefix = dir
            .path()
            .join(format!("r{i}"))
            .to_string_lossy()
            .into_owned();
        let out = bin()
            .args(["sweep", "--threads", threads, "--out", &prefix, "--config"])
            .arg(&cfg)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        reports.push((
            std::fs::read_to_string(format!("{prefix}.report.json")).unwrap(),
            std::fs::read_to_string(format!("{prefix}.csv")).unwrap(),
        ));
    }
    // the prefix is embedded in the report; strip it before comparing
    let norm = |s: &str, i: usize| s.replace(&format!("r{i}\""), "R\"");
    assert_eq!(norm(&reports[0].0, 0), norm(&reports[1].0, 1));
    assert_eq!(reports[0].1, reports[1].1);
}

#[test]
fn resolution_override_and_groundstate() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "g.toml", &FIXTURE.replace("p = 2.0", "p = 3.0"));
    let prefix = dir.path().join("gs").to_string_lossy().into_owned();
    let out = bin()
        .args([
            "groundstate",
            "--resolution",
            "40",
            "--out",
            &prefix,
            "--config",
        ])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{prefix}.report.json")).unwrap())
            .unwrap();
    assert_eq!(report["config"]["domain"]["resolution"], 40);
    assert_eq!(report["result"]["nodes"], 40);
    let csv = std::fs::read_to_string(format!("{prefix}.csv")).unwrap();
    assert_eq!(csv.lines().count(), 41);
}

#[test]
fn oracle_needs_disk() {
    let dir = tempfile::tempdir().unwrap();
    let text = FIXTURE.replace(
        "shape = \"disk\"\nradius = 1.0",
        "shape = \"rectangle\"\nwidth = 1.0\nheight = 1.0",
    );
    let cfg = write(dir.path(), "o.toml", &text);
    let out = bin()
        .args(["oracle", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "config");
}

#[test]
fn missing_config_is_an_error() {
    let out = bin().arg("solve").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
