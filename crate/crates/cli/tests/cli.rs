use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_spectramass"));
    c.env_remove("SPECTRAMASS_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

/// Data rows as (lambda, value, component).
fn rows(csv: &str) -> Vec<(f64, f64, String)> {
    csv.lines()
        .skip(2)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].to_string())
        })
        .collect()
}

const K3: &str = r#"{
    "vertices": [{"id": "a"}, {"id": "b"}, {"id": "c"}],
    "edges": [{"u": "a", "v": "b"}, {"u": "b", "v": "c"}, {"u": "a", "v": "c"}],
    "group": {"name": "D3", "generators": [["b", "c", "a"], ["a", "c", "b"]]},
    "domain": ["a"]
}"#;

#[test]
fn lattice_mass_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.csv");
    let o = run(&["mass", "--space", "lattice", "--dim", "1", "--lambda", "0:4:0.01", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let first = text.lines().next().unwrap();
    assert!(first.starts_with(&format!("# spectramass {} cmd=mass ", env!("CARGO_PKG_VERSION"))));
    assert!(first.ends_with("seed=0"));
    assert_eq!(text.lines().nth(1).unwrap(), "lambda,value,component,err_est");
    let r = rows(&text);
    assert_eq!(r.len(), 401);
    assert_eq!(r[400].0, 4.0);
    assert_eq!(r[400].1, 1.0);
}

#[test]
fn split_counts_sum_to_total() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    std::fs::write(&g, K3).unwrap();
    let out = dir.path().join("split.csv");
    let o = run(&["split", "--graph", g.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&std::fs::read_to_string(&out).unwrap());
    let mut lambdas: Vec<f64> = r.iter().map(|x| x.0).collect();
    lambdas.dedup();
    assert_eq!(lambdas.len(), 2);
    for l in lambdas {
        let at: Vec<_> = r.iter().filter(|x| x.0 == l).collect();
        let total = at.iter().find(|x| x.2 == "total").unwrap().1;
        let sum: f64 = at.iter().filter(|x| x.2 != "total").map(|x| x.1).sum();
        assert_eq!(sum, total);
    }
    assert!(String::from_utf8_lossy(&o.stderr).contains("#∂F = 1"));
}

#[test]
fn identical_config_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.csv");
    let args = ["mass", "--space", "lattice", "--dim", "4", "--lambda", "0:16:2", "--seed", "11", "--out", out.to_str().unwrap()];
    assert!(run(&args).status.success());
    let a = std::fs::read(&out).unwrap();
    assert!(run(&args).status.success());
    assert_eq!(a, std::fs::read(&out).unwrap());
    assert!(String::from_utf8_lossy(&a).lines().next().unwrap().ends_with("seed=11"));
}

#[test]
fn thread_count_does_not_change_rows() {
    let body = |threads: &str| {
        let o = run(&["halfline", "--lambda", "0.5:20:0.5", "--r", "50", "--bc", "dirichlet", "--threads", threads]);
        assert!(o.status.success());
        String::from_utf8(o.stdout).unwrap().lines().skip(1).collect::<Vec<_>>().join("\n")
    };
    assert_eq!(body("1"), body("3"));
    let o = bin()
        .env("SPECTRAMASS_THREADS", "2")
        .args(["cover", "--sheets", "4", "--lambda", "0:100:7"])
        .output()
        .unwrap();
    assert!(o.status.success());
}

#[test]
fn exit_codes_for_bad_input() {
    assert_eq!(run(&["nonsense"]).status.code(), Some(1));
    assert_eq!(run(&["mass", "--space", "lattice", "--dim", "9", "--lambda", "1"]).status.code(), Some(1));
    assert_eq!(run(&["mass", "--space", "tree", "--dim", "2", "--lambda", "4:1:1"]).status.code(), Some(1));
    assert_eq!(run(&["split", "--graph", "/nonexistent/g.json"]).status.code(), Some(1));
    let o = bin().env("SPECTRAMASS_THREADS", "many").args(["torus", "--lambda-max", "10"]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["--help"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("verify"));
}

#[test]
fn sg_weyl_band_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sg.csv");
    let svg = dir.path().join("sg.svg");
    let o = run(&[
        "sg", "--level", "5", "--bc", "neumann", "--weyl", "--out", out.to_str().unwrap(), "--svg", svg.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let r = rows(&std::fs::read_to_string(&out).unwrap());
    assert!(r.iter().all(|x| x.1 > 0.1 && x.1 < 0.36));
    assert!(String::from_utf8_lossy(&o.stderr).contains("band"));
    let plot = std::fs::read_to_string(Path::new(&svg)).unwrap();
    assert!(plot.starts_with("<svg") && plot.contains("<polyline"));
}

#[test]
fn cover_and_verify_subset() {
    let o = run(&["cover", "--sheets", "16", "--lambda", "0:2000:13.7"]);
    assert!(o.status.success());
    let o = run(&["verify", "--only", "1,2,6"]);
    assert!(o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.lines().filter(|l| l.starts_with("PASS")).count(), 3);
    assert_eq!(run(&["verify", "--only", "13"]).status.code(), Some(1));
}
