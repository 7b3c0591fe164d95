use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tilecolour"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn read_json(p: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_chair_level_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c3.patch.json");
    let r = run(&[
        "generate",
        "--tiling",
        "chair",
        "--level",
        "3",
        "--out",
        s(&out),
    ]);
    assert!(r.status.success());
    let doc = read_json(&out);
    assert_eq!(doc["v"], "v1");
    assert_eq!(doc["patch"]["tiles"].as_array().unwrap().len(), 64);
}

#[test]
fn generate_is_deterministic() {
    let a = run(&["generate", "--tiling", "ab", "--level", "2"]);
    let b = run(&["generate", "--tiling", "ab", "--level", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn certify_rp() {
    let r = run(&["certify", "--tiling", "rp", "--level", "4"]);
    assert_eq!(r.status.code(), Some(0));
    let v = json(&r);
    assert_eq!(v["pass"], true);
    let got: Vec<(String, u64)> = v["modes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| {
            (
                m["mode"].as_str().unwrap().to_string(),
                m["lower"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(
        got,
        [
            ("vertex".to_string(), 3),
            ("edge".to_string(), 8),
            ("face".to_string(), 3)
        ]
    );
}

#[test]
fn certify_is_stable() {
    let a = run(&["certify", "--tiling", "chair", "--level", "3"]);
    let b = run(&["certify", "--tiling", "chair", "--level", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn colour_pinwheel_edges_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let patch = dir.path().join("p3.patch.json");
    let col = dir.path().join("p3.colouring.json");
    assert!(run(&[
        "generate",
        "--tiling",
        "pinwheel",
        "--level",
        "3",
        "--out",
        s(&patch)
    ])
    .status
    .success());
    let r = run(&[
        "color",
        "--tiling",
        "pinwheel",
        "--mode",
        "edge",
        "--in",
        s(&patch),
        "--out",
        s(&col),
    ]);
    assert!(r.status.success());
    assert_eq!(read_json(&col)["colouring"]["palette"], 8);
    let r = run(&["verify", "--in", s(&patch), "--colouring", s(&col)]);
    assert!(r.status.success());
    assert_eq!(json(&r)["proper"], true);
}

#[test]
fn tampered_colouring_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let patch = dir.path().join("c.patch.json");
    let col = dir.path().join("c.colouring.json");
    assert!(run(&[
        "generate",
        "--tiling",
        "chair",
        "--level",
        "2",
        "--out",
        s(&patch)
    ])
    .status
    .success());
    assert!(run(&[
        "color",
        "--mode",
        "vertex",
        "--in",
        s(&patch),
        "--out",
        s(&col)
    ])
    .status
    .success());
    let mut doc = read_json(&col);
    let assignment = doc["colouring"]["assignment"].as_array_mut().unwrap();
    for pair in assignment.iter_mut() {
        pair[1] = serde_json::json!(0);
    }
    std::fs::write(&col, doc.to_string()).unwrap();
    let r = run(&["verify", "--in", s(&patch), "--colouring", s(&col)]);
    assert_eq!(r.status.code(), Some(1));
    assert_eq!(json(&r)["proper"], false);
}

#[test]
fn oracle_algorithm_colours_optimally() {
    let r = run(&[
        "color",
        "--tiling",
        "ab",
        "--level",
        "2",
        "--mode",
        "face",
        "--algorithm",
        "oracle",
    ]);
    assert!(r.status.success());
    assert_eq!(json(&r)["colouring"]["palette"], 2);
}

#[test]
fn oracle_reports_certificates() {
    let r = run(&[
        "oracle",
        "--tiling",
        "chair",
        "--level",
        "2",
        "--mode",
        "vertex,face",
    ]);
    assert!(r.status.success());
    let v = json(&r);
    assert_eq!(v[0]["chi"], 2);
    assert_eq!(v[1]["chi"], 3);
    assert!(v[1]["odd_cycle"].is_array());
}

#[test]
fn oracle_limit_refusal_exits_3() {
    let r = run(&[
        "oracle", "--tiling", "chair", "--level", "4", "--mode", "edge", "--limit", "10",
    ]);
    assert_eq!(r.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        run(&["generate", "--tiling", "hat", "--level", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["generate", "--tiling", "chair"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["color", "--tiling", "chair", "--level", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["generate", "--tiling", "chair", "--level", "9"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "verify",
            "--in",
            "/nonexistent.patch.json",
            "--colouring",
            "x"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# chair run\ntiling = \"chair\"\nlevel = 3\nmode = vertex\n",
    )
    .unwrap();
    let r = run(&["generate", "--config", s(&cfg)]);
    assert!(r.status.success());
    assert_eq!(json(&r)["patch"]["tiles"].as_array().unwrap().len(), 64);
    let r = run(&["generate", "--config", s(&cfg), "--level", "2"]);
    assert_eq!(json(&r)["patch"]["tiles"].as_array().unwrap().len(), 16);
    std::fs::write(&cfg, "colour = red\n").unwrap();
    assert_eq!(
        run(&["generate", "--config", s(&cfg)]).status.code(),
        Some(2)
    );
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("rp.svg");
    let r = run(&[
        "render",
        "--tiling",
        "rp",
        "--level",
        "2",
        "--mode",
        "face",
        "--svg",
        s(&svg),
    ]);
    assert!(r.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") || text.starts_with("<?xml"));
    assert!(!text.contains("class=\"conflict\""));
}

#[test]
fn seed_orientation_rotates_the_patch() {
    let a = json(&run(&["generate", "--tiling", "chair", "--level", "1"]));
    let b = json(&run(&[
        "generate",
        "--tiling",
        "chair",
        "--level",
        "1",
        "--seed-orientation",
        "1",
    ]));
    assert_eq!(
        a["patch"]["tiles"].as_array().unwrap().len(),
        b["patch"]["tiles"].as_array().unwrap().len()
    );
    assert_ne!(a, b);
}
