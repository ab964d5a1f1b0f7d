use std::process::{Command, Output};

fn cops(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cops"))
        .args(args)
        .env_remove("COPS_RETRACT_BUDGET")
        .output()
        .expect("run cops")
}

fn stdout(args: &[&str]) -> String {
    let out = cops(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn solve_prints_the_cop_number() {
    assert_eq!(stdout(&["solve", "--graph", "petersen"]).trim(), "3");
    let json = stdout(&["solve", "--graph", "cycle:6", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["cop_number"], 2);
    assert_eq!(v["n"], 6);
}

#[test]
fn solve_writes_a_strategy_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("table.txt");
    stdout(&[
        "solve",
        "--graph",
        "petersen",
        "--table",
        table.to_str().unwrap(),
    ]);
    assert!(std::fs::metadata(&table).unwrap().len() > 0);
}

#[test]
fn bounds_report_girth_bound() {
    let text = stdout(&["bounds", "--graph", "heawood"]);
    assert!(text.contains("girth5 bound 3"), "{text}");
    let text = stdout(&["bounds", "--gnp", "1000000,0.001"]);
    assert!(
        text.contains("gnp lower") && text.contains("gnp upper"),
        "{text}"
    );
}

#[test]
fn config_probabilities() {
    assert_eq!(
        stdout(&["retract", "config-probabilities"]).trim(),
        "11/16 163/256"
    );
}

#[test]
fn generate_is_seeded() {
    let a = stdout(&["generate", "gnp:40,0.1", "--seed", "5"]);
    let b = stdout(&["generate", "gnp:40,0.1", "--seed", "5"]);
    let c = stdout(&["generate", "gnp:40,0.1", "--seed", "6"]);
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(a.starts_with("40 "));
}

#[test]
fn generated_graphs_feed_back_in() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cube.txt");
    let sidecar = dir.path().join("cube.json");
    let p = path.to_str().unwrap();
    stdout(&[
        "generate",
        "subdivided:3,1,3",
        "--out",
        p,
        "--sidecar",
        sidecar.to_str().unwrap(),
    ]);
    assert!(sidecar.exists());
    let k: usize = stdout(&["solve", "--graph", p]).trim().parse().unwrap();
    assert!(k >= 1);
}

#[test]
fn play_writes_a_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("game.json");
    let text = stdout(&[
        "play",
        "--graph",
        "petersen",
        "--cops",
        "optimal:k=3",
        "--robber",
        "greedy-avoid",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(text.starts_with("Caught"), "{text}");
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert!(v["moves"].is_array());
}

#[test]
fn retract_verify_and_search() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("map.txt");
    // Sends the edge 3-4 to the non-edge 3-0.
    std::fs::write(&map, "0 0\n1 1\n2 2\n3 3\n4 0\n5 1\n").unwrap();
    let text = stdout(&[
        "retract",
        "verify",
        "--graph",
        "cycle:6",
        "--map",
        map.to_str().unwrap(),
    ]);
    assert!(text.contains("retraction false"), "{text}");

    let path = dir.path().join("path.txt");
    std::fs::write(&path, "4 3\n0 1\n1 2\n2 3\n").unwrap();
    std::fs::write(&map, "0 0\n1 1\n2 1\n3 1\n").unwrap();
    let text = stdout(&[
        "retract",
        "verify",
        "--graph",
        path.to_str().unwrap(),
        "--map",
        map.to_str().unwrap(),
    ]);
    assert!(text.contains("retraction true"), "{text}");

    let image = dir.path().join("image.txt");
    std::fs::write(&image, "0 1\n").unwrap();
    let found = stdout(&[
        "retract",
        "search",
        "--graph",
        "cycle:6",
        "--image",
        image.to_str().unwrap(),
    ]);
    assert_eq!(found.lines().count(), 6, "{found}");
    std::fs::write(&image, "0 2 4\n").unwrap();
    let none = stdout(&[
        "retract",
        "search",
        "--graph",
        "cycle:6",
        "--image",
        image.to_str().unwrap(),
    ]);
    assert_eq!(none.trim(), "none");
}

#[test]
fn exhausted_budget_exits_with_code_three() {
    let dir = tempfile::tempdir().unwrap();
    let image = dir.path().join("image.txt");
    std::fs::write(&image, "0 1\n").unwrap();
    let out = cops(&[
        "retract",
        "search",
        "--graph",
        "cycle:6",
        "--image",
        image.to_str().unwrap(),
        "--budget",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bad_input_exits_with_code_two() {
    let out = cops(&["solve", "--graph", "no-such-graph"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no-such-graph"));
}

#[test]
fn experiment_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("run");
    let args = |jobs: &'static str| {
        vec![
            "experiment".to_string(),
            "--graph".into(),
            "gnp:30,0.2".into(),
            "--cops".into(),
            "greedy:k=2".into(),
            "--robber".into(),
            "walkweight".into(),
            "--trials".into(),
            "6".into(),
            "--resample-graph".into(),
            "--seed".into(),
            "11".into(),
            "--jobs".into(),
            jobs.into(),
            "--out".into(),
            prefix.to_str().unwrap().into(),
        ]
    };
    let run = |jobs| {
        let a: Vec<String> = args(jobs);
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        stdout(&a);
        std::fs::read_to_string(prefix.with_extension("csv")).unwrap()
    };
    let one = run("1");
    let four = run("4");
    assert_eq!(one, four);
    assert!(one.starts_with("# cops-results v1\n"));
    assert_eq!(one.lines().count(), 2 + 6);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(prefix.with_extension("json")).unwrap())
            .unwrap();
    assert_eq!(summary["summary"]["trials"], 6);
}

#[test]
fn acceptance_subset_passes() {
    let text = stdout(&["acceptance", "--only", "3,10"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(|l| l.starts_with("PASS")), "{text}");
}
