use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sierpinski-eip"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn graph_text_and_json() {
    let o = run(&["graph", "--n", "2", "--m", "3"]);
    assert!(o.status.success());
    let lines: Vec<_> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 12);
    assert!(lines.contains(&"01 10".to_string()));

    let o = run(&["graph", "--n", "1", "--m", "3", "--format", "json"]);
    let v = json(&o);
    assert_eq!(
        v["edges"],
        serde_json::json!([["0", "1"], ["0", "2"], ["1", "2"]])
    );
}

#[test]
fn graph_to_file() {
    let dir = std::env::temp_dir().join(format!("sierpinski-eip-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("edges.txt");
    let o = run(&[
        "graph",
        "--n",
        "3",
        "--m",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 7);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn profile_methods_agree() {
    let csv = |method| {
        stdout(&run(&[
            "profile", "--n", "2", "--m", "3", "--method", method,
        ]))
    };
    let rec = csv("recurrence");
    assert_eq!(rec, csv("direct"));
    assert_eq!(rec, csv("brute"));
    assert!(rec.starts_with("ell,theta\n0,0\n1,2\n2,3\n"));

    let o = run(&["profile", "--n", "2", "--m", "3", "--format", "json"]);
    assert_eq!(
        json(&o)["values"],
        serde_json::json!([0, 2, 3, 2, 3, 3, 2, 3, 2, 0])
    );
}

#[test]
fn brute_profile_over_cap_is_usage_error() {
    let o = run(&["profile", "--n", "3", "--m", "3", "--method", "brute"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_subadd_single_and_sweep() {
    let o = run(&["verify", "subadd", "--n", "3", "--m", "3", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["pairs"], 27 * 28 / 2);
    assert_eq!(v["violations"], serde_json::json!([]));
    assert!(v["min_slack"].as_i64().unwrap() >= 0);
    let cases = v["cases"].as_object().unwrap();
    assert_eq!(cases.len(), 16);
    assert_eq!(
        cases.values().map(|c| c.as_u64().unwrap()).sum::<u64>(),
        27 * 28 / 2
    );

    let o = run(&["verify", "subadd", "--max-nm", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o).as_array().unwrap().len(), 10);
}

#[test]
fn verify_optimal_and_lemmas() {
    let o = run(&["verify", "optimal", "--n", "2", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["mismatches"], serde_json::json!([]));

    // the stated wrapped q-additivity form fails from n = 2 on
    let o = run(&["verify", "lemmas", "--n", "2", "--m", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let checks = json(&o)["checks"].as_array().unwrap().clone();
    for c in checks {
        let failing = c["failures"].as_u64().unwrap() > 0;
        assert_eq!(failing, c["name"] == "q_additivity_above", "{c}");
    }
    let o = run(&["verify", "lemmas", "--n", "1", "--m", "5"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_needs_a_target() {
    assert_eq!(run(&["verify", "subadd"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "subadd", "--n", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "optimal", "--n", "3", "--m", "5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn metrics_json() {
    let o = run(&["metrics", "--n", "2", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["bisection_width"], 3);
    assert_eq!(v["cheeger"], serde_json::json!({"num": 2, "den": 3}));
    assert_eq!(v["max_formula_agrees"], true);

    let v = json(&run(&["metrics", "--n", "2", "--m", "2"]));
    assert_eq!(v["max_profile"], 1);
    assert_eq!(v["max_formula_agrees"], serde_json::Value::Null);
}

#[test]
fn steiner_commands() {
    let o = run(&[
        "steiner", "compress", "--n", "2", "--m", "3", "--set", "00,01,11", "--h", "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("set: 00,01,10"), "{out}");
    assert!(out.contains("theta: 5 -> 4"), "{out}");

    let o = run(&[
        "steiner", "subadd", "--n", "2", "--m", "3", "--set", "@1-3,20",
    ]);
    assert!(stdout(&o).contains("ell: [3, 1, 0]"), "{}", stdout(&o));

    let o = run(&[
        "steiner", "reduce", "--n", "2", "--m", "3", "--s", "1", "--set", "22,21,12",
    ]);
    let out = stdout(&o);
    assert!(out.starts_with("input "), "{out}");
    assert!(out.contains("set: 00,01,02"), "{out}");

    let o = run(&[
        "steiner", "subadd", "--n", "2", "--m", "3", "--set", "00,20",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&[
        "steiner", "compress", "--n", "2", "--m", "3", "--s", "2", "--t", "2", "--set", "00",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_arguments() {
    assert_eq!(run(&["graph", "--n", "2"]).status.code(), Some(2));
    assert_eq!(
        run(&["graph", "--n", "2", "--m", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["graph", "--n", "2", "--m", "3", "--format", "xml"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}
