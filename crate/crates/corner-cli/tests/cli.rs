use std::process::{Command, Output};

fn corner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corner")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn passing_suite_exits_zero() {
    let o = corner(&["verify", "braid-relations", "--p", "3", "--g", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[pass] relations-on-l"));
}

#[test]
fn failing_suite_exits_one() {
    let o = corner(&["verify", "action-formulas"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL] semisimple-odd-as-displayed"));
}

#[test]
fn usage_and_resource_errors_exit_two() {
    assert_eq!(corner(&["verify", "nothing"]).status.code(), Some(2));
    assert_eq!(corner(&["verify", "fox", "--p", "4"]).status.code(), Some(2));
    assert_eq!(corner(&["verify", "main-theorem", "--p", "5", "--g", "2", "--max-dim", "10"]).status.code(), Some(2));
    assert_eq!(corner(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn json_report() {
    let o = corner(&["verify", "main-theorem", "--format", "json", "--threads", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["command"], "verify main-theorem --p 3 --g 1 --seed 0");
    assert_eq!(v["values"]["corner_dim"], 6);
    let full = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "corner-full").unwrap();
    assert_eq!(full["status"], "skipped-out-of-hypothesis");
}

#[test]
fn dumps() {
    let table = corner(&["dump", "group-table"]);
    assert_eq!(stdout(&table).lines().count(), 27);

    let dir = std::env::temp_dir().join(format!("corner-psi-{}", std::process::id()));
    let o = corner(&["dump", "psi-matrices", "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut files: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().file_name()).collect();
    files.sort();
    assert_eq!(files.len(), 4);
    let text = std::fs::read_to_string(dir.join("psi_hat_1.txt")).unwrap();
    assert!(text.lines().all(|l| l.split(' ').take(2).all(|x| x.parse::<usize>().is_ok_and(|i| i < 6))));
    std::fs::remove_dir_all(&dir).unwrap();

    let basis = corner(&["dump", "distinguished-basis", "--p", "5", "--g", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&basis)).unwrap();
    assert_eq!(v.as_object().unwrap().len(), 16);

    let units = corner(&["dump", "matrix-units", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&units)).unwrap();
    assert_eq!(v.as_object().unwrap().len(), 9);
    assert_eq!(corner(&["dump", "operators", "--p", "3"]).status.code(), Some(2));
}

#[test]
fn bench_grid_is_reproducible() {
    let run = |threads: &str| {
        let o = corner(&["bench", "--format", "json", "--threads", threads]);
        let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
        rows.into_iter()
            .map(|r| (r["p"].clone(), r["g"].clone(), r["corner_dim"].clone(), r["growth"].clone()))
            .collect::<Vec<_>>()
    };
    let one = run("1");
    assert_eq!(one.len(), 4);
    assert_eq!(one, run("4"));
}
