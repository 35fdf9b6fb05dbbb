use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn nulearn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nulearn")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn ldim_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let class = write(
        dir.path(),
        "thresholds.json",
        r#"{"domain":[1,2,3],"hypotheses":[[1,1,1],[0,1,1],[0,0,1],[0,0,0]]}"#,
    );
    let out = nulearn(&["ldim", &class, "--witness"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let (first, rest) = text.split_once('\n').unwrap();
    assert_eq!(first, "2");
    let witness: serde_json::Value = serde_json::from_str(rest).unwrap();
    assert_eq!(witness["depth"], 2);
    assert_eq!(witness["points"].as_array().unwrap().len(), 3);
}

#[test]
fn ldim_of_symbolic_class_and_family() {
    let dir = tempfile::tempdir().unwrap();
    let sym = write(dir.path(), "fs.json", r#"{"class":"finite-support","params":{"max_ones":3,"domain_size":10}}"#);
    assert_eq!(stdout(&nulearn(&["ldim", &sym])).trim(), "3");
    let fam = write(
        dir.path(),
        "fam.json",
        r#"{"family":"explicit-list","params":{"components":[
            {"domain":["a"],"hypotheses":[[0]]},
            {"domain":["a","b"],"hypotheses":[[0,0],[0,1],[1,0],[1,1]]}]}}"#,
    );
    assert_eq!(stdout(&nulearn(&["ldim", &fam])), "H_1: 0\nH_2: 2\n");
}

#[test]
fn play_writes_replayable_csv() {
    let dir = tempfile::tempdir().unwrap();
    let learner = r#"{"learner":"fpl","experts":[{"constant":0},{"constant":1}],"complexities":[1,1]}"#;
    let nature = write(dir.path(), "nature.json", r#"{"nature":"coin-flip"}"#);
    let compare = r#"{"domain":[0],"hypotheses":[[0],[1]]}"#;
    let run = |csv: &str| {
        let out = nulearn(&[
            "play", "--learner", learner, "--nature", &nature, "-T", "50", "--seed", "4", "--csv", csv, "--compare",
            compare,
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        stdout(&out)
    };
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let summary = run(a.to_str().unwrap());
    run(b.to_str().unwrap());
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("t,x,y,yhat,mistake,cum_mistakes,cum_best_rival\n"));
    assert_eq!(text.lines().count(), 51);
    let last: Vec<&str> = text.lines().last().unwrap().split(',').collect();
    assert!(summary.contains(&format!("{} mistakes, best rival {}", last[5], last[6])), "{summary}");
}

#[test]
fn regret_config_reports_bound() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "exp.json",
        r#"{"learner":{"learner":"constant","label":0},"nature":{"nature":"coin-flip"},
            "horizons":[100],"trials":200,"seed":1,
            "comparator":{"class":{"domain":[0],"hypotheses":[[0],[1]]}},
            "bound":{"bound":"coin-flip-lower"}}"#,
    );
    let out = nulearn(&["regret", "--config", &cfg, "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["points"][0]["holds"], true);
    assert_eq!(v["points"][0]["regret"]["trials"], 200);
}

#[test]
fn zero_trial_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.json",
        r#"{"learner":{"learner":"constant","label":0},"nature":{"nature":"coin-flip"},
            "horizons":[10],"trials":0,"comparator":{"class":{"domain":[0],"hypotheses":[[0],[1]]}}}"#,
    );
    let out = nulearn(&["regret", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trials"));
}

#[test]
fn verify_exit_codes() {
    let ok = nulearn(&["verify", "--check", "complexity-mass", "--check", "window-halving"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok).lines().filter(|l| l.starts_with("PASS")).count(), 2);

    let broken = nulearn(&["verify", "--check", "ldim-minimax", "--corrupt-ldim-memo"]);
    assert_eq!(broken.status.code(), Some(1));
    let text = stdout(&broken);
    assert!(text.starts_with("FAIL ldim-minimax"));
    assert!(text.contains("counterexample {\"domain\""), "{text}");
}

#[test]
fn exact_checks_ignore_seed() {
    let run = |seed: &str| {
        let out = nulearn(&["verify", "--check", "soa-bound", "--check", "window-halving", "--seed", seed]);
        stdout(&out)
            .lines()
            .map(|l| {
                let mut f = l.split_whitespace();
                format!("{} {}", f.next().unwrap(), f.next().unwrap())
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(run("1"), run("999"));
}
