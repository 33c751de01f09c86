use std::io::{BufRead, BufReader};
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn mosaic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mosaic")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn dread_and_usage_errors() {
    let o = mosaic(&["dread", "2", "3", "2", "3", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "13 high");
    assert_eq!(mosaic(&["dread", "2", "3", "2", "3", "4"]).status.code(), Some(2));
    assert_eq!(mosaic(&["dread", "2"]).status.code(), Some(2));
    assert_eq!(mosaic(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn sus_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("sus.csv");
    std::fs::write(&f, "3,3,3,3,3,3,3,3,3,3\n5,1,5,1,5,1,5,1,5,1\n").unwrap();
    let o = mosaic(&["sus", f.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "75.0");
    std::fs::write(&f, "3,3\n").unwrap();
    assert_eq!(mosaic(&["sus", f.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn missing_inputs_are_runtime_errors() {
    assert_eq!(mosaic(&["report", "--store", "/nonexistent/store"]).status.code(), Some(1));
    assert_eq!(
        mosaic(&["portal", "--corpus", "/nonexistent/corpus", "--port", "0"]).status.code(),
        Some(1)
    );
}

fn count_lines(p: &Path) -> usize {
    std::fs::read_to_string(p).map(|s| s.lines().count()).unwrap_or(0)
}

#[test]
fn full_pipeline_through_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    let store = dir.path().join("store");
    let c = corpus.to_str().unwrap();
    let s = store.to_str().unwrap();

    assert!(mosaic(&["synth", "--people", "250", "--seed", "9", "--out", c]).status.success());
    assert!(corpus.join("truth.jsonl").is_file());

    let mut portal = Command::new(env!("CARGO_BIN_EXE_mosaic"))
        .args(["portal", "--corpus", c, "--port", "0", "--captcha", "--rate", "100"])
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(portal.stdout.take().unwrap()).read_line(&mut line).unwrap();
    let url = line.trim().rsplit(' ').next().unwrap().to_string();
    assert!(url.starts_with("http://127.0.0.1:"), "{line}");

    let harvest = |extra: &[&str]| {
        let mut args = vec!["harvest", "--portal", &url, "--out", s, "--constituencies", "4", "--dl-span", "20", "--delay-ms", "0"];
        args.extend_from_slice(extra);
        mosaic(&args)
    };
    let o = harvest(&["--social-from", c]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = harvest(&[]);
    assert!(stdout(&o).starts_with("0 queries"), "{}", stdout(&o));
    portal.kill().unwrap();
    let _ = portal.wait();
    assert!(count_lines(&store.join("social.jsonl")) > 0);
    assert!(count_lines(&store.join("ledger.jsonl")) > 0);

    assert!(mosaic(&["link", "--store", s]).status.success());
    assert!(store.join("dossiers.jsonl").is_file());
    let o = mosaic(&["score", "--store", s]);
    assert!(o.status.success());
    assert_eq!(count_lines(&store.join("scores.jsonl")), count_lines(&store.join("dossiers.jsonl")));

    let o = mosaic(&["report", "--store", s, "--json"]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["source_counts"]["voter"].as_u64().unwrap() as usize, count_lines(&store.join("voter.jsonl")));
    assert!(store.join("report.json").is_file());
    let text = stdout(&mosaic(&["report", "--store", s]));
    assert!(text.contains("maximum score"));

    let o = mosaic(&["--sequential", "report", "--store", s, "--json"]);
    let again: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(again, report);
}

#[test]
fn serve_answers_stats() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    assert!(mosaic(&["synth", "--people", "120", "--out", corpus.to_str().unwrap()]).status.success());
    let mut server = Command::new(env!("CARGO_BIN_EXE_mosaic"))
        .args(["serve", "--store", corpus.to_str().unwrap(), "--port", "0"])
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(server.stdout.take().unwrap()).read_line(&mut line).unwrap();
    let api = line.trim().rsplit(' ').next().unwrap().to_string();
    let agent: ureq::Agent = ureq::Agent::config_builder().http_status_as_error(false).build().into();
    let body = agent.get(&format!("{api}/stats")).call().map(|mut r| r.body_mut().read_to_string());
    let status = agent.get(&format!("{api}/dossier/nope")).call().map(|r| r.status().as_u16());
    server.kill().unwrap();
    let _ = server.wait();
    let v: serde_json::Value = serde_json::from_str(&body.unwrap().unwrap()).unwrap();
    assert!(v["dossiers"].as_u64().unwrap() > 0);
    assert_eq!(status.unwrap(), 404);
}
