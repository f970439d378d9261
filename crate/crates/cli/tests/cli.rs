use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn flagbord(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagbord")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn job_file_json_report() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        r#"{{"task": "flag", "group": {{"type": "GL", "rank": 2}}, "format": "json",
            "base": {{"generators": [{{"name": "h", "degree": 1}}], "relations": ["h^2"],
                      "char_classes": {{"sigma_1": "h", "sigma_2": "0"}}}}}}"#
    )
    .unwrap();
    let out = flagbord(&["--job", f.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["job"]["task"], "flag");
    assert_eq!(v["job"]["mode"], "chow");
    assert_eq!(v["presentation"]["free_basis"]["rank"], 2);
    assert_eq!(v["presentation"]["identities"][0]["identity"], "x1^2 - x1*h = 0");
    assert_eq!(v["rank_check"]["by_averaging"], 2);
}

#[test]
fn job_from_stdin_with_flag_override() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_flagbord"))
        .args(["--job", "-", "--rank", "3"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"task": "coinv", "group": {"type": "B", "rank": 2}}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("|W| = 48, N = 9"), "{text}");
}

#[test]
fn oracle_exits_zero_when_routes_agree() {
    let out = flagbord(&["oracle", "--of", "fgl", "--mode", "cobordism", "--truncate", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().skip(1).all(|l| l.ends_with(", OK")), "{text}");
}

#[test]
fn invalid_jobs_exit_one_with_paths() {
    let out = flagbord(&["flag", "--group", "GL", "--rank", "2", "--class", "sigma_1=h^2", "--gen", "h:1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("/base/char_classes/sigma_1"), "{err}");
    assert!(err.contains("/base/char_classes"), "{err}");

    let out = flagbord(&["coinv", "--group", "G2", "--rank", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("/group"));

    let out = flagbord(&["coinv"]);
    assert_eq!(out.status.code(), Some(1));

    let out = flagbord(&["--job", "/nonexistent/job.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn principal_text_report() {
    let out = flagbord(&["principal", "--gen", "h:1", "--relation", "h^2", "--character", "chi=h"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("total rank (degrees 0..6): 1"));
}

#[test]
fn dual_convention_is_reported() {
    let out = flagbord(&["flag", "--group", "GL", "--rank", "2", "--convention", "dual", "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["presentation"]["convention"]["name"], "dual");
    assert_eq!(v["presentation"]["relations"][0], "-x1 - x2");
}
