mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::*;

fn qmus(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qmus"));
    cmd.args(args).env_remove("QMUS_ENUM_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn check_ok_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "two_note.qms", TWO_NOTE);
    let o = qmus(&["check", &good], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "OK\n");

    let bad = write(dir.path(), "bad.qms", "voice v1 { c q }\n");
    let o = qmus(&["check", &bad], &[]);
    assert_eq!(o.status.code(), Some(1));
    let lines: Vec<String> = stderr(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 1, "{lines:?}");
    assert!(lines[0].starts_with("1:1: "), "{}", lines[0]);

    let several = write(dir.path(), "several.qms", "model bundled 7\ntempo 120\nvoice v { sup{0.8 c, 0.8 g} q z q }\n");
    let o = qmus(&["check", &several], &[]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.lines().count() >= 2, "{err}");
    for l in err.lines() {
        let mut parts = l.splitn(3, ':');
        assert!(parts.next().unwrap().parse::<usize>().is_ok(), "{l}");
        assert!(parts.next().unwrap().parse::<usize>().is_ok(), "{l}");
    }
}

#[test]
fn analyze_stdout_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "two_note.qms", TWO_NOTE);
    let a = qmus(&["analyze", &f], &[]);
    let b = qmus(&["analyze", &f], &[]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().nth(1), Some("c-g,0.4096"));
    assert_eq!(stdout(&a), include_str!("fixtures/two_note.csv"));

    let out = dir.path().join("dist.csv");
    let o = qmus(&["analyze", &f, "--out", out.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&out).unwrap(), a.stdout);
}

#[test]
fn enumeration_cap_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "two_note.qms", TWO_NOTE);
    let o = qmus(&["analyze", &f], &[("QMUS_ENUM_CAP", "3")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("perform"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    assert_eq!(qmus(&["analyze", &f], &[("QMUS_ENUM_CAP", "4")]).status.code(), Some(0));

    let long = format!("model bundled 7\ntempo 120\nvoice v {{ {} }}\n", "sup{0.8 c, 0.6 g} e ".repeat(21));
    let f = write(dir.path(), "long.qms", &long);
    assert_eq!(qmus(&["analyze", &f], &[]).status.code(), Some(3));
    assert_eq!(qmus(&["perform", &f, "--count", "5"], &[]).status.code(), Some(0));
}

#[test]
fn io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.qms");
    assert_eq!(qmus(&["check", missing.to_str().unwrap()], &[]).status.code(), Some(2));
    let f = write(dir.path(), "two_note.qms", TWO_NOTE);
    let unwritable = dir.path().join("no/such/dir/out.csv");
    assert_eq!(qmus(&["analyze", &f, "--out", unwritable.to_str().unwrap()], &[]).status.code(), Some(2));
    assert_eq!(qmus(&["analyze", &f], &[("QMUS_ENUM_CAP", "lots")]).status.code(), Some(2));
    let not_utf8 = dir.path().join("bin.qms");
    std::fs::write(&not_utf8, [0xff, 0xfe, 0x00]).unwrap();
    assert_eq!(qmus(&["check", not_utf8.to_str().unwrap()], &[]).status.code(), Some(2));
}

#[test]
fn perform_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "two_note.qms", TWO_NOTE);
    let a = qmus(&["perform", &f, "--seed", "42", "--count", "3"], &[]);
    let b = qmus(&["perform", &f, "--seed", "42", "--count", "3"], &[]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let lines: Vec<String> = stdout(&a).lines().map(String::from).collect();
    assert_eq!(lines.len(), 3);
    for (k, l) in lines.iter().enumerate() {
        let f: Vec<&str> = l.split(' ').collect();
        assert_eq!(f[0], "42");
        assert_eq!(f[1], k.to_string());
        assert!(
            ["c-g,0.4096", "g-c,0.1296", "c-c,0.2304", "g-g,0.2304"].contains(&format!("{},{}", f[2], f[3]).as_str())
        );
    }
    let default = qmus(&["perform", &f], &[]);
    assert_eq!(stdout(&default).lines().count(), 1);
    assert!(stdout(&default).starts_with("0 0 "));
}

#[test]
fn render_formats() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "two_note.qms", TWO_NOTE);
    let mid = dir.path().join("f.mid");
    let o = qmus(&["render", &f, "--format", "midi", "--seed", "42", "--out", mid.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&mid).unwrap(), include_bytes!("fixtures/two_note_seed42.mid"));

    let o = qmus(&["render", &f, "--format", "midi", "--seed", "3", "--count", "4"], &[]);
    let smf = read_smf(&o.stdout).unwrap();
    assert_eq!(smf.tracks.len(), 5);

    let o = qmus(&["render", &f, "--format", "csv"], &[]);
    assert_eq!(stdout(&o), include_str!("fixtures/two_note.csv"));

    let o = qmus(&["render", &f, "--format", "text"], &[]);
    assert_eq!(stdout(&o), "voice v1\ng: 36 64\nc: 64 36\n");

    assert_eq!(qmus(&["render", &f], &[]).status.code(), Some(2));
    assert_eq!(qmus(&["render", &f, "--format", "wav"], &[]).status.code(), Some(2));
}

#[test]
fn voice_selection() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "two.qms", "model modes\ntempo 60\nvoice a { c q }\nvoice b { occ(g, 0.6, 0.8) q }\n");
    assert_eq!(stdout(&qmus(&["analyze", &f], &[])), "melody,probability\nc,1\n");
    assert_eq!(stdout(&qmus(&["analyze", &f, "--voice", "b"], &[])), "melody,probability\ng,0.64\nrest,0.36\n");
    assert_eq!(qmus(&["analyze", &f, "--voice", "z"], &[]).status.code(), Some(1));
}
