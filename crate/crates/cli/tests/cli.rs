use std::path::Path;
use std::process::{Command, Output};

use class16::report::ReportJson;

fn class16(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_class16"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn low_level_commands() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &str); 5] = [
        (&["cf", "79"], "[9; (9,18)] m=7\n"),
        (&["cf", "1", "3", "79"], "[4; (2,2,4,3,7)]\nn=3"),
        (&["pell", "7"], "d=8 c=3\n"),
        (&["dedekind", "1", "3"], "1/18\n"),
        (&["dedekind", "80", "9"], "-14/27\n"),
    ];
    for (args, want) in cases {
        let o = class16(args, dir.path());
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert!(stdout(&o).starts_with(want), "{args:?}: {}", stdout(&o));
    }
    assert!(stdout(&class16(&["cf", "3"], dir.path())).starts_with("[2; (4)] m=1/3"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let code = |args: &[&str]| class16(args, d).status.code();
    assert_eq!(code(&["verify", "79", "--no-cache"]), Some(0));
    assert_eq!(code(&["verify", "13"]), Some(2));
    assert_eq!(code(&["verify", "3"]), Some(2));
    assert_eq!(code(&["verify", "91"]), Some(2));
    assert_eq!(code(&["verify", "abc"]), Some(2));
    assert_eq!(code(&["sweep", "3", "10"]), Some(2));
    assert_eq!(code(&["sweep", "50", "10"]), Some(2));
    assert_eq!(code(&["pell", "13"]), Some(2));
    assert_eq!(code(&["dedekind", "2", "4"]), Some(2));
    assert_eq!(code(&["cf", "1", "2"]), Some(2));
    assert_eq!(code(&["cf", "4"]), Some(2));
    assert_eq!(code(&["cf", "79", "--max-cf-steps", "1"]), Some(2));
    assert_eq!(code(&["nonsense"]), Some(2));
    assert_eq!(code(&["--help"]), Some(0));
}

#[test]
fn verify_text_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = class16(&["verify", "79", "--no-cache"], dir.path());
    let text = stdout(&o);
    assert!(text.contains("m(p) = 7"));
    assert!(text.contains("all checks passed"));

    let o = class16(&["verify", "11", "--no-cache", "--json"], dir.path());
    let line = stdout(&o);
    let r: ReportJson = serde_json::from_str(line.trim_end()).unwrap();
    assert_eq!((r.h_plus, r.h_minus_oracle), (1, 1));
    assert!(r.checks.thmz && r.all_ok);
    assert_eq!(r.timing_ms, None);
    assert_eq!(r.to_json(), line.trim_end());
}

#[test]
fn sweep_json_round_trips_and_contains_43063() {
    let dir = tempfile::tempdir().unwrap();
    let o = class16(&["sweep", "43000", "43100", "--json", "--no-cache"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let reports: Vec<ReportJson> = out
        .lines()
        .map(|l| {
            let r: ReportJson = serde_json::from_str(l).unwrap();
            assert_eq!(r.to_json(), l, "round trip");
            r
        })
        .collect();
    let ps: Vec<i64> = reports.iter().map(|r| r.p).collect();
    assert_eq!(ps, vec![43003, 43019, 43051, 43063, 43067]);
    let r = &reports[3];
    assert_eq!((r.h_plus, r.h_minus_oracle, r.class_group.clone()), (9, 73, vec![3, 3]));
    let ts: Vec<i64> = r.classes.iter().map(|c| c.t).collect();
    assert_eq!(ts, vec![579, -141, -141, -69, -69, 51, 51, -21, -21]);
    // Units this large are written as strings.
    assert!(out.contains("\"d\":\""));
}

#[test]
fn sweep_text_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = class16(&["sweep", "4", "100", "--csv", "s.csv", "--no-cache"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.ends_with(" ok")).count(), 12);
    assert!(text.contains("p=79 h+=3 h-=5 m=7 ok"));
    assert!(text.contains("12 passed, 0 failed"));
    let csv = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("p,h_plus,h_minus,m,mod16_ok,all_ok,ms"));
    assert_eq!(lines.nth(10), Some("79,3,5,7,true,true,"));

    let o = class16(&["sweep", "4", "4"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("swept 0 primes"));
}

#[test]
fn corrupt_cache_lines_are_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let o = class16(&["sweep", "4", "50", "--cache", "c.jsonl"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let good = std::fs::read_to_string(&cache).unwrap();
    assert_eq!(good.lines().count(), 7);

    // A forged unit for 7 and a garbage line precede the genuine records.
    let forged = r#"{"schema":1,"p":7,"d":"127","c":"48","period":[[3,1],[6,1]]}"#;
    std::fs::write(&cache, format!("{forged}\nnot json\n{good}")).unwrap();
    let o = class16(&["verify", "7", "--cache", "c.jsonl", "--json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let warnings = String::from_utf8(o.stderr.clone()).unwrap();
    assert_eq!(warnings.matches("skipping cache line").count(), 2, "{warnings}");
    assert!(stdout(&o).contains(r#""pell":{"d":8,"c":3"#));
    // Nothing new was appended.
    let after = std::fs::read_to_string(&cache).unwrap();
    assert_eq!(after.lines().count(), 9);
}
