use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cosymp_cli::format::{parse_structure, render_example, render_structure};
use cosymp_core::corpus::{get_example, CATALOGUE};

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn cosymp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cosymp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8 output")
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn fixtures_are_the_rendered_corpus() {
    let mut on_disk: Vec<String> = fs::read_dir(fixtures_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    on_disk.sort();
    let mut expected: Vec<String> = CATALOGUE
        .iter()
        .map(|s| format!("{}.toml", s.name))
        .collect();
    expected.sort();
    assert_eq!(on_disk, expected);
    for spec in CATALOGUE {
        let entry = get_example(spec.name).unwrap();
        let text = fs::read_to_string(fixtures_dir().join(format!("{}.toml", spec.name))).unwrap();
        assert_eq!(
            text,
            render_example(&entry),
            "fixture {} drifted",
            spec.name
        );
    }
}

#[test]
fn fixtures_round_trip_byte_for_byte() {
    for spec in CATALOGUE {
        let text = fs::read_to_string(fixtures_dir().join(format!("{}.toml", spec.name))).unwrap();
        let loaded = parse_structure(&text).unwrap();
        let body = text.split_once('\n').unwrap().1;
        assert_eq!(
            render_structure(&loaded.chart, &loaded.omega, &loaded.big_omega),
            body,
            "{}",
            spec.name
        );
    }
}

#[test]
fn export_reproduces_the_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let out = cosymp(&["examples", "--export", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    for spec in CATALOGUE {
        let name = format!("{}.toml", spec.name);
        assert_eq!(
            fs::read(dir.path().join(&name)).unwrap(),
            fs::read(fixtures_dir().join(&name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn every_fixture_verifies() {
    for spec in CATALOGUE {
        let path = fixtures_dir().join(format!("{}.toml", spec.name));
        let out = cosymp(&["verify", path.to_str().unwrap()]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}:\n{}",
            spec.name,
            stdout(&out)
        );
    }
}

#[test]
fn mixed_fixture_reports_its_class() {
    let path = fixtures_dir().join("M3.toml");
    let out = cosymp(&["verify", path.to_str().unwrap()]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0));
    assert!(text.contains("status = \"pass\""));
    assert!(text.contains("class = \"mixed\""));
}

#[test]
fn contact_fixture_reports_the_jacobi_pair() {
    let path = fixtures_dir().join("C3.toml");
    let out = cosymp(&["verify", path.to_str().unwrap()]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0));
    assert!(
        text.contains("name = \"duality.identity.jacobi_pair\"\nstatus = \"pass\""),
        "{text}"
    );
}

#[test]
fn non_closed_two_form_fails_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(
        &dir,
        "bad.toml",
        "chart = [\"q\", \"p\", \"z\"]\n[omega]\nz = \"1\"\n[Omega]\n\"q^p\" = \"z\"\n",
    );
    let out = cosymp(&["verify", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("detail = \"Omega not closed\""));
}

#[test]
fn parse_errors_exit_two_with_a_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(
        &dir,
        "bad.toml",
        "chart = [\"q\", \"p\", \"z\"]\n[omega]\nz = \"1 +* q\"\n",
    );
    let out = cosymp(&["verify", &path]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(
        err.contains("omega") && err.contains("`z`") && err.contains("at byte 3"),
        "{err}"
    );
    assert!(stdout(&out).is_empty());
}

#[test]
fn usage_and_input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let even = write_temp(&dir, "even.toml", "chart = [\"q\", \"p\"]\n");
    let cases: Vec<Vec<&str>> = vec![
        vec!["verify"],
        vec!["verify", "/nonexistent/structure.toml"],
        vec!["verify", "--example", "NOPE"],
        vec!["verify", &even],
        vec!["frobnicate"],
        vec!["pair-check", "--example", "C3", "--f", "p +"],
        vec![
            "bracket",
            "--example",
            "C3",
            "--alg",
            "acc",
            "--left",
            "(p)",
            "--right",
            "(q, 0)",
        ],
        vec!["suite", "--example", "C3", "--tamper", "Lambda:q^w"],
    ];
    for args in cases {
        let out = cosymp(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn pair_check_reports_memberships() {
    let out = cosymp(&["pair-check", "--example", "C3", "--f", "p", "--h", "-p"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for m in ["omega", "Omega", "Lambda", "E,Omega", "omega,Omega"] {
        assert!(
            text.contains(&format!("\"LGen({m})\" = \"true\"")),
            "{m}: {text}"
        );
    }
    let out = cosymp(&["pair-check", "--example", "M3", "--f", "z", "--h", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\"LGen(Omega)\" = \"false\""), "{text}");
}

#[test]
fn bracket_prints_the_result_pair() {
    let out = cosymp(&[
        "bracket",
        "--example",
        "C3",
        "--alg",
        "acc",
        "--left",
        "(p, -p)",
        "--right",
        "(q, -q)",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let result = text.split("[objects.result]\n").nth(1).unwrap();
    let mut lines = result.lines();
    let f = lines.next().unwrap().strip_prefix("f = ").unwrap();
    let h = lines.next().unwrap().strip_prefix("h = ").unwrap();
    // The second component is the negated first.
    let neg = if let Some(rest) = f.strip_prefix("\"-") {
        format!("\"{rest}")
    } else {
        format!("\"-{}", &f[1..])
    };
    assert_eq!(h, neg, "{text}");

    let out = cosymp(&[
        "bracket",
        "--example",
        "K3",
        "--alg",
        "omega",
        "--left",
        "(3, 1)",
        "--right",
        "(2, 5)",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("[objects.result]\nf = \"0\"\nh = \"0\"\n"));
}

#[test]
fn bracket_precondition_failure_names_the_condition() {
    let out = cosymp(&[
        "bracket",
        "--example",
        "M3",
        "--alg",
        "Omega",
        "--left",
        "(z, 0)",
        "--right",
        "(q, 0)",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("cond1 violated for pair 1"));
}

#[test]
fn suite_passes_and_echoes_the_seed() {
    let out = cosymp(&["suite", "--example", "C3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let out = cosymp(&["suite", "--example", "M3b", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("\"seed: 7\""));
    assert!(text.contains("runtime budget"));
}

#[test]
fn tampered_dual_fails_the_identities() {
    let out = cosymp(&[
        "suite",
        "--example",
        "M3b",
        "--tamper",
        "Lambda:q^p",
        "--quiet",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let line = stdout(&out);
    assert!(
        line.starts_with("fail:") && line.contains("duality.identity."),
        "{line}"
    );
}

#[test]
fn reports_are_deterministic() {
    let runs: [&[&str]; 3] = [
        &["suite", "--example", "M3b", "--seed", "7"],
        &[
            "verify",
            "--example",
            "EM3",
            "--mode",
            "sampled",
            "--seed",
            "11",
        ],
        &["dual", "--example", "K3"],
    ];
    for args in runs {
        let a = cosymp(args);
        let b = cosymp(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn quiet_prints_one_summary_line() {
    let out = cosymp(&["verify", "--example", "K3", "--quiet"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("pass: "));
}
