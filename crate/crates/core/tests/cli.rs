use std::path::Path;
use std::process::{Command, Output};

fn oddlibm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oddlibm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn text(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn generate_worked_example(out: &Path) -> Output {
    oddlibm(&[
        "generate",
        "--func",
        "ln",
        "--n",
        "5",
        "--ebits",
        "2",
        "--max-degree",
        "4",
        "--max-pieces",
        "1",
        "--out",
        out.to_str().unwrap(),
    ])
}

#[test]
fn generate_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let art = dir.path().join("ln.artifact");
    let g = generate_worked_example(&art);
    assert_eq!(g.status.code(), Some(0), "{}", String::from_utf8_lossy(&g.stderr));
    assert!(text(&g).contains("singletons   1"));

    let report = dir.path().join("report.json");
    let v = oddlibm(&["verify", art.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
    let out = text(&v);
    assert_eq!(out.matches('✓').count(), 10, "{out}");
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(json["cells"].as_array().unwrap().len(), 10);

    let subset = oddlibm(&["verify", art.to_str().unwrap(), "--targets", "k=5", "--modes", "rn,rz"]);
    assert_eq!(subset.status.code(), Some(0));
    assert_eq!(text(&subset).matches('✓').count(), 2);
}

#[test]
fn artifacts_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.artifact");
    let b = dir.path().join("b.artifact");
    for p in [&a, &b] {
        assert_eq!(generate_worked_example(p).status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn mutated_artifact_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let art = dir.path().join("ln.artifact");
    assert_eq!(generate_worked_example(&art).status.code(), Some(0));
    let original = std::fs::read_to_string(&art).unwrap();
    let mut done = false;
    let mutated: Vec<String> = original
        .lines()
        .map(|l| {
            let parts: Vec<&str> = l.split_whitespace().collect();
            if !done && parts.first() == Some(&"coeff") {
                done = true;
                let bits = u64::from_str_radix(parts[2].trim_start_matches("0x"), 16).unwrap();
                // c0 moved by 2^-4 relative: far outside any odd interval
                format!("coeff {} {:#x}", parts[1], bits ^ (1 << 48))
            } else {
                l.to_string()
            }
        })
        .collect();
    std::fs::write(&art, mutated.join("\n") + "\n").unwrap();
    let v = oddlibm(&["verify", art.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(1));
    assert!(text(&v).contains("instead of"));
}

#[test]
fn infeasible_generation_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let art = dir.path().join("x.artifact");
    let o = oddlibm(&[
        "generate",
        "--func",
        "ln",
        "--n",
        "8",
        "--ebits",
        "3",
        "--max-degree",
        "1",
        "--max-pieces",
        "1",
        "--out",
        art.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(text(&o).contains("most constrained piece"));
    assert!(!art.exists());
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        &["generate", "--func", "ln", "--n", "5", "--ebits", "1"][..],
        &["generate", "--func", "ln", "--n", "5", "--ebits", "2", "--max-pieces", "3"],
        &["generate", "--func", "nosuch", "--n", "5", "--ebits", "2"],
        &["bogus"],
    ] {
        assert_eq!(oddlibm(args).status.code(), Some(64), "{args:?}");
    }
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.artifact");
    std::fs::write(&bad, "not an artifact\n").unwrap();
    assert_eq!(oddlibm(&["verify", bad.to_str().unwrap()]).status.code(), Some(64));
}

#[test]
fn census_and_composition() {
    let s = oddlibm(&["singletons", "--func", "exp10", "--n", "32", "--ebits", "8"]);
    assert_eq!(s.status.code(), Some(0));
    assert!(text(&s).ends_with("12 inputs\n"));
    let c = oddlibm(&["composition", "--n", "7", "--ebits", "3"]);
    assert_eq!(c.status.code(), Some(0));
    assert!(text(&c).contains(" 0 violations"));
    let i = oddlibm(&["intervals", "--func", "ln", "--n", "5", "--ebits", "2"]);
    assert!(text(&i).contains("# 10 intervals, 1 singletons"));
}

#[test]
fn jobs_flag_is_accepted() {
    let c = oddlibm(&["--jobs", "2", "composition", "--n", "6", "--ebits", "2"]);
    assert_eq!(c.status.code(), Some(0));
}
