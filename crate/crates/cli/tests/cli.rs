use std::io::Write;
use std::process::{Command, Stdio};

use toric_gauss_cli::report::{AnalysisReport, ConstructionOut, DecompositionOut, DevelopabilityOut, ErrorOut, VerifyOut};

const INTRO: &str = r#"{"points": [[0,0],[0,1],[1,-1],[-1,-1]]}"#;

fn run(args: &[&str], stdin: Option<&str>) -> (String, i32) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_toric-gauss"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    let out = child.wait_with_output().unwrap();
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

#[test]
fn analyze_from_stdin_and_file_agree() {
    let (a, code) = run(&["analyze", "-", "--char", "2"], Some(INTRO));
    assert_eq!(code, 0);
    let dir = std::env::temp_dir().join(format!("toric-gauss-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("intro.txt");
    std::fs::write(&path, "# four points\n0 0\n0 1\n1 -1\n-1 -1\n").unwrap();
    let (b, _) = run(&["analyze", path.to_str().unwrap(), "--char", "2"], None);
    assert_eq!(a, b);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn report_schema_round_trips() {
    let (out, _) = run(&["analyze", "--inline", INTRO, "--char", "2"], None);
    let report: AnalysisReport = serde_json::from_str(&out).unwrap();
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", out);
    assert_eq!(report.lattice, vec![vec!["2", "0"]]);
    assert_eq!(report.saturation, vec![vec!["1", "0"]]);
    assert_eq!(report.invariants.deg_g2, "2");
    assert_eq!(report.invariants.sep_deg, "1");
    assert_eq!(report.image_config.as_ref().map(Vec::len), Some(2));
    // every integer is a string
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    fn no_numbers(v: &serde_json::Value) -> bool {
        match v {
            serde_json::Value::Number(_) => false,
            serde_json::Value::Array(a) => a.iter().all(no_numbers),
            serde_json::Value::Object(o) => o.values().all(no_numbers),
            _ => true,
        }
    }
    assert!(no_numbers(&value));
}

#[test]
fn characteristic_from_file_and_override() {
    let doc = r#"{"points": [[0],[1],[6],[7]], "characteristic": 2}"#;
    let (out, _) = run(&["analyze", "--inline", doc], None);
    let r: AnalysisReport = serde_json::from_str(&out).unwrap();
    assert_eq!((r.characteristic.as_str(), r.invariants.sep_deg.as_str(), r.invariants.insep_deg.as_str()), ("2", "3", "2"));
    let (out, _) = run(&["analyze", "--inline", doc, "--char", "3"], None);
    let r: AnalysisReport = serde_json::from_str(&out).unwrap();
    assert_eq!((r.invariants.sep_deg.as_str(), r.invariants.insep_deg.as_str()), ("2", "3"));
}

#[test]
fn fast_and_full_modes_agree_on_invariants() {
    let doc = r#"[[0],[1],[6],[7]]"#;
    let (full, _) = run(&["analyze", "--inline", doc, "--char", "2", "--mode", "full"], None);
    let (fast, _) = run(&["analyze", "--inline", doc, "--char", "2", "--mode", "fast"], None);
    let full: AnalysisReport = serde_json::from_str(&full).unwrap();
    let fast: AnalysisReport = serde_json::from_str(&fast).unwrap();
    assert_eq!(full.invariants, fast.invariants);
    assert_eq!(fast.mode, "fast");
}

#[test]
fn input_errors_are_machine_readable() {
    for (args, needle) in [
        (vec!["analyze", "--inline", INTRO, "--char", "4"], "characteristic must be 0 or prime"),
        (vec!["analyze", "--inline", "[[0,0],[0,0]]"], "duplicate"),
        (vec!["analyze", "--inline", "[[0,0],[1]]"], "coordinates"),
        (vec!["analyze", "/nonexistent/points.json"], "nonexistent"),
    ] {
        let (out, code) = run(&args, None);
        assert_eq!(code, 2, "{:?}", args);
        let e: ErrorOut = serde_json::from_str(&out).unwrap();
        assert_eq!(e.error.kind, "input");
        assert!(e.error.message.contains(needle), "{}", e.error.message);
    }
}

#[test]
fn lenient_mode_warns() {
    let (out, code) = run(&["analyze", "--inline", "[[0],[1],[1]]", "--lenient"], None);
    assert_eq!(code, 0);
    let r: AnalysisReport = serde_json::from_str(&out).unwrap();
    assert_eq!(r.warnings.len(), 1);
    assert_eq!(r.input.original.len(), 2);
}

#[test]
fn developable_end_to_end() {
    let (out, code) = run(&["developable", "--inline", INTRO, "--char", "2", "--proj", "[[0],[1]]"], None);
    assert_eq!(code, 0);
    let r: DevelopabilityOut = serde_json::from_str(&out).unwrap();
    assert_eq!((r.lhs.as_str(), r.rhs.as_str(), r.cross_check), ("0", "0", Some(true)));
    let (out, code) = run(&["developable", "--inline", INTRO, "--char", "3", "--proj", "[[0],[1]]"], None);
    assert_eq!(code, 1);
    let r: DevelopabilityOut = serde_json::from_str(&out).unwrap();
    assert_eq!((r.lhs.as_str(), r.rhs.as_str(), r.cross_check), ("1", "0", Some(false)));
    let simplex = "[[0,0],[1,0],[0,1]]";
    let (_, code) = run(&["developable", "--inline", simplex, "--proj", "[[1,0],[0,1]]"], None);
    assert_eq!(code, 0);
    let (_, code) = run(&["developable", "--inline", "[[0,0],[2,0],[0,1]]", "--proj", "[[1],[0]]"], None);
    assert_eq!(code, 3);
}

#[test]
fn decompose_end_to_end() {
    let cayley = "[[0,0],[1,0],[-1,0],[0,1],[3,1]]";
    let (out, code) = run(&["decompose", "--inline", cayley, "--char", "3"], None);
    assert_eq!(code, 0);
    let r: DecompositionOut = serde_json::from_str(&out).unwrap();
    assert_eq!(r.join.codimension, "1");
    assert!(!r.join.is_join);
    let (out, code) = run(&["decompose", "--inline", "[[0,0],[1,0],[0,1]]"], None);
    assert_eq!(code, 0);
    let r: DecompositionOut = serde_json::from_str(&out).unwrap();
    assert!(r.join.is_join);
    assert_eq!(r.parts.len(), 3);
    let (out, code) = run(&["decompose", "--inline", INTRO, "--char", "2"], None);
    assert_eq!(code, 3);
    assert!(out.contains("precondition"));
}

#[test]
fn construct_end_to_end() {
    let (out, code) = run(
        &["construct", "fiber-image", "--fiber", "[[0,0],[1,0],[0,1],[1,1]]", "--image", "[[0],[1],[2],[3]]", "--components", "2", "--char", "5"],
        None,
    );
    assert_eq!(code, 0);
    let r: ConstructionOut = serde_json::from_str(&out).unwrap();
    assert!(r.verified && r.checks.iter().all(|c| c.holds));
    assert_eq!(r.analysis.invariants.component_count, "2");
    assert_eq!(r.provenance.kind, "fiber-image");

    let (out, code) = run(&["construct", "hypersurface", "--exponents", "1,1,1", "--char", "3"], None);
    assert_eq!(code, 0, "{}", out);
    let (_, code) = run(&["construct", "codim2", "--dim", "4", "--char", "2"], None);
    assert_eq!(code, 0);
    let (_, code) = run(&["construct", "hypersurface", "--exponents", "3,1", "--char", "3"], None);
    assert_eq!(code, 3);
    let (_, code) = run(&["construct", "fiber-rank", "--fiber", "[[0],[1]]", "--rank", "1", "--dim", "4", "--char", "2"], None);
    assert_eq!(code, 3);
    let (out, code) = run(&["construct", "fiber-rank", "--rank", "2"], None);
    assert_eq!(code, 2);
    assert!(out.contains("--fiber"));
}

#[test]
fn verify_end_to_end() {
    let (out, code) = run(&["verify", "--configs", "10", "--lattices", "6", "--samples", "2"], None);
    assert_eq!(code, 0);
    let r: VerifyOut = serde_json::from_str(&out).unwrap();
    assert!(r.passed);
    assert_eq!(r.plucker.len(), 4);
    let (out, code) = run(&["verify", "--inline", "[[0,0],[1,0],[0,1]]"], None);
    assert_eq!(code, 0);
    let r: VerifyOut = serde_json::from_str(&out).unwrap();
    assert!(r.plucker.iter().all(|l| l.configurations == "1"));
    assert!(r.fiber_counts.is_empty());
    let (_, code) = run(&["verify", "--inline", INTRO, "--char", "2", "--samples", "8"], None);
    assert_eq!(code, 0);
}

#[test]
fn text_output() {
    let (out, code) = run(&["analyze", "--inline", INTRO, "--char", "2", "--text"], None);
    assert_eq!(code, 0);
    assert!(out.contains("degree           2 = 2 (insep) x 1 (sep)"));
    let (_, code) = run(&["analyze", "--inline", INTRO, "--text", "--json"], None);
    assert_eq!(code, 2);
}
