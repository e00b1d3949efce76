use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heckelab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_on(args: &[&str], file: &str) -> Output {
    let path = fixture(file);
    let mut all: Vec<&str> = args.to_vec();
    all.push(path.to_str().unwrap());
    run(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn report(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("JSON report on stdout")
}

fn compute(expr: &str, extra: &[&str]) -> Output {
    let path = fixture("a1.json");
    let mut args = vec!["compute", path.to_str().unwrap(), expr];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn compute_quadratic_relation() {
    let o = compute("T[s1]*T[s1]", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(q^1 - 1)*T[s1] + q^1*T[e]");
}

#[test]
fn compute_theta_product() {
    let o = compute("th[1]*th[-1]", &[]);
    assert_eq!(stdout(&o).trim(), "th[0]");
    let o = compute("T[s1]*T[s1]", &["--algebra", "bernstein"]);
    assert_eq!(stdout(&o).trim(), "(q^1 - 1)*T[s1] + q^1*th[0]");
}

#[test]
fn compute_errors() {
    assert_eq!(compute("T[s1]*(", &[]).status.code(), Some(2));
    assert_eq!(compute("T[s7]", &[]).status.code(), Some(2));
    assert_eq!(compute("(T[s1] - 1)^-1", &[]).status.code(), Some(3));
    let o = run(&["compute", "no-such-file.json", "T[e]"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn involution_suite_passes() {
    let o = run_on(&["verify", "--suite", "appendixC"], "a1.json");
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&o);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["passed"], true);
    let names: Vec<&str> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert!(names.contains(&"appendixC/iota[T[s1]]"));
}

#[test]
fn impossible_case_is_matched() {
    let o = run_on(&["verify", "--suite", "appendixD"], "d_n2.json");
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    let verdict = &r["details"]["appendixD"]["classification"]["verdict"];
    assert_eq!(verdict["verdict"], "invalid");
    assert!(verdict["constraint"]["name"]
        .as_str()
        .unwrap()
        .starts_with("n = 2"));
}

#[test]
fn classification_fixtures() {
    for f in [
        "d_k0.json",
        "d_k1.json",
        "d_n3.json",
        "d_half_k.json",
        "d_half_n.json",
        "hom_shifted.json",
    ] {
        let o = run_on(&["verify", "--suite", "appendixD"], f);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{f}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn missing_file_and_section() {
    assert_eq!(
        run(&["verify", "--suite", "appendixC", "missing.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run_on(&["verify", "--suite", "appendixD"], "a1.json")
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run_on(&["verify", "--suite", "appendixA", "--window", "1"], "a2.json")
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn comparison_suite() {
    for f in ["cmp_a1_eps0.json", "cmp_a1_eps1.json", "cmp_c2_eps1.json"] {
        assert_eq!(
            run_on(&["verify", "--suite", "comparison"], f).status.code(),
            Some(0),
            "{f}"
        );
    }
    let o = run_on(&["verify", "--suite", "comparison"], "cmp_c2_perturbed.json");
    assert_eq!(o.status.code(), Some(1));
    let r = report(&o);
    assert_eq!(r["exit_status"], 1);
}

#[test]
fn quotient_dumps() {
    let o = run_on(&["quotient"], "q_line_a2.json");
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    let q = &r["details"]["quotient"]["quotient"];
    assert_eq!(q["dim"], 1);
    assert_eq!(q["gamma_prime"]["families"].as_array().unwrap().len(), 2);

    let o = run_on(&["quotient"], "q_identity_a2.json");
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    let fams = r["details"]["quotient"]["quotient"]["gamma_prime"]["families"]
        .as_array()
        .unwrap()
        .len();
    assert_eq!(fams, 6);

    let o = run_on(&["quotient"], "q_invalid_a2.json");
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(report(&o)["passed"], false);

    assert_eq!(run_on(&["quotient"], "q_face_c2.json").status.code(), Some(0));
}

#[test]
fn reports_are_byte_identical() {
    let args = ["verify", "--suite", "all", "--seed", "5", "--max-terms", "3"];
    let a = run_on(&args, "a1_unequal.json");
    let b = run_on(&args, "a1_unequal.json");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = run_on(
        &["verify", "--suite", "all", "--seed", "6", "--max-terms", "3"],
        "a1_unequal.json",
    );
    assert_eq!(report(&c)["seed"], 6);
}

#[test]
fn out_flag_and_thread_cap() {
    let dir = std::env::temp_dir().join(format!("heckelab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("r.json");
    let path = fixture("a1.json");
    let o = Command::new(env!("CARGO_BIN_EXE_heckelab"))
        .args([
            "verify",
            "--suite",
            "appendixC",
            "--out",
            out.to_str().unwrap(),
            path.to_str().unwrap(),
        ])
        .env("HECKELAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["suite"], "appendixC");
    let o = Command::new(env!("CARGO_BIN_EXE_heckelab"))
        .args(["verify", "--suite", "appendixC", path.to_str().unwrap()])
        .env("HECKELAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn basis_sweep_small_window() {
    let o = run_on(&["verify", "--suite", "appendixA", "--window", "2"], "a2.json");
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(report(&o)["window"], 2);
}
