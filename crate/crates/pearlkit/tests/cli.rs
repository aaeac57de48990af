use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

const BIN: &str = env!("CARGO_BIN_EXE_pearlkit");

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

fn run_with_stdin(args: &[&str], stdin: Option<&str>) -> Run {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(s) = stdin {
            pipe.write_all(s.as_bytes()).unwrap();
        }
    }
    let out = child.wait_with_output().unwrap();
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().unwrap(),
    }
}

fn run(args: &[&str]) -> Run {
    run_with_stdin(args, None)
}

/// Writes `text` to a fresh file under the target directory.
fn file(name: &str, text: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn emit(name: &str) -> PathBuf {
    let r = run(&["catalog", "emit", name]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    file(&format!("{name}.txt"), &r.stdout)
}

fn records(r: &Run) -> Vec<&str> {
    r.stdout.lines().collect()
}

fn s(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn homology_of_the_circle() {
    let circle = emit("circle");
    let r = run(&["--format", "records", "homology", s(&circle)]);
    assert_eq!(r.code, 0);
    let lines = records(&r);
    assert!(lines.contains(&"degree=1 dim=1"));
    assert!(lines.iter().filter(|l| l.starts_with("degree=")).all(|l| *l == "degree=1 dim=1" || l.ends_with("dim=0")));
    let r = run(&["homology", s(&circle), "--coeff", "full", "--window", "-6", "6", "--format", "records"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let dims: Vec<&str> = records(&r).into_iter().filter(|l| l.starts_with("degree=")).collect();
    assert_eq!(dims.len(), 13);
    assert!(dims.iter().all(|l| l.ends_with("dim=0")));
    // text mode is an aligned table
    let r = run(&["homology", s(&circle)]);
    assert!(r.stdout.contains("degree  dim\n"));
}

#[test]
fn minimal_model_output_is_a_valid_file() {
    let circle = emit("circle");
    let r = run(&["minimal", s(&circle)]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("\nminimal true\n"));
    assert!(r.stdout.contains("d P = Q t^1\n"));
    assert!(r.stdout.contains("# qh_vanishes 1\n"));
    let model = file("circle-model.pc", &r.stdout);
    assert_eq!(run(&["check", s(&model)]).code, 0);
    let r = run(&["--format", "records", "minimal", s(&circle)]);
    assert!(records(&r).contains(&"source=P target=Q exponent=1"));
}

#[test]
fn stdin_is_read_for_dash() {
    let text = run(&["catalog", "emit", "circle"]).stdout;
    let r = run_with_stdin(&["check", "-"], Some(&text));
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("d_squared_zero"));
}

#[test]
fn exit_codes() {
    // parse error
    let bad = file("dup.pc", "pearl-complex\nname x\nmaslov 2\ngen P 0\ngen Q 1\nd P = Q t^1 + Q t^1\nend\n");
    let r = run(&["check", s(&bad)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 6"), "{}", r.stderr);
    assert!(r.stderr.contains("duplicate term"), "{}", r.stderr);
    // verification failure: d^2 != 0
    let bad = file("dsq.pc", "pearl-complex\nname x\nmaslov 2\ngen a 2\ngen b 1\ngen c 0\nd a = b\nd b = c\nend\n");
    assert_eq!(run(&["check", s(&bad)]).code, 1);
    assert_eq!(run(&["homology", s(&bad)]).code, 1);
    // usage errors
    assert_eq!(run(&["homology"]).code, 2);
    assert_eq!(run(&["homology", "x", "--bogus"]).code, 2);
    assert_eq!(run(&["catalog", "emit", "no-such-entry"]).code, 2);
    assert_eq!(run(&["check", "/nonexistent/file"]).code, 2);
    assert_eq!(run(&["bounds", "gromov", "clifford"]).code, 2);
    let nu = emit("clifford-T2-nu");
    assert_eq!(run(&["homology", s(&nu)]).code, 2);
    assert_eq!(run(&["torus", "s1", s(&nu), "--p1", "1/2", "--p2", "0,0", "--p3", "0,1/2"]).code, 2);
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn spectral_sequence_pages() {
    let c = emit("rpn-3-complex");
    let r = run(&["--format", "records", "ss", s(&c), "--max-page", "3"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines = records(&r);
    assert!(lines.contains(&"abutment=1"));
    assert!(lines.contains(&"pages_consistent=1"));
    assert!(lines.iter().any(|l| l.starts_with("page=3 ")));
    assert!(!lines.iter().any(|l| l.starts_with("page=4 ")));
}

#[test]
fn algebra_commands() {
    let ring = emit("clifford-T2");
    let r = run(&["--format", "records", "algebra", "verify", s(&ring)]);
    assert_eq!(r.code, 0);
    assert!(records(&r).contains(&"associativity=ok"));
    assert!(records(&r).contains(&"triples_checked=64"));
    assert!(records(&r).contains(&"commutative=0"));
    assert!(records(&r).contains(&"frobenius=1"));

    let cp2 = emit("cpn-2");
    let r = run(&["--format", "records", "algebra", "euler", s(&cp2)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(records(&r).contains(&"degree_zero=1"));
    assert!(records(&r).contains(&"invertible=1"));

    let r = run(&["--format", "records", "algebra", "invertible", s(&cp2), "--degree", "-2"]);
    assert_eq!(r.code, 0);
    assert!(records(&r).contains(&"found=1"));

    // odd degrees have no Euler class
    assert_eq!(run(&["algebra", "euler", s(&ring)]).code, 2);

    let module = emit("rpn-2-module");
    let r = run(&["--format", "records", "algebra", "verify", s(&module)]);
    assert_eq!(r.code, 0);
    assert!(records(&r).contains(&"module.inclusion=ok"));

    // a broken associativity table fails verification
    let text = std::fs::read_to_string(&ring).unwrap().replace("mul b a = m\n", "mul b a = m + w t^1\n");
    let broken = file("broken.alg", &text);
    let r = run(&["algebra", "verify", s(&broken)]);
    assert_eq!(r.code, 1, "{}{}", r.stdout, r.stderr);
}

#[test]
fn torus_commands() {
    let nu = emit("clifford-T2-nu");
    let r = run(&["--format", "records", "torus", "synth", s(&nu)]);
    let lines = records(&r);
    for want in ["alpha=1", "beta=1", "gamma_sum=1"] {
        assert!(lines.contains(&want), "{}", r.stdout);
    }
    let split = emit("split-torus-nu");
    let r = run(&["--format", "records", "torus", "synth", s(&split)]);
    assert!(records(&r).contains(&"gamma_sum=0"));
    assert!(records(&r).contains(&"m_times_m=\"w t^2\""));

    // the emitted ring is a valid algebra file
    let r = run(&["torus", "synth", "--emit", s(&nu)]);
    let ring = file("synth.alg", &r.stdout);
    assert_eq!(run(&["algebra", "verify", s(&ring)]).code, 0);

    let pts = ["--p1", "1/10,1/7", "--p2", "1/9,1/6", "--p3", "3/5,4/7"];
    let r = run(&[&["--format", "records", "torus", "s1", s(&nu)][..], &pts[..]].concat());
    assert!(records(&r).contains(&"s1=1"));
    assert!(records(&r).contains(&"agrees=1"));
    let r = run(&[&["--format", "records", "torus", "n4", s(&nu)][..], &pts[..]].concat());
    assert!(records(&r).contains(&"n4=1"), "{}", r.stdout);
    let r =
        run(&[&["--format", "records", "torus", "epsilon", s(&nu)][..], &pts[..], &["--p4", "5/13,7/11"][..]].concat());
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("epsilon="));

    // a vanishing disk class
    let vanishing = file("van.nu", "nu\nname odd\nv 1 0\nend\n");
    let r = run(&["--format", "records", "torus", "synth", s(&vanishing)]);
    assert!(records(&r).contains(&"d1=1,0"));
    assert_eq!(run(&[&["torus", "n4", s(&vanishing)][..], &pts[..]].concat()).code, 2);
}

#[test]
fn bounds_commands() {
    let r = run(&["--format", "records", "bounds", "gromov", "clifford", "n=2"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("relation=at_most bound=2/3"));
    assert!(r.stdout.contains("relation=equals bound=2/3"));
    let r = run(&["--format", "records", "bounds", "mixed", "clifford", "r=2/3", "rho=2/3"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("bound=4/9 value=4/9 verdict=boundary"), "{}", r.stdout);
    let r = run(&["bounds", "mixed", "clifford", "r=1", "rho=1"]);
    assert_eq!(r.code, 1);
    let r = run(&["--format", "records", "bounds", "cpn", "n=3", "nl=2", "full=1", "r=1/2", "rho=1/2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("bound=3/4"));
    let r = run(&["--format", "records", "bounds", "torus", "tau=1/6"]);
    assert!(r.stdout.contains("bound=1/3"));
    assert_eq!(run(&["bounds", "torus", "tau=x"]).code, 2);
    assert_eq!(run(&["bounds", "gromov", "a", "b", "n=2"]).code, 2);
}

#[test]
fn catalog_commands() {
    let r = run(&["--format", "records", "catalog", "list"]);
    assert!(records(&r).contains(&"name=circle kind=pearl-complex"));
    assert!(records(&r).contains(&"name=clifford-T2 kind=algebra"));
    let r = run(&["--format", "records", "catalog", "selftest"]);
    assert_eq!(r.code, 0);
    assert!(records(&r).contains(&"checks_failed=0"));
    assert!(!r.stdout.contains("passed=0"));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["--format", "records", "catalog", "selftest"]).stdout;
    let b = run(&["--format", "records", "catalog", "selftest"]).stdout;
    assert_eq!(a, b);
    let entries: Vec<&str> =
        a.lines().filter_map(|l| l.strip_prefix("entry=")).map(|l| l.split(' ').next().unwrap()).collect();
    let mut sorted = entries.clone();
    sorted.sort();
    assert_eq!(entries, sorted);
}
