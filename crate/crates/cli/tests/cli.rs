use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const SPHERE: &str = "CMX 1\nm 4\nb 2\nindex 1 0\nindex 2 0\nindex 3 1\nindex 4 2\nentry 1 3 1\nentry 2 3 -1\n";
const CB: &str = "CMX 1\nm 4\nb 1\nindex 1 0\nindex 2 0\nindex 3 1\nindex 4 1\nentry 1 3 2\nentry 1 4 3\nentry 2 3 -2\nentry 2 4 -3\n";
const ZERO: &str = "CMX 1\nm 3\nb 2\nindex 1 0\nindex 2 1\nindex 3 2\n";

fn cmsweep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmsweep")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn fixture(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn run(algorithm: &str, input: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args =
        vec!["run", "--algorithm", algorithm, "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    cmsweep(&args)
}

fn read(path: PathBuf) -> String {
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn rowcancel_sphere_pivot_file() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "sphere.cmx", SPHERE);
    let out = dir.path().join("rc");
    let res = run("rowcancel", &input, &out, &[]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    assert_eq!(read(out.join("pivots.txt")), "pivot 1 2 3 -1\n");
    assert!(read(out.join("trace.txt")).starts_with("algorithm rowcancel\nm 4\n"));
    assert!(!out.join("schedule.txt").exists());
    assert!(!out.join("final.cmx").exists());
}

#[test]
fn zero_sweep_final_matrix_is_the_input() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "zero.cmx", ZERO);
    let out = dir.path().join("z");
    assert_eq!(code(&run("z", &input, &out, &["--verbosity", "final"])), 0);
    assert_eq!(read(out.join("final.cmx")), ZERO);
    assert_eq!(read(out.join("pivots.txt")), "");
}

#[test]
fn smale_rejects_cb_naming_property_i() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "cb.cmx", CB);
    let res = run("smale", &input, &dir.path().join("s"), &[]);
    assert_eq!(code(&res), 1);
    assert!(stderr(&res).contains("property (i)"), "{}", stderr(&res));
}

#[test]
fn revised_rejects_two_blocks() {
    let dir = TempDir::new().unwrap();
    let text = "CMX 1\nm 3\nb 2\nindex 1 0\nindex 2 1\nindex 3 2\nentry 1 2 1\nentry 2 3 1\n";
    let input = fixture(&dir, "two.cmx", text);
    let res = run("revised1", &input, &dir.path().join("r"), &[]);
    assert_eq!(code(&res), 1);
    assert!(stderr(&res).contains("at most one nonzero block"));
}

#[test]
fn compare_reports_equality() {
    let dir = TempDir::new().unwrap();
    for (name, text, a, b) in [("sphere.cmx", SPHERE, "z", "rowcancel"), ("cb.cmx", CB, "incremental", "rowcancel")] {
        let input = fixture(&dir, name, text);
        let (oa, ob) = (dir.path().join(format!("{name}-{a}")), dir.path().join(format!("{name}-{b}")));
        assert_eq!(code(&run(a, &input, &oa, &[])), 0);
        assert_eq!(code(&run(b, &input, &ob, &[])), 0);
        let (pa, pb) = (oa.join("pivots.txt"), ob.join("pivots.txt"));
        let res = cmsweep(&["compare", pa.to_str().unwrap(), pb.to_str().unwrap()]);
        assert_eq!(code(&res), 0, "{name}: {}", stdout(&res));
        assert_eq!(code(&cmsweep(&["compare", pa.to_str().unwrap(), pa.to_str().unwrap()])), 0);
    }
}

#[test]
fn compare_reports_differences_and_malformed_files() {
    let dir = TempDir::new().unwrap();
    let a = fixture(&dir, "a.txt", "pivot 1 2 3 -1\n");
    let b = fixture(&dir, "b.txt", "pivot 1 2 3 1\n");
    let res = cmsweep(&["compare", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code(&res), 3);
    assert_eq!(stdout(&res), "- pivot 1 2 3 -1\n+ pivot 1 2 3 1\n");
    let bad = fixture(&dir, "bad.txt", "pivot 2 2 3 1\n");
    assert_eq!(code(&cmsweep(&["compare", a.to_str().unwrap(), bad.to_str().unwrap()])), 1);
    let missing = dir.path().join("missing.txt");
    assert_eq!(code(&cmsweep(&["compare", a.to_str().unwrap(), missing.to_str().unwrap()])), 2);
}

#[test]
fn verify_writes_a_passing_report_for_every_algorithm() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "sphere.cmx", SPHERE);
    for algorithm in ["z", "accumulated", "incremental", "block", "rowcancel", "smale"] {
        let out = dir.path().join(algorithm);
        let res = run(algorithm, &input, &out, &["--verify", "--schedule", "--verbosity", "full"]);
        assert_eq!(code(&res), 0, "{algorithm}: {}", stderr(&res));
        let report = read(out.join("verify.txt"));
        assert!(report.starts_with("# totally unimodular\n"), "{report}");
        assert!(report.lines().skip(1).all(|l| l.starts_with("PASS")), "{algorithm}: {report}");
        assert_eq!(read(out.join("schedule.txt")), "cancel page=1 pivot=2,3 pair=1,2\n");
        assert_eq!(read(out.join("pivots.txt")), "pivot 1 2 3 -1\n");
    }
    let one = fixture(&dir, "cb.cmx", CB);
    let res = run("revised1", &one, &dir.path().join("revised"), &["--verify"]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    assert!(read(dir.path().join("revised/verify.txt")).contains("PASS revised_matches_incremental"));
}

#[test]
fn reduction_steps_are_written() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "sphere.cmx", SPHERE);
    let out = dir.path().join("red");
    assert_eq!(code(&run("rowcancel", &input, &out, &["--reduction"])), 0);
    for r in 0..=4 {
        assert!(out.join(format!("reduction/step{r}.cmx")).exists());
    }
    let last = read(out.join("reduction/step4.cmx"));
    assert!(last.contains("# labels 1 4\nm 2\n"), "{last}");
    assert_eq!(code(&run("z", &input, &dir.path().join("zr"), &["--reduction"])), 1);
}

#[test]
fn runs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let gen =
        cmsweep(&["gen", "random", "--seed", "5", "--m", "12", "--b", "3", "--style", "scattered", "--square-zero"]);
    assert_eq!(code(&gen), 0);
    let input = fixture(&dir, "random.cmx", &stdout(&gen));
    for algorithm in ["z", "incremental", "block", "rowcancel"] {
        let (a, b) = (dir.path().join(format!("{algorithm}-1")), dir.path().join(format!("{algorithm}-2")));
        let flags = ["--verbosity", "full", "--verify", "--schedule"];
        assert_eq!(code(&run(algorithm, &input, &a, &flags)), 0);
        assert_eq!(code(&run(algorithm, &input, &b, &flags)), 0);
        for file in ["trace.txt", "pivots.txt", "final.cmx", "verify.txt", "schedule.txt"] {
            assert_eq!(read(a.join(file)), read(b.join(file)), "{algorithm} {file}");
        }
    }
}

#[test]
fn io_and_parse_failures() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("none.cmx");
    assert_eq!(code(&run("z", &missing, &dir.path().join("o"), &[])), 2);
    let bad = fixture(&dir, "bad.cmx", "CMX 1\nm 3\nb 2\nindex 1 0\nindex 2 1\nindex 3 2\nentry 3 3 1\n");
    let res = run("z", &bad, &dir.path().join("o"), &[]);
    assert_eq!(code(&res), 1);
    assert!(stderr(&res).contains("line 7"), "{}", stderr(&res));
}

#[test]
fn tu_and_surface_checks() {
    let dir = TempDir::new().unwrap();
    let sphere = fixture(&dir, "sphere.cmx", SPHERE);
    let cb = fixture(&dir, "cb.cmx", CB);
    assert_eq!(code(&cmsweep(&["tu", "check", "--input", sphere.to_str().unwrap()])), 0);
    let res = cmsweep(&["tu", "check", "--input", cb.to_str().unwrap()]);
    assert_eq!(code(&res), 3);
    assert!(stdout(&res).starts_with("not totally unimodular: rows 1 cols 3 det 2"));
    let res = cmsweep(&["tu", "check", "--input", cb.to_str().unwrap(), "--samples", "20"]);
    assert_eq!(code(&res), 3);

    let res = cmsweep(&["surface", "check", "--input", sphere.to_str().unwrap()]);
    assert_eq!(code(&res), 0);
    assert!(stdout(&res).starts_with("surface: wells 2 saddles 1 sources 1\n"));
    assert_eq!(code(&cmsweep(&["surface", "check", "--input", cb.to_str().unwrap()])), 3);

    let gen = dir.path().join("gen.cmx");
    let args = ["surface", "gen", "--wells", "3", "--saddles", "6", "--sources", "4", "--seed", "9", "--flips"];
    let mut with_out = args.to_vec();
    with_out.extend(["--out", gen.to_str().unwrap()]);
    assert_eq!(code(&cmsweep(&with_out)), 0);
    assert_eq!(read(gen.clone()), stdout(&cmsweep(&args)));
    assert_eq!(code(&cmsweep(&["surface", "check", "--input", gen.to_str().unwrap()])), 0);
    assert_eq!(code(&cmsweep(&["tu", "check", "--input", gen.to_str().unwrap()])), 0);
    let res = run("smale", &gen, &dir.path().join("smale"), &["--verify", "--reduction"]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
}

#[test]
fn oracles() {
    let dir = TempDir::new().unwrap();
    let cb = fixture(&dir, "cb.cmx", CB);
    let res = cmsweep(&["oracle", "pivots", "--input", cb.to_str().unwrap()]);
    assert_eq!(stdout(&res), "position 1 2 3\n");

    let res = cmsweep(&["oracle", "ilp", "--matrix", "-2 -3"]);
    assert_eq!(stdout(&res), "enumeration x_c 2 witness -3 2\nsolver x_c 2 witness -3 2\n");
    let res = cmsweep(&["oracle", "ilp", "--matrix", "1 -1"]);
    assert!(stdout(&res).starts_with("enumeration x_c 1 "));
    let res = cmsweep(&["oracle", "ilp", "--matrix", "0 0"]);
    assert!(stdout(&res).starts_with("enumeration x_c 1 witness 0 1\n"));
    assert_eq!(code(&cmsweep(&["oracle", "ilp", "--matrix", "1 2; 3"])), 1);
}

#[test]
fn random_generation_is_reproducible_and_valid() {
    let args = ["gen", "random", "--seed", "11", "--m", "9", "--b", "2", "--density", "0.7"];
    let first = stdout(&cmsweep(&args));
    assert_eq!(first, stdout(&cmsweep(&args)));
    assert!(first.starts_with("CMX 1\nm 9\nb 2\n"));
    assert_eq!(code(&cmsweep(&["gen", "random", "--m", "2", "--b", "3"])), 1);
}
