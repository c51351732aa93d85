use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/corpus").join(name)
}

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_asp-templates"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(name: &str) -> String {
    corpus(name).to_string_lossy().into_owned()
}

#[test]
fn expand_closure_leak() {
    let o = run(&["expand", &path("closure_leak.lp"), "--uuid", "deterministic", "--seed", "0"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 7);
    assert!(text.contains("__c_00000000_0000_4000_8000_000000000000(X,Y) :- link(X,Y)."));
    let again = run(&["expand", &path("closure_leak.lp"), "--uuid", "deterministic", "--seed", "0"], None);
    assert_eq!(stdout(&again), text);
}

#[test]
fn expand_is_a_fixpoint_on_its_output() {
    let first = stdout(&run(&["expand", &path("alpha.lp")], None));
    let second = run(&["expand", "-"], Some(&first));
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(stdout(&second), first);
}

#[test]
fn expand_without_directives_normalizes() {
    let o = run(&["expand"], Some("a(X):-b(X),not c(X).  b(1).\n"));
    assert_eq!(stdout(&o), "a(X) :- b(X), not c(X).\nb(1).\n");
}

#[test]
fn expand_errors_carry_line_numbers() {
    let o = run(&["expand"], Some("a.\n__apply_template__(\"missing\").\n"));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("2:"), "{}", stderr(&o));
    let o = run(&["expand"], Some("a :- \nb(X."));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_choice() {
    let o = run(&["solve", &path("choice.lp")], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "a(1) a(2) e(1) e(2)\na(2) b(1) e(1) e(2)\nb(1) b(2) e(1) e(2)\n"
    );
}

#[test]
fn solve_exit_codes() {
    let o = run(&["solve"], Some("b(1)."));
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "b(1)\n"));
    let o = run(&["solve", &path("closure_leak.lp")], None);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(1), "UNSATISFIABLE\n"));
    let o = run(&["solve"], Some("{a; b}."));
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["solve", "--max-atoms", "1"], Some("a :- not b. b :- not a. c :- not d. d :- not c."));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("limit"));
}

#[test]
fn validate_constraints() {
    let o = run(&["validate", &path("constraints.lp")], None);
    assert_eq!(o.status.code(), Some(1));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines[0], "PASS T1 (line 8)");
    assert_eq!(lines[1], "PASS T2 (line 9)");
    assert!(lines[2].starts_with("FAIL T2 (line 10) witness:"));

    let only_t1 = "b(1). :- a(X). g :- b(X), not a(X). :- not d.\n%! in_all_models true: b(1), g, d; false: a(1).\n";
    let o = run(&["validate"], Some(only_t1));
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "PASS T1 (line 2)\n"));
}

#[test]
fn validate_fail_if_foo_deterministic() {
    let o = run(&["validate", &path("fail_if_foo.lp"), "--uuid", "deterministic", "--strict"], None);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert_eq!(stdout(&o), "PASS T3 (line 7)\n");
}

#[test]
fn validate_without_directives_warns() {
    let o = run(&["validate"], Some("a."));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");
    assert!(stderr(&o).contains("no `%!`"));
}

#[test]
fn validate_malformed_directive() {
    let o = run(&["validate"], Some("a.\n%! in_all_models true: a\n"));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"));
}

#[test]
fn list_templates() {
    let o = run(&["list-templates"], None);
    assert!(stdout(&o).lines().any(|l| l == "@d/tc"));
    let o = run(&["list-templates", "--long"], None);
    assert!(stdout(&o).lines().any(|l| l == "@dumbo/transitive closure"));
}

#[test]
fn custom_registry() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.lp");
    std::fs::write(&empty, "").unwrap();
    let o = run(&["list-templates", "--registry", &empty.to_string_lossy()], None);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), ""));

    std::fs::write(dir.path().join("mine.lp"), "__template__(\"copy\"). b(X) :- a(X). __end__.").unwrap();
    let o = run(&["list-templates", "--registry", &dir.path().to_string_lossy()], None);
    assert_eq!(stdout(&o), "copy\n");
    let o = run(
        &["expand", "--registry", &dir.path().to_string_lossy()],
        Some("__apply_template__(\"copy\", (b, c))."),
    );
    assert_eq!(stdout(&o), "c(X) :- a(X).\n");
}

#[test]
fn output_file_and_seed_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.lp");
    let o = run(&["expand", "-o", &out.to_string_lossy()], Some("a."));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "a.\n");
    let o = run(&["expand", "--seed", "1"], Some("a."));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--seed requires --uuid deterministic"));
}
