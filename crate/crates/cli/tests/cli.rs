use std::io::Write;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn run(args: &[&str]) -> Output {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_padic-tiling"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        start.elapsed() < Duration::from_secs(1),
        "{args:?} was slow"
    );
    out
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn leaf_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn solve_prints_parameters() {
    assert_eq!(
        ok(&["solve", "-p", "3", "-q", "5"]),
        "d=2 s=2 s'=1 leaves=5\n"
    );
    assert_eq!(
        ok(&["solve", "-p", "7", "-q", "7"]),
        "d=6 s=1 s'=1 leaves=7\n"
    );
    assert_eq!(
        ok(&["solve", "-p", "2", "-q", "3", "-m", "2"]),
        "d=1 s=4 s'=2 leaves=5\n"
    );
}

#[test]
fn worked_example_digits() {
    let out = ok(&[
        "map",
        "-p",
        "3",
        "-q",
        "5",
        "--tau",
        "paper",
        "--digits",
        "2,1,0,1,0,2,0,0,0,0,0,1,0,0",
        "--trace",
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "2,1,3,4,0,0,3,0");
    assert_eq!(lines[1], "blocks 2 | 1 | 0,1 | 0,2 | 0,0 | 0,0 | 0,1 | 0,0");
    assert_eq!(lines[2], "pending ");
}

#[test]
fn trace_blocks_concatenate_to_input() {
    let input = "2,2,0,1,1,0,0,2,1";
    let out = ok(&["map", "-p", "3", "-q", "5", "--digits", input, "--trace"]);
    let blocks = out.lines().find_map(|l| l.strip_prefix("blocks ")).unwrap();
    let pending = out
        .lines()
        .find_map(|l| l.strip_prefix("pending "))
        .unwrap();
    let mut consumed: Vec<&str> = blocks.split(" | ").collect();
    if !pending.is_empty() {
        consumed.push(pending);
    }
    assert_eq!(consumed.join(","), input);
}

#[test]
fn rational_streams() {
    let out = ok(&[
        "map",
        "-p",
        "3",
        "-q",
        "5",
        "--tau",
        "paper",
        "--rational",
        "-1/1",
        "--precision",
        "6",
    ]);
    assert_eq!(out, "2,2,2,2,2,2\nstream ;2\n");
    let out = ok(&["map", "-p", "3", "-q", "5", "--stream", "1;0"]);
    assert_eq!(out.lines().nth(1), Some("stream 0;2"));
}

#[test]
fn identity_between_equal_bases() {
    assert_eq!(
        ok(&["map", "-p", "2", "-q", "2", "--digits", "1,0,1"]),
        "1,0,1\n"
    );
}

#[test]
fn tile_then_verify() {
    let tile = ok(&["tile", "-p", "3", "-s", "2"]);
    let file = leaf_file(&tile);
    let path = file.path().to_str().unwrap();
    assert_eq!(ok(&["verify", path]), "OK leaves=5 s=2\n");
}

#[test]
fn verify_reports_violations() {
    let file = leaf_file("base 2\n0\n");
    let out = run(&["verify", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("FAIL"), "{}", stdout(&out));
    assert!(
        stdout(&out).contains("1 has no leaf prefix"),
        "{}",
        stdout(&out)
    );

    let file = leaf_file("base 2\n0\n0,1\n1\n");
    let out = run(&["verify", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("prefix"), "{}", stdout(&out));
}

#[test]
fn render_dot_colours_every_leaf() {
    let text = ok(&[
        "render", "-p", "3", "-q", "5", "--depth", "2", "--format", "dot",
    ]);
    let parents: Vec<&str> = text
        .lines()
        .filter_map(|l| l.trim().split_once(" -> ").map(|(a, _)| a))
        .collect();
    for side in ["s_", "t_"] {
        let leaves = text
            .lines()
            .map(str::trim)
            .filter(|l| l.starts_with(side) && l.contains("fillcolor=\"#"))
            .filter(|l| !parents.contains(&l.split(' ').next().unwrap()))
            .count();
        assert_eq!(leaves, 25);
    }
}

#[test]
fn render_ascii_matches_colours() {
    let text = ok(&["render", "-p", "3", "-q", "5", "--tau", "paper", "--depth", "1"]);
    for c in 0..5 {
        assert_eq!(text.matches(&format!("[c{c}]")).count(), 2, "{text}");
    }
    let root_only = ok(&["render", "-p", "3", "-q", "5", "--depth", "0"]);
    assert_eq!(root_only.lines().count(), 4);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["render", "-p", "3", "-q", "5", "--depth", "12"]), 4);
    assert_eq!(
        code(&["tile", "-p", "2", "-s", "100000000", "--cap", "1000"]),
        4
    );
    assert_eq!(code(&["solve", "-p", "1", "-q", "3"]), 2);
    assert_eq!(code(&["map", "-p", "3", "-q", "5", "--digits", "7"]), 2);
    assert_eq!(
        code(&["map", "-p", "3", "-q", "7", "--tau", "paper", "--digits", "1"]),
        2
    );
    assert_eq!(code(&["verify", "/nonexistent/tile.txt"]), 2);
    assert_eq!(code(&["map", "-p", "3", "-q", "5", "--rational", "1/3"]), 3);
}

#[test]
fn composite_base_warns() {
    let out = run(&["solve", "-p", "4", "-q", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "d=1 s=2 s'=3 leaves=7\n");
}

#[test]
fn output_is_deterministic() {
    let args = ["render", "-p", "3", "-q", "5", "--depth", "2"];
    assert_eq!(ok(&args), ok(&args));
}
