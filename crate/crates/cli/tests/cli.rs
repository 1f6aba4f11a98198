use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn z() -> PathBuf {
    fixture("z.txt", "generators: a b\nrelators: b\n")
}

fn z2() -> PathBuf {
    fixture("z2.txt", "# the torus\ngenerators: a b\nrelators: abAB\n")
}

/// Runs `fibre` and returns (exit code, stdout, stderr).
fn fibre(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fibre")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn line(args: &[&str]) -> (i32, String) {
    let (code, out, _) = fibre(args);
    (code, out.lines().next().unwrap_or_default().to_string())
}

#[test]
fn documented_invocations() {
    let z = z();
    let z2 = z2();
    let (z, z2) = (z.to_str().unwrap(), z2.to_str().unwrap());
    assert_eq!(line(&["member", "-p", z, "-u", "b", "-v", "1"]), (0, "YES".into()));
    assert_eq!(line(&["dehn", "-p", z2, "-n", "4", "--oracle", "abelian"]), (0, "DELTA 4 = 1".into()));
    assert_eq!(
        line(&["conj", "-p", z, "--u1", "b", "--u2", "b", "--v1", "abA", "--v2", "b", "--oracle", "abelian"]),
        (1, "NO".into())
    );
}

#[test]
fn result_lines() {
    let z = z();
    let z2 = z2();
    let (z, z2) = (z.to_str().unwrap(), z2.to_str().unwrap());
    assert_eq!(line(&["wp", "-p", z2, "-w", "abAB"]), (0, "YES".into()));
    assert_eq!(line(&["wp", "-p", z2, "-w", "a"]), (1, "NO".into()));
    assert_eq!(line(&["area", "-p", z2, "-w", "aabbAABB"]), (0, "AREA 4".into()));
    assert_eq!(line(&["reldehn", "-p", z, "-n", "4"]), (0, "DELTAC 4 = 12".into()));
    assert_eq!(line(&["power", "-p", z, "-w", "aaab", "-u", "a"]), (0, "YES 3".into()));
    assert_eq!(line(&["power", "-p", z, "-w", "ab", "-u", "aa"]), (1, "NO".into()));
    assert_eq!(line(&["perturb", "-p", z, "-w", "baB"]), (0, "PERTURBED ab 1".into()));
    assert_eq!(line(&["perturb", "-p", z, "-w", "bb", "--threshold", "2"]), (0, "EXCEPTIONAL 1".into()));
    assert_eq!(line(&["root", "-w", "abab"]), (0, "ROOT ab 2".into()));
    assert_eq!(line(&["fconj", "-u", "ab", "-v", "ba"]), (0, "YES a".into()));
    assert_eq!(line(&["fconj", "-u", "a", "-v", "b"]), (1, "NO".into()));
    assert_eq!(line(&["gens", "-p", z]), (0, "GENS (a,a) (b,b) (b,1) (1,b)".into()));
    assert_eq!(
        line(&["conj", "-p", z, "--u1", "b", "--u2", "b", "--v1", "abA", "--v2", "abA"]),
        (0, "YES (A,A)".into())
    );
}

#[test]
fn unknown_verdicts_exit_two() {
    let p = fixture("nonabelian.txt", "generators: a b\nrelators: aabb\n");
    let p = p.to_str().unwrap();
    // trivial abelian image, and Q is not abelian, so the abelian oracle
    // cannot certify either way
    let (code, out, _) = fibre(&["wp", "-p", p, "-w", "abAB", "--oracle", "abelian"]);
    assert_eq!((code, out.trim()), (2, "UNKNOWN"));
    let (code, out, _) = fibre(&["wp", "-p", p, "-w", "abAB", "--oracle", "search", "--budget", "200"]);
    assert_eq!((code, out.trim()), (2, "UNKNOWN"));
}

#[test]
fn structured_records() {
    let z = z();
    let z = z.to_str().unwrap();
    let (code, out, _) = fibre(&["reldehn", "-p", z, "-n", "4", "--structured"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "command=reldehn verdict=value n=4 value=12 w=aaa u=a p=3 area=0");
    let (code, out, _) = fibre(&["member", "-p", z, "-u", "a", "-v", "b", "--structured"]);
    assert_eq!((code, out.trim()), (1, "command=member verdict=no pair=(a,b)"));
}

#[test]
fn certificates_re_parse() {
    let z2 = z2();
    let z2 = z2.to_str().unwrap();
    let (code, out, _) = fibre(&["wp", "-p", z2, "-w", "aabbAABB", "--show-certificate"]);
    assert_eq!(code, 0);
    let body: Vec<&str> = out.lines().skip(1).collect();
    let prod = fibre_core::parse_vk_product(&body.join("\n")).unwrap();
    let pres: fibre_core::Presentation = "generators: a b\nrelators: abAB".parse().unwrap();
    let value = fibre_core::evaluate_vk_product(&prod, &pres).unwrap();
    assert_eq!(value.to_string(), "aabbAABB");
}

#[test]
fn printed_words_round_trip() {
    let z = z();
    let z = z.to_str().unwrap();
    let (_, out) = line(&["perturb", "-p", z, "-w", "baB"]);
    let w = out.split(' ').nth(1).unwrap();
    assert_eq!(w.parse::<fibre_core::Word>().unwrap().to_string(), w);
    let (_, out) = line(&["perturb", "-p", z, "-w", "bb", "--threshold", "2"]);
    assert!(out.split(' ').nth(1).unwrap().parse::<fibre_core::Word>().unwrap().is_empty());
}

#[test]
fn verify_reports_summaries() {
    let z2 = z2();
    let z2 = z2.to_str().unwrap();
    let (code, out) = line(&["verify", "conj", "-p", z2, "--count", "40", "--seed", "3"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("VERIFY conj instances=40 "), "{out}");
    assert!(out.contains("disagreements=0"), "{out}");
    let (code, out) = line(&["verify", "area", "-p", z2, "-n", "6"]);
    assert_eq!((code, out.as_str()), (0, "VERIFY area instances=49 agreements=49 disagreements=0 unknowns=0"));
}

#[test]
fn input_errors_exit_three() {
    let bad = fixture("bad.txt", "generators: a b\nrelators: ab, aC\n");
    let (code, _, err) = fibre(&["wp", "-p", bad.to_str().unwrap(), "-w", "a"]);
    assert_eq!(code, 3);
    assert!(err.contains("bad.txt:2:15:"), "{err}");
    let dup = fixture("dup.txt", "generators: a a\n");
    let (code, _, err) = fibre(&["wp", "-p", dup.to_str().unwrap(), "-w", "a"]);
    assert_eq!(code, 3);
    assert!(err.contains(":1:"), "{err}");

    let z = z();
    let z = z.to_str().unwrap();
    assert_eq!(fibre(&["wp", "-p", z, "-w", "ac"]).0, 3);
    assert_eq!(fibre(&["wp", "-p", z, "-w", "a-b"]).0, 3);
    assert_eq!(fibre(&["wp", "-p", z]).0, 3);
    assert_eq!(fibre(&["wp", "-p", z, "-w", "a", "--oracle", "magic"]).0, 3);
    assert_eq!(fibre(&["wp", "-w", "a"]).0, 3);
    assert_eq!(fibre(&["root", "-w", "1"]).0, 3);
    // (a, b) is not in P
    assert_eq!(fibre(&["conj", "-p", z, "--u1", "a", "--u2", "b", "--v1", "a", "--v2", "b"]).0, 3);
    assert_eq!(fibre(&["nonsense"]).0, 3);
    assert_eq!(fibre(&["--help"]).0, 0);
}
