use std::path::Path;
use std::process::Command;

use hypertournament::classify::pattern_structure;
use hypertournament::format;

fn h3t(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_h3t"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

const H4: u8 = 0b0101;

#[test]
fn check_reports_the_h4() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "h4.h3t",
        &format::write_total(&pattern_structure(H4)),
    );
    let (code, out, _) = h3t(&["check", "--in", &f]);
    assert_eq!(code, 1);
    assert!(out.contains("H4 at {0,1,2,3}"), "{out}");

    let f = write(
        dir.path(),
        "plus.h3t",
        &format::write_total(&pattern_structure(0b1111)),
    );
    let (code, out, _) = h3t(&["check", "--in", &f, "--class", "c4"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn classify_tallies() {
    let dir = tempfile::tempdir().unwrap();
    for (pattern, expect) in [
        (0b1111, "C4: 1, O4: 0, H4: 0"),
        (0b0001, "O4: 1"),
        (H4, "H4: 1"),
    ] {
        let f = write(
            dir.path(),
            "s.h3t",
            &format::write_total(&pattern_structure(pattern)),
        );
        let (code, out, _) = h3t(&["classify", "--in", &f]);
        assert_eq!(code, 0);
        assert!(out.contains(expect), "{out}");
    }
}

#[test]
fn partial_input_points_to_solve() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "p.h3t", "h3t 1\npoints 4\ntriple 0 1 2 +\n");
    let (code, _, err) = h3t(&["classify", "--in", &f]);
    assert_eq!(code, 2);
    assert!(err.contains("solve"), "{err}");
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "bad.h3t",
        "h3t 1\npoints 3\n# fine\ntriple 2 1 0 +\n",
    );
    let (code, _, err) = h3t(&["check", "--in", &f]);
    assert_eq!(code, 2);
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn usage_errors() {
    assert_eq!(h3t(&["check"]).0, 2);
    assert_eq!(h3t(&["frobnicate"]).0, 2);
    assert_eq!(h3t(&["witness", "sop3", "--bogus"]).0, 2);
    assert_eq!(h3t(&["witness", "ip2", "--size", "3"]).0, 2);
    assert_eq!(
        h3t(&["generate", "--n", "5", "--out", "/no/such/dir/x.h3t"]).0,
        2
    );
}

#[test]
fn solve_sat_and_unsat() {
    let dir = tempfile::tempdir().unwrap();
    let sat = "h3t 1\npoints 2\nname 0 a\nname 1 b\nvar x\nlit x a b +\n";
    let f = write(dir.path(), "sat.h3t", sat);
    let (code, out, _) = h3t(&["solve", "--in", &f]);
    assert_eq!(code, 0);
    assert!(out.starts_with("SAT\n"), "{out}");
    let model = format::parse(out.split_once('\n').unwrap().1)
        .unwrap()
        .total()
        .unwrap();
    assert!(model.r(2, 0, 1));

    let unsat = "h3t 1\npoints 2\nvar x\nlit x 0 1 +\nlit x 1 0 +\n";
    let f = write(dir.path(), "unsat.h3t", unsat);
    let (code, out, _) = h3t(&["solve", "--in", &f]);
    assert_eq!((code, out.as_str()), (1, "UNSAT\n"));
    assert_eq!(h3t(&["solve", "--in", &f, "--expect", "unsat"]).0, 0);
}

#[test]
fn generate_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.h3t");
    let b = dir.path().join("b.h3t");
    for p in [&a, &b] {
        let (code, out, _) = h3t(&[
            "generate",
            "--n",
            "8",
            "--class",
            "c4o4",
            "--depth",
            "1",
            "--seed",
            "5",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{out}");
    }
    let (ta, tb) = (
        std::fs::read_to_string(&a).unwrap(),
        std::fs::read_to_string(&b).unwrap(),
    );
    assert_eq!(ta, tb);
    let h = format::parse(&ta).unwrap().total().unwrap();
    assert_eq!(format::write_total(&h), ta);
    assert_eq!(h3t(&["check", "--in", a.to_str().unwrap()]).0, 0);
}

#[test]
fn amalgamate_by_names() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.h3t", "h3t 1\npoints 2\nname 0 p\nname 1 q\n");
    // B1 puts the shared points last
    let b1 = write(
        dir.path(),
        "b1.h3t",
        "h3t 1\npoints 3\nname 1 p\nname 2 q\ntriple 0 1 2 +\n",
    );
    let b2 = write(
        dir.path(),
        "b2.h3t",
        "h3t 1\npoints 3\nname 0 p\nname 1 q\nname 2 z\ntriple 0 1 2 -\n",
    );
    let out = dir.path().join("c.h3t");
    let (code, msg, err) = h3t(&[
        "amalgamate",
        "--a",
        &a,
        "--b1",
        &b1,
        "--b2",
        &b2,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{msg}{err}");
    let doc = format::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let c = doc.total().unwrap();
    assert_eq!(c.len(), 4);
    let (p, q, z) = (
        doc.point_named("p").unwrap(),
        doc.point_named("q").unwrap(),
        doc.point_named("z").unwrap(),
    );
    let x = (0..4).find(|i| ![p, q, z].contains(i)).unwrap();
    assert!(c.r(x, p, q));
    assert!(!c.r(p, q, z));
    assert!(hypertournament::classify::is_h4_free(&c));

    let bad = write(
        dir.path(),
        "b3.h3t",
        "h3t 1\npoints 2\nname 0 p\nname 1 r\n",
    );
    assert_eq!(
        h3t(&["amalgamate", "--a", &a, "--b1", &b1, "--b2", &bad]).0,
        2
    );
}

#[test]
fn witnesses_pass() {
    for kind in ["sop3", "ip2", "nsop4", "empty-base", "template"] {
        let (code, out, err) = h3t(&["witness", kind]);
        assert_eq!(code, 0, "{kind}: {out}{err}");
        assert!(out.contains("PASS"), "{out}");
    }
    let (code, out, _) = h3t(&["witness", "claim1", "--trials", "10"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = h3t(&["witness", "tp2", "--size", "2x3"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn witness_reports_and_structures_are_saved() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("sop3.txt");
    let (code, out, _) = h3t(&[
        "witness",
        "sop3",
        "--size",
        "4",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("CLAIM sop3"), "{out}");
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(
        text.lines()
            .any(|l| l.starts_with("CLAIM ") && l.ends_with(" PASS")),
        "{text}"
    );
    let saved = dir.path().join("sop3.sop3.h3t");
    let h = format::parse(&std::fs::read_to_string(saved).unwrap())
        .unwrap()
        .total()
        .unwrap();
    assert_eq!(h.len(), 6);

    // identical seeds give byte-identical reports
    let again = dir.path().join("again.txt");
    h3t(&[
        "witness",
        "sop3",
        "--size",
        "4",
        "--out",
        again.to_str().unwrap(),
    ]);
    assert_eq!(text, std::fs::read_to_string(again).unwrap());
}

#[test]
fn indep_queries() {
    let (code, out, _) = h3t(&["indep", "asym", "--max-n", "4"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = h3t(&["indep", "conant", "--trials", "5", "--len", "3"]);
    assert_eq!(code, 0, "{out}");

    let dir = tempfile::tempdir().unwrap();
    let h =
        hypertournament::solver::random_in_class(6, hypertournament::ClassSet::H4_FREE, 9).unwrap();
    let f = write(dir.path(), "m.h3t", &format::write_total(&h));
    let (code, out, _) = h3t(&[
        "indep", "morley", "--in", &f, "--C", "0,1", "--B", "2", "--len", "3",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("copy 2"), "{out}");
    let (code, out, _) = h3t(&[
        "indep", "kim", "--in", &f, "--C", "0,1", "--B", "2", "--A", "3,4", "--len", "3",
    ]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = h3t(&[
        "indep", "ht", "--in", &f, "--A", "2", "--B", "3", "--C", "0",
    ]);
    assert!(code == 0 || code == 1, "{out}");
    assert!(out.contains("A ind-ht"), "{out}");
    assert_eq!(h3t(&["indep", "ht", "--A", "0"]).0, 2);
}

#[test]
fn accept_single_criterion() {
    let (code, out, _) = h3t(&["accept", "--only", "A5"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("A5 PASS"), "{out}");
}
