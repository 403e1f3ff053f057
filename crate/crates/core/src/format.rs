//! The line-based `.h3t` text format.
//!
//! ```text
//! h3t 1
//! points 4
//! name 0 a            # optional label
//! triple 0 1 2 +
//! var x               # constraint files only
//! lit x 0 a -
//! ```
//!
//! `triple i j k s` needs `i < j < k`; `+` means `R(i, j, k)`. A `lit` term is
//! a point id, a point label or a declared variable.

use std::collections::HashMap;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::solver::{ConstraintSet, Term};
use crate::structure::{Hypertournament, Orientation, PartialHypertournament, PointId, TripleKey};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub structure: PartialHypertournament,
    pub names: Vec<Option<String>>,
    pub constraints: ConstraintSet,
}

impl Document {
    pub fn total(&self) -> Result<Hypertournament> {
        self.structure.to_total()
    }

    pub fn point_named(&self, name: &str) -> Option<PointId> {
        self.names.iter().position(|n| n.as_deref() == Some(name))
    }

    pub fn has_names(&self) -> bool {
        self.names.iter().any(Option::is_some)
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn sign(tok: &str, line: usize) -> Result<bool> {
    match tok {
        "+" => Ok(true),
        "-" => Ok(false),
        _ => Err(parse_err(line, format!("expected + or -, got `{tok}`"))),
    }
}

pub fn parse(text: &str) -> Result<Document> {
    let mut structure: Option<PartialHypertournament> = None;
    let mut names: Vec<Option<String>> = Vec::new();
    let mut constraints = ConstraintSet::new();
    let mut vars: HashMap<String, usize> = HashMap::new();
    let mut header = false;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        if !header {
            if toks != ["h3t", "1"] {
                return Err(parse_err(line, "expected header `h3t 1`"));
            }
            header = true;
            continue;
        }
        let point = |tok: &str, n: usize| -> Result<PointId> {
            let p: PointId = tok
                .parse()
                .map_err(|_| parse_err(line, format!("bad point id `{tok}`")))?;
            if p >= n {
                return Err(parse_err(line, format!("point {p} out of range (n = {n})")));
            }
            Ok(p)
        };
        match toks[0] {
            "points" => {
                if structure.is_some() {
                    return Err(parse_err(line, "repeated `points` line"));
                }
                let [_, n] = toks[..] else {
                    return Err(parse_err(line, "expected `points <n>`"));
                };
                let n: usize = n.parse().map_err(|_| parse_err(line, "bad point count"))?;
                structure = Some(PartialHypertournament::new(n));
                names = vec![None; n];
            }
            kw @ ("triple" | "name" | "var" | "lit") => {
                let Some(s) = structure.as_mut() else {
                    return Err(parse_err(line, format!("`{kw}` before `points`")));
                };
                let n = s.len();
                match (kw, &toks[1..]) {
                    ("triple", [a, b, c, o]) => {
                        let (a, b, c) = (point(a, n)?, point(b, n)?, point(c, n)?);
                        if !(a < b && b < c) {
                            return Err(parse_err(line, "triple must be strictly increasing"));
                        }
                        let key = TripleKey::new(a, b, c).expect("sorted and in range");
                        if s.get(key).is_some() {
                            return Err(parse_err(line, format!("duplicate triple {{{key}}}")));
                        }
                        s.assign(key, Orientation::from_bool(sign(o, line)?))
                            .map_err(|e| parse_err(line, e.to_string()))?;
                    }
                    ("name", [p, label]) => {
                        let p = point(p, n)?;
                        if label.parse::<usize>().is_ok() {
                            return Err(parse_err(line, "labels must not be numbers"));
                        }
                        if names.iter().any(|x| x.as_deref() == Some(*label))
                            || vars.contains_key(*label)
                        {
                            return Err(parse_err(line, format!("label `{label}` used twice")));
                        }
                        if names[p].is_some() {
                            return Err(parse_err(line, format!("point {p} already named")));
                        }
                        names[p] = Some(label.to_string());
                    }
                    ("var", [v]) => {
                        if v.parse::<usize>().is_ok()
                            || vars.contains_key(*v)
                            || names.iter().any(|x| x.as_deref() == Some(*v))
                        {
                            return Err(parse_err(line, format!("bad or repeated variable `{v}`")));
                        }
                        let t = constraints.var(*v);
                        let Term::Var(idx) = t else { unreachable!() };
                        vars.insert(v.to_string(), idx);
                    }
                    ("lit", [a, b, c, o]) => {
                        let term = |tok: &str| -> Result<Term> {
                            if let Ok(p) = tok.parse::<usize>() {
                                return point(&p.to_string(), n).map(Term::Point);
                            }
                            if let Some(&v) = vars.get(tok) {
                                return Ok(Term::Var(v));
                            }
                            if let Some(p) = names.iter().position(|x| x.as_deref() == Some(tok)) {
                                return Ok(Term::Point(p));
                            }
                            Err(parse_err(line, format!("unknown name `{tok}`")))
                        };
                        let args = [term(a)?, term(b)?, term(c)?];
                        if args[0] == args[1] || args[1] == args[2] || args[0] == args[2] {
                            return Err(parse_err(line, "literal repeats a term"));
                        }
                        constraints.require(args[0], args[1], args[2], sign(o, line)?);
                    }
                    _ => return Err(parse_err(line, format!("malformed `{kw}` line"))),
                }
            }
            other => return Err(parse_err(line, format!("unknown directive `{other}`"))),
        }
    }
    if !header {
        return Err(parse_err(1, "missing header `h3t 1`"));
    }
    let structure =
        structure.ok_or_else(|| parse_err(text.lines().count().max(1), "missing `points` line"))?;
    Ok(Document {
        structure,
        names,
        constraints,
    })
}

fn write_names(out: &mut String, names: &[Option<String>]) {
    for (p, n) in names.iter().enumerate() {
        if let Some(n) = n {
            writeln!(out, "name {p} {n}").unwrap();
        }
    }
}

pub fn write_total(h: &Hypertournament) -> String {
    write_named(h, &[])
}

pub fn write_named(h: &Hypertournament, names: &[Option<String>]) -> String {
    let mut out = format!("h3t 1\npoints {}\n", h.len());
    write_names(&mut out, names);
    for (key, o) in h.triples() {
        writeln!(out, "triple {key} {}", o.symbol()).unwrap();
    }
    out
}

pub fn write_partial(p: &PartialHypertournament) -> String {
    let mut out = format!("h3t 1\npoints {}\n", p.len());
    for (key, o) in p.assigned() {
        writeln!(out, "triple {key} {}", o.symbol()).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 0..9 {
            let h = Hypertournament::random(n, &mut rng);
            let doc = parse(&write_total(&h)).unwrap();
            assert_eq!(doc.total().unwrap(), h);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let cases = [
            ("points 3\n", 1),
            ("h3t 1\npoints 3\ntriple 0 2 1 +\n", 3),
            ("h3t 1\npoints 3\ntriple 0 1 2 +\ntriple 0 1 2 -\n", 4),
            ("h3t 1\npoints 3\ntriple 0 1 3 +\n", 3),
            ("h3t 1\ntriple 0 1 2 +\n", 2),
            ("h3t 1\npoints 3\nlit 0 1 y +\n", 3),
            ("h3t 1\npoints 3\ntriple 0 1 2 *\n", 3),
        ];
        for (text, line) in cases {
            match parse(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn partial_and_constraints() {
        let text = "h3t 1 # header\npoints 3\nname 0 a\nvar x\nlit x a 1 -\ntriple 0 1 2 +\n";
        let doc = parse(text).unwrap();
        assert_eq!(doc.structure.missing(), 0);
        assert_eq!(doc.point_named("a"), Some(0));
        assert_eq!(doc.constraints.var_names(), ["x"]);
        let lit = doc.constraints.literals()[0];
        assert_eq!(lit.args, [Term::Var(0), Term::Point(0), Term::Point(1)]);
        assert!(!lit.holds);
        let partial = parse("h3t 1\npoints 4\ntriple 0 1 3 -\n").unwrap();
        assert!(partial.total().is_err());
        assert_eq!(parse(&write_partial(&partial.structure)).unwrap(), partial);
    }
}
