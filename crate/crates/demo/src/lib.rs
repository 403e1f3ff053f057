//! Three operations for the static page in `www/`: classify a pasted
//! structure, grow a generic-like structure, and run a construction check.

use std::fmt::Write as _;

use hypertournament::amalgam::build_generic;
use hypertournament::classify::{class_tally, find_h4, in_constrained_class, ClassSet};
use hypertournament::format;
use hypertournament::witness;
use wasm_bindgen::prelude::*;

/// Largest structure the page will build; beyond this the tab stalls.
pub const MAX_DEMO_POINTS: usize = 24;

fn classify_text(text: &str) -> Result<String, String> {
    let doc = format::parse(text).map_err(|e| e.to_string())?;
    let h = doc.total().map_err(|e| e.to_string())?;
    let [c4, o4, h4] = class_tally(&h);
    let mut out = format!("{} points\nC4: {c4}, O4: {o4}, H4: {h4}\n", h.len());
    match find_h4(&h) {
        Some([a, b, c, d]) => writeln!(out, "H4 at {{{a},{b},{c},{d}}}").unwrap(),
        None => out.push_str("H4-free\n"),
    }
    let member: Vec<String> = [ClassSet::CYCLIC, ClassSet::EVEN, ClassSet::H4_FREE]
        .into_iter()
        .filter(|&s| in_constrained_class(&h, s))
        .map(|s| s.to_string())
        .collect();
    writeln!(
        out,
        "classes: {}",
        if member.is_empty() {
            "none".into()
        } else {
            member.join(" ")
        }
    )
    .unwrap();
    Ok(out)
}

fn generate_text(n: usize, class: &str, depth: usize, seed: u64) -> Result<String, String> {
    if n > MAX_DEMO_POINTS {
        return Err(format!("at most {MAX_DEMO_POINTS} points in the browser"));
    }
    let class: ClassSet = class
        .parse()
        .map_err(|e: hypertournament::Error| e.to_string())?;
    let built = build_generic(n, class, depth, seed).map_err(|e| e.to_string())?;
    let mut out = format!(
        "# {}/{} admissible types over <={depth}-subsets realized\n",
        built.required - built.gaps.len(),
        built.required
    );
    out.push_str(&format::write_total(&built.structure));
    Ok(out)
}

fn witness_text(kind: &str) -> Result<String, String> {
    let reports = match kind {
        "sop3" => vec![
            witness::sop3_cycle_check().map_err(|e| e.to_string())?,
            witness::sop3_build(6).map_err(|e| e.to_string())?.1,
        ],
        "tp2" => vec![witness::tp2_build(3, 4).map_err(|e| e.to_string())?.1],
        "ip2" => vec![witness::ip2_build(2).map_err(|e| e.to_string())?.1],
        "nsop4" => vec![witness::nsop4_sweep(1, 2, None, 0).map_err(|e| e.to_string())?],
        "empty-base" => vec![witness::empty_base_obstruction().map_err(|e| e.to_string())?],
        other => return Err(format!("unknown check `{other}`")),
    };
    Ok(reports.iter().map(|r| r.to_string()).collect())
}

#[wasm_bindgen]
pub fn classify(text: &str) -> Result<String, JsError> {
    classify_text(text).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn generate(n: usize, class: &str, depth: usize, seed: u32) -> Result<String, JsError> {
    generate_text(n, class, depth, u64::from(seed)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn witness(kind: &str) -> Result<String, JsError> {
    witness_text(kind).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_pasted_structure() {
        let out = classify_text(
            "h3t 1\npoints 4\ntriple 0 1 2 +\ntriple 0 1 3 -\ntriple 0 2 3 +\ntriple 1 2 3 -\n",
        )
        .unwrap();
        assert!(out.contains("H4: 1"), "{out}");
        assert!(out.contains("H4 at {0,1,2,3}"), "{out}");
        assert!(classify_text("h3t 1\npoints 4\n")
            .unwrap_err()
            .contains("partial"));
    }

    #[test]
    fn generated_text_parses() {
        let out = generate_text(7, "c4o4", 1, 3).unwrap();
        let h = format::parse(&out).unwrap().total().unwrap();
        assert_eq!(h.len(), 7);
        assert!(classify_text(&out).unwrap().contains("H4-free"));
        assert!(generate_text(99, "c4o4", 1, 0).is_err());
        assert!(generate_text(5, "xyz", 1, 0).is_err());
    }

    #[test]
    fn checks_pass() {
        for kind in ["sop3", "tp2", "ip2", "nsop4", "empty-base"] {
            let out = witness_text(kind).unwrap();
            assert!(out.contains(" PASS") && !out.contains(" FAIL"), "{out}");
        }
        assert!(witness_text("nope").is_err());
    }
}
