//! The SOP3 chain: `φ(x, y) = R(x, y, a) ∧ R(x, b, y)` holds along an
//! increasing chain, while no 3-cycle of `φ` is consistent.

use crate::classify::ClassSet;
use crate::error::{Error, Result};
use crate::report::WitnessReport;
use crate::solver::{count_completions, ConstraintSet, Term};
use crate::structure::{Hypertournament, PartialHypertournament, PointId};

use super::{check_h4_free, counted_solve};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sop3Witness {
    pub structure: Hypertournament,
    pub a: PointId,
    pub b: PointId,
    pub chain: Vec<PointId>,
}

impl Sop3Witness {
    pub fn phi(&self, x: PointId, y: PointId) -> bool {
        let h = &self.structure;
        h.r(x, y, self.a) && h.r(x, self.b, y)
    }
}

/// Points `a = 0`, `b = 1`, `c_i = 2 + i`; every triple is fixed by the chain
/// rules, so no search is involved.
pub fn sop3_build(m: usize) -> Result<(Sop3Witness, WitnessReport)> {
    if m < 2 {
        return Err(Error::Precondition(
            "the chain needs at least 2 points".into(),
        ));
    }
    let (a, b) = (0, 1);
    let chain: Vec<PointId> = (2..2 + m).collect();
    let mut h = PartialHypertournament::new(m + 2);
    for (i, &ci) in chain.iter().enumerate() {
        h.require_r(ci, b, a, true)?;
        for (j, &cj) in chain.iter().enumerate().skip(i + 1) {
            h.require_r(ci, cj, a, true)?;
            h.require_r(ci, b, cj, true)?;
            for &ck in &chain[j + 1..] {
                h.require_r(ci, cj, ck, true)?;
            }
        }
    }
    let structure = h.to_total()?;
    let w = Sop3Witness {
        structure,
        a,
        b,
        chain,
    };

    let mut report = WitnessReport::new(format!("sop3-chain-{m}"));
    check_h4_free(&mut report, &w.structure, "chain structure");
    let mut pairs = 0;
    let mut bad = Vec::new();
    for (i, &ci) in w.chain.iter().enumerate() {
        for &cj in &w.chain[i + 1..] {
            pairs += 1;
            if !w.phi(ci, cj) {
                bad.push((ci, cj));
            }
        }
    }
    report.check(
        bad.is_empty(),
        format!(
            "phi holds on {}/{pairs} increasing pairs",
            pairs - bad.len()
        ),
    );
    Ok((w, report))
}

fn cycle_system(len: usize, close: bool) -> (PartialHypertournament, ConstraintSet) {
    let mut cs = ConstraintSet::new();
    let x = cs.vars("x", len);
    let (a, b) = (Term::Point(0), Term::Point(1));
    let steps = if close { len } else { len - 1 };
    for i in 0..steps {
        let (u, v) = (x[i], x[(i + 1) % len]);
        cs.r(u, v, a);
        cs.r(u, b, v);
    }
    (PartialHypertournament::new(2), cs)
}

/// The 3-cycle of `φ` over fresh `a`, `b` is unsatisfiable, by search and by
/// counting all 1024 orientations of the 5 points; the open 2-chain is satisfiable.
pub fn sop3_cycle_check() -> Result<WitnessReport> {
    let mut report = WitnessReport::new("sop3-cycle");
    let (base, cs) = cycle_system(3, true);
    let out = counted_solve(&mut report, &base, &cs)?;
    report.check(
        !out.is_sat(),
        "phi(x0,x1) & phi(x1,x2) & phi(x2,x0) is UNSAT",
    );
    let count = count_completions(&base, &cs, ClassSet::H4_FREE, u64::MAX)?;
    report.completions_checked += count.enumerated;
    report.check(
        count.satisfying == 0 && count.space == 1024,
        format!(
            "brute force: {} of {} completions satisfy the cycle",
            count.satisfying, count.space
        ),
    );

    let (base, cs) = cycle_system(3, false);
    let out = counted_solve(&mut report, &base, &cs)?;
    report.check(out.is_sat(), "phi(x0,x1) & phi(x1,x2) is SAT");
    let (w, _) = sop3_build(3)?;
    report.check(
        w.phi(w.chain[0], w.chain[1]) && w.phi(w.chain[1], w.chain[2]),
        "the 2-chain is realized by the length-3 chain structure",
    );
    Ok(report)
}
