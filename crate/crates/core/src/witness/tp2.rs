//! The TP2 array over constants `e`, `f`. Each row is a sequence of pairs
//! `(c, d)` along which `φ(x; c, d)` is 2-inconsistent; choosing one pair per
//! row always leaves `φ` jointly satisfiable.

use crate::error::{Error, Result};
use crate::qftype::{qf_type, Slot};
use crate::report::WitnessReport;
use crate::solver::{ConstraintSet, SolveOutcome, Term};
use crate::structure::{Hypertournament, PartialHypertournament, PointId};

use super::{check_h4_free, counted_solve};

pub const TP2_MAX_CELLS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tp2Witness {
    pub structure: Hypertournament,
    pub e: PointId,
    pub f: PointId,
    pub rows: usize,
    pub cols: usize,
}

impl Tp2Witness {
    pub fn c(&self, row: usize, col: usize) -> PointId {
        2 + 2 * (row * self.cols + col)
    }

    pub fn d(&self, row: usize, col: usize) -> PointId {
        self.c(row, col) + 1
    }

    pub fn pair(&self, row: usize, col: usize) -> [PointId; 2] {
        [self.c(row, col), self.d(row, col)]
    }

    /// Adds the six literals of `φ(x; c, d)`.
    pub fn require_phi(&self, cs: &mut ConstraintSet, x: Term, row: usize, col: usize) {
        let [c, d] = self.pair(row, col).map(Term::Point);
        let (e, f) = (Term::Point(self.e), Term::Point(self.f));
        cs.r(x, c, d);
        cs.r(x, d, e);
        cs.r(x, e, f);
        cs.r(x, c, f);
        cs.r(x, e, c);
        cs.r(x, f, d);
    }

    fn phi_system(&self, cells: &[(usize, usize)]) -> ConstraintSet {
        let mut cs = ConstraintSet::new();
        let x = cs.var("x");
        for &(r, c) in cells {
            self.require_phi(&mut cs, x, r, c);
        }
        cs
    }
}

/// Lays out one row: the fixed pair type over `e`, `f` and the sequence rules
/// between copies.
fn install_row(h: &mut PartialHypertournament, w: &Tp2Witness, row: usize) -> Result<()> {
    let (e, f) = (w.e, w.f);
    let x = |j: usize| w.c(row, j);
    let y = |j: usize| w.d(row, j);
    let n = w.cols;
    for i in 0..n {
        let (c, d) = (x(i), y(i));
        h.require_r(c, d, e, true)?;
        h.require_r(d, e, f, true)?;
        h.require_r(c, e, f, true)?;
        h.require_r(c, f, d, true)?;
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            h.require_r(e, y(j), x(i), i < j)?;
            h.require_r(f, x(i), y(j), i < j)?;
            if i < j {
                h.require_r(e, x(i), x(j), true)?;
                h.require_r(f, x(i), x(j), true)?;
                h.require_r(e, y(i), y(j), true)?;
                h.require_r(f, y(i), y(j), true)?;
            }
            for k in j + 1..n {
                if i < j {
                    h.require_r(x(i), x(j), x(k), true)?;
                    h.require_r(y(i), y(j), y(k), true)?;
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for m in 0..n {
                h.require_r(x(i), x(j), y(m), true)?;
                h.require_r(x(m), y(i), y(j), true)?;
            }
        }
    }
    Ok(())
}

/// Compiles the array. Copies in a later row see each pair of an earlier row
/// through the fixed cross-row pattern; triples no rule mentions are completed
/// by the solver.
pub fn tp2_build(rows: usize, cols: usize) -> Result<(Tp2Witness, WitnessReport)> {
    if rows == 0 || cols == 0 {
        return Err(Error::Precondition(
            "the array needs at least one cell".into(),
        ));
    }
    if rows * cols > TP2_MAX_CELLS {
        return Err(Error::Budget(format!(
            "TP2 arrays are capped at {TP2_MAX_CELLS} cells"
        )));
    }
    let n = 2 + 2 * rows * cols;
    let mut w = Tp2Witness {
        structure: Hypertournament::new(0),
        e: 0,
        f: 1,
        rows,
        cols,
    };
    let mut h = PartialHypertournament::new(n);
    for row in 0..rows {
        install_row(&mut h, &w, row)?;
    }
    let row_points = |w: &Tp2Witness, r: usize| -> Vec<PointId> {
        (0..cols).flat_map(|c| w.pair(r, c)).collect()
    };
    for i in 0..rows {
        for j in i + 1..rows {
            for &z in &row_points(&w, i) {
                for m in 0..cols {
                    let [c, d] = w.pair(j, m);
                    h.require_r(z, c, d, true)?;
                    h.require_r(z, c, w.e, true)?;
                    h.require_r(z, c, w.f, true)?;
                    h.require_r(z, d, w.e, true)?;
                    h.require_r(z, d, w.f, true)?;
                }
            }
            for k in j + 1..rows {
                for &zi in &row_points(&w, i) {
                    for &zj in &row_points(&w, j) {
                        for &zk in &row_points(&w, k) {
                            h.require_r(zi, zj, zk, true)?;
                        }
                    }
                }
            }
        }
    }
    let mut report = WitnessReport::new(format!("tp2-{rows}x{cols}"));
    report.note(format!(
        "{} of {} triples fixed by the construction",
        h.assigned().count(),
        crate::structure::triple_count(n)
    ));
    let out = counted_solve(&mut report, &h, &ConstraintSet::new())?;
    let SolveOutcome::Sat(model) = out else {
        report.fail_with("array constraints have no H4-free completion", None);
        return Ok((w, report));
    };
    w.structure = model.structure;
    check_h4_free(&mut report, &w.structure, "array");

    for row in 0..rows {
        for j in 0..cols {
            for k in j + 1..cols {
                let cs = w.phi_system(&[(row, j), (row, k)]);
                let sat = counted_solve(&mut report, &w.structure.to_partial(), &cs)?.is_sat();
                report.check(
                    !sat,
                    format!("row {row}: phi(x,b{row},{j}) & phi(x,b{row},{k}) UNSAT"),
                );
            }
        }
    }
    let paths = cols.pow(rows as u32);
    let mut consistent = 0;
    for code in 0..paths {
        let mut rest = code;
        let cells: Vec<(usize, usize)> = (0..rows)
            .map(|r| {
                let c = rest % cols;
                rest /= cols;
                (r, c)
            })
            .collect();
        let cs = w.phi_system(&cells);
        if counted_solve(&mut report, &w.structure.to_partial(), &cs)?.is_sat() {
            consistent += 1;
        } else {
            report.note(format!("path {cells:?} UNSAT"));
        }
    }
    report.check(
        consistent == paths,
        format!("{consistent}/{paths} paths SAT"),
    );
    Ok((w, report))
}

/// A pair of one row cannot play the role of the single point `b` in the WEI
/// claim: no `a'` with `a' ≡ a` over `e f b̄0` and `b̄1 ≡ b̄0` over `e f a'`.
pub fn tp2_pair_claim_check() -> Result<WitnessReport> {
    let mut report = WitnessReport::new("claim1-pair-analogue");
    let (w, built) = tp2_build(1, 2)?;
    report.absorb(built);
    let h = &w.structure;
    let [c0, d0] = w.pair(0, 0);
    let [c1, d1] = w.pair(0, 1);

    let mut cs = w.phi_system(&[(0, 0)]);
    let Some(model) = counted_solve(&mut report, &h.to_partial(), &cs)?.into_model() else {
        report.fail_with("phi(x, b0) has no realization", None);
        return Ok(report);
    };
    let g = &model.structure;
    let a = model.assignment[0];
    let over = [w.e, w.f, c0, d0];
    let type_a = qf_type(g, &[a], &over)?;
    let type_pair = qf_type(g, &[c0, d0], &[w.e, w.f, a])?;

    cs = ConstraintSet::new();
    let x = cs.var("a'");
    cs.require_type(&type_a, |s| match s {
        Slot::Var(_) => x,
        Slot::Base(p) => Term::Point(p),
    });
    for (slots, holds) in type_pair.atoms() {
        if !slots.contains(&Slot::Base(a)) {
            continue;
        }
        let [p, q, r] = slots.map(|s| match s {
            Slot::Var(0) => Term::Point(c1),
            Slot::Var(_) => Term::Point(d1),
            Slot::Base(p) if p == a => x,
            Slot::Base(p) => Term::Point(p),
        });
        cs.require(p, q, r, *holds);
    }
    let facts = type_pair
        .atoms()
        .iter()
        .filter(|(s, _)| !s.contains(&Slot::Base(a)))
        .all(|(s, holds)| {
            let pts = s.map(|sl| match sl {
                Slot::Var(0) => c1,
                Slot::Var(_) => d1,
                Slot::Base(p) => p,
            });
            h.r(pts[0], pts[1], pts[2]) == *holds
        });
    report.check(facts, "b1 and b0 agree over e f");
    let out = counted_solve(&mut report, &h.to_partial(), &cs)?;
    report.check(
        !out.is_sat(),
        "a' = a over e f b0 with b1 = b0 over e f a' is UNSAT",
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_row() {
        let (w, report) = tp2_build(1, 2).unwrap();
        assert!(report.passed, "{report}");
        assert_eq!(w.structure.len(), 6);
    }

    #[test]
    fn budget() {
        assert!(matches!(tp2_build(5, 4), Err(Error::Budget(_))));
        assert!(tp2_build(0, 2).is_err());
    }

    #[test]
    fn pair_analogue_fails() {
        let r = tp2_pair_claim_check().unwrap();
        assert!(r.passed, "{r}");
    }
}
