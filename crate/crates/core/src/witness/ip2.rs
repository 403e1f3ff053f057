//! The IP2 grid: `R(x_{0,i}, x_{1,j}, y_I)` holds exactly when `(i, j) ∈ I`,
//! for every subset `I` of the `n × n` grid.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::report::WitnessReport;
use crate::structure::{Hypertournament, PartialHypertournament, PointId};

use super::check_h4_free;

pub const IP2_MAX_POINTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ip2Witness {
    pub structure: Hypertournament,
    pub n: usize,
}

impl Ip2Witness {
    /// `x_{side, i}`.
    pub fn x(&self, side: usize, i: usize) -> PointId {
        side * self.n + i
    }

    /// `y_I` for `I` given as a bitmask over cells `(i, j) ↦ i·n + j`.
    pub fn y(&self, subset: u64) -> PointId {
        2 * self.n + subset as usize
    }

    pub fn subsets(&self) -> u64 {
        1 << (self.n * self.n)
    }
}

/// Lexicographic order of characteristic strings, cell 0 first.
fn lex_cmp(i: u64, j: u64, cells: usize) -> Ordering {
    for cell in 0..cells {
        let (a, b) = (i >> cell & 1, j >> cell & 1);
        if a != b {
            return a.cmp(&b);
        }
    }
    Ordering::Equal
}

pub fn ip2_build(n: usize) -> Result<(Ip2Witness, WitnessReport)> {
    if n == 0 {
        return Err(Error::Precondition("grid size must be positive".into()));
    }
    let cells = n * n;
    let points = 2 * n + (1usize << cells.min(32));
    if cells >= 32 || points > IP2_MAX_POINTS {
        return Err(Error::Budget(format!(
            "grid size {n} needs more than {IP2_MAX_POINTS} points"
        )));
    }
    let mut w = Ip2Witness {
        structure: Hypertournament::new(0),
        n,
    };
    let subsets = w.subsets();
    let less = |a: u64, b: u64| lex_cmp(a, b, cells) == Ordering::Less;
    let mut h = PartialHypertournament::new(points);
    for side in 0..2 {
        let other = 1 - side;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    h.require_r(w.x(side, i), w.x(side, j), w.x(side, k), true)?;
                }
                for l in 0..n {
                    h.require_r(w.x(side, i), w.x(side, j), w.x(other, l), true)?;
                }
                for s in 0..subsets {
                    h.require_r(w.x(side, i), w.x(side, j), w.y(s), true)?;
                }
            }
            for s in 0..subsets {
                for t in s + 1..subsets {
                    h.require_r(w.x(side, i), w.y(s), w.y(t), less(s, t))?;
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for s in 0..subsets {
                h.require_r(w.x(0, i), w.x(1, j), w.y(s), s >> (i * n + j) & 1 == 1)?;
            }
        }
    }
    let mut order: Vec<u64> = (0..subsets).collect();
    order.sort_by(|&a, &b| lex_cmp(a, b, cells));
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            for c in b + 1..order.len() {
                h.require_r(w.y(order[a]), w.y(order[b]), w.y(order[c]), true)?;
            }
        }
    }
    w.structure = h.to_total()?;

    let mut report = WitnessReport::new(format!("ip2-{n}"));
    check_h4_free(&mut report, &w.structure, "grid structure");
    let mut wrong = 0;
    for s in 0..subsets {
        for i in 0..n {
            for j in 0..n {
                let member = s >> (i * n + j) & 1 == 1;
                if w.structure.r(w.x(0, i), w.x(1, j), w.y(s)) != member {
                    wrong += 1;
                }
            }
        }
    }
    report.check(
        wrong == 0,
        format!("membership pattern realized for all {subsets} subsets ({wrong} mismatches)"),
    );
    Ok((w, report))
}
