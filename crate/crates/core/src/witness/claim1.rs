//! The single-point exchange step of weak elimination of imaginaries: given
//! `b' ≡_C b`, find `a' ≡_{Cb} a` with `b' ≡_{Ca'} b`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::is_h4_free;
use crate::error::{Error, Result};
use crate::qftype::{qf_type, Slot};
use crate::report::WitnessReport;
use crate::solver::{random_in_class, solve_over, ConstraintSet, Term};
use crate::structure::{Hypertournament, PointId};

use super::{check_h4_free, counted_solve};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim1Outcome {
    pub structure: Hypertournament,
    pub a_prime: PointId,
    pub report: WitnessReport,
}

fn with(c: &[PointId], p: PointId) -> Vec<PointId> {
    let mut v = c.to_vec();
    v.push(p);
    v
}

pub fn claim1_witness(
    h: &Hypertournament,
    c: &[PointId],
    a: PointId,
    b: PointId,
    bp: PointId,
) -> Result<Claim1Outcome> {
    for &p in c.iter().chain([&a, &b, &bp]) {
        if p >= h.len() {
            return Err(Error::PointOutOfRange {
                point: p,
                n: h.len(),
            });
        }
    }
    if c.contains(&a) || c.contains(&b) || c.contains(&bp) {
        return Err(Error::Precondition("a, b and b' must lie outside C".into()));
    }
    if a == b {
        return Err(Error::Precondition("a and b must be distinct".into()));
    }
    if !is_h4_free(h) {
        return Err(Error::Precondition("structure is not H4-free".into()));
    }
    if qf_type(h, &[b], c)?.atoms() != qf_type(h, &[bp], c)?.atoms() {
        return Err(Error::Precondition(
            "b' does not have the type of b over C".into(),
        ));
    }

    let case = if bp == b {
        "trivial"
    } else if bp == a {
        "case1"
    } else {
        "case2"
    };
    let mut report = WitnessReport::new(format!("claim1-{case}"));
    let (g, a_prime) = if bp == b {
        (h.clone(), a)
    } else {
        let mut cs = ConstraintSet::new();
        let x = cs.var("a'");
        let p = qf_type(h, &[a], &with(c, b))?;
        cs.require_type(&p, |s| match s {
            Slot::Var(_) => x,
            Slot::Base(q) => Term::Point(q),
        });
        let pt = Term::Point;
        if bp == a {
            for &ci in c {
                cs.require(x, pt(a), pt(ci), h.r(a, b, ci));
            }
            cs.r(x, pt(a), pt(b));
        } else {
            for &ci in c {
                cs.require(x, pt(bp), pt(ci), h.r(a, b, ci));
                cs.r(x, pt(a), pt(ci));
            }
            cs.r(x, pt(a), pt(b));
            cs.r(x, pt(a), pt(bp));
            cs.require(x, pt(b), pt(bp), h.r(a, b, bp));
        }
        match counted_solve(&mut report, &h.to_partial(), &cs)?.into_model() {
            Some(model) => (model.structure, model.assignment[0]),
            None => {
                report.fail_with("Sigma is UNSAT", Some(crate::format::write_total(h)));
                return Ok(Claim1Outcome {
                    structure: h.clone(),
                    a_prime: a,
                    report,
                });
            }
        }
    };
    check_h4_free(&mut report, &g, "extension");
    let cb = with(c, b);
    report.check(
        qf_type(&g, &[a_prime], &cb)?.atoms() == qf_type(&g, &[a], &cb)?.atoms(),
        "a' has the type of a over C b",
    );
    let ca = with(c, a_prime);
    report.check(
        qf_type(&g, &[bp], &ca)?.atoms() == qf_type(&g, &[b], &ca)?.atoms(),
        "b' has the type of b over C a'",
    );
    Ok(Claim1Outcome {
        structure: g,
        a_prime,
        report,
    })
}

/// Adds a point realizing the type of `p` over `base`.
fn copy_point(
    h: &Hypertournament,
    p: PointId,
    base: &[PointId],
) -> Result<(Hypertournament, PointId)> {
    let ty = qf_type(h, &[p], base)?;
    let mut cs = ConstraintSet::new();
    let x = cs.var("copy");
    cs.require_type(&ty, |s| match s {
        Slot::Var(_) => x,
        Slot::Base(q) => Term::Point(q),
    });
    let model = solve_over(h, &cs)?
        .into_model()
        .ok_or_else(|| Error::Precondition("type has no H4-free realization".into()))?;
    Ok((model.structure, model.assignment[0]))
}

/// Random instances: a random H4-free structure, a base `C` of at most
/// `max_c` points, and `b'` (case 2) or `a` (case 1) added as a fresh copy of `b` over `C`.
pub fn claim1_sweep(case1: bool, trials: usize, max_c: usize, seed: u64) -> Result<WitnessReport> {
    let mut report = WitnessReport::new(if case1 {
        "claim1-case1-sweep"
    } else {
        "claim1-case2-sweep"
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let csize = rng.gen_range(0..=max_c);
        let n = csize + 2 + rng.gen_range(0..=2);
        let h = random_in_class(n, crate::classify::ClassSet::H4_FREE, rng.gen())?;
        let mut pts: Vec<PointId> = (0..n).collect();
        pts.shuffle(&mut rng);
        let c = pts[..csize].to_vec();
        let (a, b) = (pts[csize], pts[csize + 1]);
        let out = if case1 {
            let (g, a2) = copy_point(&h, b, &c)?;
            claim1_witness(&g, &c, a2, b, a2)?
        } else {
            let (g, bp) = copy_point(&h, b, &c)?;
            claim1_witness(&g, &c, a, b, bp)?
        };
        report.absorb(out.report);
    }
    report.note(format!("{trials} instances"));
    Ok(report)
}
