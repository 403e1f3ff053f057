//! Invariant extensions over a nonempty base, and the obstruction over the
//! empty base.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::qftype::{qf_type, QfType, Slot};
use crate::report::WitnessReport;
use crate::solver::{ConstraintSet, Term};
use crate::structure::{Hypertournament, PartialHypertournament, PointId};

use super::{check_h4_free, counted_solve};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateExtension {
    pub structure: Hypertournament,
    /// The new points realizing the type, in tuple order.
    pub tuple: Vec<PointId>,
    pub report: WitnessReport,
}

/// Extends `h` by a tuple realizing `p` over `base`. Every remaining sign is
/// copied from the anchor `astar`:
/// `R(x_i, a, b)` for `a` in the base and `b` outside it,
/// `R(x_i, b1, b2) ↔ R(a*_i, b1, b2)` and `R(x_i, x_j, b) ↔ R(a*_i, a*_j, b)`
/// for points outside the base.
pub fn invariant_extension_template(
    h: &Hypertournament,
    base: &[PointId],
    astar: &[PointId],
    p: &QfType,
) -> Result<TemplateExtension> {
    let mut a: Vec<PointId> = base.to_vec();
    a.sort_unstable();
    a.dedup();
    if a.is_empty() {
        return Err(Error::Precondition("the base must be nonempty".into()));
    }
    if a.iter().any(|&q| q >= h.len()) {
        return Err(Error::Precondition("base point out of range".into()));
    }
    if p.base() != a.as_slice() {
        return Err(Error::Precondition(
            "the type must be over the given base".into(),
        ));
    }
    if p.equalities().iter().any(Option::is_some) {
        return Err(Error::Precondition(
            "the realized tuple must avoid the base".into(),
        ));
    }
    if astar.len() != p.arity() || astar.iter().any(|q| a.binary_search(q).is_err()) {
        return Err(Error::Precondition(
            "the anchor must be a tuple of base points matching the type".into(),
        ));
    }
    let mut report = WitnessReport::new("invariant-template");
    let outside: Vec<PointId> = h.points().filter(|q| a.binary_search(q).is_err()).collect();

    let mut cs = ConstraintSet::new();
    let x = cs.vars("x", p.arity());
    cs.require_type(p, |s| match s {
        Slot::Var(i) => x[i],
        Slot::Base(q) => Term::Point(q),
    });
    let pt = Term::Point;
    for (i, &xi) in x.iter().enumerate() {
        for &ai in &a {
            for &b in &outside {
                cs.r(xi, pt(ai), pt(b));
            }
        }
        for (k, &b1) in outside.iter().enumerate() {
            for &b2 in &outside[k + 1..] {
                cs.require(xi, pt(b1), pt(b2), h.r(astar[i], b1, b2));
            }
        }
        for (j, &xj) in x.iter().enumerate().skip(i + 1) {
            if astar[i] == astar[j] {
                continue;
            }
            for &b in &outside {
                cs.require(xi, xj, pt(b), h.r(astar[i], astar[j], b));
            }
        }
    }
    let Some(model) = counted_solve(&mut report, &h.to_partial(), &cs)?.into_model() else {
        report.fail_with(
            "template is inconsistent with the type",
            Some(crate::format::write_total(h)),
        );
        return Ok(TemplateExtension {
            structure: h.clone(),
            tuple: Vec::new(),
            report,
        });
    };
    let g = model.structure;
    let tuple = model.assignment;
    check_h4_free(&mut report, &g, "extension");
    report.check(
        qf_type(&g, &tuple, &a)? == *p,
        "tuple realizes the type over the base",
    );

    // each sign on (x_i, b1, b2) depends only on the type of (b1, b2) over the base
    let mut seen: HashMap<(usize, QfType), bool> = HashMap::new();
    let mut consistent = true;
    for (i, &xi) in tuple.iter().enumerate() {
        for &b1 in &outside {
            for &b2 in &outside {
                if b1 == b2 {
                    continue;
                }
                let ty = qf_type(&g, &[b1, b2], &a)?;
                let sign = g.r(xi, b1, b2);
                consistent &= *seen.entry((i, ty)).or_insert(sign) == sign;
            }
        }
    }
    report.check(
        consistent,
        "signs on outside pairs are functions of their type over the base",
    );
    Ok(TemplateExtension {
        structure: g,
        tuple,
        report,
    })
}

/// `R(x, a, b) ∧ R(x, b, a)` and its flip are unsatisfiable; each literal alone is not.
pub fn empty_base_obstruction() -> Result<WitnessReport> {
    let mut report = WitnessReport::new("empty-base-obstruction");
    let base = PartialHypertournament::new(2);
    let (a, b) = (Term::Point(0), Term::Point(1));
    for holds in [true, false] {
        let mut cs = ConstraintSet::new();
        let x = cs.var("x");
        cs.require(x, a, b, holds);
        cs.require(x, b, a, holds);
        let out = counted_solve(&mut report, &base, &cs)?;
        report.check(
            !out.is_sat(),
            format!(
                "R(x,a,b) and R(x,b,a) both {} is UNSAT",
                if holds { "true" } else { "false" }
            ),
        );
        for (u, v) in [(a, b), (b, a)] {
            let mut single = ConstraintSet::new();
            let x = single.var("x");
            single.require(x, u, v, holds);
            let out = counted_solve(&mut report, &base, &single)?;
            report.check(out.is_sat(), "a single literal is SAT");
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::ClassSet;
    use crate::solver::random_in_class;

    #[test]
    fn obstruction() {
        let r = empty_base_obstruction().unwrap();
        assert!(r.passed, "{r}");
    }

    #[test]
    fn full_base_adds_only_the_type() {
        let h = random_in_class(5, ClassSet::H4_FREE, 3).unwrap();
        let base: Vec<PointId> = (0..4).collect();
        let p = qf_type(&h, &[4], &base).unwrap();
        let out = invariant_extension_template(&h.restrict(&base), &base, &[0], &p).unwrap();
        assert!(out.report.passed, "{}", out.report);
        assert_eq!(out.structure.len(), 5);
        assert_eq!(qf_type(&out.structure, &out.tuple, &base).unwrap(), p);
    }

    #[test]
    fn small_base() {
        for seed in 0..20 {
            let h = random_in_class(7, ClassSet::H4_FREE, seed).unwrap();
            let p = qf_type(&h, &[6], &[0, 1]).unwrap();
            let out =
                invariant_extension_template(&h.restrict(&[0, 1, 2, 3, 4, 5]), &[0, 1], &[1], &p)
                    .unwrap();
            assert!(out.report.passed, "{}", out.report);
        }
    }

    #[test]
    fn bad_inputs() {
        let h = random_in_class(5, ClassSet::H4_FREE, 1).unwrap();
        let p = qf_type(&h, &[4], &[0]).unwrap();
        assert!(invariant_extension_template(&h, &[], &[0], &p).is_err());
        assert!(invariant_extension_template(&h, &[0], &[3], &p).is_err());
        assert!(invariant_extension_template(&h, &[0, 1], &[0], &p).is_err());
    }
}
