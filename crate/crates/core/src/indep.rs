//! The directional independence relation `A ⫫ht_C B`, ht-Morley sequences
//! built from the invariant template, and survival of isolated types along them.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{is_h4_free, ClassSet};
use crate::error::{Error, Result};
use crate::qftype::{qf_type, QfType, Slot};
use crate::report::WitnessReport;
use crate::solver::{random_in_class, solve_over, ConstraintSet, Term};
use crate::structure::{Hypertournament, PartialHypertournament, PointId};

/// `A ∩ B ⊆ C` and `R(a, c, b)` for all `a ∈ A∖C`, `c ∈ C`, `b ∈ B∖C`.
pub fn ind_ht(h: &Hypertournament, a: &[PointId], b: &[PointId], c: &[PointId]) -> bool {
    if a.iter().any(|p| b.contains(p) && !c.contains(p)) {
        return false;
    }
    a.iter().filter(|p| !c.contains(p)).all(|&x| {
        c.iter()
            .all(|&z| b.iter().filter(|p| !c.contains(p)).all(|&y| h.r(x, z, y)))
    })
}

/// Bitmask form of [`ind_ht`] for exhaustive scans.
fn ind_ht_mask(h: &Hypertournament, a: u32, b: u32, c: u32) -> bool {
    if a & b & !c != 0 {
        return false;
    }
    let (am, bm) = (a & !c, b & !c);
    let n = h.len();
    for x in (0..n).filter(|&x| am >> x & 1 == 1) {
        for z in (0..n).filter(|&z| c >> z & 1 == 1) {
            for y in (0..n).filter(|&y| bm >> y & 1 == 1) {
                if !h.r(x, z, y) {
                    return false;
                }
            }
        }
    }
    true
}

/// The three-point structure with `R(a, c, b)`: `{a} ⫫ht_{c} {b}` but not
/// the reverse, and the asymmetry vanishes over the empty base.
pub fn asymmetry_witness() -> (Hypertournament, WitnessReport) {
    let (a, c, b) = (0, 1, 2);
    let mut h = Hypertournament::new(3);
    h.set_r(a, c, b, true);
    let mut report = WitnessReport::new("ht-asymmetry");
    report.check(ind_ht(&h, &[a], &[b], &[c]), "A ind_C B");
    report.check(!ind_ht(&h, &[b], &[a], &[c]), "not B ind_C A");
    report.check(
        ind_ht(&h, &[a], &[b], &[]) && ind_ht(&h, &[b], &[a], &[]),
        "over the empty base both directions hold",
    );
    for holds in [true, false] {
        let mut g = Hypertournament::new(3);
        g.set_r(a, c, b, holds);
        let forward = ind_ht(&g, &[a], &[b], &[c]);
        let backward = ind_ht(&g, &[b], &[a], &[c]);
        report.check(
            forward != backward,
            format!("R(a,c,b) = {holds}: exactly one direction holds"),
        );
    }
    (h, report)
}

/// Every structure on at most `max_n` points and every triple of subsets with
/// `C` nonempty and `A∖C`, `B∖C` nonempty: `A ⫫ht_C B` never holds together
/// with `B ⫫ht_C A`.
pub fn asymmetry_scan(max_n: usize) -> Result<WitnessReport> {
    if max_n > 5 {
        return Err(Error::Budget(
            "the asymmetry scan is capped at 5 points".into(),
        ));
    }
    let mut report = WitnessReport::new(format!("ht-asymmetry-scan-{max_n}"));
    let mut forward = 0u64;
    for n in 1..=max_n {
        let triples = crate::structure::triple_count(n);
        let full = (1u32 << n) - 1;
        for bits in 0..1u64 << triples {
            let h = Hypertournament::from_fn(n, |k| {
                crate::structure::Orientation::from_bool(bits >> k.index() & 1 == 1)
            });
            report.completions_checked += 1;
            for c in 1..=full {
                for a in 0..=full {
                    if a & !c == 0 {
                        continue;
                    }
                    for b in 0..=full {
                        if b & !c == 0 || !ind_ht_mask(&h, a, b, c) {
                            continue;
                        }
                        forward += 1;
                        if ind_ht_mask(&h, b, a, c) {
                            let names =
                                |m: u32| (0..n).filter(|p| m >> p & 1 == 1).collect::<Vec<_>>();
                            report.fail_with(
                                format!(
                                    "symmetric pair A={:?} B={:?} C={:?}",
                                    names(a),
                                    names(b),
                                    names(c)
                                ),
                                Some(crate::format::write_total(&h)),
                            );
                            return Ok(report);
                        }
                    }
                }
            }
        }
    }
    report.check(
        true,
        format!("{forward} independent configurations, none symmetric"),
    );
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorleySequence {
    pub structure: Hypertournament,
    pub base: Vec<PointId>,
    /// `copies[0]` is the original tuple.
    pub copies: Vec<Vec<PointId>>,
    pub report: WitnessReport,
}

/// Appends copies `b̄_1, …, b̄_{k−1}` of `b̄` over `base`.
///
/// Each copy repeats the type of `b̄` over the base. Against every older point
/// `p` outside the base the new point `x` gets `R(x, m, p)` for all `m` in the
/// base, and `R(x_i, p, q) ↔ R(m_i, p, q)`, `R(x_i, x_j, p) ↔ R(m_i, m_j, p)`,
/// where the anchor `m̄` is the first `|b̄|` base points.
pub fn build_ht_morley(
    h: &Hypertournament,
    base: &[PointId],
    b: &[PointId],
    k: usize,
) -> Result<MorleySequence> {
    let mut m: Vec<PointId> = base.to_vec();
    m.sort_unstable();
    m.dedup();
    if k == 0 {
        return Err(Error::Precondition(
            "the sequence needs at least one copy".into(),
        ));
    }
    for &p in m.iter().chain(b) {
        if p >= h.len() {
            return Err(Error::PointOutOfRange {
                point: p,
                n: h.len(),
            });
        }
    }
    if b.iter().any(|p| m.contains(p)) {
        return Err(Error::Precondition("the tuple must avoid the base".into()));
    }
    if (1..b.len()).any(|i| b[..i].contains(&b[i])) {
        return Err(Error::Precondition("tuple points must be distinct".into()));
    }
    if m.len() < b.len() {
        return Err(Error::Precondition(format!(
            "the anchor needs {} base points, the base has {}",
            b.len(),
            m.len()
        )));
    }
    let anchor = &m[..b.len()];
    let ty = qf_type(h, b, &m)?;
    let mut report = WitnessReport::new(format!("ht-morley-k{k}"));

    let mut g = PartialHypertournament::new(h.len());
    for (key, o) in h.triples() {
        g.assign(key, o)?;
    }
    let mut copies = vec![b.to_vec()];
    let mut total = h.clone();
    for _ in 1..k {
        let older: Vec<PointId> = total.points().filter(|p| !m.contains(p)).collect();
        let start = total.len();
        let x: Vec<PointId> = (start..start + b.len()).collect();
        g.grow(b.len());
        for (slots, holds) in ty.atoms() {
            let [p, q, r] = slots.map(|s| match s {
                Slot::Var(i) => x[i],
                Slot::Base(p) => p,
            });
            g.require_r(p, q, r, *holds)?;
        }
        for (i, &xi) in x.iter().enumerate() {
            for &mm in &m {
                for &p in &older {
                    g.require_r(xi, mm, p, true)?;
                }
            }
            for (s, &p) in older.iter().enumerate() {
                for &q in &older[s + 1..] {
                    g.require_r(xi, p, q, total.r(anchor[i], p, q))?;
                }
            }
            for (j, &xj) in x.iter().enumerate().skip(i + 1) {
                for &p in &older {
                    g.require_r(xi, xj, p, total.r(anchor[i], anchor[j], p))?;
                }
            }
        }
        total = g.to_total()?;
        copies.push(x);
    }
    report.check(
        is_h4_free(&total),
        format!("sequence structure H4-free ({} points)", total.len()),
    );
    report.check(
        is_ht_morley(&total, &m, &copies)?,
        "ht-Morley characterization holds",
    );
    Ok(MorleySequence {
        structure: total,
        base: m,
        copies,
        report,
    })
}

/// All copies share their type over `base`, and `R(m, b_{i,k}, b_{j,l})` for
/// every `m` in the base and `i < j`.
pub fn is_ht_morley(h: &Hypertournament, base: &[PointId], seq: &[Vec<PointId>]) -> Result<bool> {
    if seq.iter().flatten().any(|p| base.contains(p)) {
        return Err(Error::Precondition("sequence must avoid the base".into()));
    }
    let Some(first) = seq.first() else {
        return Ok(true);
    };
    let ty = qf_type(h, first, base)?;
    for s in &seq[1..] {
        if qf_type(h, s, base)? != ty {
            return Ok(false);
        }
    }
    for (i, si) in seq.iter().enumerate() {
        for sj in &seq[i + 1..] {
            for &m in base {
                for &p in si {
                    for &q in sj {
                        if !h.r(m, p, q) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Builds an ht-Morley sequence of length `k` from `b̄` over `base` and asks
/// whether `ty`, a type over `base ∪ b̄`, is jointly satisfiable at every copy.
pub fn kim_survival(
    h: &Hypertournament,
    base: &[PointId],
    b: &[PointId],
    ty: &QfType,
    k: usize,
) -> Result<WitnessReport> {
    let mut over: Vec<PointId> = base.iter().chain(b).copied().collect();
    over.sort_unstable();
    over.dedup();
    if ty.base() != over.as_slice() {
        return Err(Error::Precondition(
            "the type must be over the base and the tuple".into(),
        ));
    }
    let seq = build_ht_morley(h, base, b, k)?;
    let mut report = WitnessReport::new(format!("kim-survival-k{k}"));
    report.absorb(seq.report.clone());
    let pos_in_b = |p: PointId| b.iter().position(|&q| q == p);

    let mut cs = ConstraintSet::new();
    // a coordinate equal to a tuple point must equal that point in every copy
    let mut bound: Vec<Option<PointId>> = vec![None; ty.arity()];
    let mut clash = None;
    for copy in &seq.copies {
        for (j, eq) in ty.equalities().iter().enumerate() {
            let Some(p) = *eq else { continue };
            let target = pos_in_b(p).map_or(p, |l| copy[l]);
            match bound[j] {
                None => bound[j] = Some(target),
                Some(t) if t != target => clash = Some((j, t, target)),
                _ => {}
            }
        }
    }
    if let Some((j, t, u)) = clash {
        report.solver_calls += 1;
        report.note(format!("coordinate {j} would have to be both {t} and {u}"));
        report.passed = false;
        report.details.push("UNSAT".into());
        return Ok(report);
    }
    let vars: Vec<Term> = bound
        .iter()
        .enumerate()
        .map(|(j, p)| p.map_or_else(|| cs.var(format!("x{j}")), Term::Point))
        .collect();
    for copy in &seq.copies {
        cs.require_type(ty, |s| match s {
            Slot::Var(j) => vars[j],
            Slot::Base(p) => Term::Point(pos_in_b(p).map_or(p, |l| copy[l])),
        });
    }
    report.solver_calls += 1;
    let sat = solve_over(&seq.structure, &cs)?.is_sat();
    report.check(sat, format!("type survives along {k} copies"));
    Ok(report)
}

/// Random instance for the survival sweep: `|M′| ≤ max_m`, `|b̄|, |ā| ≤ max_t`,
/// with `ā` disjoint from `b̄`; coordinates of `ā` may lie in `M′`.
pub fn random_survival_instance(
    rng: &mut ChaCha8Rng,
    max_m: usize,
    max_t: usize,
) -> Result<(Hypertournament, Vec<PointId>, Vec<PointId>, QfType)> {
    let bl = rng.gen_range(1..=max_t);
    let al = rng.gen_range(1..=max_t);
    let ml = rng.gen_range(bl.max(1)..=max_m.max(bl));
    let n = ml + bl + al;
    let h = random_in_class(n, ClassSet::H4_FREE, rng.gen())?;
    let mut pts: Vec<PointId> = (0..n).collect();
    pts.shuffle(rng);
    let m = pts[..ml].to_vec();
    let b = pts[ml..ml + bl].to_vec();
    let mut a = pts[ml + bl..].to_vec();
    for slot in a.iter_mut() {
        if rng.gen_bool(0.25) {
            *slot = m[rng.gen_range(0..ml)];
        }
    }
    let mut seen = Vec::new();
    a.retain(|p| {
        let fresh = !seen.contains(p);
        seen.push(*p);
        fresh
    });
    let over: Vec<PointId> = m.iter().chain(&b).copied().collect();
    let ty = qf_type(&h, &a, &over)?;
    Ok((h, m, b, ty))
}

/// Aggregates [`kim_survival`] over random instances with `ā ∩ b̄ ⊆ M′`.
pub fn conant_triviality_report(
    trials: usize,
    max_m: usize,
    max_t: usize,
    k: usize,
    seed: u64,
) -> Result<WitnessReport> {
    let mut report = WitnessReport::new("conant-triviality");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let (h, m, b, ty) = random_survival_instance(&mut rng, max_m, max_t)?;
        report.absorb(kim_survival(&h, &m, &b, &ty, k)?);
    }
    report.note(format!("{trials} instances survived: {}", report.passed));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_queries() {
        let h = Hypertournament::all_plus(4);
        assert!(ind_ht(&h, &[0], &[1], &[]));
        assert!(!ind_ht(&h, &[0, 1], &[0, 1], &[2]));
        let (_, r) = asymmetry_witness();
        assert!(r.passed, "{r}");
    }

    #[test]
    fn morley_small() {
        let h = random_in_class(3, ClassSet::H4_FREE, 5).unwrap();
        let seq = build_ht_morley(&h, &[0, 1], &[2], 3).unwrap();
        assert!(seq.report.passed, "{}", seq.report);
        for i in 0..3 {
            for j in i + 1..3 {
                for m in [0, 1] {
                    assert!(seq.structure.r(m, seq.copies[i][0], seq.copies[j][0]));
                }
            }
        }
        let mut rev = seq.copies.clone();
        rev.reverse();
        assert!(!is_ht_morley(&seq.structure, &[0, 1], &rev).unwrap());
        let one = build_ht_morley(&h, &[0, 1], &[2], 1).unwrap();
        assert_eq!(one.structure, h);
        assert!(build_ht_morley(&h, &[0], &[1, 2], 2).is_err());
    }

    #[test]
    fn survival_trivial_length() {
        let h = random_in_class(4, ClassSet::H4_FREE, 1).unwrap();
        let ty = qf_type(&h, &[3], &[0, 1]).unwrap();
        assert!(kim_survival(&h, &[0], &[1], &ty, 1).unwrap().passed);
        assert!(kim_survival(&h, &[0], &[1], &ty, 3).unwrap().passed);
    }

    #[test]
    fn shared_point_breaks_survival() {
        let h = random_in_class(3, ClassSet::H4_FREE, 1).unwrap();
        // ā = (b0) itself
        let ty = qf_type(&h, &[1], &[0, 1]).unwrap();
        let r = kim_survival(&h, &[0], &[1], &ty, 2).unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn empty_sweep() {
        let r = conant_triviality_report(0, 4, 2, 4, 0).unwrap();
        assert!(r.passed);
        assert_eq!(r.solver_calls, 0);
    }
}
