//! The 4-cycle behind NSOP4. From `b̄0 b̄1` over `c̄` with sign pattern
//! `ε(i, j, k)` on `R(c_i, b0_j, b1_k)`, two solver steps produce `b̄2*`, `b̄3*`
//! with `p(b̄1, b̄2*)`, `p(b̄2*, b̄3*)` and `p(b̄3*, b̄0)` where `p` is the type of
//! `b̄0 b̄1` over `c̄`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::is_h4_free;
use crate::error::{Error, Result};
use crate::qftype::{qf_type, QfType, Slot};
use crate::report::WitnessReport;
use crate::solver::{ConstraintSet, Term};
use crate::structure::{Hypertournament, PointId, TripleKey};

use super::{check_h4_free, counted_solve};

/// Free bits of the type of `b̄0` over `c̄` searched when building an input.
const MAX_FREE_BITS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nsop4Input {
    pub structure: Hypertournament,
    pub c: Vec<PointId>,
    pub b0: Vec<PointId>,
    pub b1: Vec<PointId>,
    /// `ε(i, j, k)` at index `(i·n + j)·n + k`.
    pub eps: Vec<bool>,
}

impl Nsop4Input {
    pub fn eps_at(&self, i: usize, j: usize, k: usize) -> bool {
        let n = self.b0.len();
        self.eps[(i * n + j) * n + k]
    }

    /// `ε` as recovered from the structure.
    pub fn read_pattern(&self) -> Vec<bool> {
        let mut out = Vec::with_capacity(self.eps.len());
        for &ci in &self.c {
            for &bj in &self.b0 {
                for &bk in &self.b1 {
                    out.push(self.structure.r(ci, bj, bk));
                }
            }
        }
        out
    }

    fn link_type(
        &self,
        left: &[PointId],
        right: &[PointId],
        h: &Hypertournament,
    ) -> Result<QfType> {
        let tuple: Vec<PointId> = left.iter().chain(right).copied().collect();
        qf_type(h, &tuple, &self.c)
    }
}

/// Builds `c̄ = 0..m`, `b̄0`, `b̄1` with all triples inside `b̄0 b̄1` increasing
/// in index order, `ε` installed, and a type of `b̄0` over `c̄` copied to `b̄1`.
/// Candidate types are tried in an order drawn from `seed`; the first one
/// leaving the structure H4-free is kept.
pub fn nsop4_make_input(m: usize, n: usize, eps: &[bool], seed: u64) -> Result<Nsop4Input> {
    if eps.len() != m * n * n {
        return Err(Error::WrongSize {
            expected: m * n * n,
            got: eps.len(),
        });
    }
    if n == 0 {
        return Err(Error::Precondition("tuples must be nonempty".into()));
    }
    let c: Vec<PointId> = (0..m).collect();
    let b0: Vec<PointId> = (m..m + n).collect();
    let b1: Vec<PointId> = (m + n..m + 2 * n).collect();
    let mut h = Hypertournament::new(m + 2 * n);
    for key in crate::structure::keys(m + 2 * n) {
        if key.points()[0] >= m {
            h.set(key, crate::structure::Orientation::Plus);
        }
    }
    for i in 0..m {
        for j in 0..n {
            for k in 0..n {
                h.set_r(c[i], b0[j], b1[k], eps[(i * n + j) * n + k]);
            }
        }
    }
    // triples inside c̄, then those meeting b̄0 and c̄; the latter are mirrored on b̄1
    let inner: Vec<TripleKey> = crate::structure::keys(m).collect();
    let mixed: Vec<TripleKey> = crate::structure::keys(m + n)
        .filter(|k| k.points()[0] < m && k.top() >= m)
        .collect();
    let free = inner.len() + mixed.len();
    if free > MAX_FREE_BITS {
        return Err(Error::Budget(format!(
            "{free} free triples in the type of b0 over c exceed {MAX_FREE_BITS}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut masks: Vec<u64> = (0..1u64 << free).collect();
    masks.shuffle(&mut rng);
    let shift = |p: PointId| if p >= m { p + n } else { p };
    for mask in masks {
        for (bit, key) in inner.iter().chain(&mixed).enumerate() {
            let plus = mask >> bit & 1 == 1;
            let [a, b, cc] = key.points();
            h.set_r(a, b, cc, plus);
            h.set_r(shift(a), shift(b), shift(cc), plus);
        }
        if is_h4_free(&h) {
            let input = Nsop4Input {
                structure: h,
                c,
                b0,
                b1,
                eps: eps.to_vec(),
            };
            debug_assert_eq!(
                qf_type(&input.structure, &input.b0, &input.c)?.atoms(),
                qf_type(&input.structure, &input.b1, &input.c)?.atoms()
            );
            return Ok(input);
        }
    }
    Err(Error::Precondition(format!(
        "no H4-free input for m={m}, n={n} and this sign pattern"
    )))
}

fn bind_pair(left: Vec<Term>, right: Vec<Term>) -> impl Fn(Slot) -> Term {
    move |s| match s {
        Slot::Var(i) if i < left.len() => left[i],
        Slot::Var(i) => right[i - left.len()],
        Slot::Base(p) => Term::Point(p),
    }
}

fn points(ps: &[PointId]) -> Vec<Term> {
    ps.iter().map(|&p| Term::Point(p)).collect()
}

pub fn nsop4_build_cycle(input: &Nsop4Input) -> Result<WitnessReport> {
    let m = input.c.len();
    let n = input.b0.len();
    let mut report = WitnessReport::new(format!("nsop4-cycle-m{m}-n{n}"));
    let h = &input.structure;
    check_h4_free(&mut report, h, "input");
    report.check(input.read_pattern() == input.eps, "sign pattern reads back");
    let p = input.link_type(&input.b0, &input.b1, h)?;

    // Σ(x̄): b̄0 b̄1 ≡ b̄1 x̄ over c̄, R(c_i, b0_j, x_k), R(b0_i, x_j, b1_k)
    let mut sigma = ConstraintSet::new();
    let x = sigma.vars("x", n);
    sigma.require_type(&p, bind_pair(points(&input.b1), x.clone()));
    for &ci in &input.c {
        for &bj in &input.b0 {
            for &xk in &x {
                sigma.r(Term::Point(ci), Term::Point(bj), xk);
            }
        }
    }
    for &bi in &input.b0 {
        for &xj in &x {
            for &bk in &input.b1 {
                sigma.r(Term::Point(bi), xj, Term::Point(bk));
            }
        }
    }
    let Some(step1) = counted_solve(&mut report, &h.to_partial(), &sigma)?.into_model() else {
        report.fail_with("Sigma is UNSAT", Some(crate::format::write_total(h)));
        return Ok(report);
    };
    let b2: Vec<PointId> = step1.assignment.clone();
    report.check(true, format!("Sigma SAT, b2* = {b2:?}"));

    // Γ(ȳ): ȳ b̄0 ≡ b̄2* ȳ ≡ b̄0 b̄1 over c̄, R(b0_i, b2*_j, y_k)
    let mut gamma = ConstraintSet::new();
    let y = gamma.vars("y", n);
    gamma.require_type(&p, bind_pair(y.clone(), points(&input.b0)));
    gamma.require_type(&p, bind_pair(points(&b2), y.clone()));
    for &bi in &input.b0 {
        for &bj in &b2 {
            for &yk in &y {
                gamma.r(Term::Point(bi), Term::Point(bj), yk);
            }
        }
    }
    let Some(step2) =
        counted_solve(&mut report, &step1.structure.to_partial(), &gamma)?.into_model()
    else {
        report.fail_with(
            "Gamma is UNSAT",
            Some(crate::format::write_total(&step1.structure)),
        );
        return Ok(report);
    };
    let b3: Vec<PointId> = step2.assignment.clone();
    report.check(true, format!("Gamma SAT, b3* = {b3:?}"));

    let g = &step2.structure;
    check_h4_free(&mut report, g, "cycle structure");
    let links = [
        ("p(b0, b1)", &input.b0, &input.b1),
        ("p(b1, b2*)", &input.b1, &b2),
        ("p(b2*, b3*)", &b2, &b3),
        ("p(b3*, b0)", &b3, &input.b0),
    ];
    for (name, l, r) in links {
        let ok = input.link_type(l, r, g)? == p;
        if ok {
            report.check(true, name);
        } else {
            report.fail_with(name, Some(crate::format::write_total(g)));
        }
    }
    Ok(report)
}

/// Every sign pattern for `|c̄| = m`, `|b̄| = n` (or `samples` random ones when
/// there are more), each run end to end.
pub fn nsop4_sweep(m: usize, n: usize, samples: Option<usize>, seed: u64) -> Result<WitnessReport> {
    let bits = m * n * n;
    let mut report = WitnessReport::new(format!("nsop4-m{m}-n{n}"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let patterns: Vec<u64> = match samples {
        Some(k) if bits >= 20 || k < 1 << bits => (0..k)
            .map(|_| rng.gen::<u64>() & ((1u64 << bits.min(63)) - 1))
            .collect(),
        _ => (0..1u64 << bits).collect(),
    };
    for (t, mask) in patterns.iter().enumerate() {
        let eps: Vec<bool> = (0..bits).map(|b| mask >> b & 1 == 1).collect();
        let input = match nsop4_make_input(m, n, &eps, seed.wrapping_add(t as u64)) {
            Ok(i) => i,
            Err(e) => {
                report.fail_with(format!("pattern {mask:#b}: {e}"), None);
                continue;
            }
        };
        report.absorb(nsop4_build_cycle(&input)?);
    }
    report.note(format!("{} sign patterns", patterns.len()));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_points() {
        let one = nsop4_make_input(1, 1, &[true], 0).unwrap();
        assert_eq!(one.structure.len(), 3);
        assert!(one.structure.r(0, 1, 2));
        let zero = nsop4_make_input(1, 1, &[false], 0).unwrap();
        assert!(zero.structure.r(1, 0, 2));
        for input in [one, zero] {
            let r = nsop4_build_cycle(&input).unwrap();
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn pattern_reads_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for t in 0..50 {
            let m = rng.gen_range(1..=2);
            let n = rng.gen_range(1..=2);
            let eps: Vec<bool> = (0..m * n * n).map(|_| rng.gen()).collect();
            let input = nsop4_make_input(m, n, &eps, t).unwrap();
            assert_eq!(input.read_pattern(), eps);
            assert_eq!(
                qf_type(&input.structure, &input.b0, &input.c)
                    .unwrap()
                    .atoms(),
                qf_type(&input.structure, &input.b1, &input.c)
                    .unwrap()
                    .atoms()
            );
        }
    }

    #[test]
    fn wrong_dimensions() {
        assert!(matches!(
            nsop4_make_input(1, 2, &[true], 0),
            Err(Error::WrongSize { .. })
        ));
    }
}
