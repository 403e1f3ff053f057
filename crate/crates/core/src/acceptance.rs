//! The acceptance suite, shared by the `accept` subcommand and the
//! integration tests. Each criterion recomputes its expected values with a
//! small independent oracle rather than trusting the module under test.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::amalgam::{
    amalgamate_one_point, build_generic, enumerate_one_point_types, OnePointType,
};
use crate::classify::{classify_4set, ClassSet, FourClass};
use crate::error::Result;
use crate::indep::{asymmetry_scan, asymmetry_witness, conant_triviality_report};
use crate::solver::{count_completions, random_in_class, solve, ConstraintSet, Term};
use crate::structure::{
    encode, keys, triple_count, Hypertournament, LinearOrder, Orientation, PartialHypertournament,
    PointId,
};
use crate::witness;

pub const SEED: u64 = 20_240_917;
pub const A1_STRUCTURES: usize = 200;
pub const A1_MAX_POINTS: usize = 8;
pub const A3_INSTANCES: usize = 500;
pub const A3_MAX_BASE: usize = 5;
pub const A4_POINTS: usize = 12;
pub const A4_DEPTH: usize = 3;
pub const A4_TIME_LIMIT: Duration = Duration::from_secs(60);
pub const A5_CHAIN: usize = 6;
pub const A5_SPACE: u64 = 1024;
pub const A8_FOUR_SETS: usize = 4845;
pub const A10_INSTANCES: usize = 50;
pub const A12_CASE2: usize = 100;
pub const A12_CASE1: usize = 20;
pub const A13_SYSTEMS: usize = 300;
pub const SUITE_TIME_LIMIT: Duration = Duration::from_secs(300);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub id: &'static str,
    pub passed: bool,
    pub summary: String,
    pub elapsed: Duration,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} ({:.2}s) {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.elapsed.as_secs_f64(),
            self.summary
        )
    }
}

pub struct Criterion {
    pub id: &'static str,
    pub title: &'static str,
    check: fn() -> Result<(bool, String)>,
}

impl Criterion {
    pub fn run(&self) -> Verdict {
        let start = Instant::now();
        let (passed, summary) = match (self.check)() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        Verdict {
            id: self.id,
            passed,
            summary,
            elapsed: start.elapsed(),
        }
    }
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: "A1",
            title: "axioms",
            check: a1_axioms,
        },
        Criterion {
            id: "A2",
            title: "parity and classification",
            check: a2_classification,
        },
        Criterion {
            id: "A3",
            title: "one-point amalgamation",
            check: a3_amalgamation,
        },
        Criterion {
            id: "A4",
            title: "extension property",
            check: a4_extension,
        },
        Criterion {
            id: "A5",
            title: "SOP3",
            check: a5_sop3,
        },
        Criterion {
            id: "A6",
            title: "TP2",
            check: a6_tp2,
        },
        Criterion {
            id: "A7",
            title: "NSOP4 cycle",
            check: a7_nsop4,
        },
        Criterion {
            id: "A8",
            title: "IP2",
            check: a8_ip2,
        },
        Criterion {
            id: "A9",
            title: "ht asymmetry",
            check: a9_asymmetry,
        },
        Criterion {
            id: "A10",
            title: "Kim-triviality",
            check: a10_kim,
        },
        Criterion {
            id: "A11",
            title: "empty-base obstruction",
            check: a11_obstruction,
        },
        Criterion {
            id: "A12",
            title: "WEI exchange claim",
            check: a12_claim1,
        },
        Criterion {
            id: "A13",
            title: "oracle equivalence",
            check: a13_oracle,
        },
    ]
}

pub fn criterion(id: &str) -> Option<Criterion> {
    criteria()
        .into_iter()
        .find(|c| c.id.eq_ignore_ascii_case(id))
}

/// Runs every criterion, in parallel when `threads > 1`; verdicts come back in id order.
pub fn run_all(threads: usize) -> Vec<Verdict> {
    let all = criteria();
    if threads <= 1 {
        return all.iter().map(Criterion::run).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<Option<Verdict>>> =
        all.iter().map(|_| std::sync::Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= all.len() {
                    break;
                }
                *slots[i].lock().unwrap() = Some(all[i].run());
            });
        }
    });
    slots
        .into_iter()
        .map(|m| m.into_inner().unwrap().expect("every slot ran"))
        .collect()
}

// Oracles

/// `R(a, b, c)` straight from the stored bit and the parity of the sort.
fn oracle_r(h: &Hypertournament, a: PointId, b: PointId, c: PointId) -> bool {
    let mut v = [a, b, c];
    let mut swaps = 0;
    for i in 0..3 {
        for j in 0..2 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                swaps += 1;
            }
        }
    }
    let key = crate::structure::TripleKey::new(v[0], v[1], v[2]).expect("distinct");
    h.orientation(key).is_plus() ^ (swaps % 2 == 1)
}

fn oracle_is_h4(h: &Hypertournament, s: [PointId; 4]) -> bool {
    permutations4(s).iter().any(|&[a, b, c, d]| {
        oracle_r(h, a, b, c) && oracle_r(h, a, c, d) && oracle_r(h, a, d, b) && oracle_r(h, b, d, c)
    })
}

fn oracle_h4_free(h: &Hypertournament) -> bool {
    let n = h.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    if oracle_is_h4(h, [a, b, c, d]) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn permutations4(s: [PointId; 4]) -> Vec<[PointId; 4]> {
    let mut out = Vec::with_capacity(24);
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    if i != j && i != k && i != l && j != k && j != l && k != l {
                        out.push([s[i], s[j], s[k], s[l]]);
                    }
                }
            }
        }
    }
    out
}

/// Edges of the encoding under `order`, as position triples.
fn encoded_positions(h: &Hypertournament, order: &[PointId; 4]) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            for k in j + 1..4 {
                if oracle_r(h, order[i], order[j], order[k]) {
                    out.push([i, j, k]);
                }
            }
        }
    }
    out
}

fn shared_pair(e: &[[usize; 3]]) -> Option<(usize, usize)> {
    if e.len() != 2 {
        return None;
    }
    let common: Vec<usize> = e[0].iter().copied().filter(|p| e[1].contains(p)).collect();
    (common.len() == 2).then(|| (common[0], common[1]))
}

/// Two edges meeting in positions with exactly one position strictly between.
fn h4_shape(e: &[[usize; 3]]) -> bool {
    shared_pair(e).is_some_and(|(a, b)| b - a == 2)
}

/// No edges, all four, or two edges meeting in a pair adjacent around the order.
fn c4_shape(e: &[[usize; 3]]) -> bool {
    e.is_empty() || e.len() == 4 || shared_pair(e).is_some_and(|(a, b)| b - a == 1 || b - a == 3)
}

// Criteria

fn a1_axioms() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checked = 0u64;
    let mut violations = 0u64;
    for _ in 0..A1_STRUCTURES {
        let n = rng.gen_range(3..=A1_MAX_POINTS);
        let h = Hypertournament::random(n, &mut rng);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if a == b || b == c || a == c {
                        continue;
                    }
                    checked += 1;
                    let v = h.eval_r(a, b, c)?;
                    let ok = v == h.eval_r(b, c, a)?
                        && v == h.eval_r(c, a, b)?
                        && v == !h.eval_r(a, c, b)?
                        && v == oracle_r(&h, a, b, c);
                    violations += u64::from(!ok);
                }
            }
        }
    }
    Ok((
        violations == 0,
        format!(
            "{checked} ordered triples over {A1_STRUCTURES} structures, {violations} violations"
        ),
    ))
}

fn a2_classification() -> Result<(bool, String)> {
    let orders = permutations4([0, 1, 2, 3]);
    let mut disagreements = 0;
    let mut tally = [0usize; 3];
    for pattern in 0u8..16 {
        let h =
            Hypertournament::from_fn(4, |k| Orientation::from_bool(pattern >> k.index() & 1 == 1));
        let class = classify_4set(&h, &[0, 1, 2, 3])?;
        tally[class as usize] += 1;
        let encodings: Vec<Vec<[usize; 3]>> =
            orders.iter().map(|o| encoded_positions(&h, o)).collect();
        let parity = encodings[0].len() % 2;
        let parity_stable = encodings.iter().all(|e| e.len() % 2 == parity);
        let odd = parity == 1;
        let h4 = encodings.iter().all(|e| h4_shape(e));
        let c4 = encodings.iter().any(|e| e.len() == 4) && encodings.iter().all(|e| c4_shape(e));
        let brute_h4 = oracle_is_h4(&h, [0, 1, 2, 3]);
        // the lexicographic library encoding agrees with the positional one
        let lib_edges = encode(&h, &LinearOrder::natural(4))?.edge_count();
        let members = [c4, odd, h4].iter().filter(|&&x| x).count();
        let expected = if odd {
            FourClass::O4
        } else if h4 {
            FourClass::H4
        } else {
            FourClass::C4
        };
        let ok = parity_stable
            && members == 1
            && brute_h4 == h4
            && class == expected
            && lib_edges == encodings[0].len()
            && encodings.iter().all(|e| brute_h4 == h4_shape(e));
        disagreements += usize::from(!ok);
    }
    let counts_ok = tally == [6, 8, 2];
    Ok((
        disagreements == 0 && counts_ok,
        format!(
            "16 patterns x 24 orders, {disagreements} disagreements, C4/O4/H4 = {}/{}/{}",
            tally[0], tally[1], tally[2]
        ),
    ))
}

fn random_admissible_type(h: &Hypertournament, rng: &mut ChaCha8Rng) -> Result<OnePointType> {
    let all: Vec<PointId> = h.points().collect();
    let types = enumerate_one_point_types(h, &all, ClassSet::H4_FREE)?;
    Ok(types[rng.gen_range(0..types.len())].clone())
}

fn a3_amalgamation() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut failures = 0;
    for _ in 0..A3_INSTANCES {
        let n = rng.gen_range(1..=A3_MAX_BASE);
        let a = random_in_class(n, ClassSet::H4_FREE, rng.gen())?;
        let t1 = random_admissible_type(&a, &mut rng)?;
        let t2 = random_admissible_type(&a, &mut rng)?;
        let c = amalgamate_one_point(&a, &t1, &t2)?;
        let (b1, b2) = (n, n + 1);
        let ok = c.len() == n + 2
            && c.restrict(&(0..n).collect::<Vec<_>>()) == a
            && t1.realized_by(&c, b1)
            && t2.realized_by(&c, b2)
            && (0..n).all(|p| oracle_r(&c, b1, b2, p))
            && oracle_h4_free(&c);
        failures += usize::from(!ok);
    }
    Ok((
        failures == 0,
        format!("{A3_INSTANCES} instances, {failures} failures"),
    ))
}

/// Admissible depth-`k` types left unrealized, by direct enumeration.
fn oracle_extension_gaps(h: &Hypertournament, k: usize) -> (usize, usize) {
    let n = h.len();
    let mut required = 0;
    let mut missing = 0;
    let mut subsets: Vec<Vec<PointId>> = vec![vec![]];
    for size in 1..=k {
        let mut next = Vec::new();
        for s in subsets.iter().filter(|s| s.len() == size - 1) {
            for p in s.last().map_or(0, |&l| l + 1)..n {
                let mut t = s.clone();
                t.push(p);
                next.push(t);
            }
        }
        subsets.extend(next);
    }
    for s in &subsets {
        let pairs: Vec<(PointId, PointId)> = s
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| s[i + 1..].iter().map(move |&b| (a, b)))
            .collect();
        let local = h.restrict(s);
        for mask in 0u32..1 << pairs.len() {
            let mut ext = local.clone();
            let x = ext.grow(1).start;
            for (bit, &(a, b)) in pairs.iter().enumerate() {
                let (ia, ib) = (
                    s.iter().position(|&q| q == a).unwrap(),
                    s.iter().position(|&q| q == b).unwrap(),
                );
                ext.set_r(x, ia, ib, mask >> bit & 1 == 1);
            }
            if !oracle_h4_free(&ext) {
                continue;
            }
            required += 1;
            let realized = (0..n).filter(|p| !s.contains(p)).any(|p| {
                pairs
                    .iter()
                    .enumerate()
                    .all(|(bit, &(a, b))| oracle_r(h, p, a, b) == (mask >> bit & 1 == 1))
            });
            missing += usize::from(!realized);
        }
    }
    (required, missing)
}

fn a4_extension() -> Result<(bool, String)> {
    let start = Instant::now();
    let built = build_generic(A4_POINTS, ClassSet::H4_FREE, A4_DEPTH, SEED)?;
    let elapsed = start.elapsed();
    let (required, missing) = oracle_extension_gaps(&built.structure, A4_DEPTH);
    let ok = missing == 0
        && built.gaps.is_empty()
        && built.required == required
        && oracle_h4_free(&built.structure)
        && elapsed < A4_TIME_LIMIT;
    Ok((
        ok,
        format!(
            "{} points, {}/{required} admissible types over <=3-subsets realized, build {:.2}s",
            built.structure.len(),
            required - missing,
            elapsed.as_secs_f64()
        ),
    ))
}

fn a5_sop3() -> Result<(bool, String)> {
    let cycle = witness::sop3_cycle_check()?;
    let mut cs = ConstraintSet::new();
    let x = cs.vars("x", 3);
    for i in 0..3 {
        cs.r(x[i], x[(i + 1) % 3], Term::Point(0));
        cs.r(x[i], Term::Point(1), x[(i + 1) % 3]);
    }
    let count = count_completions(
        &PartialHypertournament::new(2),
        &cs,
        ClassSet::H4_FREE,
        u64::MAX,
    )?;
    let (w, chain) = witness::sop3_build(A5_CHAIN)?;
    let mut pairs = 0;
    for (i, &ci) in w.chain.iter().enumerate() {
        for &cj in &w.chain[i + 1..] {
            pairs += usize::from(
                oracle_r(&w.structure, ci, cj, w.a) && oracle_r(&w.structure, ci, w.b, cj),
            );
        }
    }
    let ok = cycle.passed
        && count.satisfying == 0
        && count.space == A5_SPACE
        && chain.passed
        && pairs == A5_CHAIN * (A5_CHAIN - 1) / 2
        && oracle_h4_free(&w.structure);
    Ok((
        ok,
        format!(
            "cycle {}/{} completions, chain of {A5_CHAIN}: {pairs}/15 phi-pairs",
            count.satisfying, count.space
        ),
    ))
}

fn a6_tp2() -> Result<(bool, String)> {
    let (w, report) = witness::tp2_build(3, 4)?;
    let unsat_pairs = report
        .details
        .iter()
        .filter(|d| d.starts_with("ok: row") && d.ends_with("UNSAT"))
        .count();
    let paths = report.details.iter().any(|d| d == "ok: 64/64 paths SAT");
    let ok = report.passed && unsat_pairs == 18 && paths && oracle_h4_free(&w.structure);
    Ok((
        ok,
        format!(
            "{unsat_pairs}/18 row pairs UNSAT, all 64 paths SAT: {paths}, {} solver calls",
            report.solver_calls
        ),
    ))
}

fn a7_nsop4() -> Result<(bool, String)> {
    let mut verified = 0;
    let mut total = 0;
    for eps in [[true], [false]] {
        total += 1;
        let input = witness::nsop4_make_input(1, 1, &eps, SEED)?;
        verified += usize::from(witness::nsop4_build_cycle(&input)?.passed);
    }
    let sweep = witness::nsop4_sweep(1, 2, None, SEED)?;
    let n2 = sweep
        .details
        .iter()
        .filter(|d| d.ends_with(" PASS"))
        .count();
    total += 16;
    verified += n2;
    Ok((
        verified == total && sweep.passed,
        format!("{verified}/{total} cycles verified (m=n=1: 2, n=2: 16 patterns)"),
    ))
}

fn a8_ip2() -> Result<(bool, String)> {
    let (w, report) = witness::ip2_build(2)?;
    let h = &w.structure;
    let mut four_sets = 0;
    let mut h4 = 0;
    crate::classify::for_each_4set(h.len(), |s| {
        four_sets += 1;
        h4 += usize::from(oracle_is_h4(h, s));
        true
    });
    let mut pattern_ok = 0;
    for s in 0..16u64 {
        let good = (0..2).all(|i| {
            (0..2).all(|j| oracle_r(h, w.x(0, i), w.x(1, j), w.y(s)) == (s >> (2 * i + j) & 1 == 1))
        });
        pattern_ok += usize::from(good);
    }
    let ok =
        report.passed && h.len() == 20 && four_sets == A8_FOUR_SETS && h4 == 0 && pattern_ok == 16;
    Ok((
        ok,
        format!(
            "{} points, {four_sets} 4-subsets with {h4} H4, {pattern_ok}/16 subsets realized",
            h.len()
        ),
    ))
}

fn a9_asymmetry() -> Result<(bool, String)> {
    let (_, witness) = asymmetry_witness();
    let scan = asymmetry_scan(5)?;
    Ok((
        witness.passed && scan.passed,
        format!(
            "witness {}, scan over {} structures {}",
            witness.status(),
            scan.completions_checked,
            scan.status()
        ),
    ))
}

fn a10_kim() -> Result<(bool, String)> {
    let r = conant_triviality_report(A10_INSTANCES, 4, 2, 4, SEED)?;
    let survived = r
        .details
        .iter()
        .filter(|d| d.starts_with("kim-survival") && d.ends_with("PASS"))
        .count();
    Ok((
        r.passed && survived == A10_INSTANCES,
        format!("{survived}/{A10_INSTANCES} instances SAT"),
    ))
}

fn a11_obstruction() -> Result<(bool, String)> {
    let r = witness::empty_base_obstruction()?;
    let mut cs = ConstraintSet::new();
    let x = cs.var("x");
    cs.r(x, Term::Point(0), Term::Point(1));
    cs.r(x, Term::Point(1), Term::Point(0));
    let direct = !solve(&PartialHypertournament::new(2), &cs)?.is_sat();
    Ok((
        r.passed && direct,
        format!("2-literal system UNSAT: {direct}, report {}", r.status()),
    ))
}

fn a12_claim1() -> Result<(bool, String)> {
    let case2 = witness::claim1_sweep(false, A12_CASE2, 4, SEED)?;
    let case1 = witness::claim1_sweep(true, A12_CASE1, 4, SEED ^ 1)?;
    let pair = witness::tp2_pair_claim_check()?;
    let count = |r: &crate::report::WitnessReport| {
        r.details.iter().filter(|d| d.ends_with(" PASS")).count()
    };
    let (c2, c1) = (count(&case2), count(&case1));
    Ok((
        case2.passed && case1.passed && pair.passed && c2 == A12_CASE2 && c1 == A12_CASE1,
        format!(
            "case 2: {c2}/{A12_CASE2}, case 1: {c1}/{A12_CASE1}, pair analogue UNSAT: {}",
            pair.passed
        ),
    ))
}

/// A random system with at most 25 free triples.
pub fn random_small_system(rng: &mut ChaCha8Rng) -> (PartialHypertournament, ConstraintSet) {
    let n_base = rng.gen_range(0..=5);
    let n_vars = rng.gen_range(0..=2).min(7 - n_base);
    let total = n_base + n_vars;
    let mut base = PartialHypertournament::new(n_base);
    for key in keys(n_base) {
        if rng.gen_bool(0.6) {
            base.assign(key, Orientation::from_bool(rng.gen()))
                .expect("fresh key");
        }
    }
    // keep the enumeration within budget
    let free = |b: &PartialHypertournament| triple_count(total) - b.assigned().count();
    let mut pending: Vec<_> = base.unassigned().collect();
    while free(&base) > 25 {
        let key = pending.pop().expect("base triples remain");
        base.assign(key, Orientation::from_bool(rng.gen()))
            .expect("fresh key");
    }
    let mut cs = ConstraintSet::new();
    let vars = cs.vars("v", n_vars);
    if total >= 3 {
        for _ in 0..rng.gen_range(0..=6) {
            let mut pick = || {
                let i = rng.gen_range(0..total);
                if i < n_base {
                    Term::Point(i)
                } else {
                    vars[i - n_base]
                }
            };
            let (a, b, c) = (pick(), pick(), pick());
            if a != b && b != c && a != c {
                cs.require(a, b, c, rng.gen());
            }
        }
    }
    (base, cs)
}

fn a13_oracle() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 13);
    let mut agree = 0;
    let mut sat = 0;
    for _ in 0..A13_SYSTEMS {
        let (base, cs) = random_small_system(&mut rng);
        let solved = solve(&base, &cs)?.is_sat();
        let counted = count_completions(&base, &cs, ClassSet::H4_FREE, 1)?.satisfying > 0;
        agree += usize::from(solved == counted);
        sat += usize::from(solved);
    }
    Ok((
        agree == A13_SYSTEMS,
        format!("{agree}/{A13_SYSTEMS} agree ({sat} SAT)"),
    ))
}

/// Whole-suite check of the overall time budget.
pub fn within_budget(verdicts: &[Verdict]) -> bool {
    verdicts.iter().map(|v| v.elapsed).sum::<Duration>() < SUITE_TIME_LIMIT
}
