//! Completion of partial 3-hypertournaments under signed R-literals.
//!
//! [`solve`] decides whether a partial structure plus a [`ConstraintSet`]
//! extends to a total structure whose 4-subsets all lie in a class set (H4-free
//! by default). The search is depth-first over the unset triples in
//! lexicographic key order with `Plus` tried first, and it propagates every
//! 4-subset that has at most one unset triple left. No learning, no restarts:
//! identical inputs give identical models.
//!
//! [`count_completions`] is a plain enumeration over all orientations of the
//! free triples and shares none of the search machinery.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::amalgam::OnePointType;
use crate::classify::{class_table, classify_4set, ClassSet};
use crate::error::{Error, Result};
use crate::qftype::{QfType, Slot};
use crate::structure::{
    keys, orientation_for, sort3, triple_count, Hypertournament, Orientation,
    PartialHypertournament, PointId, TripleKey,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Term {
    /// A point of the base structure.
    Point(PointId),
    /// The `i`-th declared variable.
    Var(usize),
}

/// `R(args)` if `holds`, otherwise `¬R(args)`, in the written argument order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub args: [Term; 3],
    pub holds: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    vars: Vec<String>,
    literals: Vec<Literal>,
}

impl ConstraintSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a fresh variable.
    pub fn var(&mut self, name: impl Into<String>) -> Term {
        self.vars.push(name.into());
        Term::Var(self.vars.len() - 1)
    }

    pub fn vars(&mut self, prefix: &str, count: usize) -> Vec<Term> {
        (0..count)
            .map(|i| self.var(format!("{prefix}{i}")))
            .collect()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn require(&mut self, a: Term, b: Term, c: Term, holds: bool) {
        self.literals.push(Literal {
            args: [a, b, c],
            holds,
        });
    }

    /// Shorthand for a positive literal.
    pub fn r(&mut self, a: Term, b: Term, c: Term) {
        self.require(a, b, c, true);
    }

    pub fn push(&mut self, lit: Literal) {
        self.literals.push(lit);
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// Adds every atom of `ty` with its slots mapped through `bind`.
    pub fn require_type(&mut self, ty: &QfType, mut bind: impl FnMut(Slot) -> Term) {
        for (slots, holds) in ty.atoms() {
            let [a, b, c] = slots.map(&mut bind);
            self.require(a, b, c, *holds);
        }
    }
}

/// A satisfying total structure. Base points keep their ids; variable `i`
/// is the point `assignment[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub structure: Hypertournament,
    pub assignment: Vec<PointId>,
}

impl Model {
    pub fn point(&self, t: Term) -> PointId {
        match t {
            Term::Point(p) => p,
            Term::Var(i) => self.assignment[i],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Unsat {
    /// Two requirements orient the same triple in opposite ways. `None`
    /// stands for the base structure.
    Conflict {
        first: Option<usize>,
        second: usize,
        triple: TripleKey,
    },
    /// The assigned part of the base already contains a forbidden 4-subset.
    Base([PointId; 4]),
    /// The search space was exhausted.
    Exhausted,
}

impl fmt::Display for Unsat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unsat::Conflict {
                first: Some(i),
                second,
                triple,
            } => write!(
                f,
                "literals {i} and {second} disagree on triple {{{triple}}}"
            ),
            Unsat::Conflict {
                first: None,
                second,
                triple,
            } => write!(
                f,
                "literal {second} contradicts the base on triple {{{triple}}}"
            ),
            Unsat::Base(s) => write!(f, "base contains a forbidden 4-set {s:?}"),
            Unsat::Exhausted => write!(f, "search exhausted"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Sat(Model),
    Unsat(Unsat),
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveOutcome::Sat(_))
    }

    pub fn model(&self) -> Option<&Model> {
        match self {
            SolveOutcome::Sat(m) => Some(m),
            SolveOutcome::Unsat(_) => None,
        }
    }

    pub fn into_model(self) -> Option<Model> {
        match self {
            SolveOutcome::Sat(m) => Some(m),
            SolveOutcome::Unsat(_) => None,
        }
    }
}

/// Which value a decision tries first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    PlusFirst,
    /// A fixed pseudo-random first value per triple, drawn from the seed.
    Seeded(u64),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub decisions: u64,
    pub conflicts: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Solver {
    pub class: ClassSet,
    pub phase: Phase,
}

impl Default for Solver {
    fn default() -> Self {
        Solver {
            class: ClassSet::H4_FREE,
            phase: Phase::PlusFirst,
        }
    }
}

/// Completes `base` under `cs` to a total H4-free structure.
pub fn solve(base: &PartialHypertournament, cs: &ConstraintSet) -> Result<SolveOutcome> {
    Solver::default().solve(base, cs)
}

/// [`solve`] over a total base structure.
pub fn solve_over(base: &Hypertournament, cs: &ConstraintSet) -> Result<SolveOutcome> {
    Solver::default().solve(&base.to_partial(), cs)
}

impl Solver {
    pub fn new(class: ClassSet) -> Self {
        Solver {
            class,
            phase: Phase::PlusFirst,
        }
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn solve(&self, base: &PartialHypertournament, cs: &ConstraintSet) -> Result<SolveOutcome> {
        self.solve_with_stats(base, cs).map(|(o, _)| o)
    }

    pub fn solve_with_stats(
        &self,
        base: &PartialHypertournament,
        cs: &ConstraintSet,
    ) -> Result<(SolveOutcome, SolveStats)> {
        let n_base = base.len();
        let total = n_base + cs.vars.len();
        let resolved = resolve_literals(cs, n_base)?;

        let mut search = Search::new(total, self.class);
        let mut source: Vec<Option<usize>> = vec![None; triple_count(total)];
        for (key, o) in base.assigned() {
            search.vals[key.index()] = value_of(o);
        }
        for (i, pts) in resolved.iter().enumerate() {
            let (key, o) = orientation_for(pts[0], pts[1], pts[2], cs.literals[i].holds);
            let idx = key.index();
            let v = value_of(o);
            match search.vals[idx] {
                0 => {
                    search.vals[idx] = v;
                    source[idx] = Some(i);
                }
                cur if cur == v => {}
                _ => {
                    let unsat = Unsat::Conflict {
                        first: source[idx],
                        second: i,
                        triple: key,
                    };
                    return Ok((SolveOutcome::Unsat(unsat), SolveStats::default()));
                }
            }
        }

        if let Some(s) = search.base_violation(n_base) {
            return Ok((SolveOutcome::Unsat(Unsat::Base(s)), SolveStats::default()));
        }

        let order: Vec<usize> = keys(total)
            .map(|k| k.index())
            .filter(|&i| search.vals[i] == 0)
            .collect();
        let first: Vec<u8> = match self.phase {
            Phase::PlusFirst => vec![PLUS; order.len()],
            Phase::Seeded(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                order
                    .iter()
                    .map(|_| if rng.gen() { PLUS } else { MINUS })
                    .collect()
            }
        };
        for i in 0..search.vals.len() {
            if search.vals[i] != 0 {
                search.trail.push(i);
            }
        }

        let found = search.run(&order, &first);
        let stats = search.stats;
        if !found {
            return Ok((SolveOutcome::Unsat(Unsat::Exhausted), stats));
        }

        let structure = Hypertournament::from_fn(total, |k| {
            Orientation::from_bool(search.vals[k.index()] == PLUS)
        });
        let model = Model {
            structure,
            assignment: (n_base..total).collect(),
        };
        verify_model(base, cs, &model, self.class);
        Ok((SolveOutcome::Sat(model), stats))
    }
}

fn resolve_literals(cs: &ConstraintSet, n_base: usize) -> Result<Vec<[PointId; 3]>> {
    let point = |t: Term| -> Result<PointId> {
        match t {
            Term::Point(p) if p < n_base => Ok(p),
            Term::Point(p) => Err(Error::PointOutOfRange {
                point: p,
                n: n_base,
            }),
            Term::Var(i) if i < cs.vars.len() => Ok(n_base + i),
            Term::Var(i) => Err(Error::UnknownName(format!("variable #{i}"))),
        }
    };
    cs.literals
        .iter()
        .map(|lit| {
            let [a, b, c] = lit.args;
            let pts = [point(a)?, point(b)?, point(c)?];
            if pts[0] == pts[1] || pts[1] == pts[2] || pts[0] == pts[2] {
                return Err(Error::RepeatedPoint(pts[0], pts[1], pts[2]));
            }
            Ok(pts)
        })
        .collect()
}

/// Panics if a claimed model is not a valid completion. Runs on every SAT return.
fn verify_model(base: &PartialHypertournament, cs: &ConstraintSet, model: &Model, class: ClassSet) {
    let h = &model.structure;
    for (key, o) in base.assigned() {
        assert_eq!(h.orientation(key), o, "model disagrees with base at {key}");
    }
    for lit in &cs.literals {
        let [a, b, c] = lit.args.map(|t| model.point(t));
        assert_eq!(h.r(a, b, c), lit.holds, "model violates literal {lit:?}");
    }
    assert!(
        crate::classify::in_constrained_class(h, class),
        "model leaves class {class}"
    );
}

const PLUS: u8 = 1;
const MINUS: u8 = 2;

fn value_of(o: Orientation) -> u8 {
    if o.is_plus() {
        PLUS
    } else {
        MINUS
    }
}

#[inline]
fn idx3(i: usize, j: usize, k: usize) -> usize {
    triple_count(k) + j * (j - 1) / 2 + i
}

struct Search {
    n: usize,
    vals: Vec<u8>,
    keys: Vec<[usize; 3]>,
    trail: Vec<usize>,
    head: usize,
    allowed: [bool; 16],
    stats: SolveStats,
}

struct Decision {
    mark: usize,
    pos: usize,
    flipped: bool,
}

impl Search {
    fn new(n: usize, class: ClassSet) -> Self {
        let table = class_table();
        let mut allowed = [false; 16];
        for (p, a) in allowed.iter_mut().enumerate() {
            *a = class.contains(table[p]);
        }
        let mut keys_by_index = vec![[0; 3]; triple_count(n)];
        for k in keys(n) {
            keys_by_index[k.index()] = k.points();
        }
        Search {
            n,
            vals: vec![0; triple_count(n)],
            keys: keys_by_index,
            trail: Vec::new(),
            head: 0,
            allowed,
            stats: SolveStats::default(),
        }
    }

    /// A forbidden 4-subset among fully assigned base 4-subsets.
    fn base_violation(&self, n_base: usize) -> Option<[PointId; 4]> {
        let mut found = None;
        crate::classify::for_each_4set(n_base, |s| {
            let idx = four_indices(s);
            if idx.iter().all(|&i| self.vals[i] != 0) && !self.allowed[self.pattern(&idx) as usize]
            {
                found = Some(s);
                return false;
            }
            true
        });
        found
    }

    #[inline]
    fn pattern(&self, idx: &[usize; 4]) -> u8 {
        idx.iter()
            .enumerate()
            .fold(0, |acc, (b, &i)| acc | ((self.vals[i] == PLUS) as u8) << b)
    }

    fn assign(&mut self, idx: usize, v: u8) {
        debug_assert_eq!(self.vals[idx], 0);
        self.vals[idx] = v;
        self.trail.push(idx);
    }

    fn undo_to(&mut self, mark: usize) {
        for &i in &self.trail[mark..] {
            self.vals[i] = 0;
        }
        self.trail.truncate(mark);
        self.head = mark;
    }

    /// Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.head < self.trail.len() {
            let t = self.trail[self.head];
            self.head += 1;
            let [a, b, c] = self.keys[t];
            for l in 0..self.n {
                if l == a || l == b || l == c {
                    continue;
                }
                let (s3, _) = sort3(a, b, c);
                let s = insert_sorted(s3, l);
                let idx = four_indices(s);
                let mut unset = None;
                let mut count = 0;
                for (pos, &i) in idx.iter().enumerate() {
                    if self.vals[i] == 0 {
                        unset = Some(pos);
                        count += 1;
                    }
                }
                match (count, unset) {
                    (0, _) => {
                        if !self.allowed[self.pattern(&idx) as usize] {
                            return false;
                        }
                    }
                    (1, Some(pos)) => {
                        let p = self.pattern(&idx);
                        let plus_ok = self.allowed[(p | 1 << pos) as usize];
                        let minus_ok = self.allowed[p as usize];
                        match (plus_ok, minus_ok) {
                            (false, false) => return false,
                            (true, false) => self.assign(idx[pos], PLUS),
                            (false, true) => self.assign(idx[pos], MINUS),
                            (true, true) => {}
                        }
                    }
                    _ => {}
                }
            }
        }
        true
    }

    fn run(&mut self, order: &[usize], first: &[u8]) -> bool {
        let mut decisions: Vec<Decision> = Vec::new();
        if !self.propagate() {
            return false;
        }
        let mut pos = 0;
        loop {
            while pos < order.len() && self.vals[order[pos]] != 0 {
                pos += 1;
            }
            if pos == order.len() {
                return true;
            }
            decisions.push(Decision {
                mark: self.trail.len(),
                pos,
                flipped: false,
            });
            self.stats.decisions += 1;
            self.assign(order[pos], first[pos]);
            while !self.propagate() {
                self.stats.conflicts += 1;
                loop {
                    let Some(d) = decisions.last_mut() else {
                        return false;
                    };
                    let (mark, dpos) = (d.mark, d.pos);
                    if !d.flipped {
                        d.flipped = true;
                        self.undo_to(mark);
                        self.assign(order[dpos], PLUS + MINUS - first[dpos]);
                        pos = dpos;
                        break;
                    }
                    decisions.pop();
                }
            }
        }
    }
}

#[inline]
fn insert_sorted([a, b, c]: [usize; 3], l: usize) -> [usize; 4] {
    if l < a {
        [l, a, b, c]
    } else if l < b {
        [a, l, b, c]
    } else if l < c {
        [a, b, l, c]
    } else {
        [a, b, c, l]
    }
}

/// Colex indices of the triples `abc, abd, acd, bcd` of a sorted 4-set.
#[inline]
fn four_indices([a, b, c, d]: [usize; 4]) -> [usize; 4] {
    [idx3(a, b, c), idx3(a, b, d), idx3(a, c, d), idx3(b, c, d)]
}

pub const MAX_ENUMERATED_TRIPLES: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletionCount {
    /// Satisfying completions found, truncated at the cap.
    pub satisfying: u64,
    /// Orientations enumerated before stopping.
    pub enumerated: u64,
    /// `2^free`.
    pub space: u64,
}

/// Counts satisfying completions in `class` by enumerating every orientation
/// of the free triples.
pub fn count_completions(
    base: &PartialHypertournament,
    cs: &ConstraintSet,
    class: ClassSet,
    cap: u64,
) -> Result<CompletionCount> {
    let n_base = base.len();
    let total = n_base + cs.var_names().len();
    let free: Vec<TripleKey> = keys(total)
        .filter(|k| k.top() >= n_base || base.get(*k).is_none())
        .collect();
    if free.len() > MAX_ENUMERATED_TRIPLES {
        return Err(Error::Budget(format!(
            "{} free triples exceed the enumeration limit of {MAX_ENUMERATED_TRIPLES}",
            free.len()
        )));
    }
    let resolve = |t: Term| -> Result<PointId> {
        match t {
            Term::Point(p) if p < n_base => Ok(p),
            Term::Point(p) => Err(Error::PointOutOfRange {
                point: p,
                n: n_base,
            }),
            Term::Var(i) if i < cs.var_names().len() => Ok(n_base + i),
            Term::Var(i) => Err(Error::UnknownName(format!("variable #{i}"))),
        }
    };
    let mut lits = Vec::with_capacity(cs.len());
    for lit in cs.literals() {
        let [a, b, c] = lit.args;
        let pts = [resolve(a)?, resolve(b)?, resolve(c)?];
        if pts[0] == pts[1] || pts[1] == pts[2] || pts[0] == pts[2] {
            return Err(Error::RepeatedPoint(pts[0], pts[1], pts[2]));
        }
        lits.push((pts, lit.holds));
    }

    if triple_count(total) <= 64 {
        return Ok(count_packed(total, base, &free, &lits, class, cap));
    }
    let mut h = Hypertournament::new(total);
    for (key, o) in base.assigned() {
        h.set(key, o);
    }
    let space = 1u64 << free.len();
    let mut count = CompletionCount {
        satisfying: 0,
        enumerated: 0,
        space,
    };
    for mask in 0..space {
        for (bit, key) in free.iter().enumerate() {
            h.set(*key, Orientation::from_bool(mask >> bit & 1 == 1));
        }
        count.enumerated += 1;
        if !lits
            .iter()
            .all(|([a, b, c], holds)| h.r(*a, *b, *c) == *holds)
        {
            continue;
        }
        let mut in_class = true;
        crate::classify::for_each_4set(total, |s| {
            in_class = class.contains(classify_4set(&h, &s).expect("distinct points"));
            in_class
        });
        if in_class {
            count.satisfying += 1;
            if count.satisfying >= cap {
                break;
            }
        }
    }
    Ok(count)
}

/// Same enumeration with the whole structure packed into one word, visiting
/// orientations in Gray-code order so each step flips a single triple.
fn count_packed(
    total: usize,
    base: &PartialHypertournament,
    free: &[TripleKey],
    lits: &[([PointId; 3], bool)],
    class: ClassSet,
    cap: u64,
) -> CompletionCount {
    let mut state = 0u64;
    for (key, o) in base.assigned() {
        if o.is_plus() {
            state |= 1 << key.index();
        }
    }
    // each literal pins one bit: R(a,b,c) holds iff the sorted bit differs from the sort parity
    let (mut lit_mask, mut lit_val) = (0u64, 0u64);
    let mut contradictory = false;
    for &([a, b, c], holds) in lits {
        let (sorted, odd) = crate::structure::sort3(a, b, c);
        let bit = 1u64 << idx3(sorted[0], sorted[1], sorted[2]);
        let want = if holds ^ odd { bit } else { 0 };
        if lit_mask & bit != 0 && lit_val & bit != want {
            contradictory = true;
        }
        lit_mask |= bit;
        lit_val |= want;
    }
    let table = crate::classify::class_table();
    let mut quads = Vec::new();
    crate::classify::for_each_4set(total, |s| {
        quads.push(four_indices(s));
        true
    });
    let in_class = |st: u64| {
        quads.iter().all(|q| {
            let pattern = q
                .iter()
                .enumerate()
                .fold(0usize, |acc, (i, &t)| acc | ((st >> t & 1) as usize) << i);
            class.contains(table[pattern])
        })
    };
    let space = 1u64 << free.len();
    let mut count = CompletionCount {
        satisfying: 0,
        enumerated: 0,
        space,
    };
    let flips: Vec<u64> = free.iter().map(|k| 1u64 << k.index()).collect();
    for step in 0..space {
        if step > 0 {
            state ^= flips[step.trailing_zeros() as usize];
        }
        count.enumerated += 1;
        if contradictory || state & lit_mask != lit_val || !in_class(state) {
            continue;
        }
        count.satisfying += 1;
        if count.satisfying >= cap {
            break;
        }
    }
    count
}

/// Adds one point `x` with `R(x, a, b) = t(a, b)` for every pair of points of
/// `h`. Returns `None` when the result is not H4-free.
pub fn extend_by_point(h: &Hypertournament, t: &OnePointType) -> Result<Option<Hypertournament>> {
    extend_by_point_in(h, t, ClassSet::H4_FREE)
}

pub fn extend_by_point_in(
    h: &Hypertournament,
    t: &OnePointType,
    class: ClassSet,
) -> Result<Option<Hypertournament>> {
    let n = h.len();
    if t.base() != (0..n).collect::<Vec<_>>().as_slice() {
        return Err(Error::Precondition(
            "one-point type must be defined over every point of the structure".into(),
        ));
    }
    let mut g = h.clone();
    let x = g.grow(1).start;
    for a in 0..n {
        for b in a + 1..n {
            g.set_r(x, a, b, t.get(a, b));
        }
    }
    Ok(crate::classify::point_admissible(&g, x, class).then_some(g))
}

/// A pseudo-random structure on `n` points in `class`, reproducible from `seed`.
pub fn random_in_class(n: usize, class: ClassSet, seed: u64) -> Result<Hypertournament> {
    Solver::new(class)
        .with_phase(Phase::Seeded(seed))
        .solve(&PartialHypertournament::new(n), &ConstraintSet::new())?
        .into_model()
        .map(|m| m.structure)
        .ok_or_else(|| Error::Precondition(format!("no {class} structure on {n} points")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{is_h4_free, pattern_structure};

    fn sop3_cycle() -> (PartialHypertournament, ConstraintSet) {
        let mut cs = ConstraintSet::new();
        let x = cs.vars("x", 3);
        let (a, b) = (Term::Point(0), Term::Point(1));
        for i in 0..3 {
            let (u, v) = (x[i], x[(i + 1) % 3]);
            cs.r(u, v, a);
            cs.r(u, b, v);
        }
        (PartialHypertournament::new(2), cs)
    }

    #[test]
    fn sop3_cycle_is_unsat() {
        let (base, cs) = sop3_cycle();
        assert!(!solve(&base, &cs).unwrap().is_sat());
        let count = count_completions(&base, &cs, ClassSet::H4_FREE, u64::MAX).unwrap();
        assert_eq!((count.satisfying, count.space), (0, 1024));
    }

    #[test]
    fn empty_constraints_return_base() {
        let base = Hypertournament::all_plus(6);
        let out = solve_over(&base, &ConstraintSet::new()).unwrap();
        assert_eq!(out.model().unwrap().structure, base);
    }

    #[test]
    fn single_variable_over_single_point() {
        let mut cs = ConstraintSet::new();
        cs.var("x");
        let c =
            count_completions(&PartialHypertournament::new(1), &cs, ClassSet::H4_FREE, 10).unwrap();
        assert_eq!(c.satisfying, 1);
    }

    #[test]
    fn contradictory_literals_are_reported() {
        let mut cs = ConstraintSet::new();
        let x = cs.var("x");
        cs.r(x, Term::Point(0), Term::Point(1));
        cs.r(x, Term::Point(1), Term::Point(0));
        match solve(&PartialHypertournament::new(2), &cs).unwrap() {
            SolveOutcome::Unsat(Unsat::Conflict {
                first: Some(0),
                second: 1,
                ..
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unresolvable_names_are_errors() {
        let mut cs = ConstraintSet::new();
        let x = cs.var("x");
        cs.r(x, Term::Point(0), Term::Point(5));
        assert!(solve(&PartialHypertournament::new(2), &cs).is_err());
        let mut cs = ConstraintSet::new();
        cs.r(Term::Var(3), Term::Point(0), Term::Point(1));
        assert!(solve(&PartialHypertournament::new(2), &cs).is_err());
        let mut cs = ConstraintSet::new();
        cs.r(Term::Point(0), Term::Point(0), Term::Point(1));
        assert!(solve(&PartialHypertournament::new(2), &cs).is_err());
    }

    #[test]
    fn h4_base_is_unsat() {
        let base = pattern_structure(0b0101).to_partial();
        assert_eq!(
            solve(&base, &ConstraintSet::new()).unwrap(),
            SolveOutcome::Unsat(Unsat::Base([0, 1, 2, 3]))
        );
    }

    #[test]
    fn count_refuses_large_spaces() {
        let mut cs = ConstraintSet::new();
        cs.vars("x", 4);
        // 4 vars over 3 points: C(7,3) - 1 = 34 free triples
        let err = count_completions(&PartialHypertournament::new(3), &cs, ClassSet::H4_FREE, 1);
        assert!(matches!(err, Err(Error::Budget(_))));
    }

    #[test]
    fn extend_two_points_always_sat() {
        let h = Hypertournament::all_plus(2);
        for v in [true, false] {
            let t = OnePointType::new(vec![0, 1], vec![v]).unwrap();
            assert!(extend_by_point(&h, &t).unwrap().is_some());
        }
    }

    #[test]
    fn extend_completing_h4_is_unsat() {
        // first three points of the canonical H4; point 3 read off as a type
        let h4 = pattern_structure(0b0101);
        let base = h4.restrict(&[0, 1, 2]);
        let t = OnePointType::read_off(&h4, &[0, 1, 2], 3).unwrap();
        assert!(extend_by_point(&base, &t).unwrap().is_none());
        assert!(extend_by_point_in(&base, &t, ClassSet::ALL)
            .unwrap()
            .is_some());
    }

    #[test]
    fn extend_count_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = Solver::default()
            .with_phase(Phase::Seeded(rng.gen()))
            .solve(&PartialHypertournament::new(5), &ConstraintSet::new())
            .unwrap()
            .into_model()
            .unwrap()
            .structure;
        assert!(is_h4_free(&h));
        let mut sat = 0;
        for mask in 0u32..1024 {
            let t = OnePointType::new(
                (0..5).collect(),
                (0..10).map(|b| mask >> b & 1 == 1).collect(),
            )
            .unwrap();
            if extend_by_point(&h, &t).unwrap().is_some() {
                sat += 1;
            }
        }
        let mut cs = ConstraintSet::new();
        cs.var("x");
        let oracle = count_completions(&h.to_partial(), &cs, ClassSet::H4_FREE, u64::MAX).unwrap();
        assert_eq!(sat, oracle.satisfying);
    }

    #[test]
    fn deterministic_models() {
        let mut cs = ConstraintSet::new();
        let x = cs.vars("x", 2);
        cs.r(x[0], x[1], Term::Point(0));
        let base = Hypertournament::all_plus(4).to_partial();
        let a = solve(&base, &cs).unwrap();
        let b = solve(&base, &cs).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn packed_count_matches_direct_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = 5;
            let mut base = PartialHypertournament::new(n);
            for key in crate::structure::keys(n) {
                if rng.gen_bool(0.5) {
                    base.assign(key, Orientation::from_bool(rng.gen())).unwrap();
                }
            }
            let mut cs = ConstraintSet::new();
            let x = cs.var("x");
            cs.require(x, Term::Point(0), Term::Point(1), rng.gen());
            let free: Vec<TripleKey> = base
                .unassigned()
                .chain(crate::structure::keys(n + 1).filter(|k| k.top() == n))
                .collect();
            let mut direct = 0;
            for mask in 0u64..1 << free.len() {
                let mut p = base.clone();
                p.grow(1);
                for (bit, key) in free.iter().enumerate() {
                    p.assign(*key, Orientation::from_bool(mask >> bit & 1 == 1))
                        .unwrap();
                }
                let h = p.to_total().unwrap();
                if h.r(n, 0, 1) == cs.literals()[0].holds && crate::classify::is_h4_free(&h) {
                    direct += 1;
                }
            }
            let counted = count_completions(&base, &cs, ClassSet::H4_FREE, u64::MAX).unwrap();
            assert_eq!(counted.satisfying, direct);
            assert_eq!(counted.enumerated, 1 << free.len());
        }
    }
}
