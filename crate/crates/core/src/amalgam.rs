//! Strong amalgamation of H4-free structures and finite approximations of
//! the generic structure of a 4-constrained class.
//!
//! Amalgamation goes through the hypergraph encoding: fix an order with the
//! new points of the first side below the common part and the new points of
//! the second side above it, take the free amalgam of the two encoded
//! hypergraphs (no edge meets both new parts), and decode. Every 4-set that
//! meets both new parts then has its least point `s` and greatest point `t` on
//! opposite sides, so `R(s, t, y) ∧ R(s, t, y')` holds for the remaining two
//! points and the 4-set cannot be an H4.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{in_constrained_class, is_h4_free, point_admissible, ClassSet};
use crate::error::{Error, Result};
use crate::solver::{ConstraintSet, Phase, SolveOutcome, Solver, Term};
use crate::structure::{decode, keys, Hypergraph3, Hypertournament, LinearOrder, PointId};

/// The truth of `R(x, a, b)` for a new point `x` and every pair `a < b` of a base set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OnePointType {
    base: Vec<PointId>,
    rel: Vec<bool>,
}

fn pair_count(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

impl OnePointType {
    /// `base` must be strictly increasing; `rel` lists `R(x, a, b)` for the
    /// pairs of `base` in lexicographic order.
    pub fn new(base: Vec<PointId>, rel: Vec<bool>) -> Result<Self> {
        if base.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition(
                "type base must be strictly increasing".into(),
            ));
        }
        if rel.len() != pair_count(base.len()) {
            return Err(Error::Precondition(format!(
                "type over {} points needs {} pair values, got {}",
                base.len(),
                pair_count(base.len()),
                rel.len()
            )));
        }
        Ok(OnePointType { base, rel })
    }

    /// Type whose pair values are the bits of `mask`, lowest bit first.
    pub fn from_mask(base: Vec<PointId>, mask: u64) -> Result<Self> {
        let rel = (0..pair_count(base.len()))
            .map(|b| mask >> b & 1 == 1)
            .collect();
        Self::new(base, rel)
    }

    /// The type of the existing point `p` over `base`.
    pub fn read_off(h: &Hypertournament, base: &[PointId], p: PointId) -> Result<Self> {
        if base.contains(&p) {
            return Err(Error::Precondition(format!(
                "point {p} lies in the type's base"
            )));
        }
        let mut rel = Vec::with_capacity(pair_count(base.len()));
        for (i, &a) in base.iter().enumerate() {
            for &b in &base[i + 1..] {
                rel.push(h.eval_r(p, a, b)?);
            }
        }
        Self::new(base.to_vec(), rel)
    }

    pub fn base(&self) -> &[PointId] {
        &self.base
    }

    pub fn mask(&self) -> u64 {
        self.rel
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &v)| acc | (v as u64) << i)
    }

    fn pair_index(&self, a: PointId, b: PointId) -> Option<usize> {
        let i = self.base.binary_search(&a).ok()?;
        let j = self.base.binary_search(&b).ok()?;
        let m = self.base.len();
        // lexicographic rank of (i, j), i < j
        Some(i * (2 * m - i - 1) / 2 + (j - i - 1))
    }

    /// `R(x, a, b)` for distinct base points `a`, `b` in either order.
    pub fn get(&self, a: PointId, b: PointId) -> bool {
        if a < b {
            self.rel[self.pair_index(a, b).expect("pair in type base")]
        } else {
            !self.rel[self.pair_index(b, a).expect("pair in type base")]
        }
    }

    pub fn realized_by(&self, h: &Hypertournament, p: PointId) -> bool {
        if self.base.contains(&p) {
            return false;
        }
        let m = self.base.len();
        let mut r = 0;
        for i in 0..m {
            for j in i + 1..m {
                if h.r(p, self.base[i], self.base[j]) != self.rel[r] {
                    return false;
                }
                r += 1;
            }
        }
        true
    }
}

/// An injective map from a source structure into a target that preserves `R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    map: Vec<PointId>,
}

impl Embedding {
    pub fn new(
        map: Vec<PointId>,
        source: &Hypertournament,
        target: &Hypertournament,
    ) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::NotAnEmbedding(format!(
                "map has {} entries for a source of {} points",
                map.len(),
                source.len()
            )));
        }
        let mut seen = HashSet::new();
        for &p in &map {
            if p >= target.len() {
                return Err(Error::NotAnEmbedding(format!("image {p} out of range")));
            }
            if !seen.insert(p) {
                return Err(Error::NotAnEmbedding(format!("image {p} hit twice")));
            }
        }
        for key in keys(source.len()) {
            let [i, j, k] = key.points();
            if source.r(i, j, k) != target.r(map[i], map[j], map[k]) {
                return Err(Error::NotAnEmbedding(format!(
                    "triple {{{key}}} not preserved"
                )));
            }
        }
        Ok(Embedding { map })
    }

    pub fn identity(h: &Hypertournament) -> Self {
        Embedding {
            map: (0..h.len()).collect(),
        }
    }

    pub fn apply(&self, p: PointId) -> PointId {
        self.map[p]
    }

    pub fn map(&self) -> &[PointId] {
        &self.map
    }
}

/// Solves the one-point problem `A b1 <- A -> A b2`: the result has `A` on
/// its first points, `b1 = |A|`, `b2 = |A| + 1`, and `R(b1, b2, a)` for all `a`.
pub fn amalgamate_one_point(
    a: &Hypertournament,
    t1: &OnePointType,
    t2: &OnePointType,
) -> Result<Hypertournament> {
    if !is_h4_free(a) {
        return Err(Error::Precondition("base structure is not H4-free".into()));
    }
    for t in [t1, t2] {
        if crate::solver::extend_by_point(a, t)?.is_none() {
            return Err(Error::Precondition(
                "one-point extension is not H4-free".into(),
            ));
        }
    }
    let n = a.len();
    let mut c = a.clone();
    let new = c.grow(2);
    let (b1, b2) = (new.start, new.start + 1);
    for x in 0..n {
        for y in x + 1..n {
            c.set_r(b1, x, y, t1.get(x, y));
            c.set_r(b2, x, y, t2.get(x, y));
        }
        c.set_r(b1, b2, x, true);
    }
    if !is_h4_free(&c) {
        return Err(Error::Precondition("amalgam is not H4-free".into()));
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Amalgam {
    pub structure: Hypertournament,
    pub g1: Embedding,
    pub g2: Embedding,
}

/// Strong amalgam of `b1` and `b2` over `a` along `f1`, `f2`.
///
/// Points of the result: `0..|A|` carry `A`, then the points of `B1 ∖ f1(A)`
/// in index order, then those of `B2 ∖ f2(A)`.
pub fn strong_amalgamate(
    a: &Hypertournament,
    b1: &Hypertournament,
    b2: &Hypertournament,
    f1: &Embedding,
    f2: &Embedding,
) -> Result<Amalgam> {
    for (name, b) in [("B1", b1), ("B2", b2)] {
        if !is_h4_free(b) {
            return Err(Error::Precondition(format!("{name} is not H4-free")));
        }
    }
    let f1 = Embedding::new(f1.map.clone(), a, b1)?;
    let f2 = Embedding::new(f2.map.clone(), a, b2)?;

    let na = a.len();
    let assign =
        |b: &Hypertournament, f: &Embedding, next: &mut usize| -> (Vec<PointId>, Vec<PointId>) {
            let mut g = vec![usize::MAX; b.len()];
            for (i, &p) in f.map.iter().enumerate() {
                g[p] = i;
            }
            let mut extras = Vec::new();
            for slot in g.iter_mut() {
                if *slot == usize::MAX {
                    *slot = *next;
                    extras.push(*next);
                    *next += 1;
                }
            }
            (g, extras)
        };
    let mut next = na;
    let (g1, extra1) = assign(b1, &f1, &mut next);
    let (g2, extra2) = assign(b2, &f2, &mut next);
    let total = next;

    // new B1 points below everything added before them, new B2 points above
    let mut seq: Vec<PointId> = extra1.iter().rev().copied().collect();
    seq.extend(0..na);
    seq.extend(extra2.iter().copied());
    let ord = LinearOrder::from_sequence(seq)?;

    let mut g = Hypergraph3::new(total);
    for (b, gmap) in [(b1, &g1), (b2, &g2)] {
        let mut inv = vec![usize::MAX; total];
        for (p, &q) in gmap.iter().enumerate() {
            inv[q] = p;
        }
        for key in keys(b.len()) {
            let [i, j, k] = key.points();
            let [x, y, z] = ord.sort3(gmap[i], gmap[j], gmap[k]);
            if b.r(inv[x], inv[y], inv[z]) {
                g.add_edge(x, y, z)?;
            }
        }
    }
    let structure = decode(&g, &ord)?;
    if !is_h4_free(&structure) {
        return Err(Error::Precondition("amalgam is not H4-free".into()));
    }
    let g1 = Embedding::new(g1, b1, &structure)?;
    let g2 = Embedding::new(g2, b2, &structure)?;
    Ok(Amalgam { structure, g1, g2 })
}

pub const MAX_TYPE_BASE: usize = 6;

/// All one-point types over `base` whose realization keeps every 4-subset of
/// `base ∪ {x}` inside `class`, in increasing mask order.
pub fn enumerate_one_point_types(
    h: &Hypertournament,
    base: &[PointId],
    class: ClassSet,
) -> Result<Vec<OnePointType>> {
    if base.len() > MAX_TYPE_BASE {
        return Err(Error::Budget(format!(
            "type enumeration is capped at {MAX_TYPE_BASE} base points"
        )));
    }
    let mut sorted = base.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let local = h.restrict(&sorted);
    if !in_constrained_class(&local, class) {
        return Ok(Vec::new());
    }
    let m = sorted.len();
    let mut out = Vec::new();
    for mask in 0u64..1 << pair_count(m) {
        let t = OnePointType::from_mask((0..m).collect(), mask)?;
        if let Some(ext) = crate::solver::extend_by_point_in(&local, &t, class)? {
            debug_assert!(in_constrained_class(&ext, class));
            out.push(OnePointType::from_mask(sorted.clone(), mask)?);
        }
    }
    Ok(out)
}

/// First point outside the base realizing `t`, provided `t` is admissible.
pub fn realize_type(h: &Hypertournament, t: &OnePointType, class: ClassSet) -> Option<PointId> {
    if !admissible(h, t, class) {
        return None;
    }
    h.points().find(|&p| t.realized_by(h, p))
}

fn admissible(h: &Hypertournament, t: &OnePointType, class: ClassSet) -> bool {
    let local = h.restrict(t.base());
    let m = t.base().len();
    let Ok(lt) = OnePointType::from_mask((0..m).collect(), t.mask()) else {
        return false;
    };
    in_constrained_class(&local, class)
        && matches!(
            crate::solver::extend_by_point_in(&local, &lt, class),
            Ok(Some(_))
        )
}

/// Subsets of `0..n` of size at most `k`, grouped by size and in colexicographic
/// order within a size, so that growing `n` only appends.
pub fn small_subsets(n: usize, k: usize) -> Vec<Vec<PointId>> {
    let mut out: Vec<Vec<PointId>> = vec![vec![]];
    let mut layer: Vec<Vec<PointId>> = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for top in 0..n {
            for s in &layer {
                if s.last().is_none_or(|&l| l < top) {
                    let mut t = s.clone();
                    t.push(top);
                    next.push(t);
                }
            }
        }
        next.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Admissible one-point types over subsets of size at most `k` that no point realizes.
pub fn extension_gaps(h: &Hypertournament, class: ClassSet, k: usize) -> Result<Vec<OnePointType>> {
    let mut gaps = Vec::new();
    for base in small_subsets(h.len(), k) {
        for t in enumerate_one_point_types(h, &base, class)? {
            if !h.points().any(|p| t.realized_by(h, p)) {
                gaps.push(t);
            }
        }
    }
    Ok(gaps)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericBuild {
    pub structure: Hypertournament,
    /// Admissible (subset, type) requirements at depth `k` in the final structure.
    pub required: usize,
    /// Requirements left unrealized; empty iff the depth-`k` extension property holds.
    pub gaps: Vec<OnePointType>,
}

impl GenericBuild {
    pub fn complete(&self) -> bool {
        self.gaps.is_empty()
    }
}

/// Fill candidates tried per added point.
const FILL_CANDIDATES: u64 = 12;

/// Grows an `S`-constrained structure on `n` points, realizing one-point types
/// over subsets of size at most `k` in round-robin order.
///
/// Each new point realizes the next unrealized admissible type; its remaining
/// triples are completed by the solver under a few seeded phases and the
/// completion that realizes the most outstanding requirements is kept.
pub fn build_generic(n: usize, class: ClassSet, k: usize, seed: u64) -> Result<GenericBuild> {
    if !class.is_amalgamation_class() {
        return Err(Error::Precondition(format!(
            "{class} is not an amalgamation class"
        )));
    }
    if k > MAX_TYPE_BASE {
        return Err(Error::Budget(format!("depth is capped at {MAX_TYPE_BASE}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = n.min(k + 1);
    let mut h = Solver::new(class)
        .with_phase(Phase::Seeded(rng.gen()))
        .solve(
            &crate::structure::PartialHypertournament::new(start),
            &ConstraintSet::new(),
        )?
        .into_model()
        .ok_or_else(|| Error::Precondition(format!("no {class} structure on {start} points")))?
        .structure;

    let mut cursor = 0usize;
    while h.len() < n {
        let subsets = small_subsets(h.len(), k);
        let outstanding = outstanding(&h, class, &subsets)?;
        if outstanding.is_empty() {
            // extension property already holds; add a random admissible point
            let t = OnePointType::new(vec![], vec![])?;
            h = add_point(&h, &t, class, &mut rng, &outstanding)?;
            continue;
        }
        let len = subsets.len();
        let target = (0..len).map(|i| (cursor + i) % len).find_map(|i| {
            outstanding
                .iter()
                .find(|t| t.base() == subsets[i].as_slice())
                .map(|t| (i, t))
        });
        let (pos, t) = target.expect("outstanding requirement belongs to some subset");
        cursor = pos + 1;
        h = add_point(&h, t, class, &mut rng, &outstanding)?;
    }

    let subsets = small_subsets(h.len(), k);
    let required = subsets
        .iter()
        .map(|s| enumerate_one_point_types(&h, s, class).map(|v| v.len()))
        .sum::<Result<usize>>()?;
    let gaps = outstanding(&h, class, &subsets)?;
    debug_assert!(in_constrained_class(&h, class));
    Ok(GenericBuild {
        structure: h,
        required,
        gaps,
    })
}

fn outstanding(
    h: &Hypertournament,
    class: ClassSet,
    subsets: &[Vec<PointId>],
) -> Result<Vec<OnePointType>> {
    let mut out = Vec::new();
    for s in subsets {
        for t in enumerate_one_point_types(h, s, class)? {
            if !h.points().any(|p| t.realized_by(h, p)) {
                out.push(t);
            }
        }
    }
    Ok(out)
}

fn add_point(
    h: &Hypertournament,
    t: &OnePointType,
    class: ClassSet,
    rng: &mut ChaCha8Rng,
    outstanding: &[OnePointType],
) -> Result<Hypertournament> {
    let mut cs = ConstraintSet::new();
    let x = cs.var("x");
    let base = t.base();
    for (i, &a) in base.iter().enumerate() {
        for &b in &base[i + 1..] {
            cs.require(x, Term::Point(a), Term::Point(b), t.get(a, b));
        }
    }
    let partial = h.to_partial();
    let mut best: Option<(usize, Hypertournament)> = None;
    for _ in 0..FILL_CANDIDATES {
        let phase = Phase::Seeded(rng.gen());
        let SolveOutcome::Sat(model) = Solver::new(class).with_phase(phase).solve(&partial, &cs)?
        else {
            return Err(Error::Precondition(format!(
                "admissible type over {:?} has no {class} realization",
                t.base()
            )));
        };
        let g = model.structure;
        let p = model.assignment[0];
        debug_assert!(point_admissible(&g, p, class));
        let gain = outstanding.iter().filter(|o| o.realized_by(&g, p)).count();
        if best.as_ref().is_none_or(|(b, _)| gain > *b) {
            best = Some((gain, g));
        }
    }
    Ok(best.expect("at least one candidate").1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::pattern_structure;
    use crate::structure::Orientation;

    #[test]
    fn pair_index_is_lexicographic() {
        let t = OnePointType::from_mask(vec![1, 4, 6, 9], 0b101101).unwrap();
        let pairs = [(1, 4), (1, 6), (1, 9), (4, 6), (4, 9), (6, 9)];
        for (bit, (a, b)) in pairs.iter().enumerate() {
            assert_eq!(t.get(*a, *b), 0b101101 >> bit & 1 == 1);
            assert_eq!(t.get(*b, *a), 0b101101 >> bit & 1 == 0);
        }
    }

    #[test]
    fn single_point_amalgam() {
        let a = Hypertournament::new(1);
        let empty = OnePointType::new(vec![0], vec![]).unwrap();
        let c = amalgamate_one_point(&a, &empty, &empty).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.r(1, 2, 0));
    }

    #[test]
    fn equal_types_give_two_distinct_realizations() {
        let a = Hypertournament::all_plus(3);
        let t = OnePointType::from_mask(vec![0, 1, 2], 0b011).unwrap();
        let c = amalgamate_one_point(&a, &t, &t).unwrap();
        assert!(t.realized_by(&c, 3) && t.realized_by(&c, 4));
    }

    #[test]
    fn amalgamation_rejects_bad_inputs() {
        let h4 = pattern_structure(0b0101);
        let t = OnePointType::from_mask(vec![0, 1, 2, 3], 0).unwrap();
        assert!(amalgamate_one_point(&h4, &t, &t).is_err());
        let a = Hypertournament::all_plus(2);
        let b = Hypertournament::all_plus(3);
        let bad = Embedding { map: vec![0, 0] };
        assert!(strong_amalgamate(&a, &b, &b, &bad, &Embedding::identity(&a)).is_err());
        let mut flipped = b.clone();
        flipped.set_r(0, 1, 2, false);
        let f = Embedding { map: vec![0, 1] };
        let g = Embedding { map: vec![0, 1] };
        assert!(strong_amalgamate(&a, &b, &flipped, &f, &g).is_ok());
        assert!(Embedding::new(vec![0, 1], &b.restrict(&[0, 1]), &flipped).is_ok());
        assert!(Embedding::new(vec![0, 1, 2], &b, &flipped).is_err());
    }

    #[test]
    fn identity_amalgam_is_the_base() {
        let a = Hypertournament::all_plus(5);
        let id = Embedding::identity(&a);
        let out = strong_amalgamate(&a, &a, &a, &id, &id).unwrap();
        assert_eq!(out.structure, a);
    }

    #[test]
    fn one_point_sides_agree_with_direct_construction() {
        let a = Hypertournament::all_plus(3);
        let t1 = OnePointType::from_mask(vec![0, 1, 2], 0b001).unwrap();
        let t2 = OnePointType::from_mask(vec![0, 1, 2], 0b110).unwrap();
        let b1 = crate::solver::extend_by_point(&a, &t1).unwrap().unwrap();
        let b2 = crate::solver::extend_by_point(&a, &t2).unwrap().unwrap();
        let id = Embedding::identity(&a);
        let out = strong_amalgamate(&a, &b1, &b2, &id, &id).unwrap();
        assert_eq!(out.structure, amalgamate_one_point(&a, &t1, &t2).unwrap());
    }

    #[test]
    fn type_enumeration_edges() {
        let h = Hypertournament::all_plus(6);
        assert_eq!(
            enumerate_one_point_types(&h, &[0, 1], ClassSet::H4_FREE)
                .unwrap()
                .len(),
            2
        );
        assert_eq!(
            enumerate_one_point_types(&h, &[0, 2, 4], ClassSet::H4_FREE)
                .unwrap()
                .len(),
            7
        );
        assert_eq!(
            enumerate_one_point_types(&h, &[0, 1, 2, 3], ClassSet::ALL)
                .unwrap()
                .len(),
            64
        );
        assert!(enumerate_one_point_types(
            &Hypertournament::all_plus(8),
            &[0, 1, 2, 3, 4, 5, 6],
            ClassSet::ALL
        )
        .is_err());
    }

    #[test]
    fn realize_existing_point() {
        let mut h = Hypertournament::all_plus(6);
        h.set(
            crate::structure::TripleKey::new(1, 2, 5).unwrap(),
            Orientation::Minus,
        );
        let t = OnePointType::read_off(&h, &[1, 2, 3], 5).unwrap();
        assert_eq!(realize_type(&h, &t, ClassSet::ALL), Some(5));
        let empty = OnePointType::new(vec![], vec![]).unwrap();
        assert_eq!(realize_type(&h, &empty, ClassSet::ALL), Some(0));
    }

    #[test]
    fn subsets_are_append_only() {
        let small = small_subsets(5, 3);
        let big = small_subsets(6, 3);
        for size in 0..=3 {
            let a: Vec<_> = small.iter().filter(|s| s.len() == size).collect();
            let b: Vec<_> = big.iter().filter(|s| s.len() == size).collect();
            assert_eq!(a[..], b[..a.len()]);
        }
        assert_eq!(big.len(), 1 + 6 + 15 + 20);
    }

    #[test]
    fn small_generic_builds() {
        let out = build_generic(4, ClassSet::ALL, 1, 7).unwrap();
        assert!(out.complete());
        for class in [
            ClassSet::ALL,
            ClassSet::H4_FREE,
            ClassSet::EVEN,
            ClassSet::CYCLIC,
        ] {
            let out = build_generic(9, class, 2, 3).unwrap();
            assert!(in_constrained_class(&out.structure, class));
            assert_eq!(
                out.structure,
                build_generic(9, class, 2, 3).unwrap().structure
            );
        }
        assert!(build_generic(5, ClassSet::of(&[crate::classify::FourClass::O4]), 2, 0).is_err());
    }
}
