//! Finite 3-hypertournaments stored as one orientation bit per sorted triple.
//!
//! A triple `{i, j, k}` with `i < j < k` carries either [`Orientation::Plus`],
//! meaning `R(i, j, k)` holds, or [`Orientation::Minus`], meaning `R(i, k, j)`
//! holds. Every other argument order is recovered from the permutation parity,
//! so cyclic invariance and flip-negation hold without stored redundancy.
//!
//! Triples are indexed in colexicographic order, so growing a structure by new
//! points never moves the bits of existing triples.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

pub type PointId = usize;

/// Number of 3-subsets of an `n`-set.
pub fn triple_count(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// Sorts three points, returning the sorted array and whether the sorting
/// permutation is odd.
#[inline]
pub fn sort3(a: usize, b: usize, c: usize) -> ([usize; 3], bool) {
    let mut v = [a, b, c];
    let mut odd = false;
    if v[0] > v[1] {
        v.swap(0, 1);
        odd = !odd;
    }
    if v[1] > v[2] {
        v.swap(1, 2);
        odd = !odd;
    }
    if v[0] > v[1] {
        v.swap(0, 1);
        odd = !odd;
    }
    (v, odd)
}

/// The unordered support of an R-atom, stored sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TripleKey {
    pts: [PointId; 3],
}

impl TripleKey {
    pub fn new(i: PointId, j: PointId, k: PointId) -> Result<Self> {
        if i < j && j < k {
            Ok(TripleKey { pts: [i, j, k] })
        } else {
            Err(Error::UnsortedTriple(i, j, k))
        }
    }

    /// Builds the key of an arbitrary distinct triple.
    pub fn of(a: PointId, b: PointId, c: PointId) -> Result<Self> {
        if a == b || b == c || a == c {
            return Err(Error::RepeatedPoint(a, b, c));
        }
        let (pts, _) = sort3(a, b, c);
        Ok(TripleKey { pts })
    }

    #[inline]
    pub(crate) fn from_sorted(pts: [PointId; 3]) -> Self {
        debug_assert!(pts[0] < pts[1] && pts[1] < pts[2]);
        TripleKey { pts }
    }

    pub fn points(&self) -> [PointId; 3] {
        self.pts
    }

    pub fn top(&self) -> PointId {
        self.pts[2]
    }

    pub fn contains(&self, p: PointId) -> bool {
        self.pts.contains(&p)
    }

    /// Colexicographic rank of the key.
    #[inline]
    pub fn index(&self) -> usize {
        let [i, j, k] = self.pts;
        triple_count(k) + j * j.saturating_sub(1) / 2 + i
    }

    pub fn from_index(mut idx: usize) -> Self {
        let mut k = 2;
        while triple_count(k + 1) <= idx {
            k += 1;
        }
        idx -= triple_count(k);
        let mut j = 1;
        while (j + 1) * j / 2 <= idx {
            j += 1;
        }
        idx -= j * (j - 1) / 2;
        TripleKey { pts: [idx, j, k] }
    }
}

impl fmt::Display for TripleKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.pts[0], self.pts[1], self.pts[2])
    }
}

/// All sorted triples of `0..n` in lexicographic order.
pub fn keys(n: usize) -> impl Iterator<Item = TripleKey> {
    (0..n).flat_map(move |i| {
        (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| TripleKey::from_sorted([i, j, k])))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Plus,
    Minus,
}

impl Orientation {
    pub fn from_bool(plus: bool) -> Self {
        if plus {
            Orientation::Plus
        } else {
            Orientation::Minus
        }
    }

    pub fn is_plus(self) -> bool {
        self == Orientation::Plus
    }

    pub fn flip(self) -> Self {
        match self {
            Orientation::Plus => Orientation::Minus,
            Orientation::Minus => Orientation::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Orientation::Plus => '+',
            Orientation::Minus => '-',
        }
    }
}

/// Orientation of the sorted key that makes `R(a, b, c)` take value `holds`.
pub fn orientation_for(
    a: PointId,
    b: PointId,
    c: PointId,
    holds: bool,
) -> (TripleKey, Orientation) {
    let (pts, odd) = sort3(a, b, c);
    (
        TripleKey::from_sorted(pts),
        Orientation::from_bool(holds ^ odd),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn with_len(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64)],
        }
    }

    #[inline]
    fn get(&self, i: usize) -> bool {
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    fn set(&mut self, i: usize, v: bool) {
        let w = &mut self.words[i >> 6];
        if v {
            *w |= 1 << (i & 63);
        } else {
            *w &= !(1 << (i & 63));
        }
    }

    fn grow(&mut self, len: usize) {
        self.words.resize(len.div_ceil(64), 0);
    }
}

/// A finite 3-hypertournament on points `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypertournament {
    n: usize,
    bits: Bits,
}

impl Hypertournament {
    /// Every sorted triple oriented `Minus`.
    pub fn new(n: usize) -> Self {
        Hypertournament {
            n,
            bits: Bits::with_len(triple_count(n)),
        }
    }

    /// Every sorted triple oriented `Plus`.
    pub fn all_plus(n: usize) -> Self {
        Self::from_fn(n, |_| Orientation::Plus)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(TripleKey) -> Orientation) -> Self {
        let mut h = Self::new(n);
        for key in keys(n) {
            h.set(key, f(key));
        }
        h
    }

    /// Uniformly random orientation bits; not necessarily H4-free.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self::from_fn(n, |_| Orientation::from_bool(rng.gen()))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn points(&self) -> std::ops::Range<PointId> {
        0..self.n
    }

    #[inline]
    pub fn orientation(&self, key: TripleKey) -> Orientation {
        Orientation::from_bool(self.bits.get(key.index()))
    }

    #[inline]
    pub fn set(&mut self, key: TripleKey, o: Orientation) {
        debug_assert!(key.top() < self.n);
        self.bits.set(key.index(), o.is_plus());
    }

    /// Sets the sorted orientation so that `R(a, b, c)` takes value `holds`.
    pub fn set_r(&mut self, a: PointId, b: PointId, c: PointId, holds: bool) {
        let (key, o) = orientation_for(a, b, c, holds);
        self.set(key, o);
    }

    /// Checked evaluation of `R(a, b, c)`.
    pub fn eval_r(&self, a: PointId, b: PointId, c: PointId) -> Result<bool> {
        for p in [a, b, c] {
            if p >= self.n {
                return Err(Error::PointOutOfRange {
                    point: p,
                    n: self.n,
                });
            }
        }
        if a == b || b == c || a == c {
            return Err(Error::RepeatedPoint(a, b, c));
        }
        Ok(self.r(a, b, c))
    }

    /// Unchecked evaluation of `R(a, b, c)` for distinct in-range points.
    #[inline]
    pub fn r(&self, a: PointId, b: PointId, c: PointId) -> bool {
        debug_assert!(a != b && b != c && a != c);
        let (pts, odd) = sort3(a, b, c);
        self.bits.get(TripleKey::from_sorted(pts).index()) ^ odd
    }

    pub fn triples(&self) -> impl Iterator<Item = (TripleKey, Orientation)> + '_ {
        keys(self.n).map(move |k| (k, self.orientation(k)))
    }

    /// Adds `extra` fresh points whose triples start out `Minus`.
    pub fn grow(&mut self, extra: usize) -> std::ops::Range<PointId> {
        let old = self.n;
        self.n += extra;
        self.bits.grow(triple_count(self.n));
        old..self.n
    }

    /// The induced substructure on `pts`, relabeled so that `pts[i]` becomes `i`.
    pub fn restrict(&self, pts: &[PointId]) -> Hypertournament {
        let mut h = Hypertournament::new(pts.len());
        for key in keys(pts.len()) {
            let [i, j, k] = key.points();
            h.set(key, Orientation::from_bool(self.r(pts[i], pts[j], pts[k])));
        }
        h
    }

    /// The image structure under the bijection `i -> perm[i]`.
    pub fn relabel(&self, perm: &[PointId]) -> Result<Hypertournament> {
        check_permutation(perm, self.n)?;
        let mut h = Hypertournament::new(self.n);
        for key in keys(self.n) {
            let [i, j, k] = key.points();
            h.set_r(perm[i], perm[j], perm[k], self.r(i, j, k));
        }
        Ok(h)
    }

    pub fn to_partial(&self) -> PartialHypertournament {
        let mut p = PartialHypertournament::new(self.n);
        for (key, o) in self.triples() {
            p.vals[key.index()] = Some(o);
        }
        p
    }
}

impl fmt::Debug for Hypertournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypertournament({}; ", self.n)?;
        for (_, o) in self.triples() {
            write!(f, "{}", o.symbol())?;
        }
        write!(f, ")")
    }
}

fn check_permutation(perm: &[PointId], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::NotAPermutation(n));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::NotAPermutation(n));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Same shape as [`Hypertournament`] but triples may be unset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialHypertournament {
    n: usize,
    vals: Vec<Option<Orientation>>,
}

impl PartialHypertournament {
    pub fn new(n: usize) -> Self {
        PartialHypertournament {
            n,
            vals: vec![None; triple_count(n)],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, key: TripleKey) -> Option<Orientation> {
        self.vals[key.index()]
    }

    /// Assigns a previously unset triple; assigning twice is an error even
    /// when the value agrees.
    pub fn assign(&mut self, key: TripleKey, o: Orientation) -> Result<()> {
        if key.top() >= self.n {
            return Err(Error::PointOutOfRange {
                point: key.top(),
                n: self.n,
            });
        }
        let slot = &mut self.vals[key.index()];
        if slot.is_some() {
            let [i, j, k] = key.points();
            return Err(Error::DuplicateTriple(i, j, k));
        }
        *slot = Some(o);
        Ok(())
    }

    /// Requires `R(a, b, c) = holds`. Agreeing with an existing assignment is
    /// fine; contradicting it is reported as a duplicate.
    pub fn require_r(&mut self, a: PointId, b: PointId, c: PointId, holds: bool) -> Result<()> {
        let key = TripleKey::of(a, b, c)?;
        let (_, o) = orientation_for(a, b, c, holds);
        match self.get(key) {
            Some(cur) if cur == o => Ok(()),
            Some(_) => {
                let [i, j, k] = key.points();
                Err(Error::DuplicateTriple(i, j, k))
            }
            None => self.assign(key, o),
        }
    }

    pub fn unset(&mut self, key: TripleKey) {
        self.vals[key.index()] = None;
    }

    pub fn assigned(&self) -> impl Iterator<Item = (TripleKey, Orientation)> + '_ {
        keys(self.n).filter_map(move |k| self.get(k).map(|o| (k, o)))
    }

    pub fn unassigned(&self) -> impl Iterator<Item = TripleKey> + '_ {
        keys(self.n).filter(move |k| self.get(*k).is_none())
    }

    pub fn missing(&self) -> usize {
        self.vals.iter().filter(|v| v.is_none()).count()
    }

    pub fn grow(&mut self, extra: usize) -> std::ops::Range<PointId> {
        let old = self.n;
        self.n += extra;
        self.vals.resize(triple_count(self.n), None);
        old..self.n
    }

    pub fn to_total(&self) -> Result<Hypertournament> {
        let missing = self.missing();
        if missing > 0 {
            return Err(Error::Incomplete { missing });
        }
        Ok(Hypertournament::from_fn(self.n, |k| self.get(k).unwrap()))
    }
}

/// A linear order on the points, listed from smallest to largest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearOrder {
    order: Vec<PointId>,
    rank: Vec<usize>,
}

impl LinearOrder {
    pub fn natural(n: usize) -> Self {
        LinearOrder {
            order: (0..n).collect(),
            rank: (0..n).collect(),
        }
    }

    /// `order[r]` is the point of rank `r`.
    pub fn from_sequence(order: Vec<PointId>) -> Result<Self> {
        let n = order.len();
        check_permutation(&order, n)?;
        let mut rank = vec![0; n];
        for (r, &p) in order.iter().enumerate() {
            rank[p] = r;
        }
        Ok(LinearOrder { order, rank })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn rank(&self, p: PointId) -> usize {
        self.rank[p]
    }

    pub fn sequence(&self) -> &[PointId] {
        &self.order
    }

    /// Lists the three points in increasing order.
    pub fn sort3(&self, a: PointId, b: PointId, c: PointId) -> [PointId; 3] {
        let mut v = [a, b, c];
        v.sort_by_key(|&p| self.rank[p]);
        v
    }
}

/// A 3-uniform hypergraph; edges are stored as sorted point triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph3 {
    n: usize,
    edges: BTreeSet<[PointId; 3]>,
}

impl Hypergraph3 {
    pub fn new(n: usize) -> Self {
        Hypergraph3 {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn add_edge(&mut self, a: PointId, b: PointId, c: PointId) -> Result<()> {
        let key = TripleKey::of(a, b, c)?;
        if key.top() >= self.n {
            return Err(Error::PointOutOfRange {
                point: key.top(),
                n: self.n,
            });
        }
        self.edges.insert(key.points());
        Ok(())
    }

    pub fn has_edge(&self, a: PointId, b: PointId, c: PointId) -> bool {
        let (pts, _) = sort3(a, b, c);
        self.edges.contains(&pts)
    }

    pub fn edges(&self) -> impl Iterator<Item = [PointId; 3]> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// `{a, b, c}` is an edge iff `R` holds on the triple listed in `ord`-increasing order.
pub fn encode(h: &Hypertournament, ord: &LinearOrder) -> Result<Hypergraph3> {
    if ord.len() != h.len() {
        return Err(Error::WrongSize {
            expected: h.len(),
            got: ord.len(),
        });
    }
    let mut g = Hypergraph3::new(h.len());
    for key in keys(h.len()) {
        let [i, j, k] = key.points();
        let [a, b, c] = ord.sort3(i, j, k);
        if h.r(a, b, c) {
            g.edges.insert(key.points());
        }
    }
    Ok(g)
}

/// Inverse of [`encode`] for a fixed order.
pub fn decode(g: &Hypergraph3, ord: &LinearOrder) -> Result<Hypertournament> {
    if ord.len() != g.len() {
        return Err(Error::WrongSize {
            expected: g.len(),
            got: ord.len(),
        });
    }
    let mut h = Hypertournament::new(g.len());
    for key in keys(g.len()) {
        let [i, j, k] = key.points();
        let [a, b, c] = ord.sort3(i, j, k);
        h.set_r(a, b, c, g.edges.contains(&key.points()));
    }
    Ok(h)
}
