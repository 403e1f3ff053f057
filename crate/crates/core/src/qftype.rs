//! Quantifier-free types of finite tuples over finite base sets.
//!
//! The theory of the H4-free limit has quantifier elimination, so the induced
//! signs of the R-atoms are a faithful finite stand-in for the complete type of
//! a tuple over a set. Equality of [`QfType`] values is used everywhere the
//! constructions need `ā ≡_C b̄`.

use crate::error::{Error, Result};
use crate::structure::{Hypertournament, PointId};

/// A position in a type: either the `i`-th tuple coordinate or a base point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Var(usize),
    Base(PointId),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QfType {
    arity: usize,
    base: Vec<PointId>,
    eq: Vec<Option<PointId>>,
    atoms: Vec<([Slot; 3], bool)>,
}

impl QfType {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn base(&self) -> &[PointId] {
        &self.base
    }

    /// For each coordinate, the base point it coincides with, if any.
    pub fn equalities(&self) -> &[Option<PointId>] {
        &self.eq
    }

    /// Each atom as sorted slots and the truth of `R` in that slot order.
    pub fn atoms(&self) -> &[([Slot; 3], bool)] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Whether the tuple `tuple` of `h` satisfies this type over its base.
    pub fn realized_by(&self, h: &Hypertournament, tuple: &[PointId]) -> Result<bool> {
        Ok(qf_type(h, tuple, &self.base)? == *self)
    }
}

/// Records the sign of every R-atom whose support lies in `tuple ∪ base` and meets `tuple`.
pub fn qf_type(h: &Hypertournament, tuple: &[PointId], base: &[PointId]) -> Result<QfType> {
    for &p in tuple.iter().chain(base) {
        if p >= h.len() {
            return Err(Error::PointOutOfRange {
                point: p,
                n: h.len(),
            });
        }
    }
    for (i, &p) in tuple.iter().enumerate() {
        if tuple[..i].contains(&p) {
            return Err(Error::Precondition(format!("tuple point {p} repeated")));
        }
    }
    let mut base: Vec<PointId> = base.to_vec();
    base.sort_unstable();
    base.dedup();

    let eq: Vec<Option<PointId>> = tuple
        .iter()
        .map(|p| base.binary_search(p).ok().map(|_| *p))
        .collect();

    let mut slots: Vec<(Slot, PointId)> = tuple
        .iter()
        .enumerate()
        .map(|(i, &p)| (Slot::Var(i), p))
        .collect();
    slots.extend(
        base.iter()
            .filter(|p| !tuple.contains(p))
            .map(|&p| (Slot::Base(p), p)),
    );

    let t = tuple.len();
    let mut atoms = Vec::new();
    // Only combinations whose first slot is a variable meet the tuple, since
    // variables sort before base slots.
    for i in 0..t {
        for j in i + 1..slots.len() {
            for k in j + 1..slots.len() {
                let (si, pi) = slots[i];
                let (sj, pj) = slots[j];
                let (sk, pk) = slots[k];
                atoms.push(([si, sj, sk], h.r(pi, pj, pk)));
            }
        }
    }

    Ok(QfType {
        arity: t,
        base,
        eq,
        atoms,
    })
}
