//! Classification of 4-point substructures and the 4-constrained classes.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::structure::{Hypertournament, PointId, TripleKey};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FourClass {
    C4,
    O4,
    H4,
}

impl FourClass {
    pub const ALL: [FourClass; 3] = [FourClass::C4, FourClass::O4, FourClass::H4];

    fn bit(self) -> u8 {
        match self {
            FourClass::C4 => 1,
            FourClass::O4 => 2,
            FourClass::H4 => 4,
        }
    }
}

impl fmt::Display for FourClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FourClass::C4 => "C4",
            FourClass::O4 => "O4",
            FourClass::H4 => "H4",
        };
        f.write_str(s)
    }
}

/// A subset of `{C4, O4, H4}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClassSet(u8);

impl ClassSet {
    pub const EMPTY: ClassSet = ClassSet(0);
    /// Generic 3-hypertournaments.
    pub const ALL: ClassSet = ClassSet(7);
    /// The H4-free class `{C4, O4}`.
    pub const H4_FREE: ClassSet = ClassSet(3);
    /// Even 3-hypertournaments, `{C4, H4}`.
    pub const EVEN: ClassSet = ClassSet(5);
    /// Cyclic 3-hypertournaments, `{C4}`.
    pub const CYCLIC: ClassSet = ClassSet(1);

    pub fn of(classes: &[FourClass]) -> Self {
        ClassSet(classes.iter().fold(0, |acc, c| acc | c.bit()))
    }

    #[inline]
    pub fn contains(self, c: FourClass) -> bool {
        self.0 & c.bit() != 0
    }

    /// Whether the class is one of the four 4-constrained amalgamation classes.
    pub fn is_amalgamation_class(self) -> bool {
        matches!(self.0, 1 | 3 | 5 | 7)
    }

    pub fn name(self) -> String {
        FourClass::ALL
            .iter()
            .filter(|c| self.contains(**c))
            .map(|c| c.to_string().to_lowercase())
            .collect()
    }
}

impl fmt::Display for ClassSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.name();
        f.write_str(if s.is_empty() { "none" } else { &s })
    }
}

impl FromStr for ClassSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut set = ClassSet::EMPTY;
        let lower = s.to_ascii_lowercase();
        let mut rest = lower.as_str();
        while !rest.is_empty() {
            let (c, tail) = match rest.get(..2) {
                Some("c4") => (FourClass::C4, &rest[2..]),
                Some("o4") => (FourClass::O4, &rest[2..]),
                Some("h4") => (FourClass::H4, &rest[2..]),
                _ => return Err(Error::Precondition(format!("unknown class set `{s}`"))),
            };
            set.0 |= c.bit();
            rest = tail.trim_start_matches([',', '+']);
        }
        Ok(set)
    }
}

/// `R(a,b,c) ∧ R(a,c,d) ∧ R(a,d,b) ∧ R(b,d,c)` for the labeling `(a, b, c, d)`.
pub fn h4_conjunction(h: &Hypertournament, [a, b, c, d]: [PointId; 4]) -> bool {
    h.r(a, b, c) && h.r(a, c, d) && h.r(a, d, b) && h.r(b, d, c)
}

const LABELINGS: [[usize; 4]; 24] = {
    let mut out = [[0; 4]; 24];
    let mut n = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                if a != b && b != c && a != c {
                    let d = 6 - a - b - c;
                    out[n] = [a, b, c, d];
                    n += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
};

/// Classifies four distinct points: odd edge parity means `O4`; otherwise the
/// H4 conjunction is tried under all 24 labelings; anything else is `C4`.
pub fn classify_4set(h: &Hypertournament, s: &[PointId]) -> Result<FourClass> {
    let pts: [PointId; 4] = s
        .try_into()
        .map_err(|_| Error::Precondition(format!("expected 4 points, got {}", s.len())))?;
    for &p in &pts {
        if p >= h.len() {
            return Err(Error::PointOutOfRange {
                point: p,
                n: h.len(),
            });
        }
    }
    let mut sorted = pts;
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Precondition(format!(
            "points {pts:?} are not distinct"
        )));
    }
    Ok(classify_sorted(h, sorted))
}

fn classify_sorted(h: &Hypertournament, pts: [PointId; 4]) -> FourClass {
    if pattern_of(h, pts).count_ones() % 2 == 1 {
        return FourClass::O4;
    }
    let is_h4 = LABELINGS
        .iter()
        .any(|l| h4_conjunction(h, [pts[l[0]], pts[l[1]], pts[l[2]], pts[l[3]]]));
    if is_h4 {
        FourClass::H4
    } else {
        FourClass::C4
    }
}

/// Orientation bits of a sorted 4-set `a<b<c<d`: bit 0 = abc, 1 = abd, 2 = acd, 3 = bcd.
#[inline]
pub fn pattern_of(h: &Hypertournament, [a, b, c, d]: [PointId; 4]) -> u8 {
    let bit = |x, y, z| h.orientation(TripleKey::from_sorted([x, y, z])).is_plus() as u8;
    bit(a, b, c) | bit(a, b, d) << 1 | bit(a, c, d) << 2 | bit(b, c, d) << 3
}

/// Class of each of the 16 orientation patterns of a sorted 4-set.
pub fn class_table() -> &'static [FourClass; 16] {
    static TABLE: OnceLock<[FourClass; 16]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [FourClass::C4; 16];
        for (pattern, slot) in t.iter_mut().enumerate() {
            *slot = classify_sorted(&pattern_structure(pattern as u8), [0, 1, 2, 3]);
        }
        t
    })
}

/// The 4-point structure with the given orientation pattern.
pub fn pattern_structure(pattern: u8) -> Hypertournament {
    let mut h = Hypertournament::new(4);
    let keys = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    for (bit, k) in keys.iter().enumerate() {
        h.set(
            TripleKey::from_sorted(*k),
            crate::structure::Orientation::from_bool(pattern >> bit & 1 == 1),
        );
    }
    h
}

/// Calls `f` on every sorted 4-subset until it returns `false`.
pub fn for_each_4set(n: usize, mut f: impl FnMut([PointId; 4]) -> bool) {
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    if !f([a, b, c, d]) {
                        return;
                    }
                }
            }
        }
    }
}

/// First 4-subset whose class is not in `allowed`.
pub fn find_violation(h: &Hypertournament, allowed: ClassSet) -> Option<([PointId; 4], FourClass)> {
    let table = class_table();
    let mut found = None;
    for_each_4set(h.len(), |s| {
        let c = table[pattern_of(h, s) as usize];
        if allowed.contains(c) {
            true
        } else {
            found = Some((s, c));
            false
        }
    });
    found
}

pub fn find_h4(h: &Hypertournament) -> Option<[PointId; 4]> {
    find_violation(h, ClassSet::H4_FREE).map(|(s, _)| s)
}

pub fn is_h4_free(h: &Hypertournament) -> bool {
    find_h4(h).is_none()
}

pub fn in_constrained_class(h: &Hypertournament, allowed: ClassSet) -> bool {
    find_violation(h, allowed).is_none()
}

/// Number of 4-subsets in each class, indexed as `[C4, O4, H4]`.
pub fn class_tally(h: &Hypertournament) -> [usize; 3] {
    let table = class_table();
    let mut tally = [0; 3];
    for_each_4set(h.len(), |s| {
        tally[table[pattern_of(h, s) as usize] as usize] += 1;
        true
    });
    tally
}

/// Whether the 4-subsets of `h` containing `p` all lie in `allowed`.
pub fn point_admissible(h: &Hypertournament, p: PointId, allowed: ClassSet) -> bool {
    let table = class_table();
    let n = h.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if p == a || p == b || p == c {
                    continue;
                }
                let mut s = [a, b, c, p];
                s.sort_unstable();
                if !allowed.contains(table[pattern_of(h, s) as usize]) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Orientation;

    pub(crate) fn h4_canonical() -> Hypertournament {
        // 012:+ 023:+ 013:- 123:-
        pattern_structure(0b0101)
    }

    #[test]
    fn canonical_examples() {
        let h4 = h4_canonical();
        assert!(h4_conjunction(&h4, [0, 1, 2, 3]));
        assert_eq!(classify_4set(&h4, &[0, 1, 2, 3]).unwrap(), FourClass::H4);
        assert_eq!(
            classify_4set(&Hypertournament::all_plus(4), &[3, 1, 0, 2]).unwrap(),
            FourClass::C4
        );
        assert_eq!(
            classify_4set(&pattern_structure(0b0001), &[0, 1, 2, 3]).unwrap(),
            FourClass::O4
        );
    }

    #[test]
    fn classify_rejects_bad_sets() {
        let h = Hypertournament::all_plus(5);
        assert!(classify_4set(&h, &[0, 1, 2]).is_err());
        assert!(classify_4set(&h, &[0, 1, 2, 2]).is_err());
        assert!(classify_4set(&h, &[0, 1, 2, 7]).is_err());
    }

    #[test]
    fn pattern_counts() {
        let t = class_table();
        let count = |c| t.iter().filter(|x| **x == c).count();
        assert_eq!(
            (
                count(FourClass::C4),
                count(FourClass::O4),
                count(FourClass::H4)
            ),
            (6, 8, 2)
        );
    }

    #[test]
    fn h4_freeness_and_classes() {
        assert!(!is_h4_free(&h4_canonical()));
        assert_eq!(find_h4(&h4_canonical()), Some([0, 1, 2, 3]));
        assert!(is_h4_free(&Hypertournament::new(3)));
        assert!(in_constrained_class(&h4_canonical(), ClassSet::ALL));
        assert!(!in_constrained_class(&h4_canonical(), ClassSet::H4_FREE));
        assert!(in_constrained_class(
            &Hypertournament::all_plus(5),
            ClassSet::CYCLIC
        ));
    }

    #[test]
    fn class_set_parsing() {
        assert_eq!("c4o4".parse::<ClassSet>().unwrap(), ClassSet::H4_FREE);
        assert_eq!("c4o4h4".parse::<ClassSet>().unwrap(), ClassSet::ALL);
        assert_eq!("c4h4".parse::<ClassSet>().unwrap(), ClassSet::EVEN);
        assert_eq!("C4".parse::<ClassSet>().unwrap(), ClassSet::CYCLIC);
        assert!("c5".parse::<ClassSet>().is_err());
        assert_eq!(ClassSet::H4_FREE.to_string(), "c4o4");
        assert!(!ClassSet::of(&[FourClass::O4]).is_amalgamation_class());
    }

    #[test]
    fn point_admissibility_matches_full_scan() {
        let mut h = Hypertournament::all_plus(5);
        // make {0,1,2,4} an H4: 012:+ 024:+ 014:- 124:-
        h.set(TripleKey::new(0, 1, 4).unwrap(), Orientation::Minus);
        h.set(TripleKey::new(1, 2, 4).unwrap(), Orientation::Minus);
        assert_eq!(classify_4set(&h, &[0, 1, 2, 4]).unwrap(), FourClass::H4);
        assert!(!point_admissible(&h, 4, ClassSet::H4_FREE));
        assert!(!point_admissible(&h, 0, ClassSet::H4_FREE));
    }
}
