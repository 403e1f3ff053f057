//! Brute-force isomorphism for small structures.

use crate::classify::{class_table, pattern_of};
use crate::error::{Error, Result};
use crate::structure::{Hypertournament, PointId};

pub const MAX_ISO_POINTS: usize = 8;

/// Per-point tally of the classes of 4-subsets through it; invariant under isomorphism.
fn profile(h: &Hypertournament) -> Vec<[u16; 3]> {
    let n = h.len();
    let table = class_table();
    let mut prof = vec![[0u16; 3]; n];
    crate::classify::for_each_4set(n, |s| {
        let c = table[pattern_of(h, s) as usize] as usize;
        for p in s {
            prof[p][c] += 1;
        }
        true
    });
    prof
}

/// Returns `map` with `h1.r(a,b,c) == h2.r(map[a],map[b],map[c])` for all triples, if one exists.
pub fn find_isomorphism(
    h1: &Hypertournament,
    h2: &Hypertournament,
) -> Result<Option<Vec<PointId>>> {
    let n = h1.len();
    if n > MAX_ISO_POINTS || h2.len() > MAX_ISO_POINTS {
        return Err(Error::Budget(format!(
            "isomorphism search is capped at {MAX_ISO_POINTS} points"
        )));
    }
    if n != h2.len() {
        return Ok(None);
    }
    let p1 = profile(h1);
    let p2 = profile(h2);
    let mut s1 = p1.clone();
    let mut s2 = p2.clone();
    s1.sort_unstable();
    s2.sort_unstable();
    if s1 != s2 {
        return Ok(None);
    }

    let mut map = Vec::with_capacity(n);
    let mut used = vec![false; n];
    Ok(extend(h1, h2, &p1, &p2, &mut map, &mut used).then_some(map))
}

fn extend(
    h1: &Hypertournament,
    h2: &Hypertournament,
    p1: &[[u16; 3]],
    p2: &[[u16; 3]],
    map: &mut Vec<PointId>,
    used: &mut [bool],
) -> bool {
    let a = map.len();
    if a == h1.len() {
        return true;
    }
    for cand in 0..h2.len() {
        if used[cand] || p1[a] != p2[cand] {
            continue;
        }
        let consistent =
            (0..a).all(|b| (b + 1..a).all(|c| h1.r(b, c, a) == h2.r(map[b], map[c], cand)));
        if !consistent {
            continue;
        }
        map.push(cand);
        used[cand] = true;
        if extend(h1, h2, p1, p2, map, used) {
            return true;
        }
        map.pop();
        used[cand] = false;
    }
    false
}
