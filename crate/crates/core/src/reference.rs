//! Unpruned reference enumeration.
//!
//! Shares nothing with the copy engine or the exact search beyond the poset
//! and set types: copies are found by trying every injective map, families by
//! trying every combination of candidate sets in increasing order. Only usable
//! on tiny instances; it exists to cross-check the pruned search.

use crate::error::{Error, Result};
use crate::family::GroundSet;
use crate::poset::Poset;
use crate::saturation::ProjectionRule;
use crate::search::SearchMode;

/// Largest universe the enumeration accepts.
pub const MAX_REFERENCE_UNIVERSE: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceOutcome {
    pub value: Option<usize>,
    pub witness: Option<Vec<GroundSet>>,
    pub anchor: Option<GroundSet>,
}

fn subset(a: u64, b: u64) -> bool {
    a & b == a
}

/// Tries every injective map from `p` into `sets`.
pub fn has_copy(sets: &[u64], p: &Poset, weak: bool) -> bool {
    fn go(sets: &[u64], p: &Poset, weak: bool, map: &mut Vec<usize>) -> bool {
        let m = p.len();
        if map.len() == m {
            return (0..m).all(|i| {
                (0..m).all(|j| {
                    if i == j {
                        return true;
                    }
                    let (a, b) = (sets[map[i]], sets[map[j]]);
                    if p.lt(i, j) {
                        subset(a, b)
                    } else {
                        weak || !subset(a, b)
                    }
                })
            });
        }
        for u in 0..sets.len() {
            if map.contains(&u) {
                continue;
            }
            map.push(u);
            if go(sets, p, weak, map) {
                return true;
            }
            map.pop();
        }
        false
    }
    go(sets, p, weak, &mut Vec::new())
}

/// Advances `idx` to the next `k`-combination of `0..len` in lexicographic order.
fn next_combination(idx: &mut [usize], len: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < len - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

struct Check<'a> {
    p: &'a Poset,
    weak: bool,
    probes: Vec<u64>,
    inner: u64,
    injective: bool,
}

impl Check<'_> {
    fn valid(&self, fam: &[u64]) -> bool {
        if has_copy(fam, self.p, self.weak) {
            return false;
        }
        if self.injective {
            for (i, a) in fam.iter().enumerate() {
                if fam[i + 1..].iter().any(|b| a & self.inner == b & self.inner) {
                    return false;
                }
            }
        }
        self.probes.iter().all(|g| {
            if fam.contains(g) {
                return true;
            }
            let mut with = fam.to_vec();
            with.push(*g);
            has_copy(&with, self.p, self.weak)
        })
    }
}

/// Least valid family (by size, then anchor size, then anchor encoding, then
/// lexicographic order of the sorted encodings).
pub fn reference_min(
    mode: SearchMode,
    n: usize,
    p: &Poset,
    external_cap: usize,
    rule: ProjectionRule,
    max_size: usize,
) -> Result<ReferenceOutcome> {
    let cap = match mode {
        SearchMode::Sat | SearchMode::SatStar => 0,
        _ => external_cap,
    };
    let total = n + cap;
    if total > MAX_REFERENCE_UNIVERSE {
        return Err(Error::CapExceeded(format!(
            "reference enumeration needs n + cap <= {MAX_REFERENCE_UNIVERSE}"
        )));
    }
    let inner = (1u64 << n) - 1;
    let universe: Vec<u64> = (0..1u64 << total).collect();
    let mut anchors: Vec<u64> = if mode == SearchMode::External {
        (0..1u64 << cap).map(|a| a << n).collect()
    } else {
        vec![0]
    };
    anchors.sort_by_key(|a| (a.count_ones(), *a));
    let checks: Vec<(u64, Check)> = anchors
        .iter()
        .map(|&a| {
            let check = Check {
                p,
                weak: mode == SearchMode::Sat,
                probes: (0..=inner).map(|b| b | a).collect(),
                inner,
                injective: mode == SearchMode::Projective
                    || (mode == SearchMode::External && rule == ProjectionRule::Strict),
            };
            (a, check)
        })
        .collect();
    for size in 0..=max_size.min(universe.len()) {
        for (a, check) in &checks {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                let fam: Vec<u64> = idx.iter().map(|&i| universe[i]).collect();
                if check.valid(&fam) {
                    return Ok(ReferenceOutcome {
                        value: Some(size),
                        witness: Some(fam.into_iter().map(GroundSet).collect()),
                        anchor: (mode == SearchMode::External).then_some(GroundSet(*a)),
                    });
                }
                if size == 0 || !next_combination(&mut idx, universe.len()) {
                    break;
                }
            }
        }
    }
    Ok(ReferenceOutcome { value: None, witness: None, anchor: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_in_order() {
        let mut idx = vec![0, 1];
        let mut seen = vec![idx.clone()];
        while next_combination(&mut idx, 4) {
            seen.push(idx.clone());
        }
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn copies_by_brute_force() {
        let v2 = Poset::named("V_2").unwrap();
        assert!(has_copy(&[0b00, 0b01, 0b10], &v2, false));
        assert!(!has_copy(&[0b00, 0b01, 0b11], &v2, false));
        assert!(has_copy(&[0b00, 0b01, 0b11], &v2, true));
    }

    #[test]
    fn tiny_values() {
        let c2 = Poset::named("C_2").unwrap();
        let out = reference_min(SearchMode::SatStar, 2, &c2, 0, ProjectionRule::Strict, 4).unwrap();
        assert_eq!(out.value, Some(1));
        assert_eq!(out.witness, Some(vec![GroundSet(0)]));
        let v2 = Poset::named("V_2").unwrap();
        let out = reference_min(SearchMode::SatStar, 2, &v2, 0, ProjectionRule::Strict, 4).unwrap();
        assert_eq!(out.value, Some(3));
    }
}
