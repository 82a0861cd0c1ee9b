//! Weak, strong and almost-strong copies of a pattern poset inside a family.
//!
//! The search assigns pattern elements one at a time in a fixed order
//! (most constrained first) and keeps, for every step, a bitmask of family
//! members still compatible with everything assigned so far. Candidates are
//! tried in increasing member index, so the first embedding found is the
//! lexicographically least one with respect to the search order.

use serde::{Deserialize, Serialize};

use crate::chains;
use crate::error::{Error, Result};
use crate::family::{GroundSet, SetFamily};
use crate::poset::Poset;

/// Families handed to the engine are indexed by `u64` masks.
pub const MAX_FAMILY: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CopyMode {
    /// Order-preserving injection: `i < j` implies `g(i) ⊊ g(j)`.
    Weak,
    /// Order isomorphism onto the image.
    Strong,
}

/// Injective map from pattern elements to family members.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    /// `map[i]` is the member index that element `i` is sent to.
    pub map: Vec<usize>,
    /// `sets[i]` is the member itself.
    pub sets: Vec<GroundSet>,
}

impl Embedding {
    fn from_map(map: Vec<usize>, members: &[u64]) -> Self {
        let sets = map.iter().map(|&u| GroundSet(members[u])).collect();
        Embedding { map, sets }
    }

    /// Re-checks the defining condition of `mode` pair by pair.
    pub fn is_valid(&self, p: &Poset, mode: CopyMode) -> bool {
        let m = p.len();
        if self.map.len() != m || self.sets.len() != m {
            return false;
        }
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                if self.map[i] == self.map[j] || self.sets[i] == self.sets[j] {
                    return false;
                }
                let contained = self.sets[i].is_proper_subset(self.sets[j]);
                match mode {
                    CopyMode::Weak if p.lt(i, j) && !contained => return false,
                    CopyMode::Strong if p.lt(i, j) != contained => return false,
                    _ => {}
                }
            }
        }
        true
    }

    pub fn uses(&self, member: usize) -> bool {
        self.map.contains(&member)
    }
}

/// Strict containment between members, as bitmasks over member indices.
pub(crate) struct Targets {
    sub: Vec<u64>,
    sup: Vec<u64>,
    all: u64,
}

impl Targets {
    pub(crate) fn new(members: &[u64]) -> Self {
        let k = members.len();
        debug_assert!(k <= MAX_FAMILY);
        let mut sub = vec![0u64; k];
        let mut sup = vec![0u64; k];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate().skip(i + 1) {
                if a & !b == 0 {
                    // a ⊊ b (members are distinct)
                    sub[j] |= 1 << i;
                    sup[i] |= 1 << j;
                } else if b & !a == 0 {
                    sub[i] |= 1 << j;
                    sup[j] |= 1 << i;
                }
            }
        }
        let all = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        Targets { sub, sup, all }
    }

    fn len(&self) -> usize {
        self.sub.len()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Rel {
    Below,
    Above,
    Apart,
}

/// A pattern compiled into a search order.
#[derive(Clone)]
pub(crate) struct Pattern {
    order: Vec<usize>,
    /// `rel[t][s]` for `s < t`: how `order[s]` relates to `order[t]`.
    rel: Vec<Vec<Rel>>,
    need_down: Vec<u32>,
    need_up: Vec<u32>,
    antichain: bool,
}

impl Pattern {
    pub(crate) fn new(p: &Poset) -> Self {
        let m = p.len();
        let degree: Vec<usize> =
            (0..m).map(|i| (0..m).filter(|&j| p.comparable(i, j)).count()).collect();
        let mut placed = vec![false; m];
        let mut order = Vec::with_capacity(m);
        for _ in 0..m {
            let next = (0..m)
                .filter(|&i| !placed[i])
                .max_by_key(|&i| {
                    let links = order.iter().filter(|&&j| p.comparable(i, j)).count();
                    (links, degree[i], std::cmp::Reverse(i))
                })
                .expect("an unplaced element remains");
            placed[next] = true;
            order.push(next);
        }
        let rel = (0..m)
            .map(|t| {
                (0..t)
                    .map(|s| {
                        let (a, b) = (order[s], order[t]);
                        if p.lt(a, b) {
                            Rel::Below
                        } else if p.lt(b, a) {
                            Rel::Above
                        } else {
                            Rel::Apart
                        }
                    })
                    .collect()
            })
            .collect();
        Pattern {
            need_down: (0..m).map(|i| p.down_degree(i)).collect(),
            need_up: (0..m).map(|i| p.up_degree(i)).collect(),
            antichain: p.is_antichain(),
            order,
            rel,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.order.len()
    }
}

/// One embedding problem: per-element candidate domains plus, for each
/// element, the set of elements it may be related to arbitrarily when the
/// pattern says "incomparable".
struct Problem<'a> {
    targets: &'a Targets,
    pattern: &'a Pattern,
    domain: Vec<u64>,
    loose: Vec<u16>,
    require: Option<usize>,
}

impl Problem<'_> {
    fn basic<'a>(
        targets: &'a Targets,
        pattern: &'a Pattern,
        mode: CopyMode,
        require: Option<usize>,
    ) -> Problem<'a> {
        let m = pattern.len();
        let domain = (0..m)
            .map(|e| {
                (0..targets.len())
                    .filter(|&u| {
                        targets.sub[u].count_ones() >= pattern.need_down[e]
                            && targets.sup[u].count_ones() >= pattern.need_up[e]
                    })
                    .fold(0u64, |mask, u| mask | 1 << u)
            })
            .collect();
        let loose = match mode {
            CopyMode::Weak => vec![u16::MAX; m],
            CopyMode::Strong => vec![0; m],
        };
        Problem { targets, pattern, domain, loose, require }
    }

    /// Members still available for step `t` given the first `fixed` steps.
    fn candidates(&self, t: usize, fixed: usize, assign: &[usize], used: u64) -> u64 {
        let e = self.pattern.order[t];
        let mut cand = self.domain[e] & !used;
        for (s, &u) in assign.iter().enumerate().take(fixed) {
            cand &= match self.pattern.rel[t][s] {
                Rel::Below => self.targets.sup[u],
                Rel::Above => self.targets.sub[u],
                Rel::Apart => {
                    if self.loose[e] >> self.pattern.order[s] & 1 == 1 {
                        self.targets.all
                    } else {
                        !(self.targets.sub[u] | self.targets.sup[u])
                    }
                }
            };
            if cand == 0 {
                break;
            }
        }
        cand
    }

    fn solve(&self) -> Option<Vec<usize>> {
        let m = self.pattern.len();
        if m > self.targets.len() {
            return None;
        }
        if let Some(r) = self.require {
            if r >= self.targets.len() {
                return None;
            }
        }
        let mut assign = vec![usize::MAX; m];
        if self.dfs(0, &mut assign, 0) {
            let mut map = vec![0; m];
            for (t, &u) in assign.iter().enumerate() {
                map[self.pattern.order[t]] = u;
            }
            Some(map)
        } else {
            None
        }
    }

    fn dfs(&self, t: usize, assign: &mut [usize], used: u64) -> bool {
        let m = self.pattern.len();
        if t == m {
            return self.require.is_none_or(|r| used >> r & 1 == 1);
        }
        let mut cand = self.candidates(t, t, assign, used);
        if let Some(r) = self.require {
            if used >> r & 1 == 0 {
                if t + 1 == m {
                    cand &= 1 << r;
                } else if !(t..m).any(|t2| self.candidates(t2, t, assign, used) >> r & 1 == 1) {
                    return false;
                }
            }
        }
        while cand != 0 {
            let u = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            assign[t] = u;
            if self.dfs(t + 1, assign, used | 1 << u) {
                return true;
            }
        }
        assign[t] = usize::MAX;
        false
    }
}

/// Existence-only query used in hot loops. Antichain patterns go through a
/// minimum chain partition instead of the embedding search.
pub(crate) fn contains_copy(
    members: &[u64],
    pattern: &Pattern,
    mode: CopyMode,
    require: Option<usize>,
) -> bool {
    let m = pattern.len();
    if m > members.len() {
        return false;
    }
    if pattern.antichain {
        return match (mode, require) {
            (CopyMode::Weak, _) => true,
            (CopyMode::Strong, None) => {
                chains::width(members.len(), |i, j| proper_subset(members[i], members[j])) >= m
            }
            (CopyMode::Strong, Some(r)) => {
                let rest: Vec<u64> = members
                    .iter()
                    .enumerate()
                    .filter(|&(i, &s)| i != r && !comparable(s, members[r]))
                    .map(|(_, &s)| s)
                    .collect();
                m == 1 || chains::width(rest.len(), |i, j| proper_subset(rest[i], rest[j])) >= m - 1
            }
        };
    }
    let targets = Targets::new(members);
    Problem::basic(&targets, pattern, mode, require).solve().is_some()
}

pub(crate) fn find_copy_raw(
    members: &[u64],
    pattern: &Pattern,
    mode: CopyMode,
    require: Option<usize>,
) -> Option<Embedding> {
    let targets = Targets::new(members);
    Problem::basic(&targets, pattern, mode, require)
        .solve()
        .map(|map| Embedding::from_map(map, members))
}

#[inline]
fn proper_subset(a: u64, b: u64) -> bool {
    a != b && a & !b == 0
}

#[inline]
fn comparable(a: u64, b: u64) -> bool {
    a & !b == 0 || b & !a == 0
}

fn check_family(fam: &SetFamily) -> Result<()> {
    if fam.len() > MAX_FAMILY {
        return Err(Error::FamilyTooLarge { size: fam.len(), max: MAX_FAMILY });
    }
    Ok(())
}

/// Least strong copy of `p` in `fam`, optionally forced to use member `require`.
pub fn find_strong_copy(fam: &SetFamily, p: &Poset, require: Option<usize>) -> Result<Option<Embedding>> {
    find_copy(fam, p, CopyMode::Strong, require)
}

/// Least weak copy of `p` in `fam`, optionally forced to use member `require`.
pub fn find_weak_copy(fam: &SetFamily, p: &Poset, require: Option<usize>) -> Result<Option<Embedding>> {
    find_copy(fam, p, CopyMode::Weak, require)
}

pub fn find_copy(
    fam: &SetFamily,
    p: &Poset,
    mode: CopyMode,
    require: Option<usize>,
) -> Result<Option<Embedding>> {
    check_family(fam)?;
    Ok(find_copy_raw(&fam.bits(), &Pattern::new(p), mode, require))
}

/// A copy in `F ∪ {G}`; member indices refer to `family`, which is `F ∪ {G}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CreatedCopy {
    pub family: SetFamily,
    pub embedding: Embedding,
}

/// Whether adding `g` to the `p`-free family `fam` creates a copy of `p`.
///
/// Only embeddings through `g` are searched, which is sound exactly because
/// `fam` is `p`-free; that precondition is checked.
pub fn creates_copy(
    fam: &SetFamily,
    g: GroundSet,
    p: &Poset,
    mode: CopyMode,
) -> Result<Option<CreatedCopy>> {
    check_family(fam)?;
    if fam.contains(g) {
        return Err(Error::Precondition(format!("{g} is already a member")));
    }
    let pattern = Pattern::new(p);
    if contains_copy(&fam.bits(), &pattern, mode, None) {
        return Err(Error::Precondition(format!(
            "family already contains a {} copy of the pattern",
            mode_name(mode)
        )));
    }
    let extended = fam.insert(g)?;
    check_family(&extended)?;
    let idx = extended.index_of(g).expect("just inserted");
    Ok(find_copy_raw(&extended.bits(), &pattern, mode, Some(idx))
        .map(|embedding| CreatedCopy { family: extended, embedding }))
}

pub(crate) fn mode_name(mode: CopyMode) -> &'static str {
    match mode {
        CopyMode::Weak => "weak",
        CopyMode::Strong => "strong",
    }
}

/// Which level of a height-two pattern the new set plays.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Bottom,
    Top,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlmostStrongCopy {
    /// Member indices refer to `F_1`, then `F_2`, then `g` last.
    pub embedding: Embedding,
    pub element: usize,
    pub level: Level,
}

/// A weak copy of a height-two `p` through `g` that is exact except between
/// `g` and copy members on its own level. Bottom elements other than `g`'s
/// come from `f1`, top elements from `f2`.
pub fn find_almost_strong_copy(
    f1: &SetFamily,
    f2: &SetFamily,
    g: GroundSet,
    p: &Poset,
) -> Result<Option<AlmostStrongCopy>> {
    let structure = p.structure();
    if structure.height != 2 {
        return Err(Error::Precondition(format!(
            "almost-strong copies need a height-2 pattern, got height {}",
            structure.height
        )));
    }
    if f1.contains(g) || f2.contains(g) {
        return Err(Error::Precondition(format!("{g} is already a member")));
    }
    let mut members: Vec<u64> = f1.bits();
    members.extend(f2.bits());
    members.push(g.0);
    if members.len() > MAX_FAMILY {
        return Err(Error::FamilyTooLarge { size: members.len(), max: MAX_FAMILY });
    }
    let mut sorted = members.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Precondition("F_1 and F_2 must be disjoint".into()));
    }

    let g_idx = members.len() - 1;
    let bottom_mask: u64 = (0..f1.len()).fold(0, |m, u| m | 1 << u);
    let top_mask: u64 = (f1.len()..f1.len() + f2.len()).fold(0, |m, u| m | 1 << u);
    let lower: u16 = structure.lower_level.iter().fold(0, |m, &e| m | 1 << e);

    let targets = Targets::new(&members);
    let pattern = Pattern::new(p);
    let m = p.len();
    for e in 0..m {
        let is_bottom = lower >> e & 1 == 1;
        let same_level = if is_bottom { lower } else { !lower };
        let mut problem = Problem::basic(&targets, &pattern, CopyMode::Strong, None);
        for x in 0..m {
            problem.domain[x] &= if lower >> x & 1 == 1 { bottom_mask } else { top_mask };
        }
        problem.domain[e] = 1 << g_idx;
        problem.loose[e] = same_level & !(1 << e);
        for x in 0..m {
            if x != e && same_level >> x & 1 == 1 {
                problem.loose[x] |= 1 << e;
            }
        }
        if let Some(map) = problem.solve() {
            return Ok(Some(AlmostStrongCopy {
                embedding: Embedding::from_map(map, &members),
                element: e,
                level: if is_bottom { Level::Bottom } else { Level::Top },
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::GroundSpec;

    fn fam(n: usize, total: usize, lists: &[&[usize]]) -> SetFamily {
        SetFamily::from_lists(GroundSpec::new(n, total).unwrap(), lists).unwrap()
    }

    fn set(e: &[usize]) -> GroundSet {
        GroundSet::from_elements(e.iter().copied()).unwrap()
    }

    #[test]
    fn fork_in_three_sets() {
        let f = fam(2, 2, &[&[], &[1], &[2]]);
        let v2 = Poset::named("V_2").unwrap();
        let e = find_strong_copy(&f, &v2, None).unwrap().unwrap();
        // b1, b2, a
        assert_eq!(e.sets, vec![set(&[1]), set(&[2]), set(&[])]);
        assert!(e.is_valid(&v2, CopyMode::Strong));
    }

    #[test]
    fn chain_has_no_antichain() {
        let f = fam(2, 2, &[&[], &[1], &[1, 2]]);
        let a3 = Poset::antichain(3).unwrap();
        assert!(find_strong_copy(&f, &a3, None).unwrap().is_none());
        let weak = find_weak_copy(&f, &a3, None).unwrap().unwrap();
        assert_eq!(weak.map, vec![0, 1, 2]);
    }

    #[test]
    fn wedge_diamond_six_two_is_cherry_free() {
        let f = fam(6, 8, &[&[], &[1, 2, 3, 4, 5, 6, 7], &[1, 2, 8], &[1, 7], &[2, 8]]);
        assert!(find_strong_copy(&f, &Poset::named("W_2").unwrap(), None).unwrap().is_none());
    }

    #[test]
    fn incomparable_pair_has_no_chain() {
        let f = fam(2, 2, &[&[1], &[2]]);
        assert!(find_weak_copy(&f, &Poset::chain(2).unwrap(), None).unwrap().is_none());
    }

    #[test]
    fn require_forces_member() {
        let f = fam(3, 3, &[&[], &[1], &[2], &[3]]);
        let c2 = Poset::chain(2).unwrap();
        let e = find_strong_copy(&f, &c2, Some(3)).unwrap().unwrap();
        assert!(e.uses(3));
        assert_eq!(e.sets, vec![set(&[]), set(&[3])]);
    }

    #[test]
    fn creates_copy_examples() {
        let f = fam(6, 8, &[&[], &[1, 2, 3, 4, 5, 6, 7], &[1, 2, 8], &[1, 7], &[2, 8]]);
        let w2 = Poset::named("W_2").unwrap();
        let made = creates_copy(&f, set(&[2, 5]), &w2, CopyMode::Strong).unwrap().unwrap();
        assert!(made.embedding.sets.contains(&set(&[1, 2, 3, 4, 5, 6, 7])));
        assert!(made.embedding.is_valid(&w2, CopyMode::Strong));

        let single = fam(2, 2, &[&[]]);
        let c2 = Poset::chain(2).unwrap();
        let made = creates_copy(&single, set(&[1]), &c2, CopyMode::Strong).unwrap().unwrap();
        assert_eq!(made.embedding.sets, vec![set(&[]), set(&[1])]);

        let top = fam(5, 5, &[&[1, 2, 3, 4], &[1, 2, 3, 5], &[1, 2, 4, 5], &[1, 3, 4, 5], &[2, 3, 4, 5], &[1, 2, 3, 4, 5]]);
        let v3 = Poset::named("V_3").unwrap();
        assert!(creates_copy(&top, set(&[1, 2, 3]), &v3, CopyMode::Strong).unwrap().is_none());
    }

    #[test]
    fn creates_copy_rejects_non_free_family() {
        let f = fam(2, 2, &[&[], &[1]]);
        let err = creates_copy(&f, set(&[2]), &Poset::chain(2).unwrap(), CopyMode::Strong);
        assert!(matches!(err, Err(Error::Precondition(_))));
        let err = creates_copy(&f, set(&[1]), &Poset::chain(3).unwrap(), CopyMode::Strong);
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn antichain_fast_path_agrees_with_search() {
        let members = [0b000u64, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110];
        for k in 1..=4 {
            let p = Poset::antichain(k).unwrap();
            let pat = Pattern::new(&p);
            for r in [None, Some(0), Some(1), Some(4)] {
                let fast = contains_copy(&members, &pat, CopyMode::Strong, r);
                let slow = find_copy_raw(&members, &pat, CopyMode::Strong, r).is_some();
                assert_eq!(fast, slow, "k={k} r={r:?}");
            }
        }
    }

    #[test]
    fn kst_almost_strong_levels() {
        // F_1 singletons, F_2 co-singletons of [5] for K_{2,2}
        let g5 = GroundSpec::inner(5).unwrap();
        let f1 = SetFamily::from_lists(g5, &[&[1], &[2], &[3]]).unwrap();
        let f2 = SetFamily::from_lists(g5, &[&[2, 3, 4, 5], &[1, 3, 4, 5], &[1, 2, 4, 5]]).unwrap();
        let k22 = Poset::named("K_2_2").unwrap();
        let top = find_almost_strong_copy(&f1, &f2, set(&[1, 2]), &k22).unwrap().unwrap();
        assert_eq!(top.level, Level::Top);
        let bottom = find_almost_strong_copy(&f1, &f2, set(&[4]), &k22).unwrap().unwrap();
        assert_eq!(bottom.level, Level::Bottom);
        assert!(bottom.embedding.is_valid(&k22, CopyMode::Weak));
    }

    #[test]
    fn almost_strong_needs_members() {
        let g = GroundSpec::inner(3).unwrap();
        let empty = SetFamily::empty(g);
        let k11 = Poset::named("K_1_1").unwrap();
        assert!(find_almost_strong_copy(&empty, &empty, set(&[1]), &k11).unwrap().is_none());
        let d2 = Poset::named("D_2").unwrap();
        assert!(find_almost_strong_copy(&empty, &empty, set(&[1]), &d2).is_err());
    }
}
