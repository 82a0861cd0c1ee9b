//! Subsets of `[N]` as machine words and canonically ordered families of them.
//!
//! Element `i` (1-based) is bit `i - 1`. The inner ground set is `[n]`, the
//! coordinates `n+1..=N` are external.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poset::{Poset, MAX_POSET_SIZE};

/// Largest inner dimension any verifier will iterate over.
pub const MAX_INNER: usize = 24;
/// Largest total dimension; a set must fit one word.
pub const MAX_UNIVERSE: usize = 60;

#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundSet(pub u64);

impl GroundSet {
    pub const EMPTY: GroundSet = GroundSet(0);

    /// Builds a set from 1-based elements.
    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Result<Self> {
        let mut bits = 0u64;
        for e in elements {
            if e == 0 || e > MAX_UNIVERSE {
                return Err(Error::Parse(format!(
                    "element {e} is outside 1..={MAX_UNIVERSE}"
                )));
            }
            bits |= 1 << (e - 1);
        }
        Ok(GroundSet(bits))
    }

    /// `[lo, hi]`, empty when `lo > hi`.
    pub fn interval(lo: usize, hi: usize) -> Self {
        if lo == 0 || lo > hi {
            return Self::EMPTY;
        }
        GroundSet(prefix_mask(hi) & !prefix_mask(lo - 1))
    }

    /// `[k]`.
    pub fn prefix(k: usize) -> Self {
        GroundSet(prefix_mask(k))
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!((1..=MAX_UNIVERSE).contains(&i));
        GroundSet(1 << (i - 1))
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i >= 1 && self.0 >> (i - 1) & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_proper_subset(self, other: Self) -> bool {
        self != other && self.is_subset(other)
    }

    #[inline]
    pub fn comparable(self, other: Self) -> bool {
        self.is_subset(other) || other.is_subset(self)
    }

    pub fn union(self, other: Self) -> Self {
        GroundSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        GroundSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        GroundSet(self.0 & !other.0)
    }

    /// Largest element, or 0 for the empty set.
    pub fn max_element(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub fn elements(self) -> Vec<usize> {
        (0..64).filter(|&b| self.0 >> b & 1 == 1).map(|b| b + 1).collect()
    }
}

#[inline]
pub(crate) fn prefix_mask(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

impl fmt::Display for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for GroundSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroundSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        GroundSet::from_elements(v).map_err(serde::de::Error::custom)
    }
}

/// The split universe: inner ground `[n]`, total ground `[N]`, and an anchor
/// `A ⊆ (n, N]` for external saturation (empty when unused).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroundSpec {
    pub n: usize,
    pub total: usize,
    pub anchor: GroundSet,
}

impl GroundSpec {
    pub fn new(n: usize, total: usize) -> Result<Self> {
        Self::with_anchor(n, total, GroundSet::EMPTY)
    }

    /// The Boolean lattice `B_n` with no external coordinates.
    pub fn inner(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    pub fn with_anchor(n: usize, total: usize, anchor: GroundSet) -> Result<Self> {
        if n == 0 || n > MAX_INNER {
            return Err(Error::InvalidGround(format!("n = {n} must lie in 1..={MAX_INNER}")));
        }
        if total < n || total > MAX_UNIVERSE {
            return Err(Error::InvalidGround(format!(
                "N = {total} must lie in {n}..={MAX_UNIVERSE}"
            )));
        }
        let g = GroundSpec { n, total, anchor };
        if !anchor.is_subset(g.external()) {
            return Err(Error::InvalidGround(format!(
                "anchor {anchor} must be a subset of [{}, {}]",
                n + 1,
                total
            )));
        }
        Ok(g)
    }

    pub fn set_anchor(self, anchor: GroundSet) -> Result<Self> {
        Self::with_anchor(self.n, self.total, anchor)
    }

    /// `[n]`.
    pub fn inner_set(&self) -> GroundSet {
        GroundSet::prefix(self.n)
    }

    /// `[N]`.
    pub fn universe(&self) -> GroundSet {
        GroundSet::prefix(self.total)
    }

    /// `(n, N]`.
    pub fn external(&self) -> GroundSet {
        GroundSet::interval(self.n + 1, self.total)
    }

    /// `A' = [N] \ ([n] ∪ A)`, the anchor that the complemented family uses.
    pub fn complementary_anchor(&self) -> GroundSet {
        self.external().difference(self.anchor)
    }

    pub fn contains(&self, s: GroundSet) -> bool {
        s.is_subset(self.universe())
    }
}

/// `π(F) = F ∩ [n]`.
#[inline]
pub fn projection(set: GroundSet, ground: &GroundSpec) -> GroundSet {
    set.intersection(ground.inner_set())
}

/// A set of distinct subsets of `[N]`, kept sorted by integer encoding.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetFamily {
    ground: GroundSpec,
    sets: Vec<GroundSet>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct FamilyJson {
    pub n: usize,
    #[serde(rename = "N")]
    pub total: usize,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<GroundSet>,
    pub sets: Vec<GroundSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<serde_json::Value>,
}

impl SetFamily {
    /// Canonicalizes the order and rejects duplicates or sets outside `[N]`.
    pub fn new(ground: GroundSpec, sets: impl IntoIterator<Item = GroundSet>) -> Result<Self> {
        let mut sets: Vec<GroundSet> = sets.into_iter().collect();
        for &s in &sets {
            if !ground.contains(s) {
                return Err(Error::OutsideUniverse { set: s.to_string(), universe: ground.total });
            }
        }
        sets.sort_unstable();
        if let Some(w) = sets.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateSet(w[0].to_string()));
        }
        Ok(SetFamily { ground, sets })
    }

    /// Convenience constructor from 1-based element lists.
    pub fn from_lists(ground: GroundSpec, lists: &[&[usize]]) -> Result<Self> {
        let sets = lists
            .iter()
            .map(|l| GroundSet::from_elements(l.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ground, sets)
    }

    pub fn empty(ground: GroundSpec) -> Self {
        SetFamily { ground, sets: Vec::new() }
    }

    pub fn ground(&self) -> &GroundSpec {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.n
    }

    pub fn sets(&self) -> &[GroundSet] {
        &self.sets
    }

    pub fn bits(&self) -> Vec<u64> {
        self.sets.iter().map(|s| s.0).collect()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = GroundSet> + '_ {
        self.sets.iter().copied()
    }

    pub fn contains(&self, s: GroundSet) -> bool {
        self.sets.binary_search(&s).is_ok()
    }

    pub fn index_of(&self, s: GroundSet) -> Option<usize> {
        self.sets.binary_search(&s).ok()
    }

    /// Same sets over a different ground specification.
    pub fn with_ground(&self, ground: GroundSpec) -> Result<Self> {
        Self::new(ground, self.sets.iter().copied())
    }

    pub fn insert(&self, s: GroundSet) -> Result<Self> {
        Self::new(self.ground, self.sets.iter().copied().chain(std::iter::once(s)))
    }

    pub fn union(&self, other: &SetFamily) -> Result<Self> {
        Self::new(self.ground, self.sets.iter().chain(other.sets.iter()).copied())
    }

    /// Whether every member lies inside `B_n`.
    pub fn is_inner(&self) -> bool {
        let inner = self.ground.inner_set();
        self.sets.iter().all(|s| s.is_subset(inner))
    }

    /// `(F ∩ B_n, F \ B_n)`, each in canonical order.
    pub fn split_in_out(&self) -> (SetFamily, SetFamily) {
        let inner = self.ground.inner_set();
        let (a, b): (Vec<_>, Vec<_>) = self.sets.iter().partition(|s| s.is_subset(inner));
        (
            SetFamily { ground: self.ground, sets: a },
            SetFamily { ground: self.ground, sets: b },
        )
    }

    /// `{[N] \ F : F ∈ family}` over the same ground.
    pub fn complement(&self) -> SetFamily {
        let u = self.ground.universe();
        let mut sets: Vec<_> = self.sets.iter().map(|s| u.difference(*s)).collect();
        sets.sort_unstable();
        SetFamily { ground: self.ground, sets }
    }

    /// `{F ∪ shift : F ∈ family}`.
    pub fn translate(&self, shift: GroundSet) -> Result<SetFamily> {
        if !self.ground.contains(shift) {
            return Err(Error::OutsideUniverse {
                set: shift.to_string(),
                universe: self.ground.total,
            });
        }
        Self::new(self.ground, self.sets.iter().map(|s| s.union(shift)))
    }

    /// Projections `π(F)` in family order (not deduplicated).
    pub fn projections(&self) -> Vec<GroundSet> {
        self.sets.iter().map(|&s| projection(s, &self.ground)).collect()
    }

    /// The first pair of distinct members (by index) with equal projections.
    pub fn projection_collision(&self) -> Option<(usize, usize)> {
        let proj = self.projections();
        let mut idx: Vec<usize> = (0..proj.len()).collect();
        idx.sort_by_key(|&i| (proj[i], i));
        let mut best: Option<(usize, usize)> = None;
        for w in idx.windows(2) {
            if proj[w[0]] == proj[w[1]] {
                let pair = (w[0], w[1]);
                if best.is_none_or(|b| pair < b) {
                    best = Some(pair);
                }
            }
        }
        best
    }

    /// Strict containment order on member indices.
    pub fn containment_order(&self) -> Result<Poset> {
        if self.sets.len() > MAX_POSET_SIZE {
            return Err(Error::FamilyTooLarge { size: self.sets.len(), max: MAX_POSET_SIZE });
        }
        if self.sets.is_empty() {
            return Err(Error::InvalidPoset("the empty family has no containment order".into()));
        }
        let mut rel = Vec::new();
        for (i, a) in self.sets.iter().enumerate() {
            for (j, b) in self.sets.iter().enumerate() {
                if a.is_proper_subset(*b) {
                    rel.push((i, j));
                }
            }
        }
        Poset::from_relations(self.sets.len(), &rel)
    }

    pub(crate) fn to_json_struct(&self, provenance: Option<serde_json::Value>) -> FamilyJson {
        FamilyJson {
            n: self.ground.n,
            total: self.ground.total,
            anchor: (!self.ground.anchor.is_empty()).then_some(self.ground.anchor),
            sets: self.sets.clone(),
            provenance,
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_json_struct(None)).expect("family json is serializable")
    }

    /// Family JSON with a `provenance` object attached.
    pub fn to_json_with_provenance(&self, provenance: serde_json::Value) -> serde_json::Value {
        serde_json::to_value(self.to_json_struct(Some(provenance))).expect("family json is serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: FamilyJson = serde_json::from_str(s)?;
        Self::from_json_struct(json)
    }

    pub(crate) fn from_json_struct(json: FamilyJson) -> Result<Self> {
        let ground =
            GroundSpec::with_anchor(json.n, json.total, json.anchor.unwrap_or(GroundSet::EMPTY))?;
        Self::new(ground, json.sets)
    }
}

impl Serialize for SetFamily {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_struct(None).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SetFamily {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let json = FamilyJson::deserialize(deserializer)?;
        SetFamily::from_json_struct(json).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.sets.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(e: &[usize]) -> GroundSet {
        GroundSet::from_elements(e.iter().copied()).unwrap()
    }

    #[test]
    fn projection_examples() {
        let g = GroundSpec::new(4, 7).unwrap();
        assert_eq!(projection(set(&[1, 3, 6]), &g), set(&[1, 3]));
        assert_eq!(projection(set(&[5]), &g), GroundSet::EMPTY);
        assert_eq!(projection(GroundSet::prefix(5), &g), GroundSet::prefix(4));
    }

    #[test]
    fn ground_validation() {
        assert!(GroundSpec::new(0, 3).is_err());
        assert!(GroundSpec::new(4, 3).is_err());
        assert!(GroundSpec::new(4, 61).is_err());
        assert!(GroundSpec::new(25, 30).is_err());
        assert!(GroundSpec::with_anchor(4, 6, set(&[2])).is_err());
        assert!(GroundSpec::with_anchor(4, 6, set(&[7])).is_err());
        let g = GroundSpec::with_anchor(4, 6, set(&[6])).unwrap();
        assert_eq!(g.complementary_anchor(), set(&[5]));
    }

    #[test]
    fn canonical_order_and_duplicates() {
        let g = GroundSpec::inner(3).unwrap();
        let f = SetFamily::from_lists(g, &[&[1, 2], &[], &[3]]).unwrap();
        assert_eq!(f.sets(), &[set(&[]), set(&[1, 2]), set(&[3])]);
        assert!(matches!(
            SetFamily::from_lists(g, &[&[1], &[1]]),
            Err(Error::DuplicateSet(_))
        ));
        assert!(matches!(
            SetFamily::from_lists(g, &[&[4]]),
            Err(Error::OutsideUniverse { .. })
        ));
    }

    #[test]
    fn split_examples() {
        let g = GroundSpec::new(3, 5).unwrap();
        let inner = SetFamily::from_lists(g, &[&[], &[1], &[2, 3]]).unwrap();
        let (a, b) = inner.split_in_out();
        assert_eq!(a, inner);
        assert!(b.is_empty());
        let outer = SetFamily::from_lists(g, &[&[4], &[1, 4], &[4, 5]]).unwrap();
        let (a, b) = outer.split_in_out();
        assert!(a.is_empty());
        assert_eq!(b, outer);
    }

    #[test]
    fn complement_examples() {
        let g = GroundSpec::inner(3).unwrap();
        let f = SetFamily::from_lists(g, &[&[]]).unwrap();
        assert_eq!(f.complement().sets(), &[GroundSet::prefix(3)]);
        let h = SetFamily::from_lists(g, &[&[1], &[2, 3], &[]]).unwrap();
        assert_eq!(h.complement().complement(), h);
    }

    #[test]
    fn translate_examples() {
        let g = GroundSpec::new(3, 5).unwrap();
        let f = SetFamily::from_lists(g, &[&[1]]).unwrap();
        assert_eq!(f.translate(set(&[5])).unwrap().sets(), &[set(&[1, 5])]);
        assert_eq!(f.translate(GroundSet::EMPTY).unwrap(), f);
        assert!(f.translate(set(&[6])).is_err());
    }

    #[test]
    fn containment_order_examples() {
        let g = GroundSpec::inner(2).unwrap();
        let chain = SetFamily::from_lists(g, &[&[], &[1], &[1, 2]]).unwrap();
        assert_eq!(chain.containment_order().unwrap(), Poset::chain(3).unwrap());
        let anti = SetFamily::from_lists(g, &[&[1], &[2]]).unwrap();
        assert_eq!(anti.containment_order().unwrap(), Poset::antichain(2).unwrap());
    }

    #[test]
    fn collision_is_least_pair() {
        let g = GroundSpec::new(2, 4).unwrap();
        let f = SetFamily::from_lists(g, &[&[1], &[1, 3], &[2], &[2, 4], &[1, 4]]).unwrap();
        // order: {1}, {2}, {1,3}, {2,4}, {1,4}
        assert_eq!(f.projection_collision(), Some((0, 2)));
    }

    #[test]
    fn json_round_trip() {
        let g = GroundSpec::with_anchor(4, 6, set(&[6])).unwrap();
        let f = SetFamily::from_lists(g, &[&[], &[3], &[1, 2], &[2, 5]]).unwrap();
        let text = serde_json::to_string(&f.to_json_value()).unwrap();
        assert!(text.contains("\"A\":[6]"));
        assert_eq!(SetFamily::from_json_str(&text).unwrap(), f);
        let bad = r#"{"n": 2, "N": 2, "sets": [[3]]}"#;
        assert!(SetFamily::from_json_str(bad).is_err());
    }
}
