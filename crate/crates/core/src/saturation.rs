//! Verifiers for ordinary, projective, relaxed projective, external and
//! almost saturation, the structural claims about fork-saturated families,
//! and the coordinate blow-up map.
//!
//! Every failing report carries a witness that can be re-checked on its own:
//! a copy inside the family, a probe set that creates no copy, or two members
//! with the same projection. When several probe sets fail, the one with the
//! least encoding is reported.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::copy::{self, CopyMode, Embedding, Pattern};
use crate::error::{Error, Result};
use crate::family::{prefix_mask, projection, GroundSet, GroundSpec, SetFamily, MAX_INNER, MAX_UNIVERSE};
use crate::poset::Poset;

/// Probe scans with at least this many sets are spread over the rayon pool.
const PARALLEL_PROBES: u64 = 1 << 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Violation {
    /// The family itself contains a copy.
    Free,
    /// Some probe set creates no copy.
    Saturating,
    /// Two members share a projection.
    Projection,
    /// A member lies outside the allowed ground set.
    Ground,
}

/// How condition (iii) is read for external saturation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ProjectionRule {
    /// Projections onto `[n]` are pairwise distinct.
    #[default]
    Strict,
    /// Only the sets themselves must be distinct.
    Relaxed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A copy of the pattern inside the family.
    Copy { embedding: Embedding },
    /// A probe set whose addition creates no copy.
    NonSaturating { set: GroundSet },
    /// Two members with the same projection.
    Collision { first: GroundSet, second: GroundSet, projection: GroundSet },
    /// A member outside the ground set the notion allows.
    OutsideGround { set: GroundSet },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationReport {
    pub verdict: Verdict,
    #[serde(default)]
    pub violated: Option<Violation>,
    #[serde(default)]
    pub witness: Option<Witness>,
    #[serde(default)]
    pub projection_rule: Option<ProjectionRule>,
    /// Under the relaxed rule: the projection collision the strict rule
    /// would have reported, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strict_collision: Option<Witness>,
}

impl SaturationReport {
    fn holds() -> Self {
        SaturationReport {
            verdict: Verdict::Holds,
            violated: None,
            witness: None,
            projection_rule: None,
            strict_collision: None,
        }
    }

    fn fails(violated: Violation, witness: Witness) -> Self {
        SaturationReport {
            verdict: Verdict::Fails,
            violated: Some(violated),
            witness: Some(witness),
            projection_rule: None,
            strict_collision: None,
        }
    }

    pub fn is_holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    fn with_rule(mut self, rule: ProjectionRule) -> Self {
        self.projection_rule = Some(rule);
        self
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report json is serializable")
    }
}

fn check_inner_bound(n: usize) -> Result<()> {
    if n > MAX_INNER {
        return Err(Error::Parameter(format!(
            "verification iterates over 2^n sets; n = {n} exceeds {MAX_INNER}"
        )));
    }
    Ok(())
}

fn check_engine_size(len: usize) -> Result<()> {
    // one slot is needed for the probe set
    if len + 1 > copy::MAX_FAMILY {
        return Err(Error::FamilyTooLarge { size: len, max: copy::MAX_FAMILY - 1 });
    }
    Ok(())
}

/// `true` iff `members ∪ {g}` contains a copy through `g`. `members` must be
/// free of copies and must not contain `g`.
pub(crate) fn probe_creates(members: &[u64], g: u64, pattern: &Pattern, mode: CopyMode) -> bool {
    let mut with_g = Vec::with_capacity(members.len() + 1);
    with_g.extend_from_slice(members);
    with_g.push(g);
    copy::contains_copy(&with_g, pattern, mode, Some(members.len()))
}

/// Least probe (in the order `probe(0), probe(1), ...`, which must be
/// increasing in encoding) that is not a member and creates no copy.
fn first_unsaturated(
    members: &[u64],
    count: u64,
    probe: impl Fn(u64) -> u64 + Sync,
    pattern: &Pattern,
    mode: CopyMode,
) -> Option<u64> {
    let sorted = {
        let mut s = members.to_vec();
        s.sort_unstable();
        s
    };
    let fails = |g: &u64| sorted.binary_search(g).is_err() && !probe_creates(members, *g, pattern, mode);
    if count >= PARALLEL_PROBES {
        (0..count).into_par_iter().map(&probe).find_first(fails)
    } else {
        (0..count).map(&probe).find(fails)
    }
}

fn freeness(members: &[u64], pattern: &Pattern, mode: CopyMode) -> Option<SaturationReport> {
    copy::find_copy_raw(members, pattern, mode, None)
        .map(|embedding| SaturationReport::fails(Violation::Free, Witness::Copy { embedding }))
}

fn collision_witness(fam: &SetFamily) -> Option<Witness> {
    fam.projection_collision().map(|(a, b)| {
        let (first, second) = (fam.sets()[a], fam.sets()[b]);
        Witness::Collision { first, second, projection: projection(first, fam.ground()) }
    })
}

/// Ordinary weak or strong saturation of a family inside `B_n`.
pub fn verify_ordinary(fam: &SetFamily, p: &Poset, mode: CopyMode) -> Result<SaturationReport> {
    let n = fam.n();
    check_inner_bound(n)?;
    check_engine_size(fam.len())?;
    let inner = fam.ground().inner_set();
    if let Some(s) = fam.iter().find(|s| !s.is_subset(inner)) {
        return Err(Error::Precondition(format!("{s} is not a subset of [{n}]")));
    }
    let members = fam.bits();
    let pattern = Pattern::new(p);
    if let Some(report) = freeness(&members, &pattern, mode) {
        return Ok(report);
    }
    Ok(match first_unsaturated(&members, 1 << n, |b| b, &pattern, mode) {
        Some(g) => SaturationReport::fails(Violation::Saturating, Witness::NonSaturating { set: GroundSet(g) }),
        None => SaturationReport::holds(),
    })
}

/// Conditions (i) and (ii) of projective saturation: strongly free, and every
/// `G ∈ B_n` outside the family creates a strong copy.
pub fn verify_relaxed_projective(fam: &SetFamily, p: &Poset) -> Result<SaturationReport> {
    let n = fam.n();
    check_inner_bound(n)?;
    check_engine_size(fam.len())?;
    let members = fam.bits();
    let pattern = Pattern::new(p);
    if let Some(report) = freeness(&members, &pattern, CopyMode::Strong) {
        return Ok(report);
    }
    Ok(match first_unsaturated(&members, 1 << n, |b| b, &pattern, CopyMode::Strong) {
        Some(g) => SaturationReport::fails(Violation::Saturating, Witness::NonSaturating { set: GroundSet(g) }),
        None => SaturationReport::holds(),
    })
}

/// Projective saturation: conditions (i), (ii) and injective projections.
pub fn verify_projective(fam: &SetFamily, p: &Poset) -> Result<SaturationReport> {
    let report = verify_relaxed_projective(fam, p)?;
    if !report.is_holds() {
        return Ok(report);
    }
    Ok(match collision_witness(fam) {
        Some(w) => SaturationReport::fails(Violation::Projection, w),
        None => report,
    })
}

/// External saturation against `A B_n = {A ∪ B : B ⊆ [n]}`.
pub fn verify_external(
    fam: &SetFamily,
    p: &Poset,
    anchor: GroundSet,
    rule: ProjectionRule,
) -> Result<SaturationReport> {
    let ground = fam.ground();
    let n = ground.n;
    check_inner_bound(n)?;
    check_engine_size(fam.len())?;
    if !anchor.intersection(ground.inner_set()).is_empty() {
        return Err(Error::Precondition(format!("anchor {anchor} meets [{n}]")));
    }
    if !ground.contains(anchor) {
        return Err(Error::Precondition(format!(
            "anchor {anchor} lies outside [{}]",
            ground.total
        )));
    }
    let members = fam.bits();
    let pattern = Pattern::new(p);
    if let Some(report) = freeness(&members, &pattern, CopyMode::Strong) {
        return Ok(report.with_rule(rule));
    }
    let a = anchor.0;
    if let Some(g) = first_unsaturated(&members, 1 << n, |b| a | b, &pattern, CopyMode::Strong) {
        return Ok(SaturationReport::fails(Violation::Saturating, Witness::NonSaturating { set: GroundSet(g) })
            .with_rule(rule));
    }
    let collision = collision_witness(fam);
    Ok(match (rule, collision) {
        (ProjectionRule::Strict, Some(w)) => {
            SaturationReport::fails(Violation::Projection, w).with_rule(rule)
        }
        (ProjectionRule::Relaxed, Some(w)) => {
            let mut report = SaturationReport::holds().with_rule(rule);
            report.strict_collision = Some(w);
            report
        }
        (_, None) => SaturationReport::holds().with_rule(rule),
    })
}

/// Almost saturation of a height-two family `F_1 ∪ F_2 ⊆ B_n`.
pub fn verify_almost_saturated(f1: &SetFamily, f2: &SetFamily, p: &Poset) -> Result<SaturationReport> {
    let structure = p.structure();
    if structure.height != 2 {
        return Err(Error::Precondition(format!(
            "almost saturation needs a height-2 pattern, got height {}",
            structure.height
        )));
    }
    if structure.has_isolated_c2() {
        return Err(Error::Precondition("the pattern has an isolated C_2 component".into()));
    }
    let n = f1.n();
    if f2.n() != n {
        return Err(Error::Precondition("F_1 and F_2 use different inner dimensions".into()));
    }
    check_inner_bound(n)?;
    if !f1.is_inner() || !f2.is_inner() {
        return Err(Error::Precondition(format!("F_1 and F_2 must lie inside B_{n}")));
    }
    let both = f1.union(f2).map_err(|_| Error::Precondition("F_1 and F_2 must be disjoint".into()))?;
    check_engine_size(both.len())?;
    let pattern = Pattern::new(p);
    if let Some(report) = freeness(&both.bits(), &pattern, CopyMode::Strong) {
        return Ok(report);
    }
    for b in 0..1u64 << n {
        let g = GroundSet(b);
        if both.contains(g) {
            continue;
        }
        if copy::find_almost_strong_copy(f1, f2, g, p)?.is_none() {
            return Ok(SaturationReport::fails(Violation::Saturating, Witness::NonSaturating { set: g }));
        }
    }
    Ok(SaturationReport::holds())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimCheck {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(GroundSet, GroundSet)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VeeClaims {
    /// No inner member is contained in an outer member.
    pub in_and_out: ClaimCheck,
    /// `[n]` is a member.
    pub top_present: ClaimCheck,
}

/// The two structural claims every projective fork-saturated family satisfies.
pub fn vee_structure_checks(fam: &SetFamily) -> VeeClaims {
    let (inner, outer) = fam.split_in_out();
    let pair = inner
        .iter()
        .flat_map(|a| outer.iter().map(move |b| (a, b)))
        .find(|&(a, b)| a.is_subset(b));
    let top = fam.ground().inner_set();
    VeeClaims {
        in_and_out: ClaimCheck { holds: pair.is_none(), witness: pair },
        top_present: ClaimCheck { holds: fam.contains(top), witness: None },
    }
}

/// Coordinates `i ∈ [n]` for which no two members satisfy `F \ F' = {i}`.
pub fn dichotomy_scan(fam: &SetFamily) -> Vec<usize> {
    let mut hit = 0u64;
    for a in fam.iter() {
        for b in fam.iter() {
            let d = a.difference(b).0;
            if d.count_ones() == 1 {
                hit |= d;
            }
        }
    }
    (1..=fam.n()).filter(|&i| hit >> (i - 1) & 1 == 0).collect()
}

/// Exchanges coordinates `i` and `j` in every member.
pub fn swap_coordinates(fam: &SetFamily, i: usize, j: usize) -> Result<SetFamily> {
    let total = fam.ground().total;
    if i == 0 || j == 0 || i > total || j > total {
        return Err(Error::Parameter(format!("coordinates {i}, {j} outside [{total}]")));
    }
    let swap = |s: GroundSet| {
        let (bi, bj) = (s.contains(i), s.contains(j));
        let mut bits = s.0 & !(1 << (i - 1)) & !(1 << (j - 1));
        if bi {
            bits |= 1 << (j - 1);
        }
        if bj {
            bits |= 1 << (i - 1);
        }
        GroundSet(bits)
    };
    SetFamily::new(*fam.ground(), fam.iter().map(swap))
}

/// Image of one set under the blow-up of coordinate `n0` into `[n0, n]`.
/// External coordinates `x > n0` move to `x + n - n0`.
pub fn blow_up_set(set: GroundSet, n0: usize, n: usize) -> GroundSet {
    let inner = set.0 & prefix_mask(n0);
    let outer = (set.0 & !prefix_mask(n0)) << (n - n0);
    let mut bits = inner | outer;
    if set.contains(n0) {
        bits |= GroundSet::interval(n0 + 1, n).0;
    }
    GroundSet(bits)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowUp {
    pub family: SetFamily,
    /// Whether `n0` was a free coordinate, i.e. the blown-up family is
    /// guaranteed to stay projective saturated.
    pub n0_free: bool,
}

/// Blows up the last inner coordinate `n0 = fam.n()` into `n - n0 + 1`
/// coordinates.
pub fn blow_up(fam: &SetFamily, n: usize) -> Result<BlowUp> {
    let ground = fam.ground();
    let n0 = ground.n;
    if n < n0 {
        return Err(Error::Parameter(format!("cannot blow up B_{n0} to a smaller B_{n}")));
    }
    let total = ground.total + (n - n0);
    if total > MAX_UNIVERSE || n > MAX_INNER {
        return Err(Error::Parameter(format!("blow-up to n = {n} exceeds the universe cap")));
    }
    let new_ground = GroundSpec::with_anchor(n, total, blow_up_set(ground.anchor, n0, n))?;
    let family = SetFamily::new(new_ground, fam.iter().map(|s| blow_up_set(s, n0, n)))?;
    Ok(BlowUp { family, n0_free: dichotomy_scan(fam).contains(&n0) })
}

/// Moves coordinate `i` to position `n0 = fam.n()` and blows it up.
pub fn blow_up_coordinate(fam: &SetFamily, i: usize, n: usize) -> Result<BlowUp> {
    let n0 = fam.n();
    if i == 0 || i > n0 {
        return Err(Error::Parameter(format!("coordinate {i} is not in [{n0}]")));
    }
    blow_up(&swap_coordinates(fam, i, n0)?, n)
}
