//! Exact minimum sizes of saturated families by iterative deepening.
//!
//! Families of a fixed size are enumerated as increasing sequences of set
//! encodings, so the first valid family met is the lexicographically least
//! one. Freeness and projection injectivity are maintained as sets are added;
//! saturation is tested only on complete families. Two symmetry rules cut the
//! enumeration without changing which family is met first:
//!
//! * the first set must be the least set of its orbit under permutations of
//!   the inner coordinates and of the external coordinates (anchor block and
//!   non-anchor block separately);
//! * a complete family must be lexicographically least among its images under
//!   the external permutations.
//!
//! The least valid family is least in its own orbit, so it passes both rules.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::chains;
use crate::copy::{self, CopyMode, Pattern, MAX_FAMILY};
use crate::error::{Error, Result};
use crate::family::{prefix_mask, GroundSet, GroundSpec, SetFamily};
use crate::poset::Poset;
use crate::saturation::{probe_creates, ProjectionRule};

pub const MAX_SEARCH_INNER: usize = 6;
pub const MAX_EXTERNAL_CAP: usize = 4;
/// Bound on `n + external_cap`, so candidate lists stay below a thousand sets.
pub const MAX_SEARCH_UNIVERSE: usize = 9;
pub const DEFAULT_EXTERNAL_CAP: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Weak copies, families inside `B_n`.
    Sat,
    /// Strong copies, families inside `B_n`.
    SatStar,
    Projective,
    RelaxedProjective,
    External,
}

impl SearchMode {
    pub fn label(self) -> &'static str {
        match self {
            SearchMode::Sat => "sat",
            SearchMode::SatStar => "sat-star",
            SearchMode::Projective => "projective",
            SearchMode::RelaxedProjective => "relaxed-projective",
            SearchMode::External => "external",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "sat" | "weak" => SearchMode::Sat,
            "sat-star" | "strong" | "ordinary" => SearchMode::SatStar,
            "projective" => SearchMode::Projective,
            "relaxed-projective" | "relaxed" => SearchMode::RelaxedProjective,
            "external" => SearchMode::External,
            other => return Err(Error::Parse(format!("unknown search mode `{other}`"))),
        })
    }

    fn uses_externals(self) -> bool {
        !matches!(self, SearchMode::Sat | SearchMode::SatStar)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Number of coordinates beyond `[n]`; mode default when unset.
    pub external_cap: Option<usize>,
    /// Largest family size tried; all candidate sets when unset.
    pub max_size: Option<usize>,
    /// Abandon the search after this many nodes.
    pub node_limit: Option<u64>,
    pub rule: ProjectionRule,
}

/// The configuration actually used, echoed in every outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub external_cap: usize,
    pub max_size: usize,
    pub node_limit: Option<u64>,
    pub rule: ProjectionRule,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prunes {
    /// Partial families that already contained a copy.
    pub copy: u64,
    /// Sets rejected for repeating a projection.
    pub projection: u64,
    /// Complete families rejected by the external-permutation rule.
    pub symmetry: u64,
    /// Complete families with an unsaturated probe.
    pub unsaturated: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes: Prunes,
    pub millis: u64,
    /// Sizes searched completely without a valid family.
    pub sizes_exhausted: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub mode: SearchMode,
    pub n: usize,
    /// `None` when no valid family exists up to `max_size` or the search was abandoned.
    pub value: Option<usize>,
    pub witness: Option<SetFamily>,
    pub anchor: Option<GroundSet>,
    /// The value is a minimum over families with at most `external_cap`
    /// external coordinates only.
    pub exact_under_cap: bool,
    pub abandoned: Option<String>,
    pub config: ResolvedConfig,
    pub stats: SearchStats,
}

#[derive(Default)]
struct Counters {
    nodes: AtomicU64,
    copy: AtomicU64,
    projection: AtomicU64,
    symmetry: AtomicU64,
    unsaturated: AtomicU64,
    abort: AtomicBool,
}

impl Counters {
    fn bump(c: &AtomicU64) {
        c.fetch_add(1, Ordering::Relaxed);
    }

    fn prunes(&self) -> Prunes {
        Prunes {
            copy: self.copy.load(Ordering::Relaxed),
            projection: self.projection.load(Ordering::Relaxed),
            symmetry: self.symmetry.load(Ordering::Relaxed),
            unsaturated: self.unsaturated.load(Ordering::Relaxed),
        }
    }
}

struct Abort;

/// Everything fixed for one (mode, anchor) combination.
struct Space<'a> {
    n: usize,
    anchor: u64,
    candidates: Vec<u64>,
    probes: Vec<u64>,
    injective: bool,
    mode: CopyMode,
    pattern: &'a Pattern,
    /// Non-identity permutations of the external coordinates that fix the
    /// anchor block, as bit-index maps over the whole universe.
    ext_perms: Vec<Vec<usize>>,
    block_masks: Vec<u64>,
    node_limit: Option<u64>,
    counters: &'a Counters,
}

impl Space<'_> {
    fn project(&self, s: u64) -> u64 {
        s & prefix_mask(self.n)
    }

    /// Least image of `s` under the coordinate symmetries.
    fn orbit_min(&self, s: u64) -> u64 {
        self.block_masks.iter().fold(0, |acc, &block| {
            let count = (s & block).count_ones();
            let low = block.trailing_zeros();
            acc | (prefix_mask(count as usize) << low)
        })
    }

    fn permute(s: u64, perm: &[usize]) -> u64 {
        let mut out = 0;
        let mut rest = s;
        while rest != 0 {
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= 1 << perm[b];
        }
        out
    }

    fn least_under_externals(&self, members: &[u64]) -> bool {
        let mut image = Vec::with_capacity(members.len());
        self.ext_perms.iter().all(|perm| {
            image.clear();
            image.extend(members.iter().map(|&s| Self::permute(s, perm)));
            image.sort_unstable();
            image.as_slice() >= members
        })
    }

    fn saturated(&self, members: &[u64], last_fail: &mut Option<u64>) -> bool {
        let fails = |g: u64| members.binary_search(&g).is_err() && !probe_creates(members, g, self.pattern, self.mode);
        if let Some(g) = *last_fail {
            if fails(g) {
                return false;
            }
        }
        match self.probes.iter().copied().find(|&g| fails(g)) {
            Some(g) => {
                *last_fail = Some(g);
                false
            }
            None => true,
        }
    }

    fn leaf(&self, members: &[u64], last_fail: &mut Option<u64>) -> bool {
        if !self.least_under_externals(members) {
            Counters::bump(&self.counters.symmetry);
            return false;
        }
        if !self.saturated(members, last_fail) {
            Counters::bump(&self.counters.unsaturated);
            return false;
        }
        true
    }

    /// Tries to add `candidates[i]`; false when it breaks freeness or injectivity.
    fn push(&self, members: &mut Vec<u64>, projections: &mut Vec<u64>, i: usize) -> bool {
        let s = self.candidates[i];
        if self.injective {
            let p = self.project(s);
            if projections.contains(&p) {
                Counters::bump(&self.counters.projection);
                return false;
            }
            projections.push(p);
        }
        members.push(s);
        if copy::contains_copy(members, self.pattern, self.mode, Some(members.len() - 1)) {
            Counters::bump(&self.counters.copy);
            members.pop();
            if self.injective {
                projections.pop();
            }
            return false;
        }
        true
    }

    fn pop(&self, members: &mut Vec<u64>, projections: &mut Vec<u64>) {
        members.pop();
        if self.injective {
            projections.pop();
        }
    }

    fn tick(&self) -> std::result::Result<(), Abort> {
        let nodes = self.counters.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.counters.abort.load(Ordering::Relaxed) {
            return Err(Abort);
        }
        if self.node_limit.is_some_and(|limit| nodes > limit) {
            self.counters.abort.store(true, Ordering::Relaxed);
            return Err(Abort);
        }
        Ok(())
    }

    fn dfs(
        &self,
        next: usize,
        size: usize,
        members: &mut Vec<u64>,
        projections: &mut Vec<u64>,
        last_fail: &mut Option<u64>,
    ) -> std::result::Result<bool, Abort> {
        if members.len() == size {
            return Ok(self.leaf(members, last_fail));
        }
        let need = size - members.len();
        for i in next..=self.candidates.len() - need {
            self.tick()?;
            if !self.push(members, projections, i) {
                continue;
            }
            if self.dfs(i + 1, size, members, projections, last_fail)? {
                return Ok(true);
            }
            self.pop(members, projections);
        }
        Ok(false)
    }

    /// Least valid family of exactly `size` members.
    fn search_size(&self, size: usize) -> std::result::Result<Option<Vec<u64>>, Abort> {
        if size == 0 {
            self.tick()?;
            return Ok(self.leaf(&[], &mut None).then(Vec::new));
        }
        if size > self.candidates.len() {
            return Ok(None);
        }
        let roots: Vec<usize> = (0..=self.candidates.len() - size)
            .filter(|&i| self.orbit_min(self.candidates[i]) == self.candidates[i])
            .collect();
        let found = roots.par_iter().find_map_first(|&i| {
            let mut members = Vec::with_capacity(size);
            let mut projections = Vec::with_capacity(size);
            let mut last_fail = None;
            if self.tick().is_err() {
                return Some(Err(Abort));
            }
            if !self.push(&mut members, &mut projections, i) {
                return None;
            }
            match self.dfs(i + 1, size, &mut members, &mut projections, &mut last_fail) {
                Ok(true) => Some(Ok(members)),
                Ok(false) => None,
                Err(abort) => Some(Err(abort)),
            }
        });
        found.transpose()
    }
}

/// Permutations of `items`, identity excluded, in lexicographic order.
fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut items.to_vec(), &mut Vec::new(), &mut out);
    out
}

fn external_perms(n: usize, total: usize, anchor_len: usize) -> Vec<Vec<usize>> {
    let anchor: Vec<usize> = (n..n + anchor_len).collect();
    let rest: Vec<usize> = (n + anchor_len..total).collect();
    let mut out = Vec::new();
    for pa in permutations(&anchor) {
        for pr in permutations(&rest) {
            let mut perm: Vec<usize> = (0..total).collect();
            for (k, &b) in anchor.iter().enumerate() {
                perm[b] = pa[k];
            }
            for (k, &b) in rest.iter().enumerate() {
                perm[b] = pr[k];
            }
            if perm.iter().enumerate().any(|(i, &j)| i != j) {
                out.push(perm);
            }
        }
    }
    out
}

fn check_caps(n: usize, p: &Poset, cap: usize) -> Result<()> {
    if n == 0 || n > MAX_SEARCH_INNER {
        return Err(Error::CapExceeded(format!("search supports 1 <= n <= {MAX_SEARCH_INNER}, got n = {n}")));
    }
    if cap > MAX_EXTERNAL_CAP || n + cap > MAX_SEARCH_UNIVERSE {
        return Err(Error::CapExceeded(format!(
            "external cap {cap} exceeds the limit (cap <= {MAX_EXTERNAL_CAP}, n + cap <= {MAX_SEARCH_UNIVERSE})"
        )));
    }
    if p.len() >= MAX_FAMILY {
        return Err(Error::CapExceeded(format!("pattern of size {} is too large", p.len())));
    }
    Ok(())
}

/// Deepening loop over family sizes; for external mode every anchor size is
/// tried at one family size before moving to the next.
fn run(n: usize, p: &Poset, mode: SearchMode, cfg: SearchConfig) -> Result<SearchOutcome> {
    let started = Instant::now();
    let config = resolve_config(mode, n, p, cfg);
    let cap = config.external_cap;
    check_caps(n, p, cap)?;
    let total = n + cap;
    let candidates: Vec<u64> = (0..1u64 << total).collect();
    let max_size = config.max_size;
    let copy_mode = if mode == SearchMode::Sat { CopyMode::Weak } else { CopyMode::Strong };
    let injective = match mode {
        SearchMode::Projective => true,
        SearchMode::External => cfg.rule == ProjectionRule::Strict,
        _ => false,
    };
    let anchor_sizes: Vec<usize> = if mode == SearchMode::External { (0..=cap).collect() } else { vec![0] };
    let pattern = Pattern::new(p);
    let counters = Counters::default();
    let spaces: Vec<Space> = anchor_sizes
        .iter()
        .map(|&a| {
            let anchor = prefix_mask(a) << n;
            let ext = prefix_mask(total) & !prefix_mask(n);
            Space {
                n,
                anchor,
                candidates: candidates.clone(),
                probes: (0..1u64 << n).map(|b| b | anchor).collect(),
                injective,
                mode: copy_mode,
                pattern: &pattern,
                ext_perms: external_perms(n, total, a),
                block_masks: [prefix_mask(n), anchor, ext & !anchor].into_iter().filter(|&m| m != 0).collect(),
                node_limit: cfg.node_limit,
                counters: &counters,
            }
        })
        .collect();

    let start = (p.len() - 1).min(1 << n).min(max_size + 1);
    let mut exhausted = Vec::new();
    let mut found = None;
    let mut abandoned = None;
    'sizes: for size in start..=max_size {
        for space in &spaces {
            match space.search_size(size) {
                Ok(Some(members)) => {
                    found = Some((size, members, space.anchor));
                    break 'sizes;
                }
                Ok(None) => {}
                Err(Abort) => {
                    abandoned = Some(format!("node limit reached while searching size {size}"));
                    break 'sizes;
                }
            }
        }
        exhausted.push(size);
    }

    let (value, witness, anchor) = match found {
        Some((size, members, anchor)) => {
            let ground = if mode == SearchMode::External {
                GroundSpec::with_anchor(n, total, GroundSet(anchor))?
            } else {
                GroundSpec::new(n, total)?
            };
            let family = SetFamily::new(ground, members.into_iter().map(GroundSet))?;
            let anchor = (mode == SearchMode::External).then_some(GroundSet(anchor));
            (Some(size), Some(family), anchor)
        }
        None => (None, None, None),
    };
    if abandoned.is_none() && value.is_none() {
        abandoned = Some(format!("no valid family of size at most {max_size}"));
    }
    Ok(SearchOutcome {
        mode,
        n,
        value,
        witness,
        anchor,
        exact_under_cap: mode.uses_externals(),
        abandoned,
        config,
        stats: SearchStats {
            nodes: counters.nodes.load(Ordering::Relaxed),
            prunes: counters.prunes(),
            millis: started.elapsed().as_millis() as u64,
            sizes_exhausted: exhausted,
        },
    })
}

/// `sat(n, P)` for weak copies or `sat*(n, P)` for strong copies.
pub fn min_ordinary(n: usize, p: &Poset, mode: CopyMode, cfg: SearchConfig) -> Result<SearchOutcome> {
    let mode = match mode {
        CopyMode::Weak => SearchMode::Sat,
        CopyMode::Strong => SearchMode::SatStar,
    };
    run(n, p, mode, cfg)
}

/// Least projective saturated family with at most `external_cap` external coordinates.
pub fn min_projective(n: usize, p: &Poset, cfg: SearchConfig) -> Result<SearchOutcome> {
    run(n, p, SearchMode::Projective, cfg)
}

/// Least external saturated family over all anchors inside the external
/// coordinates. Anchors are tried as `{n+1..n+a}` for increasing `a`, which
/// covers every anchor up to relabeling.
pub fn min_external(n: usize, p: &Poset, cfg: SearchConfig) -> Result<SearchOutcome> {
    run(n, p, SearchMode::External, cfg)
}

/// Least family satisfying conditions (i) and (ii) of projective saturation.
/// The external cap defaults to `|P| - 1`, which suffices for the explicit
/// construction.
pub fn min_relaxed_projective(n: usize, p: &Poset, cfg: SearchConfig) -> Result<SearchOutcome> {
    if n < usize::BITS as usize && (1usize << n) < p.len() {
        return Err(Error::Precondition(format!("2^{n} < |P| = {}", p.len())));
    }
    run(n, p, SearchMode::RelaxedProjective, cfg)
}

/// Dispatches on `mode`.
pub fn min_by_mode(mode: SearchMode, n: usize, p: &Poset, cfg: SearchConfig) -> Result<SearchOutcome> {
    match mode {
        SearchMode::Sat => min_ordinary(n, p, CopyMode::Weak, cfg),
        SearchMode::SatStar => min_ordinary(n, p, CopyMode::Strong, cfg),
        SearchMode::Projective => min_projective(n, p, cfg),
        SearchMode::RelaxedProjective => min_relaxed_projective(n, p, cfg),
        SearchMode::External => min_external(n, p, cfg),
    }
}

/// Content hash identifying a search request: relation matrix of the
/// pattern, `n`, mode and the resolved caps and rule.
pub fn cache_key(p: &Poset, n: usize, mode: SearchMode, config: &ResolvedConfig) -> String {
    let key = serde_json::json!({
        "relations": p.relation_rows(),
        "n": n,
        "mode": mode,
        "external_cap": config.external_cap,
        "max_size": config.max_size,
        "node_limit": config.node_limit,
        "rule": config.rule,
    });
    hex::encode(Sha256::digest(key.to_string().as_bytes()))
}

/// Short hash of a witness family, `-` when there is none.
pub fn witness_hash(witness: Option<&SetFamily>) -> String {
    match witness {
        Some(w) => hex::encode(&Sha256::digest(w.to_json_value().to_string().as_bytes())[..8]),
        None => "-".to_string(),
    }
}

/// The configuration `run` would resolve for these inputs, without searching.
pub fn resolve_config(mode: SearchMode, n: usize, p: &Poset, cfg: SearchConfig) -> ResolvedConfig {
    let default_cap = match mode {
        SearchMode::Sat | SearchMode::SatStar => 0,
        SearchMode::RelaxedProjective => p.len() - 1,
        SearchMode::Projective | SearchMode::External => DEFAULT_EXTERNAL_CAP,
    };
    let cap = cfg.external_cap.unwrap_or(default_cap);
    let cap = if mode.uses_externals() { cap } else { 0 };
    let candidates = 1usize.checked_shl((n + cap) as u32).unwrap_or(usize::MAX);
    ResolvedConfig {
        external_cap: cap,
        max_size: cfg.max_size.unwrap_or(usize::MAX).min(candidates).min(MAX_FAMILY - 1),
        node_limit: cfg.node_limit,
        rule: cfg.rule,
    }
}

/// Minimum chain cover of the containment order of `fam`.
pub fn min_chain_partition(fam: &SetFamily) -> Result<Vec<Vec<GroundSet>>> {
    if fam.len() > MAX_FAMILY {
        return Err(Error::FamilyTooLarge { size: fam.len(), max: MAX_FAMILY });
    }
    let sets = fam.sets();
    Ok(chains::min_chain_cover(sets.len(), |i, j| sets[i].is_proper_subset(sets[j]))
        .into_iter()
        .map(|chain| chain.into_iter().map(|i| sets[i]).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::saturation::{verify_external, verify_ordinary, verify_projective, verify_relaxed_projective};

    fn named(s: &str) -> Poset {
        Poset::named(s).unwrap()
    }

    fn set(e: &[usize]) -> GroundSet {
        GroundSet::from_elements(e.iter().copied()).unwrap()
    }

    #[test]
    fn chain_two_on_b2() {
        let out = min_ordinary(2, &named("C_2"), CopyMode::Strong, SearchConfig::default()).unwrap();
        assert_eq!(out.value, Some(1));
        assert_eq!(out.witness.unwrap().sets(), &[set(&[])]);
        assert!(!out.exact_under_cap);
    }

    #[test]
    fn fork_values() {
        for n in 2..=3 {
            let out = min_ordinary(n, &named("V_2"), CopyMode::Strong, SearchConfig::default()).unwrap();
            assert_eq!(out.value, Some(n + 1), "n = {n}");
            let w = out.witness.unwrap();
            assert!(verify_ordinary(&w, &named("V_2"), CopyMode::Strong).unwrap().is_holds());
        }
        let out = min_projective(3, &named("V_2"), SearchConfig::default()).unwrap();
        assert_eq!(out.value, Some(4));
        assert!(verify_projective(&out.witness.unwrap(), &named("V_2")).unwrap().is_holds());
    }

    #[test]
    fn zero_cap_projective_is_ordinary() {
        let cfg = SearchConfig { external_cap: Some(0), ..Default::default() };
        for name in ["C_2", "A_2", "V_2", "W_2"] {
            let a = min_projective(2, &named(name), cfg).unwrap();
            let b = min_ordinary(2, &named(name), CopyMode::Strong, SearchConfig::default()).unwrap();
            assert_eq!(a.value, b.value, "{name}");
            assert_eq!(a.witness.unwrap().sets(), b.witness.unwrap().sets());
        }
    }

    #[test]
    fn relaxed_values() {
        let cfg = SearchConfig::default();
        assert_eq!(min_relaxed_projective(2, &named("W_2"), cfg).unwrap().value, Some(3));
        assert_eq!(min_relaxed_projective(2, &named("V_2"), cfg).unwrap().value, Some(2));
        let c2 = min_relaxed_projective(2, &named("C_2"), cfg).unwrap();
        assert_eq!(c2.value, Some(1));
        assert!(verify_relaxed_projective(&c2.witness.unwrap(), &named("C_2")).unwrap().is_holds());
    }

    #[test]
    fn external_antichain() {
        let out = min_external(2, &named("A_3"), SearchConfig::default()).unwrap();
        assert_eq!(out.value, Some(2));
        let anchor = out.anchor.unwrap();
        assert!(!anchor.is_empty());
        let w = out.witness.unwrap();
        assert!(verify_external(&w, &named("A_3"), anchor, ProjectionRule::Strict).unwrap().is_holds());
    }

    #[test]
    fn external_below_projective() {
        let cfg = SearchConfig { external_cap: Some(1), ..Default::default() };
        let e = min_external(2, &named("C_2"), cfg).unwrap().value.unwrap();
        let p = min_projective(2, &named("C_2"), cfg).unwrap().value.unwrap();
        assert!(e <= p);
    }

    #[test]
    fn single_element_pattern() {
        let out = min_ordinary(2, &named("A_1"), CopyMode::Strong, SearchConfig::default()).unwrap();
        assert_eq!(out.value, Some(0));
    }

    #[test]
    fn node_limit_abandons() {
        let cfg = SearchConfig { node_limit: Some(3), ..Default::default() };
        let out = min_ordinary(3, &named("V_2"), CopyMode::Strong, cfg).unwrap();
        assert_eq!(out.value, None);
        assert!(out.abandoned.is_some());
    }

    #[test]
    fn caps_refused() {
        assert!(matches!(
            min_ordinary(25, &named("V_2"), CopyMode::Strong, SearchConfig::default()),
            Err(Error::CapExceeded(_))
        ));
        let cfg = SearchConfig { external_cap: Some(9), ..Default::default() };
        assert!(matches!(min_projective(2, &named("V_2"), cfg), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn orbit_and_perms() {
        let perms = external_perms(2, 5, 1);
        // anchor block {3} fixed, {4,5} swapped
        assert_eq!(perms, vec![vec![0, 1, 2, 4, 3]]);
        assert_eq!(permutations(&[0, 1, 2]).len(), 6);
    }

    #[test]
    fn keys_separate_requests() {
        let p = named("V_2");
        let cfg = resolve_config(SearchMode::SatStar, 3, &p, SearchConfig::default());
        let a = cache_key(&p, 3, SearchMode::SatStar, &cfg);
        assert_eq!(a, cache_key(&p, 3, SearchMode::SatStar, &cfg));
        assert_ne!(a, cache_key(&p, 4, SearchMode::SatStar, &cfg));
        assert_ne!(a, cache_key(&named("W_2"), 3, SearchMode::SatStar, &cfg));
        let out = min_ordinary(3, &p, CopyMode::Strong, SearchConfig::default()).unwrap();
        assert_eq!(out.config, cfg);
        assert_eq!(witness_hash(out.witness.as_ref()).len(), 16);
    }

    #[test]
    fn chain_partition_examples() {
        let g = GroundSpec::inner(2).unwrap();
        let f = SetFamily::from_lists(g, &[&[1], &[2], &[1, 2]]).unwrap();
        assert_eq!(min_chain_partition(&f).unwrap().len(), 2);
        let f = SetFamily::from_lists(g, &[&[], &[1], &[1, 2]]).unwrap();
        assert_eq!(min_chain_partition(&f).unwrap().len(), 1);
    }
}
