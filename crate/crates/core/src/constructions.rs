//! Generators for the explicit saturated families.
//!
//! Choices left open by the constructions themselves (which antichain, which
//! minimal element, which embedding of a residual poset) are fixed to the
//! least lexicographic option so every output is reproducible.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{projection, GroundSet, GroundSpec, SetFamily, MAX_INNER, MAX_UNIVERSE};
use crate::poset::Poset;
use crate::saturation::verify_almost_saturated;

/// The saturation notion a construction is claimed to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Notion {
    SatStar,
    Projective,
    RelaxedProjective,
    ExternalStrict,
    ExternalRelaxed,
    AlmostSaturated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub poset: String,
    pub notion: Notion,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionResult {
    pub name: &'static str,
    pub params: Vec<(&'static str, usize)>,
    pub family: SetFamily,
    pub claims: Vec<Claim>,
    pub claimed_size: usize,
    /// Parameter range in which the claims are expected to hold.
    pub validity: String,
}

impl ConstructionResult {
    pub fn ground(&self) -> &GroundSpec {
        self.family.ground()
    }

    pub fn provenance(&self) -> serde_json::Value {
        let params: serde_json::Map<String, serde_json::Value> =
            self.params.iter().map(|(k, v)| (k.to_string(), (*v).into())).collect();
        serde_json::json!({
            "construction": self.name,
            "params": params,
            "claims": self.claims,
            "claimed_size": self.claimed_size,
            "validity": self.validity,
        })
    }
}

fn claim(poset: &str, notion: Notion) -> Claim {
    Claim { poset: poset.to_string(), notion }
}

fn floor_error(construction: &'static str, reason: String, pair: Option<(GroundSet, GroundSet)>) -> Error {
    Error::ValidityFloor {
        construction,
        reason,
        collision: pair.map(|(a, b)| (a.to_string(), b.to_string())),
    }
}

/// First pair (in listing order) of equal sets or equal projections.
fn first_collision(sets: &[GroundSet], ground: &GroundSpec) -> Option<(GroundSet, GroundSet)> {
    for (i, &a) in sets.iter().enumerate() {
        for &b in &sets[i + 1..] {
            if projection(a, ground) == projection(b, ground) {
                return Some((a, b));
            }
        }
    }
    None
}

fn check_universe(total: usize) -> Result<()> {
    if total > MAX_UNIVERSE {
        return Err(Error::Parameter(format!("needs N = {total} > {MAX_UNIVERSE} coordinates")));
    }
    Ok(())
}

fn check_inner(n: usize) -> Result<()> {
    if n == 0 || n > MAX_INNER {
        return Err(Error::Parameter(format!("n = {n} must lie in 1..={MAX_INNER}")));
    }
    Ok(())
}

/// `F_{n,k} = {∅, [n+k-1], [2k-2] ∪ {n+k}} ∪ {{i, n+i}, {k-1+i, n+k} : i < k}`,
/// projective saturated for both the cherry `∧_k` and the diamond `D_k`.
pub fn wedge_diamond_family(n: usize, k: usize) -> Result<ConstructionResult> {
    const NAME: &str = "wedge_diamond";
    if k < 2 {
        return Err(Error::Parameter("wedge_diamond needs k >= 2".into()));
    }
    check_inner(n)?;
    let total = n + k;
    check_universe(total)?;
    let mut sets = vec![
        GroundSet::EMPTY,
        GroundSet::prefix(n + k - 1),
        GroundSet::prefix(2 * k - 2).union(GroundSet::singleton(n + k)),
    ];
    for i in 1..k {
        sets.push(GroundSet::singleton(i).union(GroundSet::singleton(n + i)));
        sets.push(GroundSet::singleton(k - 1 + i).union(GroundSet::singleton(n + k)));
    }
    let ground = GroundSpec::new(n, total)?;
    if n < 2 * k - 1 {
        return Err(floor_error(
            NAME,
            format!("needs n >= 2k-1 = {}", 2 * k - 1),
            first_collision(&sets, &ground),
        ));
    }
    let family = SetFamily::new(ground, sets)?;
    Ok(ConstructionResult {
        name: NAME,
        params: vec![("n", n), ("k", k)],
        claims: vec![
            claim(&format!("W_{k}"), Notion::Projective),
            claim(&format!("D_{k}"), Notion::Projective),
        ],
        claimed_size: 2 * k + 1,
        validity: "k >= 2, n >= 2k-1".into(),
        family,
    })
}

/// The eight-set projective `2C_2`-saturated family over `N = n + 1`.
pub fn two_c2_family(n: usize) -> Result<ConstructionResult> {
    const NAME: &str = "two_c2";
    check_inner(n)?;
    if n < 3 {
        return Err(floor_error(NAME, "needs n >= 4; for n < 3 the listed sets coincide".into(), None));
    }
    let total = n + 1;
    check_universe(total)?;
    let s = |e: &[usize]| GroundSet::from_elements(e.iter().copied()).expect("small elements");
    let sets = vec![
        GroundSet::EMPTY,
        s(&[3]),
        s(&[1, 2]),
        s(&[2, 3]),
        s(&[2, n + 1]),
        s(&[1, 2, 3, n + 1]),
        GroundSet::prefix(n).difference(s(&[2])),
        GroundSet::prefix(n + 1).difference(s(&[1])),
    ];
    let ground = GroundSpec::new(n, total)?;
    if let Some(pair) = first_collision(&sets, &ground) {
        return Err(floor_error(NAME, "two members share a projection".into(), Some(pair)));
    }
    Ok(ConstructionResult {
        name: NAME,
        params: vec![("n", n)],
        family: SetFamily::new(ground, sets)?,
        claims: vec![claim("2C_2", Notion::Projective)],
        claimed_size: 8,
        validity: "n >= 4".into(),
    })
}

/// `{F ⊆ [n] : |F| >= n - 1}`, strongly saturated for the fork `∨_2`.
pub fn vee_family(n: usize) -> Result<ConstructionResult> {
    check_inner(n)?;
    if n < 2 {
        return Err(Error::Parameter("vee family needs n >= 2".into()));
    }
    let top = GroundSet::prefix(n);
    let sets = std::iter::once(top).chain((1..=n).map(|i| top.difference(GroundSet::singleton(i))));
    Ok(ConstructionResult {
        name: "vee",
        params: vec![("n", n)],
        family: SetFamily::new(GroundSpec::inner(n)?, sets)?,
        claims: vec![claim("V_2", Notion::SatStar)],
        claimed_size: n + 1,
        validity: "n >= 2".into(),
    })
}

/// `r`-subsets of `[n]` in lexicographic order of their sorted element lists.
fn lex_subsets(n: usize, r: usize, limit: usize) -> Vec<GroundSet> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<GroundSet>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        if cur.len() == r {
            out.push(GroundSet::from_elements(cur.iter().copied()).expect("in range"));
            return;
        }
        for e in start..=n {
            cur.push(e);
            go(e + 1, n, r, cur, out, limit);
            cur.pop();
            if out.len() >= limit {
                return;
            }
        }
    }
    let mut out = Vec::new();
    go(1, n, r, &mut Vec::new(), &mut out, limit);
    out
}

fn binomial(n: usize, r: usize) -> u128 {
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `k - 1` pairwise incomparable sets shifted by `{n+2}`, with anchor
/// `A = {n+1}`: external `A_k`-saturated.
pub fn antichain_external_family(n: usize, k: usize) -> Result<ConstructionResult> {
    check_inner(n)?;
    if k < 2 {
        return Err(Error::Parameter("antichain_external needs k >= 2".into()));
    }
    let r = n / 2;
    if (k - 1) as u128 > binomial(n, r) {
        return Err(Error::Parameter(format!(
            "B_{n} has no antichain of size {}",
            k - 1
        )));
    }
    let total = n + 2;
    check_universe(total)?;
    let shift = GroundSet::singleton(n + 2);
    let ground = GroundSpec::with_anchor(n, total, GroundSet::singleton(n + 1))?;
    let sets = lex_subsets(n, r, k - 1).into_iter().map(|x| x.union(shift));
    Ok(ConstructionResult {
        name: "antichain_external",
        params: vec![("n", n), ("k", k)],
        family: SetFamily::new(ground, sets)?,
        claims: vec![claim(&format!("A_{k}"), Notion::ExternalStrict)],
        claimed_size: k - 1,
        validity: "k >= 2, k - 1 <= C(n, n/2)".into(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsolatedVariant {
    /// Remove an isolated vertex.
    Vertex,
    /// Remove an isolated two-element chain.
    C2,
}

/// `q ↦ {coordinate of q' : q' <= q}` over the given elements, where the
/// `i`-th listed element gets coordinate `offset + i + 1`.
fn down_set_embedding(p: &Poset, elements: &[usize], offset: usize) -> Vec<GroundSet> {
    elements
        .iter()
        .map(|&q| {
            elements
                .iter()
                .enumerate()
                .filter(|&(_, &q2)| q2 == q || p.lt(q2, q))
                .fold(GroundSet::EMPTY, |s, (i, _)| s.union(GroundSet::singleton(offset + i + 1)))
        })
        .collect()
}

/// External saturated family of size `|P| - 1` for a pattern with an
/// isolated vertex or an isolated `C_2` component.
pub fn isolated_element_family(p: &Poset, n: usize, variant: IsolatedVariant) -> Result<ConstructionResult> {
    check_inner(n)?;
    let structure = p.structure();
    let component = structure
        .components
        .iter()
        .find(|c| match variant {
            IsolatedVariant::Vertex => c.isolated_vertex,
            IsolatedVariant::C2 => c.isolated_c2,
        })
        .ok_or_else(|| Error::Precondition("component absent".into()))?;
    let residual: Vec<usize> = (0..p.len()).filter(|e| !component.elements.contains(e)).collect();
    if residual.len() > n {
        return Err(Error::Precondition(format!(
            "the residual poset has {} elements and does not fit B_{n} by its down-set embedding",
            residual.len()
        )));
    }
    let total = n + 2;
    check_universe(total)?;
    let anchor = GroundSet::singleton(n + 1);
    let shift = GroundSet::singleton(n + 2);
    let mut sets: Vec<GroundSet> =
        down_set_embedding(p, &residual, 0).into_iter().map(|s| s.union(shift)).collect();
    if variant == IsolatedVariant::C2 {
        sets.push(anchor);
    }
    let ground = GroundSpec::with_anchor(n, total, anchor)?;
    Ok(ConstructionResult {
        name: "isolated_element",
        params: vec![("n", n), ("variant", variant as usize)],
        family: SetFamily::new(ground, sets)?,
        claims: vec![claim("<input>", Notion::ExternalStrict)],
        claimed_size: p.len() - 1,
        validity: "residual poset fits B_n".into(),
    })
}

/// Family satisfying only conditions (i) and (ii) of projective saturation:
/// the residual `P \ {p}` sits on external coordinates, lifted by `[n]` above
/// `p`, plus `∅` unless `p` is the minimum.
pub fn relaxed_projective_family(p: &Poset, n: usize) -> Result<ConstructionResult> {
    check_inner(n)?;
    if n < usize::BITS as usize && (1usize << n) < p.len() {
        return Err(Error::Parameter(format!("2^{n} < |P| = {}", p.len())));
    }
    let root = *p
        .minimal_elements()
        .first()
        .expect("a nonempty poset has a minimal element");
    let residual: Vec<usize> = p.linear_extension().into_iter().filter(|&q| q != root).collect();
    let total = n + residual.len();
    check_universe(total)?;
    let lift = GroundSet::prefix(n);
    let mut sets: Vec<GroundSet> = down_set_embedding(p, &residual, n)
        .into_iter()
        .zip(&residual)
        .map(|(f, &q)| if p.lt(root, q) { f.union(lift) } else { f })
        .collect();
    let has_minimum = p.minimum() == Some(root);
    if !has_minimum {
        sets.push(GroundSet::EMPTY);
    }
    let claimed_size = sets.len();
    Ok(ConstructionResult {
        name: "relaxed_projective",
        params: vec![("n", n)],
        family: SetFamily::new(GroundSpec::new(n, total)?, sets)?,
        claims: vec![claim("<input>", Notion::RelaxedProjective)],
        claimed_size,
        validity: "2^n >= |P|".into(),
    })
}

/// Singletons `{1}..{s+t-1}` and co-singletons `[n] \ {i}`: almost
/// saturated for `K_{s,t}`.
pub fn kst_almost_saturated(n: usize, s: usize, t: usize) -> Result<(SetFamily, SetFamily)> {
    check_inner(n)?;
    if s == 0 || t == 0 {
        return Err(Error::Parameter("K_{s,t} needs s, t >= 1".into()));
    }
    if s == 1 && t == 1 {
        return Err(Error::Parameter("K_{1,1} is an isolated C_2; the construction needs s + t >= 3".into()));
    }
    let m = s + t - 1;
    if n < s + t {
        return Err(Error::Parameter(format!("needs n >= s + t = {}", s + t)));
    }
    let ground = GroundSpec::inner(n)?;
    let top = GroundSet::prefix(n);
    let f1 = SetFamily::new(ground, (1..=m).map(GroundSet::singleton))?;
    let f2 = SetFamily::new(ground, (1..=m).map(|i| top.difference(GroundSet::singleton(i))))?;
    Ok((f1, f2))
}

/// Lifts an almost saturated `F_1 ∪ F_2 ⊆ B_n` to an external saturated
/// family over `N = n + 3` with anchor `{n+3}`:
/// `F_1`, `F_1 + {n+1}`, `F_2 + {n+1,n+2}`, `F_2 + {n+1,n+2,n+3}`.
pub fn external_lift(f1: &SetFamily, f2: &SetFamily, p: &Poset) -> Result<ConstructionResult> {
    let report = verify_almost_saturated(f1, f2, p)?;
    if !report.is_holds() {
        return Err(Error::Precondition(format!(
            "F_1 ∪ F_2 is not almost saturated: {:?}",
            report.witness
        )));
    }
    let n = f1.n();
    let total = n + 3;
    check_universe(total)?;
    let e = |i: usize| GroundSet::singleton(n + i);
    let anchor = e(3);
    let parts = [
        (f1, GroundSet::EMPTY),
        (f1, e(1)),
        (f2, e(1).union(e(2))),
        (f2, e(1).union(e(2)).union(e(3))),
    ];
    let sets = parts
        .iter()
        .flat_map(|(f, shift)| f.iter().map(move |s| s.union(*shift)));
    let ground = GroundSpec::with_anchor(n, total, anchor)?;
    let family = SetFamily::new(ground, sets)?;
    Ok(ConstructionResult {
        name: "external_lift",
        params: vec![("n", n), ("f1", f1.len()), ("f2", f2.len())],
        claimed_size: 2 * (f1.len() + f2.len()),
        family,
        claims: vec![claim("<input>", Notion::ExternalRelaxed)],
        validity: "input almost saturated for a height-2 poset without isolated C_2".into(),
    })
}
