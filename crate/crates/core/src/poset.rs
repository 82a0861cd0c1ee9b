//! Finite strict partial orders on at most [`MAX_POSET_SIZE`] elements.
//!
//! Relations are stored as one up-set bitmask per element, always
//! transitively closed. Elements are indexed `0..len()`.

use serde::{Deserialize, Serialize};

use crate::chains;
use crate::error::{Error, Result};

/// Largest pattern poset supported. Every embedding search is exponential in
/// the pattern size, and 16 keeps each up-set in a `u16`.
pub const MAX_POSET_SIZE: usize = 16;

#[derive(Clone, Debug)]
pub struct Poset {
    size: usize,
    /// `up[i]` has bit `j` set iff `i < j`.
    up: [u16; MAX_POSET_SIZE],
    labels: Option<Vec<String>>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.up[..self.size] == other.up[..other.size]
    }
}

impl Eq for Poset {}

impl std::hash::Hash for Poset {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.size.hash(state);
        self.up[..self.size].hash(state);
    }
}

/// Which covers UCTP looks at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverDirection {
    /// Elements with a unique upper cover need a twin below the same cover.
    #[default]
    Up,
    /// The dual reading: elements covering a unique element.
    Down,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UctpResult {
    pub holds: bool,
    /// Elements that have a unique cover but no twin.
    pub violators: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub elements: Vec<usize>,
    pub isolated_vertex: bool,
    pub isolated_c2: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Structure {
    pub height: usize,
    pub width: usize,
    pub minimal: Vec<usize>,
    pub maximal: Vec<usize>,
    /// Minimal elements.
    pub lower_level: Vec<usize>,
    /// Everything that is not minimal.
    pub upper_level: Vec<usize>,
    /// Connected components of the comparability graph.
    pub components: Vec<Component>,
}

impl Structure {
    pub fn has_isolated_vertex(&self) -> bool {
        self.components.iter().any(|c| c.isolated_vertex)
    }

    pub fn has_isolated_c2(&self) -> bool {
        self.components.iter().any(|c| c.isolated_c2)
    }
}

#[derive(Serialize, Deserialize)]
struct PosetJson {
    elements: usize,
    relations: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

fn bits(mask: u16) -> impl Iterator<Item = usize> {
    (0..MAX_POSET_SIZE).filter(move |&i| mask >> i & 1 == 1)
}

impl Poset {
    /// Builds a poset from `(i, j)` pairs meaning `i < j`, closing transitively.
    pub fn from_relations(size: usize, relations: &[(usize, usize)]) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidPoset("a poset needs at least one element".into()));
        }
        if size > MAX_POSET_SIZE {
            return Err(Error::PosetTooLarge { size, max: MAX_POSET_SIZE });
        }
        let mut up = [0u16; MAX_POSET_SIZE];
        for &(i, j) in relations {
            if i >= size || j >= size {
                return Err(Error::InvalidPoset(format!(
                    "relation ({i},{j}) refers to an element outside 0..{size}"
                )));
            }
            up[i] |= 1 << j;
        }
        // Warshall on bit rows
        for k in 0..size {
            for i in 0..size {
                if up[i] >> k & 1 == 1 {
                    up[i] |= up[k];
                }
            }
        }
        for (i, row) in up.iter().enumerate().take(size) {
            if row >> i & 1 == 1 {
                return Err(Error::InvalidPoset(format!(
                    "relations contain a cycle through element {i}"
                )));
            }
        }
        Ok(Poset { size, up, labels: None })
    }

    pub fn antichain(k: usize) -> Result<Self> {
        Self::from_relations(k, &[])
    }

    pub fn chain(k: usize) -> Result<Self> {
        let rel: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
        Self::from_relations(k, &rel)
    }

    /// The fork: `b_1..b_k` above a common bottom `a` (index `k`).
    pub fn fork(k: usize) -> Result<Self> {
        let rel: Vec<_> = (0..k).map(|i| (k, i)).collect();
        let mut labels: Vec<String> = (1..=k).map(|i| format!("b{i}")).collect();
        labels.push("a".into());
        Ok(Self::from_relations(k + 1, &rel)?.with_labels(labels))
    }

    /// The cherry: `b_1..b_k` below a common top `c` (index `k`).
    pub fn cherry(k: usize) -> Result<Self> {
        let rel: Vec<_> = (0..k).map(|i| (i, k)).collect();
        let mut labels: Vec<String> = (1..=k).map(|i| format!("b{i}")).collect();
        labels.push("c".into());
        Ok(Self::from_relations(k + 1, &rel)?.with_labels(labels))
    }

    /// The diamond: `a` (index 0) below `b_1..b_k` below `c` (index `k+1`).
    pub fn diamond(k: usize) -> Result<Self> {
        let mut rel = Vec::new();
        for i in 1..=k {
            rel.push((0, i));
            rel.push((i, k + 1));
        }
        let mut labels = vec!["a".to_string()];
        labels.extend((1..=k).map(|i| format!("b{i}")));
        labels.push("c".into());
        Ok(Self::from_relations(k + 2, &rel)?.with_labels(labels))
    }

    /// Complete bipartite order: `s` bottoms (indices `0..s`) below `t` tops.
    pub fn complete_bipartite(s: usize, t: usize) -> Result<Self> {
        let mut rel = Vec::new();
        for i in 0..s {
            for j in 0..t {
                rel.push((i, s + j));
            }
        }
        Self::from_relations(s + t, &rel)
    }

    /// Parses a poset name: `A_k`, `C_k`, `V_k` (fork), `W_k` (cherry),
    /// `D_k`, `K_s_t`, a multiplier prefix such as `2C_2`, or
    /// `union:[P,Q,...]`.
    pub fn named(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let unknown = || Error::UnknownPoset(spec.to_string());

        if let Some(rest) = spec.strip_prefix("union:") {
            let inner = rest
                .trim()
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(unknown)?;
            let parts = split_top_level(inner).ok_or_else(unknown)?;
            if parts.is_empty() {
                return Err(unknown());
            }
            let ps = parts.iter().map(|p| Self::named(p)).collect::<Result<Vec<_>>>()?;
            return Self::disjoint_union(&ps);
        }

        let digits = spec.chars().take_while(|c| c.is_ascii_digit()).count();
        if digits > 0 && digits < spec.len() {
            let mult: usize = spec[..digits].parse().map_err(|_| unknown())?;
            if mult == 0 {
                return Err(Error::Parameter("multiplier must be at least 1".into()));
            }
            let base = Self::named(&spec[digits..])?;
            check_size(base.size.saturating_mul(mult))?;
            return Self::disjoint_union(&vec![base; mult]);
        }

        let mut chars = spec.chars();
        let head = chars.next().ok_or_else(unknown)?;
        let params: Vec<usize> = chars
            .as_str()
            .split('_')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>().map_err(|_| unknown()))
            .collect::<Result<_>>()?;
        if params.contains(&0) {
            return Err(Error::Parameter(format!("parameters of `{spec}` must be at least 1")));
        }
        let one = |params: &[usize]| -> Result<usize> {
            match params {
                [k] => Ok(*k),
                _ => Err(unknown()),
            }
        };
        let p = match head.to_ascii_uppercase() {
            'A' => {
                let k = one(&params)?;
                check_size(k)?;
                Self::antichain(k)
            }
            'C' => {
                let k = one(&params)?;
                check_size(k)?;
                Self::chain(k)
            }
            'V' => {
                let k = one(&params)?;
                check_size(k + 1)?;
                Self::fork(k)
            }
            'W' => {
                let k = one(&params)?;
                check_size(k + 1)?;
                Self::cherry(k)
            }
            'D' => {
                let k = one(&params)?;
                check_size(k + 2)?;
                Self::diamond(k)
            }
            'K' => match params[..] {
                [s, t] => {
                    check_size(s + t)?;
                    Self::complete_bipartite(s, t)
                }
                _ => Err(unknown()),
            },
            _ => Err(unknown()),
        }?;
        Ok(p)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        if labels.len() == self.size {
            self.labels = Some(labels);
        }
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// `i < j` in the order.
    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.up[i] >> j & 1 == 1
    }

    #[inline]
    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.lt(i, j) || self.lt(j, i)
    }

    /// Elements strictly above `i`.
    #[inline]
    pub fn up_mask(&self, i: usize) -> u16 {
        self.up[i]
    }

    /// Elements strictly below `i`.
    pub fn down_mask(&self, i: usize) -> u16 {
        (0..self.size).filter(|&j| self.lt(j, i)).fold(0, |m, j| m | 1 << j)
    }

    /// Upper covers of `i`.
    pub fn upper_covers(&self, i: usize) -> u16 {
        let up = self.up[i];
        bits(up).filter(|&j| up & self.down_mask(j) == 0).fold(0, |m, j| m | 1 << j)
    }

    /// Lower covers of `i`.
    pub fn lower_covers(&self, i: usize) -> u16 {
        let down = self.down_mask(i);
        bits(down).filter(|&j| down & self.up[j] == 0).fold(0, |m, j| m | 1 << j)
    }

    /// All strict relations `(i, j)` with `i < j`, row-major.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        (0..self.size)
            .flat_map(|i| bits(self.up[i]).map(move |j| (i, j)))
            .collect()
    }

    /// Cover relations of the Hasse diagram.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        (0..self.size)
            .flat_map(|i| bits(self.upper_covers(i)).map(move |j| (i, j)))
            .collect()
    }

    pub fn is_antichain(&self) -> bool {
        self.up[..self.size].iter().all(|&m| m == 0)
    }

    /// The unique element below every other element, if one exists.
    pub fn minimum(&self) -> Option<usize> {
        let others = |i: usize| ((1u32 << self.size) - 1) as u16 & !(1 << i);
        (0..self.size).find(|&i| self.up[i] == others(i))
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.size).filter(|&i| self.down_mask(i) == 0).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.size).filter(|&i| self.up[i] == 0).collect()
    }

    /// Number of strict predecessors of `i`.
    pub fn down_degree(&self, i: usize) -> u32 {
        self.down_mask(i).count_ones()
    }

    /// Number of strict successors of `i`.
    pub fn up_degree(&self, i: usize) -> u32 {
        self.up[i].count_ones()
    }

    /// Reverses every relation. Labels are kept.
    pub fn dual(&self) -> Self {
        let mut up = [0u16; MAX_POSET_SIZE];
        for i in 0..self.size {
            up[i] = self.down_mask(i);
        }
        Poset { size: self.size, up, labels: self.labels.clone() }
    }

    /// Pairwise incomparable copies of the given posets, indexed consecutively.
    pub fn disjoint_union(parts: &[Poset]) -> Result<Self> {
        let size: usize = parts.iter().map(|p| p.size).sum();
        check_size(size)?;
        if size == 0 {
            return Err(Error::InvalidPoset("empty union".into()));
        }
        let mut up = [0u16; MAX_POSET_SIZE];
        let mut offset = 0;
        for p in parts {
            for i in 0..p.size {
                up[offset + i] = p.up[i] << offset;
            }
            offset += p.size;
        }
        Ok(Poset { size, up, labels: None })
    }

    /// The subposet induced on the elements not in `removed`, reindexed in order.
    pub fn without(&self, removed: u16) -> Result<Self> {
        let keep: Vec<usize> = (0..self.size).filter(|&i| removed >> i & 1 == 0).collect();
        let rel: Vec<_> = keep
            .iter()
            .enumerate()
            .flat_map(|(a, &i)| {
                keep.iter()
                    .enumerate()
                    .filter(move |&(_, &j)| self.lt(i, j))
                    .map(move |(b, _)| (a, b))
            })
            .collect();
        let sub = Self::from_relations(keep.len(), &rel)?;
        Ok(match &self.labels {
            Some(l) => sub.with_labels(keep.iter().map(|&i| l[i].clone()).collect()),
            None => sub,
        })
    }

    /// Elements in a linear extension: by rank (longest chain below), then index.
    pub fn linear_extension(&self) -> Vec<usize> {
        let rank = self.ranks();
        let mut order: Vec<usize> = (0..self.size).collect();
        order.sort_by_key(|&i| (rank[i], i));
        order
    }

    /// Length of the longest chain ending at each element, minus one.
    fn ranks(&self) -> Vec<usize> {
        let mut rank = vec![0usize; self.size];
        // number of strict predecessors is a valid topological key
        let mut order: Vec<usize> = (0..self.size).collect();
        order.sort_by_key(|&i| self.down_degree(i));
        for &i in &order {
            rank[i] = bits(self.down_mask(i)).map(|j| rank[j] + 1).max().unwrap_or(0);
        }
        rank
    }

    pub fn height(&self) -> usize {
        self.ranks().into_iter().max().map_or(0, |r| r + 1)
    }

    pub fn width(&self) -> usize {
        chains::width(self.size, |i, j| self.lt(i, j))
    }

    /// Connected components of the comparability graph, each sorted, ordered
    /// by least element.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.size];
        let mut out = Vec::new();
        for start in 0..self.size {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            comp[start] = id;
            let mut members = Vec::new();
            while let Some(u) = stack.pop() {
                members.push(u);
                for v in 0..self.size {
                    if comp[v] == usize::MAX && self.comparable(u, v) {
                        comp[v] = id;
                        stack.push(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn structure(&self) -> Structure {
        let minimal = self.minimal_elements();
        let upper_level = (0..self.size).filter(|i| !minimal.contains(i)).collect();
        let components = self
            .components()
            .into_iter()
            .map(|elements| {
                let isolated_vertex = elements.len() == 1;
                let isolated_c2 =
                    elements.len() == 2 && self.comparable(elements[0], elements[1]);
                Component { elements, isolated_vertex, isolated_c2 }
            })
            .collect();
        Structure {
            height: self.height(),
            width: self.width(),
            maximal: self.maximal_elements(),
            lower_level: minimal.clone(),
            minimal,
            upper_level,
            components,
        }
    }

    /// Unique cover twin property: every element whose cover (in the chosen
    /// direction) is unique has a distinct twin with that same unique cover.
    pub fn uctp(&self, direction: CoverDirection) -> UctpResult {
        let covers = |i: usize| match direction {
            CoverDirection::Up => self.upper_covers(i),
            CoverDirection::Down => self.lower_covers(i),
        };
        let unique: Vec<Option<u16>> = (0..self.size)
            .map(|i| {
                let c = covers(i);
                (c.count_ones() == 1).then_some(c)
            })
            .collect();
        let violators: Vec<usize> = (0..self.size)
            .filter(|&p| match unique[p] {
                Some(q) => !(0..self.size).any(|z| z != p && unique[z] == Some(q)),
                None => false,
            })
            .collect();
        UctpResult { holds: violators.is_empty(), violators }
    }

    pub fn has_uctp(&self) -> UctpResult {
        self.uctp(CoverDirection::Up)
    }

    /// Checks irreflexivity, antisymmetry and transitivity of the stored matrix.
    pub fn is_valid_order(&self) -> bool {
        (0..self.size).all(|i| {
            !self.lt(i, i)
                && (0..self.size).all(|j| {
                    !(self.lt(i, j) && self.lt(j, i))
                        && (0..self.size).all(|k| !(self.lt(i, j) && self.lt(j, k)) || self.lt(i, k))
                })
        })
    }

    /// Rows of the relation matrix, used as a stable key.
    pub fn relation_rows(&self) -> Vec<u16> {
        self.up[..self.size].to_vec()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let json = PosetJson {
            elements: self.size,
            relations: self.hasse_edges().into_iter().map(|(i, j)| [i, j]).collect(),
            labels: self.labels.clone(),
        };
        serde_json::to_value(json).expect("poset json is always serializable")
    }

    pub fn from_json_value(value: serde_json::Value) -> Result<Self> {
        let json: PosetJson = serde_json::from_value(value)?;
        let rel: Vec<_> = json.relations.iter().map(|&[i, j]| (i, j)).collect();
        let p = Self::from_relations(json.elements, &rel)?;
        Ok(match json.labels {
            Some(l) => p.with_labels(l),
            None => p,
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json_value(serde_json::from_str(s)?)
    }

    /// Accepts either a poset name or a JSON object.
    pub fn parse(spec: &str) -> Result<Self> {
        if spec.trim_start().starts_with('{') {
            Self::from_json_str(spec)
        } else {
            Self::named(spec)
        }
    }
}

fn check_size(size: usize) -> Result<()> {
    if size > MAX_POSET_SIZE {
        Err(Error::PosetTooLarge { size, max: MAX_POSET_SIZE })
    } else {
        Ok(())
    }
}

fn split_top_level(s: &str) -> Option<Vec<String>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(std::mem::take(&mut cur).trim().to_string());
                continue;
            }
            _ => {}
        }
        if depth < 0 {
            return None;
        }
        cur.push(c);
    }
    if depth != 0 {
        return None;
    }
    if !cur.trim().is_empty() {
        parts.push(cur.trim().to_string());
    }
    Some(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamond_two() {
        let d = Poset::named("D_2").unwrap();
        assert_eq!(d.len(), 4);
        assert!(d.lt(0, 1) && d.lt(0, 2) && d.lt(1, 3) && d.lt(2, 3) && d.lt(0, 3));
        assert!(!d.comparable(1, 2));
    }

    #[test]
    fn single_element() {
        let a = Poset::named("A_1").unwrap();
        assert_eq!(a.len(), 1);
        assert!(a.relations().is_empty());
    }

    #[test]
    fn two_c2_variants_agree() {
        let a = Poset::named("2C_2").unwrap();
        let b = Poset::named("2C2").unwrap();
        let c = Poset::named("union:[C_2,C_2]").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.relations(), vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn union_of_antichains() {
        let u = Poset::disjoint_union(&[Poset::antichain(2).unwrap(), Poset::antichain(3).unwrap()]).unwrap();
        assert_eq!(u, Poset::antichain(5).unwrap());
        let single = Poset::disjoint_union(&[Poset::antichain(1).unwrap()]).unwrap();
        assert_eq!(single, Poset::antichain(1).unwrap());
    }

    #[test]
    fn nested_union_parses() {
        let p = Poset::named("union:[A_1,union:[C_2,V_2]]").unwrap();
        assert_eq!(p.len(), 6);
    }

    #[test]
    fn named_errors() {
        assert!(matches!(Poset::named("Q_3"), Err(Error::UnknownPoset(_))));
        assert!(matches!(Poset::named("A_17"), Err(Error::PosetTooLarge { .. })));
        assert!(matches!(Poset::named("D_15"), Err(Error::PosetTooLarge { .. })));
        assert!(matches!(Poset::named("9C_2"), Err(Error::PosetTooLarge { .. })));
        assert!(Poset::named("A_0").is_err());
        assert!(Poset::named("K_2").is_err());
        assert!(Poset::named("union:[C_2").is_err());
    }

    #[test]
    fn fork_dual_is_cherry() {
        let v3 = Poset::named("V_3").unwrap();
        assert_eq!(v3.dual(), Poset::named("W_3").unwrap());
        let a = Poset::antichain(4).unwrap();
        assert_eq!(a.dual(), a);
    }

    #[test]
    fn structure_of_diamond() {
        let s = Poset::named("D_2").unwrap().structure();
        assert_eq!(s.height, 3);
        assert_eq!(s.width, 2);
        assert_eq!(s.components.len(), 1);
        assert_eq!(s.minimal, vec![0]);
        assert_eq!(s.maximal, vec![3]);
    }

    #[test]
    fn structure_of_antichain() {
        let s = Poset::antichain(3).unwrap().structure();
        assert_eq!(s.height, 1);
        assert_eq!(s.width, 3);
        assert_eq!(s.components.len(), 3);
        assert!(s.components.iter().all(|c| c.isolated_vertex));
    }

    #[test]
    fn structure_of_two_chains() {
        let s = Poset::named("2C_2").unwrap().structure();
        assert_eq!(s.components.len(), 2);
        assert!(s.components.iter().all(|c| c.isolated_c2 && !c.isolated_vertex));
        assert_eq!(s.lower_level, vec![0, 2]);
        assert_eq!(s.upper_level, vec![1, 3]);
    }

    #[test]
    fn uctp_examples() {
        assert!(Poset::named("W_2").unwrap().has_uctp().holds);
        let c2 = Poset::chain(2).unwrap().has_uctp();
        assert!(!c2.holds);
        assert_eq!(c2.violators, vec![0]);
        assert!(Poset::antichain(3).unwrap().has_uctp().holds);
        assert!(Poset::named("D_2").unwrap().has_uctp().holds);
        // the fork's bottom has two covers, its tops none
        assert!(Poset::named("V_2").unwrap().has_uctp().holds);
        // downward reading flips the cherry and the fork
        assert!(Poset::named("W_2").unwrap().uctp(CoverDirection::Down).holds);
        assert!(!Poset::chain(3).unwrap().uctp(CoverDirection::Down).holds);
    }

    #[test]
    fn minimum_detection() {
        assert_eq!(Poset::named("V_2").unwrap().minimum(), Some(2));
        assert_eq!(Poset::named("W_2").unwrap().minimum(), None);
        assert_eq!(Poset::named("D_3").unwrap().minimum(), Some(0));
        assert_eq!(Poset::antichain(1).unwrap().minimum(), Some(0));
        assert_eq!(Poset::antichain(2).unwrap().minimum(), None);
    }

    #[test]
    fn cycles_are_rejected() {
        assert!(Poset::from_relations(3, &[(0, 1), (1, 2), (2, 0)]).is_err());
        assert!(Poset::from_relations(2, &[(0, 0)]).is_err());
        assert!(Poset::from_relations(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn json_closes_transitively() {
        let p = Poset::from_json_str(r#"{"elements": 3, "relations": [[0,1],[1,2]]}"#).unwrap();
        assert!(p.lt(0, 2));
        assert_eq!(p, Poset::chain(3).unwrap());
        let back = Poset::from_json_value(p.to_json_value()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn without_reindexes() {
        let d = Poset::named("D_2").unwrap();
        let rest = d.without(1).unwrap();
        assert_eq!(rest, Poset::named("W_2").unwrap());
    }
}
