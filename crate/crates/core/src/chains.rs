//! Minimum chain partitions of finite strict orders.
//!
//! For a transitive relation the minimum number of chains covering the
//! ground set equals `k - |M|` where `M` is a maximum matching in the split
//! bipartite graph (left copy `u` joined to right copy `v` whenever `u < v`).
//! By Dilworth's theorem this count is also the width of the order.

/// Returns a minimum partition of `0..k` into chains of the strict order `less`.
///
/// `less` must be transitive and irreflexive. Chains are listed bottom-up and
/// ordered by their least element, so the output is deterministic.
pub fn min_chain_cover(k: usize, less: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let adj: Vec<Vec<usize>> = (0..k)
        .map(|u| (0..k).filter(|&v| less(u, v)).collect())
        .collect();

    // match_right[v] = u means the chain steps from u directly to v
    let mut match_right = vec![usize::MAX; k];
    for u in 0..k {
        let mut seen = vec![false; k];
        augment(u, &adj, &mut match_right, &mut seen);
    }

    let mut next = vec![usize::MAX; k];
    let mut has_prev = vec![false; k];
    for (v, &u) in match_right.iter().enumerate() {
        if u != usize::MAX {
            next[u] = v;
            has_prev[v] = true;
        }
    }

    (0..k)
        .filter(|&u| !has_prev[u])
        .map(|start| {
            let mut chain = vec![start];
            let mut cur = start;
            while next[cur] != usize::MAX {
                cur = next[cur];
                chain.push(cur);
            }
            chain
        })
        .collect()
}

fn augment(u: usize, adj: &[Vec<usize>], match_right: &mut [usize], seen: &mut [bool]) -> bool {
    for &v in &adj[u] {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        if match_right[v] == usize::MAX || augment(match_right[v], adj, match_right, seen) {
            match_right[v] = u;
            return true;
        }
    }
    false
}

/// Width of the order, i.e. the size of a largest antichain.
pub fn width(k: usize, less: impl Fn(usize, usize) -> bool) -> usize {
    min_chain_cover(k, less).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subset_less(sets: &[u64]) -> impl Fn(usize, usize) -> bool + '_ {
        move |i, j| sets[i] != sets[j] && sets[i] & sets[j] == sets[i]
    }

    #[test]
    fn empty_order_has_no_chains() {
        assert!(min_chain_cover(0, |_, _| false).is_empty());
    }

    #[test]
    fn antichain_needs_one_chain_per_element() {
        assert_eq!(width(5, |_, _| false), 5);
    }

    #[test]
    fn two_singletons_and_their_union() {
        // {1}, {2}, {1,2}
        let sets = [0b01, 0b10, 0b11];
        let chains = min_chain_cover(3, subset_less(&sets));
        assert_eq!(chains.len(), 2);
    }

    #[test]
    fn nested_family_is_one_chain() {
        let sets = [0b0, 0b1, 0b11, 0b111];
        let chains = min_chain_cover(4, subset_less(&sets));
        assert_eq!(chains, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn chains_partition_the_ground_set() {
        let sets = [0b000, 0b001, 0b010, 0b100, 0b011, 0b110, 0b111];
        let chains = min_chain_cover(sets.len(), subset_less(&sets));
        let mut all: Vec<usize> = chains.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..sets.len()).collect::<Vec<_>>());
        for chain in &chains {
            for w in chain.windows(2) {
                assert!(subset_less(&sets)(w[0], w[1]));
            }
        }
        // {1},{2},{3} is an antichain
        assert_eq!(chains.len(), 3);
    }
}
