//! Maximum-weight bipartite assignment of transmissions to channels.
//!
//! Left vertices are candidate transmissions carrying a weight (the source
//! age they would refresh), right vertices are channels, and an edge means
//! the transmission's relay is connected on that channel. All weight sits
//! on the left, so a set of left vertices is worth the same however it is
//! matched; the problem is picking the max-weight *matchable* set. Such
//! sets form a transversal matroid, so a greedy sweep in descending weight
//! order with an augmenting-path feasibility test is exact. A second
//! lexicographic pass then fixes which channel each picked transmission
//! uses, making the result fully deterministic: ties fall to the lowest
//! left index, then the lowest right index. Worst case O(V^3) on the tiny
//! per-slot graphs this is used for.

/// Bipartite graph with weighted left vertices.
#[derive(Clone, Debug)]
pub struct WeightedBipartiteGraph {
    n_left: usize,
    n_right: usize,
    adj: Vec<Vec<usize>>,
    weights: Vec<u64>,
}

impl WeightedBipartiteGraph {
    pub fn new(n_left: usize, n_right: usize) -> Self {
        WeightedBipartiteGraph {
            n_left,
            n_right,
            adj: vec![Vec::new(); n_left],
            weights: vec![0; n_left],
        }
    }

    pub fn set_weight(&mut self, left: usize, weight: u64) {
        self.weights[left] = weight;
    }

    pub fn add_edge(&mut self, left: usize, right: usize) {
        assert!(left < self.n_left && right < self.n_right);
        if !self.adj[left].contains(&right) {
            self.adj[left].push(right);
            self.adj[left].sort_unstable();
        }
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }
}

/// A matching, as (left, right) pairs sorted by left index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub pairs: Vec<(usize, usize)>,
    pub total_weight: u64,
}

fn try_augment(
    adj: &[Vec<usize>],
    left: usize,
    allowed: impl Fn(usize) -> bool + Copy,
    visited: &mut [bool],
    match_right: &mut [Option<usize>],
) -> bool {
    for &r in &adj[left] {
        if !allowed(r) || visited[r] {
            continue;
        }
        visited[r] = true;
        let vacant = match match_right[r] {
            None => true,
            Some(l2) => try_augment(adj, l2, allowed, visited, match_right),
        };
        if vacant {
            match_right[r] = Some(left);
            return true;
        }
    }
    false
}

/// True when every left vertex in `lefts` can be matched simultaneously
/// into rights satisfying `allowed`.
fn feasible(adj: &[Vec<usize>], n_right: usize, lefts: &[usize], allowed: impl Fn(usize) -> bool + Copy) -> bool {
    let mut match_right = vec![None; n_right];
    for &l in lefts {
        let mut visited = vec![false; n_right];
        if !try_augment(adj, l, allowed, &mut visited, &mut match_right) {
            return false;
        }
    }
    true
}

/// Computes a maximum-weight assignment.
pub fn max_weight_assignment(g: &WeightedBipartiteGraph) -> Assignment {
    // Greedy over the transversal matroid: visit lefts by descending
    // weight (index ascending on ties) and keep those that stay matchable.
    let mut order: Vec<usize> = (0..g.n_left).collect();
    order.sort_by_key(|&l| (std::cmp::Reverse(g.weights[l]), l));

    let mut match_right: Vec<Option<usize>> = vec![None; g.n_right];
    let mut picked: Vec<usize> = Vec::new();
    for l in order {
        let mut visited = vec![false; g.n_right];
        if try_augment(&g.adj, l, |_| true, &mut visited, &mut match_right) {
            picked.push(l);
        }
    }
    picked.sort_unstable();

    // Lexicographic channel choice: in ascending left order, commit the
    // lowest right that keeps the remaining picked lefts matchable.
    let mut used = vec![false; g.n_right];
    let mut pairs = Vec::with_capacity(picked.len());
    for (i, &l) in picked.iter().enumerate() {
        let rest = &picked[i + 1..];
        let mut chosen = None;
        for &r in &g.adj[l] {
            if used[r] {
                continue;
            }
            let ok = feasible(&g.adj, g.n_right, rest, |c| !used[c] && c != r);
            if ok {
                chosen = Some(r);
                break;
            }
        }
        let r = chosen.expect("picked set must stay matchable");
        used[r] = true;
        pairs.push((l, r));
    }

    let total_weight = pairs.iter().map(|&(l, _)| g.weights[l]).sum();
    Assignment { pairs, total_weight }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{StreamEntity, StreamRng};

    /// Exhaustive optimum by trying every injective partial assignment.
    fn brute_force_best(g: &WeightedBipartiteGraph) -> u64 {
        fn rec(g: &WeightedBipartiteGraph, l: usize, used: &mut Vec<bool>) -> u64 {
            if l == g.n_left {
                return 0;
            }
            // Leave l unmatched.
            let mut best = rec(g, l + 1, used);
            for &r in &g.adj[l] {
                if !used[r] {
                    used[r] = true;
                    best = best.max(g.weights[l] + rec(g, l + 1, used));
                    used[r] = false;
                }
            }
            best
        }
        rec(g, 0, &mut vec![false; g.n_right])
    }

    fn assert_valid(g: &WeightedBipartiteGraph, a: &Assignment) {
        let mut seen_l = vec![false; g.n_left];
        let mut seen_r = vec![false; g.n_right];
        for &(l, r) in &a.pairs {
            assert!(g.adj[l].contains(&r), "pair ({l}, {r}) is not an edge");
            assert!(!seen_l[l] && !seen_r[r], "vertex reused");
            seen_l[l] = true;
            seen_r[r] = true;
        }
        assert_eq!(
            a.total_weight,
            a.pairs.iter().map(|&(l, _)| g.weights[l]).sum::<u64>()
        );
    }

    #[test]
    fn empty_graph_yields_empty_assignment() {
        let g = WeightedBipartiteGraph::new(0, 3);
        let a = max_weight_assignment(&g);
        assert_eq!(a.pairs, vec![]);
        assert_eq!(a.total_weight, 0);
    }

    #[test]
    fn isolated_left_vertices_stay_unmatched() {
        let mut g = WeightedBipartiteGraph::new(2, 1);
        g.set_weight(0, 10);
        g.set_weight(1, 20);
        g.add_edge(0, 0);
        let a = max_weight_assignment(&g);
        assert_eq!(a.pairs, vec![(0, 0)]);
        assert_eq!(a.total_weight, 10);
    }

    #[test]
    fn prefers_heavy_vertex_when_channel_is_contested() {
        let mut g = WeightedBipartiteGraph::new(2, 1);
        g.set_weight(0, 3);
        g.set_weight(1, 9);
        g.add_edge(0, 0);
        g.add_edge(1, 0);
        let a = max_weight_assignment(&g);
        assert_eq!(a.pairs, vec![(1, 0)]);
        assert_eq!(a.total_weight, 9);
    }

    #[test]
    fn augments_through_occupied_channels() {
        // Left 0 can use both channels, left 1 only channel 0: taking both
        // requires rerouting 0 to channel 1.
        let mut g = WeightedBipartiteGraph::new(2, 2);
        g.set_weight(0, 5);
        g.set_weight(1, 4);
        g.add_edge(0, 0);
        g.add_edge(0, 1);
        g.add_edge(1, 0);
        let a = max_weight_assignment(&g);
        assert_eq!(a.total_weight, 9);
        assert_eq!(a.pairs, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn ties_fall_to_lowest_left_then_lowest_right() {
        // Two equal-weight lefts contending for one channel.
        let mut g = WeightedBipartiteGraph::new(2, 2);
        g.set_weight(0, 7);
        g.set_weight(1, 7);
        g.add_edge(0, 0);
        g.add_edge(0, 1);
        g.add_edge(1, 1);
        let a = max_weight_assignment(&g);
        // Both fit; left 0 gets its lowest feasible channel.
        assert_eq!(a.pairs, vec![(0, 0), (1, 1)]);

        let mut g = WeightedBipartiteGraph::new(2, 1);
        g.set_weight(0, 7);
        g.set_weight(1, 7);
        g.add_edge(0, 0);
        g.add_edge(1, 0);
        let a = max_weight_assignment(&g);
        assert_eq!(a.pairs, vec![(0, 0)], "equal weight goes to the lower left index");
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        // Acceptance gate: exact agreement with exhaustive search on at
        // least 1000 random graphs up to 8 left and 6 right vertices.
        let mut rng = StreamRng::new(0xbead, StreamEntity::Ap, 0, 0);
        for case in 0..1500 {
            let n_left = 1 + rng.uniform_usize(8);
            let n_right = 1 + rng.uniform_usize(6);
            let mut g = WeightedBipartiteGraph::new(n_left, n_right);
            for l in 0..n_left {
                g.set_weight(l, 1 + rng.next_u64() % 100);
                for r in 0..n_right {
                    if rng.bernoulli(0.45) {
                        g.add_edge(l, r);
                    }
                }
            }
            let a = max_weight_assignment(&g);
            assert_valid(&g, &a);
            let best = brute_force_best(&g);
            assert_eq!(
                a.total_weight, best,
                "case {case}: got {} want {} on {g:?}",
                a.total_weight, best
            );
        }
    }

    #[test]
    fn result_is_deterministic() {
        let mut rng = StreamRng::new(7, StreamEntity::Ap, 1, 1);
        let mut g = WeightedBipartiteGraph::new(6, 4);
        for l in 0..6 {
            g.set_weight(l, 1 + rng.next_u64() % 50);
            for r in 0..4 {
                if rng.bernoulli(0.5) {
                    g.add_edge(l, r);
                }
            }
        }
        let a = max_weight_assignment(&g);
        let b = max_weight_assignment(&g);
        assert_eq!(a, b);
    }
}
