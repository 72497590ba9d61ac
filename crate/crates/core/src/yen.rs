//! Loopless k-shortest paths (Yen, 1971) over a dense weighted adjacency,
//! produced lazily so callers can keep pulling candidates past an initial
//! budget.
//!
//! Paths come out ordered by (total weight, lexicographic node sequence).
//! Totals are always recomputed by summing edge weights left to right, so
//! they match a brute-force enumeration bit for bit.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap, HashSet};

use crate::error::{Error, Result};

/// Dense adjacency: `adj[u]` lists `(v, weight)` out-edges.
pub type Adjacency = Vec<Vec<(usize, f64)>>;

#[derive(Debug, Clone, PartialEq)]
struct RankedPath {
    cost: f64,
    nodes: Vec<usize>,
}

impl Eq for RankedPath {}

impl Ord for RankedPath {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cost
            .total_cmp(&other.cost)
            .then_with(|| self.nodes.cmp(&other.nodes))
    }
}

impl PartialOrd for RankedPath {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sum edge weights along a path strictly left to right.
fn path_cost(adj: &Adjacency, nodes: &[usize]) -> f64 {
    let mut cost = 0.0;
    for w in nodes.windows(2) {
        let weight = adj[w[0]]
            .iter()
            .find(|(v, _)| *v == w[1])
            .map(|(_, w)| *w)
            .expect("edge on path");
        cost += weight;
    }
    cost
}

/// Dijkstra that returns the lexicographically smallest minimum-cost
/// path. Full paths ride in the heap so equal-cost entries order by node
/// sequence; weights must be non-negative.
fn dijkstra_lex(
    adj: &Adjacency,
    source: usize,
    target: usize,
    banned_nodes: &HashSet<usize>,
    banned_edges: &HashSet<(usize, usize)>,
) -> Option<RankedPath> {
    if banned_nodes.contains(&source) {
        return None;
    }
    let mut settled = vec![false; adj.len()];
    let mut heap: BinaryHeap<std::cmp::Reverse<RankedPath>> = BinaryHeap::new();
    heap.push(std::cmp::Reverse(RankedPath {
        cost: 0.0,
        nodes: vec![source],
    }));
    while let Some(std::cmp::Reverse(entry)) = heap.pop() {
        let node = *entry.nodes.last().unwrap();
        if settled[node] {
            continue;
        }
        settled[node] = true;
        if node == target {
            return Some(entry);
        }
        for &(next, weight) in &adj[node] {
            if settled[next]
                || banned_nodes.contains(&next)
                || banned_edges.contains(&(node, next))
            {
                continue;
            }
            let mut nodes = entry.nodes.clone();
            nodes.push(next);
            heap.push(std::cmp::Reverse(RankedPath {
                cost: entry.cost + weight,
                nodes,
            }));
        }
    }
    None
}

/// Lazy Yen enumerator. Each call to `next` yields the next loopless
/// path from source to target in (weight, lexicographic) order.
pub struct KShortestPaths<'a> {
    adj: &'a Adjacency,
    source: usize,
    target: usize,
    found: Vec<RankedPath>,
    candidates: BTreeSet<RankedPath>,
    exhausted: bool,
}

impl<'a> KShortestPaths<'a> {
    pub fn new(adj: &'a Adjacency, source: usize, target: usize) -> KShortestPaths<'a> {
        KShortestPaths {
            adj,
            source,
            target,
            found: Vec::new(),
            candidates: BTreeSet::new(),
            exhausted: false,
        }
    }

    fn spur_candidates(&mut self) {
        let last = self.found.last().expect("at least one found path").clone();
        for i in 0..last.nodes.len() - 1 {
            let spur_node = last.nodes[i];
            let root = &last.nodes[..=i];
            let mut banned_edges: HashSet<(usize, usize)> = HashSet::new();
            for p in &self.found {
                if p.nodes.len() > i + 1 && p.nodes[..=i] == *root {
                    banned_edges.insert((p.nodes[i], p.nodes[i + 1]));
                }
            }
            let banned_nodes: HashSet<usize> = root[..i].iter().copied().collect();
            if let Some(spur) =
                dijkstra_lex(self.adj, spur_node, self.target, &banned_nodes, &banned_edges)
            {
                let mut nodes = root[..i].to_vec();
                nodes.extend(spur.nodes);
                let cand = RankedPath {
                    cost: path_cost(self.adj, &nodes),
                    nodes,
                };
                if !self.found.iter().any(|p| p.nodes == cand.nodes) {
                    self.candidates.insert(cand);
                }
            }
        }
    }
}

impl Iterator for KShortestPaths<'_> {
    type Item = (Vec<usize>, f64);

    fn next(&mut self) -> Option<Self::Item> {
        if self.exhausted {
            return None;
        }
        if self.found.is_empty() {
            match dijkstra_lex(
                self.adj,
                self.source,
                self.target,
                &HashSet::new(),
                &HashSet::new(),
            ) {
                Some(mut first) => {
                    first.cost = path_cost(self.adj, &first.nodes);
                    self.found.push(first.clone());
                    return Some((first.nodes, first.cost));
                }
                None => {
                    self.exhausted = true;
                    return None;
                }
            }
        }
        self.spur_candidates();
        match self.candidates.pop_first() {
            Some(next) => {
                self.found.push(next.clone());
                Some((next.nodes, next.cost))
            }
            None => {
                self.exhausted = true;
                None
            }
        }
    }
}

/// The first `k` loopless shortest paths, or an error when the target is
/// unreachable.
pub fn yen_k_shortest(
    adj: &Adjacency,
    source: usize,
    target: usize,
    k: usize,
) -> Result<Vec<(Vec<usize>, f64)>> {
    let paths: Vec<(Vec<usize>, f64)> =
        KShortestPaths::new(adj, source, target).take(k).collect();
    if paths.is_empty() {
        return Err(Error::Disconnected);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Adjacency {
        // 0 -> 1 -> 3 with weights 1+1, 0 -> 2 -> 3 with weights 2+2.
        vec![
            vec![(1, 1.0), (2, 2.0)],
            vec![(3, 1.0)],
            vec![(3, 2.0)],
            vec![],
        ]
    }

    #[test]
    fn diamond_orders_by_weight() {
        let adj = diamond();
        let paths = yen_k_shortest(&adj, 0, 3, 2).unwrap();
        assert_eq!(paths.len(), 2);
        assert_eq!(paths[0].0, vec![0, 1, 3]);
        assert_eq!(paths[0].1, 2.0);
        assert_eq!(paths[1].0, vec![0, 2, 3]);
        assert_eq!(paths[1].1, 4.0);
    }

    #[test]
    fn k_one_is_dijkstra() {
        let adj = diamond();
        let paths = yen_k_shortest(&adj, 0, 3, 1).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].0, vec![0, 1, 3]);
    }

    #[test]
    fn exhaustion_returns_fewer_paths() {
        // Exactly 3 loopless paths exist.
        let adj: Adjacency = vec![
            vec![(1, 1.0), (2, 1.0), (3, 5.0)],
            vec![(3, 1.0)],
            vec![(3, 1.0)],
            vec![],
        ];
        let paths = yen_k_shortest(&adj, 0, 3, 10).unwrap();
        assert_eq!(paths.len(), 3);
    }

    #[test]
    fn unreachable_target_is_error() {
        let adj: Adjacency = vec![vec![(1, 1.0)], vec![], vec![]];
        assert!(matches!(
            yen_k_shortest(&adj, 0, 2, 1),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn weights_nondecreasing() {
        let adj: Adjacency = vec![
            vec![(1, 1.0), (2, 0.5)],
            vec![(3, 1.0), (2, 0.25)],
            vec![(3, 2.0), (1, 0.75)],
            vec![],
        ];
        let paths = yen_k_shortest(&adj, 0, 3, 10).unwrap();
        for w in paths.windows(2) {
            assert!(w[0].1 <= w[1].1);
        }
    }

    #[test]
    fn equal_weights_order_lexicographically() {
        let adj: Adjacency = vec![
            vec![(1, 1.0), (2, 1.0)],
            vec![(3, 1.0)],
            vec![(3, 1.0)],
            vec![],
        ];
        let paths = yen_k_shortest(&adj, 0, 3, 2).unwrap();
        assert_eq!(paths[0].0, vec![0, 1, 3]);
        assert_eq!(paths[1].0, vec![0, 2, 3]);
    }

    #[test]
    fn paths_are_loopless() {
        let adj: Adjacency = vec![
            vec![(1, 1.0)],
            vec![(0, 0.1), (2, 1.0)],
            vec![(1, 0.1), (3, 1.0)],
            vec![],
        ];
        for (path, _) in yen_k_shortest(&adj, 0, 3, 20).unwrap() {
            let unique: HashSet<usize> = path.iter().copied().collect();
            assert_eq!(unique.len(), path.len());
        }
    }
}
