//! K-core decomposition of the word graph and keyword set extraction.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{NodeId, WordGraph};
use crate::tagger::Tag;

/// Core numbers for every node plus the graph degeneracy.
#[derive(Debug, Clone, Serialize)]
pub struct CoreDecomposition {
    pub core_number: BTreeMap<NodeId, usize>,
    pub degeneracy: usize,
}

/// The keyword node set: non-stopword members of the densest core level
/// that still contains one.
#[derive(Debug, Clone, Serialize)]
pub struct KeywordSet {
    pub members: BTreeSet<NodeId>,
    pub source_words: BTreeSet<(String, Tag)>,
    /// Core level the members were taken from.
    pub level: usize,
}

impl KeywordSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.members.contains(&id)
    }

    /// Restrict the keyword set to nodes present in a subgraph scope.
    pub fn restrict_to(&self, g: &WordGraph) -> KeywordSet {
        let members: BTreeSet<NodeId> = self
            .members
            .iter()
            .copied()
            .filter(|id| g.node(*id).is_some())
            .collect();
        let source_words = members
            .iter()
            .filter_map(|id| g.node(*id))
            .map(|n| (n.word.clone(), n.tag))
            .collect();
        KeywordSet {
            members,
            source_words,
            level: self.level,
        }
    }

    pub fn words(&self) -> Vec<String> {
        self.source_words.iter().map(|(w, _)| w.clone()).collect()
    }
}

/// Exact core numbers by iterative minimum-degree peeling on an
/// undirected adjacency.
pub fn core_numbers(
    adj: &BTreeMap<NodeId, BTreeSet<NodeId>>,
) -> BTreeMap<NodeId, usize> {
    let mut degree: BTreeMap<NodeId, usize> =
        adj.iter().map(|(id, ns)| (*id, ns.len())).collect();
    let mut core: BTreeMap<NodeId, usize> = BTreeMap::new();

    // Bucket queue over degrees; nodes may appear in stale buckets and are
    // skipped when their recorded degree no longer matches.
    let max_deg = degree.values().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<NodeId>> = vec![Vec::new(); max_deg + 1];
    for (&id, &d) in &degree {
        buckets[d].push(id);
    }
    let mut removed: BTreeSet<NodeId> = BTreeSet::new();
    let mut k = 0;
    let mut d = 0;
    while removed.len() < adj.len() {
        while d <= max_deg && buckets[d].is_empty() {
            d += 1;
        }
        let id = buckets[d].remove(0);
        if removed.contains(&id) || degree[&id] != d {
            continue;
        }
        k = k.max(d);
        removed.insert(id);
        core.insert(id, k);
        for nb in &adj[&id] {
            if !removed.contains(nb) {
                let nd = degree.get_mut(nb).unwrap();
                *nd -= 1;
                let nd = *nd;
                buckets[nd].push(*nb);
                if nd < d {
                    d = nd;
                }
            }
        }
    }
    core
}

/// Decompose the undirected, unweighted projection of a word graph.
pub fn core_decompose(g: &WordGraph) -> CoreDecomposition {
    let adj = g.undirected_projection();
    let core_number = core_numbers(&adj);
    let degeneracy = core_number.values().copied().max().unwrap_or(0);
    CoreDecomposition {
        core_number,
        degeneracy,
    }
}

/// Keyword nodes: non-stopword, non-meta members of the main core. When
/// the main core holds only stopwords, descend to the largest lower core
/// level that contains at least one non-stopword node.
pub fn extract_keywords(g: &WordGraph, d: &CoreDecomposition) -> Result<KeywordSet> {
    let eligible = |id: &NodeId| -> bool {
        g.node(*id).is_some_and(|n| {
            !n.stopword && !n.is_meta() && n.tag != Tag::Punct
        })
    };
    for level in (0..=d.degeneracy).rev() {
        let members: BTreeSet<NodeId> = d
            .core_number
            .iter()
            .filter(|(id, cn)| **cn >= level && eligible(id))
            .map(|(id, _)| *id)
            .collect();
        if !members.is_empty() {
            let source_words = members
                .iter()
                .filter_map(|id| g.node(*id))
                .map(|n| (n.word.clone(), n.tag))
                .collect();
            return Ok(KeywordSet {
                members,
                source_words,
                level,
            });
        }
    }
    Err(Error::NoKeywords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, EdgeWeightMode};
    use crate::tagger::{StopwordSet, Tagger};

    fn adjacency(edges: &[(usize, usize)], n: usize) -> BTreeMap<NodeId, BTreeSet<NodeId>> {
        let mut adj: BTreeMap<NodeId, BTreeSet<NodeId>> =
            (0..n).map(|i| (i, BTreeSet::new())).collect();
        for &(a, b) in edges {
            adj.get_mut(&a).unwrap().insert(b);
            adj.get_mut(&b).unwrap().insert(a);
        }
        adj
    }

    #[test]
    fn triangle_has_core_two() {
        let adj = adjacency(&[(0, 1), (1, 2), (2, 0)], 3);
        let core = core_numbers(&adj);
        assert!(core.values().all(|&c| c == 2));
    }

    #[test]
    fn star_has_core_one() {
        let edges: Vec<(usize, usize)> = (1..6).map(|i| (0, i)).collect();
        let adj = adjacency(&edges, 6);
        let core = core_numbers(&adj);
        assert!(core.values().all(|&c| c == 1));
    }

    #[test]
    fn isolated_node_core_zero() {
        let adj = adjacency(&[(0, 1)], 3);
        let core = core_numbers(&adj);
        assert_eq!(core[&2], 0);
        assert_eq!(core[&0], 1);
    }

    #[test]
    fn triangle_plus_tail() {
        // Triangle {0,1,2} with a pendant 3 attached to 0.
        let adj = adjacency(&[(0, 1), (1, 2), (2, 0), (0, 3)], 4);
        let core = core_numbers(&adj);
        assert_eq!(core[&3], 1);
        assert_eq!(core[&0], 2);
        assert_eq!(core[&1], 2);
        assert_eq!(core[&2], 2);
    }

    #[test]
    fn keywords_exclude_meta_and_stopwords() {
        let tagger = Tagger::new();
        let texts = [
            ("A", "the poodles are cute"),
            ("B", "the poodles are loud"),
            ("A", "poodles are the best"),
        ];
        let sents: Vec<_> = texts
            .iter()
            .enumerate()
            .map(|(i, (sp, t))| tagger.tag_sentence(t, i, sp).unwrap())
            .collect();
        let g = build_graph(&sents, &StopwordSet::bundled(), EdgeWeightMode::Paper)
            .unwrap();
        let d = core_decompose(&g);
        let kw = extract_keywords(&g, &d).unwrap();
        assert!(!kw.is_empty());
        for id in &kw.members {
            let n = g.node(*id).unwrap();
            assert!(!n.stopword);
            assert!(!n.is_meta());
            assert_ne!(n.word, "bos");
            assert_ne!(n.word, "eos");
        }
        let words = kw.words();
        assert!(words.contains(&"poodles".to_string()));
    }

    #[test]
    fn fallback_descends_core_levels() {
        // Dense stopword core; the single content word sits at a lower
        // level but must still be reported.
        let tagger = Tagger::new();
        let texts = [
            ("A", "is it on the up"),
            ("B", "on it is the up"),
            ("A", "the up is on it"),
            ("B", "it is up on the"),
            ("A", "up the on is it"),
            ("B", "penguin is here"),
        ];
        let sents: Vec<_> = texts
            .iter()
            .enumerate()
            .map(|(i, (sp, t))| tagger.tag_sentence(t, i, sp).unwrap())
            .collect();
        let g = build_graph(&sents, &StopwordSet::bundled(), EdgeWeightMode::Paper)
            .unwrap();
        let d = core_decompose(&g);
        let kw = extract_keywords(&g, &d).unwrap();
        assert!(!kw.is_empty());
        assert!(kw.words().contains(&"penguin".to_string()));
    }

    #[test]
    fn all_stopword_graph_is_an_error() {
        let tagger = Tagger::new();
        let sents = vec![tagger.tag_sentence("it is the", 0, "A").unwrap()];
        let g = build_graph(&sents, &StopwordSet::bundled(), EdgeWeightMode::Paper)
            .unwrap();
        let d = core_decompose(&g);
        let err = extract_keywords(&g, &d).unwrap_err();
        assert_eq!(err.to_string(), "no candidate keywords");
    }

    #[test]
    fn adding_edge_never_decreases_core_numbers() {
        let base = adjacency(&[(0, 1), (1, 2), (2, 3), (3, 0)], 5);
        let before = core_numbers(&base);
        let mut denser = base.clone();
        denser.get_mut(&0).unwrap().insert(2);
        denser.get_mut(&2).unwrap().insert(0);
        let after = core_numbers(&denser);
        for (id, c) in &before {
            assert!(after[id] >= *c);
        }
    }
}
