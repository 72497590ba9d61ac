//! Multi-sentence compression word graph: node merging with context
//! tie-breaking, cooccurrence edge weights, speaker subgraphs, and DOT
//! export.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tagger::{StopwordSet, Tag, TaggedSentence};

pub type NodeId = usize;

/// One word occurrence mapped to a node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Occurrence {
    pub sentence_id: usize,
    pub position: usize,
    pub speaker: String,
}

/// A merged (word, tag) node.
#[derive(Debug, Clone, Serialize)]
pub struct Node {
    pub id: NodeId,
    pub word: String,
    pub tag: Tag,
    pub occurrences: Vec<Occurrence>,
    pub stopword: bool,
}

impl Node {
    pub fn freq(&self) -> usize {
        self.occurrences.len()
    }

    pub fn is_meta(&self) -> bool {
        self.tag == Tag::Meta
    }
}

/// A directed edge between adjacent words.
#[derive(Debug, Clone, Serialize)]
pub struct Edge {
    pub from: NodeId,
    pub to: NodeId,
    pub weight: f64,
    /// Sentences in which the two nodes are adjacent in order.
    pub support: Vec<usize>,
}

/// Which cooccurrence formula the edge weights follow.
///
/// `Paper` multiplies the summed position differences into the numerator;
/// `Filippova` divides by the sum of inverse differences, as in
/// Filippova (2010).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[derive(Default)]
pub enum EdgeWeightMode {
    #[default]
    Paper,
    Filippova,
}


impl std::str::FromStr for EdgeWeightMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(EdgeWeightMode::Paper),
            "filippova" => Ok(EdgeWeightMode::Filippova),
            other => Err(Error::InvalidConfig(format!(
                "unknown edge_weight mode \"{other}\""
            ))),
        }
    }
}

/// The completed word graph. Frozen after construction; all lookups are
/// read-only and safe to share across threads.
#[derive(Debug, Clone)]
pub struct WordGraph {
    nodes: BTreeMap<NodeId, Node>,
    edges: BTreeMap<(NodeId, NodeId), Edge>,
    out_adj: BTreeMap<NodeId, Vec<NodeId>>,
    bos_id: NodeId,
    eos_id: NodeId,
    sentence_paths: BTreeMap<usize, Vec<NodeId>>,
    sentence_speakers: BTreeMap<usize, String>,
    mode: EdgeWeightMode,
}

impl WordGraph {
    pub fn bos_id(&self) -> NodeId {
        self.bos_id
    }

    pub fn eos_id(&self) -> NodeId {
        self.eos_id
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(&id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.values()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.values()
    }

    pub fn edge(&self, from: NodeId, to: NodeId) -> Option<&Edge> {
        self.edges.get(&(from, to))
    }

    pub fn out_neighbors(&self, id: NodeId) -> &[NodeId] {
        self.out_adj.get(&id).map_or(&[], |v| v.as_slice())
    }

    pub fn sentence_paths(&self) -> &BTreeMap<usize, Vec<NodeId>> {
        &self.sentence_paths
    }

    pub fn sentence_speaker(&self, sentence_id: usize) -> Option<&str> {
        self.sentence_speakers.get(&sentence_id).map(|s| s.as_str())
    }

    pub fn speakers_in_order(&self) -> Vec<String> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for speaker in self.sentence_speakers.values() {
            if seen.insert(speaker.clone()) {
                out.push(speaker.clone());
            }
        }
        out
    }

    pub fn mode(&self) -> EdgeWeightMode {
        self.mode
    }

    /// Realize a node path as a lowercase token string, dropping bos/eos.
    pub fn realize(&self, path: &[NodeId]) -> String {
        path.iter()
            .filter_map(|id| self.nodes.get(id))
            .filter(|n| !n.is_meta())
            .map(|n| n.word.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Sub-graph restricted to one speaker's sentences. Node ids, edge
    /// weights, and occurrence lists are carried over unchanged; bos/eos
    /// are always retained.
    pub fn speaker_subgraph(&self, speaker: &str) -> Result<WordGraph> {
        let sids: BTreeSet<usize> = self
            .sentence_speakers
            .iter()
            .filter(|(_, s)| s.as_str() == speaker)
            .map(|(sid, _)| *sid)
            .collect();
        if sids.is_empty() {
            return Err(Error::UnknownSpeaker(speaker.to_string()));
        }
        let keep: BTreeSet<NodeId> = self
            .nodes
            .values()
            .filter(|n| {
                n.id == self.bos_id
                    || n.id == self.eos_id
                    || n.occurrences.iter().any(|o| sids.contains(&o.sentence_id))
            })
            .map(|n| n.id)
            .collect();
        let nodes: BTreeMap<NodeId, Node> = self
            .nodes
            .iter()
            .filter(|(id, _)| keep.contains(id))
            .map(|(id, n)| (*id, n.clone()))
            .collect();
        let mut edges = BTreeMap::new();
        let mut out_adj: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        for ((from, to), edge) in &self.edges {
            if !keep.contains(from) || !keep.contains(to) {
                continue;
            }
            let support: Vec<usize> = edge
                .support
                .iter()
                .copied()
                .filter(|sid| sids.contains(sid))
                .collect();
            if support.is_empty() {
                continue;
            }
            edges.insert(
                (*from, *to),
                Edge {
                    from: *from,
                    to: *to,
                    weight: edge.weight,
                    support,
                },
            );
            out_adj.entry(*from).or_default().push(*to);
        }
        let sentence_paths: BTreeMap<usize, Vec<NodeId>> = self
            .sentence_paths
            .iter()
            .filter(|(sid, _)| sids.contains(sid))
            .map(|(sid, p)| (*sid, p.clone()))
            .collect();
        let sentence_speakers: BTreeMap<usize, String> = sids
            .iter()
            .map(|sid| (*sid, speaker.to_string()))
            .collect();
        Ok(WordGraph {
            nodes,
            edges,
            out_adj,
            bos_id: self.bos_id,
            eos_id: self.eos_id,
            sentence_paths,
            sentence_speakers,
            mode: self.mode,
        })
    }

    /// Undirected, unweighted projection (parallel edges collapsed),
    /// as used for the k-core decomposition.
    pub fn undirected_projection(&self) -> BTreeMap<NodeId, BTreeSet<NodeId>> {
        let mut adj: BTreeMap<NodeId, BTreeSet<NodeId>> = self
            .nodes
            .keys()
            .map(|id| (*id, BTreeSet::new()))
            .collect();
        for (from, to) in self.edges.keys() {
            adj.get_mut(from).unwrap().insert(*to);
            adj.get_mut(to).unwrap().insert(*from);
        }
        adj
    }

    /// Dense weighted adjacency for shortest-path search, with the mapping
    /// back to node ids. Dense indices follow ascending node id, so
    /// lexicographic comparisons agree between the two spaces.
    pub fn dense_adjacency(&self) -> (Vec<Vec<(usize, f64)>>, Vec<NodeId>) {
        let ids: Vec<NodeId> = self.nodes.keys().copied().collect();
        let index: HashMap<NodeId, usize> =
            ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
        let mut adj = vec![Vec::new(); ids.len()];
        for ((from, to), edge) in &self.edges {
            adj[index[from]].push((index[to], edge.weight));
        }
        for row in &mut adj {
            row.sort_by_key(|a| a.0);
        }
        (adj, ids)
    }

    /// DOT rendering with `word/tag` node labels and 3-decimal edge
    /// weights.
    pub fn export_dot(&self) -> String {
        let mut out = String::from("digraph wordgraph {\n");
        for node in self.nodes.values() {
            let label = format!("{}/{}", node.word.replace('"', "\\\""), node.tag);
            out.push_str(&format!("  n{} [label=\"{}\"];\n", node.id, label));
        }
        for edge in self.edges.values() {
            out.push_str(&format!(
                "  n{} -> n{} [label=\"{:.3}\"];\n",
                edge.from, edge.to, edge.weight
            ));
        }
        out.push_str("}\n");
        out
    }

    /// JSON dump of nodes, edges, and weights for golden tests.
    pub fn export_json(&self) -> serde_json::Value {
        serde_json::json!({
            "bos": self.bos_id,
            "eos": self.eos_id,
            "nodes": self.nodes.values().collect::<Vec<_>>(),
            "edges": self.edges.values().collect::<Vec<_>>(),
        })
    }
}

/// Incremental graph builder. Single-writer; `finish` computes edge
/// weights and freezes the graph.
pub struct WordGraphBuilder {
    nodes: Vec<Node>,
    edges: BTreeMap<(NodeId, NodeId), Edge>,
    out_adj: BTreeMap<NodeId, Vec<NodeId>>,
    sentence_paths: BTreeMap<usize, Vec<NodeId>>,
    sentence_speakers: BTreeMap<usize, String>,
    lookup: HashMap<(String, Tag), Vec<NodeId>>,
    /// Lowercase words adjacent to each node so far, for the
    /// maximal-context merge tie-break.
    neighbor_words: Vec<HashSet<String>>,
    bos_id: NodeId,
    eos_id: NodeId,
    stopwords: StopwordSet,
    mode: EdgeWeightMode,
}

impl WordGraphBuilder {
    pub fn new(stopwords: StopwordSet, mode: EdgeWeightMode) -> WordGraphBuilder {
        let mut builder = WordGraphBuilder {
            nodes: Vec::new(),
            edges: BTreeMap::new(),
            out_adj: BTreeMap::new(),
            sentence_paths: BTreeMap::new(),
            sentence_speakers: BTreeMap::new(),
            lookup: HashMap::new(),
            neighbor_words: Vec::new(),
            bos_id: 0,
            eos_id: 0,
            stopwords,
            mode,
        };
        builder.bos_id = builder.new_node("bos", Tag::Meta, true);
        builder.eos_id = builder.new_node("eos", Tag::Meta, true);
        builder
    }

    fn new_node(&mut self, word: &str, tag: Tag, stopword: bool) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(Node {
            id,
            word: word.to_string(),
            tag,
            occurrences: Vec::new(),
            stopword,
        });
        self.neighbor_words.push(HashSet::new());
        self.lookup
            .entry((word.to_string(), tag))
            .or_default()
            .push(id);
        id
    }

    /// Map one wrapped sentence into the graph. Non-stopword tokens are
    /// mapped first in position order, then stopwords; a token joins an
    /// existing (word, tag) node unless that node already holds an
    /// occurrence from this sentence, preferring the candidate whose
    /// graph neighbors best match the token's sentence neighbors.
    pub fn add_sentence(&mut self, sentence: &TaggedSentence) -> Result<()> {
        if !sentence.is_wrapped() {
            return Err(Error::EmptySentence);
        }
        let sid = sentence.sentence_id;
        let tokens = &sentence.tokens;
        let mut assignment: Vec<Option<NodeId>> = vec![None; tokens.len()];
        let mut used: HashSet<NodeId> = HashSet::new();

        let is_stop = |i: usize| -> bool {
            tokens[i].is_meta() || self.stopwords.contains(&tokens[i].lower)
        };
        let mut order: Vec<usize> = (0..tokens.len()).filter(|&i| !is_stop(i)).collect();
        order.extend((0..tokens.len()).filter(|&i| is_stop(i)));

        for i in order {
            let tok = &tokens[i];
            let id = if tok.is_meta() {
                // bos/eos always merge into the unique meta nodes.
                if tok.lower == "bos" {
                    self.bos_id
                } else {
                    self.eos_id
                }
            } else {
                let key = (tok.lower.clone(), tok.tag);
                let candidates: Vec<NodeId> = self
                    .lookup
                    .get(&key)
                    .map(|v| {
                        v.iter().copied().filter(|id| !used.contains(id)).collect()
                    })
                    .unwrap_or_default();
                match candidates.len() {
                    0 => {
                        let stop = self.stopwords.contains(&tok.lower);
                        self.new_node(&tok.lower, tok.tag, stop)
                    }
                    1 => candidates[0],
                    _ => {
                        let prev = i.checked_sub(1).map(|j| tokens[j].lower.as_str());
                        let next = tokens.get(i + 1).map(|t| t.lower.as_str());
                        let mut best = candidates[0];
                        let mut best_overlap = 0usize;
                        let mut first = true;
                        for id in candidates {
                            let words = &self.neighbor_words[id];
                            let overlap = prev.map_or(0, |w| words.contains(w) as usize)
                                + next.map_or(0, |w| words.contains(w) as usize);
                            // Ties break toward the lowest node id, which is
                            // the first candidate in insertion order.
                            if first || overlap > best_overlap {
                                best = id;
                                best_overlap = overlap;
                                first = false;
                            }
                        }
                        best
                    }
                }
            };
            used.insert(id);
            self.nodes[id].occurrences.push(Occurrence {
                sentence_id: sid,
                position: tok.position,
                speaker: sentence.speaker.clone(),
            });
            assignment[i] = Some(id);
        }

        let path: Vec<NodeId> = assignment.into_iter().map(|a| a.unwrap()).collect();
        for window in path.windows(2) {
            let (from, to) = (window[0], window[1]);
            debug_assert_ne!(from, to, "adjacent tokens merged into one node");
            self.edges
                .entry((from, to))
                .or_insert_with(|| Edge {
                    from,
                    to,
                    weight: 0.0,
                    support: Vec::new(),
                })
                .support
                .push(sid);
            let from_word = self.nodes[from].word.clone();
            let to_word = self.nodes[to].word.clone();
            self.neighbor_words[from].insert(to_word);
            self.neighbor_words[to].insert(from_word);
        }
        self.sentence_paths.insert(sid, path);
        self.sentence_speakers
            .insert(sid, sentence.speaker.clone());
        Ok(())
    }

    /// Compute edge weights and freeze the graph.
    pub fn finish(mut self) -> Result<WordGraph> {
        if self.sentence_paths.is_empty() {
            return Err(Error::EmptyTranscript);
        }
        // Per-node sentence -> position map. Each node holds at most one
        // occurrence per sentence.
        let positions: Vec<HashMap<usize, usize>> = self
            .nodes
            .iter()
            .map(|n| {
                n.occurrences
                    .iter()
                    .map(|o| (o.sentence_id, o.position))
                    .collect()
            })
            .collect();
        for edge in self.edges.values_mut() {
            let from = &self.nodes[edge.from];
            let to = &self.nodes[edge.to];
            let f1 = from.freq() as f64;
            let f2 = to.freq() as f64;
            let mut diff_sum = 0.0;
            let mut inv_diff_sum = 0.0;
            for (sid, &j) in &positions[edge.from] {
                if let Some(&k) = positions[edge.to].get(sid) {
                    if j < k {
                        let diff = (k - j) as f64;
                        diff_sum += diff;
                        inv_diff_sum += 1.0 / diff;
                    }
                }
            }
            let w_prime = match self.mode {
                EdgeWeightMode::Paper => (f1 + f2) * diff_sum,
                EdgeWeightMode::Filippova => (f1 + f2) / inv_diff_sum,
            };
            edge.weight = w_prime / (f1 * f2);
        }
        for &(from, to) in self.edges.keys() {
            self.out_adj.entry(from).or_default().push(to);
        }
        Ok(WordGraph {
            nodes: self.nodes.into_iter().map(|n| (n.id, n)).collect(),
            edges: self.edges,
            out_adj: self.out_adj,
            bos_id: self.bos_id,
            eos_id: self.eos_id,
            sentence_paths: self.sentence_paths,
            sentence_speakers: self.sentence_speakers,
            mode: self.mode,
        })
    }
}

/// Build a completed graph from wrapped sentences.
pub fn build_graph(
    sentences: &[TaggedSentence],
    stopwords: &StopwordSet,
    mode: EdgeWeightMode,
) -> Result<WordGraph> {
    let mut builder = WordGraphBuilder::new(stopwords.clone(), mode);
    for s in sentences {
        builder.add_sentence(s)?;
    }
    builder.finish()
}
