//! Summary path extraction: walk k-shortest bos->eos paths in weight
//! order, keep those clearing the coverage threshold, and stop once all
//! keywords are covered or the search depth runs out.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, WordGraph};
use crate::kcore::KeywordSet;
use crate::scoring::{score_path, PathScore, Threshold};
use crate::tagger::Tag;
use crate::yen::KShortestPaths;

/// Search budget and path gates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Shortest-path budget per enumeration.
    pub k_paths: usize,
    /// Maximum number of candidate paths examined.
    pub search_depth: usize,
    /// Minimum non-meta tokens an accepted path must carry.
    pub min_tokens: usize,
    /// Require at least one verb node on every accepted path.
    pub require_verb: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            k_paths: 100,
            search_depth: 100,
            min_tokens: 3,
            require_verb: true,
        }
    }
}

/// An accepted summary path.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryPath {
    pub nodes: Vec<NodeId>,
    pub text: String,
    pub score: PathScore,
    pub total_weight: f64,
    pub speaker: String,
    pub segment: usize,
}

/// Extraction result plus a diagnostic when nothing passed the gates.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub paths: Vec<SummaryPath>,
    pub candidates_examined: usize,
    /// Set when no candidate cleared the threshold within the search
    /// depth; callers fall back to the best original sentence.
    pub exhausted_without_acceptance: bool,
}

/// A scored candidate path, independent of how it was produced.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub nodes: Vec<NodeId>,
    pub total_weight: f64,
    pub score: PathScore,
    pub non_meta_tokens: usize,
    pub has_verb: bool,
}

/// Acceptance loop over candidates already in weight order: keep paths
/// scoring at or above the threshold that pass the verb/length gates,
/// tracking covered keywords until the set is exhausted or the depth is
/// reached.
pub fn filter_candidates<I>(
    candidates: I,
    kw: &KeywordSet,
    t: f64,
    cfg: &SearchConfig,
) -> (Vec<Candidate>, usize)
where
    I: IntoIterator<Item = Candidate>,
{
    let mut accepted: Vec<Candidate> = Vec::new();
    let mut covered: BTreeSet<NodeId> = BTreeSet::new();
    let mut examined = 0;
    for cand in candidates {
        if examined >= cfg.search_depth {
            break;
        }
        examined += 1;
        let passes = cand.score.score >= t
            && (!cfg.require_verb || cand.has_verb)
            && cand.non_meta_tokens >= cfg.min_tokens;
        if passes {
            covered.extend(cand.score.covered.iter().copied());
            accepted.push(cand);
            if covered.len() == kw.len() {
                break;
            }
        }
    }
    (accepted, examined)
}

/// Enumerate and accept summary paths for one scope (a speaker subgraph,
/// optionally within a topic segment).
pub fn extract_summaries(
    g: &WordGraph,
    kw: &KeywordSet,
    t: &Threshold,
    cfg: &SearchConfig,
    speaker: &str,
    segment: usize,
) -> Result<Extraction> {
    if kw.is_empty() {
        return Err(Error::EmptyKeywords);
    }
    let (adj, ids) = g.dense_adjacency();
    let source = ids
        .iter()
        .position(|id| *id == g.bos_id())
        .ok_or(Error::Disconnected)?;
    let target = ids
        .iter()
        .position(|id| *id == g.eos_id())
        .ok_or(Error::Disconnected)?;
    let mut yen = KShortestPaths::new(&adj, source, target).peekable();
    if yen.peek().is_none() {
        return Err(Error::Disconnected);
    }
    let candidates = yen.map(|(dense_path, total_weight)| {
        let nodes: Vec<NodeId> = dense_path.iter().map(|i| ids[*i]).collect();
        let score = score_path(&nodes, kw).expect("non-empty keyword set");
        let non_meta_tokens = nodes
            .iter()
            .filter(|id| !g.node(**id).unwrap().is_meta())
            .count();
        let has_verb = nodes
            .iter()
            .any(|id| g.node(*id).unwrap().tag == Tag::Verb);
        Candidate {
            nodes,
            total_weight,
            score,
            non_meta_tokens,
            has_verb,
        }
    });
    let (accepted, candidates_examined) = filter_candidates(candidates, kw, t.t, cfg);
    let exhausted_without_acceptance = accepted.is_empty();
    let paths = accepted
        .into_iter()
        .map(|c| SummaryPath {
            text: g.realize(&c.nodes),
            nodes: c.nodes,
            score: c.score,
            total_weight: c.total_weight,
            speaker: speaker.to_string(),
            segment,
        })
        .collect();
    Ok(Extraction {
        paths,
        candidates_examined,
        exhausted_without_acceptance,
    })
}

/// The original sentence with the highest coverage score in this scope;
/// ties go to the earliest sentence. Used as a fallback when nothing
/// clears the threshold.
pub fn best_original_sentence(g: &WordGraph, kw: &KeywordSet) -> Option<(usize, Vec<NodeId>)> {
    let mut best: Option<(usize, f64)> = None;
    for (sid, path) in g.sentence_paths() {
        let score = if kw.is_empty() {
            0.0
        } else {
            score_path(path, kw).ok()?.score
        };
        match best {
            Some((_, s)) if score <= s => {}
            _ => best = Some((*sid, score)),
        }
    }
    best.map(|(sid, _)| (sid, g.sentence_paths()[&sid].clone()))
}
