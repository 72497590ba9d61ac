//! Keyword-coverage path scores and the acceptance threshold.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{NodeId, WordGraph};
use crate::kcore::KeywordSet;

/// Coverage score of one bos->eos path: fraction of keyword nodes it
/// touches. Duplicate visits count once.
#[derive(Debug, Clone, Serialize)]
pub struct PathScore {
    pub path: Vec<NodeId>,
    pub score: f64,
    pub covered: BTreeSet<NodeId>,
}

/// Mean per-sentence coverage score; candidate paths scoring below `t`
/// are discarded downstream.
#[derive(Debug, Clone, Serialize)]
pub struct Threshold {
    pub t: f64,
    pub per_sentence_scores: BTreeMap<usize, f64>,
}

/// Score a path against the keyword set.
pub fn score_path(path: &[NodeId], kw: &KeywordSet) -> Result<PathScore> {
    if kw.is_empty() {
        return Err(Error::EmptyKeywords);
    }
    let covered: BTreeSet<NodeId> = path
        .iter()
        .copied()
        .filter(|id| kw.contains(*id))
        .collect();
    let score = covered.len() as f64 / kw.len() as f64;
    Ok(PathScore {
        path: path.to_vec(),
        score,
        covered,
    })
}

/// Score every original sentence path in the graph's scope and take the
/// mean as the threshold.
pub fn compute_threshold(g: &WordGraph, kw: &KeywordSet) -> Result<Threshold> {
    if g.sentence_paths().is_empty() {
        return Err(Error::EmptyTranscript);
    }
    let mut per_sentence_scores = BTreeMap::new();
    for (sid, path) in g.sentence_paths() {
        let ps = score_path(path, kw)?;
        per_sentence_scores.insert(*sid, ps.score);
    }
    let t = per_sentence_scores.values().sum::<f64>() / per_sentence_scores.len() as f64;
    Ok(Threshold {
        t,
        per_sentence_scores,
    })
}
