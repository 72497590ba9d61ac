//! Topic segmentation: binary keyword-coverage vectors per sentence and
//! negative-cosine topic distance across consecutive sentences.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::WordGraph;
use crate::kcore::KeywordSet;

/// Binary keyword-presence vector for one sentence. Column order is the
/// canonical keyword ordering (ascending node id).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TopicVector {
    pub bits: Vec<bool>,
    pub sentence_id: usize,
}

impl TopicVector {
    pub fn popcount(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }
}

/// Chosen topic boundaries. A boundary at position `i` splits between the
/// i-th and (i+1)-th sentence of the scope.
#[derive(Debug, Clone, Serialize)]
pub struct Segmentation {
    pub boundaries: Vec<usize>,
    pub p: usize,
}

impl Segmentation {
    /// Contiguous index ranges covering `n` sentences in order.
    pub fn ranges(&self, n: usize) -> Vec<(usize, usize)> {
        let mut ranges = Vec::with_capacity(self.boundaries.len() + 1);
        let mut start = 0;
        for &b in &self.boundaries {
            ranges.push((start, b + 1));
            start = b + 1;
        }
        ranges.push((start, n));
        ranges
    }
}

/// One topic vector per sentence, in document order.
pub fn topic_vectors(g: &WordGraph, kw: &KeywordSet) -> Result<Vec<TopicVector>> {
    if kw.is_empty() {
        return Err(Error::EmptyKeywords);
    }
    let columns: Vec<_> = kw.members.iter().copied().collect();
    let vectors = g
        .sentence_paths()
        .iter()
        .map(|(sid, path)| {
            let bits = columns
                .iter()
                .map(|kw_id| path.contains(kw_id))
                .collect();
            TopicVector {
                bits,
                sentence_id: *sid,
            }
        })
        .collect();
    Ok(vectors)
}

/// Negative cosine similarity of two binary vectors, in [-1, 0]. A
/// zero vector has no shared topics with anything, so its distance is 0
/// (maximal).
pub fn topic_distance(c1: &TopicVector, c2: &TopicVector) -> Result<f64> {
    if c1.bits.len() != c2.bits.len() {
        return Err(Error::VectorLengthMismatch(c1.bits.len(), c2.bits.len()));
    }
    let dot = c1
        .bits
        .iter()
        .zip(&c2.bits)
        .filter(|(a, b)| **a && **b)
        .count() as f64;
    let n1 = (c1.popcount() as f64).sqrt();
    let n2 = (c2.popcount() as f64).sqrt();
    if n1 == 0.0 || n2 == 0.0 {
        return Ok(0.0);
    }
    Ok(-(dot / (n1 * n2)))
}

/// Topic distance at every consecutive sentence gap.
pub fn gap_distances(vectors: &[TopicVector]) -> Result<Vec<f64>> {
    vectors
        .windows(2)
        .map(|w| topic_distance(&w[0], &w[1]))
        .collect()
}

/// Split into `p` topics at the `p - 1` gaps with the greatest topic
/// distance, ties broken toward earlier boundaries.
pub fn segment(vectors: &[TopicVector], p: usize) -> Result<Segmentation> {
    if p == 0 {
        return Err(Error::ZeroTopics);
    }
    if p > vectors.len() {
        return Err(Error::TooManyTopics {
            requested: p,
            available: vectors.len(),
        });
    }
    let distances = gap_distances(vectors)?;
    let mut gaps: Vec<usize> = (0..distances.len()).collect();
    gaps.sort_by(|&a, &b| {
        distances[b]
            .total_cmp(&distances[a])
            .then(a.cmp(&b))
    });
    let mut boundaries: Vec<usize> = gaps.into_iter().take(p - 1).collect();
    boundaries.sort_unstable();
    Ok(Segmentation { boundaries, p })
}

/// Alternative rule: boundaries wherever the topic distance exceeds a
/// fixed threshold.
pub fn segment_thresholded(vectors: &[TopicVector], threshold: f64) -> Result<Segmentation> {
    let distances = gap_distances(vectors)?;
    let boundaries: Vec<usize> = distances
        .iter()
        .enumerate()
        .filter(|(_, d)| **d > threshold)
        .map(|(i, _)| i)
        .collect();
    let p = boundaries.len() + 1;
    Ok(Segmentation { boundaries, p })
}
