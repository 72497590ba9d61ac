//! ROUGE-1/2/L F-measures, the LEAD-3 baseline, and corpus aggregation
//! with the normalized standard deviation (coefficient of variance).

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::transcript::{split_sentences, Transcript};

/// (precision, recall, f1), all in [0, 1].
pub type Prf = (f64, f64, f64);

/// ROUGE triple per metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RougeScore {
    pub r1: Prf,
    pub r2: Prf,
    pub rl: Prf,
}

/// Per-document scores plus corpus means and per-metric sigma over mean.
#[derive(Debug, Clone, Serialize)]
pub struct CorpusReport {
    pub per_doc: Vec<(String, RougeScore)>,
    pub mean: RougeScore,
    /// Normalized standard deviation of per-document F1, per metric.
    pub normalized_std: (f64, f64, f64),
}

fn f1(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

/// Lowercase and split on non-alphanumeric boundaries.
pub fn rouge_tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_string())
        .collect()
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts: HashMap<&[String], usize> = HashMap::new();
    if tokens.len() >= n {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

/// N-gram overlap precision/recall/F1 with multiset (clipped) counting.
pub fn rouge_n(system: &str, reference: &str, n: usize) -> Prf {
    let sys = rouge_tokenize(system);
    let refr = rouge_tokenize(reference);
    let sys_counts = ngram_counts(&sys, n);
    let ref_counts = ngram_counts(&refr, n);
    let sys_total: usize = sys_counts.values().sum();
    let ref_total: usize = ref_counts.values().sum();
    if sys_total == 0 || ref_total == 0 {
        return (0.0, 0.0, 0.0);
    }
    let overlap: usize = sys_counts
        .iter()
        .map(|(gram, count)| count.min(ref_counts.get(gram).unwrap_or(&0)))
        .sum();
    let p = overlap as f64 / sys_total as f64;
    let r = overlap as f64 / ref_total as f64;
    (p, r, f1(p, r))
}

fn lcs_len(a: &[String], b: &[String]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for ai in a {
        for (j, bj) in b.iter().enumerate() {
            cur[j + 1] = if ai == bj {
                prev[j] + 1
            } else {
                prev[j + 1].max(cur[j])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Longest-common-subsequence F1 over whole-summary token sequences.
pub fn rouge_l(system: &str, reference: &str) -> Prf {
    let sys = rouge_tokenize(system);
    let refr = rouge_tokenize(reference);
    if sys.is_empty() || refr.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let lcs = lcs_len(&sys, &refr) as f64;
    let p = lcs / sys.len() as f64;
    let r = lcs / refr.len() as f64;
    (p, r, f1(p, r))
}

/// Union-LCS variant: reference sentences each matched against the whole
/// system summary, recall-weighted by reference length.
pub fn rouge_l_union(system: &str, reference: &str) -> Prf {
    let sys = rouge_tokenize(system);
    let ref_sentences = split_sentences(reference);
    if sys.is_empty() || ref_sentences.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let mut hit_total = 0usize;
    let mut ref_total = 0usize;
    for sentence in &ref_sentences {
        let ref_tokens = rouge_tokenize(sentence);
        ref_total += ref_tokens.len();
        hit_total += lcs_len(&sys, &ref_tokens);
    }
    if ref_total == 0 {
        return (0.0, 0.0, 0.0);
    }
    let p = hit_total as f64 / sys.len() as f64;
    let r = hit_total as f64 / ref_total as f64;
    (p.min(1.0), r.min(1.0), f1(p.min(1.0), r.min(1.0)))
}

/// Score one system summary against one reference.
pub fn score_pair(system: &str, reference: &str) -> RougeScore {
    RougeScore {
        r1: rouge_n(system, reference, 1),
        r2: rouge_n(system, reference, 2),
        rl: rouge_l(system, reference),
    }
}

/// Multi-reference scoring: per metric, keep the triple of the reference
/// with the best F1.
pub fn score_multi(system: &str, references: &[String]) -> RougeScore {
    let mut best = RougeScore {
        r1: (0.0, 0.0, 0.0),
        r2: (0.0, 0.0, 0.0),
        rl: (0.0, 0.0, 0.0),
    };
    for reference in references {
        let s = score_pair(system, reference);
        if s.r1.2 > best.r1.2 {
            best.r1 = s.r1;
        }
        if s.r2.2 > best.r2.2 {
            best.r2 = s.r2;
        }
        if s.rl.2 > best.rl.2 {
            best.rl = s.rl;
        }
    }
    best
}

/// LEAD-3: the document's first three sentences (all of them when fewer).
pub fn lead3(tr: &Transcript) -> String {
    let mut sentences = Vec::new();
    'outer: for u in &tr.utterances {
        for s in split_sentences(&u.text) {
            sentences.push(s);
            if sentences.len() == 3 {
                break 'outer;
            }
        }
    }
    sentences.join(" ")
}

fn mean_triple(values: &[Prf]) -> Prf {
    let n = values.len() as f64;
    (
        values.iter().map(|v| v.0).sum::<f64>() / n,
        values.iter().map(|v| v.1).sum::<f64>() / n,
        values.iter().map(|v| v.2).sum::<f64>() / n,
    )
}

/// Population sigma over mean; 0 when the mean is 0.
fn normalized_std(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if mean == 0.0 {
        return 0.0;
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    var.sqrt() / mean
}

/// Evaluate a corpus of (doc_id, system, references) triples.
pub fn evaluate_corpus(
    pairs: &[(String, String, Vec<String>)],
) -> Result<CorpusReport> {
    if pairs.is_empty() {
        return Err(Error::InvalidConfig(
            "cannot evaluate an empty corpus".to_string(),
        ));
    }
    let per_doc: Vec<(String, RougeScore)> = pairs
        .iter()
        .map(|(id, sys, refs)| (id.clone(), score_multi(sys, refs)))
        .collect();
    let r1s: Vec<Prf> = per_doc.iter().map(|(_, s)| s.r1).collect();
    let r2s: Vec<Prf> = per_doc.iter().map(|(_, s)| s.r2).collect();
    let rls: Vec<Prf> = per_doc.iter().map(|(_, s)| s.rl).collect();
    let mean = RougeScore {
        r1: mean_triple(&r1s),
        r2: mean_triple(&r2s),
        rl: mean_triple(&rls),
    };
    let normalized_std = (
        normalized_std(&r1s.iter().map(|v| v.2).collect::<Vec<_>>()),
        normalized_std(&r2s.iter().map(|v| v.2).collect::<Vec<_>>()),
        normalized_std(&rls.iter().map(|v| v.2).collect::<Vec<_>>()),
    );
    Ok(CorpusReport {
        per_doc,
        mean,
        normalized_std,
    })
}
