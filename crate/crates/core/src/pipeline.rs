//! End-to-end document summarization: sentence splitting and tagging,
//! optional topic segmentation, per-segment graph construction, keyword
//! extraction, thresholded path search per speaker, and reported-speech
//! conversion.

use std::collections::BTreeSet;
use std::path::PathBuf;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extract::{best_original_sentence, extract_summaries, SearchConfig};
use crate::graph::{build_graph, EdgeWeightMode, WordGraph};
use crate::kcore::{core_decompose, extract_keywords};
use crate::pov::{convert_tokens, PovRuleSet};
use crate::scoring::compute_threshold;
use crate::segment::{segment, topic_vectors, Segmentation};
use crate::tagger::{
    wrap_pretagged, StopwordSet, Tag, TaggedSentence, Tagger,
};
use crate::transcript::{split_sentences, Transcript};

/// Everything the pipeline needs to run on one document.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub edge_weight_mode: EdgeWeightMode,
    pub topics_p: usize,
    pub segment_threshold_chars: usize,
    pub search: SearchConfig,
    pub pov_enabled: bool,
    pub pov_keep_possessives: bool,
    pub stopword_path: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            edge_weight_mode: EdgeWeightMode::Paper,
            topics_p: 8,
            segment_threshold_chars: 5000,
            search: SearchConfig::default(),
            pov_enabled: true,
            pov_keep_possessives: false,
            stopword_path: None,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.topics_p == 0 {
            return Err(Error::InvalidConfig(
                "topics_p must be at least 1".to_string(),
            ));
        }
        if self.search.k_paths == 0 || self.search.search_depth == 0 {
            return Err(Error::InvalidConfig(
                "k_paths and search_depth must be at least 1".to_string(),
            ));
        }
        Ok(())
    }

    fn stopwords(&self) -> Result<StopwordSet> {
        match &self.stopword_path {
            Some(path) => StopwordSet::from_file(path),
            None => Ok(StopwordSet::bundled()),
        }
    }
}

/// One emitted summary sentence with its provenance.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryLine {
    pub text: String,
    pub speaker: String,
    pub segment: usize,
    pub score: f64,
    /// True when the line is a verbatim original sentence emitted because
    /// no path cleared the threshold in its scope.
    pub fallback: bool,
}

/// The full result for one document: ordered summary lines plus the
/// diagnostics the search was driven by.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryBundle {
    pub doc_id: String,
    pub lines: Vec<SummaryLine>,
    pub keywords: Vec<String>,
    /// Mean acceptance threshold over all (segment, speaker) scopes.
    pub threshold: f64,
    pub segments: usize,
    /// Half-open sentence-index ranges, one per segment.
    pub segment_ranges: Vec<(usize, usize)>,
    /// Keyword words per segment, in segment order.
    pub segment_keywords: Vec<Vec<String>>,
}

impl SummaryBundle {
    /// Joined summary text in emission order.
    pub fn summary_text(&self) -> String {
        self.lines
            .iter()
            .map(|l| l.text.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// The output record for JSON Lines emission.
    pub fn to_record(&self) -> serde_json::Value {
        serde_json::json!({
            "id": self.doc_id,
            "summary": self.summary_text(),
            "sentences": self.lines.iter().map(|l| &l.text).collect::<Vec<_>>(),
            "keywords": self.keywords,
            "threshold": self.threshold,
            "segments": self.segments,
        })
    }
}

/// Split every utterance into tagged, meta-wrapped sentences with
/// document-global sentence ids. Pre-tagged utterances bypass the tagger.
pub fn prepare_sentences(
    tr: &Transcript,
    tagger: &Tagger,
) -> Result<Vec<TaggedSentence>> {
    let mut sentences = Vec::new();
    for u in &tr.utterances {
        if let Some(pairs) = &u.tokens {
            let sid = sentences.len();
            sentences.push(wrap_pretagged(pairs, sid, &u.speaker)?);
            continue;
        }
        for raw in split_sentences(&u.text) {
            let sid = sentences.len();
            match tagger.tag_sentence(&raw, sid, &u.speaker) {
                Ok(ts) => sentences.push(ts),
                // Sentences that tokenize to nothing are skipped rather
                // than failing the document.
                Err(Error::EmptySentence) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    if sentences.is_empty() {
        return Err(Error::NoUtterances);
    }
    Ok(sentences)
}

/// Segment the sentence list when the transcript is long enough;
/// otherwise a single segment covers everything.
fn plan_segments(
    tr: &Transcript,
    sentences: &[TaggedSentence],
    stopwords: &StopwordSet,
    cfg: &PipelineConfig,
) -> Result<Vec<(usize, usize)>> {
    let n = sentences.len();
    if tr.char_len() <= cfg.segment_threshold_chars || n < 2 {
        return Ok(vec![(0, n)]);
    }
    let global = build_graph(sentences, stopwords, cfg.edge_weight_mode)?;
    let decomp = core_decompose(&global);
    let kw = match extract_keywords(&global, &decomp) {
        Ok(kw) => kw,
        // A transcript with no candidate keywords can't be segmented by
        // topic; treat it as one segment.
        Err(Error::NoKeywords) => return Ok(vec![(0, n)]),
        Err(e) => return Err(e),
    };
    let vectors = topic_vectors(&global, &kw)?;
    let p = cfg.topics_p.min(n);
    let seg: Segmentation = segment(&vectors, p)?;
    Ok(seg.ranges(n))
}

fn pov_text(
    g: &WordGraph,
    nodes: &[usize],
    speaker: &str,
    rules: &PovRuleSet,
) -> String {
    let tokens: Vec<(String, Tag)> = nodes
        .iter()
        .filter_map(|id| g.node(*id))
        .filter(|n| !n.is_meta())
        .map(|n| (n.word.clone(), n.tag))
        .collect();
    convert_tokens(&tokens, speaker, rules)
}

fn plain_text(g: &WordGraph, nodes: &[usize]) -> String {
    g.realize(nodes)
}

/// Run the whole pipeline on one transcript.
pub fn summarize_document(
    tr: &Transcript,
    cfg: &PipelineConfig,
) -> Result<SummaryBundle> {
    summarize_inner(tr, cfg).map_err(|e| e.in_document(&tr.doc_id))
}

fn summarize_inner(tr: &Transcript, cfg: &PipelineConfig) -> Result<SummaryBundle> {
    cfg.validate()?;
    if tr.char_len() == 0 {
        return Err(Error::EmptyTranscript);
    }
    let stopwords = cfg.stopwords()?;
    let tagger = Tagger::new();
    let rules = PovRuleSet {
        keep_possessives: cfg.pov_keep_possessives,
        ..PovRuleSet::default()
    };
    let sentences = prepare_sentences(tr, &tagger)?;
    let ranges = plan_segments(tr, &sentences, &stopwords, cfg)?;

    let mut lines = Vec::new();
    let mut keyword_words: BTreeSet<String> = BTreeSet::new();
    let mut scope_thresholds = Vec::new();
    let mut segment_keywords: Vec<Vec<String>> = Vec::new();

    for (seg_idx, (lo, hi)) in ranges.iter().enumerate() {
        let slice = &sentences[*lo..*hi];
        if slice.is_empty() {
            continue;
        }
        let seg_graph = build_graph(slice, &stopwords, cfg.edge_weight_mode)?;
        let decomp = core_decompose(&seg_graph);
        let seg_kw = match extract_keywords(&seg_graph, &decomp) {
            Ok(kw) => kw,
            // All-stopword segment: emit each speaker's first sentence
            // verbatim so the segment is still represented.
            Err(Error::NoKeywords) => {
                segment_keywords.push(Vec::new());
                for speaker in seg_graph.speakers_in_order() {
                    if let Some((sid, _)) = seg_graph
                        .sentence_paths()
                        .iter()
                        .find(|(sid, _)| {
                            seg_graph.sentence_speaker(**sid) == Some(speaker.as_str())
                        })
                        .map(|(sid, p)| (*sid, p.clone()))
                    {
                        let nodes = seg_graph.sentence_paths()[&sid].clone();
                        let text = if cfg.pov_enabled {
                            pov_text(&seg_graph, &nodes, &speaker, &rules)
                        } else {
                            plain_text(&seg_graph, &nodes)
                        };
                        lines.push(SummaryLine {
                            text,
                            speaker,
                            segment: seg_idx,
                            score: 0.0,
                            fallback: true,
                        });
                    }
                }
                continue;
            }
            Err(e) => return Err(e),
        };
        keyword_words.extend(seg_kw.words());
        segment_keywords.push(seg_kw.words());

        for speaker in seg_graph.speakers_in_order() {
            let sub = seg_graph.speaker_subgraph(&speaker)?;
            let scope_kw = seg_kw.restrict_to(&sub);
            let mut emitted = false;
            if !scope_kw.is_empty() {
                let t = compute_threshold(&sub, &scope_kw)?;
                scope_thresholds.push(t.t);
                match extract_summaries(
                    &sub,
                    &scope_kw,
                    &t,
                    &cfg.search,
                    &speaker,
                    seg_idx,
                ) {
                    Ok(extraction) => {
                        for path in extraction.paths {
                            let text = if cfg.pov_enabled {
                                pov_text(&sub, &path.nodes, &speaker, &rules)
                            } else {
                                plain_text(&sub, &path.nodes)
                            };
                            lines.push(SummaryLine {
                                text,
                                speaker: speaker.clone(),
                                segment: seg_idx,
                                score: path.score.score,
                                fallback: false,
                            });
                            emitted = true;
                        }
                    }
                    Err(Error::Disconnected) => {}
                    Err(e) => return Err(e),
                }
            }
            if !emitted {
                // Nothing cleared the threshold in this scope: fall back
                // to the best-scoring original sentence.
                let fallback_kw =
                    if scope_kw.is_empty() { &seg_kw } else { &scope_kw };
                if let Some((_, nodes)) =
                    best_original_sentence(&sub, fallback_kw)
                {
                    let score =
                        crate::scoring::score_path(&nodes, fallback_kw)?.score;
                    let text = if cfg.pov_enabled {
                        pov_text(&sub, &nodes, &speaker, &rules)
                    } else {
                        plain_text(&sub, &nodes)
                    };
                    lines.push(SummaryLine {
                        text,
                        speaker: speaker.clone(),
                        segment: seg_idx,
                        score,
                        fallback: true,
                    });
                }
            }
        }
    }

    let threshold = if scope_thresholds.is_empty() {
        0.0
    } else {
        scope_thresholds.iter().sum::<f64>() / scope_thresholds.len() as f64
    };
    Ok(SummaryBundle {
        doc_id: tr.doc_id.clone(),
        lines,
        keywords: keyword_words.into_iter().collect(),
        threshold,
        segments: ranges.len(),
        segment_ranges: ranges,
        segment_keywords,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transcript::parse_colon_dialogue;

    fn run(dialogue: &str) -> SummaryBundle {
        let tr = parse_colon_dialogue(dialogue, "t").unwrap();
        summarize_document(&tr, &PipelineConfig::default()).unwrap()
    }

    #[test]
    fn single_utterance_yields_one_line() {
        let bundle = run("Maya: I will bring the cake to the party tonight.");
        assert_eq!(bundle.lines.len(), 1);
        assert_eq!(bundle.segments, 1);
        assert!(!bundle.lines[0].text.is_empty());
    }

    #[test]
    fn two_speakers_each_get_a_line() {
        let bundle = run(concat!(
            "Maya: I finished the report about the budget today.\n",
            "Boris: I will send the report to the budget committee.\n",
            "Maya: The budget report needs the final numbers.\n",
            "Boris: The committee wants the report tomorrow.",
        ));
        let speakers: BTreeSet<&str> =
            bundle.lines.iter().map(|l| l.speaker.as_str()).collect();
        assert!(speakers.contains("Maya"));
        assert!(speakers.contains("Boris"));
    }

    #[test]
    fn pov_substitutes_speaker_for_first_person() {
        let bundle = run("Anne: I will call the office about my missing card.");
        assert!(
            bundle.lines[0].text.starts_with("anne"),
            "got: {}",
            bundle.lines[0].text
        );
    }

    #[test]
    fn no_pov_keeps_pronouns() {
        let tr = parse_colon_dialogue(
            "Anne: I will call the office about the missing card.",
            "t",
        )
        .unwrap();
        let cfg = PipelineConfig {
            pov_enabled: false,
            ..PipelineConfig::default()
        };
        let bundle = summarize_document(&tr, &cfg).unwrap();
        assert!(bundle.lines[0].text.contains('i'), "{}", bundle.lines[0].text);
        assert!(!bundle.lines[0].text.contains("anne"));
    }

    #[test]
    fn long_transcript_gets_multiple_segments() {
        let mut dialogue = String::new();
        let topics = [
            "the budget report numbers",
            "the holiday travel plans",
            "the broken kitchen sink",
            "the football match score",
        ];
        for (i, topic) in topics.iter().enumerate() {
            for j in 0..30 {
                dialogue.push_str(&format!(
                    "Speaker{}: We discussed {} again in meeting {} yesterday.\n",
                    i % 2,
                    topic,
                    j
                ));
            }
        }
        let tr = parse_colon_dialogue(&dialogue, "t").unwrap();
        assert!(tr.char_len() > 5000);
        let cfg = PipelineConfig {
            topics_p: 4,
            ..PipelineConfig::default()
        };
        let bundle = summarize_document(&tr, &cfg).unwrap();
        assert!(bundle.segments >= 2, "segments = {}", bundle.segments);
    }

    #[test]
    fn threshold_is_mean_of_scopes() {
        let bundle = run(concat!(
            "A: The cat sat on the mat near the door.\n",
            "B: The dog sat on the mat near the gate.",
        ));
        assert!(bundle.threshold >= 0.0 && bundle.threshold <= 1.0);
    }

    #[test]
    fn empty_transcript_is_error() {
        let tr = Transcript {
            doc_id: "e".to_string(),
            utterances: vec![],
        };
        assert!(summarize_document(&tr, &PipelineConfig::default()).is_err());
    }

    #[test]
    fn record_has_expected_fields() {
        let bundle = run("Maya: I will bring the cake to the party tonight.");
        let rec = bundle.to_record();
        for key in ["id", "summary", "sentences", "keywords", "threshold", "segments"] {
            assert!(rec.get(key).is_some(), "missing {key}");
        }
    }

    #[test]
    fn determinism_end_to_end() {
        let dialogue = concat!(
            "Maya: Were you at the restaurant yesterday?\n",
            "Boris: I was there with Brian and we ordered the fish.\n",
            "Maya: I heard the fish at that restaurant is great.\n",
            "Boris: The restaurant will reopen the terrace next week.",
        );
        let a = run(dialogue).to_record().to_string();
        let b = run(dialogue).to_record().to_string();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_config_rejected() {
        let tr = parse_colon_dialogue("A: hello there friend.", "t").unwrap();
        let cfg = PipelineConfig {
            topics_p: 0,
            ..PipelineConfig::default()
        };
        assert!(summarize_document(&tr, &cfg).is_err());
    }
}
