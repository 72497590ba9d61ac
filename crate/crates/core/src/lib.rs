//! Unsupervised abstractive dialogue summarization.
//!
//! The pipeline compresses a multi-party transcript into third-person
//! summary sentences: utterances are tokenized and coarsely POS-tagged,
//! merged into a word graph, keywords are extracted from the graph's
//! main k-core, and k-shortest bos→eos paths are accepted when their
//! keyword coverage clears a per-scope threshold. Long transcripts are
//! first split into topic segments; accepted paths are finally rewritten
//! as reported speech. A ROUGE-1/2/L evaluator and a LEAD-3 baseline are
//! included for benchmarking.

pub mod corpus;
pub mod error;
pub mod extract;
pub mod graph;
pub mod kcore;
pub mod pipeline;
pub mod pov;
pub mod rouge;
pub mod scoring;
pub mod segment;
pub mod tagger;
pub mod transcript;
pub mod yen;

pub use error::{Error, Result};
pub use extract::{extract_summaries, SearchConfig, SummaryPath};
pub use graph::{build_graph, EdgeWeightMode, WordGraph};
pub use kcore::{core_decompose, extract_keywords, KeywordSet};
pub use pipeline::{summarize_document, PipelineConfig, SummaryBundle};
pub use pov::{convert_text, convert_tokens, PovRuleSet};
pub use rouge::{lead3, rouge_l, rouge_n, score_pair, RougeScore};
pub use scoring::{compute_threshold, score_path, Threshold};
pub use segment::{segment, topic_distance, topic_vectors, Segmentation};
pub use tagger::{StopwordSet, Tag, TaggedSentence, Tagger};
pub use transcript::{parse_colon_dialogue, parse_jsonl, Transcript};
pub use yen::yen_k_shortest;
