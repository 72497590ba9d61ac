//! Corpus-level I/O: document collections in JSON Lines form (optionally
//! gzip-compressed), reference summaries, and dataset statistics.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use flate2::read::GzDecoder;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::transcript::{parse_colon_dialogue, Transcript, Utterance};

/// One raw corpus record. Either `dialogue` (colon-separated speaker
/// lines) or `utterances` (structured objects) carries the content;
/// `summary` is an optional gold reference.
#[derive(Debug, Deserialize)]
struct RawRecord {
    id: Value,
    #[serde(default)]
    dialogue: Option<String>,
    #[serde(default)]
    utterances: Option<Vec<RawUtterance>>,
    #[serde(default)]
    summary: Option<String>,
}

#[derive(Debug, Deserialize)]
struct RawUtterance {
    speaker: String,
    text: String,
}

/// A parsed document plus its reference summary, when present.
#[derive(Debug, Clone)]
pub struct CorpusDocument {
    pub transcript: Transcript,
    pub reference: Option<String>,
}

fn id_to_string(id: &Value) -> String {
    match id {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Open a path as a line reader, transparently decompressing `.gz`.
pub fn open_lines(path: &Path) -> Result<Box<dyn BufRead>> {
    let file = File::open(path)?;
    if path.extension().is_some_and(|e| e == "gz") {
        Ok(Box::new(BufReader::new(GzDecoder::new(file))))
    } else {
        Ok(Box::new(BufReader::new(file)))
    }
}

/// Parse a corpus from any reader of JSON Lines.
pub fn read_corpus<R: Read>(reader: R) -> Result<Vec<CorpusDocument>> {
    let buf = BufReader::new(reader);
    let mut docs = Vec::new();
    for (i, line) in buf.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawRecord =
            serde_json::from_str(&line).map_err(|e| Error::MalformedJson {
                line: lineno,
                msg: e.to_string(),
            })?;
        let doc_id = id_to_string(&raw.id);
        let transcript = match (&raw.dialogue, &raw.utterances) {
            (Some(text), _) => parse_colon_dialogue(text, &doc_id)
                .map_err(|e| e.in_document(&doc_id))?,
            (None, Some(utts)) => {
                let utterances: Vec<Utterance> = utts
                    .iter()
                    .enumerate()
                    .map(|(idx, u)| Utterance {
                        speaker: u.speaker.clone(),
                        text: u.text.clone(),
                        index: idx,
                        tokens: None,
                    })
                    .collect();
                if utterances.is_empty() {
                    return Err(Error::NoUtterances.in_document(&doc_id));
                }
                Transcript {
                    doc_id: doc_id.clone(),
                    utterances,
                }
            }
            (None, None) => {
                return Err(Error::MissingField {
                    line: lineno,
                    field: "dialogue",
                })
            }
        };
        docs.push(CorpusDocument {
            transcript,
            reference: raw.summary,
        });
    }
    Ok(docs)
}

/// Parse the corpus file at `path` (plain or gzipped JSON Lines).
pub fn read_corpus_file(path: &Path) -> Result<Vec<CorpusDocument>> {
    read_corpus(open_lines(path)?)
}

/// Read reference summaries keyed by document id, from records of the
/// form `{"id": ..., "summary": ...}`.
pub fn read_references(path: &Path) -> Result<BTreeMap<String, Vec<String>>> {
    #[derive(Deserialize)]
    struct RefRecord {
        id: Value,
        summary: String,
    }
    let mut refs: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (i, line) in open_lines(path)?.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: RefRecord =
            serde_json::from_str(&line).map_err(|e| Error::MalformedJson {
                line: i + 1,
                msg: e.to_string(),
            })?;
        refs.entry(id_to_string(&rec.id)).or_default().push(rec.summary);
    }
    Ok(refs)
}

/// Aggregate size statistics over a corpus.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DatasetStats {
    pub documents: usize,
    pub mean_chars: f64,
    pub mean_words: f64,
    pub total_utterances: usize,
}

/// Compute document count and mean lengths, rounded to two decimals.
pub fn dataset_stats(docs: &[CorpusDocument]) -> Result<DatasetStats> {
    if docs.is_empty() {
        return Err(Error::EmptyTranscript);
    }
    let n = docs.len() as f64;
    let chars: usize = docs.iter().map(|d| d.transcript.char_len()).sum();
    let words: usize = docs.iter().map(|d| d.transcript.word_len()).sum();
    let utts: usize = docs.iter().map(|d| d.transcript.utterances.len()).sum();
    let round2 = |v: f64| (v * 100.0).round() / 100.0;
    Ok(DatasetStats {
        documents: docs.len(),
        mean_chars: round2(chars as f64 / n),
        mean_words: round2(words as f64 / n),
        total_utterances: utts,
    })
}
