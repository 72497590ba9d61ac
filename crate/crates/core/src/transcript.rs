//! Transcript ingestion: JSONL and "Name: utterance" dialogue parsing,
//! plus sentence splitting.

use std::io::{BufRead, BufReader, Read};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One speaker turn of a dialogue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Utterance {
    pub speaker: String,
    pub text: String,
    /// Position within the dialogue, contiguous from 0.
    pub index: usize,
    /// Pre-tagged tokens, when the input supplies `[surface, tag]` pairs
    /// instead of raw text.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tokens: Option<Vec<(String, String)>>,
}

/// An ordered, speaker-attributed dialogue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub doc_id: String,
    pub utterances: Vec<Utterance>,
}

impl Transcript {
    /// Total character length of the dialogue text (utterances joined by
    /// newlines). Used for the topic-segmentation activation rule and
    /// dataset statistics.
    pub fn char_len(&self) -> usize {
        let text_len: usize = self
            .utterances
            .iter()
            .map(|u| u.text.chars().count())
            .sum();
        text_len + self.utterances.len().saturating_sub(1)
    }

    /// Whitespace-delimited word count over all utterances.
    pub fn word_len(&self) -> usize {
        self.utterances
            .iter()
            .map(|u| u.text.split_whitespace().count())
            .sum()
    }
}

#[derive(Deserialize)]
struct JsonlRecord {
    speaker: Option<String>,
    text: Option<String>,
    #[allow(dead_code)]
    id: Option<String>,
    tokens: Option<Vec<(String, String)>>,
}

/// Parse a JSONL stream with one utterance object per line.
///
/// Each line must carry `"speaker"` and either `"text"` or a pre-tagged
/// `"tokens"` array. Line numbers in errors are 1-based.
pub fn parse_jsonl<R: Read>(reader: R, doc_id: &str) -> Result<Transcript> {
    let reader = BufReader::new(reader);
    let mut utterances = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: JsonlRecord =
            serde_json::from_str(&line).map_err(|e| Error::MalformedJson {
                line: i + 1,
                msg: e.to_string(),
            })?;
        let speaker = record.speaker.filter(|s| !s.is_empty()).ok_or(
            Error::MissingField {
                line: i + 1,
                field: "speaker",
            },
        )?;
        let (text, tokens) = match (record.text, record.tokens) {
            (Some(t), tokens) => (t, tokens),
            (None, Some(tokens)) => {
                let text = tokens
                    .iter()
                    .map(|(surface, _)| surface.as_str())
                    .collect::<Vec<_>>()
                    .join(" ");
                (text, Some(tokens))
            }
            (None, None) => {
                return Err(Error::MissingField {
                    line: i + 1,
                    field: "text",
                })
            }
        };
        utterances.push(Utterance {
            speaker,
            text,
            index: utterances.len(),
            tokens,
        });
    }
    if utterances.is_empty() {
        return Err(Error::EmptyTranscript);
    }
    Ok(Transcript {
        doc_id: doc_id.to_string(),
        utterances,
    })
}

/// Parse plain-text dialogue of the form `Name: utterance`, one turn per
/// line. A line whose first colon comes after its first whitespace (or that
/// has no colon at all) is a continuation of the previous utterance.
pub fn parse_colon_dialogue(text: &str, doc_id: &str) -> Result<Transcript> {
    let mut utterances: Vec<Utterance> = Vec::new();
    for line in text.lines() {
        let line = line.trim_end();
        if line.trim().is_empty() {
            continue;
        }
        match split_speaker(line) {
            Some((speaker, rest)) => {
                utterances.push(Utterance {
                    speaker: speaker.to_string(),
                    text: rest.trim().to_string(),
                    index: utterances.len(),
                    tokens: None,
                });
            }
            None => {
                if let Some(prev) = utterances.last_mut() {
                    if !prev.text.is_empty() {
                        prev.text.push(' ');
                    }
                    prev.text.push_str(line.trim());
                }
                // Leading continuation lines with no speaker yet are dropped.
            }
        }
    }
    if utterances.is_empty() {
        return Err(Error::NoUtterances);
    }
    Ok(Transcript {
        doc_id: doc_id.to_string(),
        utterances,
    })
}

/// Split `Name: rest` when the colon appears before the first whitespace.
fn split_speaker(line: &str) -> Option<(&str, &str)> {
    let colon = line.find(':')?;
    if colon == 0 {
        return None;
    }
    if let Some(ws) = line.find(char::is_whitespace) {
        if ws < colon {
            return None;
        }
    }
    Some((&line[..colon], &line[colon + 1..]))
}

/// Abbreviations that do not terminate a sentence.
const ABBREVIATIONS: &[&str] = &[
    "mr.", "mrs.", "ms.", "dr.", "prof.", "st.", "etc.", "e.g.", "i.e.",
    "vs.", "jr.", "sr.", "no.", "dept.",
];

/// Split an utterance into sentences on terminal punctuation (`.` `!` `?`)
/// followed by whitespace or end of text. An utterance without terminal
/// punctuation is returned whole; empty input yields no sentences.
pub fn split_sentences(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut sentences = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < chars.len() {
        if matches!(chars[i], '.' | '!' | '?') {
            // Swallow a run of terminal punctuation.
            let mut end = i;
            while end + 1 < chars.len() && matches!(chars[end + 1], '.' | '!' | '?') {
                end += 1;
            }
            let at_end = end + 1 == chars.len();
            let before_space = !at_end && chars[end + 1].is_whitespace();
            let abbreviated = chars[i] == '.' && i == end && is_abbreviation(&chars, i);
            if (at_end || before_space) && !abbreviated {
                let sentence: String = chars[start..=end].iter().collect();
                let sentence = sentence.trim().to_string();
                if !sentence.is_empty() {
                    sentences.push(sentence);
                }
                start = end + 1;
            }
            i = end + 1;
        } else {
            i += 1;
        }
    }
    if start < chars.len() {
        let tail: String = chars[start..].iter().collect();
        let tail = tail.trim().to_string();
        if !tail.is_empty() {
            sentences.push(tail);
        }
    }
    sentences
}

/// True when the period at `dot` closes a known abbreviation.
fn is_abbreviation(chars: &[char], dot: usize) -> bool {
    let mut start = dot;
    while start > 0 && (chars[start - 1].is_alphabetic() || chars[start - 1] == '.') {
        start -= 1;
    }
    let word: String = chars[start..=dot].iter().collect::<String>().to_lowercase();
    ABBREVIATIONS.contains(&word.as_str())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_single_record() {
        let tr = parse_jsonl(r#"{"speaker":"A","text":"hi"}"#.as_bytes(), "d").unwrap();
        assert_eq!(tr.utterances.len(), 1);
        assert_eq!(tr.utterances[0].speaker, "A");
        assert_eq!(tr.utterances[0].text, "hi");
        assert_eq!(tr.utterances[0].index, 0);
    }

    #[test]
    fn jsonl_empty_file_is_error() {
        let err = parse_jsonl("".as_bytes(), "d").unwrap_err();
        assert!(matches!(err, Error::EmptyTranscript));
        assert_eq!(err.to_string(), "empty transcript");
    }

    #[test]
    fn jsonl_malformed_line_names_line_number() {
        let input = "{\"speaker\":\"A\",\"text\":\"hi\"}\nnot json\n";
        let err = parse_jsonl(input.as_bytes(), "d").unwrap_err();
        match err {
            Error::MalformedJson { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn jsonl_missing_field_is_named() {
        let err = parse_jsonl(r#"{"speaker":"A"}"#.as_bytes(), "d").unwrap_err();
        assert!(err.to_string().contains("text"));
        let err = parse_jsonl(r#"{"text":"hi"}"#.as_bytes(), "d").unwrap_err();
        assert!(err.to_string().contains("speaker"));
    }

    #[test]
    fn jsonl_pretagged_tokens() {
        let input = r#"{"speaker":"A","tokens":[["hello","X"],["there","ADV"]]}"#;
        let tr = parse_jsonl(input.as_bytes(), "d").unwrap();
        assert_eq!(tr.utterances[0].text, "hello there");
        assert!(tr.utterances[0].tokens.is_some());
    }

    #[test]
    fn colon_dialogue_two_speakers() {
        let text = "Megan: Are we going to take a taxi to the opera?\nJoseph: No, I'll take my car.";
        let tr = parse_colon_dialogue(text, "d").unwrap();
        assert_eq!(tr.utterances.len(), 2);
        assert_eq!(tr.utterances[0].speaker, "Megan");
        assert_eq!(tr.utterances[1].speaker, "Joseph");
    }

    #[test]
    fn colon_dialogue_order_preserved() {
        let tr = parse_colon_dialogue("A: x\nB: y\nA: z", "d").unwrap();
        let speakers: Vec<&str> = tr.utterances.iter().map(|u| u.speaker.as_str()).collect();
        assert_eq!(speakers, ["A", "B", "A"]);
        assert_eq!(tr.utterances[2].text, "z");
    }

    #[test]
    fn colon_dialogue_continuation_line() {
        let tr = parse_colon_dialogue("A: hi\nsee you at 5:30", "d").unwrap();
        assert_eq!(tr.utterances.len(), 1);
        assert_eq!(tr.utterances[0].text, "hi see you at 5:30");
    }

    #[test]
    fn colon_dialogue_no_utterances() {
        let err = parse_colon_dialogue("just some prose without turns", "d").unwrap_err();
        assert_eq!(err.to_string(), "no utterances found");
    }

    #[test]
    fn split_question_stays_whole() {
        assert_eq!(
            split_sentences("Oh no, what happened?"),
            vec!["Oh no, what happened?"]
        );
    }

    #[test]
    fn split_two_sentences() {
        assert_eq!(
            split_sentences("he lied to me. he's 40"),
            vec!["he lied to me.", "he's 40"]
        );
    }

    #[test]
    fn split_empty() {
        assert!(split_sentences("").is_empty());
    }

    #[test]
    fn split_keeps_abbreviations() {
        assert_eq!(
            split_sentences("Dr. Smith is here. Call him."),
            vec!["Dr. Smith is here.", "Call him."]
        );
    }

    #[test]
    fn split_handles_punctuation_runs() {
        assert_eq!(split_sentences("really?! ok"), vec!["really?!", "ok"]);
    }

    #[test]
    fn round_trip_through_serde() {
        let tr = parse_colon_dialogue("A: x\nB: y?", "d").unwrap();
        let json = serde_json::to_string(&tr).unwrap();
        let back: Transcript = serde_json::from_str(&json).unwrap();
        assert_eq!(tr, back);
    }
}
