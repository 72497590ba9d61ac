//! Coarse part-of-speech tagging: tokenizer, closed/open-class lexicon
//! lookup, suffix rules, and bos/eos wrapping.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coarse 13-tag set. The pipeline only needs node disambiguation by tag
/// and verb detection, so a Penn-style fine-grained inventory is not used.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "UPPERCASE")]
pub enum Tag {
    Noun,
    Verb,
    Adj,
    Adv,
    Pron,
    Det,
    Adp,
    Num,
    Part,
    Conj,
    Punct,
    Meta,
    X,
}

impl Tag {
    /// Map an external tag string onto the coarse set; anything
    /// unrecognized becomes `X`.
    pub fn from_label(label: &str) -> Tag {
        match label.to_ascii_uppercase().as_str() {
            "NOUN" => Tag::Noun,
            "VERB" => Tag::Verb,
            "ADJ" => Tag::Adj,
            "ADV" => Tag::Adv,
            "PRON" => Tag::Pron,
            "DET" => Tag::Det,
            "ADP" => Tag::Adp,
            "NUM" => Tag::Num,
            "PART" => Tag::Part,
            "CONJ" => Tag::Conj,
            "PUNCT" => Tag::Punct,
            "META" => Tag::Meta,
            _ => Tag::X,
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tag::Noun => "NOUN",
            Tag::Verb => "VERB",
            Tag::Adj => "ADJ",
            Tag::Adv => "ADV",
            Tag::Pron => "PRON",
            Tag::Det => "DET",
            Tag::Adp => "ADP",
            Tag::Num => "NUM",
            Tag::Part => "PART",
            Tag::Conj => "CONJ",
            Tag::Punct => "PUNCT",
            Tag::Meta => "META",
            Tag::X => "X",
        };
        f.write_str(s)
    }
}

/// A surface token with its lowercase form, tag, and sentence position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    pub surface: String,
    pub lower: String,
    pub tag: Tag,
    pub position: usize,
}

impl TaggedToken {
    pub fn is_meta(&self) -> bool {
        self.tag == Tag::Meta
    }
}

/// A tagged sentence with its document-level id and speaker.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedSentence {
    pub tokens: Vec<TaggedToken>,
    pub sentence_id: usize,
    pub speaker: String,
}

impl TaggedSentence {
    /// True once bos/eos meta tokens are in place.
    pub fn is_wrapped(&self) -> bool {
        self.tokens.first().is_some_and(|t| t.is_meta())
            && self.tokens.last().is_some_and(|t| t.is_meta())
    }
}

const CLITICS: &[&str] = &["'ll", "'re", "'ve", "'m", "'s", "'d", "n't"];

/// Split a sentence into surface tokens: whitespace first, then peel
/// leading/trailing punctuation into separate tokens, then split English
/// contractions into clitic pairs ("I'll" -> "I", "'ll"). A chunk made
/// entirely of punctuation (":/", ":)", "-") is kept whole, so emoticons
/// survive as single tokens.
pub fn tokenize(sentence: &str) -> Vec<String> {
    let mut out = Vec::new();
    for chunk in sentence.split_whitespace() {
        push_chunk(chunk, &mut out);
    }
    out
}

fn is_punct_char(c: char) -> bool {
    !c.is_alphanumeric() && c != '\''
}

fn push_chunk(chunk: &str, out: &mut Vec<String>) {
    if chunk.chars().all(|c| !c.is_alphanumeric()) {
        // Pure punctuation (possibly an emoticon): keep whole.
        out.push(chunk.to_string());
        return;
    }
    let lower = chunk.to_lowercase();
    if CLITICS.contains(&lower.as_str()) {
        out.push(chunk.to_string());
        return;
    }
    let chars: Vec<char> = chunk.chars().collect();
    let mut start = 0;
    let mut end = chars.len();
    let mut leading = Vec::new();
    let mut trailing = Vec::new();
    while start < end && (is_punct_char(chars[start]) || chars[start] == '\'') {
        leading.push(chars[start].to_string());
        start += 1;
    }
    while end > start && (is_punct_char(chars[end - 1]) || chars[end - 1] == '\'') {
        trailing.push(chars[end - 1].to_string());
        end -= 1;
    }
    out.extend(leading);
    if start < end {
        let core: String = chars[start..end].iter().collect();
        push_core(&core, out);
    }
    out.extend(trailing.into_iter().rev());
}

/// Split a clitic off the end of a word, if present.
fn push_core(core: &str, out: &mut Vec<String>) {
    let lower = core.to_lowercase();
    for clitic in CLITICS {
        // Byte offsets into `core` are only valid when lowercasing did
        // not change its length (always true for ASCII).
        if core.len() == lower.len()
            && lower.len() > clitic.len()
            && lower.ends_with(clitic)
            && core.is_char_boundary(core.len() - clitic.len())
        {
            let cut = core.len() - clitic.len();
            push_core(&core[..cut], out);
            out.push(core[cut..].to_string());
            return;
        }
    }
    out.push(core.to_string());
}

/// Lexicon + suffix-rule tagger. Immutable after construction.
pub struct Tagger {
    closed: HashMap<&'static str, Tag>,
    open: HashMap<String, Tag>,
}

const PRONOUNS: &[&str] = &[
    "i", "me", "my", "mine", "myself", "we", "us", "our", "ours", "ourselves",
    "you", "your", "yours", "yourself", "yourselves", "he", "him", "his",
    "himself", "she", "her", "hers", "herself", "it", "its", "itself", "they",
    "them", "their", "theirs", "themselves", "who", "whom", "whose", "what",
    "which", "someone", "something", "anyone", "anything", "everyone",
    "everything", "nobody", "nothing", "somebody", "anybody", "everybody",
];

const DETERMINERS: &[&str] = &[
    "the", "a", "an", "this", "that", "these", "those", "some", "any", "no",
    "every", "each", "all", "both", "either", "neither", "another", "such",
    "more", "most", "few", "several", "many", "much",
];

const PREPOSITIONS: &[&str] = &[
    "of", "in", "on", "at", "by", "for", "with", "about", "against",
    "between", "among", "into", "through", "during", "before", "after",
    "above", "below", "from", "up", "down", "out", "off", "over", "under",
    "across", "beyond", "without", "within", "along", "onto", "upon",
    "toward", "towards", "past", "since", "until", "till", "per", "via",
    "beneath", "beside", "despite", "except", "like", "unlike", "amid", "as",
];

const CONJUNCTIONS: &[&str] = &[
    "and", "but", "or", "nor", "so", "yet", "if", "because", "although",
    "though", "while", "when", "where", "whether", "than", "unless",
];

const PARTICLES: &[&str] = &["to", "not", "n't"];

const AUX_VERBS: &[&str] = &[
    "am", "is", "are", "was", "were", "be", "been", "being", "do", "does",
    "did", "done", "have", "has", "had", "having", "can", "could", "may",
    "might", "must", "shall", "should", "will", "would", "ought", "'ll",
    "'m", "'re", "'ve", "'d", "'s",
];

const INTERJECTIONS: &[&str] = &[
    "yeah", "yes", "yep", "nope", "oh", "ah", "hey", "hi", "hello", "wow",
    "hmm", "huh", "okay", "ok", "please", "bye", "goodbye", "um", "uh",
    "haha", "lol", "thanks",
];

impl Tagger {
    /// Tagger backed by the bundled lexicon.
    pub fn new() -> Tagger {
        let mut closed = HashMap::new();
        for (words, tag) in [
            (PRONOUNS, Tag::Pron),
            (DETERMINERS, Tag::Det),
            (PREPOSITIONS, Tag::Adp),
            (CONJUNCTIONS, Tag::Conj),
            (PARTICLES, Tag::Part),
            (AUX_VERBS, Tag::Verb),
            (INTERJECTIONS, Tag::X),
        ] {
            for w in words {
                closed.insert(*w, tag);
            }
        }

        let mut open = HashMap::new();
        for line in include_str!("lexicon.tsv").lines() {
            let mut parts = line.split('\t');
            if let (Some(word), Some(label)) = (parts.next(), parts.next()) {
                let tag = Tag::from_label(label.trim());
                open.insert(word.to_string(), tag);
                if tag == Tag::Verb {
                    open.entry(third_singular(word)).or_insert(Tag::Verb);
                }
            }
        }
        Tagger { closed, open }
    }

    /// Tag every token. Lookup order: closed-class lexicon, open-class
    /// lexicon, suffix rules, digit pattern, default NOUN.
    pub fn tag(&self, tokens: &[String]) -> Vec<TaggedToken> {
        tokens
            .iter()
            .enumerate()
            .map(|(position, surface)| {
                let lower = surface.to_lowercase();
                let tag = self.tag_word(&lower);
                TaggedToken {
                    surface: surface.clone(),
                    lower,
                    tag,
                    position,
                }
            })
            .collect()
    }

    fn tag_word(&self, lower: &str) -> Tag {
        if lower.chars().all(|c| !c.is_alphanumeric()) {
            return Tag::Punct;
        }
        if let Some(tag) = self.closed.get(lower) {
            return *tag;
        }
        if let Some(tag) = self.open.get(lower) {
            return *tag;
        }
        if lower.len() > 4 && (lower.ends_with("ing") || lower.ends_with("ed")) {
            return Tag::Verb;
        }
        if lower.len() > 3 && lower.ends_with("ly") {
            return Tag::Adv;
        }
        if lower.ends_with("tion") || lower.ends_with("ness") {
            return Tag::Noun;
        }
        if lower.chars().any(|c| c.is_ascii_digit()) {
            return Tag::Num;
        }
        Tag::Noun
    }

    /// Tokenize, tag, and wrap a raw sentence.
    pub fn tag_sentence(
        &self,
        sentence: &str,
        sentence_id: usize,
        speaker: &str,
    ) -> Result<TaggedSentence> {
        let tokens = tokenize(sentence);
        let tagged = self.tag(&tokens);
        wrap_meta(TaggedSentence {
            tokens: tagged,
            sentence_id,
            speaker: speaker.to_string(),
        })
    }
}

impl Default for Tagger {
    fn default() -> Self {
        Tagger::new()
    }
}

/// Third-person singular inflection for a base verb.
pub fn third_singular(base: &str) -> String {
    if base == "have" {
        return "has".to_string();
    }
    if base == "be" {
        return "is".to_string();
    }
    if base.ends_with('y')
        && base
            .chars()
            .rev()
            .nth(1)
            .is_some_and(|c| !"aeiou".contains(c))
    {
        return format!("{}ies", &base[..base.len() - 1]);
    }
    if base.ends_with('s')
        || base.ends_with('x')
        || base.ends_with('z')
        || base.ends_with("ch")
        || base.ends_with("sh")
        || base.ends_with('o')
    {
        return format!("{base}es");
    }
    format!("{base}s")
}

/// Prepend a bos token and append an eos token. Errors on sentences that
/// already carry meta tokens or contain nothing to wrap.
pub fn wrap_meta(ts: TaggedSentence) -> Result<TaggedSentence> {
    if ts.tokens.iter().any(|t| t.is_meta()) {
        return Err(Error::AlreadyWrapped);
    }
    if ts.tokens.is_empty() {
        return Err(Error::EmptySentence);
    }
    let mut tokens = Vec::with_capacity(ts.tokens.len() + 2);
    tokens.push(TaggedToken {
        surface: "bos".to_string(),
        lower: "bos".to_string(),
        tag: Tag::Meta,
        position: 0,
    });
    for (i, mut tok) in ts.tokens.into_iter().enumerate() {
        tok.position = i + 1;
        tokens.push(tok);
    }
    let eos_pos = tokens.len();
    tokens.push(TaggedToken {
        surface: "eos".to_string(),
        lower: "eos".to_string(),
        tag: Tag::Meta,
        position: eos_pos,
    });
    Ok(TaggedSentence {
        tokens,
        sentence_id: ts.sentence_id,
        speaker: ts.speaker,
    })
}

/// Wrap a pre-tagged `[surface, tag]` token list.
pub fn wrap_pretagged(
    pairs: &[(String, String)],
    sentence_id: usize,
    speaker: &str,
) -> Result<TaggedSentence> {
    let tokens = pairs
        .iter()
        .enumerate()
        .map(|(position, (surface, label))| TaggedToken {
            surface: surface.clone(),
            lower: surface.to_lowercase(),
            tag: Tag::from_label(label),
            position,
        })
        .collect();
    wrap_meta(TaggedSentence {
        tokens,
        sentence_id,
        speaker: speaker.to_string(),
    })
}

/// Lowercase stopword list. The bundled default covers common English
/// function words and clitics; a custom list can be loaded from a file
/// with one word per line.
#[derive(Debug, Clone)]
pub struct StopwordSet {
    words: HashSet<String>,
}

impl StopwordSet {
    pub fn bundled() -> StopwordSet {
        let words = include_str!("stopwords.txt")
            .lines()
            .map(|l| l.trim().to_string())
            .filter(|l| !l.is_empty())
            .collect();
        StopwordSet { words }
    }

    pub fn from_file(path: &Path) -> Result<StopwordSet> {
        let reader = BufReader::new(File::open(path)?);
        let mut words = HashSet::new();
        for line in reader.lines() {
            let line = line?.trim().to_string();
            if !line.is_empty() {
                words.insert(line);
            }
        }
        Ok(StopwordSet { words })
    }

    pub fn contains(&self, lower: &str) -> bool {
        self.words.contains(lower)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl Default for StopwordSet {
    fn default() -> Self {
        StopwordSet::bundled()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenize_contraction_and_period() {
        assert_eq!(
            tokenize("I'll take my car."),
            vec!["I", "'ll", "take", "my", "car", "."]
        );
    }

    #[test]
    fn tokenize_single_word() {
        assert_eq!(tokenize("hello"), vec!["hello"]);
    }

    #[test]
    fn tokenize_clitic_s() {
        assert_eq!(tokenize("he's 40"), vec!["he", "'s", "40"]);
    }

    #[test]
    fn tokenize_whitespace_only() {
        assert!(tokenize("   ").is_empty());
    }

    #[test]
    fn tokenize_preserves_emoticons() {
        assert_eq!(
            tokenize("he was lying to me :/"),
            vec!["he", "was", "lying", "to", "me", ":/"]
        );
    }

    #[test]
    fn tokenize_negation() {
        assert_eq!(tokenize("I don't know"), vec!["I", "do", "n't", "know"]);
    }

    #[test]
    fn tag_lexicon_verb() {
        let tagger = Tagger::new();
        let tagged = tagger.tag(&["take".to_string()]);
        assert_eq!(tagged[0].tag, Tag::Verb);
    }

    #[test]
    fn tag_closed_class_det() {
        let tagger = Tagger::new();
        assert_eq!(tagger.tag(&["the".to_string()])[0].tag, Tag::Det);
    }

    #[test]
    fn tag_digit_is_num() {
        let tagger = Tagger::new();
        assert_eq!(tagger.tag(&["40".to_string()])[0].tag, Tag::Num);
    }

    #[test]
    fn modals_are_verbs() {
        let tagger = Tagger::new();
        for modal in ["can", "may", "must"] {
            assert_eq!(
                tagger.tag(&[modal.to_string()])[0].tag,
                Tag::Verb,
                "{modal}"
            );
        }
    }

    #[test]
    fn suffix_rules() {
        let tagger = Tagger::new();
        assert_eq!(tagger.tag(&["zorbing".to_string()])[0].tag, Tag::Verb);
        assert_eq!(tagger.tag(&["zorbly".to_string()])[0].tag, Tag::Adv);
        assert_eq!(tagger.tag(&["zorbness".to_string()])[0].tag, Tag::Noun);
    }

    #[test]
    fn unknowns_default_to_noun() {
        let tagger = Tagger::new();
        assert_eq!(tagger.tag(&["frobnak".to_string()])[0].tag, Tag::Noun);
    }

    #[test]
    fn tagging_is_deterministic() {
        let tagger = Tagger::new();
        let tokens = tokenize("Bring home the clothes that are hanging outside");
        let a = tagger.tag(&tokens);
        let b = tagger.tag(&tokens);
        assert_eq!(a, b);
    }

    #[test]
    fn wrap_meta_positions() {
        let tagger = Tagger::new();
        let ts = tagger.tag_sentence("hi", 0, "A").unwrap();
        assert_eq!(ts.tokens.len(), 3);
        assert_eq!(ts.tokens[0].lower, "bos");
        assert_eq!(ts.tokens[2].lower, "eos");
        assert_eq!(ts.tokens[1].position, 1);
        assert!(ts.is_wrapped());
    }

    #[test]
    fn wrap_meta_rejects_double_wrap() {
        let tagger = Tagger::new();
        let ts = tagger.tag_sentence("hi", 0, "A").unwrap();
        assert!(matches!(wrap_meta(ts), Err(Error::AlreadyWrapped)));
    }

    #[test]
    fn wrap_meta_rejects_empty() {
        let ts = TaggedSentence {
            tokens: vec![],
            sentence_id: 0,
            speaker: "A".to_string(),
        };
        assert!(matches!(wrap_meta(ts), Err(Error::EmptySentence)));
    }

    #[test]
    fn five_token_sentence_positions() {
        let tagger = Tagger::new();
        let ts = tagger.tag_sentence("we went to the opera", 0, "A").unwrap();
        assert_eq!(ts.tokens.len(), 7);
        let positions: Vec<usize> = ts.tokens.iter().map(|t| t.position).collect();
        assert_eq!(positions, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn bundled_stopwords_basics() {
        let sw = StopwordSet::bundled();
        for w in ["i", "you", "the", "a", "is"] {
            assert!(sw.contains(w), "{w}");
        }
        assert!(!sw.contains("passport"));
        assert!(sw.len() > 150);
    }
}
