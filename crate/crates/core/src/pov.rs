//! Rule-based conversion of summary sentences into third-person reported
//! speech: first-person pronoun replacement, modal backshift, a question
//! template, and subject-verb agreement fixups.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::tagger::{third_singular, Tag};

/// The conversion rule tables. Loadable from JSON so the pronoun map,
/// modal map, and question template can be swapped out.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PovRuleSet {
    /// First-person form -> replacement. The value "<speaker>" stands for
    /// the speaker's name, "<speaker>'s" for its possessive.
    pub pronoun_map: BTreeMap<String, String>,
    /// Modal backshift pairs.
    pub modal_map: BTreeMap<String, String>,
    /// Question rewrite; `<speaker>` and `<utterance>` are substituted.
    pub question_template: String,
    /// Auxiliary conjugations applied after a singular subject
    /// substitution.
    pub agreement_map: BTreeMap<String, String>,
    /// Leave possessives ("my", "mine", "our") untouched.
    #[serde(default)]
    pub keep_possessives: bool,
}

impl Default for PovRuleSet {
    fn default() -> Self {
        let pronoun_map = BTreeMap::from(
            [
                ("i", "<speaker>"),
                ("me", "<speaker>"),
                ("my", "<speaker>'s"),
                ("mine", "<speaker>'s"),
                ("we", "they"),
                ("our", "their"),
                ("ours", "theirs"),
                ("us", "them"),
                ("myself", "<speaker>"),
                ("ourselves", "themselves"),
            ]
            .map(|(k, v)| (k.to_string(), v.to_string())),
        );
        let modal_map = BTreeMap::from(
            [("can", "could"), ("may", "might"), ("must", "had to")]
                .map(|(k, v)| (k.to_string(), v.to_string())),
        );
        let agreement_map = BTreeMap::from(
            [
                ("am", "is"),
                ("'m", "'s"),
                ("are", "is"),
                ("'re", "'s"),
                ("have", "has"),
                ("'ve", "'s"),
                ("do", "does"),
                ("were", "was"),
            ]
            .map(|(k, v)| (k.to_string(), v.to_string())),
        );
        PovRuleSet {
            pronoun_map,
            modal_map,
            question_template: "<speaker> asks <utterance>".to_string(),
            agreement_map,
            keep_possessives: false,
        }
    }
}

const POSSESSIVES: &[&str] = &["my", "mine", "our", "ours"];

/// Modals and other auxiliaries that never take third-singular
/// inflection.
const UNINFLECTED: &[&str] = &[
    "can", "could", "may", "might", "must", "will", "would", "shall",
    "should", "'ll", "'d", "had", "has", "is", "was", "does", "did",
    "ought", "to", "n't", "not",
];

/// Irregular past forms that the `-ed` heuristic misses.
const IRREGULAR_PAST: &[&str] = &[
    "was", "were", "went", "said", "told", "saw", "got", "took", "made",
    "came", "knew", "thought", "left", "felt", "kept", "met", "paid",
    "sent", "sat", "stood", "found", "gave", "heard", "held", "ran",
    "brought", "bought", "spoke", "wrote", "drove", "ate", "began",
    "broke", "chose", "fell", "flew", "forgot", "grew", "hid", "lost",
    "meant", "rode", "rose", "sang", "slept", "sold", "spent", "taught",
    "threw", "understood", "woke", "won", "wore", "drank", "swam", "lent",
    "hung", "lay", "did", "had", "built", "caught", "drew", "became",
];

fn looks_past(word: &str) -> bool {
    word.ends_with("ed") || IRREGULAR_PAST.contains(&word)
}

/// Convert one tagged, lowercase token sequence into reported speech.
/// Questions are wrapped in the template verbatim; otherwise pronoun,
/// modal, and agreement rules apply in that order.
pub fn convert_tokens(tokens: &[(String, Tag)], speaker: &str, rules: &PovRuleSet) -> String {
    let speaker = speaker.to_lowercase();
    let words: Vec<&str> = tokens.iter().map(|(w, _)| w.as_str()).collect();

    if words.last() == Some(&"?") {
        let utterance = words.join(" ");
        // Already-wrapped questions pass through, keeping conversion
        // idempotent.
        let prefix = rules
            .question_template
            .split("<utterance>")
            .next()
            .unwrap_or("")
            .replace("<speaker>", &speaker);
        if utterance.starts_with(prefix.trim_end()) {
            return utterance;
        }
        return rules
            .question_template
            .replace("<speaker>", &speaker)
            .replace("<utterance>", &utterance);
    }

    // Rule 1: first-person pronouns. Substituted singular subjects are
    // marked for the agreement pass.
    let mut out: Vec<(String, Tag)> = Vec::with_capacity(tokens.len() + 1);
    let mut singular_subjects: Vec<usize> = Vec::new();
    for (word, tag) in tokens {
        let lower = word.to_lowercase();
        let replacement = rules.pronoun_map.get(&lower).filter(|_| {
            !(rules.keep_possessives && POSSESSIVES.contains(&lower.as_str()))
        });
        match replacement {
            Some(repl) => {
                // The possessive clitic is emitted space-separated,
                // matching the tokenizer's clitic splitting so converted
                // text is a fixed point of conversion.
                let repl = repl
                    .replace("<speaker>'s", &format!("{speaker} 's"))
                    .replace("<speaker>", &speaker);
                if lower == "i" {
                    singular_subjects.push(out.len());
                }
                out.push((repl, *tag));
            }
            None => out.push((lower, *tag)),
        }
    }

    // Rule 2: modal backshift, verbs only.
    for (word, tag) in &mut out {
        if *tag == Tag::Verb {
            if let Some(repl) = rules.modal_map.get(word.as_str()) {
                *word = repl.clone();
            }
        }
    }

    // Rule 4: subject-verb agreement next to substituted subjects.
    fix_agreement_marked(&mut out, &singular_subjects, rules);

    out.iter()
        .map(|(w, _)| w.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Conjugate the token following each substituted singular subject:
/// table lookup for auxiliaries, third-singular inflection for other
/// present-tense verbs.
pub fn fix_agreement_marked(
    tokens: &mut [(String, Tag)],
    singular_subjects: &[usize],
    rules: &PovRuleSet,
) {
    for &idx in singular_subjects {
        let Some((next, tag)) = tokens.get(idx + 1).cloned() else {
            continue;
        };
        if let Some(repl) = rules.agreement_map.get(&next) {
            tokens[idx + 1].0 = repl.clone();
            continue;
        }
        // A modal replacement may span two words ("had to"); judge by the
        // head word.
        let head = next.split_whitespace().next().unwrap_or("");
        if UNINFLECTED.contains(&head) {
            continue;
        }
        if tag == Tag::Verb && !looks_past(&next) && !next.ends_with('s') {
            tokens[idx + 1].0 = third_singular(&next);
        }
    }
}

/// Convert a raw token string, tagging it with the bundled tagger.
pub fn convert_text(text: &str, speaker: &str, rules: &PovRuleSet) -> String {
    use crate::tagger::{tokenize, Tagger};
    let tagger = Tagger::new();
    let tokens: Vec<(String, Tag)> = tagger
        .tag(&tokenize(text))
        .into_iter()
        .map(|t| (t.lower, t.tag))
        .collect();
    convert_tokens(&tokens, speaker, rules)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn convert(text: &str, speaker: &str) -> String {
        convert_text(text, speaker, &PovRuleSet::default())
    }

    #[test]
    fn first_person_takes_speaker_name() {
        assert_eq!(
            convert("i 'll tell brian to take care of that", "Boris"),
            "boris 'll tell brian to take care of that"
        );
    }

    #[test]
    fn identity_without_applicable_tokens() {
        assert_eq!(convert("the dog barks", "Anne"), "the dog barks");
    }

    #[test]
    fn question_template() {
        assert_eq!(
            convert("are we going to take a taxi to the opera ?", "Megan"),
            "megan asks are we going to take a taxi to the opera ?"
        );
    }

    #[test]
    fn modal_backshift_after_pronoun() {
        assert_eq!(convert("i can go", "Anne"), "anne could go");
        assert_eq!(convert("i may go", "Anne"), "anne might go");
        assert_eq!(convert("i must go", "Anne"), "anne had to go");
    }

    #[test]
    fn agreement_table() {
        assert_eq!(convert("anne am tired", "Anne"), "anne am tired");
        assert_eq!(convert("i am tired", "Anne"), "anne is tired");
        assert_eq!(convert("i 'm sure", "Anne"), "anne 's sure");
        assert_eq!(convert("they have left", "Anne"), "they have left");
    }

    #[test]
    fn fix_agreement_direct() {
        let rules = PovRuleSet::default();
        let mut tokens = vec![
            ("anne".to_string(), Tag::Noun),
            ("am".to_string(), Tag::Verb),
            ("tired".to_string(), Tag::Adj),
        ];
        fix_agreement_marked(&mut tokens, &[0], &rules);
        assert_eq!(tokens[1].0, "is");

        let mut tokens = vec![
            ("anne".to_string(), Tag::Noun),
            ("'m".to_string(), Tag::Verb),
            ("sure".to_string(), Tag::Adj),
        ];
        fix_agreement_marked(&mut tokens, &[0], &rules);
        assert_eq!(tokens[1].0, "'s");
    }

    #[test]
    fn present_verb_inflects() {
        assert_eq!(convert("i go home", "Anne"), "anne goes home");
        assert_eq!(convert("i watch movies", "Anne"), "anne watches movies");
        assert_eq!(convert("i try hard", "Anne"), "anne tries hard");
    }

    #[test]
    fn past_verbs_do_not_inflect() {
        assert_eq!(
            convert("i saw his passport", "Anne"),
            "anne saw his passport"
        );
        assert_eq!(convert("i lied to him", "Anne"), "anne lied to him");
    }

    #[test]
    fn plural_first_person() {
        assert_eq!(convert("we are going home", "Anne"), "they are going home");
        assert_eq!(convert("he told us", "Anne"), "he told them");
    }

    #[test]
    fn possessives() {
        let rules = PovRuleSet::default();
        assert_eq!(
            convert_text("joseph 'll take my car", "Joseph", &rules),
            "joseph 'll take joseph 's car"
        );
        let keeping = PovRuleSet {
            keep_possessives: true,
            ..PovRuleSet::default()
        };
        assert_eq!(
            convert_text("joseph 'll take my car", "Joseph", &keeping),
            "joseph 'll take my car"
        );
    }

    #[test]
    fn third_person_pronouns_unaltered() {
        for text in [
            "he lied to her",
            "she told him everything",
            "they kept it together",
        ] {
            assert_eq!(convert(text, "Anne"), text);
        }
    }

    #[test]
    fn second_person_unchanged() {
        assert_eq!(convert("you were right", "Anne"), "you were right");
    }

    #[test]
    fn idempotent_on_samples() {
        let samples = [
            "i 'll tell brian to take care of that",
            "are we going to take a taxi to the opera ?",
            "i can go",
            "i 'm not home right now",
            "we must leave",
            "the dog barks",
        ];
        for s in samples {
            let once = convert(s, "Boris");
            let twice = convert(&once, "Boris");
            assert_eq!(once, twice, "not idempotent on {s:?}");
        }
    }

    #[test]
    fn token_count_changes_only_for_must_and_questions() {
        let cases = [
            ("i can go", 0isize),
            ("i must go", 1),
            ("i 'm sure", 0),
            ("we are here", 0),
        ];
        for (text, delta) in cases {
            let n_in = text.split_whitespace().count() as isize;
            let out = convert(text, "Anne");
            let n_out = out.split_whitespace().count() as isize;
            assert_eq!(n_out - n_in, delta, "{text:?} -> {out:?}");
        }
    }

    #[test]
    fn pronoun_map_has_no_third_person_keys() {
        let rules = PovRuleSet::default();
        for third in ["he", "she", "it", "they", "him", "her", "them"] {
            assert!(!rules.pronoun_map.contains_key(third));
        }
    }

    #[test]
    fn modal_map_is_exactly_three_pairs() {
        let rules = PovRuleSet::default();
        assert_eq!(rules.modal_map.len(), 3);
        assert_eq!(rules.modal_map["can"], "could");
        assert_eq!(rules.modal_map["may"], "might");
        assert_eq!(rules.modal_map["must"], "had to");
    }
}
