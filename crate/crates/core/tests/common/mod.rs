#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;

use depsent::{parse_conll, DepSentence, LexiconBundle, TaggedToken};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn testdata() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("testdata")
}

pub fn running_example() -> DepSentence {
    let text = std::fs::read_to_string(testdata().join("running_example.conllu")).unwrap();
    parse_conll(&text).unwrap().remove(0)
}

pub fn fixture_lexicon() -> LexiconBundle {
    LexiconBundle::from_manifest(testdata().join("lexicon.manifest")).unwrap()
}

pub fn node(s: &DepSentence, form: &str) -> usize {
    s.tokens().iter().find(|t| t.form == form).unwrap().index
}

/// Random head vector for `n` words: `heads[k]` is the head of word `k + 1`.
pub fn random_heads<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(rng);
    let mut heads = vec![0; n];
    for k in 0..n {
        let head = if k == 0 || rng.gen_bool(0.1) {
            0
        } else {
            order[rng.gen_range(0..k)]
        };
        heads[order[k] - 1] = head;
    }
    heads
}

pub const DEPRELS: [&str; 10] = [
    "nsubj", "dobj", "attr", "acomp", "amod", "advmod", "neg", "cc", "mark", "conj",
];

pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> DepSentence {
    let heads = random_heads(rng, n);
    let tokens = heads
        .iter()
        .enumerate()
        .map(|(k, &h)| {
            let dep = DEPRELS[rng.gen_range(0..DEPRELS.len())];
            TaggedToken::new(k + 1, format!("w{}", k + 1), "X", h, dep)
        })
        .collect();
    DepSentence::new(tokens).unwrap()
}

/// Trigger words of the universal pack with the tags and dependency types
/// that make them fire.
pub const TRIGGERS: [(&str, &str, &[&str]); 6] = [
    ("very", "ADV", &["advmod", "amod", "nmod"]),
    ("somewhat", "ADJ", &["advmod", "amod"]),
    ("really", "ADV", &["advmod"]),
    ("not", "ADV", &["neg"]),
    ("but", "CONJ", &["cc"]),
    ("if", "SCONJ", &["mark"]),
];

/// A random sentence of at most `max_words` words where up to four words
/// are trigger words of the universal pack, plus random initial
/// orientations in -5..=5 (root fixed at 0).
pub fn random_case<R: Rng>(rng: &mut R, max_words: usize) -> (DepSentence, Vec<f64>) {
    let n = rng.gen_range(1..=max_words);
    let heads = random_heads(rng, n);
    let n_triggers = rng.gen_range(0..=4.min(n));
    let mut slots: Vec<usize> = (0..n).collect();
    slots.shuffle(rng);
    let trigger_slots = &slots[..n_triggers];

    let tokens = heads
        .iter()
        .enumerate()
        .map(|(k, &h)| {
            if trigger_slots.contains(&k) {
                let (form, tag, deps) = TRIGGERS[rng.gen_range(0..TRIGGERS.len())];
                let dep = if rng.gen_bool(0.85) {
                    deps[rng.gen_range(0..deps.len())]
                } else {
                    DEPRELS[rng.gen_range(0..DEPRELS.len())]
                };
                TaggedToken::new(k + 1, form, tag, h, dep)
            } else {
                let dep = DEPRELS[rng.gen_range(0..DEPRELS.len())];
                TaggedToken::new(k + 1, format!("w{}", k + 1), "X", h, dep)
            }
        })
        .collect();
    let s = DepSentence::new(tokens).unwrap();
    let mut sigma = vec![0.0];
    sigma.extend((0..n).map(|_| rng.gen_range(-5i32..=5) as f64));
    (s, sigma)
}

/// Lexicon whose word lists cover [`TRIGGERS`].
pub fn trigger_lexicon() -> LexiconBundle {
    use depsent::lexicon::IntensifierEntry;
    use depsent::{WordList, WordListKind};

    let mut lex = LexiconBundle::new();
    lex.add_intensifiers([
        IntensifierEntry {
            key: "very".into(),
            beta: 0.25,
        },
        IntensifierEntry {
            key: "somewhat".into(),
            beta: -0.3,
        },
        IntensifierEntry {
            key: "really".into(),
            beta: 0.15,
        },
    ])
    .unwrap();
    lex.set_word_list(WordListKind::Negators, WordList::from_terms(["not"]));
    lex.set_word_list(WordListKind::Adversatives, WordList::from_terms(["but"]));
    lex.set_word_list(WordListKind::Irrealis, WordList::from_terms(["if"]));
    lex
}
