//! Input builders shared by the benchmarks.

use depsent::lexicon::IntensifierEntry;
use depsent::{
    parse_conll, write_conll, DepSentence, LexiconBundle, SentimentEntry, TaggedToken, WordList, WordListKind,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// "He is not very handsome, but he has something that I really like".
pub const RUNNING_EXAMPLE: &str = "\
1\tHe\the\tPRON\t2\tnsubj
2\tis\tbe\tVERB\t0\troot
3\tnot\tnot\tADV\t2\tneg
4\tvery\tvery\tADV\t5\tadvmod
5\thandsome\thandsome\tADJ\t2\tattr
6\t,\t,\t.\t2\tpunct
7\tbut\tbut\tCONJ\t2\tcc
8\the\the\tPRON\t9\tnsubj
9\thas\thave\tVERB\t2\tconj
10\tsomething\tsomething\tNOUN\t9\tdobj
11\tthat\tthat\tPRON\t14\tdobj
12\tI\tI\tPRON\t14\tnsubj
13\treally\treally\tADV\t14\tadvmod
14\tlike\tlike\tVERB\t10\trcmod
";

pub fn running_example() -> DepSentence {
    parse_conll(RUNNING_EXAMPLE).unwrap().remove(0)
}

const WORDS: [(&str, &str, &str); 10] = [
    ("good", "ADJ", "amod"),
    ("bad", "ADJ", "attr"),
    ("film", "NOUN", "dobj"),
    ("plot", "NOUN", "nsubj"),
    ("very", "ADV", "advmod"),
    ("really", "ADV", "advmod"),
    ("not", "ADV", "neg"),
    ("but", "CONJ", "cc"),
    ("if", "SCONJ", "mark"),
    ("like", "VERB", "conj"),
];

/// Lexicon covering the vocabulary of [`random_sentence`].
pub fn lexicon() -> LexiconBundle {
    let mut lex = LexiconBundle::new();
    lex.add_sentiment([
        SentimentEntry::new("good", Some("ADJ"), 3.0),
        SentimentEntry::new("bad", Some("ADJ"), -3.0),
        SentimentEntry::new("like", Some("VERB"), 2.0),
        SentimentEntry::new("handsome", Some("ADJ"), 4.0),
    ])
    .unwrap();
    lex.add_intensifiers([
        IntensifierEntry {
            key: "very".into(),
            beta: 0.25,
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

/// A random well-formed sentence of `n` words drawn from a small vocabulary.
pub fn random_sentence<R: Rng>(rng: &mut R, n: usize) -> DepSentence {
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(rng);
    let mut heads = vec![0; n + 1];
    for k in 1..n {
        heads[order[k]] = order[rng.gen_range(0..k)];
    }
    let tokens = (1..=n)
        .map(|i| {
            let (form, tag, dep) = WORDS[rng.gen_range(0..WORDS.len())];
            TaggedToken::new(i, form, tag, heads[i], dep)
        })
        .collect();
    DepSentence::new(tokens).unwrap()
}

/// `count` random sentences of `len` words from a fixed seed.
pub fn random_document(seed: u64, count: usize, len: usize) -> Vec<DepSentence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_sentence(&mut rng, len)).collect()
}

pub fn document_text(sentences: &[DepSentence]) -> String {
    write_conll(sentences)
}
