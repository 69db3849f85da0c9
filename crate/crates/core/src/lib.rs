//! Unsupervised, syntax-driven sentiment analysis.
//!
//! Word-level semantic orientations from a lexicon are propagated up a
//! dependency tree by declarative *compositional operations* (negation,
//! intensification, adversative clauses, irrealis). Each analysis keeps a
//! full trace of what was queued, applied and joined at every node.
//!
//! ```
//! use depsent::{builtin_rule_pack, parse_conll, Engine, LexiconBundle, SentimentEntry};
//!
//! let mut lex = LexiconBundle::new();
//! lex.add_sentiment([SentimentEntry::new("good", Some("ADJ"), 3.0)]).unwrap();
//! let s = &parse_conll("1\tgood\tgood\tADJ\t0\troot\n").unwrap()[0];
//! let rules = builtin_rule_pack();
//! assert_eq!(Engine::new(&rules, &lex).analyze_sentence(s).so, 3.0);
//! ```

pub mod deptree;
pub mod engine;
pub mod eval;
pub mod lexicon;
pub mod ruleset;

pub use deptree::{
    parse_conll, write_conll, ConllError, DepSentence, NodeId, NodeSet, TaggedToken, TreeError, ROOT,
};
pub use engine::{
    analyze_document, analyze_sentence, init_so, AnalysisTrace, DocumentResult, Engine, EngineError,
    Polarity, SentenceResult, SoState, TraceEvent,
};
pub use eval::{ablation, evaluate, load_corpus, AblationReport, EvalError, LabeledDocument};
pub use lexicon::{LexiconBundle, LexiconError, LexiconFormat, SentimentEntry, WordList, WordListKind};
pub use ruleset::{
    apply_transform, builtin_rule_pack, builtin_universal_rules, load_rules_xml, parse_rules_xml,
    resolve_scope, rules_to_xml, OperationSpec, RuleError, ScopeCandidate,
};
