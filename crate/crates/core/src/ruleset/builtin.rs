//! The universal rule pack: intensification, adversative "but" clauses,
//! negation and irrealis, written against universal PoS tags and
//! dependency types.

use crate::lexicon::{LexiconBundle, WordListKind};

use super::{
    Amount, FormMatcher, LabelSet, OperationSpec, RuleError, ScopeCandidate, TransformSpec, TriggerPredicate,
};

pub const INTENSIFICATION: &str = "intensification";
pub const BUT: &str = "but";
pub const NEGATION: &str = "negation";
pub const IRREALIS: &str = "irrealis";

/// Adversatives down-weight the clause on their left by this factor.
const BUT_BETA: f64 = -0.25;
/// Irrealis cancels the orientation of what it scopes over.
const IRREALIS_BETA: f64 = -1.0;

/// The universal pack, after checking that `lex` provides every word list
/// the pack refers to.
pub fn builtin_universal_rules(lex: &LexiconBundle) -> Result<Vec<OperationSpec>, RuleError> {
    if let Some(kind) = WordListKind::ALL.into_iter().find(|k| !lex.has_list(*k)) {
        return Err(RuleError::MissingList(kind));
    }
    Ok(builtin_rule_pack())
}

/// The universal pack without lexicon validation.
pub fn builtin_rule_pack() -> Vec<OperationSpec> {
    use ScopeCandidate::*;

    vec![
        OperationSpec {
            name: INTENSIFICATION.into(),
            transform: TransformSpec::weighting(Amount::FromLexicon),
            trigger: TriggerPredicate {
                forms: FormMatcher::List(WordListKind::Intensifiers),
                postags: LabelSet::tags(["ADV", "ADJ"]),
                deprels: LabelSet::deprels(["advmod", "amod", "nmod"]),
            },
            levels_up: 1,
            priority: 3,
            scopes: vec![Dest, Branch("acomp".into())],
        },
        OperationSpec {
            name: BUT.into(),
            transform: TransformSpec::weighting(Amount::Literal(BUT_BETA)),
            trigger: TriggerPredicate {
                forms: FormMatcher::List(WordListKind::Adversatives),
                postags: LabelSet::tags(["CONJ"]),
                deprels: LabelSet::deprels(["cc"]),
            },
            levels_up: 1,
            priority: 1,
            scopes: vec![SubjLeft],
        },
        OperationSpec {
            name: NEGATION.into(),
            transform: TransformSpec::shift(Amount::FromLexicon),
            trigger: TriggerPredicate {
                forms: FormMatcher::List(WordListKind::Negators),
                postags: LabelSet::Any,
                deprels: LabelSet::deprels(["neg"]),
            },
            levels_up: 1,
            priority: 2,
            scopes: vec![Dest, Branch("attr".into()), Branch("acomp".into()), SubjRight],
        },
        OperationSpec {
            name: IRREALIS.into(),
            transform: TransformSpec::weighting(Amount::Literal(IRREALIS_BETA)),
            trigger: TriggerPredicate {
                forms: FormMatcher::List(WordListKind::Irrealis),
                postags: LabelSet::Any,
                deprels: LabelSet::deprels(["mark"]),
            },
            levels_up: 2,
            priority: 3,
            scopes: vec![Dest, SubjRight],
        },
    ]
}
