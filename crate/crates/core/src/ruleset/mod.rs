//! Compositional operations: what triggers them, how far they travel, which
//! nodes they touch and how they change those nodes' orientation.

mod builtin;
mod scope;
mod xml;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use regex::Regex;
use thiserror::Error;

use crate::deptree::{NodeId, TaggedToken};
use crate::lexicon::{LexiconBundle, WordListKind};

pub use builtin::{builtin_rule_pack, builtin_universal_rules, BUT, INTENSIFICATION, IRREALIS, NEGATION};
pub use scope::{resolve_scope, ScopeResolution};
pub use xml::{load_rules_xml, parse_rules_xml, rules_to_xml};

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed XML: {0}")]
    Xml(#[from] roxmltree::Error),
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: invalid regular expression {pattern:?}: {source}")]
    Regex {
        path: String,
        pattern: String,
        #[source]
        source: regex::Error,
    },
    #[error("lexicon bundle has no {} list", .0.name())]
    MissingList(WordListKind),
    #[error("trigger predicate must constrain at least one of forms, postags or dependency")]
    UnconstrainedTrigger,
    #[error("no operation named {0:?}")]
    UnknownOperation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformKind {
    /// Moves the orientation `amount` units towards (and possibly past) zero.
    Shift,
    /// Scales the orientation by `1 + amount`.
    Weighting,
}

impl TransformKind {
    pub fn name(self) -> &'static str {
        match self {
            TransformKind::Shift => "shift",
            TransformKind::Weighting => "weighting",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Amount {
    Literal(f64),
    /// Bound when the operation triggers: an intensifier's β for weighting,
    /// the negator's shift amount (or the bundle α) for shift.
    FromLexicon,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformSpec {
    pub kind: TransformKind,
    pub amount: Amount,
}

impl TransformSpec {
    pub fn shift(amount: Amount) -> Self {
        TransformSpec {
            kind: TransformKind::Shift,
            amount,
        }
    }

    pub fn weighting(amount: Amount) -> Self {
        TransformSpec {
            kind: TransformKind::Weighting,
            amount,
        }
    }
}

/// Applies a transformation with its amount already bound.
///
/// Shifting a neutral value leaves it at 0.
pub fn apply_transform(kind: TransformKind, amount: f64, so: f64) -> f64 {
    match kind {
        TransformKind::Shift => {
            if so > 0.0 {
                so - amount
            } else if so < 0.0 {
                so + amount
            } else {
                so
            }
        }
        TransformKind::Weighting => so * (1.0 + amount),
    }
}

#[derive(Debug, Clone)]
pub enum FormPattern {
    /// Compared against the lowercased form.
    Literal(String),
    /// Anchored, case-insensitive. Written `/.../` in rule files.
    Regex(Regex),
}

impl FormPattern {
    pub fn literal(s: impl AsRef<str>) -> Self {
        FormPattern::Literal(s.as_ref().to_lowercase())
    }

    /// Compiles `pattern` as a whole-token, case-insensitive expression.
    pub fn regex(pattern: &str) -> Result<Self, regex::Error> {
        Regex::new(&format!("(?i)^(?:{pattern})$")).map(FormPattern::Regex)
    }

    /// The pattern as written in a rule file.
    pub fn source(&self) -> String {
        match self {
            FormPattern::Literal(s) => s.clone(),
            FormPattern::Regex(re) => {
                let s = re.as_str();
                let inner = &s["(?i)^(?:".len()..s.len() - ")$".len()];
                format!("/{inner}/")
            }
        }
    }

    fn is_match(&self, lower: &str) -> bool {
        match self {
            FormPattern::Literal(s) => s == lower,
            FormPattern::Regex(re) => re.is_match(lower),
        }
    }
}

impl PartialEq for FormPattern {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (FormPattern::Literal(a), FormPattern::Literal(b)) => a == b,
            (FormPattern::Regex(a), FormPattern::Regex(b)) => a.as_str() == b.as_str(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FormMatcher {
    Any,
    List(WordListKind),
    Patterns(Vec<FormPattern>),
}

/// A set of PoS tags or dependency types, or the wildcard.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelSet {
    Any,
    Only(Vec<String>),
}

impl LabelSet {
    pub fn tags<I: IntoIterator<Item = S>, S: AsRef<str>>(tags: I) -> Self {
        LabelSet::Only(tags.into_iter().map(|t| t.as_ref().to_uppercase()).collect())
    }

    pub fn deprels<I: IntoIterator<Item = S>, S: AsRef<str>>(deps: I) -> Self {
        LabelSet::Only(deps.into_iter().map(|d| d.as_ref().to_lowercase()).collect())
    }

    fn contains(&self, label: &str) -> bool {
        match self {
            LabelSet::Any => true,
            LabelSet::Only(labels) => labels.iter().any(|l| l.eq_ignore_ascii_case(label)),
        }
    }

    pub fn is_any(&self) -> bool {
        matches!(self, LabelSet::Any)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriggerPredicate {
    pub forms: FormMatcher,
    pub postags: LabelSet,
    pub deprels: LabelSet,
}

impl TriggerPredicate {
    pub fn new(forms: FormMatcher, postags: LabelSet, deprels: LabelSet) -> Result<Self, RuleError> {
        if forms == FormMatcher::Any && postags.is_any() && deprels.is_any() {
            return Err(RuleError::UnconstrainedTrigger);
        }
        Ok(TriggerPredicate {
            forms,
            postags,
            deprels,
        })
    }
}

/// Whether `token` satisfies the trigger's form, tag and dependency
/// constraints.
pub fn matches(trigger: &TriggerPredicate, token: &TaggedToken, lex: &LexiconBundle) -> bool {
    let form_ok = match &trigger.forms {
        FormMatcher::Any => true,
        FormMatcher::List(kind) => lex.in_list(*kind, &token.form),
        FormMatcher::Patterns(ps) => {
            let lower = token.form.to_lowercase();
            ps.iter().any(|p| p.is_match(&lower))
        }
    };
    form_ok && trigger.postags.contains(&token.upos) && trigger.deprels.contains(&token.deprel)
}

/// A candidate set of nodes an operation may affect, relative to its
/// destination node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ScopeCandidate {
    Dest,
    /// Leftmost dependent with this dependency type.
    Branch(String),
    /// The `n` closest dependents right of the trigger.
    RightChildren(usize),
    /// The `n` closest dependents left of the trigger.
    LeftChildren(usize),
    /// Closest subjective dependent right of the trigger.
    SubjRight,
    /// Closest subjective dependent left of the trigger.
    SubjLeft,
}

impl fmt::Display for ScopeCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScopeCandidate::Dest => f.write_str("dest"),
            ScopeCandidate::Branch(d) => write!(f, "branch:{d}"),
            ScopeCandidate::RightChildren(n) => write!(f, "rc:{n}"),
            ScopeCandidate::LeftChildren(n) => write!(f, "lc:{n}"),
            ScopeCandidate::SubjRight => f.write_str("subjr"),
            ScopeCandidate::SubjLeft => f.write_str("subjl"),
        }
    }
}

impl FromStr for ScopeCandidate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let count = |n: &str| match n.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(format!("scope {s:?} needs a positive count")),
        };
        match s.split_once(':') {
            None => match s {
                "dest" => Ok(ScopeCandidate::Dest),
                "subjr" => Ok(ScopeCandidate::SubjRight),
                "subjl" => Ok(ScopeCandidate::SubjLeft),
                _ => Err(format!("unknown scope kind {s:?}")),
            },
            Some(("branch", d)) if !d.trim().is_empty() => {
                Ok(ScopeCandidate::Branch(d.trim().to_lowercase()))
            }
            Some(("rc", n)) => count(n).map(ScopeCandidate::RightChildren),
            Some(("lc", n)) => count(n).map(ScopeCandidate::LeftChildren),
            _ => Err(format!("unknown scope kind {s:?}")),
        }
    }
}

/// A compositional operation as authored.
#[derive(Debug, Clone, PartialEq)]
pub struct OperationSpec {
    pub name: String,
    pub transform: TransformSpec,
    pub trigger: TriggerPredicate,
    /// Levels to ascend from the trigger before applying.
    pub levels_up: usize,
    /// Larger runs first.
    pub priority: i32,
    /// Tried in order; the first one selecting a subjective node wins.
    pub scopes: Vec<ScopeCandidate>,
}

impl OperationSpec {
    /// The transformation amount for an instance triggered by `token`, or
    /// `None` when the lexicon has no weight for it.
    pub fn bind_amount(&self, token: &TaggedToken, lex: &LexiconBundle) -> Option<f64> {
        match (self.transform.amount, self.transform.kind) {
            (Amount::Literal(a), _) => Some(a),
            (Amount::FromLexicon, TransformKind::Weighting) => lex.lookup_beta(&token.form),
            (Amount::FromLexicon, TransformKind::Shift) => Some(lex.negation_alpha(&token.form)),
        }
    }
}

/// An operation that has been triggered and is travelling up the tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperationInstance {
    /// Index into the rule set the analysis runs with.
    pub spec: usize,
    pub priority: i32,
    pub amount: f64,
    pub trigger: NodeId,
    pub remaining: usize,
    /// Creation order within one sentence analysis.
    pub seq: u64,
}

/// Keeps the operations named in `names`, in rule-set order.
pub fn select_rules(rules: &[OperationSpec], names: &[&str]) -> Result<Vec<OperationSpec>, RuleError> {
    if let Some(missing) = names.iter().find(|n| !rules.iter().any(|r| r.name == **n)) {
        return Err(RuleError::UnknownOperation(missing.to_string()));
    }
    Ok(rules
        .iter()
        .filter(|r| names.contains(&r.name.as_str()))
        .cloned()
        .collect())
}
