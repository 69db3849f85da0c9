//! Reading and writing the XML rule format.
//!
//! ```xml
//! <operations>
//!   <operation name="intensification">
//!     <forms list="intensifiers"/>
//!     <postags>ADV,ADJ</postags>
//!     <dependency>advmod,amod,nmod</dependency>
//!     <rule type="weighting" amount="lexicon"/>
//!     <levelsup>1</levelsup>
//!     <priority>3</priority>
//!     <scope>dest,branch:acomp</scope>
//!   </operation>
//! </operations>
//! ```
//!
//! `forms` holds comma-separated literals and `/regex/` items, `*`, or a
//! `list` attribute naming a lexicon word list. `postags` and `dependency`
//! accept `*` as the wildcard.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use roxmltree::{Document, Node};

use crate::lexicon::{LexiconBundle, WordListKind};

use super::{
    Amount, FormMatcher, FormPattern, LabelSet, OperationSpec, RuleError, ScopeCandidate, TransformKind,
    TransformSpec, TriggerPredicate,
};

const CHILDREN: [&str; 7] = [
    "forms",
    "postags",
    "dependency",
    "rule",
    "levelsup",
    "priority",
    "scope",
];

pub fn load_rules_xml(path: impl AsRef<Path>, lex: &LexiconBundle) -> Result<Vec<OperationSpec>, RuleError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| RuleError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_rules_xml(&text, Some(lex))
}

/// Parses a rule file. When `lex` is given, every referenced word list must
/// be present in it.
pub fn parse_rules_xml(text: &str, lex: Option<&LexiconBundle>) -> Result<Vec<OperationSpec>, RuleError> {
    let doc = Document::parse(text)?;
    let root = doc.root_element();
    if root.tag_name().name() != "operations" {
        return Err(schema(
            root.tag_name().name(),
            "root element must be <operations>",
        ));
    }
    let mut specs = Vec::new();
    for (k, op) in root.children().filter(Node::is_element).enumerate() {
        let path = format!("operations/{}[{}]", op.tag_name().name(), k + 1);
        if op.tag_name().name() != "operation" {
            return Err(schema(&path, "expected <operation>"));
        }
        specs.push(parse_operation(op, &path, k + 1, lex)?);
    }
    Ok(specs)
}

fn schema(path: &str, message: impl Into<String>) -> RuleError {
    RuleError::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

fn parse_operation(
    op: Node<'_, '_>,
    path: &str,
    ordinal: usize,
    lex: Option<&LexiconBundle>,
) -> Result<OperationSpec, RuleError> {
    let mut found: [Option<Node>; 7] = [None; 7];
    for child in op.children().filter(Node::is_element) {
        let name = child.tag_name().name();
        let cpath = format!("{path}/{name}");
        let slot = CHILDREN
            .iter()
            .position(|c| *c == name)
            .ok_or_else(|| schema(&cpath, "unknown element"))?;
        if found[slot].replace(child).is_some() {
            return Err(schema(&cpath, "element given more than once"));
        }
    }
    let get = |slot: usize| {
        found[slot].ok_or_else(|| schema(&format!("{path}/{}", CHILDREN[slot]), "missing element"))
    };
    let text_of = |node: Node| node.text().unwrap_or("").trim().to_string();

    let forms_node = get(0)?;
    let forms_path = format!("{path}/forms");
    let forms = match forms_node.attribute("list") {
        Some(list) => {
            let kind: WordListKind = list.parse().map_err(|m: String| schema(&forms_path, m))?;
            if let Some(lex) = lex {
                if !lex.has_list(kind) {
                    return Err(schema(
                        &forms_path,
                        format!("lexicon bundle has no {} list", kind.name()),
                    ));
                }
            }
            FormMatcher::List(kind)
        }
        None => parse_forms(&text_of(forms_node), &forms_path)?,
    };
    let postags = parse_labels(&text_of(get(1)?), true);
    let deprels = parse_labels(&text_of(get(2)?), false);

    let rule = get(3)?;
    let rule_path = format!("{path}/rule");
    let kind = match rule.attribute("type") {
        Some("shift") => TransformKind::Shift,
        Some("weighting") => TransformKind::Weighting,
        Some(other) => return Err(schema(&rule_path, format!("unknown rule type {other:?}"))),
        None => return Err(schema(&rule_path, "missing type attribute")),
    };
    let amount = match rule.attribute("amount") {
        Some("lexicon") => Amount::FromLexicon,
        Some(a) => a
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(Amount::Literal)
            .ok_or_else(|| schema(&rule_path, format!("invalid amount {a:?}")))?,
        None => return Err(schema(&rule_path, "missing amount attribute")),
    };

    let levels_up = text_of(get(4)?)
        .parse::<usize>()
        .map_err(|_| schema(&format!("{path}/levelsup"), "expected a non-negative integer"))?;
    let priority = text_of(get(5)?)
        .parse::<i32>()
        .map_err(|_| schema(&format!("{path}/priority"), "expected an integer"))?;

    let scope_path = format!("{path}/scope");
    let scopes = text_of(get(6)?)
        .split(',')
        .map(|s| s.parse::<ScopeCandidate>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|m| schema(&scope_path, m))?;

    let trigger = TriggerPredicate::new(forms, postags, deprels).map_err(|e| schema(path, e.to_string()))?;

    Ok(OperationSpec {
        name: op
            .attribute("name")
            .map_or_else(|| format!("operation{ordinal}"), str::to_string),
        transform: TransformSpec { kind, amount },
        trigger,
        levels_up,
        priority,
        scopes,
    })
}

fn parse_forms(text: &str, path: &str) -> Result<FormMatcher, RuleError> {
    if text == "*" {
        return Ok(FormMatcher::Any);
    }
    let mut patterns = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let pattern = match item.strip_prefix('/').and_then(|r| r.strip_suffix('/')) {
            Some(re) if item.len() >= 2 => FormPattern::regex(re).map_err(|source| RuleError::Regex {
                path: path.to_string(),
                pattern: re.to_string(),
                source,
            })?,
            _ => FormPattern::literal(item),
        };
        patterns.push(pattern);
    }
    if patterns.is_empty() {
        return Err(schema(path, "no forms given"));
    }
    Ok(FormMatcher::Patterns(patterns))
}

fn parse_labels(text: &str, upper: bool) -> LabelSet {
    if text == "*" || text.is_empty() {
        return LabelSet::Any;
    }
    let items = text.split(',').map(str::trim).filter(|s| !s.is_empty());
    if upper {
        LabelSet::tags(items)
    } else {
        LabelSet::deprels(items)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn labels(set: &LabelSet) -> String {
    match set {
        LabelSet::Any => "*".into(),
        LabelSet::Only(v) => v.join(","),
    }
}

/// Writes rules in the format [`parse_rules_xml`] reads.
pub fn rules_to_xml(rules: &[OperationSpec]) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<operations>\n");
    for r in rules {
        let _ = writeln!(out, "  <operation name=\"{}\">", escape(&r.name));
        match &r.trigger.forms {
            FormMatcher::Any => out.push_str("    <forms>*</forms>\n"),
            FormMatcher::List(kind) => {
                let _ = writeln!(out, "    <forms list=\"{}\"/>", kind.name());
            }
            FormMatcher::Patterns(ps) => {
                let items: Vec<String> = ps.iter().map(FormPattern::source).collect();
                let _ = writeln!(out, "    <forms>{}</forms>", escape(&items.join(",")));
            }
        }
        let _ = writeln!(
            out,
            "    <postags>{}</postags>",
            escape(&labels(&r.trigger.postags))
        );
        let _ = writeln!(
            out,
            "    <dependency>{}</dependency>",
            escape(&labels(&r.trigger.deprels))
        );
        let amount = match r.transform.amount {
            Amount::FromLexicon => "lexicon".to_string(),
            Amount::Literal(a) => a.to_string(),
        };
        let _ = writeln!(
            out,
            "    <rule type=\"{}\" amount=\"{amount}\"/>",
            r.transform.kind.name()
        );
        let _ = writeln!(out, "    <levelsup>{}</levelsup>", r.levels_up);
        let _ = writeln!(out, "    <priority>{}</priority>", r.priority);
        let scopes: Vec<String> = r.scopes.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "    <scope>{}</scope>", escape(&scopes.join(",")));
        out.push_str("  </operation>\n");
    }
    out.push_str("</operations>\n");
    out
}
