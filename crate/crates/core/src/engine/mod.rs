//! Propagation of semantic orientation up a dependency tree.
//!
//! Every word starts with its lexicon orientation. Nodes are then visited in
//! post-order. At each node, operations triggered by the node itself and
//! operations travelling up from its children are queued; those that have
//! reached their destination are applied in priority order, and finally the
//! node's orientation absorbs the orientations of its children. The
//! orientation left at the dummy root is the sentence orientation.

mod trace;

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use thiserror::Error;

use crate::deptree::{DepSentence, NodeId, ROOT};
use crate::lexicon::LexiconBundle;
use crate::ruleset::{apply_transform, matches, resolve_scope, OperationInstance, OperationSpec};

pub use trace::{
    fmt_so, AnalysisTrace, ExpireReason, InstanceView, QueueKind, SoChange, StepRow, TraceEvent,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("document has no sentences")]
    EmptyDocument,
}

/// Per-node orientations of one sentence, indexed `0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SoState(Vec<f64>);

impl SoState {
    pub fn zeros(nodes: usize) -> Self {
        SoState(vec![0.0; nodes])
    }

    /// Wraps explicit values; `values[0]` belongs to the dummy root.
    pub fn from_values(values: Vec<f64>) -> Self {
        SoState(values)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Index<NodeId> for SoState {
    type Output = f64;

    fn index(&self, i: NodeId) -> &f64 {
        &self.0[i]
    }
}

/// Lexicon orientation of every word; the root starts at 0.
pub fn init_so(s: &DepSentence, lex: &LexiconBundle) -> SoState {
    let mut values = Vec::with_capacity(s.node_count());
    values.push(0.0);
    values.extend(s.tokens().iter().map(|t| lex.lookup_so(&t.form, &t.upos)));
    SoState(values)
}

// Max-heap order: higher priority first, then earlier creation.
#[derive(Debug, Clone, Copy)]
struct Queued(OperationInstance);

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Queued {}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .priority
            .cmp(&other.0.priority)
            .then_with(|| other.0.seq.cmp(&self.0.seq))
    }
}

/// The two priority queues held at a node: operations to apply here, and
/// operations to forward to the parent.
#[derive(Debug, Clone, Default)]
pub struct NodeQueues {
    apply: BinaryHeap<Queued>,
    forward: BinaryHeap<Queued>,
}

impl NodeQueues {
    /// Contents of the apply queue in pop order.
    pub fn apply_queue(&self) -> Vec<OperationInstance> {
        sorted(&self.apply)
    }

    /// Contents of the forward queue in pop order.
    pub fn forward_queue(&self) -> Vec<OperationInstance> {
        sorted(&self.forward)
    }
}

fn sorted(heap: &BinaryHeap<Queued>) -> Vec<OperationInstance> {
    let mut v: Vec<Queued> = heap.iter().copied().collect();
    v.sort_by(|a, b| b.cmp(a));
    v.into_iter().map(|q| q.0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    /// Positive only for a strictly positive orientation.
    pub fn from_so(so: f64) -> Self {
        if so > 0.0 {
            Polarity::Positive
        } else {
            Polarity::Negative
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Polarity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_lowercase().as_str() {
            "positive" | "pos" => Ok(Polarity::Positive),
            "negative" | "neg" => Ok(Polarity::Negative),
            other => Err(format!("unknown polarity {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SentenceResult {
    pub so: f64,
    /// Orientations after the traversal.
    pub state: SoState,
    pub trace: AnalysisTrace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocumentResult {
    pub sentences: Vec<SentenceResult>,
    pub so: f64,
    pub polarity: Polarity,
}

impl DocumentResult {
    /// `id<TAB>so<TAB>polarity<TAB>sentence SOs (comma-separated)`.
    pub fn record(&self, id: &str) -> String {
        let per: Vec<String> = self.sentences.iter().map(|s| fmt_so(s.so)).collect();
        format!("{id}\t{}\t{}\t{}", fmt_so(self.so), self.polarity, per.join(","))
    }
}

/// Runs a rule set over sentences with a fixed lexicon.
#[derive(Debug, Clone, Copy)]
pub struct Engine<'r> {
    rules: &'r [OperationSpec],
    lex: &'r LexiconBundle,
}

impl<'r> Engine<'r> {
    pub fn new(rules: &'r [OperationSpec], lex: &'r LexiconBundle) -> Self {
        Engine { rules, lex }
    }

    pub fn rules(&self) -> &'r [OperationSpec] {
        self.rules
    }

    pub fn analyze_sentence(&self, s: &DepSentence) -> SentenceResult {
        self.analyze_with_state(s, init_so(s, self.lex))
    }

    /// Runs the traversal from explicit starting orientations.
    pub fn analyze_with_state(&self, s: &DepSentence, init: SoState) -> SentenceResult {
        let mut run = self.start(s, init);
        for i in s.postorder() {
            run.compute_node(i);
        }
        run.finish()
    }

    /// Sets up a traversal that the caller drives node by node.
    pub fn start<'s>(&self, s: &'s DepSentence, init: SoState) -> SentenceAnalysis<'s, 'r> {
        assert_eq!(init.len(), s.node_count(), "state size must match the sentence");
        SentenceAnalysis {
            engine: *self,
            sentence: s,
            state: init,
            queues: vec![NodeQueues::default(); s.node_count()],
            trace: AnalysisTrace::default(),
            next_seq: 0,
        }
    }

    pub fn analyze_document(&self, sentences: &[DepSentence]) -> Result<DocumentResult, EngineError> {
        if sentences.is_empty() {
            return Err(EngineError::EmptyDocument);
        }
        let results: Vec<SentenceResult> = sentences.iter().map(|s| self.analyze_sentence(s)).collect();
        let mut so = 0.0;
        for r in &results {
            so += r.so;
        }
        Ok(DocumentResult {
            sentences: results,
            so,
            polarity: Polarity::from_so(so),
        })
    }
}

pub fn analyze_sentence(s: &DepSentence, rules: &[OperationSpec], lex: &LexiconBundle) -> SentenceResult {
    Engine::new(rules, lex).analyze_sentence(s)
}

pub fn analyze_document(
    sentences: &[DepSentence],
    rules: &[OperationSpec],
    lex: &LexiconBundle,
) -> Result<DocumentResult, EngineError> {
    Engine::new(rules, lex).analyze_document(sentences)
}

/// One sentence in the middle of a traversal.
pub struct SentenceAnalysis<'s, 'r> {
    engine: Engine<'r>,
    sentence: &'s DepSentence,
    state: SoState,
    queues: Vec<NodeQueues>,
    trace: AnalysisTrace,
    next_seq: u64,
}

impl SentenceAnalysis<'_, '_> {
    pub fn state(&self) -> &SoState {
        &self.state
    }

    pub fn queues(&self, i: NodeId) -> &NodeQueues {
        &self.queues[i]
    }

    pub fn trace(&self) -> &AnalysisTrace {
        &self.trace
    }

    /// Processes node `i`. Its children must already have been processed.
    pub fn compute_node(&mut self, i: NodeId) {
        let s = self.sentence;
        let Engine { rules, lex } = self.engine;
        self.trace.push(TraceEvent::NodeVisited {
            node: i,
            form: s.form(i).to_string(),
        });

        // Operations triggered here.
        if let Some(tok) = s.token(i) {
            for (k, spec) in rules.iter().enumerate() {
                if !matches(&spec.trigger, tok, lex) {
                    continue;
                }
                let Some(amount) = spec.bind_amount(tok, lex) else {
                    continue;
                };
                let inst = OperationInstance {
                    spec: k,
                    priority: spec.priority,
                    amount,
                    trigger: i,
                    remaining: spec.levels_up,
                    seq: self.next_seq,
                };
                self.next_seq += 1;
                self.enqueue(i, inst);
            }
        }

        // Operations coming up from the children.
        for &c in s.children(i) {
            let mut pending = std::mem::take(&mut self.queues[c].forward);
            while let Some(Queued(mut inst)) = pending.pop() {
                inst.remaining -= 1;
                self.enqueue(i, inst);
            }
        }

        self.trace.push(TraceEvent::QueuesReady {
            node: i,
            form: s.form(i).to_string(),
            apply: self.views(&self.queues[i].apply_queue()),
            forward: self.views(&self.queues[i].forward_queue()),
            so: self.state[i],
        });

        // Operations whose destination is this node.
        while let Some(Queued(inst)) = self.queues[i].apply.pop() {
            let spec = &rules[inst.spec];
            let view = self.view(&inst);
            let res = resolve_scope(&spec.scopes, s, i, inst.trigger, self.state.as_slice());
            match res.candidate {
                None => self.trace.push(TraceEvent::Expired {
                    instance: view,
                    reason: ExpireReason::NoMatchingScope,
                }),
                Some(k) => {
                    let changes = res
                        .nodes
                        .iter()
                        .map(|j| {
                            let before = self.state.0[j];
                            let after = apply_transform(spec.transform.kind, inst.amount, before);
                            self.state.0[j] = after;
                            SoChange {
                                node: j,
                                before,
                                after,
                            }
                        })
                        .collect();
                    self.trace.push(TraceEvent::Applied {
                        instance: view,
                        scope: spec.scopes[k].clone(),
                        changes,
                    });
                }
            }
        }

        // Join.
        let before = self.state[i];
        let mut sum = 0.0;
        let mut contributions = Vec::with_capacity(s.children(i).len());
        for &c in s.children(i) {
            sum += self.state[c];
            contributions.push((c, self.state[c]));
        }
        let after = before + sum;
        self.state.0[i] = after;
        self.trace.push(TraceEvent::Join {
            node: i,
            before,
            contributions,
            after,
        });

        if i == ROOT {
            let mut left = std::mem::take(&mut self.queues[ROOT].forward);
            while let Some(Queued(inst)) = left.pop() {
                let view = self.view(&inst);
                self.trace.push(TraceEvent::Expired {
                    instance: view,
                    reason: ExpireReason::AscendedPastRoot,
                });
            }
        }
    }

    pub fn finish(self) -> SentenceResult {
        SentenceResult {
            so: self.state[ROOT],
            state: self.state,
            trace: self.trace,
        }
    }

    fn enqueue(&mut self, i: NodeId, inst: OperationInstance) {
        let queue = if inst.remaining == 0 {
            self.queues[i].apply.push(Queued(inst));
            QueueKind::Apply
        } else {
            self.queues[i].forward.push(Queued(inst));
            QueueKind::Forward
        };
        let instance = self.view(&inst);
        self.trace.push(TraceEvent::Enqueued {
            node: i,
            instance,
            queue,
        });
    }

    fn view(&self, inst: &OperationInstance) -> InstanceView {
        InstanceView {
            op: self.engine.rules[inst.spec].name.clone(),
            trigger: inst.trigger,
            trigger_form: self.sentence.form(inst.trigger).to_string(),
            remaining: inst.remaining,
            priority: inst.priority,
            seq: inst.seq,
        }
    }

    fn views(&self, insts: &[OperationInstance]) -> Vec<InstanceView> {
        insts.iter().map(|i| self.view(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deptree::{parse_conll, TaggedToken};
    use crate::lexicon::{SentimentEntry, WordList, WordListKind};
    use crate::ruleset::{builtin_rule_pack, NEGATION};

    fn fixture_lex() -> LexiconBundle {
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("testdata");
        LexiconBundle::from_manifest(dir.join("lexicon.manifest")).unwrap()
    }

    fn running() -> DepSentence {
        parse_conll(include_str!("../../testdata/running_example.conllu"))
            .unwrap()
            .remove(0)
    }

    #[test]
    fn init_from_lexicon() {
        let s = running();
        let st = init_so(&s, &fixture_lex());
        for i in 0..s.node_count() {
            let want = match s.form(i) {
                "handsome" => 4.0,
                "like" => 1.0,
                _ => 0.0,
            };
            assert_eq!(st[i], want, "{}", s.form(i));
        }
        assert!(init_so(&s, &LexiconBundle::new())
            .as_slice()
            .iter()
            .all(|&v| v == 0.0));
    }

    #[test]
    fn emoticon_sentence() {
        let s = DepSentence::new(vec![TaggedToken::new(1, ":)", "SYM", 0, "root")]).unwrap();
        let st = init_so(&s, &fixture_lex());
        assert_eq!(st.as_slice(), &[0.0, 1.0]);
    }

    #[test]
    fn running_example_steps() {
        let s = running();
        let lex = fixture_lex();
        let rules = builtin_rule_pack();
        let engine = Engine::new(&rules, &lex);
        let mut run = engine.start(&s, init_so(&s, &lex));
        let order = s.postorder();
        for &i in &order[..2] {
            run.compute_node(i);
        }
        // after "not"
        let q = run.queues(3).forward_queue();
        assert_eq!(q.len(), 1);
        assert_eq!(
            (rules[q[0].spec].name.as_str(), q[0].remaining, q[0].priority),
            (NEGATION, 1, 2)
        );
        assert_eq!(run.state()[3], 0.0);

        run.compute_node(4);
        run.compute_node(5);
        assert_eq!(run.state()[5], 5.0);

        for &i in &order[4..] {
            run.compute_node(i);
        }
        let res = run.finish();
        assert!((res.so - 1.90).abs() < 1e-9);
        assert!((res.state[5] - 0.75).abs() < 1e-12);
        assert!((res.state[14] - 1.15).abs() < 1e-12);
    }

    #[test]
    fn negated_verb() {
        // I do n't hate it
        let s = parse_conll(
            "1\tI\tI\tPRON\t4\tnsubj\n2\tdo\tdo\tAUX\t4\taux\n3\tn't\tnot\tPART\t4\tneg\n\
             4\thate\thate\tVERB\t0\troot\n5\tit\tit\tPRON\t4\tdobj\n",
        )
        .unwrap()
        .remove(0);
        let mut lex = fixture_lex();
        lex.add_sentiment([SentimentEntry::new("hate", Some("VERB"), -4.0)])
            .unwrap();
        let rules = builtin_rule_pack();
        let res = analyze_sentence(&s, &rules, &lex);
        assert_eq!(res.so, 0.0);
        let applied: Vec<_> = res
            .trace
            .events()
            .iter()
            .filter_map(|e| match e {
                TraceEvent::Applied { scope, changes, .. } => Some((scope.to_string(), changes.clone())),
                _ => None,
            })
            .collect();
        assert_eq!(
            applied,
            vec![(
                "dest".to_string(),
                vec![SoChange {
                    node: 4,
                    before: -4.0,
                    after: 0.0
                }]
            )]
        );
    }

    #[test]
    fn no_rules_is_a_plain_sum() {
        let s = running();
        let lex = fixture_lex();
        let res = analyze_sentence(&s, &[], &lex);
        assert_eq!(res.so, 5.0);
    }

    #[test]
    fn past_root_instances_expire() {
        // "if" with two levels up, attached directly to the root word
        let s = DepSentence::new(vec![
            TaggedToken::new(1, "if", "SCONJ", 2, "mark"),
            TaggedToken::new(2, "good", "ADJ", 0, "root"),
        ])
        .unwrap();
        let mut lex = LexiconBundle::new();
        lex.set_word_list(WordListKind::Irrealis, WordList::from_terms(["if"]));
        lex.add_sentiment([SentimentEntry::new("good", None, 3.0)])
            .unwrap();
        let rules = builtin_rule_pack();
        let res = analyze_sentence(&s, &rules, &lex);
        // dest is the root: subjr finds "good" (index 2 > 1) and cancels it
        assert_eq!(res.so, 0.0);

        let deep = DepSentence::new(vec![TaggedToken::new(1, "if", "SCONJ", 0, "mark")]).unwrap();
        let res = analyze_sentence(&deep, &rules, &lex);
        assert!(res.trace.events().iter().any(|e| matches!(
            e,
            TraceEvent::Expired {
                reason: ExpireReason::AscendedPastRoot,
                ..
            }
        )));
    }

    #[test]
    fn document_aggregation() {
        let lex = fixture_lex();
        let mk = |form: &str| DepSentence::new(vec![TaggedToken::new(1, form, "ADJ", 0, "root")]).unwrap();
        let doc = analyze_document(&[mk("handsome")], &[], &lex).unwrap();
        assert_eq!((doc.so, doc.polarity), (4.0, Polarity::Positive));

        let mut lex2 = LexiconBundle::new();
        lex2.add_sentiment([
            SentimentEntry::new("a", None, 2.0),
            SentimentEntry::new("b", None, -3.5),
            SentimentEntry::new("c", None, 1.0),
            SentimentEntry::new("d", None, -1.0),
        ])
        .unwrap();
        let doc = analyze_document(&[mk("a"), mk("b")], &[], &lex2).unwrap();
        assert_eq!((doc.so, doc.polarity), (-1.5, Polarity::Negative));
        let doc = analyze_document(&[mk("c"), mk("d")], &[], &lex2).unwrap();
        assert_eq!((doc.so, doc.polarity), (0.0, Polarity::Negative));
        assert_eq!(doc.record("d1"), "d1\t0.00\tnegative\t1.00,-1.00");

        assert_eq!(analyze_document(&[], &[], &lex2), Err(EngineError::EmptyDocument));
    }

    #[test]
    fn polarity_strings() {
        assert_eq!("Positive".parse::<Polarity>(), Ok(Polarity::Positive));
        assert_eq!("neg".parse::<Polarity>(), Ok(Polarity::Negative));
        assert!("neutral".parse::<Polarity>().is_err());
    }
}
