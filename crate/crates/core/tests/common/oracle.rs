//! A literal, unoptimised interpreter of the node procedure, used to check
//! the engine. It shares no traversal, queueing or scope code with the
//! library: children are found by scanning heads, queues are plain vectors
//! searched linearly on every pop, and scopes are rebuilt by enumeration.

use depsent::ruleset::{Amount, FormMatcher, FormPattern, LabelSet, TransformKind};
use depsent::{DepSentence, LexiconBundle, OperationSpec, ScopeCandidate};

#[derive(Clone, Debug)]
struct Op {
    spec: usize,
    delta: usize,
    priority: i32,
    seq: u64,
    trigger: usize,
    amount: f64,
}

struct Tree {
    heads: Vec<usize>, // heads[0] unused
    forms: Vec<String>,
    tags: Vec<String>,
    deps: Vec<String>,
}

impl Tree {
    fn new(s: &DepSentence) -> Tree {
        let mut t = Tree {
            heads: vec![usize::MAX],
            forms: vec![String::new()],
            tags: vec![String::new()],
            deps: vec![String::new()],
        };
        for tok in s.tokens() {
            t.heads.push(tok.head);
            t.forms.push(tok.form.clone());
            t.tags.push(tok.upos.clone());
            t.deps.push(tok.deprel.clone());
        }
        t
    }

    fn n(&self) -> usize {
        self.heads.len() - 1
    }

    fn children(&self, i: usize) -> Vec<usize> {
        (1..=self.n()).filter(|&j| self.heads[j] == i).collect()
    }

    fn postorder(&self, i: usize, out: &mut Vec<usize>) {
        for c in self.children(i) {
            self.postorder(c, out);
        }
        out.push(i);
    }
}

fn label_ok(set: &LabelSet, label: &str) -> bool {
    match set {
        LabelSet::Any => true,
        LabelSet::Only(v) => v.iter().any(|l| l.to_lowercase() == label.to_lowercase()),
    }
}

fn triggers(spec: &OperationSpec, t: &Tree, i: usize, lex: &LexiconBundle) -> bool {
    if i == 0 {
        return false;
    }
    let form = t.forms[i].to_lowercase();
    let form_ok = match &spec.trigger.forms {
        FormMatcher::Any => true,
        FormMatcher::List(kind) => lex.in_list(*kind, &form),
        FormMatcher::Patterns(ps) => ps.iter().any(|p| match p {
            FormPattern::Literal(l) => *l == form,
            FormPattern::Regex(re) => re.is_match(&form),
        }),
    };
    form_ok && label_ok(&spec.trigger.postags, &t.tags[i]) && label_ok(&spec.trigger.deprels, &t.deps[i])
}

fn amount(spec: &OperationSpec, form: &str, lex: &LexiconBundle) -> Option<f64> {
    match spec.transform.amount {
        Amount::Literal(a) => Some(a),
        Amount::FromLexicon => match spec.transform.kind {
            TransformKind::Weighting => lex.lookup_beta(form),
            TransformKind::Shift => Some(lex.negation_alpha(form)),
        },
    }
}

fn tau(kind: TransformKind, amount: f64, sigma: f64) -> f64 {
    match kind {
        TransformKind::Shift if sigma > 0.0 => sigma - amount,
        TransformKind::Shift if sigma < 0.0 => sigma + amount,
        TransformKind::Shift => sigma,
        TransformKind::Weighting => sigma * (1.0 + amount),
    }
}

/// The nodes a single candidate selects, by enumeration over all nodes.
pub fn candidate_set(
    heads_of: &dyn Fn(usize) -> Option<usize>,
    deprel_of: &dyn Fn(usize) -> String,
    n: usize,
    cand: &ScopeCandidate,
    dest: usize,
    trigger: usize,
    sigma: &[f64],
) -> Vec<usize> {
    let kids: Vec<usize> = (1..=n).filter(|&j| heads_of(j) == Some(dest)).collect();
    let right: Vec<usize> = kids.iter().copied().filter(|&j| j > trigger).collect();
    let left: Vec<usize> = kids.iter().copied().filter(|&j| j < trigger).collect();
    let mut out = match cand {
        ScopeCandidate::Dest => vec![dest],
        ScopeCandidate::Branch(d) => kids
            .iter()
            .copied()
            .filter(|&j| deprel_of(j) == *d)
            .min()
            .into_iter()
            .collect(),
        ScopeCandidate::RightChildren(k) => right.iter().copied().take(*k).collect(),
        ScopeCandidate::LeftChildren(k) => left.iter().rev().copied().take(*k).collect(),
        ScopeCandidate::SubjRight => right
            .iter()
            .copied()
            .filter(|&j| sigma[j] != 0.0)
            .min()
            .into_iter()
            .collect(),
        ScopeCandidate::SubjLeft => left
            .iter()
            .copied()
            .filter(|&j| sigma[j] != 0.0)
            .max()
            .into_iter()
            .collect(),
    };
    out.sort_unstable();
    out
}

fn scope(spec: &OperationSpec, t: &Tree, dest: usize, trigger: usize, sigma: &[f64]) -> Vec<usize> {
    let heads_of = |j: usize| (j >= 1 && j <= t.n()).then(|| t.heads[j]);
    let deprel_of = |j: usize| t.deps[j].clone();
    for cand in &spec.scopes {
        let set = candidate_set(&heads_of, &deprel_of, t.n(), cand, dest, trigger, sigma);
        if set.iter().any(|&j| sigma[j] != 0.0) {
            return set;
        }
    }
    Vec::new()
}

fn pop(q: &mut Vec<Op>) -> Op {
    let mut best = 0;
    for k in 1..q.len() {
        let (a, b) = (&q[k], &q[best]);
        if a.priority > b.priority || (a.priority == b.priority && a.seq < b.seq) {
            best = k;
        }
    }
    q.remove(best)
}

/// Sentence orientation computed by the naive interpreter.
pub fn naive_sentence_so(s: &DepSentence, specs: &[OperationSpec], lex: &LexiconBundle, init: &[f64]) -> f64 {
    let t = Tree::new(s);
    let mut sigma = init.to_vec();
    let mut a: Vec<Vec<Op>> = vec![Vec::new(); t.n() + 1];
    let mut q: Vec<Vec<Op>> = vec![Vec::new(); t.n() + 1];
    let mut seq = 0u64;

    let mut order = Vec::new();
    t.postorder(0, &mut order);

    for i in order {
        a[i] = Vec::new();
        q[i] = Vec::new();
        for (k, o) in specs.iter().enumerate() {
            if triggers(o, &t, i, lex) {
                let Some(amt) = amount(o, &t.forms[i], lex) else {
                    continue;
                };
                let op = Op {
                    spec: k,
                    delta: o.levels_up,
                    priority: o.priority,
                    seq,
                    trigger: i,
                    amount: amt,
                };
                seq += 1;
                if op.delta > 0 {
                    q[i].push(op);
                } else {
                    a[i].push(op);
                }
            }
        }
        for c in t.children(i) {
            for o in q[c].clone() {
                let moved = Op {
                    delta: o.delta - 1,
                    ..o
                };
                if moved.delta == 0 {
                    a[i].push(moved);
                } else {
                    q[i].push(moved);
                }
            }
        }
        while !a[i].is_empty() {
            let o = pop(&mut a[i]);
            let spec = &specs[o.spec];
            for j in scope(spec, &t, i, o.trigger, &sigma) {
                sigma[j] = tau(spec.transform.kind, o.amount, sigma[j]);
            }
        }
        let mut sum = 0.0;
        for c in t.children(i) {
            sum += sigma[c];
        }
        sigma[i] += sum;
    }
    sigma[0]
}
