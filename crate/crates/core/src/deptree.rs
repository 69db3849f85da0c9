//! Dependency trees over tagged sentences.
//!
//! A [`DepSentence`] holds the words `1..=n` of a sentence plus an implicit
//! dummy root at node `0`. Sentences are read from (and written to)
//! CoNLL-X / CoNLL-U style text.

use std::fmt;

use thiserror::Error;

/// Index of a node in a [`DepSentence`]. Node `0` is the dummy root.
pub type NodeId = usize;

/// The dummy root.
pub const ROOT: NodeId = 0;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("token {position} has index {found}, expected {expected}")]
    NonContiguous {
        position: usize,
        expected: usize,
        found: usize,
    },
    #[error("token {index} is its own head")]
    SelfLoop { index: usize },
    #[error("token {index} has head {head}, outside 0..={len}")]
    HeadOutOfRange { index: usize, head: usize, len: usize },
    #[error("token {index} is on a cycle that never reaches the root")]
    Cycle { index: usize },
    #[error("token {index} has an empty {field} field")]
    EmptyField { index: usize, field: &'static str },
    #[error("token index must be at least 1")]
    ZeroIndex,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConllError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("sentence {sentence} (starting at line {line}): {source}")]
    Tree {
        sentence: usize,
        line: usize,
        #[source]
        source: TreeError,
    },
}

/// One word of a tagged, parsed sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedToken {
    pub index: usize,
    pub form: String,
    pub lemma: Option<String>,
    /// Universal PoS tag, stored uppercase.
    pub upos: String,
    pub head: NodeId,
    /// Dependency type, stored lowercase.
    pub deprel: String,
}

impl TaggedToken {
    pub fn new(
        index: usize,
        form: impl Into<String>,
        upos: impl AsRef<str>,
        head: NodeId,
        deprel: impl AsRef<str>,
    ) -> Self {
        TaggedToken {
            index,
            form: form.into(),
            lemma: None,
            upos: upos.as_ref().to_uppercase(),
            head,
            deprel: deprel.as_ref().to_lowercase(),
        }
    }

    pub fn with_lemma(mut self, lemma: impl Into<String>) -> Self {
        self.lemma = Some(lemma.into());
        self
    }
}

/// A set of node indices, kept sorted and free of duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct NodeSet(Vec<NodeId>);

impl NodeSet {
    pub fn empty() -> Self {
        NodeSet(Vec::new())
    }

    pub fn singleton(node: NodeId) -> Self {
        NodeSet(vec![node])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.0.binary_search(&node).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.0
    }
}

impl FromIterator<NodeId> for NodeSet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        let mut nodes: Vec<NodeId> = iter.into_iter().collect();
        nodes.sort_unstable();
        nodes.dedup();
        NodeSet(nodes)
    }
}

impl<'a> IntoIterator for &'a NodeSet {
    type Item = &'a NodeId;
    type IntoIter = std::slice::Iter<'a, NodeId>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// A tagged sentence with a validated dependency tree rooted at node 0.
///
/// Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepSentence {
    comments: Vec<String>,
    tokens: Vec<TaggedToken>,
    // children[h] lists the dependents of node h in ascending order.
    children: Vec<Vec<NodeId>>,
}

impl DepSentence {
    pub fn new(tokens: Vec<TaggedToken>) -> Result<Self, TreeError> {
        Self::with_comments(Vec::new(), tokens)
    }

    /// Builds a sentence carrying the comment lines (without the leading `#`)
    /// that preceded it in the source file.
    pub fn with_comments(comments: Vec<String>, tokens: Vec<TaggedToken>) -> Result<Self, TreeError> {
        let n = tokens.len();
        for (pos, tok) in tokens.iter().enumerate() {
            if tok.index == 0 {
                return Err(TreeError::ZeroIndex);
            }
            if tok.index != pos + 1 {
                return Err(TreeError::NonContiguous {
                    position: pos + 1,
                    expected: pos + 1,
                    found: tok.index,
                });
            }
            if tok.head == tok.index {
                return Err(TreeError::SelfLoop { index: tok.index });
            }
            if tok.head > n {
                return Err(TreeError::HeadOutOfRange {
                    index: tok.index,
                    head: tok.head,
                    len: n,
                });
            }
            if tok.upos.is_empty() {
                return Err(TreeError::EmptyField {
                    index: tok.index,
                    field: "upos",
                });
            }
            if tok.deprel.is_empty() {
                return Err(TreeError::EmptyField {
                    index: tok.index,
                    field: "deprel",
                });
            }
        }

        // 0 = unknown, 1 = on current path, 2 = reaches root
        let mut state = vec![0u8; n + 1];
        state[ROOT] = 2;
        let mut path = Vec::new();
        for start in 1..=n {
            let mut cur = start;
            while state[cur] == 0 {
                state[cur] = 1;
                path.push(cur);
                cur = tokens[cur - 1].head;
            }
            if state[cur] == 1 {
                return Err(TreeError::Cycle { index: cur });
            }
            for node in path.drain(..) {
                state[node] = 2;
            }
        }

        let mut children = vec![Vec::new(); n + 1];
        for tok in &tokens {
            children[tok.head].push(tok.index);
        }

        Ok(DepSentence {
            comments,
            tokens,
            children,
        })
    }

    /// Number of words (node 0 excluded).
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Number of nodes including the dummy root.
    pub fn node_count(&self) -> usize {
        self.tokens.len() + 1
    }

    pub fn tokens(&self) -> &[TaggedToken] {
        &self.tokens
    }

    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    /// The token at node `i`, or `None` for the root and out-of-range nodes.
    pub fn token(&self, i: NodeId) -> Option<&TaggedToken> {
        i.checked_sub(1).and_then(|k| self.tokens.get(k))
    }

    pub fn head(&self, i: NodeId) -> Option<NodeId> {
        self.token(i).map(|t| t.head)
    }

    /// Surface form for display; the root renders as `ROOT`.
    pub fn form(&self, i: NodeId) -> &str {
        self.token(i).map_or("ROOT", |t| t.form.as_str())
    }

    /// The node reached by walking `delta` arcs up from `i`, if any.
    pub fn ancestor(&self, i: NodeId, delta: usize) -> NodeSet {
        let mut cur = i;
        for _ in 0..delta {
            match self.head(cur) {
                Some(h) => cur = h,
                None => return NodeSet::empty(),
            }
        }
        NodeSet::singleton(cur)
    }

    /// Dependents of `i`, ascending.
    pub fn children(&self, i: NodeId) -> &[NodeId] {
        self.children.get(i).map_or(&[], Vec::as_slice)
    }

    pub fn children_set(&self, i: NodeId) -> NodeSet {
        NodeSet(self.children(i).to_vec())
    }

    /// The leftmost dependent of `i` attached with `deprel`.
    pub fn lm_branch(&self, i: NodeId, deprel: &str) -> NodeSet {
        let wanted = deprel.to_lowercase();
        self.children(i)
            .iter()
            .copied()
            .find(|&c| self.tokens[c - 1].deprel == wanted)
            .map_or_else(NodeSet::empty, NodeSet::singleton)
    }

    /// Post-order over all nodes: children before heads, siblings left to
    /// right, node 0 last.
    pub fn postorder(&self) -> Vec<NodeId> {
        let mut order = Vec::with_capacity(self.node_count());
        let mut stack: Vec<(NodeId, usize)> = vec![(ROOT, 0)];
        while let Some(top) = stack.last_mut() {
            let (node, next) = *top;
            if let Some(&child) = self.children[node].get(next) {
                top.1 += 1;
                stack.push((child, 0));
            } else {
                order.push(node);
                stack.pop();
            }
        }
        order
    }

    /// Serializes as a 10-column CoNLL-U block (no trailing blank line).
    pub fn to_conll(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for DepSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.comments {
            writeln!(f, "#{c}")?;
        }
        for t in &self.tokens {
            writeln!(
                f,
                "{}\t{}\t{}\t{}\t_\t_\t{}\t{}\t_\t_",
                t.index,
                t.form,
                t.lemma.as_deref().unwrap_or("_"),
                t.upos,
                t.head,
                t.deprel
            )?;
        }
        Ok(())
    }
}

/// Serializes sentences as CoNLL-U, each block followed by a blank line.
pub fn write_conll(sentences: &[DepSentence]) -> String {
    let mut out = String::new();
    for s in sentences {
        out.push_str(&s.to_conll());
        out.push('\n');
    }
    out
}

/// Parses CoNLL-X / CoNLL-U text into sentences.
///
/// Token lines are tab-separated (whitespace is accepted when a line has no
/// tab). Lines with 8 or more columns use the standard layout
/// `ID FORM LEMMA UPOS XPOS FEATS HEAD DEPREL ...`; 6-column lines use the
/// compact layout `ID FORM LEMMA UPOS HEAD DEPREL`. Multiword-token ranges
/// (`1-2`) and empty nodes (`1.1`) are skipped.
pub fn parse_conll(text: &str) -> Result<Vec<DepSentence>, ConllError> {
    let mut sentences = Vec::new();
    let mut comments = Vec::new();
    let mut tokens = Vec::new();
    let mut block_start = 0;

    let mut flush = |comments: &mut Vec<String>,
                     tokens: &mut Vec<TaggedToken>,
                     block_start: usize|
     -> Result<(), ConllError> {
        if tokens.is_empty() {
            // A comment-only block belongs to the next sentence.
            return Ok(());
        }
        let sentence = DepSentence::with_comments(std::mem::take(comments), std::mem::take(tokens)).map_err(
            |source| ConllError::Tree {
                sentence: sentences.len() + 1,
                line: block_start,
                source,
            },
        )?;
        sentences.push(sentence);
        Ok(())
    };

    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            flush(&mut comments, &mut tokens, block_start)?;
            continue;
        }
        if tokens.is_empty() && comments.is_empty() {
            block_start = line_no;
        }
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.to_string());
            continue;
        }
        if let Some(tok) = parse_token_line(line, line_no)? {
            tokens.push(tok);
        }
    }
    flush(&mut comments, &mut tokens, block_start)?;
    Ok(sentences)
}

fn parse_token_line(line: &str, line_no: usize) -> Result<Option<TaggedToken>, ConllError> {
    let malformed = |message: String| ConllError::Malformed {
        line: line_no,
        message,
    };
    let cols: Vec<&str> = if line.contains('\t') {
        line.split('\t').collect()
    } else {
        line.split_whitespace().collect()
    };

    let id = cols[0].trim();
    if id.contains('-') || id.contains('.') {
        return Ok(None);
    }
    let (upos, head, deprel) = match cols.len() {
        n if n >= 8 => (cols[3], cols[6], cols[7]),
        6 => (cols[3], cols[4], cols[5]),
        n => return Err(malformed(format!("expected 6 or at least 8 columns, found {n}"))),
    };
    let index: usize = id
        .parse()
        .map_err(|_| malformed(format!("invalid token id {id:?}")))?;
    let head: usize = head
        .trim()
        .parse()
        .map_err(|_| malformed(format!("invalid head {head:?}")))?;
    let upos = upos.trim();
    let deprel = deprel.trim();
    if upos.is_empty() || upos == "_" {
        return Err(malformed("missing PoS tag".into()));
    }
    if deprel.is_empty() || deprel == "_" {
        return Err(malformed("missing dependency type".into()));
    }
    let lemma = match cols[2] {
        "_" | "" => None,
        l => Some(l.to_string()),
    };
    Ok(Some(TaggedToken {
        index,
        form: cols[1].to_string(),
        lemma,
        upos: upos.to_uppercase(),
        head,
        deprel: deprel.to_lowercase(),
    }))
}
