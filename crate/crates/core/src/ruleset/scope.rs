use crate::deptree::{DepSentence, NodeId, NodeSet};

use super::ScopeCandidate;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScopeResolution {
    /// Position in the candidate list of the scope that matched.
    pub candidate: Option<usize>,
    pub nodes: NodeSet,
}

/// Picks the first candidate scope that selects at least one node with a
/// non-zero orientation, and returns every node it selects.
///
/// `sigma` is indexed by node. When nothing matches the resolution is empty
/// and the operation has no effect.
pub fn resolve_scope(
    scopes: &[ScopeCandidate],
    s: &DepSentence,
    dest: NodeId,
    trigger: NodeId,
    sigma: &[f64],
) -> ScopeResolution {
    for (k, cand) in scopes.iter().enumerate() {
        let nodes = candidate_nodes(cand, s, dest, trigger, sigma);
        if nodes.iter().any(|j| sigma[j] != 0.0) {
            return ScopeResolution {
                candidate: Some(k),
                nodes,
            };
        }
    }
    ScopeResolution {
        candidate: None,
        nodes: NodeSet::empty(),
    }
}

fn candidate_nodes(
    cand: &ScopeCandidate,
    s: &DepSentence,
    dest: NodeId,
    trigger: NodeId,
    sigma: &[f64],
) -> NodeSet {
    let children = s.children(dest);
    match cand {
        ScopeCandidate::Dest => NodeSet::singleton(dest),
        ScopeCandidate::Branch(d) => s.lm_branch(dest, d),
        ScopeCandidate::RightChildren(n) => children
            .iter()
            .copied()
            .filter(|&j| j > trigger)
            .take(*n)
            .collect(),
        ScopeCandidate::LeftChildren(n) => children
            .iter()
            .rev()
            .copied()
            .filter(|&j| j < trigger)
            .take(*n)
            .collect(),
        ScopeCandidate::SubjRight => children
            .iter()
            .copied()
            .find(|&j| j > trigger && sigma[j] != 0.0)
            .map_or_else(NodeSet::empty, NodeSet::singleton),
        ScopeCandidate::SubjLeft => children
            .iter()
            .rev()
            .copied()
            .find(|&j| j < trigger && sigma[j] != 0.0)
            .map_or_else(NodeSet::empty, NodeSet::singleton),
    }
}
