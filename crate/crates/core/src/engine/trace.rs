use std::fmt::{self, Write as _};

use crate::deptree::NodeId;
use crate::ruleset::ScopeCandidate;

/// Formats an orientation with at least two and at most six decimals.
pub fn fmt_so(so: f64) -> String {
    let so = if so == 0.0 { 0.0 } else { so };
    let mut s = format!("{so:.6}");
    while s.ends_with('0') && s.len() - s.find('.').unwrap_or(0) > 3 {
        s.pop();
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceView {
    pub op: String,
    pub trigger: NodeId,
    pub trigger_form: String,
    pub remaining: usize,
    pub priority: i32,
    pub seq: u64,
}

impl fmt::Display for InstanceView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}({},{})",
            self.op, self.trigger_form, self.remaining, self.priority
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueueKind {
    /// To be applied at the node holding it.
    Apply,
    /// To be passed on to the parent.
    Forward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpireReason {
    NoMatchingScope,
    AscendedPastRoot,
}

impl fmt::Display for ExpireReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExpireReason::NoMatchingScope => "no matching scope",
            ExpireReason::AscendedPastRoot => "ascended past root",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoChange {
    pub node: NodeId,
    pub before: f64,
    pub after: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TraceEvent {
    NodeVisited {
        node: NodeId,
        form: String,
    },
    Enqueued {
        node: NodeId,
        instance: InstanceView,
        queue: QueueKind,
    },
    /// Queue contents and the node's orientation just before the apply
    /// queue is drained.
    QueuesReady {
        node: NodeId,
        form: String,
        apply: Vec<InstanceView>,
        forward: Vec<InstanceView>,
        so: f64,
    },
    Applied {
        instance: InstanceView,
        scope: ScopeCandidate,
        changes: Vec<SoChange>,
    },
    Expired {
        instance: InstanceView,
        reason: ExpireReason,
    },
    Join {
        node: NodeId,
        before: f64,
        contributions: Vec<(NodeId, f64)>,
        after: f64,
    },
}

/// One row of the per-node state table.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRow {
    pub step: usize,
    pub node: NodeId,
    pub form: String,
    pub apply: Vec<InstanceView>,
    pub forward: Vec<InstanceView>,
    pub so_before: f64,
    pub so_after: f64,
}

/// Append-only record of one sentence analysis.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AnalysisTrace {
    events: Vec<TraceEvent>,
}

impl AnalysisTrace {
    pub(crate) fn push(&mut self, e: TraceEvent) {
        self.events.push(e);
    }

    pub fn events(&self) -> &[TraceEvent] {
        &self.events
    }

    /// The state table: one row per visited node, root included.
    pub fn steps(&self) -> Vec<StepRow> {
        let mut rows: Vec<StepRow> = Vec::new();
        for e in &self.events {
            match e {
                TraceEvent::QueuesReady {
                    node,
                    form,
                    apply,
                    forward,
                    so,
                } => rows.push(StepRow {
                    step: rows.len() + 1,
                    node: *node,
                    form: form.clone(),
                    apply: apply.clone(),
                    forward: forward.clone(),
                    so_before: *so,
                    so_after: *so,
                }),
                TraceEvent::Join { node, after, .. } => {
                    if let Some(row) = rows.last_mut().filter(|r| r.node == *node) {
                        row.so_after = *after;
                    }
                }
                _ => {}
            }
        }
        rows
    }

    /// Renders the state table with aligned columns.
    pub fn render_table(&self) -> String {
        let list = |v: &[InstanceView]| {
            let items: Vec<String> = v.iter().map(ToString::to_string).collect();
            format!("[{}]", items.join(", "))
        };
        let mut cells: Vec<[String; 6]> = vec![[
            "Step".into(),
            "Word_index".into(),
            "A".into(),
            "Q".into(),
            "σ".into(),
            "σ←A".into(),
        ]];
        for r in self.steps() {
            cells.push([
                r.step.to_string(),
                format!("{}_{}", r.form, r.node),
                list(&r.apply),
                list(&r.forward),
                fmt_so(r.so_before),
                fmt_so(r.so_after),
            ]);
        }
        let mut widths = [0usize; 6];
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        for row in &cells {
            let mut line = String::new();
            for (k, (c, w)) in row.iter().zip(widths).enumerate() {
                if k > 0 {
                    line.push_str("  ");
                }
                line.push_str(c);
                line.extend(std::iter::repeat_n(' ', w - c.chars().count()));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }

    /// Renders every event, one per line.
    pub fn render_events(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            let _ = match e {
                TraceEvent::NodeVisited { node, form } => writeln!(out, "visit {form}_{node}"),
                TraceEvent::Enqueued {
                    node,
                    instance,
                    queue,
                } => {
                    let q = match queue {
                        QueueKind::Apply => "A",
                        QueueKind::Forward => "Q",
                    };
                    writeln!(out, "  enqueue {instance} -> {q}_{node}")
                }
                TraceEvent::QueuesReady { .. } => Ok(()),
                TraceEvent::Applied {
                    instance,
                    scope,
                    changes,
                } => {
                    let ch: Vec<String> = changes
                        .iter()
                        .map(|c| format!("{}: {} -> {}", c.node, fmt_so(c.before), fmt_so(c.after)))
                        .collect();
                    writeln!(out, "  apply {instance} scope={scope} [{}]", ch.join("; "))
                }
                TraceEvent::Expired { instance, reason } => {
                    writeln!(out, "  expire {instance} ({reason})")
                }
                TraceEvent::Join {
                    node,
                    before,
                    contributions,
                    after,
                } => {
                    let parts: Vec<String> = contributions
                        .iter()
                        .map(|(c, v)| format!("{c}:{}", fmt_so(*v)))
                        .collect();
                    writeln!(
                        out,
                        "  join {node}: {} + [{}] = {}",
                        fmt_so(*before),
                        parts.join(", "),
                        fmt_so(*after)
                    )
                }
            };
        }
        out
    }
}
