//! Stagewise computation of the rejected sets `F_0, F_1, ...` over a
//! fragment.

use serde::Serialize;
use thiserror::Error;

use super::fragment::{Fragment, Node, NodeId};

/// One stage: `true` at the sentences it rejects.
pub type Stage = Vec<bool>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageFamily {
    pub stages: Vec<Stage>,
    /// The first `a` with `F_{a+1} = F_a`. The family ends at `F_{a+1}`.
    pub stabilized_at: usize,
}

impl StageFamily {
    pub fn last(&self) -> &Stage {
        self.stages.last().expect("a family has at least one stage")
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.iter().filter(|b| **b).count()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SaturationError {
    #[error("sentence {sentence} left the rejected set at stage {stage}")]
    NotMonotone { stage: usize, sentence: NodeId },
    #[error("no fixpoint after {limit} stages")]
    IterationLimit { limit: usize },
}

/// Evaluates one sentence at the current stage. Lower levels of `current`
/// are already final; `previous` is the stage before, absent for `F_0`.
fn rejected(node: &Node, previous: Option<&Stage>, current: &Stage) -> bool {
    let before = |i: NodeId| previous.is_some_and(|p| p[i]);
    match node {
        Node::Bot => true,
        Node::Mem(inst) => inst.is_some_and(before),
        Node::Box(a) => before(*a),
        Node::Eq(pairs) => pairs.iter().any(|(a, b)| before(*a) != before(*b)),
        Node::And(a, b) => current[*a] || current[*b],
        Node::Or(a, b) => current[*a] && current[*b],
        Node::Forall(xs) => xs.iter().any(|x| current[*x]),
        Node::Exists(xs) => xs.iter().all(|x| current[*x]),
        Node::Imp(a, b) => current[*b] && !current[*a],
    }
}

/// Computes the next stage. Sentences are visited level by level, and
/// within a level in the order given.
pub fn saturation_step(fragment: &Fragment, previous: Option<&Stage>, order: &[NodeId]) -> Stage {
    let mut current = vec![false; fragment.len()];
    for &id in order {
        let node = &fragment.nodes[id];
        let sticky = previous.is_some_and(|p| p[id]) && matches!(node, Node::Eq(_) | Node::Imp(..));
        current[id] = sticky || rejected(node, previous, &current);
    }
    current
}

/// Sentence ids sorted by level, stable with respect to `within`.
pub fn level_order(fragment: &Fragment, within: &[NodeId]) -> Vec<NodeId> {
    let mut order = within.to_vec();
    order.sort_by_key(|&id| fragment.levels[id]);
    order
}

pub fn saturate(fragment: &Fragment) -> Result<StageFamily, SaturationError> {
    let ids: Vec<NodeId> = (0..fragment.len()).collect();
    saturate_in_order(fragment, &ids)
}

/// Saturates visiting each level's sentences in the order they appear in
/// `within`, which must list every sentence once.
pub fn saturate_in_order(fragment: &Fragment, within: &[NodeId]) -> Result<StageFamily, SaturationError> {
    assert_eq!(within.len(), fragment.len(), "order must cover the fragment");
    let order = level_order(fragment, within);
    let limit = fragment.len() + 2;
    let mut stages = vec![saturation_step(fragment, None, &order)];
    loop {
        let previous = stages.last().unwrap();
        let next = saturation_step(fragment, Some(previous), &order);
        if let Some(sentence) = (0..next.len()).find(|&i| previous[i] && !next[i]) {
            return Err(SaturationError::NotMonotone {
                stage: stages.len(),
                sentence,
            });
        }
        let done = next == *previous;
        stages.push(next);
        if done {
            let stabilized_at = stages.len() - 2;
            return Ok(StageFamily { stages, stabilized_at });
        }
        if stages.len() > limit {
            return Err(SaturationError::IterationLimit { limit });
        }
    }
}
