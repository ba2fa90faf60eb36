//! Predecessor operators and attractor fixpoints.
//!
//! Three attractor flavours share one backward-worklist engine:
//!
//! * the classical attractor (zero or more moves, target included),
//! * the monotone attractor (one or more moves, only through nodes of
//!   color at least `c`, target kept external),
//! * the permissive monotone attractor (as monotone, but target members
//!   pass the color guard regardless of their color).
//!
//! A monotone attractor that contains its own target is *fatal*: the
//! whole attractor is won by the player of the target's parity.

use thiserror::Error;

use crate::game::{Player, StrategyFragment};
use crate::node_set::NodeSet;
use crate::view::GameView;

/// Rank of nodes that are not part of an attraction outcome.
pub const RANK_NONE: u32 = u32::MAX;

/// Result of an attractor computation: the attracted set, the attracting
/// player's strategy on it, and per-node ranks (the fixpoint round in
/// which each node entered).
#[derive(Debug, Clone)]
pub struct AttractionOutcome {
    pub set: NodeSet,
    pub strategy: StrategyFragment,
    pub rank: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttractMode {
    /// Zero or more moves; the target seeds the result at rank 0.
    Classical,
    /// One or more moves through nodes of color at least the bound.
    Monotone(u32),
    /// Monotone, except target members always pass the color guard.
    Permissive(u32),
}

impl AttractMode {
    fn includes_target(self) -> bool {
        matches!(self, AttractMode::Classical)
    }

    fn admits(self, view: &GameView, target: &NodeSet, v: u32) -> bool {
        match self {
            AttractMode::Classical => true,
            AttractMode::Monotone(c) => view.game().color(v) >= c,
            AttractMode::Permissive(c) => view.game().color(v) >= c || target.contains(v),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AttractorError {
    #[error("target node {node} has color {color}, parity differs from player {player}")]
    MixedParity { node: u32, color: u32, player: Player },
}

/// Nodes from which `player` can force reaching `target` in exactly one
/// move: its own nodes with an alive edge into the target, plus opponent
/// nodes whose alive successors all lie in the target.
pub fn control_predecessor(view: &GameView, player: Player, target: &NodeSet) -> NodeSet {
    one_move_predecessor(view, player, target, target, AttractMode::Classical)
}

/// One round of the monotone predecessor: as [`control_predecessor`]
/// toward `accumulated or target`, restricted to nodes of color at least
/// `min_color`.
pub fn monotone_predecessor(
    view: &GameView,
    player: Player,
    accumulated: &NodeSet,
    target: &NodeSet,
    min_color: u32,
) -> NodeSet {
    let mut goal = accumulated.clone();
    goal.union_with(target);
    one_move_predecessor(view, player, &goal, target, AttractMode::Monotone(min_color))
}

/// One round of the permissive monotone predecessor: the color guard also
/// admits members of the target set.
pub fn permissive_monotone_predecessor(
    view: &GameView,
    player: Player,
    accumulated: &NodeSet,
    target: &NodeSet,
    min_color: u32,
) -> NodeSet {
    let mut goal = accumulated.clone();
    goal.union_with(target);
    one_move_predecessor(view, player, &goal, target, AttractMode::Permissive(min_color))
}

fn one_move_predecessor(
    view: &GameView,
    player: Player,
    goal: &NodeSet,
    target: &NodeSet,
    mode: AttractMode,
) -> NodeSet {
    let mut result = NodeSet::new(view.game().node_count());
    for v in view.alive().iter() {
        if !mode.admits(view, target, v) {
            continue;
        }
        let admitted = if view.game().owner(v) == player {
            view.successors(v).any(|w| goal.contains(w))
        } else {
            view.successors(v).all(|w| goal.contains(w))
        };
        if admitted {
            result.insert(v);
        }
    }
    result
}

/// Classical attractor for `player` to `target` (zero or more moves).
/// The target is part of the result; strategy moves are produced for the
/// player's nodes outside the target.
pub fn attractor(view: &GameView, player: Player, target: &NodeSet) -> AttractionOutcome {
    attract_engine(view, player, target, AttractMode::Classical)
}

/// Monotone attractor for `player` to `target` through colors `>=
/// min_color` (one or more moves; target external). Members of the target
/// appear in the result only when they are themselves attracted.
pub fn monotone_attractor(
    view: &GameView,
    player: Player,
    target: &NodeSet,
    min_color: u32,
) -> AttractionOutcome {
    attract_engine(view, player, target, AttractMode::Monotone(min_color))
}

/// Permissive monotone attractor; returns the attracted set only.
pub fn permissive_monotone_attractor(
    view: &GameView,
    player: Player,
    target: &NodeSet,
    min_color: u32,
) -> NodeSet {
    attract_engine(view, player, target, AttractMode::Permissive(min_color)).set
}

/// Is the attraction fatal, i.e. does the result contain its own target?
/// An empty target is vacuously fatal; callers must treat it as "skip".
pub fn is_fatal(target: &NodeSet, outcome: &AttractionOutcome) -> bool {
    target.is_subset_of(&outcome.set)
}

/// True iff `player` cannot force the play out of `set`: the player's own
/// nodes have all alive successors inside, and every opponent node keeps
/// at least one alive successor inside.
pub fn is_trap(view: &GameView, player: Player, set: &NodeSet) -> bool {
    debug_assert!(set.is_subset_of(view.alive()));
    set.iter().all(|v| {
        if view.game().owner(v) == player {
            view.successors(v).all(|w| set.contains(w))
        } else {
            view.successors(v).any(|w| set.contains(w))
        }
    })
}

/// The staged permissive attractor over increasing color layers of one
/// parity. All target nodes must have `player`'s parity. Layer `d` runs
/// over `d = parity, parity+2, ..., max color in target`, attracting to
/// the previous layer's result joined with the target nodes of color at
/// most `d`. An empty target yields the empty set.
pub fn layered_attractor(
    view: &GameView,
    player: Player,
    target: &NodeSet,
) -> Result<NodeSet, AttractorError> {
    let n = view.game().node_count();
    for v in target.iter() {
        let color = view.game().color(v);
        if Player::of_color(color) != player {
            return Err(AttractorError::MixedParity { node: v, color, player });
        }
    }
    let Some(top) = target.iter().map(|v| view.game().color(v)).max() else {
        return Ok(NodeSet::new(n));
    };

    let mut accumulated = NodeSet::new(n);
    let mut layer = player.index() as u32;
    while layer <= top {
        let mut goal = accumulated.clone();
        for v in target.iter() {
            if view.game().color(v) <= layer {
                goal.insert(v);
            }
        }
        if !goal.is_empty() {
            accumulated = attract_engine(view, player, &goal, AttractMode::Permissive(layer)).set;
        }
        layer += 2;
    }
    Ok(accumulated)
}

/// Backward worklist with per-node counters of alive successors not yet
/// attracted; counters are rebuilt per call so recursion never sees stale
/// state. Ranks are breadth-first rounds; the strategy picks, among
/// qualifying successors, the one of minimal rank then minimal id.
fn attract_engine(
    view: &GameView,
    player: Player,
    target: &NodeSet,
    mode: AttractMode,
) -> AttractionOutcome {
    let game = view.game();
    let n = game.node_count();
    debug_assert!(target.is_subset_of(view.alive()));

    let mut members = if mode.includes_target() { target.clone() } else { NodeSet::new(n) };
    let mut rank = vec![RANK_NONE; n as usize];
    let mut strategy = StrategyFragment::new(player, n);

    if target.is_empty() {
        return AttractionOutcome { set: members, strategy, rank };
    }

    // pending[v]: alive successors of v not yet announced as attracted.
    let mut pending = vec![0u32; n as usize];
    for v in view.alive().iter() {
        if game.owner(v) != player {
            pending[v as usize] = view.out_degree(v) as u32;
        }
    }

    if mode.includes_target() {
        for v in target.iter() {
            rank[v as usize] = 0;
        }
    }

    // Every node is announced at most once: targets up front, other
    // members when they first enter.
    let mut announced = target.clone();
    let mut frontier: Vec<u32> = target.iter().collect();
    let mut next: Vec<u32> = Vec::new();
    let mut round = 0u32;

    while !frontier.is_empty() {
        round += 1;
        next.clear();
        for &u in &frontier {
            for v in view.predecessors(u) {
                let qualifies = if game.owner(v) == player {
                    true
                } else {
                    pending[v as usize] -= 1;
                    pending[v as usize] == 0
                };
                if qualifies && !members.contains(v) && mode.admits(view, target, v) {
                    members.insert(v);
                    rank[v as usize] = round;
                    next.push(v);
                }
            }
        }
        frontier.clear();
        for &v in &next {
            if announced.insert(v) {
                frontier.push(v);
            }
        }
    }

    // Moves: toward the target (rank 0) or a member of strictly smaller
    // rank; minimal rank first, minimal id as tie break.
    for v in members.iter() {
        if game.owner(v) != player || (mode.includes_target() && target.contains(v)) {
            continue;
        }
        let mut best: Option<(u32, u32)> = None;
        for w in view.successors(v) {
            let move_rank = if target.contains(w) {
                0
            } else if members.contains(w) {
                rank[w as usize]
            } else {
                continue;
            };
            if best.is_none_or(|b| (move_rank, w) < b) {
                best = Some((move_rank, w));
            }
        }
        let (move_rank, w) = best.expect("attracted player node has a qualifying successor");
        debug_assert!(move_rank < rank[v as usize]);
        strategy.set(v, w);
    }

    AttractionOutcome { set: members, strategy, rank }
}

/// Structural validator for an [`AttractionOutcome`]: checks the rank and
/// strategy invariant of every member. Used by tests and debug builds.
pub fn check_outcome(
    view: &GameView,
    player: Player,
    target: &NodeSet,
    mode: AttractMode,
    outcome: &AttractionOutcome,
) -> Result<(), String> {
    let game = view.game();
    let move_rank = |w: u32| -> Option<u32> {
        if target.contains(w) {
            Some(0)
        } else if outcome.set.contains(w) {
            Some(outcome.rank[w as usize])
        } else {
            None
        }
    };

    for v in game.nodes() {
        let member = outcome.set.contains(v);
        if member != (outcome.rank[v as usize] != RANK_NONE) {
            return Err(format!("rank map inconsistent at node {v}"));
        }
        if !member {
            if outcome.strategy.get(v).is_some() {
                return Err(format!("strategy move at non-member {v}"));
            }
            continue;
        }
        if !view.is_alive(v) {
            return Err(format!("dead node {v} attracted"));
        }
        if !mode.admits(view, target, v) && !(mode.includes_target() && target.contains(v)) {
            return Err(format!("node {v} violates the color guard"));
        }
        if mode.includes_target() && target.contains(v) {
            if outcome.rank[v as usize] != 0 {
                return Err(format!("target node {v} has nonzero rank"));
            }
            continue;
        }
        let v_rank = outcome.rank[v as usize];
        if game.owner(v) == player {
            let Some(w) = outcome.strategy.get(v) else {
                return Err(format!("missing strategy move at {v}"));
            };
            if !view.edge_alive(v, w) {
                return Err(format!("strategy move ({v},{w}) is not an alive edge"));
            }
            match move_rank(w) {
                Some(r) if r < v_rank => {}
                _ => return Err(format!("strategy move ({v},{w}) does not decrease rank")),
            }
        } else {
            for w in view.successors(v) {
                match move_rank(w) {
                    Some(r) if r < v_rank => {}
                    _ => {
                        return Err(format!(
                            "opponent node {v} has successor {w} outside lower ranks"
                        ))
                    }
                }
            }
        }
    }
    Ok(())
}
