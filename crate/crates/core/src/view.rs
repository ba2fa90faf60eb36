//! Live sub-games: an alive-node mask plus an edge-removal overlay on an
//! immutable [`Game`].
//!
//! Solvers never copy a game. They clone views, which costs one bit mask
//! and the (usually empty) removed-edge list, and shrink the mask as
//! regions are decided.

use std::fmt;

use thiserror::Error;

use crate::game::Game;
use crate::node_set::NodeSet;

fn edge_key(src: u32, dst: u32) -> u64 {
    (src as u64) << 32 | dst as u64
}

/// A sorted set of removed edges.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct EdgeSet {
    keys: Vec<u64>,
}

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet::default()
    }

    pub fn contains(&self, src: u32, dst: u32) -> bool {
        self.keys.binary_search(&edge_key(src, dst)).is_ok()
    }

    /// Returns true if the edge was newly inserted.
    pub fn insert(&mut self, src: u32, dst: u32) -> bool {
        match self.keys.binary_search(&edge_key(src, dst)) {
            Ok(_) => false,
            Err(pos) => {
                self.keys.insert(pos, edge_key(src, dst));
                true
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.keys.iter().map(|&k| ((k >> 32) as u32, k as u32))
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ViewError {
    #[error("node {node} would have no alive successor")]
    DeadEnd { node: u32 },
    #[error("({src},{dst}) is not an alive edge of the view")]
    NotAnEdge { src: u32, dst: u32 },
    #[error("removing ({src},{dst}) would strand node {src}")]
    LastSuccessor { src: u32, dst: u32 },
    #[error("node {node} is not alive in the view")]
    NotAlive { node: u32 },
}

/// A sub-game of a [`Game`]: the alive nodes plus removed edges.
///
/// Invariant: every alive node has at least one alive, non-removed
/// successor, so a view is always a valid parity game (possibly empty).
#[derive(Clone, PartialEq, Eq)]
pub struct GameView<'a> {
    game: &'a Game,
    alive: NodeSet,
    removed: EdgeSet,
}

impl<'a> GameView<'a> {
    /// The whole game as a view.
    pub fn full(game: &'a Game) -> GameView<'a> {
        GameView { game, alive: NodeSet::full(game.node_count()), removed: EdgeSet::new() }
    }

    /// The view with the given alive set and no removed edges. Fails if
    /// some alive node loses all its successors.
    pub fn subgame(game: &'a Game, alive: NodeSet) -> Result<GameView<'a>, ViewError> {
        GameView { game, alive, removed: EdgeSet::new() }.validated()
    }

    /// Shrinks this view's alive set, keeping the removed-edge overlay.
    pub fn restricted(&self, alive: NodeSet) -> Result<GameView<'a>, ViewError> {
        debug_assert!(alive.is_subset_of(&self.alive));
        GameView { game: self.game, alive, removed: self.removed.clone() }.validated()
    }

    /// Like [`GameView::restricted`] but only checks the sub-game property
    /// in debug builds. For use where the property is guaranteed to hold.
    pub(crate) fn restricted_unchecked(&self, alive: NodeSet) -> GameView<'a> {
        debug_assert!(alive.is_subset_of(&self.alive));
        let view = GameView { game: self.game, alive, removed: self.removed.clone() };
        debug_assert_eq!(view.validate(), Ok(()));
        view
    }

    pub(crate) fn shrink_in_place(&mut self, dead: &NodeSet) {
        self.alive.subtract(dead);
        debug_assert_eq!(self.validate(), Ok(()));
    }

    pub fn game(&self) -> &'a Game {
        self.game
    }

    pub fn alive(&self) -> &NodeSet {
        &self.alive
    }

    pub fn alive_count(&self) -> usize {
        self.alive.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alive.is_empty()
    }

    pub fn is_alive(&self, v: u32) -> bool {
        self.alive.contains(v)
    }

    pub fn removed_edges(&self) -> &EdgeSet {
        &self.removed
    }

    pub fn edge_alive(&self, src: u32, dst: u32) -> bool {
        self.alive.contains(src)
            && self.alive.contains(dst)
            && self.game.has_edge(src, dst)
            && !self.removed.contains(src, dst)
    }

    /// Alive successors of `v`, ascending.
    pub fn successors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        debug_assert!(self.is_alive(v));
        self.game
            .successors(v)
            .iter()
            .copied()
            .filter(move |&w| self.alive.contains(w) && !self.removed.contains(v, w))
    }

    /// Alive predecessors of `v`, ascending.
    pub fn predecessors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.game
            .predecessors(v)
            .iter()
            .copied()
            .filter(move |&u| self.alive.contains(u) && !self.removed.contains(u, v))
    }

    pub fn out_degree(&self, v: u32) -> usize {
        self.successors(v).count()
    }

    /// Distinct alive colors, ascending.
    pub fn colors(&self) -> Vec<u32> {
        let mut cs: Vec<u32> = self.alive.iter().map(|v| self.game.color(v)).collect();
        cs.sort_unstable();
        cs.dedup();
        cs
    }

    pub fn max_color(&self) -> Option<u32> {
        self.alive.iter().map(|v| self.game.color(v)).max()
    }

    /// Alive nodes of one color.
    pub fn nodes_of_color(&self, c: u32) -> NodeSet {
        NodeSet::from_nodes(
            self.game.node_count(),
            self.alive.iter().filter(|&v| self.game.color(v) == c),
        )
    }

    /// Checks the sub-game property for every alive node.
    pub fn validate(&self) -> Result<(), ViewError> {
        for v in self.alive.iter() {
            if self.successors(v).next().is_none() {
                return Err(ViewError::DeadEnd { node: v });
            }
        }
        Ok(())
    }

    fn validated(self) -> Result<GameView<'a>, ViewError> {
        self.validate()?;
        Ok(self)
    }

    /// Removes one edge. The source must keep at least one successor;
    /// losing the last one signals a caller bug.
    pub fn remove_edge(&self, src: u32, dst: u32) -> Result<GameView<'a>, ViewError> {
        let mut view = self.clone();
        view.remove_edge_in_place(src, dst)?;
        Ok(view)
    }

    pub fn remove_edge_in_place(&mut self, src: u32, dst: u32) -> Result<(), ViewError> {
        if !self.edge_alive(src, dst) {
            return Err(ViewError::NotAnEdge { src, dst });
        }
        if self.out_degree(src) < 2 {
            return Err(ViewError::LastSuccessor { src, dst });
        }
        self.removed.insert(src, dst);
        Ok(())
    }

    /// Makes the game deterministic at `src`: removes every alive edge
    /// `(src, w)` with `w != dst`, leaving `dst` as the only successor.
    pub fn fix_edge(&self, src: u32, dst: u32) -> Result<GameView<'a>, ViewError> {
        if !self.edge_alive(src, dst) {
            return Err(ViewError::NotAnEdge { src, dst });
        }
        let mut view = self.clone();
        let others: Vec<u32> = self.successors(src).filter(|&w| w != dst).collect();
        for w in others {
            view.removed.insert(src, w);
        }
        Ok(view)
    }
}

impl fmt::Debug for GameView<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GameView(alive: {:?}, removed: {:?})", self.alive, self.removed)
    }
}

/// Spec-level constructor: the sub-game of `g` induced by `alive`.
pub fn subgame_view(game: &Game, alive: NodeSet) -> Result<GameView<'_>, ViewError> {
    GameView::subgame(game, alive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{NodeData, Player};

    fn diamond() -> Game {
        // 0 -> 1,2 ; 1 -> 3 ; 2 -> 3 ; 3 -> 0
        Game::new(vec![
            NodeData::new(Player::Even, 0, vec![1, 2]),
            NodeData::new(Player::Odd, 1, vec![3]),
            NodeData::new(Player::Even, 2, vec![3]),
            NodeData::new(Player::Odd, 3, vec![0]),
        ])
        .unwrap()
    }

    #[test]
    fn full_view_equals_game() {
        let g = diamond();
        let v = GameView::full(&g);
        assert_eq!(v.alive_count(), 4);
        assert_eq!(v.successors(0).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(v.predecessors(3).collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn subgame_rejects_dead_end() {
        let g = diamond();
        let err = GameView::subgame(&g, NodeSet::from_nodes(4, [1, 2])).unwrap_err();
        assert!(matches!(err, ViewError::DeadEnd { .. }));
    }

    #[test]
    fn remove_edge_is_an_overlay() {
        let g = diamond();
        let v = GameView::full(&g);
        let v2 = v.remove_edge(0, 1).unwrap();
        assert_eq!(v2.successors(0).collect::<Vec<_>>(), vec![2]);
        assert_eq!(v2.predecessors(1).collect::<Vec<_>>(), Vec::<u32>::new());
        // the original view is untouched, owners/colors/alive unchanged
        assert_eq!(v.successors(0).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(v2.alive(), v.alive());
        // removing the last successor is refused
        assert_eq!(
            v2.remove_edge(0, 2).unwrap_err(),
            ViewError::LastSuccessor { src: 0, dst: 2 }
        );
    }

    #[test]
    fn fixture_examples_for_views_and_surgery() {
        let g1 = crate::pgsolver::parse_pgsolver(include_str!("../test-data/g1.gm")).unwrap();
        // {v3, v5, v7} is a sub-game; the whole game is one; {v0} is not
        let ok = GameView::subgame(&g1, NodeSet::from_nodes(12, [3, 5, 7])).unwrap();
        assert_eq!(ok.successors(5).collect::<Vec<_>>(), vec![3, 7]);
        let full = GameView::subgame(&g1, NodeSet::full(12)).unwrap();
        assert_eq!(full, GameView::full(&g1));
        assert_eq!(
            GameView::subgame(&g1, NodeSet::from_nodes(12, [0])).unwrap_err(),
            ViewError::DeadEnd { node: 0 }
        );

        // dropping (v10,v11) leaves v10 with v9 only
        let pruned = full.remove_edge(10, 11).unwrap();
        assert_eq!(pruned.successors(10).collect::<Vec<_>>(), vec![9]);

        let g7 = crate::pgsolver::parse_pgsolver(include_str!("../test-data/g7.gm")).unwrap();
        let v7 = GameView::full(&g7);
        assert_eq!(v7.remove_edge(4, 3).unwrap().successors(4).collect::<Vec<_>>(), vec![5]);
        assert_eq!(v7.fix_edge(4, 3).unwrap().successors(4).collect::<Vec<_>>(), vec![3]);
        assert_eq!(v7.fix_edge(1, 0).unwrap().successors(1).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn fix_edge_keeps_only_target() {
        let g = diamond();
        let v = GameView::full(&g);
        let fixed = v.fix_edge(0, 2).unwrap();
        assert_eq!(fixed.successors(0).collect::<Vec<_>>(), vec![2]);
        // fixing at an out-degree-1 node changes nothing
        let same = fixed.fix_edge(1, 3).unwrap();
        assert_eq!(same, fixed);
        // a non-edge is refused
        assert!(matches!(v.fix_edge(1, 0), Err(ViewError::NotAnEdge { .. })));
    }
}
