//! The parity-game data model: players, colors, and the immutable game graph.

use std::fmt;
use std::ops::{Index, IndexMut};

use thiserror::Error;

use crate::node_set::NodeSet;

/// One of the two players. Player 0 wins a play iff the minimal color seen
/// infinitely often is even, so we name the players after the parity they
/// are rooting for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    Even,
    Odd,
}

impl Player {
    /// The player of a color's parity: `c % 2`.
    pub fn of_color(color: u32) -> Player {
        if color.is_multiple_of(2) {
            Player::Even
        } else {
            Player::Odd
        }
    }

    pub fn opponent(self) -> Player {
        match self {
            Player::Even => Player::Odd,
            Player::Odd => Player::Even,
        }
    }

    /// 0 for player 0 (even), 1 for player 1 (odd).
    pub fn index(self) -> usize {
        match self {
            Player::Even => 0,
            Player::Odd => 1,
        }
    }

    pub fn from_index(index: usize) -> Player {
        match index {
            0 => Player::Even,
            1 => Player::Odd,
            _ => panic!("player index out of range: {index}"),
        }
    }

    pub fn both() -> [Player; 2] {
        [Player::Even, Player::Odd]
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// A pair of values indexed by player.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PerPlayer<T>([T; 2]);

impl<T> PerPlayer<T> {
    pub fn new(even: T, odd: T) -> Self {
        PerPlayer([even, odd])
    }

    pub fn from_fn(mut f: impl FnMut(Player) -> T) -> Self {
        PerPlayer([f(Player::Even), f(Player::Odd)])
    }

    pub fn as_array(&self) -> &[T; 2] {
        &self.0
    }
}

impl<T> Index<Player> for PerPlayer<T> {
    type Output = T;
    fn index(&self, p: Player) -> &T {
        &self.0[p.index()]
    }
}

impl<T> IndexMut<Player> for PerPlayer<T> {
    fn index_mut(&mut self, p: Player) -> &mut T {
        &mut self.0[p.index()]
    }
}

pub(crate) const NO_NODE: u32 = u32::MAX;

/// A partial memoryless strategy: a move for some of one player's nodes.
#[derive(Clone, PartialEq, Eq)]
pub struct StrategyFragment {
    player: Player,
    moves: Vec<u32>,
}

impl StrategyFragment {
    pub fn new(player: Player, capacity: u32) -> Self {
        StrategyFragment { player, moves: vec![NO_NODE; capacity as usize] }
    }

    pub fn player(&self) -> Player {
        self.player
    }

    pub fn get(&self, v: u32) -> Option<u32> {
        match self.moves[v as usize] {
            NO_NODE => None,
            w => Some(w),
        }
    }

    pub fn set(&mut self, v: u32, w: u32) {
        self.moves[v as usize] = w;
    }

    pub fn is_empty(&self) -> bool {
        self.moves.iter().all(|&w| w == NO_NODE)
    }

    pub fn len(&self) -> usize {
        self.moves.iter().filter(|&&w| w != NO_NODE).count()
    }

    /// Mapped nodes in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.moves
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != NO_NODE)
            .map(|(v, &w)| (v as u32, w))
    }

    /// Copies every move of `other` into `self`. Domains are expected to be
    /// disjoint; a later merge wins where they are not.
    pub fn merge(&mut self, other: &StrategyFragment) {
        debug_assert_eq!(self.player, other.player);
        for (v, w) in other.iter() {
            self.set(v, w);
        }
    }
}

impl fmt::Debug for StrategyFragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.iter()).finish()
    }
}

/// Input record for one node when constructing a [`Game`].
#[derive(Debug, Clone)]
pub struct NodeData {
    pub owner: Player,
    pub color: u32,
    pub successors: Vec<u32>,
    pub name: Option<String>,
}

impl NodeData {
    pub fn new(owner: Player, color: u32, successors: Vec<u32>) -> Self {
        NodeData { owner, color, successors, name: None }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("node {node} has no successors")]
    NoSuccessors { node: u32 },
    #[error("node {node} has successor {successor} out of range (node count {count})")]
    SuccessorOutOfRange { node: u32, successor: u32, count: u32 },
    #[error("too many nodes: {0}")]
    TooManyNodes(usize),
}

/// An immutable parity game: owners, colors and adjacency in both
/// directions. Node ids are dense `0..n`. Successor and predecessor lists
/// are sorted ascending and duplicate-free.
///
/// A `Game` never changes after construction; sub-games and edge removals
/// live in [`crate::view::GameView`] overlays on top of it.
#[derive(Clone, PartialEq, Eq)]
pub struct Game {
    owner: Vec<Player>,
    color: Vec<u32>,
    succ_off: Vec<u32>,
    succ: Vec<u32>,
    pred_off: Vec<u32>,
    pred: Vec<u32>,
    name: Vec<Option<String>>,
    /// Original ids when the game came from a file with sparse ids.
    external_id: Option<Vec<u64>>,
}

impl Game {
    /// Builds a game, validating the total-successor invariant and id
    /// ranges. Successor lists are sorted and deduplicated; predecessor
    /// lists are derived as the exact transpose.
    pub fn new(nodes: Vec<NodeData>) -> Result<Game, GameError> {
        if nodes.len() >= NO_NODE as usize {
            return Err(GameError::TooManyNodes(nodes.len()));
        }
        let n = nodes.len() as u32;
        let mut owner = Vec::with_capacity(nodes.len());
        let mut color = Vec::with_capacity(nodes.len());
        let mut name = Vec::with_capacity(nodes.len());
        let mut succ_lists: Vec<Vec<u32>> = Vec::with_capacity(nodes.len());

        for (v, node) in nodes.into_iter().enumerate() {
            let v = v as u32;
            let mut succs = node.successors;
            succs.sort_unstable();
            succs.dedup();
            if succs.is_empty() {
                return Err(GameError::NoSuccessors { node: v });
            }
            if let Some(&bad) = succs.iter().find(|&&w| w >= n) {
                return Err(GameError::SuccessorOutOfRange { node: v, successor: bad, count: n });
            }
            owner.push(node.owner);
            color.push(node.color);
            name.push(node.name);
            succ_lists.push(succs);
        }

        let mut succ_off = Vec::with_capacity(n as usize + 1);
        let mut succ = Vec::new();
        succ_off.push(0);
        for list in &succ_lists {
            succ.extend_from_slice(list);
            succ_off.push(succ.len() as u32);
        }

        // Transpose; counting sort keeps predecessor lists ascending.
        let mut pred_count = vec![0u32; n as usize];
        for &w in &succ {
            pred_count[w as usize] += 1;
        }
        let mut pred_off = Vec::with_capacity(n as usize + 1);
        pred_off.push(0u32);
        for v in 0..n as usize {
            pred_off.push(pred_off[v] + pred_count[v]);
        }
        let mut pred = vec![0u32; succ.len()];
        let mut cursor = pred_off.clone();
        for v in 0..n {
            for &w in &succ_lists[v as usize] {
                pred[cursor[w as usize] as usize] = v;
                cursor[w as usize] += 1;
            }
        }

        Ok(Game { owner, color, succ_off, succ, pred_off, pred, name, external_id: None })
    }

    pub(crate) fn set_external_ids(&mut self, ids: Vec<u64>) {
        debug_assert_eq!(ids.len(), self.node_count() as usize);
        self.external_id = Some(ids);
    }

    pub fn node_count(&self) -> u32 {
        self.owner.len() as u32
    }

    pub fn edge_count(&self) -> usize {
        self.succ.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = u32> {
        0..self.node_count()
    }

    pub fn owner(&self, v: u32) -> Player {
        self.owner[v as usize]
    }

    pub fn color(&self, v: u32) -> u32 {
        self.color[v as usize]
    }

    pub fn successors(&self, v: u32) -> &[u32] {
        &self.succ[self.succ_off[v as usize] as usize..self.succ_off[v as usize + 1] as usize]
    }

    pub fn predecessors(&self, v: u32) -> &[u32] {
        &self.pred[self.pred_off[v as usize] as usize..self.pred_off[v as usize + 1] as usize]
    }

    pub fn has_edge(&self, v: u32, w: u32) -> bool {
        self.successors(v).binary_search(&w).is_ok()
    }

    pub fn name(&self, v: u32) -> Option<&str> {
        self.name[v as usize].as_deref()
    }

    /// The id this node carries in external files (defaults to the dense id).
    pub fn external_id(&self, v: u32) -> u64 {
        match &self.external_id {
            Some(ids) => ids[v as usize],
            None => v as u64,
        }
    }

    pub fn max_color(&self) -> Option<u32> {
        self.color.iter().copied().max()
    }

    /// Distinct colors present, ascending.
    pub fn colors(&self) -> Vec<u32> {
        let mut cs = self.color.clone();
        cs.sort_unstable();
        cs.dedup();
        cs
    }

    pub fn nodes_of_color(&self, c: u32) -> NodeSet {
        NodeSet::from_nodes(
            self.node_count(),
            self.nodes().filter(|&v| self.color(v) == c),
        )
    }
}

impl fmt::Debug for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Game({} nodes, {} edges)", self.node_count(), self.edge_count())?;
        for v in self.nodes() {
            writeln!(
                f,
                "  {} c={} o={} -> {:?}",
                v,
                self.color(v),
                self.owner(v),
                self.successors(v)
            )?;
        }
        Ok(())
    }
}
