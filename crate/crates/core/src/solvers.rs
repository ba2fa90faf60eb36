//! The partial solvers: `psol`, `psolB` and `psolQ`.
//!
//! Each solver decides winning regions by detecting fatal (layered)
//! attractors, removes the classical attractor of every detected region,
//! and starts over on the shrunk sub-game. Recursion is a loop that
//! shrinks the view's alive mask, so stack depth stays constant.
//!
//! `psolB` additionally comes in schedule-driven variants used to exercise
//! its order-robustness: the residual of two stable color schedules is
//! always the same game.

use std::time::{Duration, Instant};

use crate::attractors::{
    attractor, is_fatal, is_trap, layered_attractor, monotone_attractor,
};
use crate::ctl::{Aborted, Ctl};
use crate::game::{PerPlayer, Player, StrategyFragment};
use crate::node_set::NodeSet;
use crate::view::GameView;

/// Counters of one partial-solver run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunStats {
    pub fatal_attractors: u64,
    pub edges_removed: u64,
    pub recursive_calls: u64,
    pub elapsed: Duration,
    /// Color at which each fatal attractor was detected, in order.
    pub fatal_colors: Vec<u32>,
}

/// Outcome of a partial solver: decided regions per player, strategy
/// fragments where the solver defines them, the residual sub-game, and
/// run statistics.
///
/// The decided sets and the residual's alive set partition the input's
/// alive set. The residual carries every edge removal the run performed.
#[derive(Debug, Clone)]
pub struct PartialResult<'a> {
    pub won: PerPlayer<NodeSet>,
    pub strategy: PerPlayer<StrategyFragment>,
    pub residual: GameView<'a>,
    pub stats: RunStats,
}

impl<'a> PartialResult<'a> {
    pub fn solved_completely(&self) -> bool {
        self.residual.is_empty()
    }

    pub fn decided(&self) -> NodeSet {
        let mut d = self.won[Player::Even].clone();
        d.union_with(&self.won[Player::Odd]);
        d
    }

    fn check_partition(&self, input_alive: &NodeSet) {
        debug_assert!(self.won[Player::Even].is_disjoint_from(&self.won[Player::Odd]));
        debug_assert!(self.won[Player::Even].is_disjoint_from(self.residual.alive()));
        debug_assert!(self.won[Player::Odd].is_disjoint_from(self.residual.alive()));
        let mut all = self.decided();
        all.union_with(self.residual.alive());
        debug_assert_eq!(&all, input_alive);
    }
}

/// Identifier of a partial solver with the uniform `view -> PartialResult`
/// signature. All three are deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartialSolverKind {
    Psol,
    PsolB,
    PsolQ,
}

impl PartialSolverKind {
    pub fn name(self) -> &'static str {
        match self {
            PartialSolverKind::Psol => "psol",
            PartialSolverKind::PsolB => "psolB",
            PartialSolverKind::PsolQ => "psolQ",
        }
    }

    pub fn run<'a>(
        self,
        view: &GameView<'a>,
        ctl: &Ctl,
    ) -> Result<PartialResult<'a>, Aborted> {
        match self {
            PartialSolverKind::Psol => psol_ctl(view, ctl),
            PartialSolverKind::PsolB => psolb_ctl(view, ctl),
            PartialSolverKind::PsolQ => psolq_ctl(view, ctl),
        }
    }

    /// Whether the lift preconditions (idempotency, locality) are proven
    /// for this solver.
    pub fn lift_certified(self) -> bool {
        matches!(self, PartialSolverKind::PsolB)
    }
}

struct Run<'a> {
    view: GameView<'a>,
    won: PerPlayer<NodeSet>,
    strategy: PerPlayer<StrategyFragment>,
    stats: RunStats,
    started: Instant,
}

impl<'a> Run<'a> {
    fn new(view: &GameView<'a>) -> Self {
        let n = view.game().node_count();
        Run {
            view: view.clone(),
            won: PerPlayer::from_fn(|_| NodeSet::new(n)),
            strategy: PerPlayer::from_fn(|p| StrategyFragment::new(p, n)),
            stats: RunStats::default(),
            started: Instant::now(),
        }
    }

    /// Removes the classical attractor of a fatal (layered) attractor
    /// region won by `player`, recording strategy moves where given.
    fn remove_fatal_region(
        &mut self,
        player: Player,
        color: u32,
        fatal: &NodeSet,
        fatal_strategy: Option<&StrategyFragment>,
    ) {
        let closure = attractor(&self.view, player, fatal);
        self.stats.fatal_attractors += 1;
        self.stats.fatal_colors.push(color);
        if let Some(inner) = fatal_strategy {
            self.strategy[player].merge(inner);
        }
        self.strategy[player].merge(&closure.strategy);
        self.won[player].union_with(&closure.set);

        #[cfg(debug_assertions)]
        {
            let mut rest = self.view.alive().clone();
            rest.subtract(&closure.set);
            debug_assert!(is_trap(&self.view, player, &rest));
        }
        self.view.shrink_in_place(&closure.set);
    }

    fn finish(mut self, input: &GameView<'a>) -> PartialResult<'a> {
        self.stats.elapsed = self.started.elapsed();
        let result = PartialResult {
            won: self.won,
            strategy: self.strategy,
            residual: self.view,
            stats: self.stats,
        };
        result.check_partition(input.alive());
        result
    }
}

/// Alive nodes ordered by color descending, id ascending.
fn nodes_by_color_desc(view: &GameView) -> Vec<u32> {
    let mut nodes: Vec<u32> = view.alive().iter().collect();
    nodes.sort_by(|&a, &b| {
        let game = view.game();
        game.color(b).cmp(&game.color(a)).then(a.cmp(&b))
    });
    nodes
}

pub fn psol<'a>(view: &GameView<'a>) -> PartialResult<'a> {
    psol_ctl(view, &Ctl::unbounded()).expect("unbounded run cannot abort")
}

/// Fatal-attractor solver over singleton targets: visits
/// nodes in descending color order; a fatal `MAttr(k)` removes its
/// attractor and restarts, a non-fatal one removes every edge from `k`
/// into it and continues the pass.
pub fn psol_ctl<'a>(view: &GameView<'a>, ctl: &Ctl) -> Result<PartialResult<'a>, Aborted> {
    let mut run = Run::new(view);
    let game = view.game();

    'restart: loop {
        for k in nodes_by_color_desc(&run.view) {
            ctl.check()?;
            let color = game.color(k);
            let player = Player::of_color(color);
            let target = NodeSet::from_nodes(game.node_count(), [k]);
            let ma = monotone_attractor(&run.view, player, &target, color);
            if ma.set.is_empty() {
                continue;
            }
            if is_fatal(&target, &ma) {
                run.remove_fatal_region(player, color, &ma.set, Some(&ma.strategy));
                if run.view.is_empty() {
                    break 'restart;
                }
                run.stats.recursive_calls += 1;
                continue 'restart;
            }
            // Not fatal: drop every move from k into the attractor. k
            // always keeps a successor, otherwise k would have been
            // attracted itself.
            let doomed: Vec<u32> =
                run.view.successors(k).filter(|&w| ma.set.contains(w)).collect();
            for w in doomed {
                run.view
                    .remove_edge_in_place(k, w)
                    .expect("edge removal cannot strand a node outside its fatal attractor");
                run.stats.edges_removed += 1;
            }
        }
        break;
    }
    Ok(run.finish(view))
}

pub fn psolb<'a>(view: &GameView<'a>) -> PartialResult<'a> {
    psolb_ctl(view, &Ctl::unbounded()).expect("unbounded run cannot abort")
}

/// Fatal-attractor solver over same-color target sets. For
/// each color `d` (descending) it runs a greatest fixpoint on `X`, the
/// color-`d` nodes attracted to themselves; a fatal detection removes the
/// region's attractor and restarts on the residual.
pub fn psolb_ctl<'a>(view: &GameView<'a>, ctl: &Ctl) -> Result<PartialResult<'a>, Aborted> {
    let mut run = Run::new(view);
    'restart: loop {
        let mut colors = run.view.colors();
        colors.reverse();
        for d in colors {
            ctl.check()?;
            if color_step(&mut run, d)? {
                if run.view.is_empty() {
                    break 'restart;
                }
                run.stats.recursive_calls += 1;
                continue 'restart;
            }
        }
        break;
    }
    Ok(run.finish(view))
}

/// One greatest-fixpoint step for color `d` on the current residual.
/// Returns true if a fatal attractor was found and removed.
fn color_step(run: &mut Run, d: u32) -> Result<bool, Aborted> {
    let player = Player::of_color(d);
    let mut x = run.view.nodes_of_color(d);
    while !x.is_empty() {
        let ma = monotone_attractor(&run.view, player, &x, d);
        if is_fatal(&x, &ma) {
            run.remove_fatal_region(player, d, &ma.set, Some(&ma.strategy));
            return Ok(true);
        }
        let mut shrunk = x.clone();
        shrunk.intersect_with(&ma.set);
        if shrunk == x {
            break;
        }
        x = shrunk;
    }
    Ok(false)
}

/// `psolB` driven by an explicit color sequence, processed once from left
/// to right (repetitions included). Used for order-robustness testing.
pub fn psolb_with_schedule<'a>(
    view: &GameView<'a>,
    schedule: &[u32],
    ctl: &Ctl,
) -> Result<PartialResult<'a>, Aborted> {
    let mut run = Run::new(view);
    for &d in schedule {
        ctl.check()?;
        if run.view.is_empty() {
            break;
        }
        color_step(&mut run, d)?;
    }
    Ok(run.finish(view))
}

/// Repeats `cycle` until one full round triggers no removal, i.e. runs
/// `psolB` on the stable schedule `cycle^m`.
pub fn psolb_until_stable<'a>(
    view: &GameView<'a>,
    cycle: &[u32],
    ctl: &Ctl,
) -> Result<PartialResult<'a>, Aborted> {
    let mut run = Run::new(view);
    loop {
        let mut changed = false;
        for &d in cycle {
            ctl.check()?;
            if run.view.is_empty() {
                break;
            }
            if color_step(&mut run, d)? {
                changed = true;
                run.stats.recursive_calls += 1;
            }
        }
        if !changed || run.view.is_empty() {
            break;
        }
    }
    Ok(run.finish(view))
}

pub fn psolq<'a>(view: &GameView<'a>) -> PartialResult<'a> {
    psolq_ctl(view, &Ctl::unbounded()).expect("unbounded run cannot abort")
}

/// Quantified-layer solver: for each color bound `b`
/// (ascending) it runs a greatest fixpoint on `X`, the nodes of `b`'s
/// parity with color at most `b`, testing the layered attractor for
/// fatality. Decides regions only; no strategy is emitted.
pub fn psolq_ctl<'a>(view: &GameView<'a>, ctl: &Ctl) -> Result<PartialResult<'a>, Aborted> {
    let mut run = Run::new(view);
    let game = view.game();

    'restart: loop {
        for b in run.view.colors() {
            ctl.check()?;
            let player = Player::of_color(b);
            let mut x = NodeSet::from_nodes(
                game.node_count(),
                run.view
                    .alive()
                    .iter()
                    .filter(|&v| game.color(v) <= b && Player::of_color(game.color(v)) == player),
            );
            while !x.is_empty() {
                ctl.check()?;
                let layered = layered_attractor(&run.view, player, &x)
                    .expect("targets are filtered to the player's parity");
                if x.is_subset_of(&layered) {
                    run.remove_fatal_region(player, b, &layered, None);
                    if run.view.is_empty() {
                        break 'restart;
                    }
                    run.stats.recursive_calls += 1;
                    continue 'restart;
                }
                let mut shrunk = x.clone();
                shrunk.intersect_with(&layered);
                if shrunk == x {
                    break;
                }
                x = shrunk;
            }
        }
        break;
    }
    // psolQ defines no strategies
    let n = game.node_count();
    run.strategy = PerPlayer::from_fn(|p| StrategyFragment::new(p, n));
    Ok(run.finish(view))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pgsolver::parse_pgsolver;

    const G1: &str = include_str!("../test-data/g1.gm");
    const G5A: &str = include_str!("../test-data/g5a.gm");
    const G5B: &str = include_str!("../test-data/g5b.gm");
    const G7: &str = include_str!("../test-data/g7.gm");

    fn set(n: u32, nodes: &[u32]) -> NodeSet {
        NodeSet::from_nodes(n, nodes.iter().copied())
    }

    #[test]
    fn psol_solves_g1() {
        let g = parse_pgsolver(G1).unwrap();
        let view = GameView::full(&g);
        let r = psol(&view);
        assert_eq!(r.residual.alive(), &set(12, &[3, 5, 7]));
        assert!(r.residual.removed_edges().contains(10, 11));
        assert_eq!(r.stats.fatal_colors, vec![8, 4]);
        assert_eq!(r.won[Player::Even], set(12, &[0, 1, 2, 4, 6, 8, 9, 10, 11]));
        assert!(r.won[Player::Odd].is_empty());
        // the winning moves recorded for player 0 stay inside the region
        for (v, w) in r.strategy[Player::Even].iter() {
            assert!(r.won[Player::Even].contains(v) && r.won[Player::Even].contains(w));
        }
    }

    #[test]
    fn psolb_solves_g1_without_edge_removal() {
        let g = parse_pgsolver(G1).unwrap();
        let view = GameView::full(&g);
        let r = psolb(&view);
        assert_eq!(r.residual.alive(), &set(12, &[3, 5, 7]));
        assert!(r.residual.removed_edges().is_empty());
        assert_eq!(r.stats.fatal_colors, vec![8, 4]);
        assert_eq!(r.won[Player::Even], set(12, &[0, 1, 2, 4, 6, 8, 9, 10, 11]));
    }

    #[test]
    fn psolq_solves_g1_completely() {
        let g = parse_pgsolver(G1).unwrap();
        let view = GameView::full(&g);
        let r = psolq(&view);
        assert!(r.solved_completely());
        assert_eq!(r.won[Player::Odd], set(12, &[3, 5, 7]));
        assert_eq!(r.won[Player::Even], set(12, &[0, 1, 2, 4, 6, 8, 9, 10, 11]));
        assert_eq!(r.stats.fatal_colors, vec![4, 19]);
        assert!(r.strategy[Player::Even].is_empty());
        assert!(r.strategy[Player::Odd].is_empty());
    }

    #[test]
    fn psol_and_psolb_are_incomparable() {
        let ga = parse_pgsolver(G5A).unwrap();
        let va = GameView::full(&ga);
        let psol_a = psol(&va);
        assert!(psol_a.solved_completely());
        assert_eq!(psol_a.won[Player::Even], set(5, &[0, 1, 2, 3, 4]));
        let psolb_a = psolb(&va);
        assert_eq!(psolb_a.residual.alive(), va.alive());
        assert!(psolb_a.decided().is_empty());

        let gb = parse_pgsolver(G5B).unwrap();
        let vb = GameView::full(&gb);
        let psol_b = psol(&vb);
        assert_eq!(psol_b.residual.alive(), vb.alive());
        let psolb_b = psolb(&vb);
        assert!(psolb_b.solved_completely());
        assert_eq!(psolb_b.won[Player::Even], set(3, &[0, 1, 2]));
        assert_eq!(psolb_b.stats.fatal_colors, vec![0]);
    }

    #[test]
    fn g7_residual_is_whole_game() {
        let g = parse_pgsolver(G7).unwrap();
        let view = GameView::full(&g);
        for kind in [PartialSolverKind::Psol, PartialSolverKind::PsolB, PartialSolverKind::PsolQ] {
            let r = kind.run(&view, &Ctl::unbounded()).unwrap();
            assert_eq!(r.residual.alive(), view.alive(), "{}", kind.name());
            assert!(r.decided().is_empty(), "{}", kind.name());
        }
        // psolB and psolQ leave the edges untouched as well; psol drops
        // the fatal moves (v4,v3) and (v7,v6) without deciding anything.
        assert!(psolb(&view).residual.removed_edges().is_empty());
        let psol_r = psol(&view);
        let removed: Vec<(u32, u32)> = psol_r.residual.removed_edges().iter().collect();
        assert_eq!(removed, vec![(4, 3), (7, 6)]);
    }

    #[test]
    fn psolb_schedule_matches_default_on_fixtures() {
        for text in [G1, G5A, G5B, G7] {
            let g = parse_pgsolver(text).unwrap();
            let view = GameView::full(&g);
            let default = psolb(&view);
            // ascending cycle, repeated to stability
            let colors = view.colors();
            let stable = psolb_until_stable(&view, &colors, &Ctl::unbounded()).unwrap();
            assert_eq!(stable.residual.alive(), default.residual.alive());
            assert_eq!(stable.won[Player::Even], default.won[Player::Even]);
            assert_eq!(stable.won[Player::Odd], default.won[Player::Odd]);
        }
    }

    #[test]
    fn schedule_processes_colors_once_in_order() {
        let g = parse_pgsolver(G1).unwrap();
        let view = GameView::full(&g);

        // one step at color 4: MAttr({v8}, 4) is already fatal in the
        // full game and attracts everything but the odd core
        let r = psolb_with_schedule(&view, &[4], &Ctl::unbounded()).unwrap();
        assert_eq!(r.won[Player::Even], set(12, &[0, 1, 2, 4, 6, 8, 9, 10, 11]));
        assert_eq!(r.residual.alive(), &set(12, &[3, 5, 7]));

        // one step at color 8 only removes the {v9,v10,v11} region; a
        // following step at 4 catches the rest
        let r = psolb_with_schedule(&view, &[8], &Ctl::unbounded()).unwrap();
        assert_eq!(r.won[Player::Even], set(12, &[9, 10, 11]));
        let r = psolb_with_schedule(&view, &[8, 4], &Ctl::unbounded()).unwrap();
        assert_eq!(r.residual.alive(), &set(12, &[3, 5, 7]));

        // colors without alive nodes and repetitions are permitted
        let r = psolb_with_schedule(&view, &[7, 8, 8, 99], &Ctl::unbounded()).unwrap();
        assert_eq!(r.won[Player::Even], set(12, &[9, 10, 11]));
    }

    #[test]
    fn empty_input_gives_empty_result() {
        let g = parse_pgsolver(G5B).unwrap();
        let empty = GameView::subgame(&g, NodeSet::new(3)).unwrap();
        for kind in [PartialSolverKind::Psol, PartialSolverKind::PsolB, PartialSolverKind::PsolQ] {
            let r = kind.run(&empty, &Ctl::unbounded()).unwrap();
            assert!(r.solved_completely());
            assert!(r.decided().is_empty());
            assert_eq!(r.stats.fatal_attractors, 0);
        }
    }

    #[test]
    fn aborts_on_expired_deadline() {
        let g = parse_pgsolver(G1).unwrap();
        let view = GameView::full(&g);
        let ctl = Ctl::with_timeout(Duration::ZERO);
        assert_eq!(psolb_ctl(&view, &ctl).unwrap_err(), Aborted);
        assert_eq!(psol_ctl(&view, &ctl).unwrap_err(), Aborted);
        assert_eq!(psolq_ctl(&view, &ctl).unwrap_err(), Aborted);
    }
}
