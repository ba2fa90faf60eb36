//! Ground truth: Zielonka's recursive solver, a brute-force oracle for
//! tiny games, a solution verifier, and completion of partial results
//! into full solutions.

use thiserror::Error;

use crate::attractors::attractor;
use crate::ctl::{Aborted, Ctl};
use crate::game::{Game, NodeData, PerPlayer, Player, StrategyFragment};
use crate::lift::lift_solve_ctl;
use crate::node_set::NodeSet;
use crate::scc::tarjan;
use crate::solvers::{PartialResult, PartialSolverKind};
use crate::view::GameView;

/// A total solution: winning regions partitioning the alive set, plus
/// memoryless strategies on `regions[p]` for each player's own nodes.
#[derive(Debug, Clone)]
pub struct FullSolution {
    pub regions: PerPlayer<NodeSet>,
    pub strategy: PerPlayer<StrategyFragment>,
}

impl FullSolution {
    fn empty(n: u32) -> FullSolution {
        FullSolution {
            regions: PerPlayer::from_fn(|_| NodeSet::new(n)),
            strategy: PerPlayer::from_fn(|p| StrategyFragment::new(p, n)),
        }
    }
}

pub fn zielonka(view: &GameView) -> FullSolution {
    zielonka_ctl(view, &Ctl::unbounded()).expect("unbounded run cannot abort")
}

/// Zielonka's recursive algorithm, minimal-color variant: attract to the
/// nodes of the minimal color for that color's player, solve the rest,
/// and re-attract when the opponent wins part of it. No preprocessing.
pub fn zielonka_ctl(view: &GameView, ctl: &Ctl) -> Result<FullSolution, Aborted> {
    let solution = zielonka_rec(view, ctl)?;
    debug_assert_eq!(verify_solution(view, &solution), Ok(()));
    Ok(solution)
}

fn zielonka_rec(view: &GameView, ctl: &Ctl) -> Result<FullSolution, Aborted> {
    let game = view.game();
    let n = game.node_count();
    ctl.check()?;
    if view.is_empty() {
        return Ok(FullSolution::empty(n));
    }

    let min_color = view.alive().iter().map(|v| game.color(v)).min().unwrap();
    let player = Player::of_color(min_color);
    let target = view.nodes_of_color(min_color);
    let to_target = attractor(view, player, &target);

    let mut rest = view.alive().clone();
    rest.subtract(&to_target.set);
    let sub = view.restricted_unchecked(rest);
    let inner = zielonka_rec(&sub, ctl)?;

    if inner.regions[player.opponent()].is_empty() {
        // `player` wins everywhere: follow the attractor toward the
        // minimal color, pick any move on the target itself, and use the
        // sub-solution beyond the attractor.
        let mut solution = inner;
        solution.regions[player] = view.alive().clone();
        solution.strategy[player].merge(&to_target.strategy);
        for v in target.iter() {
            if game.owner(v) == player {
                let w = view.successors(v).next().expect("alive node has a successor");
                solution.strategy[player].set(v, w);
            }
        }
        return Ok(solution);
    }

    let opponent = player.opponent();
    let opp_core = inner.regions[opponent].clone();
    let to_opp = attractor(view, opponent, &opp_core);
    let mut rest = view.alive().clone();
    rest.subtract(&to_opp.set);
    let sub = view.restricted_unchecked(rest);
    let outer = zielonka_rec(&sub, ctl)?;

    let mut solution = outer;
    solution.regions[opponent].union_with(&to_opp.set);
    solution.strategy[opponent].merge(&inner.strategy[opponent]);
    solution.strategy[opponent].merge(&to_opp.strategy);
    Ok(solution)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BruteForceError {
    #[error("game too large for brute force: {nodes} nodes (limit 12)")]
    TooManyNodes { nodes: u32 },
    #[error("too many strategies for player {player}: more than {limit}")]
    TooManyStrategies { player: Player, limit: u64 },
}

const STRATEGY_LIMIT: u64 = 1_000_000;

/// Independent oracle for tiny games: enumerates every memoryless
/// strategy of player 0; a node is won by player 0 iff some strategy
/// leaves no odd-minimum cycle reachable from it in the restricted graph.
/// Player 1's region and strategy come from the same enumeration on the
/// dual game (owners swapped, colors shifted by one). Memoryless
/// determinacy makes both halves exact and complementary.
pub fn brute_force(game: &Game) -> Result<FullSolution, BruteForceError> {
    let n = game.node_count();
    if n > 12 {
        return Err(BruteForceError::TooManyNodes { nodes: n });
    }
    let (win_even, strat_even) = brute_half(game, Player::Even)?;

    let dual = dual_game(game);
    let (win_odd, strat_odd) = brute_half(&dual, Player::Odd)?;

    // Determinacy: the two independently enumerated regions must
    // partition the node set. The oracle never lies silently.
    let mut complement = NodeSet::full(n);
    complement.subtract(&win_even);
    assert_eq!(win_odd, complement, "brute-force halves do not partition the game");

    Ok(FullSolution {
        regions: PerPlayer::new(win_even, win_odd),
        strategy: PerPlayer::new(strat_even, strat_odd),
    })
}

/// Owners swapped and colors shifted by one, so that the dual's player 0
/// wins exactly where the original's player 1 does.
fn dual_game(game: &Game) -> Game {
    let nodes = game
        .nodes()
        .map(|v| NodeData {
            owner: game.owner(v).opponent(),
            color: game.color(v).checked_add(1).expect("color overflow in dual game"),
            successors: game.successors(v).to_vec(),
            name: None,
        })
        .collect();
    Game::new(nodes).expect("dual of a valid game is valid")
}

/// The player-0 half of the oracle on `game`, reporting moves under
/// `report_as` (identity for the primal game, flipped for the dual).
fn brute_half(
    game: &Game,
    report_as: Player,
) -> Result<(NodeSet, StrategyFragment), BruteForceError> {
    let n = game.node_count();
    let choosers: Vec<u32> = game.nodes().filter(|&v| game.owner(v) == Player::Even).collect();

    let mut combinations: u64 = 1;
    for &v in &choosers {
        combinations = combinations.saturating_mul(game.successors(v).len() as u64);
        if combinations > STRATEGY_LIMIT {
            return Err(BruteForceError::TooManyStrategies {
                player: report_as,
                limit: STRATEGY_LIMIT,
            });
        }
    }

    let mut won = NodeSet::new(n);
    let mut best: Option<(usize, Vec<u32>)> = None;
    let mut choice = vec![0usize; choosers.len()];
    loop {
        let moves: Vec<u32> = choosers
            .iter()
            .zip(&choice)
            .map(|(&v, &i)| game.successors(v)[i])
            .collect();
        let safe = safe_nodes(game, &choosers, &moves);
        if best.as_ref().is_none_or(|(count, _)| safe.len() > *count) {
            best = Some((safe.len(), moves));
        }
        won.union_with(&safe);

        // odometer over strategy choices
        let mut pos = 0;
        loop {
            if pos == choosers.len() {
                // By memoryless determinacy a single strategy achieves the
                // union of all per-strategy winning sets.
                let (count, moves) = best.expect("at least one strategy was examined");
                debug_assert_eq!(count, won.len());
                let mut strategy = StrategyFragment::new(report_as, n);
                for (&v, &w) in choosers.iter().zip(&moves) {
                    if won.contains(v) {
                        strategy.set(v, w);
                    }
                }
                return Ok((won, strategy));
            }
            choice[pos] += 1;
            if choice[pos] < game.successors(choosers[pos]).len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// Nodes from which no reachable cycle has an odd minimal color, in the
/// graph where player 0 is fixed to `moves` and player 1 keeps all edges.
fn safe_nodes(game: &Game, choosers: &[u32], moves: &[u32]) -> NodeSet {
    let n = game.node_count();
    let mut succs: Vec<Vec<u32>> = game.nodes().map(|v| game.successors(v).to_vec()).collect();
    for (&v, &w) in choosers.iter().zip(moves) {
        succs[v as usize] = vec![w];
    }

    // For each odd color c: any color-c node lying on a cycle within the
    // subgraph of colors >= c witnesses an odd-minimum cycle.
    let mut bad_seed = NodeSet::new(n);
    let mut odd_colors: Vec<u32> =
        game.nodes().map(|v| game.color(v)).filter(|c| c % 2 == 1).collect();
    odd_colors.sort_unstable();
    odd_colors.dedup();
    let mut scoped: Vec<Vec<u32>> = vec![Vec::new(); n as usize];
    for c in odd_colors {
        let in_scope = |v: u32| game.color(v) >= c;
        for v in game.nodes().filter(|&v| in_scope(v)) {
            scoped[v as usize] = succs[v as usize].iter().copied().filter(|&w| in_scope(w)).collect();
        }
        let components = tarjan(n, game.nodes().filter(|&v| in_scope(v)), |v| &scoped[v as usize]);
        for component in components {
            let cyclic = component.len() > 1
                || scoped[component[0] as usize].contains(&component[0]);
            if cyclic {
                for v in component {
                    if game.color(v) == c {
                        bad_seed.insert(v);
                    }
                }
            }
        }
    }

    // backward reachability of the bad cycles
    let mut doomed = bad_seed.clone();
    let mut queue: Vec<u32> = doomed.iter().collect();
    while let Some(u) = queue.pop() {
        for v in game.predecessors(u) {
            let takes_edge = succs[*v as usize].contains(&u);
            if takes_edge && doomed.insert(*v) {
                queue.push(*v);
            }
        }
    }

    let mut safe = NodeSet::full(n);
    safe.subtract(&doomed);
    safe
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("regions do not partition the alive set at node {node}")]
    NotAPartition { node: u32 },
    #[error("player {player} has no strategy move at node {node}")]
    StrategyGap { player: Player, node: u32 },
    #[error("strategy move ({node},{target}) of player {player} is not an alive edge into its region")]
    StrategyEscape { player: Player, node: u32, target: u32 },
    #[error("region of player {winner} is open: opponent edge ({node},{escape}) leaves it")]
    RegionNotClosed { winner: Player, node: u32, escape: u32 },
    #[error("player {winner} loses on cycle {cycle:?} with minimal color {color}")]
    LosingCycle { winner: Player, color: u32, cycle: Vec<u32> },
}

/// Checks a claimed solution against the game: the regions partition the
/// alive set; each region is closed under opponent moves; and in the
/// strategy-restricted graph of each region no color of the opponent's
/// parity lies on a cycle among colors at least itself. Failures carry a
/// witness.
pub fn verify_solution(view: &GameView, solution: &FullSolution) -> Result<(), VerifyError> {
    let game = view.game();
    let even = &solution.regions[Player::Even];
    let odd = &solution.regions[Player::Odd];
    for v in view.alive().iter() {
        if even.contains(v) == odd.contains(v) {
            return Err(VerifyError::NotAPartition { node: v });
        }
    }
    if let Some(v) = even.iter().chain(odd.iter()).find(|&v| !view.is_alive(v)) {
        return Err(VerifyError::NotAPartition { node: v });
    }

    for winner in Player::both() {
        let region = &solution.regions[winner];
        let strategy = &solution.strategy[winner];

        // strategy totality and containment; region closure under the
        // opponent's free moves
        for v in region.iter() {
            if game.owner(v) == winner {
                let Some(w) = strategy.get(v) else {
                    return Err(VerifyError::StrategyGap { player: winner, node: v });
                };
                if !view.edge_alive(v, w) || !region.contains(w) {
                    return Err(VerifyError::StrategyEscape { player: winner, node: v, target: w });
                }
            } else {
                for w in view.successors(v) {
                    if !region.contains(w) {
                        return Err(VerifyError::RegionNotClosed {
                            winner,
                            node: v,
                            escape: w,
                        });
                    }
                }
            }
        }

        check_region_cycles(view, winner, region, strategy)?;
    }
    Ok(())
}

/// In the graph on `region` where `winner` follows `strategy` and the
/// opponent moves freely, every cycle must have a minimal color of the
/// winner's parity.
fn check_region_cycles(
    view: &GameView,
    winner: Player,
    region: &NodeSet,
    strategy: &StrategyFragment,
) -> Result<(), VerifyError> {
    let game = view.game();
    let n = game.node_count();
    let mut succs: Vec<Vec<u32>> = vec![Vec::new(); n as usize];
    for v in region.iter() {
        succs[v as usize] = if game.owner(v) == winner {
            vec![strategy.get(v).expect("totality checked before")]
        } else {
            view.successors(v).collect()
        };
    }

    let mut opponent_colors: Vec<u32> = region
        .iter()
        .map(|v| game.color(v))
        .filter(|&c| Player::of_color(c) != winner)
        .collect();
    opponent_colors.sort_unstable();
    opponent_colors.dedup();

    let mut scoped: Vec<Vec<u32>> = vec![Vec::new(); n as usize];
    for c in opponent_colors {
        let in_scope = |v: u32| region.contains(v) && game.color(v) >= c;
        for v in region.iter().filter(|&v| in_scope(v)) {
            scoped[v as usize] =
                succs[v as usize].iter().copied().filter(|&w| in_scope(w)).collect();
        }
        let components =
            tarjan(n, region.iter().filter(|&v| in_scope(v)), |v| &scoped[v as usize]);
        for component in components {
            let cyclic =
                component.len() > 1 || scoped[component[0] as usize].contains(&component[0]);
            if !cyclic {
                continue;
            }
            if let Some(&witness) = component.iter().find(|&&v| game.color(v) == c) {
                let cycle = witness_cycle(witness, &component, &scoped);
                return Err(VerifyError::LosingCycle { winner, color: c, cycle });
            }
        }
    }
    Ok(())
}

/// A concrete cycle through `start` inside one strongly connected
/// component, following the scoped successor lists.
fn witness_cycle(start: u32, component: &[u32], scoped: &[Vec<u32>]) -> Vec<u32> {
    let members: Vec<u32> = component.to_vec();
    let mut parent: Vec<Option<(u32, u32)>> = vec![None; scoped.len()];
    let mut queue = std::collections::VecDeque::from([start]);
    let mut seen = vec![false; scoped.len()];
    seen[start as usize] = true;
    while let Some(u) = queue.pop_front() {
        for &w in &scoped[u as usize] {
            if !members.contains(&w) {
                continue;
            }
            if w == start {
                // reconstruct start -> ... -> u -> start
                let mut path = vec![start];
                let mut back = u;
                let mut rev = Vec::new();
                while back != start {
                    rev.push(back);
                    back = parent[back as usize].expect("reached via BFS").0;
                }
                path.extend(rev.into_iter().rev());
                return path;
            }
            if !seen[w as usize] {
                seen[w as usize] = true;
                parent[w as usize] = Some((u, w));
                queue.push_back(w);
            }
        }
    }
    // self loop
    vec![start]
}

/// A partial solver, possibly lifted, as accepted by [`complete`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rho {
    Plain(PartialSolverKind),
    Lifted(PartialSolverKind),
}

impl Rho {
    pub fn name(self) -> String {
        match self {
            Rho::Plain(kind) => kind.name().to_string(),
            Rho::Lifted(kind) => format!("lift-{}", kind.name()),
        }
    }

    pub fn run<'a>(self, view: &GameView<'a>, ctl: &Ctl) -> Result<PartialResult<'a>, Aborted> {
        match self {
            Rho::Plain(kind) => kind.run(view, ctl),
            Rho::Lifted(kind) => lift_solve_ctl(kind, view, ctl),
        }
    }
}

/// Runs the partial solver, then Zielonka on its residual, and unions
/// regions and strategies into a full solution. Regions decided by
/// `psolQ` carry no strategy moves (only the Zielonka part does).
pub fn complete<'a>(rho: Rho, view: &GameView<'a>) -> (FullSolution, PartialResult<'a>) {
    complete_ctl(rho, view, &Ctl::unbounded()).expect("unbounded run cannot abort")
}

pub fn complete_ctl<'a>(
    rho: Rho,
    view: &GameView<'a>,
    ctl: &Ctl,
) -> Result<(FullSolution, PartialResult<'a>), Aborted> {
    let partial = rho.run(view, ctl)?;
    let tail = zielonka_ctl(&partial.residual, ctl)?;

    let mut solution = FullSolution::empty(view.game().node_count());
    for p in Player::both() {
        solution.regions[p] = partial.won[p].clone();
        solution.regions[p].union_with(&tail.regions[p]);
        solution.strategy[p].merge(&partial.strategy[p]);
        solution.strategy[p].merge(&tail.strategy[p]);
    }
    Ok((solution, partial))
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
    fn zielonka_on_g1() {
        let g = parse_pgsolver(G1).unwrap();
        let view = GameView::full(&g);
        let sol = zielonka(&view);
        assert_eq!(sol.regions[Player::Odd], set(12, &[3, 5, 7]));
        assert_eq!(sol.regions[Player::Even], set(12, &[0, 1, 2, 4, 6, 8, 9, 10, 11]));
        verify_solution(&view, &sol).unwrap();
    }

    #[test]
    fn zielonka_two_node_cycle() {
        let g = parse_pgsolver("parity 1;\n0 0 0 1;\n1 1 1 0;").unwrap();
        let view = GameView::full(&g);
        let sol = zielonka(&view);
        assert_eq!(sol.regions[Player::Even], set(2, &[0, 1]));
        assert!(sol.regions[Player::Odd].is_empty());
    }

    #[test]
    fn brute_force_matches_fixtures() {
        for (text, expected_even) in [
            (G5A, vec![0u32, 1, 2, 3, 4]),
            (G5B, vec![0, 1, 2]),
            (G7, vec![0, 1, 2, 3, 4, 5, 6, 7]),
        ] {
            let g = parse_pgsolver(text).unwrap();
            let sol = brute_force(&g).unwrap();
            let n = g.node_count();
            assert_eq!(sol.regions[Player::Even], set(n, &expected_even));
            verify_solution(&GameView::full(&g), &sol).unwrap();
            // and the recursive solver agrees
            let z = zielonka(&GameView::full(&g));
            assert_eq!(z.regions[Player::Even], sol.regions[Player::Even]);
        }
    }

    #[test]
    fn brute_force_single_self_loop() {
        let g = parse_pgsolver("0 1 0 0;").unwrap();
        let sol = brute_force(&g).unwrap();
        assert_eq!(sol.regions[Player::Odd], set(1, &[0]));
    }

    #[test]
    fn brute_force_size_guard() {
        let nodes: Vec<NodeData> = (0..13)
            .map(|v| NodeData::new(Player::Even, 0, vec![(v + 1) % 13]))
            .collect();
        let g = Game::new(nodes).unwrap();
        assert_eq!(brute_force(&g).unwrap_err(), BruteForceError::TooManyNodes { nodes: 13 });
    }

    #[test]
    fn verify_rejects_bad_strategy() {
        let g = parse_pgsolver(G1).unwrap();
        let view = GameView::full(&g);
        let mut sol = zielonka(&view);
        // sending v2 to v3 walks into the odd cycle through v3 and v5
        sol.strategy[Player::Even].set(2, 3);
        let err = verify_solution(&view, &sol).unwrap_err();
        match err {
            VerifyError::StrategyEscape { node: 2, target: 3, .. } => {}
            other => panic!("expected escape from region, got {other:?}"),
        }
    }

    #[test]
    fn verify_reports_losing_cycle() {
        // region claim that is closed but rides an odd cycle: claim all of
        // g5b for player 0 while moving v0 -> v1 -> v0 forever.
        let g = parse_pgsolver(G5B).unwrap();
        let view = GameView::full(&g);
        let mut sol = FullSolution::empty(3);
        sol.regions[Player::Even] = set(3, &[0, 1, 2]);
        sol.strategy[Player::Even].set(0, 1);
        sol.strategy[Player::Even].set(2, 1);
        verify_solution(&view, &sol).unwrap();

        // breaking the invariant: claim the whole game for player 1; its
        // only cycles have even minimum, so verification must fail.
        let mut bad = FullSolution::empty(3);
        bad.regions[Player::Odd] = set(3, &[0, 1, 2]);
        bad.strategy[Player::Odd].set(1, 0);
        let err = verify_solution(&view, &bad).unwrap_err();
        assert!(matches!(err, VerifyError::LosingCycle { color: 0, .. }), "{err:?}");
    }

    #[test]
    fn verify_rejects_non_partition() {
        let g = parse_pgsolver(G5B).unwrap();
        let view = GameView::full(&g);
        let sol = FullSolution::empty(3);
        assert!(matches!(
            verify_solution(&view, &sol),
            Err(VerifyError::NotAPartition { .. })
        ));
    }

    #[test]
    fn complete_psolb_equals_zielonka() {
        for text in [G1, G5A, G5B, G7] {
            let g = parse_pgsolver(text).unwrap();
            let view = GameView::full(&g);
            let z = zielonka(&view);
            let (full, _) = complete(Rho::Plain(PartialSolverKind::PsolB), &view);
            assert_eq!(full.regions[Player::Even], z.regions[Player::Even]);
            assert_eq!(full.regions[Player::Odd], z.regions[Player::Odd]);
            verify_solution(&view, &full).unwrap();
        }
    }

    #[test]
    fn complete_psolq_regions_with_empty_tail() {
        let g = parse_pgsolver(G1).unwrap();
        let view = GameView::full(&g);
        let (full, partial) = complete(Rho::Plain(PartialSolverKind::PsolQ), &view);
        assert!(partial.solved_completely());
        let z = zielonka(&view);
        assert_eq!(full.regions[Player::Even], z.regions[Player::Even]);
        assert_eq!(full.regions[Player::Odd], z.regions[Player::Odd]);
    }
}
