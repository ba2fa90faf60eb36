//! The precision-boosting transformation `lift`.
//!
//! `lift(rho)` first runs the partial solver `rho`, then probes every
//! remaining choice edge `(v, w)`: if making the game deterministic at
//! `v` via `w` lets `rho` find winning nodes for `v`'s opponent, the edge
//! can only hurt its owner, so it is deleted and everything restarts.
//! Decided regions accumulate across restarts.
//!
//! Soundness of the transformation requires the input solver to be
//! sound, idempotent and local; those hold for `psolB`
//! ([`PartialSolverKind::lift_certified`]). This module also provides
//! checkers for the idempotency and locality properties themselves.

use crate::ctl::{Aborted, Ctl};
use crate::game::Player;
use crate::solvers::{PartialResult, PartialSolverKind, RunStats};
use crate::view::GameView;

pub fn lift_solve<'a>(rho: PartialSolverKind, view: &GameView<'a>) -> PartialResult<'a> {
    lift_solve_ctl(rho, view, &Ctl::unbounded()).expect("unbounded run cannot abort")
}

/// Runs `lift(rho)` on the view. Nodes are probed in ascending id order
/// and their successors in ascending id order; the first qualifying edge
/// is removed and the transformation restarts on the smaller game.
///
/// Statistics: the accumulated stats of the `rho` runs on the shrinking
/// game, with `edges_removed` counting the lift's own removals on top
/// and `recursive_calls` counting its restarts. Probe runs do not count.
pub fn lift_solve_ctl<'a>(
    rho: PartialSolverKind,
    view: &GameView<'a>,
    ctl: &Ctl,
) -> Result<PartialResult<'a>, Aborted> {
    let mut result: PartialResult<'a> = rho.run(view, ctl)?;
    // on a lifted result, recursive_calls counts the lift's restarts
    result.stats.recursive_calls = 0;
    let budget = edge_budget(view);
    let mut removed: u64 = 0;

    'restart: loop {
        let current = &result.residual;
        for v in current.alive().iter() {
            ctl.check()?;
            if current.out_degree(v) < 2 {
                continue;
            }
            let opponent = current.game().owner(v).opponent();
            let choices: Vec<u32> = current.successors(v).collect();
            for w in choices {
                let fixed = current.fix_edge(v, w).expect("probed edge is alive");
                let probe = rho.run(&fixed, ctl)?;
                if !probe.won[opponent].is_empty() {
                    let shrunk = current.remove_edge(v, w).expect("removable choice edge");
                    removed += 1;
                    debug_assert!(removed <= budget, "lift exceeded its edge-removal budget");
                    let rerun = rho.run(&shrunk, ctl)?;
                    accumulate(&mut result, rerun);
                    continue 'restart;
                }
            }
        }
        return Ok(result);
    }
}

/// Every node keeps at least one successor, so at most `|E| - |V|` edges
/// can ever be removed.
fn edge_budget(view: &GameView) -> u64 {
    let edges: usize = view.alive().iter().map(|v| view.out_degree(v)).sum();
    (edges - view.alive_count()) as u64
}

/// Folds one post-removal rerun into the accumulated result. Each call
/// corresponds to exactly one lift edge removal and one restart.
fn accumulate<'a>(result: &mut PartialResult<'a>, rerun: PartialResult<'a>) {
    for p in Player::both() {
        result.won[p].union_with(&rerun.won[p]);
        result.strategy[p].merge(&rerun.strategy[p]);
    }
    result.residual = rerun.residual;
    let stats = &mut result.stats;
    let fresh: RunStats = rerun.stats;
    stats.fatal_attractors += fresh.fatal_attractors;
    stats.fatal_colors.extend(fresh.fatal_colors);
    stats.edges_removed += fresh.edges_removed + 1;
    stats.recursive_calls += 1;
    stats.elapsed += fresh.elapsed;
}

/// Idempotency check: running `rho` on its own residual must decide
/// nothing and leave the residual untouched.
pub fn check_idempotent(rho: PartialSolverKind, view: &GameView) -> bool {
    let first = rho.run(view, &Ctl::unbounded()).expect("unbounded");
    let again = rho.run(&first.residual, &Ctl::unbounded()).expect("unbounded");
    again.decided().is_empty()
        && again.residual.alive() == first.residual.alive()
        && again.residual.removed_edges() == first.residual.removed_edges()
}

/// Locality check over a sample of edges `(x, w)` owned by `p`: whenever
/// fixing the edge gives `rho` a nonempty region for `1 - p`, that region
/// must contain `x` itself.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LocalityReport {
    /// Edges whose precondition held and that were actually checked.
    pub checked: usize,
    /// Edges skipped because `rho` already decides nodes for the
    /// opponent on the unmodified game.
    pub skipped: Vec<(u32, u32)>,
    /// Checked edges that violate locality.
    pub violations: Vec<(u32, u32)>,
}

impl LocalityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_local(
    rho: PartialSolverKind,
    view: &GameView,
    edges: &[(u32, u32)],
) -> LocalityReport {
    let ctl = Ctl::unbounded();
    let base = rho.run(view, &ctl).expect("unbounded");
    let mut report = LocalityReport::default();
    for &(x, w) in edges {
        let opponent = view.game().owner(x).opponent();
        if !base.won[opponent].is_empty() {
            report.skipped.push((x, w));
            continue;
        }
        report.checked += 1;
        let fixed = view.fix_edge(x, w).expect("sampled edge is alive");
        let probe = rho.run(&fixed, &ctl).expect("unbounded");
        let region = &probe.won[opponent];
        if !region.is_empty() && !region.contains(x) {
            report.violations.push((x, w));
        }
    }
    report
}
