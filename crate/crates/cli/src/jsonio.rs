//! JSON schemas: the solution-file format consumed by `verify` and
//! produced by full solvers, and the report emitted by `solve --json`
//! for partial solvers. Node ids in all JSON are the external (file) ids.

use std::collections::{BTreeMap, HashMap};

use anyhow::{anyhow, bail, Result};
use pgfatal_core::{FullSolution, Game, PartialResult, Player, StrategyFragment};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct PerPlayerJson<T> {
    #[serde(rename = "0")]
    pub even: T,
    #[serde(rename = "1")]
    pub odd: T,
}

impl<T> PerPlayerJson<T> {
    fn get(&self, p: Player) -> &T {
        match p {
            Player::Even => &self.even,
            Player::Odd => &self.odd,
        }
    }
}

/// `{regions: {"0": [ids], "1": [ids]}, strategy: {"0": {id: id}, ...}}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionJson {
    pub regions: PerPlayerJson<Vec<u64>>,
    pub strategy: PerPlayerJson<BTreeMap<u64, u64>>,
}

#[derive(Debug, Serialize)]
pub struct StatsJson {
    pub fatal_attractors: u64,
    pub edges_removed: u64,
    pub recursive_calls: u64,
    pub elapsed_ms: f64,
    pub fatal_colors: Vec<u32>,
}

/// Report of a partial-solver run.
#[derive(Debug, Serialize)]
pub struct PartialJson {
    pub solver: String,
    pub won: PerPlayerJson<Vec<u64>>,
    pub residual: Vec<u64>,
    pub removed_edges: Vec<(u64, u64)>,
    pub stats: StatsJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<PerPlayerJson<BTreeMap<u64, u64>>>,
}

fn external(game: &Game, nodes: impl Iterator<Item = u32>) -> Vec<u64> {
    nodes.map(|v| game.external_id(v)).collect()
}

fn external_moves(game: &Game, fragment: &StrategyFragment) -> BTreeMap<u64, u64> {
    fragment.iter().map(|(v, w)| (game.external_id(v), game.external_id(w))).collect()
}

pub fn solution_to_json(game: &Game, solution: &FullSolution) -> SolutionJson {
    SolutionJson {
        regions: PerPlayerJson {
            even: external(game, solution.regions[Player::Even].iter()),
            odd: external(game, solution.regions[Player::Odd].iter()),
        },
        strategy: PerPlayerJson {
            even: external_moves(game, &solution.strategy[Player::Even]),
            odd: external_moves(game, &solution.strategy[Player::Odd]),
        },
    }
}

pub fn partial_to_json(
    game: &Game,
    solver: String,
    result: &PartialResult,
    with_strategy: bool,
) -> PartialJson {
    PartialJson {
        solver,
        won: PerPlayerJson {
            even: external(game, result.won[Player::Even].iter()),
            odd: external(game, result.won[Player::Odd].iter()),
        },
        residual: external(game, result.residual.alive().iter()),
        removed_edges: result
            .residual
            .removed_edges()
            .iter()
            .map(|(s, d)| (game.external_id(s), game.external_id(d)))
            .collect(),
        stats: StatsJson {
            fatal_attractors: result.stats.fatal_attractors,
            edges_removed: result.stats.edges_removed,
            recursive_calls: result.stats.recursive_calls,
            elapsed_ms: result.stats.elapsed.as_secs_f64() * 1e3,
            fatal_colors: result.stats.fatal_colors.clone(),
        },
        strategy: with_strategy.then(|| PerPlayerJson {
            even: external_moves(game, &result.strategy[Player::Even]),
            odd: external_moves(game, &result.strategy[Player::Odd]),
        }),
    }
}

/// Reads a solution back against a game, resolving external node ids.
pub fn solution_from_json(game: &Game, json: &SolutionJson) -> Result<FullSolution> {
    let lookup: HashMap<u64, u32> = game.nodes().map(|v| (game.external_id(v), v)).collect();
    let resolve = |id: u64| -> Result<u32> {
        lookup.get(&id).copied().ok_or_else(|| anyhow!("unknown node id {id} in solution"))
    };

    let mut solution = FullSolution {
        regions: pgfatal_core::PerPlayer::from_fn(|_| {
            pgfatal_core::NodeSet::new(game.node_count())
        }),
        strategy: pgfatal_core::PerPlayer::from_fn(|p| {
            StrategyFragment::new(p, game.node_count())
        }),
    };
    for p in Player::both() {
        for &id in json.regions.get(p) {
            solution.regions[p].insert(resolve(id)?);
        }
        for (&from, &to) in json.strategy.get(p) {
            let (from, to) = (resolve(from)?, resolve(to)?);
            if game.owner(from) != p {
                bail!("strategy of player {p} maps node {} owned by the opponent",
                      game.external_id(from));
            }
            solution.strategy[p].set(from, to);
        }
    }
    Ok(solution)
}
