//! Parsing of generator family specs shared by `gen` and `bench`.
//!
//! Grammar:
//!
//! ```text
//! clique:<n>[,<n>...]               ladder:<layers>[,<layers>...]
//! random:n=..,l=..,u=..,c=..[,count=K][,seed=S]
//! buchi:n=..,l=..,u=..[,count=K][,seed=S]
//! det:n=..,c=..[,count=K][,seed=S]
//! weak:blocks=..,size=..[,count=K][,seed=S]
//! ```
//!
//! `count` expands a random family into `K` instances with seeds
//! `S, S+1, ...`. Anything that does not parse as a family is treated by
//! `bench` as a file-system path.

use anyhow::{anyhow, bail, Context, Result};
use pgfatal_core::generators::{
    gen_clique, gen_ladder, gen_random, gen_random_buchi, gen_random_deterministic,
    gen_random_weak, RandomSpec,
};
use pgfatal_core::Game;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Clique { n: u32 },
    Ladder { layers: u32 },
    Random { n: u32, low: u32, high: u32, colors: u32, seed: u64 },
    Buchi { n: u32, low: u32, high: u32, seed: u64 },
    Deterministic { n: u32, colors: u32, seed: u64 },
    Weak { blocks: u32, size: u32, seed: u64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Clique { .. } => "clique",
            Family::Ladder { .. } => "ladder",
            Family::Random { .. } => "random",
            Family::Buchi { .. } => "buchi",
            Family::Deterministic { .. } => "det",
            Family::Weak { .. } => "weak",
        }
    }

    /// Parameter string in canonical form (`;`-separated, CSV-friendly).
    pub fn params(&self) -> String {
        match self {
            Family::Clique { n } => format!("n={n}"),
            Family::Ladder { layers } => format!("layers={layers}"),
            Family::Random { n, low, high, colors, seed } => {
                format!("n={n};l={low};u={high};c={colors};seed={seed}")
            }
            Family::Buchi { n, low, high, seed } => format!("n={n};l={low};u={high};seed={seed}"),
            Family::Deterministic { n, colors, seed } => format!("n={n};c={colors};seed={seed}"),
            Family::Weak { blocks, size, seed } => {
                format!("blocks={blocks};size={size};seed={seed}")
            }
        }
    }

    pub fn build(&self) -> Result<Game> {
        let game = match *self {
            Family::Clique { n } => gen_clique(n)?,
            Family::Ladder { layers } => gen_ladder(layers)?,
            Family::Random { n, low, high, colors, seed } => {
                gen_random(&RandomSpec::new(n, (low, high), colors, seed))?
            }
            Family::Buchi { n, low, high, seed } => gen_random_buchi(n, low, high, seed)?,
            Family::Deterministic { n, colors, seed } => {
                gen_random_deterministic(n, colors, seed)?
            }
            Family::Weak { blocks, size, seed } => gen_random_weak(blocks, size, seed)?,
        };
        Ok(game)
    }

    fn with_seed(&self, seed: u64) -> Family {
        let mut f = self.clone();
        match &mut f {
            Family::Random { seed: s, .. }
            | Family::Buchi { seed: s, .. }
            | Family::Deterministic { seed: s, .. }
            | Family::Weak { seed: s, .. } => *s = seed,
            _ => {}
        }
        f
    }

    fn seed(&self) -> Option<u64> {
        match self {
            Family::Random { seed, .. }
            | Family::Buchi { seed, .. }
            | Family::Deterministic { seed, .. }
            | Family::Weak { seed, .. } => Some(*seed),
            _ => None,
        }
    }
}

fn keyed(pairs: &str) -> Result<Vec<(String, u64)>> {
    pairs
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|kv| {
            let (key, value) = kv
                .split_once('=')
                .ok_or_else(|| anyhow!("expected key=value, got '{kv}'"))?;
            let value: u64 = value.parse().with_context(|| format!("bad number in '{kv}'"))?;
            Ok((key.to_string(), value))
        })
        .collect()
}

struct Params {
    pairs: Vec<(String, u64)>,
}

impl Params {
    fn get(&self, key: &str) -> Option<u64> {
        self.pairs.iter().find(|(k, _)| k == key).map(|&(_, v)| v)
    }

    fn require(&self, key: &str, family: &str) -> Result<u64> {
        self.get(key).ok_or_else(|| anyhow!("family '{family}' needs parameter '{key}'"))
    }

    fn check_known(&self, family: &str, known: &[&str]) -> Result<()> {
        for (k, _) in &self.pairs {
            if !known.contains(&k.as_str()) {
                bail!("unknown parameter '{k}' for family '{family}'");
            }
        }
        Ok(())
    }
}

/// Parses `family:params` into one or more instances. Returns `None` if
/// the text does not start with a known family name.
pub fn parse_family_spec(text: &str) -> Result<Option<Vec<Family>>> {
    let Some((name, params)) = text.split_once(':') else {
        return Ok(None);
    };
    match name {
        "clique" | "ladder" => {
            let sizes: Result<Vec<u32>> = params
                .split(',')
                .map(|s| s.trim().parse::<u32>().with_context(|| format!("bad size '{s}'")))
                .collect();
            let sizes = sizes?;
            if sizes.is_empty() {
                bail!("family '{name}' needs at least one size");
            }
            Ok(Some(
                sizes
                    .into_iter()
                    .map(|n| {
                        if name == "clique" {
                            Family::Clique { n }
                        } else {
                            Family::Ladder { layers: n }
                        }
                    })
                    .collect(),
            ))
        }
        "random" | "buchi" | "det" | "weak" => {
            let params = Params { pairs: keyed(params)? };
            let seed = params.get("seed").unwrap_or(0);
            let count = params.get("count").unwrap_or(1);
            if count == 0 {
                bail!("count must be positive");
            }
            let base = match name {
                "random" => {
                    params.check_known(name, &["n", "l", "u", "c", "seed", "count"])?;
                    Family::Random {
                        n: params.require("n", name)? as u32,
                        low: params.require("l", name)? as u32,
                        high: params.require("u", name)? as u32,
                        colors: params.require("c", name)? as u32,
                        seed,
                    }
                }
                "buchi" => {
                    params.check_known(name, &["n", "l", "u", "seed", "count"])?;
                    Family::Buchi {
                        n: params.require("n", name)? as u32,
                        low: params.require("l", name)? as u32,
                        high: params.require("u", name)? as u32,
                        seed,
                    }
                }
                "det" => {
                    params.check_known(name, &["n", "c", "seed", "count"])?;
                    Family::Deterministic {
                        n: params.require("n", name)? as u32,
                        colors: params.require("c", name)? as u32,
                        seed,
                    }
                }
                _ => {
                    params.check_known(name, &["blocks", "size", "seed", "count"])?;
                    Family::Weak {
                        blocks: params.require("blocks", name)? as u32,
                        size: params.require("size", name)? as u32,
                        seed,
                    }
                }
            };
            let start = base.seed().unwrap_or(0);
            Ok(Some((0..count).map(|i| base.with_seed(start + i)).collect()))
        }
        _ => Ok(None),
    }
}
