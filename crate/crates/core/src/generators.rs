//! Benchmark-family and seeded random-game generators.
//!
//! Randomness comes from SplitMix64, a small portable 64-bit generator:
//! identical seeds produce byte-identical games on every platform.
//! Stream split rule: global draws (nothing today) would use the seed
//! directly; node `v` draws from a stream seeded with
//! `mix64(seed ^ (v + 1) * GOLDEN)`, so per-node data is independent of
//! the sampling order.

use thiserror::Error;

use crate::game::{Game, NodeData, Player};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// SplitMix64 (Steele, Lea & Flood; the `java.util.SplittableRandom`
/// output function).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// The stream for item `index` under `seed`.
    pub fn stream(seed: u64, index: u64) -> Self {
        SplitMix64::new(mix64(seed ^ index.wrapping_add(1).wrapping_mul(GOLDEN)))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform draw from `0..bound` (Lemire's method with rejection).
    pub fn gen_range(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        loop {
            let x = self.next_u64();
            let m = (x as u128).wrapping_mul(bound as u128);
            let low = m as u64;
            if low >= bound || low >= bound.wrapping_neg() % bound {
                return (m >> 64) as u64;
            }
        }
    }

    pub fn gen_bool(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("{family} needs at least {min} {what}, got {got}")]
    TooSmall { family: &'static str, what: &'static str, min: u32, got: u32 },
    #[error("out-degree bounds ({low},{high}) invalid for {nodes} nodes without self-loops")]
    BadDegrees { low: u32, high: u32, nodes: u32 },
    #[error("color count must be at least 1")]
    NoColors,
}

/// Parameters of one random game: node count, inclusive out-degree
/// bounds, color count (colors are drawn from `0..colors`), and the seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpec {
    pub nodes: u32,
    pub out_degree: (u32, u32),
    pub colors: u32,
    pub seed: u64,
}

impl RandomSpec {
    pub fn new(nodes: u32, out_degree: (u32, u32), colors: u32, seed: u64) -> Self {
        RandomSpec { nodes, out_degree, colors, seed }
    }

    fn validate(&self) -> Result<(), GenError> {
        let (low, high) = self.out_degree;
        if self.nodes < 2 {
            return Err(GenError::TooSmall {
                family: "random",
                what: "nodes",
                min: 2,
                got: self.nodes,
            });
        }
        if low < 1 || low > high || low > self.nodes - 1 {
            return Err(GenError::BadDegrees { low, high, nodes: self.nodes });
        }
        if self.colors < 1 {
            return Err(GenError::NoColors);
        }
        Ok(())
    }
}

/// Fully connected game with alternating owners, one color per node and
/// no self-loops.
pub fn gen_clique(n: u32) -> Result<Game, GenError> {
    if n < 2 {
        return Err(GenError::TooSmall { family: "clique", what: "nodes", min: 2, got: n });
    }
    let nodes = (0..n)
        .map(|v| NodeData {
            owner: Player::from_index((v % 2) as usize),
            color: v,
            successors: (0..n).filter(|&w| w != v).collect(),
            name: None,
        })
        .collect();
    Ok(Game::new(nodes).expect("clique is a valid game"))
}

/// Ladder of `layers` node pairs: `2 * layers` nodes, owner and color
/// both `v % 2`, edges `v -> v+1` and `v -> v+2` (mod `2 * layers`).
pub fn gen_ladder(layers: u32) -> Result<Game, GenError> {
    if layers < 1 {
        return Err(GenError::TooSmall { family: "ladder", what: "layers", min: 1, got: layers });
    }
    let n = 2 * layers;
    let nodes = (0..n)
        .map(|v| NodeData {
            owner: Player::from_index((v % 2) as usize),
            color: v % 2,
            successors: vec![(v + 1) % n, (v + 2) % n],
            name: None,
        })
        .collect();
    Ok(Game::new(nodes).expect("ladder is a valid game"))
}

/// Seeded random game: uniform owners, uniform colors in `0..colors`,
/// per-node out-degree uniform in the given bounds, successors sampled
/// without replacement and without self-loops.
pub fn gen_random(spec: &RandomSpec) -> Result<Game, GenError> {
    spec.validate()?;
    let n = spec.nodes;
    let high = spec.out_degree.1.min(n - 1);
    let low = spec.out_degree.0;

    let mut taken = vec![false; n as usize];
    let mut nodes = Vec::with_capacity(n as usize);
    for v in 0..n {
        let mut rng = SplitMix64::stream(spec.seed, v as u64);
        let owner = Player::from_index(rng.gen_range(2) as usize);
        let color = rng.gen_range(spec.colors as u64) as u32;
        let degree = low + rng.gen_range((high - low + 1) as u64) as u32;
        let successors = sample_targets(&mut rng, n, v, degree, &mut taken);
        nodes.push(NodeData { owner, color, successors, name: None });
    }
    Ok(Game::new(nodes).expect("random game is valid by construction"))
}

/// `degree` distinct targets excluding `v`, drawn by rejection; returned
/// ascending. `taken` is scratch and left all-false.
fn sample_targets(
    rng: &mut SplitMix64,
    n: u32,
    v: u32,
    degree: u32,
    taken: &mut [bool],
) -> Vec<u32> {
    debug_assert!(degree < n);
    let mut targets = Vec::with_capacity(degree as usize);
    while (targets.len() as u32) < degree {
        // uniform over 0..n-1, shifted past v to exclude the self-loop
        let raw = rng.gen_range(n as u64 - 1) as u32;
        let w = if raw >= v { raw + 1 } else { raw };
        if !taken[w as usize] {
            taken[w as usize] = true;
            targets.push(w);
        }
    }
    for &w in &targets {
        taken[w as usize] = false;
    }
    targets.sort_unstable();
    targets
}

/// Random game with colors 0 and 1 only.
pub fn gen_random_buchi(n: u32, low: u32, high: u32, seed: u64) -> Result<Game, GenError> {
    gen_random(&RandomSpec::new(n, (low, high), 2, seed))
}

/// Random game where every node has exactly one successor (and no
/// self-loop), random owners, random colors in `0..colors`.
pub fn gen_random_deterministic(n: u32, colors: u32, seed: u64) -> Result<Game, GenError> {
    gen_random(&RandomSpec::new(n, (1, 1), colors, seed))
}

/// Weak game: a chain of strongly connected blocks of constant color,
/// with colors non-decreasing along the chain and forward edges only
/// between consecutive blocks. Every block is a random cycle through its
/// nodes plus some extra in-block edges.
pub fn gen_random_weak(blocks: u32, block_size: u32, seed: u64) -> Result<Game, GenError> {
    if blocks < 1 {
        return Err(GenError::TooSmall { family: "weak", what: "blocks", min: 1, got: blocks });
    }
    if block_size < 2 {
        return Err(GenError::TooSmall {
            family: "weak",
            what: "nodes per block",
            min: 2,
            got: block_size,
        });
    }
    let n = blocks * block_size;

    // block colors, sorted so that colors never decrease along edges
    let mut header = SplitMix64::stream(seed, u64::MAX);
    let mut block_colors: Vec<u32> =
        (0..blocks).map(|_| header.gen_range(2 * blocks as u64 + 2) as u32).collect();
    block_colors.sort_unstable();

    let mut succ: Vec<Vec<u32>> = vec![Vec::new(); n as usize];
    for b in 0..blocks {
        let base = b * block_size;
        let mut rng = SplitMix64::stream(seed, b as u64);

        // random cycle through the block keeps it strongly connected
        let mut order: Vec<u32> = (0..block_size).map(|i| base + i).collect();
        for i in (1..order.len()).rev() {
            let j = rng.gen_range(i as u64 + 1) as usize;
            order.swap(i, j);
        }
        for i in 0..order.len() {
            let from = order[i];
            let to = order[(i + 1) % order.len()];
            succ[from as usize].push(to);
        }
        // extra chords
        for v in base..base + block_size {
            if rng.gen_bool() {
                let w = base + rng.gen_range(block_size as u64) as u32;
                if w != v && !succ[v as usize].contains(&w) {
                    succ[v as usize].push(w);
                }
            }
        }
        // forward edges into the next block; the first node always gets
        // one so the blocks stay connected
        if b + 1 < blocks {
            let next_base = base + block_size;
            for v in base..base + block_size {
                if v == base || rng.gen_bool() {
                    let w = next_base + rng.gen_range(block_size as u64) as u32;
                    if !succ[v as usize].contains(&w) {
                        succ[v as usize].push(w);
                    }
                }
            }
        }
    }

    let mut owner_rng = SplitMix64::stream(seed, u64::MAX - 1);
    let nodes = (0..n)
        .map(|v| NodeData {
            owner: Player::from_index(owner_rng.gen_range(2) as usize),
            color: block_colors[(v / block_size) as usize],
            successors: succ[v as usize].clone(),
            name: None,
        })
        .collect();
    Ok(Game::new(nodes).expect("weak game is valid by construction"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pgsolver::serialize_pgsolver;
    use crate::view::GameView;

    #[test]
    fn clique_shape() {
        let g = gen_clique(4).unwrap();
        assert_eq!(g.node_count(), 4);
        for v in g.nodes() {
            assert_eq!(g.successors(v).len(), 3);
            assert!(!g.has_edge(v, v));
            assert_eq!(g.color(v), v);
            assert_eq!(g.owner(v), Player::from_index((v % 2) as usize));
        }
        assert_eq!(gen_clique(1).unwrap_err(), GenError::TooSmall {
            family: "clique",
            what: "nodes",
            min: 2,
            got: 1
        });
        let g2 = gen_clique(2).unwrap();
        assert_eq!(g2.successors(0), &[1]);
        assert_eq!(g2.successors(1), &[0]);
    }

    #[test]
    fn ladder_shape() {
        let g = gen_ladder(1).unwrap();
        assert_eq!(g.node_count(), 2);
        GameView::full(&g).validate().unwrap();

        let g = gen_ladder(5).unwrap();
        assert_eq!(g.node_count(), 10);
        for v in g.nodes() {
            assert!(g.color(v) <= 1);
            assert_eq!(g.successors(v), &{
                let mut e = [(v + 1) % 10, (v + 2) % 10];
                e.sort_unstable();
                e
            });
        }
    }

    #[test]
    fn random_respects_spec() {
        let spec = RandomSpec::new(500, (1, 5), 5, 42);
        let g = gen_random(&spec).unwrap();
        assert_eq!(g.node_count(), 500);
        for v in g.nodes() {
            let d = g.successors(v).len();
            assert!((1..=5).contains(&d));
            assert!(!g.has_edge(v, v));
            assert!(g.color(v) < 5);
        }
    }

    #[test]
    fn random_is_deterministic_in_seed() {
        let spec = RandomSpec::new(64, (2, 7), 9, 1234);
        let a = serialize_pgsolver(&gen_random(&spec).unwrap());
        let b = serialize_pgsolver(&gen_random(&spec).unwrap());
        assert_eq!(a, b);
        let other = RandomSpec { seed: 1235, ..spec };
        assert_ne!(a, serialize_pgsolver(&gen_random(&other).unwrap()));
    }

    #[test]
    fn random_two_nodes_forced_cycle() {
        let g = gen_random(&RandomSpec::new(2, (1, 1), 1, 7)).unwrap();
        assert_eq!(g.successors(0), &[1]);
        assert_eq!(g.successors(1), &[0]);
        assert_eq!(g.color(0), 0);
        assert_eq!(g.color(1), 0);
    }

    #[test]
    fn buchi_games_have_two_colors() {
        for seed in 0..20 {
            let g = gen_random_buchi(30, 1, 4, seed).unwrap();
            assert!(g.nodes().all(|v| g.color(v) <= 1));
        }
        assert!(gen_random_buchi(1, 1, 1, 0).is_err());
    }

    #[test]
    fn deterministic_games_have_out_degree_one() {
        for seed in 0..20 {
            let g = gen_random_deterministic(40, 10, seed).unwrap();
            for v in g.nodes() {
                assert_eq!(g.successors(v).len(), 1);
                assert!(!g.has_edge(v, v));
            }
        }
        assert!(gen_random_deterministic(1, 1, 0).is_err());
    }

    #[test]
    fn weak_games_have_monotone_colors() {
        for seed in 0..20 {
            let g = gen_random_weak(6, 5, seed).unwrap();
            GameView::full(&g).validate().unwrap();
            for v in g.nodes() {
                for &w in g.successors(v) {
                    assert!(g.color(v) <= g.color(w), "edge ({v},{w}) decreases color");
                }
            }
        }
        // a single block is a constant-color strongly connected game
        let g = gen_random_weak(1, 4, 3).unwrap();
        let c = g.color(0);
        assert!(g.nodes().all(|v| g.color(v) == c));
        assert!(gen_random_weak(1, 1, 0).is_err());
    }

    #[test]
    fn weak_blocks_are_the_sccs() {
        use crate::scc::scc_decompose;
        for seed in [5u64, 6, 7] {
            let g = gen_random_weak(4, 6, seed).unwrap();
            let view = GameView::full(&g);
            let sccs = scc_decompose(&view);
            assert_eq!(sccs.len(), 4);
            for scc in &sccs {
                assert_eq!(scc.len(), 6);
                let mut colors = scc.iter().map(|v| g.color(v));
                let first = colors.next().unwrap();
                assert!(colors.all(|c| c == first));
            }
        }
    }

    #[test]
    fn ladder_and_clique_need_two_fatal_attractors() {
        use crate::solvers::psolb;
        for game in [gen_ladder(1 << 10).unwrap(), gen_clique(64).unwrap()] {
            let r = psolb(&GameView::full(&game));
            assert!(r.solved_completely());
            assert_eq!(r.stats.fatal_attractors, 2);
        }
    }

    #[test]
    fn splitmix_reference_values() {
        // Reference outputs of SplitMix64 for seed 1234567 (first three
        // draws), matching the published algorithm.
        let mut rng = SplitMix64::new(1234567);
        assert_eq!(rng.next_u64(), 6457827717110365317);
        assert_eq!(rng.next_u64(), 3203168211198807973);
        assert_eq!(rng.next_u64(), 9817491932198370423);
    }
}
