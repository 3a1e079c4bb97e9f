//! Seeded random instance generation with a documented generator, so the
//! same parameters yield byte-identical instances on any platform or in
//! any reimplementation.

use thiserror::Error;

use crate::instance::{Edge, Graph, Instance, InstanceError, Vertex};

/// SplitMix64: `state += 0x9E3779B97F4A7C15`, then the output is mixed by
/// `z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
/// z *= 0x94D049BB133111EB; z ^= z >> 31` (all arithmetic mod 2^64).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish draw in `0..bound` by modulo reduction (the slight bias
    /// is irrelevant here and keeps the stream trivially reproducible).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        self.next_u64() % bound
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid generator parameter: {0}")]
    BadParameter(&'static str),
    #[error("could not generate connected instance in {0} attempts")]
    RetriesExhausted(usize),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

const RETRY_LIMIT: usize = 100;

/// Generates a random instance. Deterministic for fixed parameters.
///
/// One attempt draws, for each vertex pair `(u, v)` with `u < v` in
/// ascending order: an inclusion draw (`below(1_000_000) <
/// round(edge_prob * 1e6)`), then for included edges a cost draw
/// (`1 + below(max_cost)`), a demand-flag draw (`below(2)`), and for
/// positive flags a demand draw (`1 + below(max_demand)`). The depot is
/// vertex 1. Attempts whose required edges are not all reachable from the
/// depot are discarded and the stream continues into the next attempt.
pub fn generate_random(
    seed: u64,
    vertices: usize,
    edge_prob: f64,
    max_cost: u64,
    max_demand: u64,
    capacity: u64,
) -> Result<Instance, GenError> {
    if vertices == 0 {
        return Err(GenError::BadParameter("vertex count must be positive"));
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(GenError::BadParameter("edge probability must be in [0, 1]"));
    }
    if max_cost == 0 {
        return Err(GenError::BadParameter("max cost must be positive"));
    }
    if max_demand == 0 {
        return Err(GenError::BadParameter("max demand must be positive"));
    }
    if capacity < max_demand {
        return Err(GenError::BadParameter(
            "capacity must be at least the max demand",
        ));
    }

    let threshold = (edge_prob * 1_000_000.0).round() as u64;
    let mut rng = SplitMix64::new(seed);

    for _ in 0..RETRY_LIMIT {
        let mut edges = Vec::new();
        for u in 0..vertices {
            for v in (u + 1)..vertices {
                if rng.below(1_000_000) >= threshold {
                    continue;
                }
                let cost = 1 + rng.below(max_cost);
                let demand = if rng.below(2) == 1 {
                    1 + rng.below(max_demand)
                } else {
                    0
                };
                edges.push(Edge { u, v, cost, demand });
            }
        }
        if !required_reachable(vertices, &edges, 0) {
            continue;
        }
        let graph = Graph::new(vertices, edges)?;
        return Ok(Instance::new(graph, 0, capacity)?);
    }
    Err(GenError::RetriesExhausted(RETRY_LIMIT))
}

/// True when every endpoint of a positive-demand edge is reachable from
/// the depot over the generated edges.
fn required_reachable(vertices: usize, edges: &[Edge], depot: Vertex) -> bool {
    let mut adjacency: Vec<Vec<Vertex>> = vec![Vec::new(); vertices];
    for e in edges {
        adjacency[e.u].push(e.v);
        adjacency[e.v].push(e.u);
    }
    let mut seen = vec![false; vertices];
    let mut stack = vec![depot];
    seen[depot] = true;
    while let Some(v) = stack.pop() {
        for &w in &adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    edges
        .iter()
        .filter(|e| e.demand > 0)
        .all(|e| seen[e.u] && seen[e.v])
}
