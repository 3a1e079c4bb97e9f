//! All-pairs shortest paths by cubic dynamic programming over the vertex
//! set, with deterministic path reconstruction.
//!
//! Ties are broken toward the smaller intermediate vertex index (the table
//! is only updated on strict improvement while intermediates are scanned in
//! ascending order), so reconstructed paths are reproducible across runs
//! and platforms.

use crate::instance::{EdgeId, Graph, Vertex};
use crate::solution::Step;

/// Sentinel for "no path".
pub const UNREACHABLE: u64 = u64::MAX;

/// Distance and next-hop tables for one cost table over a graph.
#[derive(Debug, Clone)]
pub struct Apsp {
    n: usize,
    dist: Vec<u64>,
    next: Vec<Option<Vertex>>,
    edge_of_pair: Vec<Option<EdgeId>>,
}

impl Apsp {
    /// Runs the closure over `graph` with `costs[e]` as the cost of edge `e`.
    pub fn compute(graph: &Graph, costs: &[u64]) -> Self {
        let n = graph.vertex_count();
        let mut dist = vec![UNREACHABLE; n * n];
        let mut next: Vec<Option<Vertex>> = vec![None; n * n];
        let mut edge_of_pair: Vec<Option<EdgeId>> = vec![None; n * n];

        for v in 0..n {
            dist[v * n + v] = 0;
            next[v * n + v] = Some(v);
        }
        for (id, e) in graph.edges().iter().enumerate() {
            let c = costs[id];
            for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                edge_of_pair[a * n + b] = Some(id);
                if c < dist[a * n + b] {
                    dist[a * n + b] = c;
                    next[a * n + b] = Some(b);
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                let dik = dist[i * n + k];
                if dik == UNREACHABLE {
                    continue;
                }
                for j in 0..n {
                    let dkj = dist[k * n + j];
                    if dkj == UNREACHABLE {
                        continue;
                    }
                    let through = dik + dkj;
                    if through < dist[i * n + j] {
                        dist[i * n + j] = through;
                        next[i * n + j] = next[i * n + k];
                    }
                }
            }
        }
        Apsp {
            n,
            dist,
            next,
            edge_of_pair,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Shortest-path distance, or [`UNREACHABLE`].
    pub fn distance(&self, u: Vertex, v: Vertex) -> u64 {
        self.dist[u * self.n + v]
    }

    pub fn reachable(&self, u: Vertex, v: Vertex) -> bool {
        self.distance(u, v) != UNREACHABLE
    }

    /// Vertices of one shortest path from `u` to `v`, endpoints included.
    /// Empty when `v` is unreachable; `[u]` when `u == v`.
    pub fn path_vertices(&self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        if u == v {
            return vec![u];
        }
        if !self.reachable(u, v) {
            return Vec::new();
        }
        let mut path = vec![u];
        let mut at = u;
        while at != v {
            at = self.next[at * self.n + v].expect("reachable pair must have a next hop");
            path.push(at);
        }
        path
    }

    /// The shortest path from `u` to `v` as deadhead steps over graph edges.
    pub fn path_steps(&self, u: Vertex, v: Vertex) -> Vec<Step> {
        let verts = self.path_vertices(u, v);
        verts
            .windows(2)
            .map(|w| {
                let edge = self.edge_of_pair[w[0] * self.n + w[1]]
                    .expect("consecutive path vertices must be adjacent");
                Step::deadhead(edge, w[0], w[1])
            })
            .collect()
    }

    /// Exhaustive triangle-inequality check over all vertex triples.
    pub fn triangle_inequality_holds(&self) -> bool {
        for u in 0..self.n {
            for v in 0..self.n {
                let duv = self.distance(u, v);
                if duv == UNREACHABLE {
                    continue;
                }
                for w in 0..self.n {
                    let dvw = self.distance(v, w);
                    if dvw == UNREACHABLE {
                        continue;
                    }
                    if self.distance(u, w) > duv + dvw {
                        return false;
                    }
                }
            }
        }
        true
    }
}
