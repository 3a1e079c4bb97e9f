//! Minimum-weight perfect matching on an even vertex set under a distance
//! oracle.
//!
//! Up to [`EXACT_MATCHING_LIMIT`] vertices the matching is exact, by
//! memoized enumeration over pairings of the lowest unmatched vertex.
//! Above that, a greedy nearest-pair heuristic is used and flagged, so
//! callers can suppress any bound claim that depends on exactness.

use std::collections::HashMap;

use crate::instance::Vertex;

/// Largest odd-vertex set matched exactly.
pub const EXACT_MATCHING_LIMIT: usize = 14;

/// A perfect matching as vertex pairs, plus whether the greedy fallback
/// produced it.
#[derive(Debug, Clone)]
pub struct MatchingOutcome {
    pub pairs: Vec<(Vertex, Vertex)>,
    pub heuristic: bool,
}

/// Matches the given vertices (even count) pairwise, minimizing the summed
/// distance. Deterministic for a fixed input order.
pub fn min_weight_matching(
    vertices: &[Vertex],
    dist: impl Fn(Vertex, Vertex) -> u64,
) -> MatchingOutcome {
    assert!(
        vertices.len().is_multiple_of(2),
        "matching needs an even vertex set"
    );
    if vertices.is_empty() {
        return MatchingOutcome {
            pairs: Vec::new(),
            heuristic: false,
        };
    }
    if vertices.len() <= EXACT_MATCHING_LIMIT {
        MatchingOutcome {
            pairs: exact_matching(vertices, &dist),
            heuristic: false,
        }
    } else {
        MatchingOutcome {
            pairs: greedy_matching(vertices, &dist),
            heuristic: true,
        }
    }
}

fn exact_matching(
    vertices: &[Vertex],
    dist: &impl Fn(Vertex, Vertex) -> u64,
) -> Vec<(Vertex, Vertex)> {
    let n = vertices.len();
    let full: u32 = (1 << n) - 1;
    // memo[mask] = (cost, partner chosen for the lowest set bit)
    let mut memo: HashMap<u32, (u64, usize)> = HashMap::new();

    fn solve(
        mask: u32,
        n: usize,
        vertices: &[Vertex],
        dist: &impl Fn(Vertex, Vertex) -> u64,
        memo: &mut HashMap<u32, (u64, usize)>,
    ) -> u64 {
        if mask == 0 {
            return 0;
        }
        if let Some(&(c, _)) = memo.get(&mask) {
            return c;
        }
        let i = mask.trailing_zeros() as usize;
        let mut best = u64::MAX;
        let mut best_j = usize::MAX;
        for j in (i + 1)..n {
            if mask & (1 << j) == 0 {
                continue;
            }
            let rest = mask & !(1 << i) & !(1 << j);
            let cand =
                dist(vertices[i], vertices[j]).saturating_add(solve(rest, n, vertices, dist, memo));
            if cand < best {
                best = cand;
                best_j = j;
            }
        }
        memo.insert(mask, (best, best_j));
        best
    }

    solve(full, n, vertices, dist, &mut memo);

    let mut pairs = Vec::with_capacity(n / 2);
    let mut mask = full;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let (_, j) = memo[&mask];
        pairs.push((vertices[i], vertices[j]));
        mask &= !(1 << i) & !(1 << j);
    }
    pairs
}

fn greedy_matching(
    vertices: &[Vertex],
    dist: &impl Fn(Vertex, Vertex) -> u64,
) -> Vec<(Vertex, Vertex)> {
    let n = vertices.len();
    let mut taken = vec![false; n];
    let mut pairs = Vec::with_capacity(n / 2);
    for _ in 0..n / 2 {
        let mut best = u64::MAX;
        let mut pick = (usize::MAX, usize::MAX);
        for i in 0..n {
            if taken[i] {
                continue;
            }
            for j in (i + 1)..n {
                if taken[j] {
                    continue;
                }
                let d = dist(vertices[i], vertices[j]);
                if d < best {
                    best = d;
                    pick = (i, j);
                }
            }
        }
        taken[pick.0] = true;
        taken[pick.1] = true;
        pairs.push((vertices[pick.0], vertices[pick.1]));
    }
    pairs
}
