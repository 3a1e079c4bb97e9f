//! Independent reference implementations used to cross-check the library:
//! shortest paths by repeated edge relaxation, and an exact optimum by
//! enumerating partitions and permutations with orientations, with no
//! dynamic programming shared with the library's oracle.
#![allow(dead_code)] // each test binary uses its own subset

use carpkit::cost::CostFunction;
use carpkit::generate::generate_random;
use carpkit::instance::{EdgeId, Instance};

pub const INF: u64 = u64::MAX;

/// All-pairs shortest paths by |V| rounds of relaxing every edge.
pub fn relaxation_apsp(instance: &Instance, cf: &CostFunction) -> Vec<Vec<u64>> {
    let n = instance.graph.vertex_count();
    let mut dist = vec![vec![INF; n]; n];
    for (v, row) in dist.iter_mut().enumerate() {
        row[v] = 0;
    }
    for _ in 0..n {
        let mut changed = false;
        for (id, e) in instance.graph.edges().iter().enumerate() {
            let c = cf.edge_cost(id);
            for row in dist.iter_mut() {
                for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                    if row[a] != INF && row[a] + c < row[b] {
                        row[b] = row[a] + c;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, x.clone());
            out.push(tail);
        }
    }
    out
}

/// Cheapest single-route cost serving exactly `block`, by trying every
/// service order and every orientation pattern.
fn permutation_route_cost(
    instance: &Instance,
    cf: &CostFunction,
    dist: &[Vec<u64>],
    block: &[EdgeId],
) -> u64 {
    let depot = instance.depot;
    let mut best = INF;
    for order in permutations(block) {
        for orient in 0..(1u32 << order.len()) {
            let mut cost = 0u64;
            let mut at = depot;
            let mut ok = true;
            for (i, &id) in order.iter().enumerate() {
                let e = instance.graph.edge(id);
                let (start, end) = if orient & (1 << i) == 0 {
                    (e.u, e.v)
                } else {
                    (e.v, e.u)
                };
                if dist[at][start] == INF {
                    ok = false;
                    break;
                }
                cost += dist[at][start] + cf.edge_cost(id);
                at = end;
            }
            if ok && dist[at][depot] != INF {
                cost += dist[at][depot];
                best = best.min(cost);
            }
        }
    }
    best
}

/// Enumerates set partitions by always putting the first remaining element
/// into a block together with every subset of the rest.
fn partitions(items: &[EdgeId]) -> Vec<Vec<Vec<EdgeId>>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let first = items[0];
    let rest = &items[1..];
    let mut out = Vec::new();
    for mask in 0..(1u32 << rest.len()) {
        let mut block = vec![first];
        let mut remaining = Vec::new();
        for (i, &x) in rest.iter().enumerate() {
            if mask & (1 << i) != 0 {
                block.push(x);
            } else {
                remaining.push(x);
            }
        }
        for mut partition in partitions(&remaining) {
            partition.insert(0, block.clone());
            out.push(partition);
        }
    }
    out
}

/// Exact optimum by full enumeration; intended for at most 5 required
/// edges.
pub fn permutation_optimum(instance: &Instance, cf: &CostFunction) -> u64 {
    let required = instance.required_edges();
    assert!(
        required.len() <= 5,
        "enumeration oracle is for tiny instances"
    );
    let dist = relaxation_apsp(instance, cf);
    let mut best = INF;
    for partition in partitions(&required) {
        let mut total = 0u64;
        let mut feasible = true;
        for block in &partition {
            let demand: u64 = block.iter().map(|&e| instance.graph.edge(e).demand).sum();
            if demand > instance.capacity {
                feasible = false;
                break;
            }
            let c = permutation_route_cost(instance, cf, &dist, block);
            if c == INF {
                feasible = false;
                break;
            }
            total += c;
        }
        if feasible {
            best = best.min(total);
        }
    }
    if required.is_empty() {
        0
    } else {
        best
    }
}

/// Deterministic instance suite: seeds scan upward until `count`
/// instances with at most `max_required` required edges are collected.
/// Capacity and demand caps cycle so several capacities are exercised.
pub fn seeded_suite(count: usize, max_required: usize) -> Vec<(u64, Instance)> {
    let shapes = [(2u64, 2u64), (3, 3), (5, 3)];
    let mut out = Vec::new();
    let mut seed = 1u64;
    while out.len() < count {
        let (capacity, max_demand) = shapes[(seed as usize) % shapes.len()];
        if let Ok(inst) = generate_random(seed, 8, 0.5, 20, max_demand, capacity) {
            if inst.required_edges().len() <= max_required {
                out.push((seed, inst));
            }
        }
        seed += 1;
    }
    out
}
