//! Euler circuits on small multigraphs via Hierholzer's algorithm with
//! smallest-edge-id-first tie-breaking.

use crate::instance::Vertex;

/// One traversal in the circuit: multigraph edge index plus direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Traversal {
    pub edge: usize,
    pub from: Vertex,
    pub to: Vertex,
}

/// Finds an Euler circuit starting and ending at `start`.
///
/// Requires every vertex with positive degree to be connected to `start`
/// and all degrees to be even; both hold for the multigraphs built by the
/// tour construction. Edges are taken smallest-index-first, so the circuit
/// is deterministic.
pub fn euler_circuit(
    vertex_count: usize,
    edges: &[(Vertex, Vertex)],
    start: Vertex,
) -> Vec<Traversal> {
    let mut adjacency: Vec<Vec<(usize, Vertex)>> = vec![Vec::new(); vertex_count];
    for (idx, &(u, v)) in edges.iter().enumerate() {
        adjacency[u].push((idx, v));
        adjacency[v].push((idx, u));
    }
    for list in &mut adjacency {
        list.sort_unstable();
        list.reverse(); // pop() yields the smallest edge index first
    }
    debug_assert!(adjacency.iter().all(|l| l.len() % 2 == 0));

    let mut used = vec![false; edges.len()];
    // Stack of (vertex, edge used to arrive there).
    let mut stack: Vec<(Vertex, Option<usize>)> = vec![(start, None)];
    let mut trail: Vec<(Vertex, Option<usize>)> = Vec::new();

    while let Some(&(v, _)) = stack.last() {
        let mut advanced = false;
        while let Some(&(idx, to)) = adjacency[v].last() {
            if used[idx] {
                adjacency[v].pop();
                continue;
            }
            used[idx] = true;
            adjacency[v].pop();
            stack.push((to, Some(idx)));
            advanced = true;
            break;
        }
        if !advanced {
            trail.push(stack.pop().unwrap());
        }
    }
    debug_assert!(used.iter().all(|&u| u), "multigraph must be connected");

    trail.reverse();
    trail
        .windows(2)
        .map(|w| Traversal {
            edge: w[1].1.expect("every move after the start uses an edge"),
            from: w[0].0,
            to: w[1].0,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_circuit(n: usize, edges: &[(Vertex, Vertex)], start: Vertex) -> Vec<Traversal> {
        let circuit = euler_circuit(n, edges, start);
        assert_eq!(circuit.len(), edges.len(), "every edge exactly once");
        let mut seen = vec![false; edges.len()];
        let mut at = start;
        for t in &circuit {
            assert_eq!(t.from, at);
            assert!(!seen[t.edge]);
            seen[t.edge] = true;
            let (u, v) = edges[t.edge];
            assert!((t.from, t.to) == (u, v) || (t.from, t.to) == (v, u));
            at = t.to;
        }
        assert_eq!(at, start, "circuit must close");
        circuit
    }

    #[test]
    fn triangle_circuit() {
        check_circuit(3, &[(0, 1), (1, 2), (2, 0)], 0);
    }

    #[test]
    fn doubled_path_circuit() {
        // Path 0-1-2 with every edge doubled: classic out-and-back.
        check_circuit(3, &[(0, 1), (0, 1), (1, 2), (1, 2)], 0);
    }

    #[test]
    fn figure_eight_through_start() {
        // Two triangles sharing vertex 0.
        check_circuit(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)], 0);
    }

    #[test]
    fn deterministic_smallest_edge_first() {
        let a = check_circuit(3, &[(0, 1), (1, 2), (2, 0), (0, 1), (1, 2), (2, 0)], 0);
        let b = check_circuit(3, &[(0, 1), (1, 2), (2, 0), (0, 1), (1, 2), (2, 0)], 0);
        assert_eq!(a, b);
        assert_eq!(a[0].edge, 0);
    }

    #[test]
    fn empty_graph_gives_empty_circuit() {
        let circuit = euler_circuit(2, &[], 0);
        assert!(circuit.is_empty());
    }
}
