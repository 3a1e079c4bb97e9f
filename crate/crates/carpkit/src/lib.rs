//! Arc routing toolkit for capacitated instances on undirected graphs
//! with exact integer costs and demands.
//!
//! The toolkit centers on a cost-preserving reduction to the
//! triangle-inequality case: [`reduction::metric_closure`] derives the
//! modified cost tables and the saving, [`approx`] runs a
//! route-first/cluster-second heuristic on the metric instance, and
//! [`reduction::normalize_solution`] plus [`reduction::lift_solution`]
//! carry the result back to the original instance at exactly the metric
//! cost plus the saving. [`exact`] provides a brute-force oracle for
//! desk-scale instances, [`format`] the text formats, [`generate`] seeded
//! random instances, and [`tsp`] the vertex-splitting transformation.

pub mod approx;
pub mod apsp;
pub mod cost;
pub mod euler;
pub mod exact;
pub mod format;
pub mod generate;
pub mod instance;
pub mod matching;
pub mod reduction;
pub mod solution;
pub mod tsp;
pub mod validate;

pub use cost::{CostFunction, CostMode};
pub use instance::{Edge, EdgeId, Graph, Instance, InstanceError, Vertex};
pub use solution::{Route, Solution, Step};
pub use validate::{validate, Violation};

#[cfg(test)]
mod thread_safety {
    // Core data is immutable after construction and shareable across
    // threads without locking.
    fn assert_shareable<T: Send + Sync>() {}

    #[test]
    fn core_types_are_send_and_sync() {
        assert_shareable::<crate::Instance>();
        assert_shareable::<crate::Solution>();
        assert_shareable::<crate::CostFunction>();
        assert_shareable::<crate::reduction::ReductionArtifacts>();
        assert_shareable::<crate::apsp::Apsp>();
    }
}
