//! Cross-module behavior on seeded instance families: the reduction
//! transformations compose with the heuristic and the oracle exactly as
//! the cost accounting promises.

mod common;

use carpkit::approx::{approximate_metric, solve};
use carpkit::cost::{CostFunction, CostMode};
use carpkit::exact::solve_exact;
use carpkit::generate::generate_random;
use carpkit::instance::Instance;
use carpkit::reduction::{
    cost_gap, lift_solution, metric_closure, normalize_solution, reduced_instance,
    ReductionArtifacts,
};
use carpkit::solution::{Route, Solution, Step};
use carpkit::tsp::{tsp_to_carp, TspInstance};
use carpkit::validate::validate;

use proptest::prelude::*;

/// A feasible metric solution with extra deadhead work: a closed detour
/// from the depot over each shortcut edge is prepended to the first route,
/// so normalization has occurrences to rewrite.
fn with_shortcut_detours(
    solution: &Solution,
    instance: &Instance,
    artifacts: &ReductionArtifacts,
) -> Solution {
    let mut out = solution.clone();
    if out.routes.is_empty() {
        return out;
    }
    let mut prefix = Vec::new();
    for &edge in artifacts.shortcut_edges() {
        let e = instance.graph.edge(edge);
        prefix.extend(artifacts.path_steps(instance.depot, e.u));
        prefix.push(Step::deadhead(edge, e.u, e.v));
        prefix.extend(artifacts.path_steps(e.v, instance.depot));
    }
    prefix.extend(out.routes[0].steps.iter().copied());
    out.routes[0] = Route::new(prefix);
    out
}

#[test]
fn transformations_preserve_costs_on_seeded_suite() {
    for (seed, inst) in common::seeded_suite(60, 6) {
        let art = metric_closure(&inst).expect("suite instances are connected");
        let metric = reduced_instance(&inst, &art, CostMode::FullTriangle);
        if inst.required_edges().is_empty() {
            continue;
        }
        let approx = approximate_metric(&metric, &art).unwrap();
        for metric_solution in [
            approx.solution.clone(),
            with_shortcut_detours(&approx.solution, &inst, &art),
        ] {
            assert!(
                validate(&metric, &metric_solution).is_empty(),
                "seed {seed}: metric solution must be feasible"
            );
            let full_before = art.full_costs().solution_cost(&metric_solution);

            let normalized = normalize_solution(&inst, &metric_solution, &art)
                .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            assert_eq!(
                art.full_costs().solution_cost(&normalized),
                full_before,
                "seed {seed}: normalization must preserve the full-triangle cost"
            );
            for &edge in art.shortcut_edges() {
                let occurrences: usize = normalized
                    .routes
                    .iter()
                    .map(|r| r.steps.iter().filter(|s| s.edge == edge).count())
                    .sum();
                assert_eq!(occurrences, 1, "seed {seed}: shortcut edge {edge}");
            }

            let down_cost = art.down_costs().solution_cost(&normalized);
            let lifted = lift_solution(&inst, &normalized, &art).unwrap();
            assert_eq!(
                CostFunction::original(&inst).solution_cost(&lifted),
                down_cost,
                "seed {seed}: lift must preserve the down-triangle cost"
            );
            assert!(
                validate(&inst, &lifted).is_empty(),
                "seed {seed}: lifted solution must be feasible for the original instance"
            );

            let gap = cost_gap(&metric_solution, &art).unwrap();
            assert!(gap.holds(), "seed {seed}: cost gap must cover the saving");
        }
    }
}

#[test]
fn pipeline_identity_and_bounds_on_seeded_suite() {
    for (seed, inst) in common::seeded_suite(60, 6) {
        let (solution, report) = solve(&inst, 8).unwrap();
        assert!(validate(&inst, &solution).is_empty(), "seed {seed}");
        assert!(report.identity_ok, "seed {seed}: final = metric + saving");
        assert_eq!(
            report.final_cost,
            report.metric_cost + report.saving,
            "seed {seed}"
        );
        assert_eq!(report.down_cost, report.final_cost, "seed {seed}");
        assert!(
            report.final_cost >= report.lower_bound + report.saving || report.required_count == 0,
            "seed {seed}: bound exceeded cost"
        );
        if let Some(opt) = report.exact_optimum {
            assert!(report.final_cost >= opt, "seed {seed}");
        }
    }
}

#[test]
fn feasible_solutions_never_cost_more_under_down_triangle() {
    for (seed, inst) in common::seeded_suite(40, 6) {
        let (solution, _) = solve(&inst, 8).unwrap();
        let art = metric_closure(&inst).unwrap();
        let original = CostFunction::original(&inst).solution_cost(&solution);
        let down = art.down_costs().solution_cost(&solution);
        let full = art.full_costs().solution_cost(&solution);
        assert!(down <= original, "seed {seed}");
        assert!(full <= down, "seed {seed}");
    }
}

#[test]
fn large_instances_engage_greedy_matching_but_keep_the_identity() {
    // 22 vertices and ~half the edges required: far beyond the oracle
    // limit, with enough odd-degree vertices for the greedy fallback.
    let inst = generate_random(5, 22, 0.4, 30, 3, 6).unwrap();
    let (solution, report) = solve(&inst, 8).unwrap();
    assert!(report.required_count > 8);
    assert!(report.matching_heuristic);
    assert!(report.exact_optimum.is_none());
    assert!(report.identity_ok);
    assert!(validate(&inst, &solution).is_empty());
    assert!(report.to_text().contains("matching heuristic\n"));
}

#[test]
fn oracle_monotone_in_capacity() {
    for (seed, inst) in common::seeded_suite(25, 4) {
        let cf = CostFunction::original(&inst);
        let base = solve_exact(&inst, &cf, 8).unwrap().optimum;
        let relaxed = Instance::new(inst.graph.clone(), inst.depot, inst.capacity + 1).unwrap();
        let wider = solve_exact(&relaxed, &CostFunction::original(&relaxed), 8)
            .unwrap()
            .optimum;
        assert!(wider <= base, "seed {seed}: capacity {}", inst.capacity);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn generated_instances_round_trip_and_solve(seed in 1u64..5000) {
        if let Ok(inst) = generate_random(seed, 7, 0.6, 15, 3, 4) {
            let text = carpkit::format::write_instance(&inst);
            let again = carpkit::format::parse_instance(&text).unwrap();
            prop_assert_eq!(&again, &inst);
            let (solution, report) = solve(&inst, 6).unwrap();
            prop_assert!(validate(&inst, &solution).is_empty());
            prop_assert!(report.identity_ok);
        }
    }

    #[test]
    fn split_transformation_shape(n in 2usize..6, cost in 1u64..50) {
        let mut table = vec![vec![0u64; n]; n];
        for (u, row) in table.iter_mut().enumerate() {
            for (v, cell) in row.iter_mut().enumerate() {
                if u != v {
                    *cell = cost + ((u + v) as u64);
                }
            }
        }
        let tsp = TspInstance::new(table).unwrap();
        let inst = tsp_to_carp(&tsp, n as u64).unwrap();
        prop_assert_eq!(inst.graph.vertex_count(), 2 * n);
        prop_assert_eq!(inst.required_edges().len(), n);
        prop_assert_eq!(inst.total_demand(), n as u64);
    }
}
