#pragma once

#include <cmath>

#include "storelayout/solvers/block_descent.hpp"
#include "storelayout/solvers/branch_and_bound.hpp"
#include "storelayout/solvers/brute_force.hpp"
#include "storelayout/solvers/tabu_search.hpp"

namespace storelayout {

/// Pool of up to `config.pool_capacity` distinct level-1 assignments within
/// `config.pool_gap` of the best found. Tabu restarts always run; branch and
/// bound follows when enabled and, if it exhausts its tree, certifies the
/// pool's best. Both only offer solutions to the pool, so the search is the
/// same for every capacity. `summary` receives the best result and bound.
inline SolutionPool solve_level1(const QapInstance& inst, const SolverConfig& config,
                                 SolveResult* summary = nullptr) {
    config.validate();
    SolutionPool pool(config.pool_capacity, config.pool_gap);
    auto best = tabu_search(inst, config, nullptr, nullptr, &pool);
    if (config.level1_branch_and_bound) {
        auto bb = branch_and_bound(inst, config, &pool);
        if (better_solution(bb.objective, bb.best, best.objective, best.best)) {
            best.best = bb.best;
            best.objective = bb.objective;
        }
        best.bound = bb.bound ? std::max(*bb.bound, best.objective) : bb.bound;
        best.trace.absorb(bb.trace);
        best.wall_seconds += bb.wall_seconds;
    }
    if (summary) *summary = std::move(best);
    return pool;
}

/// Level-2 pipeline: greedy start, block descent, tabu refinement over
/// within-block swaps, block descent again.
inline SolveResult solve_level2(const QapInstance& inst, const SolverConfig& config) {
    Stopwatch clock;
    SolveResult out;
    auto first = block_descent(inst, config);
    out.trace.absorb(first.trace);
    auto refined = tabu_search(inst, config, &first.best);
    out.trace.absorb(refined.trace);
    auto last = block_descent(inst, config, &refined.best);
    out.trace.absorb(last.trace);
    out.trace.history = last.trace.history;
    out.best = last.best;
    out.objective = last.objective;
    out.wall_seconds = clock.seconds();
    return out;
}

struct HierarchicalResult {
    SolveResult level1;                 // best level-1 solution with its bound
    SolutionPool pool;                  // level-1 candidates
    std::vector<SolveResult> members;   // level-2 result per pool member
    std::size_t chosen = 0;             // index into pool/members
    SolveResult final;                  // chosen level-2 layout

    const Assignment& category_layout() const { return pool.entries()[chosen].assignment; }
};

/// Two-level pooled heuristic: solve level 1, then level 2 for every pool
/// member, keeping the best level-2 layout (earlier member on ties). Each
/// member gets a seed derived from its pool rank, so enlarging the pool
/// never changes the results of the members it already had.
inline HierarchicalResult solve_hierarchical(const ExposureMatrices& exposures, const TransitionMatrices& transitions,
                                             const BoolMatrix& category_eligibility, const Catalog& catalog,
                                             const StoreGraph& graph, const SolverConfig& config) {
    config.validate();
    Stopwatch clock;
    const auto l1 = build_level1_instance(exposures, transitions, category_eligibility, catalog.category_labels(),
                                          graph.loc_position_labels());
    SolveResult l1_summary;
    auto pool = solve_level1(l1, config, &l1_summary);
    if (pool.empty()) throw ModelError("level-1 solve produced no candidate layouts");

    std::vector<SolveResult> members(pool.size());
    SolverConfig inner = config;
    inner.threads = 1;
    parallel_for(pool.size(), config.threads, [&](std::size_t m) {
        SolverConfig c = inner;
        c.seed = derive_seed(config.seed, 10'000 + m);
        const auto l2 = build_level2_instance(exposures, transitions, pool.entries()[m].assignment, catalog, graph,
                                              &category_eligibility);
        members[m] = solve_level2(l2, c);
    });

    std::size_t chosen = 0;
    for (std::size_t m = 1; m < members.size(); ++m)
        if (members[m].objective > members[chosen].objective + objective_tol(members[chosen].objective))
            chosen = m;

    HierarchicalResult out{std::move(l1_summary), std::move(pool), std::move(members), chosen, {}};
    out.final = out.members[chosen];
    for (const auto& m : out.members) out.final.trace.absorb(m.trace);
    out.final.trace.absorb(out.level1.trace);
    out.final.wall_seconds = clock.seconds();
    return out;
}

struct LayoutEvaluation {
    double exposure = 0.0;
    double travel_distance = 0.0;
    std::optional<double> baseline_exposure;
    std::optional<double> baseline_travel_distance;
    std::optional<double> exposure_delta_pct;   // one decimal
    std::optional<double> distance_delta_pct;
};

inline double round1(double v) {
    const double r = std::round(v * 10.0) / 10.0;
    return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

inline std::optional<double> percent_change(double value, double baseline) {
    if (baseline == 0.0) return value == 0.0 ? std::optional<double>(0.0) : std::nullopt;
    return round1(100.0 * (value - baseline) / std::abs(baseline));
}

/// Flow-weighted shortest-path length between the products' positions.
inline double travel_distance(const QapInstance& inst, const Matrix<double>& distance, const Assignment& a) {
    if (distance.rows() != inst.size() || !distance.is_square())
        throw ModelError("distance matrix does not match the instance");
    double total = 0.0;
    for (std::size_t i = 0; i < inst.size(); ++i)
        for (std::size_t j = 0; j < inst.size(); ++j)
            if (inst.flow()(i, j) != 0.0) total += inst.flow()(i, j) * distance(a[i], a[j]);
    return total;
}

/// Exposure and travel distance of a layout, with percentage changes against
/// `baseline` when given. `inst` supplies flow and exposure; `distance` is
/// indexed like the exposure matrix.
inline LayoutEvaluation evaluate_layout(const QapInstance& inst, const Matrix<double>& distance,
                                        const Assignment& layout, const Assignment* baseline = nullptr) {
    LayoutEvaluation ev;
    ev.exposure = objective(inst, layout);
    ev.travel_distance = travel_distance(inst, distance, layout);
    if (baseline) {
        const auto report = check_feasible(inst, *baseline);
        if (!report.ok()) throw ValidationError("baseline layout is infeasible:\n" + report.summary());
        ev.baseline_exposure = objective_unchecked(inst, *baseline);
        ev.baseline_travel_distance = travel_distance(inst, distance, *baseline);
        ev.exposure_delta_pct = percent_change(ev.exposure, *ev.baseline_exposure);
        ev.distance_delta_pct = percent_change(ev.travel_distance, *ev.baseline_travel_distance);
    }
    return ev;
}

}  // namespace storelayout
