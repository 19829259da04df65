#pragma once

#include <cmath>
#include <limits>

#include "storelayout/solvers/common.hpp"

namespace storelayout {

namespace detail {

struct TabuRun {
    Assignment best;
    double value = 0.0;
    SolverTrace trace;
    std::optional<SolutionPool> pool;
};

inline Assignment perturb(const QapInstance& inst, Assignment a, const std::vector<std::pair<int, int>>& pairs,
                          Rng& rng) {
    if (pairs.empty()) return a;
    const std::size_t steps = 10 * inst.size();
    for (std::size_t t = 0; t < steps; ++t) {
        const auto [x, y] = pairs[rng.below(pairs.size())];
        if (inst.eligible(x, a[y]) && inst.eligible(y, a[x])) std::swap(a[x], a[y]);
    }
    return a;
}

inline TabuRun tabu_restart(const QapInstance& inst, const SolverConfig& config, Assignment start,
                            const std::vector<std::pair<int, int>>& pairs, std::size_t restart,
                            const Stopwatch& clock, bool want_pool) {
    const std::size_t n = inst.size();
    Rng rng(derive_seed(config.seed, restart));
    TabuRun run;
    run.trace.restarts = 1;
    if (want_pool) run.pool.emplace(config.pool_capacity, config.pool_gap);
    Assignment cur = restart == 0 ? std::move(start) : perturb(inst, std::move(start), pairs, rng);
    double value = objective_unchecked(inst, cur);
    run.best = cur;
    run.value = value;
    if (run.pool) run.pool->offer(cur, value);
    if (pairs.empty()) return run;

    std::size_t movable = 0;
    {
        std::vector<char> seen(n, 0);
        for (auto [a, b] : pairs) seen[a] = seen[b] = 1;
        for (char c : seen) movable += c;
    }
    const auto tmin = static_cast<std::int64_t>(std::max(1.0, std::ceil(config.tenure_min * movable)));
    const auto tmax = std::max(tmin, static_cast<std::int64_t>(std::floor(config.tenure_max * movable)));

    // tabu_until(p, k): iteration until which moving p back onto k is tabu
    Matrix<std::size_t> tabu_until(n, n, 0);
    for (std::size_t it = 1; it <= config.iteration_limit; ++it) {
        if ((it & 255) == 0 && clock.seconds() >= config.time_limit_seconds) {
            run.trace.limit_reached = true;
            break;
        }
        int pick = -1, fallback = -1;
        double pick_delta = 0.0, fallback_delta = 0.0;
        for (std::size_t c = 0; c < pairs.size(); ++c) {
            const auto [a, b] = pairs[c];
            const auto d = swap_delta(inst, cur, a, b);
            if (!d) continue;
            if (fallback < 0 || *d > fallback_delta) {
                fallback = static_cast<int>(c);
                fallback_delta = *d;
            }
            const bool tabu = tabu_until(a, cur[b]) >= it && tabu_until(b, cur[a]) >= it;
            const bool aspires = value + *d > run.value + objective_tol(run.value);
            if (tabu && !aspires) continue;
            if (pick < 0 || *d > pick_delta) {
                pick = static_cast<int>(c);
                pick_delta = *d;
            }
        }
        if (fallback < 0) break;  // no feasible swap from here
        if (pick < 0) {
            pick = fallback;
            pick_delta = fallback_delta;
        }
        const auto [a, b] = pairs[pick];
        tabu_until(a, cur[a]) = it + static_cast<std::size_t>(rng.between(tmin, tmax));
        tabu_until(b, cur[b]) = it + static_cast<std::size_t>(rng.between(tmin, tmax));
        std::swap(cur[a], cur[b]);
        value += pick_delta;
        ++run.trace.iterations;
        if (it % 1024 == 0) value = objective_unchecked(inst, cur);

        if (value > run.value + objective_tol(run.value)) {
            value = objective_unchecked(inst, cur);
            if (better_solution(value, cur, run.value, run.best)) {
                run.best = cur;
                run.value = value;
                ++run.trace.improvements;
            }
        }
        if (run.pool && value >= run.pool->floor() - objective_tol(run.pool->floor()))
            run.pool->offer(cur, objective_unchecked(inst, cur));
    }
    return run;
}

}  // namespace detail

/// Multi-restart tabu search over eligible pairwise swaps.
///
/// Restart 0 starts from `start` (greedy when absent); restart r > 0 starts
/// from a seeded random walk of feasible swaps away from it. Moving a
/// product back onto a position it recently left is tabu; a swap is
/// forbidden only when it would do that for both products. Tenure is drawn
/// per move from the configured range scaled by the number of movable
/// products. Tabu moves that beat the restart's best are admitted; when
/// every move is tabu the best one is taken anyway.
///
/// `subset` restricts moves to swaps among those products. Restarts run on
/// `config.threads` workers with independent seeds and are reduced in
/// restart order, so the result does not depend on the thread count.
inline SolveResult tabu_search(const QapInstance& inst, const SolverConfig& config,
                               const Assignment* start = nullptr, const std::vector<int>* subset = nullptr,
                               SolutionPool* pool = nullptr) {
    config.validate();
    Stopwatch clock;
    Assignment initial = start ? *start : greedy_assignment(inst);
    if (start) {
        const auto report = check_feasible(inst, initial);
        if (!report.ok()) throw ValidationError("tabu start is infeasible:\n" + report.summary());
    }
    const auto pairs = swap_candidates(inst, subset);
    const std::size_t restarts = pairs.empty() ? 1 : config.restarts;

    std::vector<detail::TabuRun> runs(restarts);
    parallel_for(restarts, config.threads, [&](std::size_t r) {
        runs[r] = detail::tabu_restart(inst, config, initial, pairs, r, clock, pool != nullptr);
    });

    SolveResult result;
    result.best = runs[0].best;
    result.objective = runs[0].value;
    for (auto& run : runs) {
        result.trace.absorb(run.trace);
        if (better_solution(run.value, run.best, result.objective, result.best)) {
            result.best = run.best;
            result.objective = run.value;
        }
        if (pool) pool->merge(*run.pool);
    }
    result.objective = objective_unchecked(inst, result.best);
    if (result.trace.limit_reached) result.trace.notes.push_back("tabu search stopped at its time limit");
    result.wall_seconds = clock.seconds();
    return result;
}

}  // namespace storelayout
