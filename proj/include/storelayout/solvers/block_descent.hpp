#pragma once

#include <algorithm>

#include "storelayout/solvers/tabu_search.hpp"

namespace storelayout {

namespace detail {

/// Objective terms touching at least one product of `block`.
inline double block_contribution(const QapInstance& inst, const Assignment& a, const std::vector<int>& block,
                                 const std::vector<char>& in_block) {
    const auto& f = inst.flow();
    const auto& e = inst.exposure();
    const std::size_t n = inst.size();
    double v = 0.0;
    for (int i : block) {
        const int pi = a[i];
        for (std::size_t j = 0; j < n; ++j) {
            const int pj = a[j];
            v += f(i, j) * e(pi, pj);
            if (!in_block[j]) v += f(j, i) * e(pj, pi);
        }
    }
    return v;
}

}  // namespace detail

/// Cyclic block-coordinate ascent for level-2 instances.
///
/// Blocks are the categories in index order. Each block's within-location
/// permutation is optimized exhaustively while the rest stays fixed; blocks
/// larger than `config.block_exhaustive_cap` get a within-block tabu search
/// instead. Only strict improvements are accepted, and cycles repeat until
/// one changes nothing. The objective after every cycle is kept in
/// `trace.history`.
inline SolveResult block_descent(const QapInstance& inst, const SolverConfig& config,
                                 const Assignment* start = nullptr) {
    if (inst.level() != Level::level2 || !inst.hierarchy())
        throw ValidationError("block descent needs a level-2 instance");
    config.validate();
    Stopwatch clock;
    const std::size_t n = inst.size();
    Assignment cur = start ? *start : greedy_assignment(inst);
    if (start) {
        const auto report = check_feasible(inst, cur);
        if (!report.ok()) throw ValidationError("block descent start is infeasible:\n" + report.summary());
    }

    std::vector<std::vector<int>> blocks;
    for (auto& members : inst.hierarchy()->products_of_group())
        if (members.size() > 1) blocks.push_back(std::move(members));

    SolveResult result;
    double value = objective_unchecked(inst, cur);
    result.trace.history.push_back(value);
    bool improved = !blocks.empty();
    while (improved) {
        improved = false;
        ++result.trace.cycles;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const auto& block = blocks[b];
            if (block.size() > config.block_exhaustive_cap) {
                SolverConfig sub = config;
                sub.seed = derive_seed(config.seed, 1'000'000 + b);
                sub.threads = 1;
                auto r = tabu_search(inst, sub, &cur, &block);
                result.trace.absorb(r.trace);
                if (r.objective > value + objective_tol(value)) {
                    cur = r.best;
                    value = r.objective;
                    improved = true;
                    ++result.trace.improvements;
                }
                continue;
            }
            std::vector<char> in_block(n, 0);
            for (int i : block) in_block[i] = 1;
            std::vector<int> slots;
            for (int i : block) slots.push_back(cur[i]);
            std::sort(slots.begin(), slots.end());

            const double base = detail::block_contribution(inst, cur, block, in_block);
            double best = base;
            std::vector<int> best_slots;
            Assignment trial = cur;
            do {
                for (std::size_t t = 0; t < block.size(); ++t) trial[block[t]] = slots[t];
                const double v = detail::block_contribution(inst, trial, block, in_block);
                if (v > best + objective_tol(best, value)) {
                    best = v;
                    best_slots = slots;
                }
            } while (std::next_permutation(slots.begin(), slots.end()));
            if (!best_slots.empty()) {
                for (std::size_t t = 0; t < block.size(); ++t) cur[block[t]] = best_slots[t];
                value = objective_unchecked(inst, cur);
                improved = true;
                ++result.trace.improvements;
            }
        }
        result.trace.history.push_back(value);
        if (clock.seconds() >= config.time_limit_seconds) {
            result.trace.limit_reached = true;
            result.trace.notes.push_back("block descent stopped at its time limit");
            break;
        }
    }
    for (const auto& block : blocks)
        if (block.size() > config.block_exhaustive_cap) {
            result.trace.notes.push_back("a block of " + std::to_string(block.size()) +
                                         " products exceeded the exhaustive cap; tabu search used for it");
            break;
        }
    result.best = cur;
    result.objective = objective_unchecked(inst, cur);
    result.wall_seconds = clock.seconds();
    return result;
}

}  // namespace storelayout
