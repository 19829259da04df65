#pragma once

#include <algorithm>
#include <numeric>

#include "storelayout/solvers/common.hpp"

namespace storelayout {

/// Exhaustive enumeration of every feasible assignment. Verification oracle
/// for the other solvers; refuses instances with more than `cap` free
/// products. Integrated instances additionally keep each category's
/// subcategories inside one location.
inline SolveResult brute_force(const QapInstance& inst, std::size_t cap = 9) {
    if (inst.free_product_count() > cap)
        throw SizeError("brute force limited to " + std::to_string(cap) + " free products, instance has " +
                        std::to_string(inst.free_product_count()));
    Stopwatch clock;
    const std::size_t n = inst.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return inst.eligible_positions(a).size() < inst.eligible_positions(b).size();
    });

    const bool grouped = inst.level() == Level::integrated;
    const Hierarchy* h = grouped ? &*inst.hierarchy() : nullptr;
    std::vector<int> loc_of_group, group_of_loc, group_refs;
    if (h) {
        loc_of_group.assign(h->group_count, -1);
        group_of_loc.assign(h->group_count, -1);
        group_refs.assign(h->group_count, 0);
    }

    Assignment current(n);
    std::vector<char> used(n, 0);
    Assignment best;
    double best_value = 0.0;
    bool have_best = false;
    SolverTrace trace;

    auto dfs = [&](auto&& self, std::size_t depth, double value) -> void {
        ++trace.nodes;
        if (depth == n) {
            if (!have_best || better_solution(value, current, best_value, best)) {
                best = current;
                best_value = value;
                have_best = true;
            }
            return;
        }
        const int i = order[depth];
        for (int k : inst.eligible_positions(i)) {
            if (used[k]) continue;
            int g = -1, l = -1;
            bool fresh = false;
            if (h) {
                g = h->product_group[i];
                l = h->position_group[k];
                if (loc_of_group[g] < 0 && group_of_loc[l] < 0) {
                    if (!h->group_eligibility(g, l)) continue;
                    fresh = true;
                } else if (loc_of_group[g] != l || group_of_loc[l] != g) {
                    continue;
                }
            }
            const double gain = placement_gain(inst, current, i, k);
            current[i] = k;
            used[k] = 1;
            if (h) {
                if (fresh) {
                    loc_of_group[g] = l;
                    group_of_loc[l] = g;
                }
                ++group_refs[g];
            }
            self(self, depth + 1, value + gain);
            if (h) {
                if (--group_refs[g] == 0) {
                    loc_of_group[g] = -1;
                    group_of_loc[l] = -1;
                }
            }
            current[i] = Assignment::unassigned;
            used[k] = 0;
        }
    };
    dfs(dfs, 0, 0.0);
    if (!have_best) throw ModelError("instance has no feasible assignment");

    SolveResult r;
    r.best = best;
    r.objective = objective_unchecked(inst, best);
    r.bound = r.objective;
    r.trace = trace;
    r.wall_seconds = clock.seconds();
    return r;
}

}  // namespace storelayout
