#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "storelayout/qap.hpp"
#include "storelayout/rng.hpp"

namespace storelayout {

struct SolverConfig {
    std::uint64_t seed = 1;
    double time_limit_seconds = 600.0;
    std::size_t iteration_limit = 50'000;  // tabu iterations per restart
    double tenure_min = 0.9;               // tabu tenure range, fractions of the free product count
    double tenure_max = 1.1;
    std::size_t restarts = 5;
    std::size_t node_limit = 10'000'000;  // branch and bound
    std::size_t pool_capacity = 10;
    double pool_gap = 0.001;
    std::size_t brute_force_cap = 9;       // free products
    std::size_t block_exhaustive_cap = 7;  // block members
    std::size_t threads = 1;
    bool level1_branch_and_bound = true;

    void validate() const {
        if (pool_capacity < 1) throw InputError("pool capacity must be at least 1");
        if (!(pool_gap >= 0.0 && pool_gap < 1.0)) throw InputError("pool gap must lie in [0, 1)");
        if (!(time_limit_seconds > 0.0)) throw InputError("time limit must be positive");
        if (iteration_limit == 0 || restarts == 0 || node_limit == 0 || threads == 0)
            throw InputError("iteration, restart, node and thread limits must be positive");
        if (!(tenure_min > 0.0 && tenure_min <= tenure_max))
            throw InputError("tabu tenure range must satisfy 0 < min <= max");
    }
};

struct SolverTrace {
    std::size_t iterations = 0;
    std::size_t restarts = 0;
    std::size_t nodes = 0;
    std::size_t cycles = 0;
    std::size_t improvements = 0;
    bool limit_reached = false;
    std::vector<std::string> notes;
    std::vector<double> history;  // objective after each descent cycle

    void absorb(const SolverTrace& o) {
        iterations += o.iterations;
        restarts += o.restarts;
        nodes += o.nodes;
        cycles += o.cycles;
        improvements += o.improvements;
        limit_reached = limit_reached || o.limit_reached;
        notes.insert(notes.end(), o.notes.begin(), o.notes.end());
    }
};

struct SolveResult {
    Assignment best;
    double objective = 0.0;
    std::optional<double> bound;  // proven upper bound, when a solver has one
    double wall_seconds = 0.0;
    SolverTrace trace;

    /// (bound - best) / |bound|; nullopt without a bound.
    std::optional<double> gap() const {
        if (!bound) return std::nullopt;
        const double denom = std::abs(*bound);
        if (denom == 0.0) return 0.0;
        return std::max(0.0, (*bound - objective) / denom);
    }
};

/// Runs task(0..count-1) on up to `threads` workers. Tasks must write only
/// to their own slot; callers reduce in index order afterwards. The first
/// exception thrown by any task is rethrown.
template <typename Task>
void parallel_for(std::size_t count, std::size_t threads, Task&& task) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(threads, count); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

/// Gain of placing `product` at `position` given the already placed products.
inline double placement_gain(const QapInstance& inst, const Assignment& a, int product, int position) {
    const auto& f = inst.flow();
    const auto& e = inst.exposure();
    double g = f(product, product) * e(position, position);
    for (std::size_t j = 0; j < inst.size(); ++j) {
        const int pj = a[j];
        if (pj < 0 || static_cast<int>(j) == product) continue;
        g += f(product, j) * e(position, pj) + f(j, product) * e(pj, position);
    }
    return g;
}

/// Completes a partial assignment through augmenting paths, keeping as many
/// placements as possible.
inline Assignment repair_assignment(const QapInstance& inst, const Assignment& partial) {
    auto m = perfect_matching(inst.eligibility(), partial.position_of);
    if (!m) throw ModelError("eligibility admits no complete one-to-one assignment");
    return Assignment(std::move(*m));
}

/// Deterministic greedy start: forced products first, then products by
/// decreasing total flow, each on the free eligible position with the largest
/// immediate gain (lowest position on ties). Dead ends are repaired.
inline Assignment greedy_assignment(const QapInstance& inst) {
    const std::size_t n = inst.size();
    std::vector<double> weight(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) weight[i] += inst.flow()(i, j) + inst.flow()(j, i);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const bool fa = inst.eligible_positions(a).size() == 1;
        const bool fb = inst.eligible_positions(b).size() == 1;
        if (fa != fb) return fa;
        return weight[a] > weight[b];
    });
    Assignment a(n);
    std::vector<char> used(n, 0);
    for (int i : order) {
        int best_pos = -1;
        double best_gain = 0.0;
        for (int k : inst.eligible_positions(i)) {
            if (used[k]) continue;
            const double g = placement_gain(inst, a, i, k);
            if (best_pos < 0 || g > best_gain + objective_tol(best_gain)) {
                best_pos = k;
                best_gain = g;
            }
        }
        if (best_pos >= 0) {
            a[i] = best_pos;
            used[best_pos] = 1;
        }
    }
    return a.complete() ? a : repair_assignment(inst, a);
}

/// Product pairs that can ever trade places: both free and sharing an
/// eligible position. Whether a particular swap is allowed still depends on
/// the current positions.
inline std::vector<std::pair<int, int>> swap_candidates(const QapInstance& inst,
                                                        const std::vector<int>* subset = nullptr) {
    const std::size_t n = inst.size();
    std::vector<int> products;
    if (subset) {
        products = *subset;
    } else {
        products.resize(n);
        std::iota(products.begin(), products.end(), 0);
    }
    std::vector<std::pair<int, int>> out;
    for (std::size_t x = 0; x < products.size(); ++x)
        for (std::size_t y = x + 1; y < products.size(); ++y) {
            const int a = products[x];
            const int b = products[y];
            if (inst.eligible_positions(a).size() < 2 || inst.eligible_positions(b).size() < 2) continue;
            bool shared = false;
            for (int k : inst.eligible_positions(a))
                if (inst.eligible(b, k)) {
                    shared = true;
                    break;
                }
            if (shared) out.emplace_back(std::min(a, b), std::max(a, b));
        }
    return out;
}

/// Uniformly shuffled greedy placement followed by 10n random feasible swaps.
inline Assignment random_assignment(const QapInstance& inst, Rng& rng) {
    const std::size_t n = inst.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span<int>(order));
    Assignment a(n);
    std::vector<char> used(n, 0);
    for (int i : order) {
        std::vector<int> free;
        for (int k : inst.eligible_positions(i))
            if (!used[k]) free.push_back(k);
        if (free.empty()) continue;
        const int k = free[rng.below(free.size())];
        a[i] = k;
        used[k] = 1;
    }
    if (!a.complete()) a = repair_assignment(inst, a);
    const auto pairs = swap_candidates(inst);
    if (!pairs.empty())
        for (std::size_t t = 0; t < 10 * n; ++t) {
            const auto [x, y] = pairs[rng.below(pairs.size())];
            if (inst.eligible(x, a[y]) && inst.eligible(y, a[x])) std::swap(a[x], a[y]);
        }
    return a;
}

}  // namespace storelayout
