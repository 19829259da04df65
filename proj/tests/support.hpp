#pragma once

// Instance generators and independent oracles shared by the tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "storelayout/storelayout.hpp"

namespace testing {

using namespace storelayout;

inline std::string data_path(const std::string& rel) { return std::string(STORELAYOUT_SOURCE_DIR) + "/" + rel; }

inline bool rel_close(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

// ---------------------------------------------------------------------------
// Random instances

enum class Pattern { full, sparse, classes };

/// Level-1 instance with `free` real products between the dummies. Flows are
/// small reals with some zeros; exposures are integer counts.
inline QapInstance random_level1(Rng& rng, std::size_t free, Pattern pattern = Pattern::full) {
    const std::size_t n = free + 2;
    auto flow = Matrix<double>::square(n);
    auto exposure = Matrix<double>::square(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && j != 0 && i != n - 1 && rng.uniform() < 0.7)
                flow(i, j) = std::round(rng.uniform() * 200.0) / 8.0;
            exposure(i, j) = static_cast<double>(rng.below(12));
        }
    BoolMatrix elig(n, n, 0);
    elig(0, 0) = 1;
    elig(n - 1, n - 1) = 1;
    if (pattern == Pattern::full) {
        for (std::size_t i = 1; i + 1 < n; ++i)
            for (std::size_t k = 1; k + 1 < n; ++k) elig(i, k) = 1;
    } else if (pattern == Pattern::sparse) {
        // a hidden permutation keeps the instance feasible
        std::vector<int> perm(free);
        std::iota(perm.begin(), perm.end(), 1);
        rng.shuffle(std::span<int>(perm));
        for (std::size_t i = 1; i + 1 < n; ++i) {
            elig(i, perm[i - 1]) = 1;
            for (std::size_t k = 1; k + 1 < n; ++k)
                if (rng.uniform() < 0.4) elig(i, k) = 1;
        }
    } else {
        // fixture classes: products and positions split into interchangeable classes
        std::vector<int> cls(n, 0);
        for (std::size_t i = 1; i + 1 < n; ++i) cls[i] = static_cast<int>(rng.below(3));
        std::vector<int> pos(free);
        std::iota(pos.begin(), pos.end(), 1);
        rng.shuffle(std::span<int>(pos));
        for (std::size_t i = 1; i + 1 < n; ++i)
            for (std::size_t j = 1; j + 1 < n; ++j)
                if (cls[i] == cls[j]) elig(i, pos[j - 1]) = 1;
    }
    return QapInstance(Level::level1, std::move(flow), std::move(exposure), std::move(elig));
}

/// Level-2 instance with the given block sizes; blocks occupy shuffled
/// position slots so blocks are not contiguous.
inline QapInstance random_level2(Rng& rng, const std::vector<std::size_t>& blocks) {
    std::size_t n = 2;
    for (auto b : blocks) n += b;
    const std::size_t groups = blocks.size() + 2;
    Hierarchy h;
    h.group_count = groups;
    h.product_group.push_back(0);
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (std::size_t m = 0; m < blocks[b]; ++m) h.product_group.push_back(static_cast<int>(b + 1));
    h.product_group.push_back(static_cast<int>(groups - 1));
    // locations: same sizes, but location l holds the block of group_assignment^-1(l)
    std::vector<int> loc_of(blocks.size());
    std::iota(loc_of.begin(), loc_of.end(), 1);
    // only permute among equal sizes
    for (std::size_t a = 0; a < blocks.size(); ++a)
        for (std::size_t b = a + 1; b < blocks.size(); ++b)
            if (blocks[a] == blocks[b] && rng.uniform() < 0.5) std::swap(loc_of[a], loc_of[b]);
    std::vector<int> slots;
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (std::size_t m = 0; m < blocks[b]; ++m) slots.push_back(loc_of[b]);
    rng.shuffle(std::span<int>(slots));
    h.position_group.push_back(0);
    for (int s : slots) h.position_group.push_back(s);
    h.position_group.push_back(static_cast<int>(groups - 1));
    h.group_assignment.assign(groups, 0);
    for (std::size_t b = 0; b < blocks.size(); ++b) h.group_assignment[b + 1] = loc_of[b];
    h.group_assignment[groups - 1] = static_cast<int>(groups - 1);

    auto flow = Matrix<double>::square(n);
    auto exposure = Matrix<double>::square(n);
    BoolMatrix elig(n, n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (i != k && k != 0 && i != n - 1 && rng.uniform() < 0.7)
                flow(i, k) = std::round(rng.uniform() * 100.0) / 4.0;
            exposure(i, k) = static_cast<double>(rng.below(15));
            elig(i, k) = h.group_assignment[h.product_group[i]] == h.position_group[k];
        }
    return QapInstance(Level::level2, std::move(flow), std::move(exposure), std::move(elig), std::move(h));
}

/// Integrated instance: categories of the given sizes, locations of the
/// same sizes, category eligibility where sizes match (plus random drops
/// that keep a perfect matching).
inline QapInstance random_integrated(Rng& rng, const std::vector<std::size_t>& blocks) {
    auto base = random_level2(rng, blocks);
    Hierarchy h = *base.hierarchy();
    const std::size_t groups = h.group_count;
    std::vector<std::size_t> loc_size(groups, 0), cat_size(groups, 0);
    for (int g : h.position_group) ++loc_size[g];
    for (int g : h.product_group) ++cat_size[g];
    h.group_eligibility = BoolMatrix(groups, groups, 0);
    for (std::size_t g = 0; g < groups; ++g)
        for (std::size_t l = 0; l < groups; ++l) {
            const bool dummy = g == 0 || l == 0 || g == groups - 1 || l == groups - 1;
            if (dummy) {
                h.group_eligibility(g, l) = g == l;
                continue;
            }
            const bool fixed = h.group_assignment[g] == static_cast<int>(l);
            h.group_eligibility(g, l) = cat_size[g] == loc_size[l] && (fixed || rng.uniform() < 0.8);
        }
    h.group_assignment.clear();
    const std::size_t n = base.size();
    BoolMatrix elig(n, n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const int g = h.product_group[i], l = h.position_group[k];
            elig(i, k) = h.group_eligibility(g, l) && cat_size[g] == loc_size[l];
        }
    return QapInstance(Level::integrated, base.flow(), base.exposure(), std::move(elig), std::move(h));
}

/// Uniformly random feasible assignment via the library's constructor.
inline Assignment random_feasible(const QapInstance& inst, Rng& rng) {
    if (inst.level() != Level::integrated) return random_assignment(inst, rng);
    // integrated: pick a random category matching, then random placement inside
    const auto& h = *inst.hierarchy();
    const std::size_t G = h.group_count;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<int> locs(G - 2);
        std::iota(locs.begin(), locs.end(), 1);
        rng.shuffle(std::span<int>(locs));
        std::vector<int> loc_of(G);
        loc_of[0] = 0;
        loc_of[G - 1] = static_cast<int>(G) - 1;
        bool ok = true;
        for (std::size_t g = 1; g + 1 < G; ++g) {
            loc_of[g] = locs[g - 1];
            ok = ok && h.group_eligibility(g, loc_of[g]);
        }
        if (!ok) continue;
        const auto prods = h.products_of_group();
        const auto poss = h.positions_of_group();
        Assignment a(inst.size());
        bool sized = true;
        for (std::size_t g = 0; g < G; ++g) {
            auto p = poss[loc_of[g]];
            if (p.size() != prods[g].size()) {
                sized = false;
                break;
            }
            rng.shuffle(std::span<int>(p));
            for (std::size_t m = 0; m < p.size(); ++m) a[prods[g][m]] = p[m];
        }
        if (sized) return a;
    }
    throw std::runtime_error("no feasible integrated assignment found");
}

// ---------------------------------------------------------------------------
// Oracles

/// Every feasible assignment, by plain recursion over products in index
/// order. Independent of the library's brute force.
inline void for_each_feasible(const QapInstance& inst, const std::function<void(const Assignment&)>& visit) {
    const std::size_t n = inst.size();
    Assignment a(n);
    std::vector<char> used(n, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == n) {
            if (check_feasible(inst, a).ok()) visit(a);
            return;
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (used[k] || !inst.eligible(static_cast<int>(i), static_cast<int>(k))) continue;
            used[k] = 1;
            a[i] = static_cast<int>(k);
            rec(i + 1);
            used[k] = 0;
        }
        a[i] = Assignment::unassigned;
    };
    rec(0);
}

/// Plain objective by definition.
inline double direct_objective(const QapInstance& inst, const Assignment& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < inst.size(); ++i)
        for (std::size_t j = 0; j < inst.size(); ++j) s += inst.flow()(i, j) * inst.exposure()(a[i], a[j]);
    return s;
}

struct Optimum {
    double value = -std::numeric_limits<double>::infinity();
    Assignment best;
    std::size_t count = 0;
};

inline Optimum enumerate_optimum(const QapInstance& inst) {
    Optimum o;
    for_each_feasible(inst, [&](const Assignment& a) {
        ++o.count;
        const double v = direct_objective(inst, a);
        if (o.count == 1 || better_solution(v, a, o.value, o.best)) {
            o.value = v;
            o.best = a;
        }
    });
    return o;
}

/// Every simple path between two nodes, with its length.
inline std::vector<std::pair<double, NodePath>> all_simple_paths(const StoreGraph& g, NodeIndex from, NodeIndex to) {
    std::vector<std::pair<double, NodePath>> out;
    NodePath path{from};
    std::vector<char> on(g.node_count(), 0);
    on[from] = 1;
    std::function<void(NodeIndex, double)> rec = [&](NodeIndex u, double len) {
        if (u == to) {
            out.emplace_back(len, path);
            return;
        }
        for (const auto& nb : g.neighbors(u)) {
            if (on[nb.node]) continue;
            on[nb.node] = 1;
            path.push_back(nb.node);
            rec(nb.node, len + nb.length);
            path.pop_back();
            on[nb.node] = 0;
        }
    };
    rec(from, 0.0);
    return out;
}

/// Transition counts of one fixed visit order (subcategory indices),
/// entrance to exit.
inline void add_walk(const Catalog& c, const std::vector<int>& order, Matrix<double>& cat, Matrix<double>& sub,
                     double weight) {
    int ps = c.check_in_subcategory();
    int pc = c.check_in_category();
    for (int s : order) {
        sub(ps, s) += weight;
        if (c.parent(s) != pc) cat(pc, c.parent(s)) += weight;
        ps = s;
        pc = c.parent(s);
    }
    sub(ps, c.check_out_subcategory()) += weight;
    cat(pc, c.check_out_category()) += weight;
}

/// Expected transitions of one basket by averaging over every category
/// order and every within-category order.
inline std::pair<Matrix<double>, Matrix<double>> enumerate_transitions(const Catalog& c, const Transaction& t) {
    auto cat = Matrix<double>::square(c.category_count());
    auto sub = Matrix<double>::square(c.subcategory_count());
    std::map<int, std::vector<int>> blocks;
    for (int s : t.subcategories) blocks[c.parent(s)].push_back(s);
    std::vector<int> cats;
    for (auto& [k, v] : blocks) cats.push_back(k);
    std::sort(cats.begin(), cats.end());
    std::vector<std::vector<int>> visits;
    do {
        // all combinations of within-block permutations for this category order
        std::vector<std::vector<int>> partial{{}};
        for (int k : cats) {
            auto members = blocks[k];
            std::sort(members.begin(), members.end());
            std::vector<std::vector<int>> next;
            do {
                for (const auto& p : partial) {
                    auto q = p;
                    q.insert(q.end(), members.begin(), members.end());
                    next.push_back(std::move(q));
                }
            } while (std::next_permutation(members.begin(), members.end()));
            partial = std::move(next);
        }
        for (auto& p : partial) visits.push_back(std::move(p));
    } while (std::next_permutation(cats.begin(), cats.end()));
    const std::size_t total = visits.size();
    for (const auto& v : visits) add_walk(c, v, cat, sub, 1.0 / static_cast<double>(total));
    return {std::move(cat), std::move(sub)};
}

// ---------------------------------------------------------------------------
// Small stores

/// Line n0-n1-n2-n3 with unit edges; s1..s3 face n1..n3. Locations: l1 =
/// {s1, s2}, l2 = {s3}. Entrance n0, exit n3.
inline StoreGraph line_store() {
    StoreGraphBuilder b;
    for (int i = 0; i < 4; ++i) b.add_node("n" + std::to_string(i), i, 0);
    for (int i = 0; i < 3; ++i) b.add_edge("n" + std::to_string(i), "n" + std::to_string(i + 1));
    b.set_entrance("n0").set_exit("n3");
    b.add_location("l1", "shelf", "n1").add_location("l2", "shelf", "n3");
    b.add_sublocation("s1", "l1", "n1").add_sublocation("s2", "l1", "n2").add_sublocation("s3", "l2", "n3");
    return b.build();
}

/// Random connected planar-ish graph on `n` nodes with random facings.
inline StoreGraph random_store(Rng& rng, std::size_t n) {
    StoreGraphBuilder b;
    for (std::size_t i = 0; i < n; ++i)
        b.add_node("n" + std::to_string(i), static_cast<double>(rng.below(10)), static_cast<double>(rng.below(10)));
    // spanning tree then extra edges, with integer lengths to provoke ties
    for (std::size_t i = 1; i < n; ++i)
        b.add_edge("n" + std::to_string(rng.below(i)), "n" + std::to_string(i),
                   static_cast<double>(1 + rng.below(4)));
    for (std::size_t e = 0; e < n; ++e) {
        const auto a = rng.below(n), c = rng.below(n);
        if (a != c) b.add_edge("n" + std::to_string(a), "n" + std::to_string(c), static_cast<double>(1 + rng.below(4)));
    }
    b.set_entrance("n0").set_exit("n" + std::to_string(n - 1));
    const std::size_t locs = 1 + rng.below(3);
    for (std::size_t l = 0; l < locs; ++l) b.add_location("l" + std::to_string(l), "shelf", "n" + std::to_string(1 + rng.below(n - 1)));
    for (std::size_t s = 0; s < n; ++s) {
        const auto c = "n" + std::to_string(rng.below(n));
        std::vector<std::string> facing{c};
        if (rng.uniform() < 0.5) facing.push_back("n" + std::to_string(rng.below(n)));
        b.add_sublocation("s" + std::to_string(s), "l" + std::to_string(s % locs), c, facing);
    }
    return b.build();
}

// ---------------------------------------------------------------------------
// Dense LP relaxation (small models only)

/// Maximizes c.x subject to rows (eq / le) and 0 <= x, with x <= 1 for the
/// binaries. Two-phase tableau simplex with Bland's rule. Returns nullopt
/// when infeasible.
inline std::optional<double> lp_relaxation_max(const LinearModel& m) {
    const std::size_t nv = m.var_count();
    struct Row {
        std::vector<double> a;
        double b;
        bool eq;
    };
    std::vector<Row> rows;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Row row{std::vector<double>(nv, 0.0), m.rhs[r], m.senses[r] == Sense::eq};
        for (std::size_t t = m.row_start[r]; t < m.row_start[r + 1]; ++t) row.a[m.cols[t]] += m.coefs[t];
        rows.push_back(std::move(row));
    }
    for (std::size_t v = 0; v < nv; ++v)
        if (m.binary[v]) {
            Row row{std::vector<double>(nv, 0.0), 1.0, false};
            row.a[v] = 1.0;
            rows.push_back(std::move(row));
        }
    for (auto& r : rows)
        if (r.b < 0) {
            for (auto& x : r.a) x = -x;
            r.b = -r.b;
            if (!r.eq) throw std::runtime_error("negative rhs on an inequality is not supported");
        }
    const std::size_t nr = rows.size();
    std::size_t slack = 0, art = 0;
    for (const auto& r : rows) (r.eq ? art : slack)++;
    const std::size_t cols = nv + slack + art;
    std::vector<std::vector<double>> T(nr, std::vector<double>(cols + 1, 0.0));
    std::vector<std::size_t> basis(nr);
    std::size_t s_at = nv, a_at = nv + slack;
    for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t v = 0; v < nv; ++v) T[r][v] = rows[r].a[v];
        T[r][cols] = rows[r].b;
        if (rows[r].eq) {
            T[r][a_at] = 1.0;
            basis[r] = a_at++;
        } else {
            T[r][s_at] = 1.0;
            basis[r] = s_at++;
        }
    }
    constexpr double eps = 1e-9;
    auto pivot = [&](std::size_t pr, std::size_t pc) {
        const double p = T[pr][pc];
        for (auto& x : T[pr]) x /= p;
        for (std::size_t r = 0; r < nr; ++r)
            if (r != pr && std::abs(T[r][pc]) > 0) {
                const double f = T[r][pc];
                for (std::size_t c = 0; c <= cols; ++c) T[r][c] -= f * T[pr][c];
            }
        basis[pr] = pc;
    };
    // maximize obj over allowed columns
    auto run = [&](const std::vector<double>& obj, std::size_t allowed) {
        while (true) {
            std::size_t enter = cols;
            for (std::size_t c = 0; c < allowed; ++c) {
                double red = obj[c];
                for (std::size_t r = 0; r < nr; ++r) red -= obj[basis[r]] * T[r][c];
                if (red > eps) {
                    enter = c;
                    break;
                }
            }
            if (enter == cols) return;
            std::size_t leave = nr;
            double best = 0.0;
            for (std::size_t r = 0; r < nr; ++r)
                if (T[r][enter] > eps) {
                    const double ratio = T[r][cols] / T[r][enter];
                    if (leave == nr || ratio < best - eps || (std::abs(ratio - best) <= eps && basis[r] < basis[leave])) {
                        leave = r;
                        best = ratio;
                    }
                }
            if (leave == nr) throw std::runtime_error("unbounded LP");
            pivot(leave, enter);
        }
    };
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t c = nv + slack; c < cols; ++c) phase1[c] = -1.0;
    run(phase1, cols);
    double infeas = 0.0;
    for (std::size_t r = 0; r < nr; ++r)
        if (basis[r] >= nv + slack) infeas += T[r][cols];
    if (infeas > 1e-7) return std::nullopt;
    // drive remaining (zero) artificials out where possible
    for (std::size_t r = 0; r < nr; ++r)
        if (basis[r] >= nv + slack)
            for (std::size_t c = 0; c < nv + slack; ++c)
                if (std::abs(T[r][c]) > eps) {
                    pivot(r, c);
                    break;
                }
    std::vector<double> obj(cols, 0.0);
    for (auto [v, c] : m.objective) obj[v] += c;
    run(obj, nv + slack);
    double value = 0.0;
    for (std::size_t r = 0; r < nr; ++r) value += obj[basis[r]] * T[r][cols];
    return value;
}

}  // namespace testing
