#pragma once

// Restricted quadratic assignment instances: flow between products,
// exposure between positions, and a 0/1 eligibility table. The objective to
// maximize is  sum_{i,j} flow[i][j] * exposure[pos(i)][pos(j)].
//
// Product 0 is check-in and product n-1 is check-out; they are pinned to
// position 0 (entrance) and n-1 (exit) through eligibility alone, so solvers
// never special-case them.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "storelayout/assignment.hpp"
#include "storelayout/demand_model.hpp"
#include "storelayout/errors.hpp"
#include "storelayout/matching.hpp"
#include "storelayout/matrix.hpp"
#include "storelayout/store_model.hpp"

namespace storelayout {

enum class Level { level1, level2, integrated };

inline const char* to_string(Level l) {
    switch (l) {
        case Level::level1: return "level1";
        case Level::level2: return "level2";
        case Level::integrated: return "integrated";
    }
    return "?";
}

/// Relative tolerance used for every objective comparison.
inline constexpr double objective_rel_tol = 1e-9;

inline double objective_tol(double a, double b = 0.0) {
    return objective_rel_tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool approx_equal(double a, double b) { return std::abs(a - b) <= objective_tol(a, b); }

/// Total order used for incumbents: higher objective wins; values equal
/// within tolerance fall back to the lexicographically smaller assignment.
inline bool better_solution(double value_a, const Assignment& a, double value_b, const Assignment& b) {
    if (!approx_equal(value_a, value_b)) return value_a > value_b;
    return a < b;
}

/// Category/location structure of sublocation-level instances.
///
/// Groups are categories on the product side and locations on the position
/// side, both including the dummy groups (index 0 and last). Level-2
/// instances carry the fixed category -> location map; integrated instances
/// carry the category-level eligibility instead.
struct Hierarchy {
    std::vector<int> product_group;
    std::vector<int> position_group;
    std::size_t group_count = 0;
    std::vector<int> group_assignment;  // level2 only
    BoolMatrix group_eligibility;       // integrated only

    std::vector<std::vector<int>> products_of_group() const {
        std::vector<std::vector<int>> out(group_count);
        for (std::size_t i = 0; i < product_group.size(); ++i) out[product_group[i]].push_back(static_cast<int>(i));
        return out;
    }
    std::vector<std::vector<int>> positions_of_group() const {
        std::vector<std::vector<int>> out(group_count);
        for (std::size_t k = 0; k < position_group.size(); ++k) out[position_group[k]].push_back(static_cast<int>(k));
        return out;
    }
};

class QapInstance {
public:
    QapInstance(Level level, Matrix<double> flow, Matrix<double> exposure, BoolMatrix eligibility,
                std::optional<Hierarchy> hierarchy = {}, std::vector<std::string> product_labels = {},
                std::vector<std::string> position_labels = {})
        : level_(level),
          flow_(std::move(flow)),
          exposure_(std::move(exposure)),
          eligibility_(std::move(eligibility)),
          hierarchy_(std::move(hierarchy)),
          product_labels_(std::move(product_labels)),
          position_labels_(std::move(position_labels)) {
        validate();
        const std::size_t n = size();
        eligible_positions_.resize(n);
        eligible_products_.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                if (eligibility_(i, k)) {
                    eligible_positions_[i].push_back(static_cast<int>(k));
                    eligible_products_[k].push_back(static_cast<int>(i));
                }
        if (product_labels_.empty())
            for (std::size_t i = 0; i < n; ++i) product_labels_.push_back(std::to_string(i));
        if (position_labels_.empty())
            for (std::size_t k = 0; k < n; ++k) position_labels_.push_back(std::to_string(k));
    }

    Level level() const noexcept { return level_; }
    std::size_t size() const noexcept { return flow_.rows(); }
    const Matrix<double>& flow() const noexcept { return flow_; }
    const Matrix<double>& exposure() const noexcept { return exposure_; }
    const BoolMatrix& eligibility() const noexcept { return eligibility_; }
    bool eligible(int product, int position) const { return eligibility_(product, position) != 0; }
    const std::vector<int>& eligible_positions(int product) const { return eligible_positions_[product]; }
    const std::vector<int>& eligible_products(int position) const { return eligible_products_[position]; }
    const std::optional<Hierarchy>& hierarchy() const noexcept { return hierarchy_; }
    const std::vector<std::string>& product_labels() const noexcept { return product_labels_; }
    const std::vector<std::string>& position_labels() const noexcept { return position_labels_; }

    /// Products with more than one eligible position.
    std::size_t free_product_count() const {
        std::size_t c = 0;
        for (const auto& e : eligible_positions_) c += e.size() > 1 ? 1 : 0;
        return c;
    }

private:
    void validate() const {
        const std::size_t n = flow_.rows();
        if (n < 2) throw ModelError("instance needs at least the two dummy products");
        if (!flow_.is_square() || !exposure_.is_square() || exposure_.rows() != n ||
            eligibility_.rows() != n || eligibility_.cols() != n)
            throw ModelError("flow, exposure and eligibility must be square with equal dimension (" +
                             std::to_string(n) + ")");
        for (double v : flow_.values())
            if (!std::isfinite(v)) throw ModelError("flow contains a non-finite value");
        for (double v : exposure_.values())
            if (!std::isfinite(v)) throw ModelError("exposure contains a non-finite value");
        for (std::size_t k = 0; k < n; ++k) {
            if (eligibility_(0, k) != (k == 0 ? 1 : 0) || eligibility_(k, 0) != (k == 0 ? 1 : 0))
                throw ModelError("check-in must be eligible for the entrance only, and only check-in there");
            if (eligibility_(n - 1, k) != (k == n - 1 ? 1 : 0) || eligibility_(k, n - 1) != (k == n - 1 ? 1 : 0))
                throw ModelError("check-out must be eligible for the exit only, and only check-out there");
        }
        for (std::size_t i = 0; i < n; ++i) {
            bool row = false, col = false;
            for (std::size_t k = 0; k < n; ++k) {
                row = row || eligibility_(i, k);
                col = col || eligibility_(k, i);
            }
            if (!row) throw ModelError("product " + std::to_string(i) + " has no eligible position");
            if (!col) throw ModelError("position " + std::to_string(i) + " has no eligible product");
        }
        if (!perfect_matching(eligibility_))
            throw ModelError("eligibility admits no complete one-to-one assignment");

        if (level_ == Level::level1) return;
        if (!hierarchy_) throw ModelError(std::string(to_string(level_)) + " instance needs category/location groups");
        const auto& h = *hierarchy_;
        if (h.product_group.size() != n || h.position_group.size() != n)
            throw ModelError("group maps must cover every product and position");
        for (std::size_t i = 0; i < n; ++i)
            if (h.product_group[i] < 0 || static_cast<std::size_t>(h.product_group[i]) >= h.group_count ||
                h.position_group[i] < 0 || static_cast<std::size_t>(h.position_group[i]) >= h.group_count)
                throw ModelError("group index out of range");
        if (level_ == Level::level2) {
            if (h.group_assignment.size() != h.group_count)
                throw ModelError("level2 instance needs a location for every category");
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < n; ++k)
                    if (eligibility_(i, k) &&
                        h.group_assignment[h.product_group[i]] != h.position_group[k])
                        throw ModelError("level2 eligibility must stay inside each category's location");
        } else if (h.group_eligibility.rows() != h.group_count || h.group_eligibility.cols() != h.group_count) {
            throw ModelError("integrated instance needs category x location eligibility");
        }
    }

    Level level_;
    Matrix<double> flow_;
    Matrix<double> exposure_;
    BoolMatrix eligibility_;
    std::optional<Hierarchy> hierarchy_;
    std::vector<std::string> product_labels_;
    std::vector<std::string> position_labels_;
    std::vector<std::vector<int>> eligible_positions_;
    std::vector<std::vector<int>> eligible_products_;
};

// ---------------------------------------------------------------------------
// Feasibility

enum class ViolationKind { size, unassigned, out_of_range, position_conflict, empty_position, ineligible, block };

struct Violation {
    ViolationKind kind;
    int product = -1;
    int position = -1;
    std::string message;
};

struct FeasibilityReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }

    std::string summary() const {
        std::string s;
        for (const auto& v : violations) s += v.message + "\n";
        return s;
    }
};

inline FeasibilityReport check_feasible(const QapInstance& inst, const Assignment& a) {
    FeasibilityReport r;
    const std::size_t n = inst.size();
    auto add = [&](ViolationKind k, int product, int position, std::string msg) {
        r.violations.push_back({k, product, position, std::move(msg)});
    };
    if (a.size() != n) {
        add(ViolationKind::size, -1, -1,
            "assignment covers " + std::to_string(a.size()) + " products, instance has " + std::to_string(n));
        return r;
    }
    std::vector<std::vector<int>> holders(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int p = a[i];
        const int ii = static_cast<int>(i);
        if (p == Assignment::unassigned) {
            add(ViolationKind::unassigned, ii, -1, "product " + std::to_string(i) + " is unassigned");
        } else if (p < 0 || static_cast<std::size_t>(p) >= n) {
            add(ViolationKind::out_of_range, ii, p,
                "product " + std::to_string(i) + " has out-of-range position " + std::to_string(p));
        } else {
            holders[p].push_back(ii);
            if (!inst.eligible(ii, p))
                add(ViolationKind::ineligible, ii, p,
                    "eligibility: product " + std::to_string(i) + " may not occupy position " + std::to_string(p));
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (holders[k].size() > 1) {
            std::string who;
            for (int i : holders[k]) who += (who.empty() ? "" : ", ") + std::to_string(i);
            add(ViolationKind::position_conflict, holders[k][0], static_cast<int>(k),
                "one-product-per-position: position " + std::to_string(k) + " holds products " + who);
        } else if (holders[k].empty()) {
            add(ViolationKind::empty_position, -1, static_cast<int>(k),
                "one-product-per-position: position " + std::to_string(k) + " is empty");
        }
    }

    if (!inst.hierarchy() || inst.level() == Level::level1) return r;
    const auto& h = *inst.hierarchy();
    if (inst.level() == Level::level2) {
        for (std::size_t i = 0; i < n; ++i) {
            const int p = a[i];
            if (p < 0 || static_cast<std::size_t>(p) >= n) continue;
            const int want = h.group_assignment[h.product_group[i]];
            if (h.position_group[p] != want)
                add(ViolationKind::block, static_cast<int>(i), p,
                    "block: subcategory " + std::to_string(i) + " sits in location " +
                        std::to_string(h.position_group[p]) + " but its category is at location " +
                        std::to_string(want));
        }
        return r;
    }
    // Integrated: each category's subcategories share one eligible location,
    // and that location holds nothing else.
    std::vector<int> loc_of_group(h.group_count, -1);
    std::vector<int> group_of_loc(h.group_count, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const int p = a[i];
        if (p < 0 || static_cast<std::size_t>(p) >= n) continue;
        const int g = h.product_group[i];
        const int l = h.position_group[p];
        if (loc_of_group[g] < 0) loc_of_group[g] = l;
        if (group_of_loc[l] < 0) group_of_loc[l] = g;
        if (loc_of_group[g] != l || group_of_loc[l] != g)
            add(ViolationKind::block, static_cast<int>(i), p,
                "block: subcategory " + std::to_string(i) + " of category " + std::to_string(g) +
                    " breaks the one-category-per-location grouping at location " + std::to_string(l));
        else if (!h.group_eligibility(g, l))
            add(ViolationKind::block, static_cast<int>(i), p,
                "block: category " + std::to_string(g) + " is not eligible for location " + std::to_string(l));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Objective

/// Objective without feasibility checks; `a` must be complete.
inline double objective_unchecked(const QapInstance& inst, const Assignment& a) {
    const std::size_t n = inst.size();
    const auto& f = inst.flow();
    const auto& e = inst.exposure();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto frow = f.row(i);
        const auto erow = e.row(static_cast<std::size_t>(a[i]));
        for (std::size_t j = 0; j < n; ++j)
            if (frow[j] != 0.0) total += frow[j] * erow[static_cast<std::size_t>(a[j])];
    }
    return total;
}

inline double objective(const QapInstance& inst, const Assignment& a) {
    const auto report = check_feasible(inst, a);
    if (!report.ok()) throw ValidationError("infeasible assignment:\n" + report.summary());
    return objective_unchecked(inst, a);
}

/// Change in objective from exchanging the positions of two products, O(n).
/// nullopt when either product is not eligible for the other's position.
inline std::optional<double> swap_delta(const QapInstance& inst, const Assignment& a, int pa, int pb) {
    if (pa == pb) return 0.0;
    const int r = a[pa];
    const int s = a[pb];
    if (!inst.eligible(pa, s) || !inst.eligible(pb, r)) return std::nullopt;
    const auto& f = inst.flow();
    const auto& e = inst.exposure();
    double d = f(pa, pa) * (e(s, s) - e(r, r)) + f(pb, pb) * (e(r, r) - e(s, s)) +
               f(pa, pb) * (e(s, r) - e(r, s)) + f(pb, pa) * (e(r, s) - e(s, r));
    const std::size_t n = inst.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (static_cast<int>(k) == pa || static_cast<int>(k) == pb) continue;
        const int pk = a[k];
        d += f(k, pa) * (e(pk, s) - e(pk, r)) + f(k, pb) * (e(pk, r) - e(pk, s)) +
             f(pa, k) * (e(s, pk) - e(r, pk)) + f(pb, k) * (e(r, pk) - e(s, pk));
    }
    return d;
}

/// Per-product share of the objective: product i owns the terms of its
/// flow row, so the shares sum to the objective.
inline std::vector<double> product_contributions(const QapInstance& inst, const Assignment& a) {
    const std::size_t n = inst.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i] += inst.flow()(i, j) * inst.exposure()(a[i], a[j]);
    return out;
}

// ---------------------------------------------------------------------------
// Builders

/// Level-1 instance: categories onto locations with flow P̄ and exposure Ē.
inline QapInstance build_level1_instance(const ExposureMatrices& exposures, const TransitionMatrices& transitions,
                                         const BoolMatrix& eligibility, std::vector<std::string> product_labels = {},
                                         std::vector<std::string> position_labels = {}) {
    const std::size_t n = transitions.category.rows();
    if (exposures.loc_exposure.rows() != n)
        throw ModelError("category count (" + std::to_string(n) + ") differs from location count (" +
                         std::to_string(exposures.loc_exposure.rows()) + "), dummies included");
    return QapInstance(Level::level1, transitions.category, exposures.loc_exposure, eligibility, std::nullopt,
                       std::move(product_labels), std::move(position_labels));
}

namespace detail {

inline Hierarchy sublocation_hierarchy(const Catalog& catalog, const StoreGraph& graph) {
    if (catalog.category_count() != graph.loc_position_count())
        throw ModelError("category count differs from location count");
    if (catalog.subcategory_count() != graph.sub_position_count())
        throw ModelError("subcategory count differs from sublocation count");
    Hierarchy h;
    h.group_count = catalog.category_count();
    for (const auto& s : catalog.subcategories()) h.product_group.push_back(s.category);
    h.position_group.push_back(0);
    for (const auto& s : graph.sublocations()) h.position_group.push_back(s.location + 1);
    h.position_group.push_back(static_cast<int>(h.group_count) - 1);
    return h;
}

inline std::vector<std::size_t> group_sizes(const std::vector<int>& group_of, std::size_t count) {
    std::vector<std::size_t> out(count, 0);
    for (int g : group_of) ++out[g];
    return out;
}

}  // namespace detail

/// Level-2 instance: subcategories onto sublocations, each subcategory
/// restricted to the sublocations of the location its category holds in
/// `level1` (category index -> location position).
inline QapInstance build_level2_instance(const ExposureMatrices& exposures, const TransitionMatrices& transitions,
                                         const Assignment& level1, const Catalog& catalog, const StoreGraph& graph,
                                         const BoolMatrix* category_eligibility = nullptr) {
    Hierarchy h = detail::sublocation_hierarchy(catalog, graph);
    const std::size_t groups = h.group_count;
    if (level1.size() != groups || !level1.complete())
        throw ValidationError("level-1 assignment must place every category");
    std::vector<int> seen(groups, 0);
    for (std::size_t c = 0; c < groups; ++c) {
        const int l = level1[c];
        if (l < 0 || static_cast<std::size_t>(l) >= groups || seen[l]++)
            throw ValidationError("level-1 assignment is not one-to-one");
        if (category_eligibility && !(*category_eligibility)(c, l))
            throw ValidationError("level-1 assignment puts category '" + catalog.category(static_cast<int>(c)).id +
                                  "' on an ineligible location");
    }
    if (level1[0] != 0 || level1[groups - 1] != static_cast<int>(groups) - 1)
        throw ValidationError("level-1 assignment must keep check-in/check-out at entrance/exit");
    const auto cat_sizes = detail::group_sizes(h.product_group, groups);
    const auto loc_sizes = detail::group_sizes(h.position_group, groups);
    for (std::size_t c = 0; c < groups; ++c)
        if (cat_sizes[c] != loc_sizes[level1[c]])
            throw ValidationError("category '" + catalog.category(static_cast<int>(c)).id + "' has " +
                                  std::to_string(cat_sizes[c]) + " subcategories but its location has " +
                                  std::to_string(loc_sizes[level1[c]]) + " sublocations");
    h.group_assignment = level1.position_of;

    const std::size_t n = catalog.subcategory_count();
    BoolMatrix elig(n, n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            elig(i, k) = h.group_assignment[h.product_group[i]] == h.position_group[k] ? 1 : 0;
    return QapInstance(Level::level2, transitions.subcategory, exposures.sub_exposure, std::move(elig), std::move(h),
                       catalog.subcategory_labels(), graph.sub_position_labels());
}

/// Integrated instance: subcategories onto sublocations with the category ->
/// location choice left open (subject to `category_eligibility`).
inline QapInstance build_integrated_instance(const ExposureMatrices& exposures, const TransitionMatrices& transitions,
                                             const BoolMatrix& category_eligibility, const Catalog& catalog,
                                             const StoreGraph& graph) {
    Hierarchy h = detail::sublocation_hierarchy(catalog, graph);
    h.group_eligibility = category_eligibility;
    const auto cat_sizes = detail::group_sizes(h.product_group, h.group_count);
    const auto loc_sizes = detail::group_sizes(h.position_group, h.group_count);
    const std::size_t n = catalog.subcategory_count();
    BoolMatrix elig(n, n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const int g = h.product_group[i];
            const int l = h.position_group[k];
            elig(i, k) = category_eligibility(g, l) && cat_sizes[g] == loc_sizes[l] ? 1 : 0;
        }
    return QapInstance(Level::integrated, transitions.subcategory, exposures.sub_exposure, std::move(elig),
                       std::move(h), catalog.subcategory_labels(), graph.sub_position_labels());
}

/// Category -> location assignment implied by a sublocation-level one.
inline Assignment induced_group_assignment(const QapInstance& inst, const Assignment& a) {
    if (!inst.hierarchy()) throw ValidationError("instance has no category/location groups");
    const auto& h = *inst.hierarchy();
    Assignment out(h.group_count);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] >= 0) out[h.product_group[i]] = h.position_group[a[i]];
    return out;
}

// ---------------------------------------------------------------------------
// Solution pool

/// Up to `capacity` distinct assignments, best first, all within relative
/// gap `gap` of the best member.
class SolutionPool {
public:
    struct Entry {
        Assignment assignment;
        double value;
    };

    SolutionPool(std::size_t capacity, double gap) : capacity_(capacity), gap_(gap) {
        if (capacity == 0) throw InputError("pool capacity must be at least 1");
        if (!(gap >= 0.0 && gap < 1.0)) throw InputError("pool gap must lie in [0, 1)");
    }

    std::size_t capacity() const noexcept { return capacity_; }
    double gap() const noexcept { return gap_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const std::vector<Entry>& entries() const noexcept { return entries_; }
    const Entry& best() const { return entries_.front(); }

    /// Lowest value that may still enter given the current best.
    double floor() const {
        if (entries_.empty()) return -std::numeric_limits<double>::infinity();
        const double b = entries_.front().value;
        return b - gap_ * std::abs(b);
    }

    /// Returns true when the candidate was inserted.
    bool offer(const Assignment& a, double value) {
        if (value < floor() - objective_tol(floor())) return false;
        if (entries_.size() == capacity_ &&
            !better_solution(value, a, entries_.back().value, entries_.back().assignment))
            return false;
        for (const auto& e : entries_)
            if (e.assignment == a) return false;
        auto pos = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) {
            return better_solution(value, a, e.value, e.assignment);
        });
        entries_.insert(pos, Entry{a, value});
        if (entries_.size() > capacity_) entries_.pop_back();
        const double f = floor();
        while (!entries_.empty() && entries_.back().value < f - objective_tol(f)) entries_.pop_back();
        return true;
    }

    void merge(const SolutionPool& other) {
        for (const auto& e : other.entries_) offer(e.assignment, e.value);
    }

private:
    std::size_t capacity_;
    double gap_;
    std::vector<Entry> entries_;
};

}  // namespace storelayout
