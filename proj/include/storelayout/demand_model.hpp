#pragma once

// Catalog, customer transactions and the walk-count (transition) matrices
// built from them under the random-pick shopping model: a shopper visits the
// categories of the basket in uniformly random order and, inside each
// category, its purchased subcategories in uniformly random order, starting
// at check-in and ending at check-out.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "storelayout/assignment.hpp"
#include "storelayout/errors.hpp"
#include "storelayout/matrix.hpp"
#include "storelayout/rng.hpp"
#include "storelayout/store_model.hpp"

namespace storelayout {

struct Category {
    std::string id;
    std::string name;
};

struct Subcategory {
    std::string id;
    std::string name;
    int category = 0;
};

struct SubcategoryRecord {
    std::string id;
    std::string name;
    std::string category_id;
};

/// Categories and subcategories in product order. Index 0 of both lists is
/// the check-in dummy and the last index is the check-out dummy; check-in
/// subcategory belongs to the check-in category (same for check-out).
class Catalog {
public:
    static constexpr const char* check_in_id = "check-in";
    static constexpr const char* check_out_id = "check-out";

    Catalog(const std::vector<Category>& categories, const std::vector<SubcategoryRecord>& subcategories) {
        categories_.push_back({check_in_id, "Check-in"});
        for (const auto& c : categories) {
            if (c.id.empty()) throw InputError("category with empty id");
            if (c.id == check_in_id || c.id == check_out_id)
                throw InputError("category id '" + c.id + "' is reserved");
            if (!cat_index_.emplace(c.id, static_cast<int>(categories_.size())).second)
                throw InputError("duplicate category id '" + c.id + "'");
            categories_.push_back(c);
        }
        categories_.push_back({check_out_id, "Check-out"});
        cat_index_[check_in_id] = 0;
        cat_index_[check_out_id] = static_cast<int>(categories_.size()) - 1;

        subcategories_.push_back({check_in_id, "Check-in", 0});
        for (const auto& s : subcategories) {
            if (s.id.empty()) throw InputError("subcategory with empty id");
            if (s.id == check_in_id || s.id == check_out_id)
                throw InputError("subcategory id '" + s.id + "' is reserved");
            auto parent = cat_index_.find(s.category_id);
            if (parent == cat_index_.end() || parent->second == 0 ||
                parent->second == check_out_category())
                throw InputError("subcategory '" + s.id + "' references unknown category '" +
                                 s.category_id + "'");
            if (!sub_index_.emplace(s.id, static_cast<int>(subcategories_.size())).second)
                throw InputError("duplicate subcategory id '" + s.id + "'");
            subcategories_.push_back({s.id, s.name, parent->second});
        }
        subcategories_.push_back({check_out_id, "Check-out", check_out_category()});
        sub_index_[check_in_id] = 0;
        sub_index_[check_out_id] = static_cast<int>(subcategories_.size()) - 1;

        members_.assign(categories_.size(), {});
        for (std::size_t s = 0; s < subcategories_.size(); ++s)
            members_[subcategories_[s].category].push_back(static_cast<int>(s));
        for (std::size_t c = 1; c + 1 < categories_.size(); ++c)
            if (members_[c].empty())
                throw InputError("category '" + categories_[c].id + "' has no subcategories");
    }

    std::size_t category_count() const noexcept { return categories_.size(); }
    std::size_t subcategory_count() const noexcept { return subcategories_.size(); }
    int check_in_category() const noexcept { return 0; }
    int check_out_category() const noexcept { return static_cast<int>(categories_.size()) - 1; }
    int check_in_subcategory() const noexcept { return 0; }
    int check_out_subcategory() const noexcept { return static_cast<int>(subcategories_.size()) - 1; }

    const std::vector<Category>& categories() const noexcept { return categories_; }
    const std::vector<Subcategory>& subcategories() const noexcept { return subcategories_; }
    const Category& category(int i) const { return categories_.at(static_cast<std::size_t>(i)); }
    const Subcategory& subcategory(int i) const { return subcategories_.at(static_cast<std::size_t>(i)); }
    int parent(int sub) const { return subcategory(sub).category; }

    /// Subcategories of a category, ascending.
    const std::vector<int>& members(int category) const {
        return members_.at(static_cast<std::size_t>(category));
    }

    bool is_dummy_subcategory(int s) const { return s == 0 || s == check_out_subcategory(); }

    std::optional<int> find_category(const std::string& id) const {
        auto it = cat_index_.find(id);
        return it == cat_index_.end() ? std::nullopt : std::optional<int>(it->second);
    }
    std::optional<int> find_subcategory(const std::string& id) const {
        auto it = sub_index_.find(id);
        return it == sub_index_.end() ? std::nullopt : std::optional<int>(it->second);
    }

    std::vector<std::string> category_labels() const {
        std::vector<std::string> out;
        for (const auto& c : categories_) out.push_back(c.id);
        return out;
    }
    std::vector<std::string> subcategory_labels() const {
        std::vector<std::string> out;
        for (const auto& s : subcategories_) out.push_back(s.id);
        return out;
    }

private:
    std::vector<Category> categories_;
    std::vector<Subcategory> subcategories_;
    std::vector<std::vector<int>> members_;
    std::unordered_map<std::string, int> cat_index_;
    std::unordered_map<std::string, int> sub_index_;
};

/// A basket: distinct purchased subcategory indices, ascending.
struct Transaction {
    std::string id;
    std::vector<int> subcategories;
};

enum class TransitionMode { expected, sampled };

struct TransitionMatrices {
    Matrix<double> category;     // P̄, indexed by catalog category
    Matrix<double> subcategory;  // P, indexed by catalog subcategory
    TransitionMode mode = TransitionMode::expected;
    std::optional<std::uint64_t> seed;
};

namespace detail {

inline std::vector<std::string> split_delimited(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, delim)) out.push_back(field);
    if (!line.empty() && line.back() == delim) out.emplace_back();
    for (auto& f : out) {
        auto b = f.find_first_not_of(" \t\r");
        auto e = f.find_last_not_of(" \t\r");
        f = b == std::string::npos ? std::string{} : f.substr(b, e - b + 1);
        if (f.size() >= 2 && f.front() == '"' && f.back() == '"') f = f.substr(1, f.size() - 2);
    }
    return out;
}

inline char detect_delimiter(const std::string& header) {
    for (char d : {',', '\t', ';'})
        if (header.find(d) != std::string::npos) return d;
    return ',';
}

/// Distinct categories of a basket, ascending, with their purchased members.
inline std::map<int, std::vector<int>> group_by_category(const Transaction& t, const Catalog& catalog) {
    std::map<int, std::vector<int>> blocks;
    for (int s : t.subcategories) blocks[catalog.parent(s)].push_back(s);
    return blocks;
}

}  // namespace detail

/// Reads `transaction_id,subcategory_id` rows (header required, column order
/// free, comma/tab/semicolon delimited). Transactions keep first-appearance
/// order; repeated pairs collapse.
inline std::vector<Transaction> load_transactions(std::istream& in, const Catalog& catalog) {
    std::string line;
    std::size_t line_no = 0;
    std::string header;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") != std::string::npos) {
            header = line;
            break;
        }
    }
    if (header.empty()) throw ParseError("transactions input is empty", line_no);
    const char delim = detail::detect_delimiter(header);
    const auto columns = detail::split_delimited(header, delim);
    int tid_col = -1, sid_col = -1;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == "transaction_id") tid_col = static_cast<int>(i);
        if (columns[i] == "subcategory_id") sid_col = static_cast<int>(i);
    }
    if (tid_col < 0 || sid_col < 0)
        throw ParseError("header must contain transaction_id and subcategory_id columns", line_no);

    std::vector<Transaction> out;
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::set<int>> baskets;
    std::set<std::string> unknown;
    const auto needed = static_cast<std::size_t>(std::max(tid_col, sid_col)) + 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = detail::split_delimited(line, delim);
        if (fields.size() < needed)
            throw ParseError("expected at least " + std::to_string(needed) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        const auto& tid = fields[tid_col];
        const auto& sid = fields[sid_col];
        if (tid.empty() || sid.empty()) throw ParseError("empty transaction or subcategory id", line_no);
        auto s = catalog.find_subcategory(sid);
        if (!s || catalog.is_dummy_subcategory(*s)) {
            unknown.insert(sid);
            continue;
        }
        auto [it, inserted] = index.emplace(tid, out.size());
        if (inserted) {
            out.push_back({tid, {}});
            baskets.emplace_back();
        }
        baskets[it->second].insert(*s);
    }
    if (!unknown.empty()) {
        std::string msg = "unknown subcategory ids in transactions:";
        for (const auto& u : unknown) msg += " " + u;
        throw ValidationError(msg);
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i].subcategories.assign(baskets[i].begin(), baskets[i].end());
    return out;
}

inline void validate_transactions(const std::vector<Transaction>& transactions, const Catalog& catalog) {
    for (const auto& t : transactions) {
        if (t.subcategories.empty()) throw ValidationError("transaction '" + t.id + "' is empty");
        for (std::size_t i = 0; i < t.subcategories.size(); ++i) {
            const int s = t.subcategories[i];
            if (s <= 0 || s >= catalog.check_out_subcategory())
                throw ValidationError("transaction '" + t.id + "' holds an invalid subcategory index");
            if (i > 0 && t.subcategories[i - 1] >= s)
                throw ValidationError("transaction '" + t.id + "' subcategories must be distinct and sorted");
        }
    }
}

/// Exact expected category walk counts: for a basket with m distinct
/// categories every ordered pair, every check-in leg and every check-out
/// leg occurs with probability 1/m.
inline Matrix<double> expected_category_transitions(const std::vector<Transaction>& transactions,
                                                    const Catalog& catalog) {
    validate_transactions(transactions, catalog);
    const std::size_t n = catalog.category_count();
    const int in = catalog.check_in_category();
    const int out = catalog.check_out_category();
    auto p = Matrix<double>::square(n);
    for (const auto& t : transactions) {
        std::vector<int> cats;
        for (const auto& [c, members] : detail::group_by_category(t, catalog)) cats.push_back(c);
        const double w = 1.0 / static_cast<double>(cats.size());
        for (int a : cats) {
            p(in, a) += w;
            p(a, out) += w;
            for (int b : cats)
                if (a != b) p(a, b) += w;
        }
    }
    return p;
}

/// Exact expected subcategory walk counts. Inside a category block with g
/// purchased members each ordered pair is adjacent with probability 1/g;
/// across categories the last member of one block meets the first of the next
/// with probability (1/m)(1/g1)(1/g2).
inline Matrix<double> expected_subcategory_transitions(const std::vector<Transaction>& transactions,
                                                       const Catalog& catalog) {
    validate_transactions(transactions, catalog);
    const std::size_t n = catalog.subcategory_count();
    const int in = catalog.check_in_subcategory();
    const int out = catalog.check_out_subcategory();
    auto p = Matrix<double>::square(n);
    for (const auto& t : transactions) {
        const auto blocks = detail::group_by_category(t, catalog);
        const double m = static_cast<double>(blocks.size());
        for (const auto& [c1, g1] : blocks) {
            const double inv_g1 = 1.0 / static_cast<double>(g1.size());
            for (int s1 : g1) {
                p(in, s1) += inv_g1 / m;
                p(s1, out) += inv_g1 / m;
                for (int s2 : g1)
                    if (s1 != s2) p(s1, s2) += inv_g1;
            }
            for (const auto& [c2, g2] : blocks) {
                if (c1 == c2) continue;
                const double w = inv_g1 / static_cast<double>(g2.size()) / m;
                for (int s1 : g1)
                    for (int s2 : g2) p(s1, s2) += w;
            }
        }
    }
    return p;
}

inline TransitionMatrices expected_transitions(const std::vector<Transaction>& transactions,
                                               const Catalog& catalog) {
    return {expected_category_transitions(transactions, catalog),
            expected_subcategory_transitions(transactions, catalog), TransitionMode::expected, {}};
}

/// One realized visit order: categories shuffled (Fisher-Yates over the
/// ascending category list), then each block's members shuffled likewise.
inline std::vector<int> sample_visit_order(const Transaction& t, const Catalog& catalog, Rng& rng) {
    auto blocks = detail::group_by_category(t, catalog);
    std::vector<int> cats;
    for (const auto& [c, members] : blocks) cats.push_back(c);
    rng.shuffle(std::span<int>(cats));
    std::vector<int> order;
    order.reserve(t.subcategories.size());
    for (int c : cats) {
        auto& block = blocks[c];
        rng.shuffle(std::span<int>(block));
        order.insert(order.end(), block.begin(), block.end());
    }
    return order;
}

/// Integer walk counts along one sampled visit order per transaction. A
/// single generator seeded with `seed` is consumed in transaction order.
inline TransitionMatrices sampled_transitions(const std::vector<Transaction>& transactions,
                                              const Catalog& catalog, std::uint64_t seed) {
    validate_transactions(transactions, catalog);
    TransitionMatrices out{Matrix<double>::square(catalog.category_count()),
                           Matrix<double>::square(catalog.subcategory_count()), TransitionMode::sampled,
                           seed};
    Rng rng(seed);
    for (const auto& t : transactions) {
        const auto order = sample_visit_order(t, catalog, rng);
        int prev_sub = catalog.check_in_subcategory();
        int prev_cat = catalog.check_in_category();
        for (int s : order) {
            out.subcategory(prev_sub, s) += 1.0;
            const int c = catalog.parent(s);
            if (c != prev_cat) out.category(prev_cat, c) += 1.0;
            prev_sub = s;
            prev_cat = c;
        }
        out.subcategory(prev_sub, catalog.check_out_subcategory()) += 1.0;
        out.category(prev_cat, catalog.check_out_category()) += 1.0;
    }
    return out;
}

/// A replayed shopping trip: visited sublocation positions (entrance first,
/// exit last) and the concatenated walk through the store.
struct Trip {
    std::vector<int> stops;
    NodePath path;
};

/// Replays one sampled visit order per transaction on a subcategory
/// assignment (product order of the catalog, positions in sublocation
/// position order). Consecutive shortest paths share their junction node.
inline std::vector<Trip> replay_paths(const std::vector<Transaction>& transactions, const Catalog& catalog,
                                      const Assignment& assignment, const ShortestPaths& sp,
                                      std::uint64_t seed) {
    const StoreGraph& g = sp.graph();
    if (assignment.size() != catalog.subcategory_count() || !assignment.complete())
        throw ValidationError("replay needs a complete subcategory assignment");
    const auto centers = g.sub_position_nodes();
    for (int p : assignment.position_of)
        if (p < 0 || static_cast<std::size_t>(p) >= centers.size())
            throw ValidationError("assignment position out of range");
    validate_transactions(transactions, catalog);

    std::vector<Trip> trips;
    trips.reserve(transactions.size());
    Rng rng(seed);
    for (const auto& t : transactions) {
        Trip trip;
        trip.stops.push_back(assignment[catalog.check_in_subcategory()]);
        for (int s : sample_visit_order(t, catalog, rng)) trip.stops.push_back(assignment[s]);
        trip.stops.push_back(assignment[catalog.check_out_subcategory()]);
        trip.path.push_back(centers[trip.stops.front()]);
        for (std::size_t i = 1; i < trip.stops.size(); ++i) {
            const auto leg = sp.path(centers[trip.stops[i - 1]], centers[trip.stops[i]]);
            trip.path.insert(trip.path.end(), leg.begin() + 1, leg.end());
        }
        trips.push_back(std::move(trip));
    }
    return trips;
}

/// Σ over trips and legs of the leg exposure E[stop][next stop].
inline double replayed_exposure(const std::vector<Trip>& trips, const Matrix<double>& sub_exposure) {
    double total = 0.0;
    for (const auto& t : trips)
        for (std::size_t i = 1; i < t.stops.size(); ++i) total += sub_exposure(t.stops[i - 1], t.stops[i]);
    return total;
}

inline std::vector<NodePath> trip_paths(const std::vector<Trip>& trips) {
    std::vector<NodePath> out;
    out.reserve(trips.size());
    for (const auto& t : trips) out.push_back(t.path);
    return out;
}

}  // namespace storelayout
