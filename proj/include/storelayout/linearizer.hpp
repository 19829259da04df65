#pragma once

// Adams-Johnson linearization of restricted QAP instances and LP-format
// export.
//
// Every quadratic term x[i1][k1]*x[i2][k2] gets a continuous variable w
// (y at sublocation level) linked to the binaries by
//   sum over i1 of w[i1][k1][i2][k2] = x[i2][k2]   for all i2, k1, k2
//   sum over k1 of w[i1][k1][i2][k2] = x[i2][k2]   for all i1, i2, k2
//   w[i1][k1][i2][k2] = w[i2][k2][i1][k1]          one row per unordered pair
//   w >= 0
// The diagonal w[i][k][i][k] is the binary x[i][k] itself.
//
// Variable names: level1 uses x_i_k and w_i1_k1_i2_k2; level2 uses z_i_k and
// y_i1_k1_i2_k2; integrated uses x_i_k for categories plus z and y.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "storelayout/qap.hpp"

namespace storelayout {

enum class ModelTag { ll1m, ll2m, lim };

inline const char* to_string(ModelTag t) {
    switch (t) {
        case ModelTag::ll1m: return "LL1M";
        case ModelTag::ll2m: return "LL2M";
        case ModelTag::lim: return "LIM";
    }
    return "?";
}

inline ModelTag model_tag(Level l) {
    switch (l) {
        case Level::level1: return ModelTag::ll1m;
        case Level::level2: return ModelTag::ll2m;
        case Level::integrated: return ModelTag::lim;
    }
    return ModelTag::ll1m;
}

/// A variable's role and indices. `kind` is the leading letter of its name:
/// x/z for assignment binaries, w/y for product variables.
struct VarRef {
    char kind = 'x';
    int i1 = 0, k1 = 0, i2 = -1, k2 = -1;

    bool is_product() const noexcept { return kind == 'w' || kind == 'y'; }
    std::string name() const {
        std::string s(1, kind);
        for (int v : is_product() ? std::vector<int>{i1, k1, i2, k2} : std::vector<int>{i1, k1})
            s += '_' + std::to_string(v);
        return s;
    }
    friend bool operator==(const VarRef&, const VarRef&) = default;
};

/// Inverse of VarRef::name; nullopt for anything that is not a well-formed
/// variable name.
inline std::optional<VarRef> parse_variable_name(std::string_view name) {
    if (name.size() < 3 || name[1] != '_') return std::nullopt;
    VarRef v;
    v.kind = name[0];
    if (v.kind != 'x' && v.kind != 'z' && v.kind != 'w' && v.kind != 'y') return std::nullopt;
    std::vector<int> idx;
    std::size_t pos = 2;
    while (pos <= name.size()) {
        const std::size_t end = std::min(name.find('_', pos), name.size());
        if (end == pos || end - pos > 9) return std::nullopt;
        int value = 0;
        for (std::size_t c = pos; c < end; ++c) {
            if (name[c] < '0' || name[c] > '9') return std::nullopt;
            value = value * 10 + (name[c] - '0');
        }
        if (end - pos > 1 && name[pos] == '0') return std::nullopt;  // keep names canonical
        idx.push_back(value);
        pos = end + 1;
    }
    if (v.is_product() ? idx.size() != 4 : idx.size() != 2) return std::nullopt;
    v.i1 = idx[0];
    v.k1 = idx[1];
    if (v.is_product()) {
        v.i2 = idx[2];
        v.k2 = idx[3];
    }
    return v;
}

enum class Sense { eq, le };

struct LinearModel {
    ModelTag tag = ModelTag::ll1m;
    std::size_t n = 0;       // products = positions (sublocation level for LL2M/LIM)
    std::size_t groups = 0;  // categories = locations (LIM only)
    bool sparse = false;

    std::vector<VarRef> vars;
    std::vector<char> binary;
    std::vector<std::pair<int, double>> objective;

    // constraint rows, compressed
    std::vector<std::string> row_names;
    std::vector<Sense> senses;
    std::vector<double> rhs;
    std::vector<std::size_t> row_start{0};
    std::vector<int> cols;
    std::vector<double> coefs;

    // index lookups, -1 when the variable was dropped
    std::vector<int> assign_index;    // n*n
    std::vector<int> category_index;  // groups*groups (LIM)
    std::vector<int> product_index;   // n^4, diagonal unused

    std::size_t rows() const noexcept { return row_names.size(); }
    std::size_t var_count() const noexcept { return vars.size(); }

    int assign_var(int i, int k) const { return assign_index[static_cast<std::size_t>(i) * n + k]; }
    int category_var(int g, int l) const { return category_index[static_cast<std::size_t>(g) * groups + l]; }
    /// Product variable for the pair; the diagonal resolves to the binary.
    int product_var(int i1, int k1, int i2, int k2) const {
        if (i1 == i2 && k1 == k2) return assign_var(i1, k1);
        return product_index[((static_cast<std::size_t>(i1) * n + k1) * n + i2) * n + k2];
    }

    /// Number of rows whose name starts with `prefix`.
    std::size_t count_rows(std::string_view prefix) const {
        std::size_t c = 0;
        for (const auto& r : row_names) c += r.compare(0, prefix.size(), prefix) == 0;
        return c;
    }

    /// Lookup by name; -1 when unknown.
    int find_var(std::string_view name) const {
        const auto v = parse_variable_name(name);
        if (!v) return -1;
        const int N = static_cast<int>(n);
        auto in = [&](int x, int lim) { return x >= 0 && x < lim; };
        if (v->is_product()) {
            if ((v->kind == 'w') != (tag == ModelTag::ll1m)) return -1;
            if (!in(v->i1, N) || !in(v->k1, N) || !in(v->i2, N) || !in(v->k2, N)) return -1;
            if (v->i1 == v->i2 && v->k1 == v->k2) return -1;
            return product_var(v->i1, v->k1, v->i2, v->k2);
        }
        if (tag == ModelTag::lim && v->kind == 'x') {
            const int G = static_cast<int>(groups);
            return in(v->i1, G) && in(v->k1, G) ? category_var(v->i1, v->k1) : -1;
        }
        if ((v->kind == 'x') != (tag == ModelTag::ll1m)) return -1;
        return in(v->i1, N) && in(v->k1, N) ? assign_var(v->i1, v->k1) : -1;
    }
};

namespace detail {

class RowBuilder {
public:
    explicit RowBuilder(LinearModel& m) : m_(m) {}

    void add(int var, double coef) {
        if (var >= 0) terms_.emplace_back(var, coef);
    }

    /// Appends the row with duplicate columns merged. Rows left without terms
    /// are dropped when trivially satisfied.
    void emit(std::string name, Sense sense, double rhs) {
        std::map<int, double> merged;
        for (auto [v, c] : terms_) merged[v] += c;
        terms_.clear();
        std::size_t kept = 0;
        for (auto [v, c] : merged)
            if (c != 0.0) {
                m_.cols.push_back(v);
                m_.coefs.push_back(c);
                ++kept;
            }
        if (kept == 0) {
            const bool ok = sense == Sense::eq ? rhs == 0.0 : rhs >= 0.0;
            if (ok) return;
            throw ModelError("linearization produced an unsatisfiable empty row " + name);
        }
        m_.row_names.push_back(std::move(name));
        m_.senses.push_back(sense);
        m_.rhs.push_back(rhs);
        m_.row_start.push_back(m_.cols.size());
    }

private:
    LinearModel& m_;
    std::vector<std::pair<int, double>> terms_;
};

inline std::string idx_name(const char* prefix, std::initializer_list<int> idx) {
    std::string s = prefix;
    for (int v : idx) s += '_' + std::to_string(v);
    return s;
}

}  // namespace detail

/// Adams-Johnson model of `inst`. With `sparse`, variables that every
/// feasible binary solution fixes at zero (ineligible placements, two
/// products on one position, one product on two positions) are left out
/// together with the rows they empty; the feasible set is unchanged.
inline LinearModel linearize(const QapInstance& inst, bool sparse = false) {
    LinearModel m;
    m.tag = model_tag(inst.level());
    m.n = inst.size();
    m.sparse = sparse;
    const int N = static_cast<int>(m.n);
    if (m.n > 255) throw SizeError("instance too large to linearize");
    const bool level1 = inst.level() == Level::level1;
    const char akind = level1 ? 'x' : 'z';
    const char pkind = level1 ? 'w' : 'y';
    const Hierarchy* h = inst.hierarchy() ? &*inst.hierarchy() : nullptr;
    if (!level1 && !h) throw ModelError("sublocation-level instance lacks its category/location groups");

    auto keep_assign = [&](int i, int k) { return !sparse || inst.eligible(i, k); };

    m.assign_index.assign(m.n * m.n, -1);
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < N; ++k)
            if (keep_assign(i, k)) {
                m.assign_index[static_cast<std::size_t>(i) * m.n + k] = static_cast<int>(m.vars.size());
                m.vars.push_back({akind, i, k});
                m.binary.push_back(1);
            }

    std::vector<std::size_t> gsize_p, gsize_q;
    if (m.tag == ModelTag::lim) {
        m.groups = h->group_count;
        gsize_p = detail::group_sizes(h->product_group, m.groups);
        gsize_q = detail::group_sizes(h->position_group, m.groups);
        const int G = static_cast<int>(m.groups);
        m.category_index.assign(m.groups * m.groups, -1);
        for (int g = 0; g < G; ++g)
            for (int l = 0; l < G; ++l)
                if (!sparse || (h->group_eligibility(g, l) && gsize_p[g] == gsize_q[l])) {
                    m.category_index[static_cast<std::size_t>(g) * m.groups + l] = static_cast<int>(m.vars.size());
                    m.vars.push_back({'x', g, l});
                    m.binary.push_back(1);
                }
    }

    m.product_index.assign(m.n * m.n * m.n * m.n, -1);
    for (int i1 = 0; i1 < N; ++i1)
        for (int k1 = 0; k1 < N; ++k1)
            for (int i2 = 0; i2 < N; ++i2)
                for (int k2 = 0; k2 < N; ++k2) {
                    if (i1 == i2 && k1 == k2) continue;
                    if (sparse && (i1 == i2 || k1 == k2 || !keep_assign(i1, k1) || !keep_assign(i2, k2)))
                        continue;
                    m.product_index[((static_cast<std::size_t>(i1) * m.n + k1) * m.n + i2) * m.n + k2] =
                        static_cast<int>(m.vars.size());
                    m.vars.push_back({pkind, i1, k1, i2, k2});
                    m.binary.push_back(0);
                }

    const auto& f = inst.flow();
    const auto& e = inst.exposure();
    for (int i1 = 0; i1 < N; ++i1)
        for (int k1 = 0; k1 < N; ++k1)
            for (int i2 = 0; i2 < N; ++i2)
                for (int k2 = 0; k2 < N; ++k2) {
                    const double c = f(i1, i2) * e(k1, k2);
                    const int v = m.product_var(i1, k1, i2, k2);
                    if (c != 0.0 && v >= 0) m.objective.emplace_back(v, c);
                }

    detail::RowBuilder row(m);
    using detail::idx_name;

    // assignment structure
    if (m.tag == ModelTag::ll1m || m.tag == ModelTag::lim) {
        const int G = m.tag == ModelTag::lim ? static_cast<int>(m.groups) : N;
        auto var = [&](int g, int l) { return m.tag == ModelTag::lim ? m.category_var(g, l) : m.assign_var(g, l); };
        auto elig = [&](int g, int l) {
            return m.tag == ModelTag::lim ? h->group_eligibility(g, l) != 0 : inst.eligible(g, l);
        };
        for (int l = 0; l < G; ++l) {
            for (int g = 0; g < G; ++g) row.add(var(g, l), 1.0);
            row.emit(idx_name("one_product_per_position", {l}), Sense::eq, 1.0);
        }
        for (int g = 0; g < G; ++g) {
            for (int l = 0; l < G; ++l) row.add(var(g, l), 1.0);
            row.emit(idx_name("one_position_per_product", {g}), Sense::eq, 1.0);
        }
        for (int g = 0; g < G; ++g)
            for (int l = 0; l < G; ++l)
                if (!elig(g, l) && var(g, l) >= 0) {
                    row.add(var(g, l), 1.0);
                    row.emit(idx_name("eligibility", {g, l}), Sense::le, 0.0);
                }
    }
    if (m.tag == ModelTag::ll2m || m.tag == ModelTag::lim) {
        const auto members = h->products_of_group();
        const auto slots = h->positions_of_group();
        const int G = static_cast<int>(h->group_count);
        for (int g = 0; g < G; ++g)
            for (int l = 0; l < G; ++l) {
                const double fixed = m.tag == ModelTag::ll2m && h->group_assignment[g] == l ? 1.0 : 0.0;
                auto close = [&](std::string name) {
                    if (m.tag == ModelTag::lim) {
                        row.add(m.category_var(g, l), -1.0);
                        row.emit(std::move(name), Sense::eq, 0.0);
                    } else {
                        row.emit(std::move(name), Sense::eq, fixed);
                    }
                };
                for (int i1 : members[g]) {
                    for (int k1 : slots[l]) row.add(m.assign_var(i1, k1), 1.0);
                    close(idx_name("block_product", {g, l, i1}));
                }
                for (int k1 : slots[l]) {
                    for (int i1 : members[g]) row.add(m.assign_var(i1, k1), 1.0);
                    close(idx_name("block_position", {g, l, k1}));
                }
            }
    }

    // linking rows
    for (int i2 = 0; i2 < N; ++i2)
        for (int k1 = 0; k1 < N; ++k1)
            for (int k2 = 0; k2 < N; ++k2) {
                for (int i1 = 0; i1 < N; ++i1) row.add(m.product_var(i1, k1, i2, k2), 1.0);
                row.add(m.assign_var(i2, k2), -1.0);
                row.emit(idx_name("link_products", {i2, k1, k2}), Sense::eq, 0.0);
            }
    for (int i1 = 0; i1 < N; ++i1)
        for (int i2 = 0; i2 < N; ++i2)
            for (int k2 = 0; k2 < N; ++k2) {
                for (int k1 = 0; k1 < N; ++k1) row.add(m.product_var(i1, k1, i2, k2), 1.0);
                row.add(m.assign_var(i2, k2), -1.0);
                row.emit(idx_name("link_positions", {i1, i2, k2}), Sense::eq, 0.0);
            }
    for (int i1 = 0; i1 < N; ++i1)
        for (int k1 = 0; k1 < N; ++k1)
            for (int i2 = i1; i2 < N; ++i2)
                for (int k2 = 0; k2 < N; ++k2) {
                    if (i2 == i1 && k2 <= k1) continue;
                    const int a = m.product_var(i1, k1, i2, k2);
                    const int b = m.product_var(i2, k2, i1, k1);
                    if (a < 0 && b < 0) continue;
                    row.add(a, 1.0);
                    row.add(b, -1.0);
                    row.emit(idx_name("symmetry", {i1, k1, i2, k2}), Sense::eq, 0.0);
                }
    return m;
}

// ---------------------------------------------------------------------------
// LP format

namespace detail {

inline std::string lp_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

class LpLine {
public:
    explicit LpLine(std::ostream& out) : out_(out) {}

    void start(const std::string& head) {
        out_ << head;
        width_ = head.size();
    }
    void put(const std::string& tok) {
        if (width_ + 1 + tok.size() > 100) {
            out_ << "\n   ";
            width_ = 3;
        } else {
            out_ << ' ';
            ++width_;
        }
        out_ << tok;
        width_ += tok.size();
    }
    void term(double coef, const std::string& var, bool first) {
        const bool neg = coef < 0.0;
        const double mag = std::abs(coef);
        if (!first || neg) put(neg ? "-" : "+");
        put(mag == 1.0 ? var : lp_number(mag) + " " + var);
    }
    void end() { out_ << '\n'; }

private:
    std::ostream& out_;
    std::size_t width_ = 0;
};

}  // namespace detail

/// CPLEX LP text for the model.
inline void write_lp(std::ostream& out, const LinearModel& m) {
    out << "\\ " << to_string(m.tag) << " Adams-Johnson linearization, n = " << m.n
        << (m.sparse ? ", sparse\n" : ", full index ranges\n");
    out << "Maximize\n";
    detail::LpLine line(out);
    line.start(" obj:");
    if (m.objective.empty()) {
        line.put("0 " + m.vars.front().name());
    } else {
        bool first = true;
        for (auto [v, c] : m.objective) {
            line.term(c, m.vars[v].name(), first);
            first = false;
        }
    }
    line.end();
    out << "Subject To\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        line.start(" " + m.row_names[r] + ":");
        for (std::size_t t = m.row_start[r]; t < m.row_start[r + 1]; ++t)
            line.term(m.coefs[t], m.vars[m.cols[t]].name(), t == m.row_start[r]);
        line.put(m.senses[r] == Sense::eq ? "=" : "<=");
        line.put(detail::lp_number(m.rhs[r] == 0.0 ? 0.0 : m.rhs[r]));
        line.end();
    }
    out << "Bounds\n";
    for (std::size_t v = 0; v < m.var_count(); ++v)
        if (!m.binary[v]) out << ' ' << m.vars[v].name() << " >= 0\n";
    out << "Binaries\n";
    line.start("");
    for (std::size_t v = 0; v < m.var_count(); ++v)
        if (m.binary[v]) line.put(m.vars[v].name());
    line.end();
    out << "End\n";
}

inline void write_lp_file(const std::string& path, const LinearModel& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write LP file " + path);
    write_lp(out, m);
    out.flush();
    if (!out) throw IoError("failed while writing LP file " + path);
}

// ---------------------------------------------------------------------------
// Solutions

struct ExternalSolution {
    std::map<std::string, double> values;
    std::optional<double> objective;
};

/// Reads `name value` lines. '#' starts a comment, except that a comment of
/// the form "# Objective value = v" supplies the objective; so does a line
/// "objective v".
inline ExternalSolution parse_solution(std::istream& in) {
    ExternalSolution sol;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            std::string comment = line.substr(hash + 1);
            const auto eq = comment.find('=');
            if (eq != std::string::npos) {
                std::istringstream key(comment.substr(0, eq));
                std::string w1, w2, extra;
                if (key >> w1 >> w2 && !(key >> extra) && (w1 == "Objective" || w1 == "objective") &&
                    w2 == "value") {
                    try {
                        sol.objective = std::stod(comment.substr(eq + 1));
                    } catch (const std::exception&) {
                        throw ParseError("bad objective value", lineno);
                    }
                }
            }
            line.resize(hash);
        }
        std::istringstream ls(line);
        std::string name, value, extra;
        if (!(ls >> name)) continue;
        if (!(ls >> value) || (ls >> extra)) throw ParseError("expected 'name value'", lineno);
        double v;
        try {
            std::size_t used = 0;
            v = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw ParseError("'" + value + "' is not a number", lineno);
        }
        if (name == "objective") {
            sol.objective = v;
            continue;
        }
        if (!sol.values.emplace(name, v).second) throw ParseError("variable '" + name + "' listed twice", lineno);
    }
    return sol;
}

/// Values of every model variable for a complete assignment, with each
/// product variable set to the product of its two binaries.
inline std::vector<double> substitution_values(const LinearModel& m, const QapInstance& inst, const Assignment& a) {
    std::vector<double> v(m.var_count(), 0.0);
    auto placed = [&](int i, int k) { return a[i] == k ? 1.0 : 0.0; };
    std::optional<Assignment> groups;
    if (m.tag == ModelTag::lim) groups = induced_group_assignment(inst, a);
    for (std::size_t j = 0; j < m.var_count(); ++j) {
        const auto& r = m.vars[j];
        if (r.is_product())
            v[j] = placed(r.i1, r.k1) * placed(r.i2, r.k2);
        else if (m.tag == ModelTag::lim && r.kind == 'x')
            v[j] = (*groups)[r.i1] == r.k1 ? 1.0 : 0.0;
        else
            v[j] = placed(r.i1, r.k1);
    }
    return v;
}

inline double linear_objective(const LinearModel& m, const std::vector<double>& values) {
    double s = 0.0;
    for (auto [v, c] : m.objective) s += c * values[v];
    return s;
}

struct RowViolation {
    std::string row;
    double amount;
};

/// Rows violated by more than `tol`, plus negative product variables.
inline std::vector<RowViolation> row_violations(const LinearModel& m, const std::vector<double>& values,
                                                double tol = 1e-6) {
    std::vector<RowViolation> out;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        double lhs = 0.0;
        for (std::size_t t = m.row_start[r]; t < m.row_start[r + 1]; ++t) lhs += m.coefs[t] * values[m.cols[t]];
        const double excess = m.senses[r] == Sense::eq ? std::abs(lhs - m.rhs[r]) : lhs - m.rhs[r];
        if (excess > tol) out.push_back({m.row_names[r], excess});
    }
    for (std::size_t v = 0; v < m.var_count(); ++v)
        if (!m.binary[v] && values[v] < -tol) out.push_back({"nonnegative " + m.vars[v].name(), -values[v]});
    return out;
}

struct SolutionReport {
    bool feasible = false;
    Assignment assignment;
    std::optional<double> quadratic_objective;
    double linear_objective = 0.0;
    std::optional<double> reported_objective;
    std::optional<double> gap;  // |linear - quadratic|
    std::vector<std::string> violations;
};

/// Checks an external solution against the model and the instance: binaries
/// are rounded (and flagged when more than 1e-6 from 0/1), the assignment is
/// rebuilt and checked, every row is evaluated, and the quadratic objective
/// is recomputed. Absent continuous variables count as 0; absent binaries
/// or unknown names are errors.
inline SolutionReport validate_solution(const QapInstance& inst, const LinearModel& m, const ExternalSolution& sol) {
    constexpr double tol = 1e-6;
    std::vector<double> values(m.var_count(), 0.0);
    std::vector<char> given(m.var_count(), 0);
    std::vector<std::string> unknown;
    for (const auto& [name, value] : sol.values) {
        const int v = m.find_var(name);
        if (v < 0) {
            // dropped variables of a sparse model may still appear as zeros
            const auto ref = parse_variable_name(name);
            if (m.sparse && ref && value == 0.0) continue;
            unknown.push_back(name);
            continue;
        }
        values[v] = value;
        given[v] = 1;
    }
    if (!unknown.empty()) {
        std::string msg = "solution names variables the model does not have:";
        for (std::size_t t = 0; t < unknown.size() && t < 10; ++t) msg += ' ' + unknown[t];
        if (unknown.size() > 10) msg += " ...";
        throw ValidationError(msg);
    }
    std::vector<std::string> missing;
    for (std::size_t v = 0; v < m.var_count(); ++v)
        if (m.binary[v] && !given[v]) missing.push_back(m.vars[v].name());
    if (!missing.empty()) {
        std::string msg = "solution lacks " + std::to_string(missing.size()) + " binary variable(s):";
        for (std::size_t t = 0; t < missing.size() && t < 10; ++t) msg += ' ' + missing[t];
        if (missing.size() > 10) msg += " ...";
        throw ValidationError(msg);
    }

    SolutionReport rep;
    for (std::size_t v = 0; v < m.var_count(); ++v) {
        if (!m.binary[v]) continue;
        const double x = values[v];
        const double r = x >= 0.5 ? 1.0 : 0.0;
        if (std::abs(x - r) > tol)
            rep.violations.push_back("integrality: " + m.vars[v].name() + " = " + detail::lp_number(x));
        values[v] = r;
    }

    const std::size_t n = m.n;
    rep.assignment = Assignment(n);
    for (std::size_t v = 0; v < m.var_count(); ++v) {
        const auto& r = m.vars[v];
        if (!m.binary[v] || values[v] != 1.0) continue;
        if (m.tag == ModelTag::lim && r.kind == 'x') continue;
        if (rep.assignment[r.i1] >= 0)
            rep.violations.push_back("one-position-per-product: product " + std::to_string(r.i1) +
                                     " set at positions " + std::to_string(rep.assignment[r.i1]) + " and " +
                                     std::to_string(r.k1));
        else
            rep.assignment[r.i1] = r.k1;
    }
    const auto feas = check_feasible(inst, rep.assignment);
    for (const auto& viol : feas.violations) rep.violations.push_back(viol.message);
    for (const auto& rv : row_violations(m, values, tol))
        rep.violations.push_back("row " + rv.row + " violated by " + detail::lp_number(rv.amount));

    rep.linear_objective = linear_objective(m, values);
    rep.reported_objective = sol.objective;
    if (feas.ok()) {
        rep.quadratic_objective = objective_unchecked(inst, rep.assignment);
        rep.gap = std::abs(rep.linear_objective - *rep.quadratic_objective);
    }
    rep.feasible = rep.violations.empty();
    return rep;
}

}  // namespace storelayout
