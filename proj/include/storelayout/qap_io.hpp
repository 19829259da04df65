#pragma once

// Text formats for QAP instances.
//
// Native format (whitespace separated, '#' starts a comment):
//
//   storelayout-qap 1
//   level <level1|level2|integrated>
//   n <dimension>
//   flow        followed by n rows of n reals
//   exposure    followed by n rows of n reals
//   eligibility followed by n rows of n 0/1 values
//   groups <count>                          (level2/integrated)
//   product_group  <n ints>
//   position_group <n ints>
//   group_assignment <count ints>           (level2)
//   group_eligibility  followed by count rows of count 0/1 values (integrated)
//   end
//
// QAPLIB layout: n, then the n x n flow matrix, then the n x n distance
// matrix, all whitespace separated.

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "storelayout/qap.hpp"

namespace storelayout {

namespace detail {

class TokenReader {
public:
    explicit TokenReader(std::istream& in) : in_(in) {}

    bool next(std::string& tok) {
        while (true) {
            if (line_stream_ >> tok) {
                if (tok[0] == '#') {
                    line_stream_.setstate(std::ios::eofbit);
                    continue;
                }
                return true;
            }
            std::string line;
            if (!std::getline(in_, line)) return false;
            ++line_;
            line_stream_.clear();
            line_stream_.str(line);
        }
    }

    std::string expect_any(const char* what) {
        std::string tok;
        if (!next(tok)) throw ParseError(std::string("unexpected end of input, expected ") + what, line_);
        return tok;
    }

    void expect(const std::string& keyword) {
        const auto tok = expect_any(keyword.c_str());
        if (tok != keyword) throw ParseError("expected '" + keyword + "', found '" + tok + "'", line_);
    }

    double real() {
        const auto tok = expect_any("a number");
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw ParseError("'" + tok + "' is not a number", line_);
        }
    }

    long long integer() {
        const auto tok = expect_any("an integer");
        try {
            std::size_t used = 0;
            const long long v = std::stoll(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw ParseError("'" + tok + "' is not an integer", line_);
        }
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::istream& in_;
    std::istringstream line_stream_;
    std::size_t line_ = 0;
};

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T>
void write_rows(std::ostream& out, const Matrix<T>& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) out << ' ';
            if constexpr (std::is_floating_point_v<T>)
                out << format_real(m(r, c));
            else
                out << static_cast<int>(m(r, c));
        }
        out << '\n';
    }
}

inline Matrix<double> read_real_rows(TokenReader& in, std::size_t rows, std::size_t cols) {
    Matrix<double> m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = in.real();
    return m;
}

inline BoolMatrix read_bool_rows(TokenReader& in, std::size_t n) {
    BoolMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            const auto v = in.integer();
            if (v != 0 && v != 1) throw ParseError("eligibility entries must be 0 or 1", in.line());
            m(r, c) = static_cast<unsigned char>(v);
        }
    return m;
}

inline std::vector<int> read_ints(TokenReader& in, std::size_t n) {
    std::vector<int> v(n);
    for (auto& x : v) x = static_cast<int>(in.integer());
    return v;
}

}  // namespace detail

inline void write_instance(std::ostream& out, const QapInstance& inst) {
    const std::size_t n = inst.size();
    out << "storelayout-qap 1\nlevel " << to_string(inst.level()) << "\nn " << n << "\nflow\n";
    detail::write_rows(out, inst.flow());
    out << "exposure\n";
    detail::write_rows(out, inst.exposure());
    out << "eligibility\n";
    detail::write_rows(out, inst.eligibility());
    if (const auto& h = inst.hierarchy()) {
        auto ints = [&](const char* key, const std::vector<int>& v) {
            out << key;
            for (int x : v) out << ' ' << x;
            out << '\n';
        };
        out << "groups " << h->group_count << '\n';
        ints("product_group", h->product_group);
        ints("position_group", h->position_group);
        if (inst.level() == Level::level2) ints("group_assignment", h->group_assignment);
        if (inst.level() == Level::integrated) {
            out << "group_eligibility\n";
            detail::write_rows(out, h->group_eligibility);
        }
    }
    out << "end\n";
}

inline QapInstance read_instance(std::istream& in) {
    detail::TokenReader r(in);
    r.expect("storelayout-qap");
    if (r.integer() != 1) throw ParseError("unsupported instance format version", r.line());
    r.expect("level");
    const auto level_name = r.expect_any("a level");
    Level level;
    if (level_name == "level1")
        level = Level::level1;
    else if (level_name == "level2")
        level = Level::level2;
    else if (level_name == "integrated")
        level = Level::integrated;
    else
        throw ParseError("unknown level '" + level_name + "'", r.line());
    r.expect("n");
    const auto n_signed = r.integer();
    if (n_signed < 2 || n_signed > 100000) throw ParseError("dimension out of range", r.line());
    const auto n = static_cast<std::size_t>(n_signed);
    r.expect("flow");
    auto flow = detail::read_real_rows(r, n, n);
    r.expect("exposure");
    auto exposure = detail::read_real_rows(r, n, n);
    r.expect("eligibility");
    auto elig = detail::read_bool_rows(r, n);
    std::optional<Hierarchy> hierarchy;
    auto tok = r.expect_any("'groups' or 'end'");
    if (tok == "groups") {
        Hierarchy h;
        const auto g = r.integer();
        if (g < 2 || static_cast<std::size_t>(g) > n) throw ParseError("group count out of range", r.line());
        h.group_count = static_cast<std::size_t>(g);
        r.expect("product_group");
        h.product_group = detail::read_ints(r, n);
        r.expect("position_group");
        h.position_group = detail::read_ints(r, n);
        if (level == Level::level2) {
            r.expect("group_assignment");
            h.group_assignment = detail::read_ints(r, h.group_count);
        } else if (level == Level::integrated) {
            r.expect("group_eligibility");
            h.group_eligibility = detail::read_bool_rows(r, h.group_count);
        }
        hierarchy = std::move(h);
        tok = r.expect_any("'end'");
    }
    if (tok != "end") throw ParseError("expected 'end', found '" + tok + "'", r.line());
    return QapInstance(level, std::move(flow), std::move(exposure), std::move(elig), std::move(hierarchy));
}

/// A minimization instance in QAPLIB layout.
struct QaplibProblem {
    std::size_t n = 0;
    Matrix<double> flow;
    Matrix<double> distance;
};

inline QaplibProblem read_qaplib(std::istream& in) {
    detail::TokenReader r(in);
    const auto n = r.integer();
    if (n < 1 || n > 10000) throw ParseError("QAPLIB dimension out of range", r.line());
    QaplibProblem p;
    p.n = static_cast<std::size_t>(n);
    p.flow = detail::read_real_rows(r, p.n, p.n);
    p.distance = detail::read_real_rows(r, p.n, p.n);
    return p;
}

/// Wraps a QAPLIB problem as a level-1 maximization instance: facilities sit
/// between zero-flow check-in/check-out dummies with free eligibility, and
/// flow is negated, so the maximum objective equals minus the QAPLIB cost.
inline QapInstance qaplib_to_instance(const QaplibProblem& p) {
    const std::size_t n = p.n + 2;
    auto flow = Matrix<double>::square(n);
    auto exposure = Matrix<double>::square(n);
    BoolMatrix elig(n, n, 0);
    elig(0, 0) = 1;
    elig(n - 1, n - 1) = 1;
    for (std::size_t i = 0; i < p.n; ++i)
        for (std::size_t j = 0; j < p.n; ++j) {
            flow(i + 1, j + 1) = -p.flow(i, j);
            exposure(i + 1, j + 1) = p.distance(i, j);
            elig(i + 1, j + 1) = 1;
        }
    return QapInstance(Level::level1, std::move(flow), std::move(exposure), std::move(elig));
}

}  // namespace storelayout
