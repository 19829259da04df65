#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "storelayout/layout_plan.hpp"
#include "storelayout/solvers/hierarchical.hpp"

namespace storelayout {

// ---------------------------------------------------------------------------
// Matrices as delimited text

template <typename T>
void write_matrix_csv(std::ostream& out, const Matrix<T>& m, const std::vector<std::string>& row_labels,
                      const std::vector<std::string>& col_labels, char delim = ',') {
    if (row_labels.size() != m.rows() || col_labels.size() != m.cols())
        throw InputError("matrix labels do not match its shape");
    out << "label";
    for (const auto& c : col_labels) out << delim << c;
    out << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out << row_labels[r];
        for (std::size_t c = 0; c < m.cols(); ++c) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(m(r, c)));
            out << delim << buf;
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Layout differences

struct Movement {
    std::string level;  // "category" or "subcategory"
    std::string item;
    std::string from;
    std::string to;
    double delta = 0.0;  // share of the objective change
};

struct MovementReport {
    std::vector<Movement> moves;
    double category_delta = 0.0;
    double subcategory_delta = 0.0;
};

/// Items whose position differs between `a` and `b`, each credited with its
/// share of the objective change: a term's change goes to the moved items it
/// involves, split evenly when both moved. The shares sum to the total.
inline std::vector<Movement> diff_assignments(const Matrix<double>& flow, const Matrix<double>& exposure,
                                              const Assignment& a, const Assignment& b,
                                              const std::vector<std::string>& items,
                                              const std::vector<std::string>& positions, const std::string& level,
                                              double* total = nullptr) {
    const std::size_t n = a.size();
    if (b.size() != n || flow.rows() != n) throw ValidationError("layouts cover different item sets");
    std::vector<double> share(n, 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double f = flow(i, j);
            if (f == 0.0) continue;
            const double d = f * (exposure(b[i], b[j]) - exposure(a[i], a[j]));
            if (d == 0.0) continue;
            sum += d;
            const bool mi = a[i] != b[i];
            const bool mj = a[j] != b[j];
            if (i == j || (mi && !mj)) {
                share[i] += d;
            } else if (mj && !mi) {
                share[j] += d;
            } else {
                share[i] += d / 2;
                share[j] += d / 2;
            }
        }
    if (total) *total = sum;
    std::vector<Movement> out;
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] != b[i]) out.push_back({level, items[i], positions[a[i]], positions[b[i]], share[i]});
    return out;
}

/// Movements from `from` to `to` at both levels, with objective changes
/// under the given matrices.
inline MovementReport diff_layouts(const StoreDefinition& def, const ExposureMatrices& exposures,
                                   const TransitionMatrices& transitions, const LayoutPlan& from,
                                   const LayoutPlan& to) {
    check_plan(def, from);
    check_plan(def, to);
    MovementReport r;
    auto cats = diff_assignments(transitions.category, exposures.loc_exposure, from.categories, to.categories,
                                 def.catalog.category_labels(), def.graph.loc_position_labels(), "category",
                                 &r.category_delta);
    auto subs = diff_assignments(transitions.subcategory, exposures.sub_exposure, from.subcategories,
                                 to.subcategories, def.catalog.subcategory_labels(), def.graph.sub_position_labels(),
                                 "subcategory", &r.subcategory_delta);
    r.moves = std::move(cats);
    r.moves.insert(r.moves.end(), subs.begin(), subs.end());
    return r;
}

inline nlohmann::ordered_json movement_report_json(const MovementReport& r) {
    nlohmann::ordered_json j;
    j["category_objective_change"] = r.category_delta;
    j["subcategory_objective_change"] = r.subcategory_delta;
    auto moves = nlohmann::ordered_json::array();
    for (const auto& m : r.moves)
        moves.push_back({{"level", m.level}, {"item", m.item}, {"from", m.from}, {"to", m.to}, {"change", m.delta}});
    j["moves"] = std::move(moves);
    return j;
}

// ---------------------------------------------------------------------------
// Traffic heatmap

struct Rgb {
    int r, g, b;
};

inline constexpr Rgb heat_low{255, 255, 204};  // pale yellow
inline constexpr Rgb heat_high{255, 0, 0};

/// Position of `count` on the pale-yellow..red scale. A flat nonzero
/// density sits mid-scale; an all-zero one stays pale yellow.
inline double heat_fraction(long long count, long long lo, long long hi) {
    if (hi == lo) return hi == 0 ? 0.0 : 0.5;
    return static_cast<double>(count - lo) / static_cast<double>(hi - lo);
}

inline Rgb heat_color(double t) {
    auto mix = [t](int a, int b) { return static_cast<int>(std::lround(a + (b - a) * t)); };
    return {mix(heat_low.r, heat_high.r), mix(heat_low.g, heat_high.g), mix(heat_low.b, heat_high.b)};
}

inline std::string hex_color(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02X%02X%02X", c.r, c.g, c.b);
    return buf;
}

/// SVG map of the store drawn to scale (y up), nodes colored by traffic,
/// with sublocation labels and a min/max legend.
inline void render_heatmap(std::ostream& out, const StoreGraph& g, const TrafficDensity& density,
                           const std::string& title, const std::vector<std::string>* sublocation_text = nullptr) {
    if (density.counts.size() != g.node_count()) throw InputError("density does not cover every store node");
    constexpr double scale = 20.0;  // px per meter
    constexpr double margin = 40.0;
    constexpr double legend_h = 60.0;
    double minx = g.nodes().front().x, maxx = minx, miny = g.nodes().front().y, maxy = miny;
    for (const auto& n : g.nodes()) {
        minx = std::min(minx, n.x);
        maxx = std::max(maxx, n.x);
        miny = std::min(miny, n.y);
        maxy = std::max(maxy, n.y);
    }
    const double width = (maxx - minx) * scale + 2 * margin;
    const double plot_h = (maxy - miny) * scale + 2 * margin;
    const double height = plot_h + legend_h;
    auto px = [&](double x) { return margin + (x - minx) * scale; };
    auto py = [&](double y) { return margin + (maxy - y) * scale; };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };
    auto esc = [](const std::string& s) {
        std::string o;
        for (char c : s) {
            switch (c) {
                case '&': o += "&amp;"; break;
                case '<': o += "&lt;"; break;
                case '>': o += "&gt;"; break;
                case '"': o += "&quot;"; break;
                default: o += c;
            }
        }
        return o;
    };
    const long long lo = density.min(), hi = density.max();

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
        << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\" font-family=\"sans-serif\">\n";
    out << "<title>" << esc(title) << "</title>\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"#FFFFFF\"/>\n";
    out << "<text x=\"" << num(margin) << "\" y=\"20\" font-size=\"13\">" << esc(title) << "</text>\n";
    out << "<g stroke=\"#B0B0B0\" stroke-width=\"3\" stroke-linecap=\"round\">\n";
    for (const auto& e : g.edges()) {
        const auto& a = g.node(e.a);
        const auto& b = g.node(e.b);
        out << "<line x1=\"" << num(px(a.x)) << "\" y1=\"" << num(py(a.y)) << "\" x2=\"" << num(px(b.x))
            << "\" y2=\"" << num(py(b.y)) << "\"/>\n";
    }
    out << "</g>\n<g stroke=\"#606060\" stroke-width=\"0.8\">\n";
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const auto& n = g.nodes()[i];
        const auto c = heat_color(heat_fraction(density.counts[i], lo, hi));
        out << "<circle cx=\"" << num(px(n.x)) << "\" cy=\"" << num(py(n.y)) << "\" r=\"6\" fill=\"" << hex_color(c)
            << "\"><title>" << esc(n.id) << ": " << density.counts[i] << "</title></circle>\n";
    }
    out << "</g>\n<g font-size=\"8\" fill=\"#202020\">\n";
    // stack labels of sublocations sharing a center node
    std::vector<int> stacked(g.node_count(), 0);
    for (std::size_t s = 0; s < g.sublocations().size(); ++s) {
        const auto& sub = g.sublocations()[s];
        const auto& n = g.node(sub.center);
        std::string text = sub.id;
        if (sublocation_text && s < sublocation_text->size() && !(*sublocation_text)[s].empty())
            text += " " + (*sublocation_text)[s];
        out << "<text x=\"" << num(px(n.x) + 8) << "\" y=\"" << num(py(n.y) - 4 + 9.0 * stacked[sub.center]++)
            << "\">" << esc(text) << "</text>\n";
    }
    out << "<text x=\"" << num(px(g.node(g.entrance()).x) + 8) << "\" y=\"" << num(py(g.node(g.entrance()).y))
        << "\">entrance</text>\n";
    out << "<text x=\"" << num(px(g.node(g.exit()).x) + 8) << "\" y=\"" << num(py(g.node(g.exit()).y))
        << "\">exit</text>\n";
    out << "</g>\n";

    const double ly = plot_h + 10;
    const double lw = std::min(240.0, width - 2 * margin);
    out << "<defs><linearGradient id=\"heat\" x1=\"0\" x2=\"1\" y1=\"0\" y2=\"0\">"
        << "<stop offset=\"0\" stop-color=\"" << hex_color(heat_low) << "\"/>"
        << "<stop offset=\"1\" stop-color=\"" << hex_color(heat_high) << "\"/></linearGradient></defs>\n";
    out << "<rect x=\"" << num(margin) << "\" y=\"" << num(ly) << "\" width=\"" << num(lw)
        << "\" height=\"14\" fill=\"url(#heat)\" stroke=\"#606060\" stroke-width=\"0.8\"/>\n";
    out << "<text x=\"" << num(margin) << "\" y=\"" << num(ly + 28) << "\" font-size=\"10\">min " << lo
        << "</text>\n";
    out << "<text x=\"" << num(margin + lw) << "\" y=\"" << num(ly + 28)
        << "\" font-size=\"10\" text-anchor=\"end\">max " << hi << "</text>\n";
    out << "<text x=\"" << num(margin + lw + 12) << "\" y=\"" << num(ly + 11)
        << "\" font-size=\"10\">visits per node</text>\n";
    out << "</svg>\n";
}

// ---------------------------------------------------------------------------
// Run fingerprint and reports

inline constexpr const char* report_format = "storelayout-report/1";

inline const char* to_string(TransitionMode m) { return m == TransitionMode::expected ? "expected" : "sampled"; }

/// Canonical text of every setting that can change a result. Threads are
/// left out: results do not depend on them.
inline std::string canonical_config(const SolverConfig& c) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "seed=%llu\ntime_limit=%.17g\niterations=%zu\ntenure=%.17g,%.17g\nrestarts=%zu\nnode_limit=%zu\n"
                  "pool=%zu,%.17g\nbrute_force_cap=%zu\nblock_cap=%zu\nlevel1_bnb=%d\n",
                  static_cast<unsigned long long>(c.seed), c.time_limit_seconds, c.iteration_limit, c.tenure_min,
                  c.tenure_max, c.restarts, c.node_limit, c.pool_capacity, c.pool_gap, c.brute_force_cap,
                  c.block_exhaustive_cap, c.level1_branch_and_bound ? 1 : 0);
    return buf;
}

/// Hash of the solver settings plus named extras (input file digests,
/// transition mode, baseline choice), in the given order.
inline std::string config_hash(const SolverConfig& c,
                               const std::vector<std::pair<std::string, std::string>>& extras = {}) {
    Fnv1a h;
    h.update(canonical_config(c));
    for (const auto& [k, v] : extras) h.update(k).update("=").update(v).update("\n");
    return h.hex();
}

/// Exposure and travel distance of a plan at both levels.
struct PlanScores {
    double category_exposure = 0.0;
    double category_distance = 0.0;
    double subcategory_exposure = 0.0;
    double subcategory_distance = 0.0;
};

inline PlanScores score_plan(const StoreDefinition& def, const ExposureMatrices& exposures,
                             const TransitionMatrices& transitions, const LayoutPlan& plan) {
    check_plan(def, plan);
    const auto l1 = build_level1_instance(exposures, transitions, def.category_eligibility,
                                          def.catalog.category_labels(), def.graph.loc_position_labels());
    const auto l2 = build_level2_instance(exposures, transitions, plan.categories, def.catalog, def.graph,
                                          &def.category_eligibility);
    const auto e1 = evaluate_layout(l1, exposures.loc_distance, plan.categories);
    const auto e2 = evaluate_layout(l2, exposures.sub_distance, plan.subcategories);
    return {e1.exposure, e1.travel_distance, e2.exposure, e2.travel_distance};
}

namespace detail {

inline nlohmann::ordered_json optional_number(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

inline nlohmann::ordered_json level_scores(double exposure, double distance, const std::optional<double>& base_exposure,
                                           const std::optional<double>& base_distance) {
    nlohmann::ordered_json j;
    j["exposure"] = exposure;
    j["travel_distance"] = distance;
    if (base_exposure) {
        j["baseline_exposure"] = *base_exposure;
        j["baseline_travel_distance"] = *base_distance;
        j["exposure_change_pct"] = optional_number(percent_change(exposure, *base_exposure));
        j["distance_change_pct"] = optional_number(percent_change(distance, *base_distance));
    }
    return j;
}

}  // namespace detail

/// Scores of `plan`, with percentage changes against `baseline` when given.
inline nlohmann::ordered_json evaluation_json(const PlanScores& plan, const PlanScores* baseline) {
    auto opt = [&](double PlanScores::*f) { return baseline ? std::optional<double>((*baseline).*f) : std::nullopt; };
    nlohmann::ordered_json j;
    j["category"] = detail::level_scores(plan.category_exposure, plan.category_distance,
                                         opt(&PlanScores::category_exposure), opt(&PlanScores::category_distance));
    j["subcategory"] =
        detail::level_scores(plan.subcategory_exposure, plan.subcategory_distance,
                             opt(&PlanScores::subcategory_exposure), opt(&PlanScores::subcategory_distance));
    return j;
}

inline nlohmann::ordered_json report_header(const StoreDefinition& def, const PlanMetadata& meta) {
    nlohmann::ordered_json j;
    j["format"] = report_format;
    j["store"] = def.name;
    j["store_fingerprint"] = store_fingerprint(def);
    j["synthetic"] = def.synthetic;
    j["metadata"] = {{"tool_version", meta.tool_version},
                     {"config_hash", meta.config_hash},
                     {"seed", meta.seed},
                     {"transition_mode", meta.transition_mode},
                     {"source", meta.source}};
    return j;
}

inline nlohmann::ordered_json level1_json(const SolveResult& r, const SolutionPool* pool) {
    nlohmann::ordered_json j;
    j["objective"] = r.objective;
    j["bound"] = detail::optional_number(r.bound);
    const auto gap = r.gap();
    j["gap_pct"] = gap ? nlohmann::ordered_json(round1(100.0 * *gap)) : nlohmann::ordered_json(nullptr);
    j["certified_optimal"] = gap && *gap <= objective_rel_tol;
    j["tabu_iterations"] = r.trace.iterations;
    j["tabu_restarts"] = r.trace.restarts;
    j["bnb_nodes"] = r.trace.nodes;
    j["limit_reached"] = r.trace.limit_reached;
    if (pool) {
        auto values = nlohmann::ordered_json::array();
        for (const auto& e : pool->entries()) values.push_back(e.value);
        j["pool"] = std::move(values);
    }
    return j;
}

inline nlohmann::ordered_json level2_json(const SolveResult& r) {
    nlohmann::ordered_json j;
    j["objective"] = r.objective;
    j["iterations"] = r.trace.iterations;
    j["descent_cycles"] = r.trace.cycles;
    j["limit_reached"] = r.trace.limit_reached;
    return j;
}

inline nlohmann::ordered_json notes_json(const SolverTrace& t) {
    auto notes = nlohmann::ordered_json::array();
    for (const auto& n : t.notes)
        if (std::find(notes.begin(), notes.end(), n) == notes.end()) notes.push_back(n);
    return notes;
}

/// Report of a two-level pooled run against a baseline plan.
inline nlohmann::ordered_json hierarchical_report_json(const StoreDefinition& def, const HierarchicalResult& r,
                                                       const PlanScores& scores, const PlanScores& baseline_scores,
                                                       const std::string& baseline_label, const PlanMetadata& meta) {
    auto j = report_header(def, meta);
    j["level1"] = level1_json(r.level1, &r.pool);
    auto l2 = level2_json(r.final);
    auto members = nlohmann::ordered_json::array();
    for (const auto& m : r.members) members.push_back(m.objective);
    l2["candidates"] = std::move(members);
    l2["chosen_pool_rank"] = r.chosen;
    j["level2"] = std::move(l2);
    j["baseline"] = baseline_label;
    j["evaluation"] = evaluation_json(scores, &baseline_scores);
    // The category objective counts whole-location exposure, so it is
    // normally the larger of the two.
    j["diagnostics"] = {{"level1_exceeds_level2", r.level1.objective > r.final.objective}};
    auto trace = r.final.trace;
    j["notes"] = notes_json(trace);
    return j;
}

}  // namespace storelayout
