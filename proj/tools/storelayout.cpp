// storelayout: store layout optimization from a store file and transactions.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "storelayout/storelayout.hpp"

namespace fs = std::filesystem;
using namespace storelayout;

namespace {

struct Options {
    std::string config_path;
    std::string store;
    std::string transactions;
    std::string out = ".";
    std::string mode = "expected";
    std::string baseline;
    std::string plan;
    std::string from;
    std::string to;
    std::string solution;
    std::vector<std::string> models;
    bool sparse = false;
    SolverConfig solver;
};

/// Output files of one command; removed again if the command fails.
class Artifacts {
public:
    explicit Artifacts(std::string dir) : dir_(std::move(dir)) {}

    std::string path(const std::string& name) const { return (fs::path(dir_) / name).string(); }

    void write(const std::string& name, const std::string& text) {
        const auto p = path(name);
        written_.push_back(p);
        write_text_file(p, text);
    }

    void prepare() {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_)) throw IoError("cannot create output directory " + dir_);
    }

    void discard() {
        for (const auto& p : written_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        written_.clear();
    }

    const std::vector<std::string>& written() const { return written_; }

private:
    std::string dir_;
    std::vector<std::string> written_;
};

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a_hex(ss.str());
}

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Settings from a JSON config file; command-line flags given explicitly
/// override them afterwards.
void apply_config_file(const std::string& path, Options& o) {
    const auto j = read_json_file(path);
    if (!j.is_object()) throw InputError(path + ": expected a JSON object");
    auto& s = o.solver;
    for (const auto& [key, v] : j.items()) {
        auto bad = [&] { throw InputError(path + ": bad value for '" + key + "'"); };
        auto count = [&] {
            if (!v.is_number_unsigned()) bad();
            return v.get<std::size_t>();
        };
        auto real = [&] {
            if (!v.is_number()) bad();
            return v.get<double>();
        };
        auto text = [&] {
            if (!v.is_string()) bad();
            return v.get<std::string>();
        };
        if (key == "seed") s.seed = count();
        else if (key == "time_limit") s.time_limit_seconds = real();
        else if (key == "iterations") s.iteration_limit = count();
        else if (key == "restarts") s.restarts = count();
        else if (key == "tenure_min") s.tenure_min = real();
        else if (key == "tenure_max") s.tenure_max = real();
        else if (key == "node_limit") s.node_limit = count();
        else if (key == "pool_size") s.pool_capacity = count();
        else if (key == "pool_gap") s.pool_gap = real();
        else if (key == "block_cap") s.block_exhaustive_cap = count();
        else if (key == "threads") s.threads = count();
        else if (key == "branch_and_bound") {
            if (!v.is_boolean()) bad();
            s.level1_branch_and_bound = v.get<bool>();
        } else if (key == "mode") o.mode = text();
        else if (key == "store") o.store = text();
        else if (key == "transactions") o.transactions = text();
        else if (key == "out") o.out = text();
        else if (key == "baseline") o.baseline = text();
        else throw InputError(path + ": unknown setting '" + key + "'");
    }
}

struct Workspace {
    StoreDefinition def;
    ExposureMatrices exposures;
    std::optional<TransitionMatrices> transitions;
    std::vector<Transaction> baskets;
    std::vector<std::pair<std::string, std::string>> fingerprint;
};

Workspace load(const Options& o, bool need_transactions) {
    if (o.store.empty()) throw InputError("--store is required");
    Workspace w{load_store_file(o.store), {}, {}, {}, {}};
    w.exposures = build_exposure_matrices(w.def.graph);
    w.fingerprint.emplace_back("store", file_digest(o.store));
    if (need_transactions) {
        if (o.transactions.empty()) throw InputError("--transactions is required");
        w.baskets = load_transactions_file(o.transactions, w.def.catalog);
        if (o.mode == "expected")
            w.transitions = expected_transitions(w.baskets, w.def.catalog);
        else if (o.mode == "sampled")
            w.transitions = sampled_transitions(w.baskets, w.def.catalog, o.solver.seed);
        else
            throw InputError("--mode must be expected or sampled");
        w.fingerprint.emplace_back("transactions", file_digest(o.transactions));
        w.fingerprint.emplace_back("mode", o.mode);
    }
    return w;
}

PlanMetadata metadata(const Options& o, const Workspace& w, const std::string& source) {
    PlanMetadata m;
    m.config_hash = config_hash(o.solver, w.fingerprint);
    m.seed = o.solver.seed;
    m.transition_mode = o.mode;
    m.source = source;
    return m;
}

/// Baseline plan: a plan file, "current", or "random" (seeded). Without a
/// choice the store's current layout is used when declared.
std::pair<LayoutPlan, std::string> baseline_plan(const Options& o, const StoreDefinition& def) {
    std::string choice = o.baseline;
    if (choice.empty()) choice = def.current_categories ? "current" : "random";
    if (choice == "current") return {current_layout_plan(def), "current layout"};
    if (choice == "random") {
        const auto seed = derive_seed(o.solver.seed, 2'000'000);
        return {random_layout_plan(def, seed), "random layout, seed " + std::to_string(seed)};
    }
    return {load_plan_file(def, choice), choice};
}

/// Category map for level-2 work: from --plan, else the current layout.
Assignment category_map(const Options& o, const StoreDefinition& def) {
    if (!o.plan.empty()) return load_plan_file(def, o.plan).categories;
    return current_layout_plan(def).categories;
}

std::string heatmap_svg(const Workspace& w, const LayoutPlan& plan, std::uint64_t seed, const std::string& title) {
    const ShortestPaths sp(w.def.graph);
    const auto trips = replay_paths(w.baskets, w.def.catalog, plan.subcategories, sp, seed);
    const auto paths = trip_paths(trips);
    const auto density = accumulate_traffic(w.def.graph, paths);
    // sublocation label: the subcategory shelved there
    std::vector<std::string> text(w.def.graph.sublocations().size());
    for (std::size_t s = 1; s + 1 < plan.subcategories.size(); ++s)
        text[plan.subcategories[s] - 1] = w.def.catalog.subcategory(static_cast<int>(s)).id;
    std::ostringstream out;
    render_heatmap(out, w.def.graph, density, title + (w.def.synthetic ? " [synthetic store]" : ""), &text);
    return out.str();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string pct(const std::optional<double>& v) {
    if (!v) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%+.1f%%", *v);
    return buf;
}

// ---------------------------------------------------------------------------
// Commands

void cmd_build_matrices(const Options& o, Artifacts& out) {
    const auto w = load(o, !o.transactions.empty());
    out.prepare();
    const auto& g = w.def.graph;
    std::ostringstream s;
    write_matrix_csv(s, w.exposures.sub_exposure, g.sub_position_labels(), g.sub_position_labels());
    out.write("exposure_sublocations.csv", s.str());
    s.str("");
    write_matrix_csv(s, w.exposures.loc_exposure, g.loc_position_labels(), g.loc_position_labels());
    out.write("exposure_locations.csv", s.str());
    s.str("");
    write_matrix_csv(s, w.exposures.sub_distance, g.sub_position_labels(), g.sub_position_labels());
    out.write("distance_sublocations.csv", s.str());
    s.str("");
    write_matrix_csv(s, w.exposures.loc_distance, g.loc_position_labels(), g.loc_position_labels());
    out.write("distance_locations.csv", s.str());
    if (w.transitions) {
        const auto& c = w.def.catalog;
        s.str("");
        write_matrix_csv(s, w.transitions->category, c.category_labels(), c.category_labels());
        out.write("transitions_categories.csv", s.str());
        s.str("");
        write_matrix_csv(s, w.transitions->subcategory, c.subcategory_labels(), c.subcategory_labels());
        out.write("transitions_subcategories.csv", s.str());
    }
}

void cmd_solve_l1(const Options& o, Artifacts& out) {
    const auto w = load(o, true);
    out.prepare();
    const auto l1 = build_level1_instance(w.exposures, *w.transitions, w.def.category_eligibility,
                                          w.def.catalog.category_labels(), w.def.graph.loc_position_labels());
    SolveResult best;
    const auto pool = solve_level1(l1, o.solver, &best);
    auto j = report_header(w.def, metadata(o, w, "solve-l1"));
    j["level1"] = level1_json(best, &pool);
    const auto locs = w.def.graph.loc_position_labels();
    auto layouts = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < pool.size(); ++r) {
        nlohmann::ordered_json m;
        for (std::size_t c = 1; c + 1 < l1.size(); ++c)
            m[w.def.catalog.category(static_cast<int>(c)).id] = locs[pool.entries()[r].assignment[c]];
        layouts.push_back({{"rank", r}, {"objective", pool.entries()[r].value}, {"categories", std::move(m)}});
    }
    j["pool"] = std::move(layouts);
    j["notes"] = notes_json(best.trace);
    out.write("level1.json", dump_json(j));
    std::cout << "level-1 objective " << fmt(best.objective) << ", bound "
              << (best.bound ? fmt(*best.bound) : "n/a") << ", pool of " << pool.size() << '\n';
}

void cmd_solve_l2(const Options& o, Artifacts& out) {
    const auto w = load(o, true);
    const auto cats = category_map(o, w.def);
    out.prepare();
    const auto l2 =
        build_level2_instance(w.exposures, *w.transitions, cats, w.def.catalog, w.def.graph, &w.def.category_eligibility);
    const auto r = solve_level2(l2, o.solver);
    LayoutPlan plan{cats, r.best, std::nullopt, r.objective, metadata(o, w, "solve-l2")};
    plan.level1_objective = objective(build_level1_instance(w.exposures, *w.transitions, w.def.category_eligibility),
                                      cats);
    auto j = report_header(w.def, plan.meta);
    j["level2"] = level2_json(r);
    j["evaluation"] = evaluation_json(score_plan(w.def, w.exposures, *w.transitions, plan), nullptr);
    j["notes"] = notes_json(r.trace);
    out.write("plan.json", dump_json(plan_to_json(w.def, plan)));
    out.write("report.json", dump_json(j));
    std::cout << "level-2 objective " << fmt(r.objective) << '\n';
}

void cmd_solve(const Options& o, Artifacts& out) {
    const std::string started = utc_now();
    Stopwatch clock;
    const auto w = load(o, true);
    const auto [base, base_label] = baseline_plan(o, w.def);
    out.prepare();
    const auto r = solve_hierarchical(w.exposures, *w.transitions, w.def.category_eligibility, w.def.catalog,
                                      w.def.graph, o.solver);
    LayoutPlan plan{r.category_layout(), r.final.best, r.level1.objective, r.final.objective,
                    metadata(o, w, "solve")};
    // the category objective of the layout actually chosen
    plan.level1_objective = r.pool.entries()[r.chosen].value;
    const auto scores = score_plan(w.def, w.exposures, *w.transitions, plan);
    const auto base_scores = score_plan(w.def, w.exposures, *w.transitions, base);
    const auto report = hierarchical_report_json(w.def, r, scores, base_scores, base_label, plan.meta);
    out.write("plan.json", dump_json(plan_to_json(w.def, plan)));
    out.write("report.json", dump_json(report));
    const auto replay_seed = derive_seed(o.solver.seed, 3'000'000);
    out.write("heatmap_baseline.svg", heatmap_svg(w, base, replay_seed, "Traffic density, baseline (" + base_label + ")"));
    out.write("heatmap_optimized.svg", heatmap_svg(w, plan, replay_seed, "Traffic density, optimized layout"));

    std::ostringstream log;
    log << "started " << started << '\n'
        << "finished " << utc_now() << '\n'
        << "tool_version " << tool_version << '\n'
        << "config_hash " << plan.meta.config_hash << '\n'
        << "store " << o.store << '\n'
        << "transactions " << o.transactions << " (" << w.baskets.size() << " baskets)\n"
        << "level1 objective " << fmt(r.level1.objective) << " in " << fmt(r.level1.wall_seconds) << " s\n"
        << "pool size " << r.pool.size() << ", chosen rank " << r.chosen << '\n';
    for (std::size_t m = 0; m < r.members.size(); ++m)
        log << "member " << m << " level2 objective " << fmt(r.members[m].objective) << " in "
            << fmt(r.members[m].wall_seconds) << " s\n";
    log << "wall seconds " << fmt(clock.seconds()) << '\n';
    out.write("run.log", log.str());

    std::cout << "level-1 objective " << fmt(r.level1.objective) << ", level-2 objective " << fmt(r.final.objective)
              << '\n'
              << "exposure vs " << base_label << ": "
              << pct(percent_change(scores.subcategory_exposure, base_scores.subcategory_exposure)) << '\n';
}

void cmd_export_lp(const Options& o, Artifacts& out) {
    const auto w = load(o, true);
    std::vector<std::string> models = o.models.empty() ? std::vector<std::string>{"l1"} : o.models;
    std::vector<std::pair<std::string, QapInstance>> todo;
    for (const auto& m : models) {
        if (m == "l1")
            todo.emplace_back("ll1m", build_level1_instance(w.exposures, *w.transitions, w.def.category_eligibility,
                                                            w.def.catalog.category_labels(),
                                                            w.def.graph.loc_position_labels()));
        else if (m == "l2")
            todo.emplace_back("ll2m", build_level2_instance(w.exposures, *w.transitions, category_map(o, w.def),
                                                            w.def.catalog, w.def.graph, &w.def.category_eligibility));
        else if (m == "integrated")
            todo.emplace_back("lim", build_integrated_instance(w.exposures, *w.transitions,
                                                               w.def.category_eligibility, w.def.catalog, w.def.graph));
        else
            throw InputError("--model must be l1, l2 or integrated");
    }
    out.prepare();
    for (const auto& [tag, inst] : todo) {
        const auto model = linearize(inst, o.sparse);
        std::ostringstream s;
        write_lp(s, model);
        out.write(tag + ".lp", s.str());
        std::cout << out.path(tag + ".lp") << ": " << model.vars.size() << " variables, " << model.rows()
                  << " constraints\n";
    }
}

void cmd_evaluate(const Options& o, Artifacts& out) {
    const auto w = load(o, true);
    if (o.plan.empty()) throw InputError("--plan is required");
    const auto plan = load_plan_file(w.def, o.plan);
    const auto [base, base_label] = baseline_plan(o, w.def);
    out.prepare();
    const auto scores = score_plan(w.def, w.exposures, *w.transitions, plan);
    const auto base_scores = score_plan(w.def, w.exposures, *w.transitions, base);
    auto j = report_header(w.def, metadata(o, w, "evaluate " + o.plan));
    j["baseline"] = base_label;
    j["evaluation"] = evaluation_json(scores, &base_scores);
    out.write("evaluation.json", dump_json(j));
    std::cout << "category exposure " << fmt(scores.category_exposure) << " ("
              << pct(percent_change(scores.category_exposure, base_scores.category_exposure)) << ")\n"
              << "subcategory exposure " << fmt(scores.subcategory_exposure) << " ("
              << pct(percent_change(scores.subcategory_exposure, base_scores.subcategory_exposure)) << ")\n"
              << "travel distance " << fmt(scores.subcategory_distance) << " ("
              << pct(percent_change(scores.subcategory_distance, base_scores.subcategory_distance)) << ")\n";
}

void cmd_diff(const Options& o, Artifacts& out) {
    const auto w = load(o, true);
    if (o.from.empty() || o.to.empty()) throw InputError("--from and --to are required");
    const auto a = load_plan_file(w.def, o.from);
    const auto b = load_plan_file(w.def, o.to);
    out.prepare();
    const auto r = diff_layouts(w.def, w.exposures, *w.transitions, a, b);
    auto j = report_header(w.def, metadata(o, w, "diff " + o.from + " " + o.to));
    j["changes"] = movement_report_json(r);
    out.write("diff.json", dump_json(j));
    for (const auto& m : r.moves)
        std::cout << m.level << ' ' << m.item << ": " << m.from << " -> " << m.to << " (" << fmt(m.delta) << ")\n";
    std::cout << r.moves.size() << " moved, category change " << fmt(r.category_delta) << ", subcategory change "
              << fmt(r.subcategory_delta) << '\n';
}

void cmd_render(const Options& o, Artifacts& out) {
    const auto w = load(o, true);
    const auto plan = o.plan.empty() ? current_layout_plan(w.def) : load_plan_file(w.def, o.plan);
    out.prepare();
    const std::string label = o.plan.empty() ? "current layout" : fs::path(o.plan).filename().string();
    out.write("heatmap.svg", heatmap_svg(w, plan, derive_seed(o.solver.seed, 3'000'000), "Traffic density, " + label));
}

void cmd_check_solution(const Options& o, Artifacts&) {
    const auto w = load(o, true);
    if (o.solution.empty()) throw InputError("--solution is required");
    const std::string m = o.models.empty() ? "l1" : o.models.front();
    std::optional<QapInstance> inst;
    if (m == "l1")
        inst.emplace(build_level1_instance(w.exposures, *w.transitions, w.def.category_eligibility,
                                           w.def.catalog.category_labels(), w.def.graph.loc_position_labels()));
    else if (m == "l2")
        inst.emplace(build_level2_instance(w.exposures, *w.transitions, category_map(o, w.def), w.def.catalog,
                                           w.def.graph, &w.def.category_eligibility));
    else if (m == "integrated")
        inst.emplace(build_integrated_instance(w.exposures, *w.transitions, w.def.category_eligibility,
                                               w.def.catalog, w.def.graph));
    else
        throw InputError("--model must be l1, l2 or integrated");
    const auto model = linearize(*inst, o.sparse);
    std::ifstream in(o.solution);
    if (!in) throw IoError("cannot open solution file " + o.solution);
    ExternalSolution sol;
    try {
        sol = parse_solution(in);
    } catch (const ParseError& e) {
        throw ParseError(o.solution + ": " + e.what());
    }
    const auto r = validate_solution(*inst, model, sol);
    std::cout << (r.feasible ? "feasible" : "infeasible") << ", quadratic objective "
              << (r.quadratic_objective ? fmt(*r.quadratic_objective) : "n/a") << ", linear objective "
              << fmt(r.linear_objective);
    if (r.reported_objective) std::cout << ", reported " << fmt(*r.reported_objective);
    std::cout << '\n';
    for (const auto& v : r.violations) std::cout << "  " << v << '\n';
    if (!r.feasible) throw ValidationError(o.solution + ": solution is infeasible");
}

int exit_code(const std::exception& e) {
    if (dynamic_cast<const IoError*>(&e)) return 4;
    if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const ModelError*>(&e)) return 3;
    if (dynamic_cast<const Error*>(&e)) return 2;
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Store layout optimization: exposure-maximizing category and subcategory placement"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    auto& s = o.solver;

    app.add_option("--config", o.config_path, "JSON settings file (default: $STORELAYOUT_CONFIG)");

    std::vector<CLI::Option*> overrides;
    auto common = [&](CLI::App* c, bool solver_flags) {
        overrides.push_back(c->add_option("--store", o.store, "store definition (JSON)"));
        overrides.push_back(c->add_option("--transactions", o.transactions, "transactions (transaction_id,subcategory_id)"));
        overrides.push_back(c->add_option("--out", o.out, "output directory"));
        overrides.push_back(c->add_option("--mode", o.mode, "transition model: expected or sampled"));
        overrides.push_back(c->add_option("--seed", s.seed, "random seed"));
        if (solver_flags) {
            overrides.push_back(c->add_option("--pool-size", s.pool_capacity, "level-1 candidates kept"));
            overrides.push_back(c->add_option("--pool-gap", s.pool_gap, "relative gap for pool members"));
            overrides.push_back(c->add_option("--time-limit", s.time_limit_seconds, "seconds per solver call"));
            overrides.push_back(c->add_option("--threads", s.threads, "worker threads"));
            overrides.push_back(c->add_option("--iterations", s.iteration_limit, "tabu iterations per restart"));
            overrides.push_back(c->add_option("--restarts", s.restarts, "tabu restarts"));
        }
    };

    auto* build = app.add_subcommand("build-matrices", "write exposure, distance and transition matrices as CSV");
    common(build, false);
    auto* l1 = app.add_subcommand("solve-l1", "solve the category problem and list the pool");
    common(l1, true);
    auto* l2 = app.add_subcommand("solve-l2", "solve the subcategory problem for a fixed category layout");
    common(l2, true);
    l2->add_option("--plan", o.plan, "plan whose category layout is kept (default: current layout)");
    auto* solve = app.add_subcommand("solve", "two-level pooled solve with report and heatmaps");
    common(solve, true);
    overrides.push_back(solve->add_option("--baseline", o.baseline, "plan file, current or random"));
    auto* lp = app.add_subcommand("export-lp", "write linearized models in LP format");
    common(lp, false);
    lp->add_option("--model", o.models, "l1, l2 or integrated (repeatable)");
    lp->add_option("--plan", o.plan, "category layout for l2 (default: current layout)");
    lp->add_flag("--sparse", o.sparse, "drop variables that are zero in every feasible solution");
    auto* evaluate = app.add_subcommand("evaluate", "score a plan against a baseline");
    common(evaluate, false);
    evaluate->add_option("--plan", o.plan, "plan to score")->required();
    overrides.push_back(evaluate->add_option("--baseline", o.baseline, "plan file, current or random"));
    auto* diff = app.add_subcommand("diff", "list items that moved between two plans");
    common(diff, false);
    diff->add_option("--from", o.from, "earlier plan")->required();
    diff->add_option("--to", o.to, "later plan")->required();
    auto* render = app.add_subcommand("render", "traffic heatmap of a plan (SVG)");
    common(render, false);
    render->add_option("--plan", o.plan, "plan (default: current layout)");
    auto* check = app.add_subcommand("check-solution", "validate an external solver's solution of an exported model");
    common(check, false);
    check->add_option("--model", o.models, "l1, l2 or integrated")->expected(1);
    check->add_option("--plan", o.plan, "category layout for l2 (default: current layout)");
    check->add_option("--solution", o.solution, "solution file (name value lines)")->required();
    check->add_flag("--sparse", o.sparse, "the model was exported with --sparse");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    Artifacts out(o.out);
    try {
        std::string cfg = o.config_path;
        if (cfg.empty())
            if (const char* env = std::getenv("STORELAYOUT_CONFIG")) cfg = env;
        if (!cfg.empty()) {
            // re-read flags given on the command line on top of the file
            Options from_cli = o;
            apply_config_file(cfg, o);
            Options merged = o;
            for (auto* opt : overrides)
                if (opt->count() > 0) {
                    const auto& name = opt->get_name();
                    if (name == "--store") merged.store = from_cli.store;
                    else if (name == "--transactions") merged.transactions = from_cli.transactions;
                    else if (name == "--out") merged.out = from_cli.out;
                    else if (name == "--mode") merged.mode = from_cli.mode;
                    else if (name == "--seed") merged.solver.seed = from_cli.solver.seed;
                    else if (name == "--pool-size") merged.solver.pool_capacity = from_cli.solver.pool_capacity;
                    else if (name == "--pool-gap") merged.solver.pool_gap = from_cli.solver.pool_gap;
                    else if (name == "--time-limit") merged.solver.time_limit_seconds = from_cli.solver.time_limit_seconds;
                    else if (name == "--threads") merged.solver.threads = from_cli.solver.threads;
                    else if (name == "--iterations") merged.solver.iteration_limit = from_cli.solver.iteration_limit;
                    else if (name == "--restarts") merged.solver.restarts = from_cli.solver.restarts;
                    else if (name == "--baseline") merged.baseline = from_cli.baseline;
                }
            o = merged;
            out = Artifacts(o.out);
        }
        o.solver.validate();

        if (*build) cmd_build_matrices(o, out);
        else if (*l1) cmd_solve_l1(o, out);
        else if (*l2) cmd_solve_l2(o, out);
        else if (*solve) cmd_solve(o, out);
        else if (*lp) cmd_export_lp(o, out);
        else if (*evaluate) cmd_evaluate(o, out);
        else if (*diff) cmd_diff(o, out);
        else if (*render) cmd_render(o, out);
        else if (*check) cmd_check_solution(o, out);
        for (const auto& p : out.written()) std::cerr << "wrote " << p << '\n';
        return 0;
    } catch (const std::exception& e) {
        out.discard();
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e);
    }
}
