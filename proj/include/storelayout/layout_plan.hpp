#pragma once

// Layout plans: the category -> location and subcategory -> sublocation
// maps of one store, with objective values and run metadata, stored as JSON.

#include <fstream>

#include "json.hpp"

#include "storelayout/hash.hpp"
#include "storelayout/solvers/common.hpp"
#include "storelayout/store_file.hpp"

namespace storelayout {

inline constexpr const char* tool_version = "0.3.0";
inline constexpr const char* plan_format = "storelayout-plan/1";

struct PlanMetadata {
    std::string tool_version = storelayout::tool_version;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string transition_mode = "expected";
    std::string source;  // command or origin of the layout
};

struct LayoutPlan {
    Assignment categories;     // category -> location position
    Assignment subcategories;  // subcategory -> sublocation position
    std::optional<double> level1_objective;
    std::optional<double> level2_objective;
    PlanMetadata meta;
};

/// Fingerprint of the ids that plans refer to, so plans of different
/// stores are never compared.
inline std::string store_fingerprint(const StoreDefinition& def) {
    Fnv1a h;
    for (const auto& l : def.graph.loc_position_labels()) h.update(l).update("\n");
    for (const auto& s : def.graph.sub_position_labels()) h.update(s).update("\n");
    for (const auto& c : def.catalog.category_labels()) h.update(c).update("\n");
    for (const auto& s : def.catalog.subcategory_labels()) h.update(s).update("\n");
    return h.hex();
}

/// Level-1 instance shape used to check category maps (flow is irrelevant).
inline QapInstance category_checker(const StoreDefinition& def) {
    const std::size_t n = def.catalog.category_count();
    return QapInstance(Level::level1, Matrix<double>::square(n), Matrix<double>::square(n), def.category_eligibility,
                       std::nullopt, def.catalog.category_labels(), def.graph.loc_position_labels());
}

/// Level-2 instance shape for a category map (flow is irrelevant).
inline QapInstance subcategory_checker(const StoreDefinition& def, const Assignment& categories) {
    const std::size_t n = def.catalog.subcategory_count();
    ExposureMatrices zero;
    zero.sub_exposure = Matrix<double>::square(n);
    TransitionMatrices flat;
    flat.subcategory = Matrix<double>::square(n);
    return build_level2_instance(zero, flat, categories, def.catalog, def.graph, &def.category_eligibility);
}

/// Throws ValidationError unless both maps are complete and feasible for
/// the store.
inline void check_plan(const StoreDefinition& def, const LayoutPlan& plan) {
    const auto l1 = category_checker(def);
    const auto r1 = check_feasible(l1, plan.categories);
    if (!r1.ok()) throw ValidationError("category layout is infeasible:\n" + r1.summary());
    const auto r2 = check_feasible(subcategory_checker(def, plan.categories), plan.subcategories);
    if (!r2.ok()) throw ValidationError("subcategory layout is infeasible:\n" + r2.summary());
}

inline nlohmann::ordered_json plan_to_json(const StoreDefinition& def, const LayoutPlan& plan) {
    nlohmann::ordered_json j;
    j["format"] = plan_format;
    j["store"] = def.name;
    j["store_fingerprint"] = store_fingerprint(def);
    j["synthetic"] = def.synthetic;
    j["metadata"] = {{"tool_version", plan.meta.tool_version},
                     {"config_hash", plan.meta.config_hash},
                     {"seed", plan.meta.seed},
                     {"transition_mode", plan.meta.transition_mode},
                     {"source", plan.meta.source}};
    const auto locs = def.graph.loc_position_labels();
    const auto subs = def.graph.sub_position_labels();
    auto cats = nlohmann::ordered_json::array();
    for (std::size_t c = 1; c + 1 < def.catalog.category_count(); ++c)
        cats.push_back({{"category", def.catalog.category(static_cast<int>(c)).id},
                        {"location", locs.at(plan.categories[c])}});
    auto subcats = nlohmann::ordered_json::array();
    for (std::size_t s = 1; s + 1 < def.catalog.subcategory_count(); ++s)
        subcats.push_back({{"subcategory", def.catalog.subcategory(static_cast<int>(s)).id},
                           {"sublocation", subs.at(plan.subcategories[s])}});
    j["categories"] = std::move(cats);
    j["subcategories"] = std::move(subcats);
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    if (plan.level1_objective) obj["level1"] = *plan.level1_objective;
    if (plan.level2_objective) obj["level2"] = *plan.level2_objective;
    j["objective"] = std::move(obj);
    return j;
}

inline LayoutPlan plan_from_json(const StoreDefinition& def, const nlohmann::json& j, const std::string& source) {
    auto fail = [&](const std::string& what) -> void { throw InputError(source + ": " + what); };
    if (!j.is_object() || j.value("format", "") != plan_format) fail("not a layout plan (format tag missing)");
    if (j.value("store_fingerprint", "") != store_fingerprint(def))
        throw ValidationError(source + ": plan belongs to a different store");
    LayoutPlan plan;
    plan.categories = Assignment(def.catalog.category_count());
    plan.subcategories = Assignment(def.catalog.subcategory_count());
    plan.categories[0] = 0;
    plan.categories[def.catalog.category_count() - 1] = static_cast<int>(def.catalog.category_count()) - 1;
    plan.subcategories[0] = 0;
    plan.subcategories[def.catalog.subcategory_count() - 1] = static_cast<int>(def.catalog.subcategory_count()) - 1;
    auto read = [&](const char* key, const char* item_key, const char* pos_key, Assignment& a, auto&& find_item,
                    auto&& find_pos) {
        if (!j.contains(key) || !j[key].is_array()) fail(std::string("missing '") + key + "' array");
        for (const auto& e : j[key]) {
            if (!e.is_object() || !e.contains(item_key) || !e.contains(pos_key) || !e[item_key].is_string() ||
                !e[pos_key].is_string())
                fail(std::string("malformed entry in '") + key + "'");
            const auto item = e[item_key].get<std::string>();
            const auto pos = e[pos_key].get<std::string>();
            const auto i = find_item(item);
            const auto k = find_pos(pos);
            if (!i || *i == 0 || static_cast<std::size_t>(*i) + 1 == a.size()) fail("unknown id '" + item + "'");
            if (!k) fail("unknown position '" + pos + "'");
            if (a[*i] != Assignment::unassigned) fail("'" + item + "' placed twice");
            a[*i] = *k + 1;
        }
    };
    read(
        "categories", "category", "location", plan.categories,
        [&](const std::string& s) { return def.catalog.find_category(s); },
        [&](const std::string& s) { return def.graph.find_location(s); });
    read(
        "subcategories", "subcategory", "sublocation", plan.subcategories,
        [&](const std::string& s) { return def.catalog.find_subcategory(s); },
        [&](const std::string& s) { return def.graph.find_sublocation(s); });
    if (const auto it = j.find("objective"); it != j.end() && it->is_object()) {
        if (it->contains("level1") && (*it)["level1"].is_number()) plan.level1_objective = (*it)["level1"].get<double>();
        if (it->contains("level2") && (*it)["level2"].is_number()) plan.level2_objective = (*it)["level2"].get<double>();
    }
    if (const auto it = j.find("metadata"); it != j.end() && it->is_object()) {
        plan.meta.tool_version = it->value("tool_version", "");
        plan.meta.config_hash = it->value("config_hash", "");
        plan.meta.seed = it->value("seed", std::uint64_t{0});
        plan.meta.transition_mode = it->value("transition_mode", "");
        plan.meta.source = it->value("source", "");
    }
    try {
        check_plan(def, plan);
    } catch (const ValidationError& e) {
        throw ValidationError(source + ": " + e.what());
    }
    return plan;
}

inline std::string dump_json(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    out.flush();
    if (!out) throw IoError("failed while writing " + path);
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline LayoutPlan load_plan_file(const StoreDefinition& def, const std::string& path) {
    return plan_from_json(def, read_json_file(path), path);
}

/// The store's declared current layout as a plan.
inline LayoutPlan current_layout_plan(const StoreDefinition& def) {
    if (!def.current_categories || !def.current_subcategories)
        throw InputError("store file declares no current_layout");
    LayoutPlan p;
    p.categories = *def.current_categories;
    p.subcategories = *def.current_subcategories;
    p.meta.source = "current layout";
    check_plan(def, p);
    return p;
}

/// Seeded random feasible layout: random category placement, then random
/// subcategory placement inside it.
inline LayoutPlan random_layout_plan(const StoreDefinition& def, std::uint64_t seed) {
    Rng rng(seed);
    LayoutPlan p;
    p.categories = random_assignment(category_checker(def), rng);
    p.subcategories = random_assignment(subcategory_checker(def, p.categories), rng);
    p.meta.source = "random layout, seed " + std::to_string(seed);
    p.meta.seed = seed;
    return p;
}

}  // namespace storelayout
