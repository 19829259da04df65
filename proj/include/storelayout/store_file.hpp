#pragma once

// Store definition document (JSON):
//
//   {
//     "name": "...", "synthetic": false,
//     "nodes": [{"id": "n0", "x": 0, "y": 0}, ...],
//     "edges": [{"a": "n0", "b": "n1", "length": 2.5}, ...],   length optional
//     "entrance": "n0", "exit": "n9",
//     "locations": [{"id": "L1", "fixture": "peripheral", "center": "n3",
//                    "sublocations": [{"id": "L1-1", "center": "n3", "facing": ["n3"]}, ...]}],
//     "categories": [{"id": "C1", "name": "...",
//                     "eligible_fixtures": ["peripheral"]  or  "eligible_locations": ["L1"],
//                     "subcategories": [{"id": "S1", "name": "..."}, ...]}],
//     "current_layout": {"categories": {"C1": "L1"}, "subcategories": {"S1": "L1-1"}}   optional
//   }
//
// A category may occupy a location only when the location is allowed for it
// and holds exactly as many sublocations as it has subcategories.

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "storelayout/demand_model.hpp"
#include "storelayout/qap.hpp"
#include "storelayout/store_model.hpp"

namespace storelayout {

struct StoreDefinition {
    std::string name;
    bool synthetic = false;
    StoreGraph graph;
    Catalog catalog;
    BoolMatrix category_eligibility;          // categories x location positions, dummies included
    std::optional<Assignment> current_categories;     // category -> location position
    std::optional<Assignment> current_subcategories;  // subcategory -> sublocation position
};

namespace detail {

using nlohmann::json;

class JsonPath {
public:
    explicit JsonPath(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& path, const std::string& what) const {
        throw InputError(source_ + ": " + path + ": " + what);
    }

    const json& member(const json& obj, const std::string& path, const char* key) const {
        if (!obj.is_object()) fail(path, "expected an object");
        auto it = obj.find(key);
        if (it == obj.end()) fail(path, std::string("missing '") + key + "'");
        return *it;
    }

    std::string str(const json& obj, const std::string& path, const char* key) const {
        const auto& v = member(obj, path, key);
        if (!v.is_string() || v.get_ref<const std::string&>().empty())
            fail(path + "." + key, "expected a non-empty string");
        return v.get<std::string>();
    }

    std::string opt_str(const json& obj, const char* key, const std::string& fallback, const std::string& path) const {
        auto it = obj.find(key);
        if (it == obj.end()) return fallback;
        if (!it->is_string()) fail(path + "." + key, "expected a string");
        return it->get<std::string>();
    }

    double num(const json& obj, const std::string& path, const char* key) const {
        const auto& v = member(obj, path, key);
        if (!v.is_number()) fail(path + "." + key, "expected a number");
        return v.get<double>();
    }

    const json& arr(const json& obj, const std::string& path, const char* key, bool non_empty = true) const {
        const auto& v = member(obj, path, key);
        if (!v.is_array()) fail(path + "." + key, "expected an array");
        if (non_empty && v.empty()) fail(path + "." + key, "must not be empty");
        return v;
    }

    std::vector<std::string> strings(const json& arr, const std::string& path) const {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (!arr[i].is_string()) fail(path + "[" + std::to_string(i) + "]", "expected a string");
            out.push_back(arr[i].get<std::string>());
        }
        return out;
    }

private:
    std::string source_;
};

inline std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

}  // namespace detail

inline StoreDefinition parse_store(const nlohmann::json& doc, const std::string& source = "store") {
    using detail::at;
    const detail::JsonPath jp(source);
    if (!doc.is_object()) jp.fail("$", "expected an object");
    const auto name = jp.opt_str(doc, "name", "store", "$");
    bool synthetic = false;
    if (auto it = doc.find("synthetic"); it != doc.end()) {
        if (!it->is_boolean()) jp.fail("$.synthetic", "expected true or false");
        synthetic = it->get<bool>();
    }

    StoreGraphBuilder b;
    const auto& nodes = jp.arr(doc, "$", "nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto p = at("$.nodes", i);
        b.add_node(jp.str(nodes[i], p, "id"), jp.num(nodes[i], p, "x"), jp.num(nodes[i], p, "y"));
    }
    const auto& edges = jp.arr(doc, "$", "edges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto p = at("$.edges", i);
        std::optional<double> len;
        if (edges[i].is_object() && edges[i].contains("length")) len = jp.num(edges[i], p, "length");
        b.add_edge(jp.str(edges[i], p, "a"), jp.str(edges[i], p, "b"), len);
    }
    b.set_entrance(jp.str(doc, "$", "entrance"));
    b.set_exit(jp.str(doc, "$", "exit"));

    const auto& locations = jp.arr(doc, "$", "locations");
    for (std::size_t i = 0; i < locations.size(); ++i) {
        const auto p = at("$.locations", i);
        const auto id = jp.str(locations[i], p, "id");
        b.add_location(id, jp.str(locations[i], p, "fixture"), jp.str(locations[i], p, "center"));
        const auto& subs = jp.arr(locations[i], p, "sublocations");
        for (std::size_t s = 0; s < subs.size(); ++s) {
            const auto sp = at(p + ".sublocations", s);
            std::vector<std::string> facing;
            if (subs[s].is_object() && subs[s].contains("facing"))
                facing = jp.strings(jp.arr(subs[s], sp, "facing"), sp + ".facing");
            b.add_sublocation(jp.str(subs[s], sp, "id"), id, jp.str(subs[s], sp, "center"), std::move(facing));
        }
    }
    auto build_graph = [&] {
        try {
            return b.build();
        } catch (const InputError& e) {
            throw InputError(source + ": " + e.what());
        } catch (const ModelError& e) {
            throw ModelError(source + ": " + e.what());
        }
    };
    StoreDefinition def{name, synthetic, build_graph(), Catalog({}, {}), {}, {}, {}};
    const StoreGraph& g = def.graph;

    const auto& cats = jp.arr(doc, "$", "categories");
    std::vector<Category> categories;
    std::vector<SubcategoryRecord> subs;
    std::vector<std::vector<char>> allowed;  // per real category, per real location
    for (std::size_t i = 0; i < cats.size(); ++i) {
        const auto p = at("$.categories", i);
        const auto id = jp.str(cats[i], p, "id");
        categories.push_back({id, jp.opt_str(cats[i], "name", id, p)});
        const auto& members = jp.arr(cats[i], p, "subcategories");
        for (std::size_t s = 0; s < members.size(); ++s) {
            const auto sp = at(p + ".subcategories", s);
            const auto sid = jp.str(members[s], sp, "id");
            subs.push_back({sid, jp.opt_str(members[s], "name", sid, sp), id});
        }
        std::vector<char> ok(g.locations().size(), 1);
        const bool by_fixture = cats[i].contains("eligible_fixtures");
        const bool by_location = cats[i].contains("eligible_locations");
        if (by_fixture && by_location) jp.fail(p, "give eligible_fixtures or eligible_locations, not both");
        if (by_fixture || by_location) {
            const char* key = by_fixture ? "eligible_fixtures" : "eligible_locations";
            const auto names = jp.strings(jp.arr(cats[i], p, key), p + "." + key);
            std::fill(ok.begin(), ok.end(), 0);
            for (const auto& name : names) {
                bool hit = false;
                for (std::size_t l = 0; l < g.locations().size(); ++l) {
                    const auto& loc = g.locations()[l];
                    if ((by_fixture ? loc.fixture_type : loc.id) == name) {
                        ok[l] = 1;
                        hit = true;
                    }
                }
                if (!hit) jp.fail(p + "." + key, "'" + name + "' matches no location");
            }
        }
        allowed.push_back(std::move(ok));
    }
    try {
        def.catalog = Catalog(categories, subs);
    } catch (const InputError& e) {
        throw InputError(source + ": " + e.what());
    }
    const Catalog& cat = def.catalog;
    if (cat.category_count() != g.loc_position_count())
        jp.fail("$.categories", std::to_string(categories.size()) + " categories for " +
                                    std::to_string(g.locations().size()) + " locations");
    if (cat.subcategory_count() != g.sub_position_count())
        jp.fail("$.categories", std::to_string(subs.size()) + " subcategories for " +
                                    std::to_string(g.sublocations().size()) + " sublocations");

    const std::size_t G = cat.category_count();
    def.category_eligibility = BoolMatrix(G, G, 0);
    def.category_eligibility(0, 0) = 1;
    def.category_eligibility(G - 1, G - 1) = 1;
    for (std::size_t c = 1; c + 1 < G; ++c) {
        bool any = false;
        for (std::size_t l = 1; l + 1 < G; ++l) {
            const bool fits = cat.members(static_cast<int>(c)).size() == g.locations()[l - 1].sublocations.size();
            if (allowed[c - 1][l - 1] && fits) {
                def.category_eligibility(c, l) = 1;
                any = true;
            }
        }
        if (!any)
            jp.fail(at("$.categories", c - 1), "no allowed location has " +
                                                   std::to_string(cat.members(static_cast<int>(c)).size()) +
                                                   " sublocations");
    }

    if (auto it = doc.find("current_layout"); it != doc.end()) {
        const auto& cl = *it;
        const std::string p = "$.current_layout";
        auto read_map = [&](const char* key, std::size_t n, auto&& find_item, auto&& find_pos) {
            const auto& m = jp.member(cl, p, key);
            if (!m.is_object()) jp.fail(p + "." + key, "expected an object");
            Assignment a(n);
            a[0] = 0;
            a[n - 1] = static_cast<int>(n) - 1;
            for (const auto& [item, pos] : m.items()) {
                const auto ip = p + "." + key + "." + item;
                const auto i = find_item(item);
                if (!i || *i == 0 || static_cast<std::size_t>(*i) == n - 1) jp.fail(ip, "unknown id '" + item + "'");
                if (!pos.is_string()) jp.fail(ip, "expected a position id");
                const auto k = find_pos(pos.template get<std::string>());
                if (!k) jp.fail(ip, "unknown position '" + pos.template get<std::string>() + "'");
                a[*i] = *k + 1;
            }
            if (!a.complete()) jp.fail(p + "." + key, "does not place every item");
            return a;
        };
        def.current_categories = read_map(
            "categories", G, [&](const std::string& s) { return cat.find_category(s); },
            [&](const std::string& s) { return g.find_location(s); });
        def.current_subcategories = read_map(
            "subcategories", cat.subcategory_count(), [&](const std::string& s) { return cat.find_subcategory(s); },
            [&](const std::string& s) { return g.find_sublocation(s); });
    }
    return def;
}

inline StoreDefinition load_store_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open store file " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    return parse_store(doc, path);
}

inline std::vector<Transaction> load_transactions_file(const std::string& path, const Catalog& catalog) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open transactions file " + path);
    try {
        return load_transactions(in, catalog);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

}  // namespace storelayout
