#include <cstdio>
#include <fstream>

#include "catch_amalgamated.hpp"

#include "support.hpp"

using namespace storelayout;
using nlohmann::json;

namespace {

json small_store() {
    return json::parse(R"({
      "name": "corner shop",
      "nodes": [{"id": "in", "x": 0, "y": 0}, {"id": "a", "x": 3, "y": 0},
                {"id": "b", "x": 3, "y": 4}, {"id": "out", "x": 6, "y": 0}],
      "edges": [{"a": "in", "b": "a"}, {"a": "a", "b": "b"}, {"a": "a", "b": "out", "length": 2.5}],
      "entrance": "in",
      "exit": "out",
      "locations": [
        {"id": "L1", "fixture": "shelf", "center": "a",
         "sublocations": [{"id": "s1", "center": "a"}, {"id": "s2", "center": "a", "facing": ["a", "b"]}]},
        {"id": "L2", "fixture": "fridge", "center": "b", "sublocations": [{"id": "s3", "center": "b"}]}
      ],
      "categories": [
        {"id": "dry", "subcategories": [{"id": "pasta"}, {"id": "rice", "name": "Rice"}]},
        {"id": "cold", "eligible_fixtures": ["fridge"], "subcategories": [{"id": "milk"}]}
      ],
      "current_layout": {
        "categories": {"dry": "L1", "cold": "L2"},
        "subcategories": {"pasta": "s2", "rice": "s1", "milk": "s3"}
      }
    })");
}

std::string message_of(const json& doc) {
    try {
        parse_store(doc, "shop.json");
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("small store parses") {
    const auto def = parse_store(small_store());
    CHECK(def.name == "corner shop");
    CHECK_FALSE(def.synthetic);
    CHECK(def.graph.node_count() == 4);
    CHECK(def.catalog.category_count() == 4);
    CHECK(def.catalog.subcategory_count() == 5);
    CHECK(def.catalog.subcategory(2).name == "Rice");
    // dry fits only L1 by size, cold only the fridge
    CHECK(def.category_eligibility(1, 1) == 1);
    CHECK(def.category_eligibility(1, 2) == 0);
    CHECK(def.category_eligibility(2, 2) == 1);
    CHECK(def.category_eligibility(2, 1) == 0);
    CHECK(*def.current_categories == Assignment(std::vector<int>{0, 1, 2, 3}));
    CHECK(*def.current_subcategories == Assignment(std::vector<int>{0, 2, 1, 3, 4}));
    const auto ex = build_exposure_matrices(def.graph);
    CHECK(ex.sub_distance(0, 4) == 5.5);
    CHECK_NOTHROW(current_layout_plan(def));
}

TEST_CASE("store file errors name the offending entry") {
    SECTION("missing member") {
        auto d = small_store();
        d.erase("entrance");
        CHECK_THAT(message_of(d), Catch::Matchers::ContainsSubstring("missing 'entrance'"));
    }
    SECTION("bad node coordinate") {
        auto d = small_store();
        d["nodes"][2]["x"] = "three";
        const auto m = message_of(d);
        CHECK_THAT(m, Catch::Matchers::ContainsSubstring("$.nodes[2].x"));
        CHECK_THAT(m, Catch::Matchers::StartsWith("shop.json"));
    }
    SECTION("unknown edge endpoint") {
        auto d = small_store();
        d["edges"][0]["b"] = "zz";
        CHECK_THAT(message_of(d), Catch::Matchers::ContainsSubstring("zz"));
    }
    SECTION("non-positive edge length") {
        auto d = small_store();
        d["edges"][2]["length"] = 0;
        CHECK_THAT(message_of(d), Catch::Matchers::ContainsSubstring("positive length"));
    }
    SECTION("count mismatch") {
        auto d = small_store();
        d["categories"][0]["subcategories"].push_back({{"id", "oats"}});
        CHECK_THAT(message_of(d), Catch::Matchers::ContainsSubstring("subcategories for 3 sublocations"));
    }
    SECTION("no location fits a category") {
        auto d = small_store();
        d["categories"][1]["eligible_fixtures"] = {"shelf"};
        CHECK_THAT(message_of(d), Catch::Matchers::ContainsSubstring("$.categories[1]"));
    }
    SECTION("unknown fixture") {
        auto d = small_store();
        d["categories"][1]["eligible_fixtures"] = {"freezer"};
        CHECK_THAT(message_of(d), Catch::Matchers::ContainsSubstring("'freezer' matches no location"));
    }
    SECTION("both eligibility forms") {
        auto d = small_store();
        d["categories"][1]["eligible_locations"] = {"L2"};
        CHECK_THAT(message_of(d), Catch::Matchers::ContainsSubstring("not both"));
    }
    SECTION("duplicate subcategory") {
        auto d = small_store();
        d["categories"][1]["subcategories"][0]["id"] = "pasta";
        CHECK_THAT(message_of(d), Catch::Matchers::ContainsSubstring("pasta"));
    }
    SECTION("incomplete current layout") {
        auto d = small_store();
        d["current_layout"]["subcategories"].erase("milk");
        CHECK_THAT(message_of(d), Catch::Matchers::ContainsSubstring("does not place every item"));
    }
    SECTION("current layout on an unknown sublocation") {
        auto d = small_store();
        d["current_layout"]["subcategories"]["milk"] = "s9";
        CHECK_THAT(message_of(d), Catch::Matchers::ContainsSubstring("unknown position 's9'"));
    }
    SECTION("infeasible current layout is caught when used") {
        auto d = small_store();
        d["current_layout"]["subcategories"]["milk"] = "s1";
        d["current_layout"]["subcategories"]["rice"] = "s3";
        const auto def = parse_store(d);
        CHECK_THROWS_AS(current_layout_plan(def), ValidationError);
    }
    SECTION("not an object") { CHECK_THROWS_AS(parse_store(json::array()), InputError); }
}

TEST_CASE("file loading errors") {
    CHECK_THROWS_AS(load_store_file("/nonexistent/store.json"), IoError);
    const std::string path = "store_file_test_bad.json";
    {
        std::ofstream out(path);
        out << "{\"nodes\": [";
    }
    CHECK_THROWS_AS(load_store_file(path), ParseError);
    std::remove(path.c_str());
    const auto def = parse_store(small_store());
    try {
        load_transactions_file("/nonexistent/tx.csv", def.catalog);
        FAIL("expected an I/O error");
    } catch (const IoError& e) {
        CHECK_THAT(std::string(e.what()), Catch::Matchers::ContainsSubstring("/nonexistent/tx.csv"));
    }
}

TEST_CASE("bundled synthetic fixture") {
    const auto def = load_store_file(testing::data_path("data/synthetic_store.json"));
    CHECK(def.synthetic);
    CHECK(def.graph.locations().size() == 20);
    CHECK(def.graph.sublocations().size() == 48);
    const auto tx = load_transactions_file(testing::data_path("data/synthetic_transactions.csv"), def.catalog);
    CHECK_FALSE(tx.empty());
    const auto current = current_layout_plan(def);
    CHECK(check_feasible(category_checker(def), current.categories).ok());
    // every category has at least one eligible location besides its current one or is pinned by size
    for (std::size_t c = 1; c + 1 < def.catalog.category_count(); ++c)
        CHECK(def.category_eligibility(c, current.categories[c]) == 1);
}
