#include "catch_amalgamated.hpp"

#include "support.hpp"

using namespace storelayout;

namespace {

QapInstance forced_instance(Rng& rng, std::size_t n) {
    auto base = testing::random_level1(rng, n - 2);
    BoolMatrix id(n, n, 0);
    for (std::size_t i = 0; i < n; ++i) id(i, i) = 1;
    return QapInstance(Level::level1, base.flow(), base.exposure(), id);
}

/// Random level-1 or level-2 instance with at most 8 free products.
QapInstance mixed_instance(Rng& rng, int t) {
    switch (t % 4) {
        case 0: return testing::random_level1(rng, 2 + rng.below(6), testing::Pattern::full);
        case 1: return testing::random_level1(rng, 3 + rng.below(6), testing::Pattern::sparse);
        case 2: return testing::random_level1(rng, 3 + rng.below(6), testing::Pattern::classes);
        default: {
            std::vector<std::size_t> blocks;
            std::size_t free = 0;
            while (free < 5) {
                const std::size_t b = 1 + rng.below(4);
                blocks.push_back(b);
                free += b > 1 ? b : 0;
            }
            while (free > 8) {
                free -= blocks.back() > 1 ? blocks.back() : 0;
                blocks.pop_back();
            }
            return testing::random_level2(rng, blocks);
        }
    }
}

/// Toy store: a corridor with locations A, B (two sublocations each) and
/// C, D (one each); categories K1, K2 (two members) and K3, K4 (one).
StoreDefinition toy_store(Rng& rng) {
    StoreGraphBuilder b;
    for (int i = 0; i < 8; ++i) b.add_node("n" + std::to_string(i), i, 0);
    for (int i = 0; i < 7; ++i) b.add_edge("n" + std::to_string(i), "n" + std::to_string(i + 1));
    b.add_node("m", 3, 2).add_edge("n1", "m").add_edge("m", "n6");
    b.set_entrance("n0").set_exit("n7");
    b.add_location("A", "shelf", "n1").add_location("B", "shelf", "n3");
    b.add_location("C", "endcap", "n5").add_location("D", "endcap", "m");
    b.add_sublocation("a1", "A", "n1").add_sublocation("a2", "A", "n2");
    b.add_sublocation("b1", "B", "n3").add_sublocation("b2", "B", "n4");
    b.add_sublocation("c1", "C", "n5").add_sublocation("d1", "D", "m");
    Catalog catalog({{"K1", ""}, {"K2", ""}, {"K3", ""}, {"K4", ""}},
                    {{"p", "", "K1"}, {"q", "", "K1"}, {"r", "", "K2"}, {"s", "", "K2"}, {"t", "", "K3"}, {"u", "", "K4"}});
    BoolMatrix elig(6, 6, 0);
    elig(0, 0) = elig(5, 5) = 1;
    for (int c : {1, 2})
        for (int l : {1, 2}) elig(c, l) = 1;
    for (int c : {3, 4})
        for (int l : {3, 4}) elig(c, l) = 1;
    (void)rng;
    return StoreDefinition{"toy", true, b.build(), std::move(catalog), elig, std::nullopt, std::nullopt};
}

std::vector<Transaction> random_baskets(Rng& rng, const Catalog& c, std::size_t count) {
    std::vector<Transaction> out;
    const int S = static_cast<int>(c.subcategory_count()) - 2;
    for (std::size_t t = 0; t < count; ++t) {
        Transaction tx{"t" + std::to_string(t), {}};
        for (int s = 1; s <= S; ++s)
            if (rng.uniform() < 0.35) tx.subcategories.push_back(s);
        if (tx.subcategories.empty()) tx.subcategories.push_back(1 + static_cast<int>(rng.below(S)));
        out.push_back(std::move(tx));
    }
    return out;
}

SolverConfig quick(std::uint64_t seed = 1) {
    SolverConfig c;
    c.seed = seed;
    c.iteration_limit = 2000;
    c.restarts = 3;
    return c;
}

}  // namespace

TEST_CASE("brute force on small cases") {
    Rng rng(1);
    SECTION("forced instance") {
        const auto inst = forced_instance(rng, 6);
        const auto r = brute_force(inst);
        CHECK(r.best == Assignment(std::vector<int>{0, 1, 2, 3, 4, 5}));
        CHECK(*r.bound == r.objective);
    }
    SECTION("three free products") {
        const auto inst = testing::random_level1(rng, 3);
        const auto r = brute_force(inst);
        const auto opt = testing::enumerate_optimum(inst);
        CHECK(opt.count == 6);
        CHECK(r.objective == opt.value);
        CHECK(r.best == opt.best);
    }
    SECTION("level 2 with blocks 2 and 2") {
        const auto inst = testing::random_level2(rng, {2, 2});
        const auto opt = testing::enumerate_optimum(inst);
        CHECK(opt.count == 4);
        CHECK(brute_force(inst).objective == opt.value);
    }
    SECTION("integrated instance") {
        const auto inst = testing::random_integrated(rng, {2, 2, 1});
        const auto opt = testing::enumerate_optimum(inst);
        const auto r = brute_force(inst);
        CHECK(r.objective == Catch::Approx(opt.value).epsilon(1e-12));
        CHECK(check_feasible(inst, r.best).ok());
    }
    SECTION("size cap") { CHECK_THROWS_AS(brute_force(testing::random_level1(rng, 10)), SizeError); }
}

TEST_CASE("branch and bound agrees with brute force") {
    Rng rng(2);
    SolverConfig config;
    for (int t = 0; t < 100; ++t) {
        const auto inst = mixed_instance(rng, t);
        REQUIRE(inst.free_product_count() <= 8);
        const auto exact = brute_force(inst);
        const auto bb = branch_and_bound(inst, config);
        CHECK(bb.objective == exact.objective);
        CHECK_FALSE(bb.trace.limit_reached);
        CHECK(*bb.bound == bb.objective);
        CHECK(*bb.gap() == 0.0);
        CHECK(check_feasible(inst, bb.best).ok());
    }
}

TEST_CASE("bounds are valid at the root and inside the tree") {
    Rng rng(3);
    for (int t = 0; t < 60; ++t) {
        const auto inst = t % 2 ? testing::random_level1(rng, 2 + rng.below(4), testing::Pattern::sparse)
                                : testing::random_level2(rng, {2, 1 + rng.below(3)});
        const std::size_t n = inst.size();
        const auto opt = testing::enumerate_optimum(inst);
        CHECK(gilmore_lawler_bound(inst, Assignment(n)) >= opt.value - objective_tol(opt.value));

        // fix a random prefix of some feasible assignment and compare with the best completion
        const auto a = testing::random_feasible(inst, rng);
        Assignment partial(n);
        for (std::size_t i = 0; i < n; ++i)
            if (rng.uniform() < 0.5) partial[i] = a[i];
        double best = -std::numeric_limits<double>::infinity();
        testing::for_each_feasible(inst, [&](const Assignment& c) {
            for (std::size_t i = 0; i < n; ++i)
                if (partial[i] >= 0 && partial[i] != c[i]) return;
            best = std::max(best, testing::direct_objective(inst, c));
        });
        CHECK(gilmore_lawler_bound(inst, partial) >= best - objective_tol(best));
    }
}

TEST_CASE("forced instance takes one node") {
    Rng rng(4);
    const auto r = branch_and_bound(forced_instance(rng, 7), SolverConfig{});
    CHECK(r.trace.nodes == 1);
}

TEST_CASE("branch and bound reports its limit") {
    Rng rng(5);
    SolverConfig config;
    config.node_limit = 3;
    const auto inst = testing::random_level1(rng, 8);
    const auto r = branch_and_bound(inst, config);
    CHECK(r.trace.limit_reached);
    CHECK(*r.bound >= brute_force(inst).objective - 1e-9);
    CHECK(check_feasible(inst, r.best).ok());
    CHECK(*r.gap() >= 0.0);
    CHECK_THROWS_AS(branch_and_bound(testing::random_integrated(rng, {2, 1}), config), ValidationError);
}

TEST_CASE("tabu search finds the optimum on small instances") {
    Rng rng(6);
    const SolverConfig config;  // default budget
    int hits = 0;
    for (int t = 0; t < 100; ++t) {
        const auto inst = mixed_instance(rng, t);
        const auto exact = brute_force(inst);
        const auto r = tabu_search(inst, config);
        CHECK(check_feasible(inst, r.best).ok());
        CHECK(r.objective <= exact.objective + objective_tol(exact.objective));
        hits += approx_equal(r.objective, exact.objective);
    }
    INFO("tabu matched brute force on " << hits << "/100");
    CHECK(hits >= 95);
}

TEST_CASE("tabu search properties") {
    Rng rng(7);
    SECTION("unique feasible assignment is returned immediately") {
        const auto inst = forced_instance(rng, 6);
        const auto r = tabu_search(inst, quick());
        CHECK(r.best == Assignment(std::vector<int>{0, 1, 2, 3, 4, 5}));
        CHECK(r.trace.iterations == 0);
    }
    SECTION("same seed, same result and trace") {
        const auto inst = testing::random_level1(rng, 12, testing::Pattern::sparse);
        const auto a = tabu_search(inst, quick(9));
        const auto b = tabu_search(inst, quick(9));
        CHECK(a.best == b.best);
        CHECK(a.objective == b.objective);
        CHECK(a.trace.iterations == b.trace.iterations);
        CHECK(a.trace.improvements == b.trace.improvements);
        auto threaded = quick(9);
        threaded.threads = 3;
        CHECK(tabu_search(inst, threaded).best == a.best);
    }
    SECTION("never worse than the start") {
        for (int t = 0; t < 20; ++t) {
            const auto inst = testing::random_level1(rng, 6 + rng.below(8));
            const auto start = testing::random_feasible(inst, rng);
            const auto r = tabu_search(inst, quick(t), &start);
            CHECK(r.objective >= objective(inst, start) - objective_tol(r.objective));
        }
    }
    SECTION("level 2 swaps stay inside blocks") {
        const auto inst = testing::random_level2(rng, {3, 4, 2, 1});
        const auto r = tabu_search(inst, quick());
        CHECK(check_feasible(inst, r.best).ok());
    }
    SECTION("infeasible start is rejected") {
        const auto inst = testing::random_level1(rng, 3);
        const Assignment bad(std::vector<int>{0, 1, 1, 3, 4});
        CHECK_THROWS_AS(tabu_search(inst, quick(), &bad), ValidationError);
    }
}

TEST_CASE("block descent") {
    Rng rng(8);
    SECTION("all singleton blocks leave the input unchanged") {
        const auto inst = testing::random_level2(rng, {1, 1, 1});
        const auto start = testing::random_feasible(inst, rng);
        const auto r = block_descent(inst, quick(), &start);
        CHECK(r.best == start);
    }
    SECTION("a single block equals brute force") {
        for (int t = 0; t < 10; ++t) {
            const auto inst = testing::random_level2(rng, {3});
            CHECK(block_descent(inst, quick()).objective == Catch::Approx(brute_force(inst).objective).epsilon(1e-12));
        }
    }
    SECTION("objective never decreases across cycles") {
        for (int t = 0; t < 100; ++t) {
            const auto inst = testing::random_level2(rng, {2 + rng.below(3), 1 + rng.below(4), 2 + rng.below(2), 3});
            const auto start = testing::random_feasible(inst, rng);
            const auto r = block_descent(inst, quick(t), &start);
            double prev = objective(inst, start);
            for (double h : r.trace.history) {
                CHECK(h >= prev - objective_tol(prev));
                prev = h;
            }
            CHECK(r.objective >= objective(inst, start) - objective_tol(r.objective));
            CHECK(check_feasible(inst, r.best).ok());
        }
    }
    SECTION("blocks above the exhaustive cap fall back to tabu") {
        auto config = quick();
        config.block_exhaustive_cap = 3;
        const auto inst = testing::random_level2(rng, {5, 2});
        const auto r = block_descent(inst, config);
        CHECK(check_feasible(inst, r.best).ok());
        CHECK_FALSE(r.trace.notes.empty());
    }
    SECTION("level 1 instances are rejected") {
        CHECK_THROWS_AS(block_descent(testing::random_level1(rng, 3), quick()), ValidationError);
    }
}

TEST_CASE("level-1 pool") {
    Rng rng(9);
    SECTION("K = 1 holds only the best") {
        auto config = quick();
        config.pool_capacity = 1;
        const auto inst = testing::random_level1(rng, 6);
        SolveResult summary;
        const auto pool = solve_level1(inst, config, &summary);
        CHECK(pool.size() == 1);
        CHECK(pool.best().value == brute_force(inst).objective);
        CHECK(summary.objective == pool.best().value);
        CHECK(*summary.gap() == 0.0);
    }
    SECTION("K = 10 members are distinct, feasible and within the gap") {
        auto config = quick();
        config.pool_gap = 0.05;
        const auto inst = testing::random_level1(rng, 7, testing::Pattern::classes);
        const auto pool = solve_level1(inst, config);
        CHECK(pool.size() <= 10);
        const double best = pool.best().value;
        CHECK(best == brute_force(inst).objective);
        for (std::size_t i = 0; i < pool.size(); ++i) {
            const auto& e = pool.entries()[i];
            CHECK(check_feasible(inst, e.assignment).ok());
            CHECK(e.value == Catch::Approx(objective(inst, e.assignment)));
            CHECK(e.value >= best - 0.05 * std::abs(best) - 1e-9);
            for (std::size_t j = 0; j < i; ++j) CHECK(pool.entries()[j].assignment != e.assignment);
            if (i > 0) CHECK(pool.entries()[i - 1].value >= e.value - 1e-9);
        }
        // the pool is the top of the gap window: nothing feasible within the gap is missing from a full pool
        if (pool.size() < 10) {
            std::size_t within = 0;
            testing::for_each_feasible(inst, [&](const Assignment& a) {
                within += objective(inst, a) >= best - 0.05 * std::abs(best) - 1e-9;
            });
            CHECK(pool.size() <= within);
        }
    }
    SECTION("unique feasible assignment gives a pool of one") {
        auto config = quick();
        config.pool_gap = 0.5;
        const auto pool = solve_level1(forced_instance(rng, 6), config);
        CHECK(pool.size() == 1);
    }
}

TEST_CASE("level-2 pipeline") {
    Rng rng(10);
    for (int t = 0; t < 10; ++t) {
        const auto inst = testing::random_level2(rng, {3, 2, 2, 1});
        const auto r = solve_level2(inst, quick(t));
        CHECK(r.objective == Catch::Approx(brute_force(inst).objective).epsilon(1e-12));
    }
}

TEST_CASE("hierarchical solve") {
    Rng rng(11);
    const auto def = toy_store(rng);
    const auto tx = random_baskets(rng, def.catalog, 60);
    const auto ex = build_exposure_matrices(def.graph);
    const auto tm = expected_transitions(tx, def.catalog);

    auto config = quick(3);
    config.pool_gap = 0.2;
    config.pool_capacity = 1;
    const auto one = solve_hierarchical(ex, tm, def.category_eligibility, def.catalog, def.graph, config);
    config.pool_capacity = 10;
    const auto ten = solve_hierarchical(ex, tm, def.category_eligibility, def.catalog, def.graph, config);
    CHECK(ten.final.objective >= one.final.objective - objective_tol(one.final.objective));
    CHECK(ten.pool.size() >= one.pool.size());
    // the K = 1 member is the first member of the larger pool and solves the same way
    CHECK(ten.members.front().objective == one.members.front().objective);

    // integrated optimum by enumeration bounds the result
    const auto lim = build_integrated_instance(ex, tm, def.category_eligibility, def.catalog, def.graph);
    const double best = brute_force(lim).objective;
    CHECK(ten.final.objective <= best + objective_tol(best));
    const auto l2 = build_level2_instance(ex, tm, ten.category_layout(), def.catalog, def.graph);
    CHECK(objective(l2, ten.final.best) == Catch::Approx(ten.final.objective));

    config.threads = 4;
    const auto threaded = solve_hierarchical(ex, tm, def.category_eligibility, def.catalog, def.graph, config);
    CHECK(threaded.final.best == ten.final.best);
    CHECK(threaded.chosen == ten.chosen);
}

TEST_CASE("singleton catalog") {
    StoreGraphBuilder b;
    b.add_node("in", 0, 0).add_node("k", 1, 0).add_node("out", 2, 0);
    b.add_edge("in", "k").add_edge("k", "out");
    b.set_entrance("in").set_exit("out");
    b.add_location("l", "shelf", "k").add_sublocation("s", "l", "k");
    const auto g = b.build();
    const Catalog c({{"only", ""}}, {{"one", "", "only"}});
    BoolMatrix elig(3, 3, 0);
    elig(0, 0) = elig(1, 1) = elig(2, 2) = 1;
    const auto ex = build_exposure_matrices(g);
    const auto tm = expected_transitions({{"t1", {1}}, {"t2", {1}}}, c);
    const auto r = solve_hierarchical(ex, tm, elig, c, g, quick());
    CHECK(r.final.best == Assignment(std::vector<int>{0, 1, 2}));
    const auto l2 = build_level2_instance(ex, tm, r.category_layout(), c, g);
    CHECK(r.final.objective == testing::direct_objective(l2, r.final.best));
    CHECK(r.final.objective == 2.0 * (ex.sub_exposure(0, 1) + ex.sub_exposure(1, 2)));
}

TEST_CASE("layout evaluation") {
    SECTION("baseline equal to candidate") {
        Rng rng(12);
        const auto inst = testing::random_level1(rng, 4);
        const auto a = testing::random_feasible(inst, rng);
        const auto ev = evaluate_layout(inst, inst.exposure(), a, &a);
        CHECK(*ev.exposure_delta_pct == 0.0);
        CHECK(*ev.distance_delta_pct == 0.0);
    }
    SECTION("two-sublocation toy by hand") {
        // entrance n0, s1 at n1, s2 at n3, exit n4; unit edges except n1-n2 of length 2
        StoreGraphBuilder b;
        for (int i = 0; i < 5; ++i) b.add_node("n" + std::to_string(i), i, 0);
        b.add_edge("n0", "n1", 1.0).add_edge("n1", "n2", 2.0).add_edge("n2", "n3", 1.0).add_edge("n3", "n4", 1.0);
        b.set_entrance("n0").set_exit("n4");
        b.add_location("l", "shelf", "n1").add_sublocation("s1", "l", "n1").add_sublocation("s2", "l", "n3");
        const auto g = b.build();
        const Catalog c({{"k", ""}}, {{"x", "", "k"}, {"y", "", "k"}});
        const auto ex = build_exposure_matrices(g);
        // one basket {x}: in -> x -> out
        const auto tm = expected_transitions({{"t", {1}}}, c);
        const auto inst = build_level2_instance(ex, tm, Assignment(std::vector<int>{0, 1, 2}), c, g);
        const Assignment x_first(std::vector<int>{0, 1, 2, 3});
        const Assignment x_second(std::vector<int>{0, 2, 1, 3});
        // x at s1: 1 + (2 + 1 + 1) = 5; x at s2: 4 + 1 = 5, so distance change 0
        const auto same = evaluate_layout(inst, ex.sub_distance, x_first, &x_second);
        CHECK(same.travel_distance == 5.0);
        CHECK(*same.baseline_travel_distance == 5.0);
        // basket {x, y}: each order weighs 0.5
        const auto tm2 = expected_transitions({{"t", {1, 2}}}, c);
        const auto inst2 = build_level2_instance(ex, tm2, Assignment(std::vector<int>{0, 1, 2}), c, g);
        // 0.5 * (in-s1 1 + s1-s2 3 + s2-out 1) + 0.5 * (in-s2 4 + s2-s1 3 + s1-out 4) = 2.5 + 5.5 = 8
        const auto ev = evaluate_layout(inst2, ex.sub_distance, x_first);
        CHECK(ev.travel_distance == 8.0);
        CHECK_FALSE(ev.baseline_exposure);
    }
    SECTION("infeasible baseline") {
        Rng rng(13);
        const auto inst = testing::random_level1(rng, 3);
        const Assignment a(std::vector<int>{0, 1, 2, 3, 4});
        const Assignment bad(std::vector<int>{0, 1, 1, 3, 4});
        CHECK_THROWS_AS(evaluate_layout(inst, inst.exposure(), a, &bad), ValidationError);
    }
    SECTION("percent rounding") {
        CHECK(*percent_change(109.44, 100.0) == 9.4);
        CHECK(*percent_change(100.0, 100.0) == 0.0);
        CHECK(*percent_change(0.0, 0.0) == 0.0);
        CHECK_FALSE(percent_change(1.0, 0.0));
        CHECK(std::signbit(*percent_change(99.99, 100.0)) == false);
    }
}
