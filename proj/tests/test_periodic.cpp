#include <doctest.h>

#include <random>

#include "pde/periodic.hpp"
#include "test_support.hpp"

using namespace pde;

static Instance toy() { return load_instance_file("data/toy1.json"); }

static Instance constant_instance(long long value, int T = 4) {
    Instance inst;
    inst.commodities = {{0, "A", "B", ""}};
    Path p{1, {0}, 10, Rational(1), Rational(1), false, {"S1"}};
    Path out{2, {0}, std::nullopt, Rational(0), Rational(9), true, {}};
    inst.paths = {p, out};
    inst.forecasts = DemandMatrix(T, 1, value);
    inst.reindex();
    return inst;
}

TEST_CASE("the four mappings on the toy series") {
    Instance inst = toy();
    CHECK(mapping(inst, Mapping::mean).y_p == std::vector<long long>{2});
    CHECK(mapping(inst, Mapping::q2).y_p == std::vector<long long>{2});
    CHECK(mapping(inst, Mapping::q3).y_p == std::vector<long long>{4});
    CHECK(mapping(inst, Mapping::max).y_p == std::vector<long long>{4});
}

TEST_CASE("mappings coincide on constant series") {
    Instance inst = constant_instance(3);
    for (Mapping m : {Mapping::max, Mapping::mean, Mapping::q2, Mapping::q3})
        CHECK(mapping(inst, m).y_p == std::vector<long long>{3});
}

TEST_CASE("non-integral mean and quantiles round up") {
    Instance inst = constant_instance(0, 3);
    const long long series[] = {1, 2, 4};  // mean 7/3, q2 2, q3 3
    for (int t = 0; t < 3; ++t) inst.forecasts.at(t, 0) = series[t];
    CHECK(mapping(inst, Mapping::mean).y_p == std::vector<long long>{3});
    CHECK(mapping(inst, Mapping::q2).y_p == std::vector<long long>{2});
    CHECK(mapping(inst, Mapping::q3).y_p == std::vector<long long>{3});
}

TEST_CASE("quantile ordering q2 <= q3 <= max holds") {
    std::mt19937_64 rng(314);
    for (int trial = 0; trial < 30; ++trial) {
        Instance inst = testsupport::make_random_instance(rng);
        auto q2 = mapping(inst, Mapping::q2).y_p;
        auto q3 = mapping(inst, Mapping::q3).y_p;
        auto mx = mapping(inst, Mapping::max).y_p;
        for (size_t k = 0; k < q2.size(); ++k) {
            CHECK(q2[k] <= q3[k]);
            CHECK(q3[k] <= mx[k]);
        }
    }
}

TEST_CASE("alpha bounds are min/mean and max/mean") {
    Instance inst = toy();
    auto b = alpha_bounds(inst);
    REQUIRE(b.size() == 1);
    CHECK(b[0].first == Rational(0));
    CHECK(b[0].second == Rational(2));

    CHECK(alpha_bounds(constant_instance(3))[0] ==
          std::pair<Rational, Rational>{Rational(1), Rational(1)});

    Instance zero = constant_instance(0);
    auto zb = alpha_bounds(zero);
    CHECK(zb[0] == std::pair<Rational, Rational>{Rational(1), Rational(1)});
    CHECK(unit_deviation(zero).is_frozen(0));
}

TEST_CASE("alpha_to_demand rounds half up around the mean") {
    Instance inst = toy();
    DeviationVector dv = unit_deviation(inst);
    CHECK(alpha_to_demand(inst, dv).y_p == std::vector<long long>{2});

    dv.alpha[0] = Rational(3, 2);  // 1.5 * 2 = 3
    CHECK(alpha_to_demand(inst, dv).y_p == std::vector<long long>{3});

    dv.alpha[0] = Rational(0);
    CHECK(alpha_to_demand(inst, dv).y_p == std::vector<long long>{0});

    dv.alpha[0] = Rational(5, 4);  // 1.25 * 2 = 2.5 -> 3
    CHECK(alpha_to_demand(inst, dv).y_p == std::vector<long long>{3});

    dv.alpha[0] = Rational(9, 8);  // 1.125 * 2 = 2.25 -> 2
    CHECK(alpha_to_demand(inst, dv).y_p == std::vector<long long>{2});
}

TEST_CASE("frozen commodities always map to zero demand") {
    Instance inst = constant_instance(0);
    DeviationVector dv = unit_deviation(inst);
    CHECK(dv.is_frozen(0));
    CHECK(dv.alpha[0] == Rational(1));
    CHECK(alpha_to_demand(inst, dv).y_p == std::vector<long long>{0});
}

TEST_CASE("bound endpoints reproduce min and max exactly") {
    std::mt19937_64 rng(2718);
    for (int trial = 0; trial < 30; ++trial) {
        Instance inst = testsupport::make_random_instance(rng);
        auto stats = demand_stats(inst);
        DeviationVector dv = unit_deviation(inst);
        for (size_t k = 0; k < dv.alpha.size(); ++k) dv.alpha[k] = dv.bounds[k].second;
        auto at_max = alpha_to_demand(inst, dv).y_p;
        for (size_t k = 0; k < dv.alpha.size(); ++k) {
            if (dv.is_frozen(static_cast<int>(k))) continue;
            CHECK(at_max[k] == stats[k].max);
        }
        for (size_t k = 0; k < dv.alpha.size(); ++k) dv.alpha[k] = dv.bounds[k].first;
        auto at_min = alpha_to_demand(inst, dv).y_p;
        for (size_t k = 0; k < dv.alpha.size(); ++k) {
            if (dv.is_frozen(static_cast<int>(k))) continue;
            CHECK(at_min[k] == stats[k].min);
        }
    }
}

TEST_CASE("alpha_to_demand is monotone in alpha") {
    std::mt19937_64 rng(1618);
    Instance inst = testsupport::make_random_instance(rng);
    DeviationVector dv = unit_deviation(inst);
    std::vector<long long> prev;
    for (int step = 0; step <= 8; ++step) {
        for (size_t k = 0; k < dv.alpha.size(); ++k) {
            const auto& [lo, hi] = dv.bounds[k];
            dv.alpha[k] = lo + Rational(step, 8) * (hi - lo);
        }
        auto y = alpha_to_demand(inst, dv).y_p;
        if (!prev.empty())
            for (size_t k = 0; k < y.size(); ++k) CHECK(prev[k] <= y[k]);
        prev = y;
    }
}

TEST_CASE("scalar bounds compose per-commodity bounds") {
    CHECK(scalar_bounds(toy()) == std::pair<Rational, Rational>{Rational(0), Rational(2)});
    CHECK(scalar_bounds(constant_instance(0)) ==
          std::pair<Rational, Rational>{Rational(1), Rational(1)});

    // Two commodities with different spreads: bounds merge to the union.
    Instance inst;
    inst.commodities = {{0, "A", "B", ""}, {1, "B", "C", ""}};
    Path p1{1, {0}, 10, Rational(1), Rational(1), false, {"S1"}};
    Path p2{2, {1}, 10, Rational(1), Rational(1), false, {"S2"}};
    Path o1{3, {0}, std::nullopt, Rational(0), Rational(9), true, {}};
    Path o2{4, {1}, std::nullopt, Rational(0), Rational(9), true, {}};
    inst.paths = {p1, p2, o1, o2};
    inst.forecasts = DemandMatrix(2, 2);
    inst.forecasts.at(0, 0) = 1;  // commodity 0: (1,3): mean 2, bounds (1/2, 3/2)
    inst.forecasts.at(1, 0) = 3;
    inst.forecasts.at(0, 1) = 0;  // commodity 1: (0,4): mean 2, bounds (0, 2)
    inst.forecasts.at(1, 1) = 4;
    inst.reindex();
    CHECK(scalar_bounds(inst) == std::pair<Rational, Rational>{Rational(0), Rational(2)});

    auto b = alpha_bounds(inst);
    CHECK(b[0] == std::pair<Rational, Rational>{Rational(1, 2), Rational(3, 2)});
}

TEST_CASE("mapping names round-trip") {
    for (Mapping m : {Mapping::max, Mapping::mean, Mapping::q2, Mapping::q3})
        CHECK(mapping_from_name(mapping_name(m)) == m);
    CHECK_THROWS_AS(mapping_from_name("median"), std::invalid_argument);
}
