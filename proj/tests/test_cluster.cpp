#include <doctest.h>

#include <cmath>
#include <random>

#include "pde/cluster.hpp"
#include "test_support.hpp"

using namespace pde;

namespace {

// K commodities, each with its own regular path and outsourcing path.
// series(k) supplies the forecast column, services(k) the path labels.
template <typename SeriesFn, typename ServicesFn>
Instance parametrized_instance(int K, int T, SeriesFn series, ServicesFn services) {
    Instance inst;
    for (int k = 0; k < K; ++k)
        inst.commodities.push_back({k, "A", "B", ""});
    for (int k = 0; k < K; ++k) {
        Path p{k + 1, {k}, 1000, Rational(1), Rational(1), false, services(k)};
        inst.paths.push_back(std::move(p));
    }
    for (int k = 0; k < K; ++k) {
        Path out{K + k + 1, {k}, std::nullopt, Rational(0), Rational(10), true, {}};
        inst.paths.push_back(std::move(out));
    }
    inst.forecasts = DemandMatrix(T, K);
    for (int k = 0; k < K; ++k) {
        auto col = series(k);
        for (int t = 0; t < T; ++t) inst.forecasts.at(t, k) = col[static_cast<size_t>(t)];
    }
    inst.reindex();
    return inst;
}

// Ten commodities whose coefficients of variation are 0.1, 0.2, ..., 1.0:
// series (10-d, 10+d) has mean 10 and population std d.
Instance cv_ladder() {
    return parametrized_instance(
        10, 2,
        [](int k) { return std::vector<long long>{10 - (k + 1), 10 + (k + 1)}; },
        [](int) { return std::vector<std::string>{"S"}; });
}

}  // namespace

TEST_CASE("coefficient of variation values") {
    Instance toy = load_instance_file("data/toy1.json");
    auto cv = coeff_variation(toy);
    REQUIRE(cv.size() == 1);
    CHECK(cv[0].first == 0);
    CHECK(cv[0].second == doctest::Approx(std::sqrt(7.0 / 12.0)));  // ~0.7638

    Instance flat = parametrized_instance(
        1, 4, [](int) { return std::vector<long long>{3, 3, 3, 3}; },
        [](int) { return std::vector<std::string>{"S"}; });
    CHECK(coeff_variation(flat)[0].second == doctest::Approx(0.0));

    Instance spread = parametrized_instance(
        1, 2, [](int) { return std::vector<long long>{0, 2}; },
        [](int) { return std::vector<std::string>{"S"}; });
    CHECK(coeff_variation(spread)[0].second == doctest::Approx(1.0));

    Instance zero = parametrized_instance(
        1, 2, [](int) { return std::vector<long long>{0, 0}; },
        [](int) { return std::vector<std::string>{"S"}; });
    CHECK(coeff_variation(zero).empty());
}

TEST_CASE("cv clustering uses the 25/50/75/90 percentile buckets") {
    Instance inst = cv_ladder();
    Clustering c = cluster_cv(inst, 5);
    CHECK(c.method == "cv");
    // Breakpoints on sigma = 0.1..1.0: Q25=0.325, Q50=0.55, Q75=0.775, Q90=0.91.
    REQUIRE(c.clusters.size() == 5);
    CHECK(c.clusters[0] == std::vector<int>{0, 1, 2});
    CHECK(c.clusters[1] == std::vector<int>{3, 4});
    CHECK(c.clusters[2] == std::vector<int>{5, 6});
    CHECK(c.clusters[3] == std::vector<int>{7, 8});
    CHECK(c.clusters[4] == std::vector<int>{9});
    CHECK_FALSE(testsupport::partition_violation(c, inst).has_value());
}

TEST_CASE("cv clustering with other cluster counts uses equal-probability breaks") {
    Instance inst = cv_ladder();
    Clustering c = cluster_cv(inst, 2);  // one breakpoint at the median 0.55
    REQUIRE(c.clusters.size() == 2);
    CHECK(c.clusters[0] == std::vector<int>{0, 1, 2, 3, 4});
    CHECK(c.clusters[1] == std::vector<int>{5, 6, 7, 8, 9});
}

TEST_CASE("cv clustering drops empty buckets") {
    Instance same = parametrized_instance(
        3, 2, [](int) { return std::vector<long long>{1, 3}; },
        [](int) { return std::vector<std::string>{"S"}; });
    Clustering c = cluster_cv(same, 5);
    REQUIRE(c.clusters.size() == 1);
    CHECK(c.clusters[0] == std::vector<int>{0, 1, 2});

    Instance single = parametrized_instance(
        1, 2, [](int) { return std::vector<long long>{1, 3}; },
        [](int) { return std::vector<std::string>{"S"}; });
    CHECK(cluster_cv(single, 5).clusters == std::vector<std::vector<int>>{{0}});
}

TEST_CASE("service clustering joins everything through shared trains") {
    Instance inst = load_instance_file("data/metrics4.json");
    Clustering c = cluster_cr(inst);
    CHECK(c.method == "cr");
    REQUIRE(c.clusters.size() == 1);
    CHECK(c.clusters[0] == std::vector<int>{0, 1, 2, 3});
    CHECK_FALSE(testsupport::partition_violation(c, inst).has_value());
}

TEST_CASE("disjoint services leave only the remainder cluster") {
    Instance inst = parametrized_instance(
        2, 2, [](int) { return std::vector<long long>{2, 2}; },
        [](int k) { return std::vector<std::string>{k == 0 ? "S1" : "S2"}; });
    Clustering c = cluster_cr(inst);
    REQUIRE(c.clusters.size() == 1);
    CHECK(c.clusters[0] == std::vector<int>{0, 1});
}

TEST_CASE("single commodity clusters alone") {
    Instance toy = load_instance_file("data/toy1.json");
    CHECK(cluster_cr(toy).clusters == std::vector<std::vector<int>>{{0}});
    CHECK(cluster_cru(toy).clusters == std::vector<std::vector<int>>{{0}});
    CHECK(cluster_cv(toy).clusters == std::vector<std::vector<int>>{{0}});
}

TEST_CASE("capacity relaxation can split service groups") {
    // Commodity 0 overflows its tight cheap path onto a second service that
    // commodity 1 rides; relaxed capacities keep it on the first service,
    // which it shares with commodity 2.
    Instance inst;
    inst.commodities = {{0, "A", "B", ""}, {1, "A", "C", ""}, {2, "B", "C", ""}};
    inst.paths = {
        {1, {0}, 1, Rational(1), Rational(1), false, {"T1"}},
        {2, {0}, 5, Rational(1), Rational(3), false, {"T2"}},
        {3, {1}, 5, Rational(1), Rational(1), false, {"T2"}},
        {4, {2}, 5, Rational(1), Rational(1), false, {"T1"}},
        {5, {0}, std::nullopt, Rational(0), Rational(20), true, {}},
        {6, {1}, std::nullopt, Rational(0), Rational(20), true, {}},
        {7, {2}, std::nullopt, Rational(0), Rational(20), true, {}},
    };
    inst.forecasts = DemandMatrix(2, 3, 2);
    inst.reindex();
    REQUIRE(validate_instance(inst).empty());

    Clustering cr = cluster_cr(inst);
    REQUIRE(cr.clusters.size() == 1);
    CHECK(cr.clusters[0] == std::vector<int>{0, 1, 2});

    Clustering cru = cluster_cru(inst);
    CHECK(cru.method == "cru");
    REQUIRE(cru.clusters.size() == 2);
    CHECK(cru.clusters[0] == std::vector<int>{0, 2});
    CHECK(cru.clusters[1] == std::vector<int>{1});
}

TEST_CASE("service_groups lists candidate groups largest first") {
    Instance inst = load_instance_file("data/metrics4.json");
    auto groups = service_groups(inst);
    REQUIRE(groups.size() == 3);
    CHECK(groups[0] == std::vector<int>{0, 1, 2, 3});  // commodity 0 reaches everyone
    CHECK(groups[1] == std::vector<int>{0, 1, 2});
    CHECK(groups[2] == std::vector<int>{0, 1, 3});

    Instance pairs = parametrized_instance(
        4, 2, [](int) { return std::vector<long long>{2, 2}; },
        [](int k) { return std::vector<std::string>{k < 2 ? "S1" : "S2"}; });
    auto g2 = service_groups(pairs);
    REQUIRE(g2.size() == 2);
    CHECK(g2[0] == std::vector<int>{0, 1});
    CHECK(g2[1] == std::vector<int>{2, 3});

    Instance lonely = parametrized_instance(
        2, 2, [](int) { return std::vector<long long>{2, 2}; },
        [](int k) { return std::vector<std::string>{k == 0 ? "S1" : "S2"}; });
    CHECK(service_groups(lonely) == std::vector<std::vector<int>>{{0}, {1}});
}

TEST_CASE("service clusterings start from the biggest candidate group") {
    std::mt19937_64 rng(2718);
    testsupport::RandomInstanceOptions opt;
    opt.max_commodities = 6;
    opt.max_regular_paths = 10;
    for (int trial = 0; trial < 30; ++trial) {
        Instance inst = testsupport::make_random_instance(rng, opt);
        for (bool relax : {false, true}) {
            auto groups = service_groups(inst, relax);
            Clustering c = relax ? cluster_cru(inst) : cluster_cr(inst);
            if (groups.empty() || groups.front().size() < 2) continue;
            REQUIRE_FALSE(c.clusters.empty());
            CHECK(c.clusters.front() == groups.front());
        }
    }
}

TEST_CASE("all clusterings partition random instances") {
    std::mt19937_64 rng(5150);
    testsupport::RandomInstanceOptions opt;
    opt.max_commodities = 5;
    opt.max_regular_paths = 8;
    for (int trial = 0; trial < 30; ++trial) {
        Instance inst = testsupport::make_random_instance(rng, opt);
        for (const Clustering& c :
             {cluster_cv(inst), cluster_cr(inst), cluster_cru(inst), singleton_clustering(inst),
              global_clustering(inst)}) {
            auto bad = testsupport::partition_violation(c, inst);
            if (bad) FAIL(c.method, ": ", *bad);
        }
    }
}

TEST_CASE("expand spreads cluster values and clamps to member bounds") {
    Instance inst = parametrized_instance(
        2, 2,
        [](int k) {
            return k == 0 ? std::vector<long long>{1, 3} : std::vector<long long>{0, 4};
        },
        [](int) { return std::vector<std::string>{"S"}; });
    // bounds: commodity 0 -> (1/2, 3/2); commodity 1 -> (0, 2)
    Clustering global = global_clustering(inst);

    DeviationVector dv = expand(global, {Rational(1)}, inst);
    CHECK(dv.alpha == std::vector<Rational>{Rational(1), Rational(1)});

    dv = expand(global, {Rational(7, 4)}, inst);
    CHECK(dv.alpha[0] == Rational(3, 2));  // clamped
    CHECK(dv.alpha[1] == Rational(7, 4));

    dv = expand(global, {Rational(-1)}, inst);
    CHECK(dv.alpha[0] == Rational(1, 2));
    CHECK(dv.alpha[1] == Rational(0));

    Clustering singles = singleton_clustering(inst);
    dv = expand(singles, {Rational(1), Rational(2)}, inst);
    CHECK(dv.alpha == std::vector<Rational>{Rational(1), Rational(2)});

    CHECK_THROWS_AS(expand(singles, {Rational(1)}, inst), std::invalid_argument);
}

TEST_CASE("expand pins frozen commodities to one") {
    Instance inst = parametrized_instance(
        2, 2,
        [](int k) {
            return k == 0 ? std::vector<long long>{2, 2} : std::vector<long long>{0, 0};
        },
        [](int) { return std::vector<std::string>{"S"}; });
    Clustering global = global_clustering(inst);
    REQUIRE(global.clusters == std::vector<std::vector<int>>{{0}});
    DeviationVector dv = expand(global, {Rational(1, 2)}, inst);
    CHECK(dv.alpha[0] == Rational(1));  // constant series: bounds (1,1)
    CHECK(dv.alpha[1] == Rational(1));
    CHECK(dv.is_frozen(1));
}

TEST_CASE("clustering JSON round trip") {
    Clustering c{{{0, 1}, {2}}, "cr"};
    Clustering back = clustering_from_json(clustering_to_json(c));
    CHECK(back.method == "cr");
    CHECK(back.clusters == c.clusters);
    CHECK_THROWS_AS(clustering_from_json("{}"), ParseError);
}
