#include "pde/generate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace pde {

namespace {

long long randint(std::mt19937_64& rng, long long lo, long long hi) {
    return lo + static_cast<long long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

void check(const GeneratorSpec& s) {
    if (s.commodities < 1) throw std::invalid_argument("need at least one commodity");
    if (s.periods < 1) throw std::invalid_argument("need at least one period");
    if (s.paths_per_commodity < 2)
        throw std::invalid_argument("need at least two paths per commodity (one plus outsourcing)");
    if (!(s.tau_target >= 1.0) || s.tau_target > static_cast<double>(s.commodities))
        throw std::invalid_argument("commodities-per-service target must lie in [1, K]");
    if (s.demand_lo < 0 || s.demand_hi < s.demand_lo)
        throw std::invalid_argument("bad demand range");
    if (s.design_lo < 0 || s.design_hi < s.design_lo)
        throw std::invalid_argument("bad design cost range");
    if (s.flow_lo < 0 || s.flow_hi < s.flow_lo) throw std::invalid_argument("bad flow cost range");
    if (s.outsourcing_premium < 1)
        throw std::invalid_argument("outsourcing premium must be at least 1");
    if (!(s.capacity_ratio > Rational(0)))
        throw std::invalid_argument("capacity ratio must be positive");
}

DemandMatrix draw_matrix(std::mt19937_64& rng, const GeneratorSpec& s) {
    DemandMatrix m(s.periods, s.commodities);
    for (int t = 0; t < s.periods; ++t)
        for (int k = 0; k < s.commodities; ++k) m.at(t, k) = randint(rng, s.demand_lo, s.demand_hi);
    return m;
}

}  // namespace

Instance generate_instance(const GeneratorSpec& spec, std::uint64_t seed) {
    check(spec);
    std::mt19937_64 rng(seed);

    const int K = spec.commodities;
    Instance inst;
    for (int k = 0; k < K; ++k)
        inst.commodities.push_back({k, "N" + std::to_string(k), "N" + std::to_string(k + 1), "container"});

    inst.forecasts = draw_matrix(rng, spec);
    if (spec.with_observed) inst.observed = draw_matrix(rng, spec);

    std::vector<Rational> mean(static_cast<size_t>(K), Rational(0));
    for (int k = 0; k < K; ++k) {
        long long total = 0;
        for (int t = 0; t < spec.periods; ++t) total += inst.forecasts.at(t, k);
        mean[static_cast<size_t>(k)] = Rational(total, spec.periods);
    }

    // Consecutive corridors of roughly tau_target commodities each.
    const int corridors = std::max(1, static_cast<int>(std::llround(K / spec.tau_target)));
    std::vector<int> corridor_of(static_cast<size_t>(K));
    std::vector<std::pair<int, int>> span(static_cast<size_t>(corridors));  // [start, size)
    for (int c = 0, start = 0; c < corridors; ++c) {
        int size = K / corridors + (c < K % corridors ? 1 : 0);
        span[static_cast<size_t>(c)] = {start, size};
        for (int k = start; k < start + size; ++k) corridor_of[static_cast<size_t>(k)] = c;
        start += size;
    }

    const int regular = spec.paths_per_commodity - 1;
    int next_id = 1;
    for (int k = 0; k < K; ++k) {
        const int c = corridor_of[static_cast<size_t>(k)];
        const auto [start, size] = span[static_cast<size_t>(c)];
        for (int r = 0; r < regular; ++r) {
            Path p;
            p.id = next_id++;
            p.served_commodities = {k};
            if (r >= 1 && size > 1) {
                int mate = start + (k - start + r) % size;
                if (mate != k) p.served_commodities.push_back(mate);
            }
            std::sort(p.served_commodities.begin(), p.served_commodities.end());
            p.design_cost = Rational(randint(rng, spec.design_lo, spec.design_hi));
            p.flow_cost = Rational(randint(rng, spec.flow_lo, spec.flow_hi));
            p.outsourcing = false;
            p.services = {"T" + std::to_string(c) + "a"};
            if (r % 2 == 1) p.services.push_back("T" + std::to_string(c) + "b");
            Rational served_mean(0);
            for (int s : p.served_commodities) served_mean = served_mean + mean[static_cast<size_t>(s)];
            p.capacity = std::max<long long>(1, (spec.capacity_ratio * served_mean).ceil_int());
            inst.paths.push_back(std::move(p));
        }
    }

    const Rational outsourcing_cost(spec.flow_hi + spec.outsourcing_premium);
    for (int k = 0; k < K; ++k) {
        Path p;
        p.id = next_id++;
        p.served_commodities = {k};
        p.capacity = std::nullopt;
        p.design_cost = Rational(0);
        p.flow_cost = outsourcing_cost;
        p.outsourcing = true;
        inst.paths.push_back(std::move(p));
    }

    inst.reindex();
    auto violations = validate_instance(inst);
    if (!violations.empty())
        throw std::logic_error("generator produced an invalid instance: " + violations.front().str());
    return inst;
}

}  // namespace pde
