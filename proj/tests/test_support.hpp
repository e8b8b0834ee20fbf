#pragma once

// Helpers shared by the unit tests and the acceptance suite: small random
// instances inside the enumeration-oracle cap, a brute-force flow-split
// reference for solve_flow, and post-hoc flow feasibility checks.

#include <algorithm>
#include <climits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pde/cluster.hpp"
#include "pde/lowersolve.hpp"
#include "pde/model.hpp"
#include "pde/periodic.hpp"

namespace testsupport {

struct RandomInstanceOptions {
    int max_commodities = 3;
    int max_regular_paths = 6;
    long long max_demand = 8;   // per commodity per period
    int periods = 4;
    bool with_observed = false;
};

// A valid instance with one outsourcing path per commodity and randomly
// shaped regular paths. Costs include zero design costs and duplicate flow
// costs on purpose, to stress tie-breaking.
inline pde::Instance make_random_instance(std::mt19937_64& rng,
                                          const RandomInstanceOptions& opt = {}) {
    using pde::Rational;
    auto randint = [&](long long lo, long long hi) {
        return static_cast<long long>(std::uniform_int_distribution<long long>(lo, hi)(rng));
    };

    pde::Instance inst;
    const int K = static_cast<int>(randint(1, opt.max_commodities));
    const char* nodes[] = {"A", "B", "C", "D", "E", "F"};
    for (int k = 0; k < K; ++k)
        inst.commodities.push_back({k, nodes[randint(0, 5)], nodes[randint(0, 5)], "box"});

    const char* labels[] = {"S1", "S2", "S3", "S4"};
    int next_id = 1;
    const int P = static_cast<int>(randint(K, opt.max_regular_paths));
    for (int p = 0; p < P; ++p) {
        pde::Path path;
        path.id = next_id++;
        // Nonempty random subset of commodities; bias toward the p-th
        // commodity so most commodities get some regular coverage.
        for (int k = 0; k < K; ++k)
            if (k == p % K || randint(0, 2) == 0) path.served_commodities.push_back(k);
        path.capacity = randint(1, opt.max_demand + 2);
        path.design_cost = Rational(randint(0, 3) == 0 ? 0 : randint(1, 30));
        path.flow_cost = Rational(randint(0, 19), 2);  // halves, in [0, 9.5]
        path.outsourcing = false;
        int n_services = static_cast<int>(randint(1, 2));
        for (int s = 0; s < n_services; ++s) path.services.push_back(labels[randint(0, 3)]);
        std::sort(path.services.begin(), path.services.end());
        path.services.erase(std::unique(path.services.begin(), path.services.end()),
                            path.services.end());
        inst.paths.push_back(std::move(path));
    }
    for (int k = 0; k < K; ++k) {
        pde::Path out;
        out.id = next_id++;
        out.served_commodities = {k};
        out.capacity = std::nullopt;
        out.design_cost = Rational(0);
        out.flow_cost = Rational(20 + randint(0, 10));
        out.outsourcing = true;
        inst.paths.push_back(std::move(out));
    }

    inst.forecasts = pde::DemandMatrix(opt.periods, K);
    for (int t = 0; t < opt.periods; ++t)
        for (int k = 0; k < K; ++k) inst.forecasts.at(t, k) = randint(0, opt.max_demand);
    if (opt.with_observed) {
        inst.observed = pde::DemandMatrix(opt.periods, K);
        for (int t = 0; t < opt.periods; ++t)
            for (int k = 0; k < K; ++k) inst.observed->at(t, k) = randint(0, opt.max_demand);
    }
    inst.reindex();
    return inst;
}

// Exhaustive minimum over all integral splits of each commodity's demand
// across its open paths, respecting joint path capacities. Exponential;
// keep demands and path counts tiny.
inline std::optional<pde::Rational> brute_force_flow_cost(const pde::Instance& inst,
                                                          const pde::Design& design,
                                                          const std::vector<long long>& demand) {
    using pde::Rational;
    const int K = inst.num_commodities();
    std::vector<long long> cap(inst.paths.size());
    for (size_t p = 0; p < inst.paths.size(); ++p)
        cap[p] = inst.paths[p].capacity ? *inst.paths[p].capacity : LLONG_MAX;

    std::optional<Rational> best;
    std::vector<std::vector<int>> open_paths(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k)
        for (int p : inst.paths_of(k))
            if (design.is_open(p)) open_paths[static_cast<size_t>(k)].push_back(p);

    // assign(k): distribute demand[k] over open_paths[k], then recurse.
    std::vector<long long> used(inst.paths.size(), 0);
    auto assign = [&](auto&& self, int k, Rational cost_so_far) -> void {
        if (k == K) {
            if (!best || cost_so_far < *best) best = cost_so_far;
            return;
        }
        const auto& paths = open_paths[static_cast<size_t>(k)];
        long long need = demand[static_cast<size_t>(k)];
        if (need == 0) {
            self(self, k + 1, cost_so_far);
            return;
        }
        if (paths.empty()) return;  // infeasible branch
        auto split = [&](auto&& split_self, size_t i, long long left, Rational cost) -> void {
            if (i + 1 == paths.size()) {
                int p = paths[i];
                if (cap[static_cast<size_t>(p)] - used[static_cast<size_t>(p)] < left) return;
                used[static_cast<size_t>(p)] += left;
                self(self, k + 1, cost + Rational(left) * inst.paths[static_cast<size_t>(p)].flow_cost);
                used[static_cast<size_t>(p)] -= left;
                return;
            }
            int p = paths[i];
            long long room = std::min(left, cap[static_cast<size_t>(p)] - used[static_cast<size_t>(p)]);
            for (long long x = 0; x <= room; ++x) {
                used[static_cast<size_t>(p)] += x;
                split_self(split_self, i + 1, left - x,
                           cost + Rational(x) * inst.paths[static_cast<size_t>(p)].flow_cost);
                used[static_cast<size_t>(p)] -= x;
            }
        };
        split(split, 0, need, cost_so_far);
    };
    assign(assign, 0, Rational(0));
    return best;
}

// Empty result means the flow satisfies conservation, capacity and
// closed-path constraints for the given demand.
inline std::optional<std::string> flow_violation(const pde::Instance& inst,
                                                 const pde::Design& design,
                                                 const std::vector<long long>& demand,
                                                 const pde::FlowSolution& sol) {
    for (int k = 0; k < inst.num_commodities(); ++k) {
        long long sum = 0;
        for (int p : inst.paths_of(k)) sum += sol.flow_for(inst, p, k);
        if (sum != demand[static_cast<size_t>(k)])
            return "commodity " + std::to_string(k) + " routed " + std::to_string(sum) +
                   " of " + std::to_string(demand[static_cast<size_t>(k)]);
    }
    for (int p = 0; p < inst.num_paths(); ++p) {
        long long total = sol.path_total(p);
        if (total < 0) return "negative flow on path " + std::to_string(inst.paths[static_cast<size_t>(p)].id);
        if (!design.is_open(p) && total != 0)
            return "flow on closed path " + std::to_string(inst.paths[static_cast<size_t>(p)].id);
        const auto& cap = inst.paths[static_cast<size_t>(p)].capacity;
        if (cap && total > *cap)
            return "capacity exceeded on path " + std::to_string(inst.paths[static_cast<size_t>(p)].id);
    }
    return std::nullopt;
}

// Empty result means the clustering is a partition of the commodities with
// positive mean demand: disjoint, complete, nonempty parts.
inline std::optional<std::string> partition_violation(const pde::Clustering& clustering,
                                                      const pde::Instance& inst) {
    auto stats = pde::demand_stats(inst);
    std::vector<int> count(static_cast<size_t>(inst.num_commodities()), 0);
    for (const auto& cluster : clustering.clusters) {
        if (cluster.empty()) return "empty cluster";
        for (int k : cluster) {
            if (k < 0 || k >= inst.num_commodities())
                return "cluster references unknown commodity " + std::to_string(k);
            ++count[static_cast<size_t>(k)];
        }
    }
    for (int k = 0; k < inst.num_commodities(); ++k) {
        bool frozen = stats[static_cast<size_t>(k)].mean.is_zero();
        int c = count[static_cast<size_t>(k)];
        if (frozen && c != 0) return "frozen commodity " + std::to_string(k) + " clustered";
        if (!frozen && c == 0) return "commodity " + std::to_string(k) + " not covered";
        if (!frozen && c > 1) return "commodity " + std::to_string(k) + " in several clusters";
    }
    return std::nullopt;
}

}  // namespace testsupport
