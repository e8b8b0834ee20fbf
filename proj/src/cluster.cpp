#include "pde/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "pde/lowersolve.hpp"

namespace pde {

namespace {

/// Squared coefficients of variation as exact rationals, one per non-frozen
/// commodity. Bucketing on squares is order-equivalent to bucketing on the
/// coefficients themselves and keeps the percentile comparisons exact.
std::vector<std::pair<int, Rational>> sigma_squared(const Instance& inst) {
    const int T = inst.periods();
    auto stats = demand_stats(inst);
    std::vector<std::pair<int, Rational>> out;
    for (int k = 0; k < inst.num_commodities(); ++k) {
        const Rational& mean = stats[static_cast<size_t>(k)].mean;
        if (mean.is_zero()) continue;
        Rational acc;
        for (int t = 0; t < T; ++t) {
            Rational d = Rational(inst.forecasts.at(t, k)) - mean;
            acc += d * d;
        }
        out.emplace_back(k, acc / Rational(T) / (mean * mean));
    }
    return out;
}

Rational rational_quantile(std::vector<Rational> xs, const Rational& q) {
    std::sort(xs.begin(), xs.end());
    const int n = static_cast<int>(xs.size());
    Rational pos = Rational(n - 1) * q;
    long long i = pos.floor_int();
    Rational frac = pos - Rational(i);
    Rational lo = xs[static_cast<size_t>(i)];
    if (frac.is_zero() || i + 1 >= n) return lo;
    return lo + frac * (xs[static_cast<size_t>(i) + 1] - lo);
}

std::vector<int> nonfrozen_ids(const Instance& inst) {
    auto stats = demand_stats(inst);
    std::vector<int> ids;
    for (int k = 0; k < inst.num_commodities(); ++k)
        if (!stats[static_cast<size_t>(k)].mean.is_zero()) ids.push_back(k);
    return ids;
}

std::vector<std::vector<int>> service_groups_impl(const Instance& inst, bool relax_capacities) {
    DeviationVector unit = unit_deviation(inst);
    PeriodicDemand y = alpha_to_demand(inst, unit);

    const Instance* work = &inst;
    Instance relaxed;
    if (relax_capacities) {
        relaxed = inst;
        long long total = std::accumulate(y.y_p.begin(), y.y_p.end(), 0LL) + 1;
        for (Path& p : relaxed.paths)
            if (!p.outsourcing) p.capacity = total;
        work = &relaxed;
    }
    McndSolution sol = solve_mcnd(*work, y.y_p);

    // Service labels each commodity actually rides on in the mean plan.
    const int K = inst.num_commodities();
    std::vector<std::set<std::string>> used(static_cast<size_t>(K));
    for (int p = 0; p < work->num_paths(); ++p) {
        const Path& path = work->paths[static_cast<size_t>(p)];
        if (path.outsourcing) continue;
        for (size_t i = 0; i < path.served_commodities.size(); ++i)
            if (sol.flows.flow[static_cast<size_t>(p)][i] > 0)
                used[static_cast<size_t>(path.served_commodities[i])].insert(path.services.begin(),
                                                                             path.services.end());
    }

    std::vector<int> active = nonfrozen_ids(inst);
    auto shares = [&](int a, int b) {
        const auto& sa = used[static_cast<size_t>(a)];
        const auto& sb = used[static_cast<size_t>(b)];
        for (const std::string& s : sa)
            if (sb.count(s)) return true;
        return false;
    };
    std::vector<std::vector<int>> groups;
    for (int k : active) {
        std::vector<int> g{k};
        for (int k2 : active)
            if (k2 != k && shares(k, k2)) g.push_back(k2);
        std::sort(g.begin(), g.end());
        groups.push_back(std::move(g));
    }
    return groups;
}

Clustering cluster_service_based(const Instance& inst, bool relax_capacities,
                                 const std::string& tag) {
    std::vector<std::vector<int>> groups = service_groups_impl(inst, relax_capacities);

    Clustering out;
    out.method = tag;
    std::set<int> covered;
    for (;;) {
        const std::vector<int>* pick = nullptr;
        for (const auto& g : groups) {
            if (g.size() < 2) continue;
            bool disjoint = true;
            for (int k : g)
                if (covered.count(k)) disjoint = false;
            if (!disjoint) continue;
            if (!pick || g.size() > pick->size() || (g.size() == pick->size() && g < *pick))
                pick = &g;
        }
        if (!pick) break;
        out.clusters.push_back(*pick);
        covered.insert(pick->begin(), pick->end());
    }
    std::vector<int> rest;
    for (int k : nonfrozen_ids(inst))
        if (!covered.count(k)) rest.push_back(k);
    if (!rest.empty()) out.clusters.push_back(std::move(rest));
    return out;
}

}  // namespace

std::vector<std::vector<int>> service_groups(const Instance& inst, bool relax_capacities) {
    std::vector<std::vector<int>> groups = service_groups_impl(inst, relax_capacities);
    std::sort(groups.begin(), groups.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a < b;
    });
    groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
    return groups;
}

std::vector<std::pair<int, double>> coeff_variation(const Instance& inst) {
    std::vector<std::pair<int, double>> out;
    for (const auto& [k, s2] : sigma_squared(inst))
        out.emplace_back(k, std::sqrt(s2.to_double()));
    return out;
}

Clustering cluster_cv(const Instance& inst, int n_c) {
    if (n_c < 1) throw std::invalid_argument("cluster count must be positive");
    auto s2 = sigma_squared(inst);
    if (s2.empty()) return {{}, "cv"};

    std::vector<Rational> values;
    for (const auto& [k, v] : s2) values.push_back(v);

    std::vector<Rational> breaks;
    if (n_c == 5) {
        for (const Rational& q : {Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(9, 10)})
            breaks.push_back(rational_quantile(values, q));
    } else {
        for (int e = 1; e < n_c; ++e)
            breaks.push_back(rational_quantile(values, Rational(e, n_c)));
    }

    std::vector<std::vector<int>> buckets(static_cast<size_t>(n_c));
    for (const auto& [k, v] : s2) {
        size_t b = breaks.size();
        for (size_t i = 0; i < breaks.size(); ++i)
            if (v <= breaks[i]) {
                b = i;
                break;
            }
        buckets[b].push_back(k);
    }

    Clustering out;
    out.method = "cv";
    for (auto& bucket : buckets)
        if (!bucket.empty()) out.clusters.push_back(std::move(bucket));
    return out;
}

Clustering cluster_cr(const Instance& inst) { return cluster_service_based(inst, false, "cr"); }

Clustering cluster_cru(const Instance& inst) { return cluster_service_based(inst, true, "cru"); }

Clustering singleton_clustering(const Instance& inst) {
    Clustering out;
    out.method = "singleton";
    for (int k : nonfrozen_ids(inst)) out.clusters.push_back({k});
    return out;
}

Clustering global_clustering(const Instance& inst) {
    Clustering out;
    out.method = "global";
    std::vector<int> all = nonfrozen_ids(inst);
    if (!all.empty()) out.clusters.push_back(std::move(all));
    return out;
}

DeviationVector expand(const Clustering& clustering, const std::vector<Rational>& cluster_alphas,
                       const Instance& inst) {
    if (cluster_alphas.size() != clustering.clusters.size())
        throw std::invalid_argument("need exactly one coefficient per cluster");
    DeviationVector dv = unit_deviation(inst);
    for (size_t i = 0; i < clustering.clusters.size(); ++i)
        for (int k : clustering.clusters[i]) {
            if (dv.is_frozen(k)) continue;
            const auto& [lo, hi] = dv.bounds[static_cast<size_t>(k)];
            dv.alpha[static_cast<size_t>(k)] = min(max(cluster_alphas[i], lo), hi);
        }
    return dv;
}

std::string clustering_to_json(const Clustering& clustering) {
    nlohmann::json doc;
    doc["method"] = clustering.method;
    doc["clusters"] = clustering.clusters;
    return doc.dump(2) + "\n";
}

Clustering clustering_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
        Clustering out;
        out.method = doc.at("method").get<std::string>();
        out.clusters = doc.at("clusters").get<std::vector<std::vector<int>>>();
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("clustering", e.what());
    }
}

}  // namespace pde
