#include "pde/periodic.hpp"

#include <algorithm>
#include <stdexcept>

namespace pde {

const char* mapping_name(Mapping m) {
    switch (m) {
        case Mapping::max: return "max";
        case Mapping::mean: return "mean";
        case Mapping::q2: return "q2";
        case Mapping::q3: return "q3";
    }
    return "?";
}

Mapping mapping_from_name(const std::string& name) {
    if (name == "max") return Mapping::max;
    if (name == "mean") return Mapping::mean;
    if (name == "q2") return Mapping::q2;
    if (name == "q3") return Mapping::q3;
    throw std::invalid_argument("unknown mapping '" + name + "'");
}

namespace {

/// Linear interpolation at position (T-1)*q on the order statistics.
Rational quantile(std::vector<long long> values, const Rational& q) {
    std::sort(values.begin(), values.end());
    const int T = static_cast<int>(values.size());
    Rational pos = Rational(T - 1) * q;
    long long i = pos.floor_int();
    Rational frac = pos - Rational(i);
    Rational lo(values[static_cast<size_t>(i)]);
    if (frac.is_zero() || i + 1 >= T) return lo;
    Rational hi(values[static_cast<size_t>(i) + 1]);
    return lo + frac * (hi - lo);
}

}  // namespace

PeriodicDemand mapping(const Instance& inst, Mapping which) {
    const int K = inst.num_commodities();
    PeriodicDemand out;
    out.y_p.resize(static_cast<size_t>(K));
    auto stats = demand_stats(inst);
    for (int k = 0; k < K; ++k) {
        std::vector<long long> series = inst.forecasts.column(k);
        long long v = 0;
        switch (which) {
            case Mapping::max: v = stats[static_cast<size_t>(k)].max; break;
            case Mapping::mean: v = stats[static_cast<size_t>(k)].mean.ceil_int(); break;
            case Mapping::q2: v = quantile(series, Rational(1, 2)).ceil_int(); break;
            case Mapping::q3: v = quantile(series, Rational(3, 4)).ceil_int(); break;
        }
        out.y_p[static_cast<size_t>(k)] = v;
    }
    return out;
}

std::vector<std::pair<Rational, Rational>> alpha_bounds(const Instance& inst) {
    auto stats = demand_stats(inst);
    std::vector<std::pair<Rational, Rational>> out;
    out.reserve(stats.size());
    for (const CommodityStats& s : stats) {
        if (s.mean.is_zero())
            out.emplace_back(Rational(1), Rational(1));
        else
            out.emplace_back(Rational(s.min) / s.mean, Rational(s.max) / s.mean);
    }
    return out;
}

DeviationVector unit_deviation(const Instance& inst) {
    DeviationVector dv;
    dv.bounds = alpha_bounds(inst);
    dv.alpha.assign(dv.bounds.size(), Rational(1));
    dv.frozen.assign(dv.bounds.size(), 0);
    auto stats = demand_stats(inst);
    for (size_t k = 0; k < stats.size(); ++k)
        if (stats[k].mean.is_zero()) dv.frozen[k] = 1;
    return dv;
}

PeriodicDemand alpha_to_demand(const Instance& inst, const DeviationVector& dv) {
    auto stats = demand_stats(inst);
    PeriodicDemand out;
    out.y_p.resize(stats.size());
    for (size_t k = 0; k < stats.size(); ++k) {
        if (dv.frozen[k]) {
            out.y_p[k] = 0;
            continue;
        }
        long long v = round_half_up_product(dv.alpha[k], stats[k].mean);
        out.y_p[k] = std::max(v, 0LL);
    }
    return out;
}

std::pair<Rational, Rational> scalar_bounds(const Instance& inst) {
    auto bounds = alpha_bounds(inst);
    auto stats = demand_stats(inst);
    bool any = false;
    Rational lo, hi;
    for (size_t k = 0; k < bounds.size(); ++k) {
        if (stats[k].mean.is_zero()) continue;
        if (!any) {
            lo = bounds[k].first;
            hi = bounds[k].second;
            any = true;
        } else {
            lo = min(lo, bounds[k].first);
            hi = max(hi, bounds[k].second);
        }
    }
    if (!any) return {Rational(1), Rational(1)};
    return {lo, hi};
}

}  // namespace pde
