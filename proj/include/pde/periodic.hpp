#pragma once

#include <utility>
#include <vector>

#include "pde/model.hpp"

namespace pde {

/// Fixed rules turning a forecast series into one periodic demand value.
enum class Mapping { max, mean, q2, q3 };

const char* mapping_name(Mapping m);
Mapping mapping_from_name(const std::string& name);

struct PeriodicDemand {
    std::vector<long long> y_p;  // per commodity
};

/// Per-commodity deviation coefficients with their feasible box. Commodities
/// with zero mean demand are frozen at alpha = 1 and always map to zero.
struct DeviationVector {
    std::vector<Rational> alpha;
    std::vector<std::pair<Rational, Rational>> bounds;  // (alpha_min, alpha_max)
    std::vector<char> frozen;

    bool is_frozen(int k) const { return frozen[static_cast<size_t>(k)] != 0; }
};

/// Applies one of the four fixed mappings to every commodity's forecast
/// series. Quantiles interpolate linearly at position (T-1)*q on the sorted
/// series; quantile and mean values round up to the next integer.
PeriodicDemand mapping(const Instance& inst, Mapping which);

/// (alpha_min_k, alpha_max_k) = (y_min_k, y_max_k) / y_mean_k as exact
/// rationals; zero-mean commodities get (1, 1).
std::vector<std::pair<Rational, Rational>> alpha_bounds(const Instance& inst);

/// The all-ones starting point with bounds and frozen set filled in.
DeviationVector unit_deviation(const Instance& inst);

/// y_p_k = round-half-up(alpha_k * y_mean_k); frozen commodities map to 0.
PeriodicDemand alpha_to_demand(const Instance& inst, const DeviationVector& dv);

/// Widest single-coefficient interval: (min_k alpha_min_k, max_k alpha_max_k)
/// over non-frozen commodities; (1, 1) when everything is frozen.
std::pair<Rational, Rational> scalar_bounds(const Instance& inst);

}  // namespace pde
