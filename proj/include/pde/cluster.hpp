#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pde/model.hpp"
#include "pde/periodic.hpp"

namespace pde {

/// A partition of the non-frozen commodities. All coefficients within one
/// cluster move together during clustered search.
struct Clustering {
    std::vector<std::vector<int>> clusters;  // sorted ids, disjoint, nonempty
    std::string method;                      // cv | cr | cru | singleton | global

    int size() const { return static_cast<int>(clusters.size()); }
};

/// Demand variability per commodity: std(series) / mean(series) with the
/// population variance. Zero-mean commodities are omitted.
std::vector<std::pair<int, double>> coeff_variation(const Instance& inst);

/// Buckets commodities by percentiles of their coefficient of variation.
/// n_c = 5 uses breakpoints at the 25th/50th/75th/90th percentiles; other
/// n_c use equal-probability breakpoints. Empty buckets are dropped.
Clustering cluster_cv(const Instance& inst, int n_c = 5);

/// Service-based grouping: route the mean-demand plan, join commodities
/// whose used (positive-flow, non-outsourcing) paths share a service label,
/// then repeatedly select the largest multi-member group disjoint from the
/// previous picks; everything left over forms one final cluster.
Clustering cluster_cr(const Instance& inst);

/// cluster_cr with path capacities lifted while routing the mean-demand
/// plan (design costs kept), exposing sharing hidden by tight capacities.
Clustering cluster_cru(const Instance& inst);

/// The candidate groups cluster_cr/cluster_cru choose from: for each
/// non-frozen commodity, itself plus every commodity it shares a used
/// service label with. Deduplicated, largest first (ties lexicographic),
/// so the first cluster of the service-based methods is always front()
/// whenever front() has more than one member.
std::vector<std::vector<int>> service_groups(const Instance& inst, bool relax_capacities = false);

/// One cluster per non-frozen commodity (independent coefficients).
Clustering singleton_clustering(const Instance& inst);

/// A single cluster holding every non-frozen commodity (one shared
/// coefficient, the scalar reduction).
Clustering global_clustering(const Instance& inst);

/// Spreads one coefficient per cluster onto the member commodities, clamped
/// to each member's own bounds; frozen commodities stay at 1.
DeviationVector expand(const Clustering& clustering, const std::vector<Rational>& cluster_alphas,
                       const Instance& inst);

std::string clustering_to_json(const Clustering& clustering);
Clustering clustering_from_json(const std::string& text);

}  // namespace pde
