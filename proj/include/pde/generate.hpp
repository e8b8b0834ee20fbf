#pragma once

// Synthetic instance generator.
//
// Commodities are grouped into "corridors" whose members share service labels
// (and, for the non-primary paths, share capacity on joint paths). The average
// corridor size equals the requested commodities-per-service target, which is
// what tau measures, and corridor mates are exactly the label-sharing partners
// kappa counts. Path capacity is capacity_ratio times the mean demand the path
// serves, so the ratio directly controls how much demand spills to outsourcing:
// large ratios leave the rounded-mean plan fully self-served, small ones force
// partial outsourcing.

#include <cstdint>

#include "pde/model.hpp"
#include "pde/rational.hpp"

namespace pde {

struct GeneratorSpec {
    int commodities = 4;
    int periods = 6;
    int paths_per_commodity = 3;  // including the commodity's outsourcing path
    double tau_target = 2.0;      // average commodities per service label; must be in [1, K]
    Rational capacity_ratio = Rational(2);
    long long demand_lo = 1, demand_hi = 9;
    long long design_lo = 5, design_hi = 30;
    long long flow_lo = 1, flow_hi = 8;
    // Outsourcing flow cost = flow_hi + premium. A large premium means any
    // built capacity is worth paying for; a small one leaves low-value paths
    // closed, with their demand share outsourced.
    long long outsourcing_premium = 40;
    bool with_observed = true;

    // Capacity 10x the served mean demand never binds, the flat flow cost
    // makes the design choice volume-independent, and the premium exceeds
    // every design cost so built paths always beat outsourcing.
    static GeneratorSpec uncapacitated() {
        GeneratorSpec s;
        s.capacity_ratio = Rational(10);
        s.flow_lo = s.flow_hi = 3;
        s.outsourcing_premium = s.design_hi + 10;
        return s;
    }

    // Paths hold about half the mean demand they serve and outsourcing is only
    // mildly expensive: plans built for the peak pay for capacity that sits
    // idle most periods, while lean plans spill their overflow.
    static GeneratorSpec tight() {
        GeneratorSpec s;
        s.capacity_ratio = Rational(1, 2);
        s.outsourcing_premium = 6;
        return s;
    }
};

Instance generate_instance(const GeneratorSpec& spec, std::uint64_t seed);

}  // namespace pde
