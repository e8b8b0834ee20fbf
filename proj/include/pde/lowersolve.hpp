#pragma once

#include <vector>

#include "pde/model.hpp"

namespace pde {

/// Open/closed status per path, by position in Instance::paths. Outsourcing
/// paths are always open.
struct Design {
    std::vector<char> open;

    bool is_open(int p) const { return open[static_cast<size_t>(p)] != 0; }
};

Design all_open(const Instance& inst);

/// Opens the listed external path ids plus every outsourcing path.
Design design_from_path_ids(const Instance& inst, const std::vector<int>& ids);

/// Sorted external ids of the open non-outsourcing paths ("paths built").
std::vector<int> built_path_ids(const Instance& inst, const Design& design);

/// Integral routing of one demand vector. flow[p][i] is the amount of
/// commodity served_commodities[i] carried by path p (positions align with
/// Instance::paths and Path::served_commodities).
struct FlowSolution {
    std::vector<std::vector<long long>> flow;
    Rational flow_cost;  // regular paths
    Rational out_cost;   // outsourcing paths

    Rational total_cost() const { return flow_cost + out_cost; }
    long long flow_for(const Instance& inst, int path_pos, int commodity) const;
    long long path_total(int path_pos) const;
};

/// Minimum-cost routing of `demand` over the open paths of `design`.
/// Bipartite min-cost flow (commodities -> open paths -> sink), solved by
/// successive shortest augmenting paths with potentials; supplies and
/// capacities are integers, so the optimum is integral.
FlowSolution solve_flow(const Instance& inst, const Design& design,
                        const std::vector<long long>& demand);

struct McndSolution {
    Design design;
    FlowSolution flows;
    Rational design_cost;
    Rational flow_cost;  // flows.total_cost()
    Rational objective;  // design_cost + flow_cost
};

/// Exact fixed-charge design for one periodic demand vector: branch and
/// bound over the open/closed status of non-outsourcing paths, bounding each
/// node by committed design cost plus the flow cost with all undecided paths
/// open. Equal-cost optima resolve to the lexicographically smallest open
/// path-id set.
McndSolution solve_mcnd(const Instance& inst, const std::vector<long long>& y_p);

struct WmcndSolution {
    std::vector<FlowSolution> per_period;
    Rational cost;  // sum over periods
};

/// Routes every period of `demands` independently on the fixed design.
WmcndSolution solve_wmcnd(const Instance& inst, const Design& design,
                          const DemandMatrix& demands);

struct CostBreakdown {
    Design design;
    FlowSolution mcnd_flows;
    Rational design_cost;      // sum of open design costs
    Rational mcnd_flow_cost;   // flow cost of the design-stage solution
    Rational wmcnd_cost;       // sum of per-period routing costs
    std::vector<Rational> per_period;
    Rational c_pde;            // periods * design_cost + wmcnd_cost
};

/// Full plan evaluation: design for y_p, then per-period routing of
/// `demands` on that design. Pass forecasts for the planned cost, observed
/// demand for the realized cost.
CostBreakdown evaluate_cpde(const Instance& inst, const std::vector<long long>& y_p,
                            const DemandMatrix& demands);

/// Reference optimum by exhaustive enumeration of all designs; refuses
/// instances with more than 12 non-outsourcing paths or total demand above
/// 50. Test oracle only.
Rational oracle_mcnd(const Instance& inst, const std::vector<long long>& y_p);

}  // namespace pde
