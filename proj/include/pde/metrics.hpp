#pragma once

// Resource-sharing metrics and gap-to-best reporting.
//
// tau:   average number of distinct commodities incident to a service label
//        (via any path that carries the label and serves the commodity).
// kappa: average number of other commodities a commodity shares at least one
//        service label with.
// outsourced_set: commodities that end up with positive outsourcing flow when
//        the design problem is solved for the rounded mean demand (alpha = 1).
//
// Both averages are exact rationals; instances without any service label have
// no meaningful value and report "absent".

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pde/model.hpp"
#include "pde/rational.hpp"

namespace pde {

std::optional<Rational> tau(const Instance& inst);
std::optional<Rational> kappa(const Instance& inst);
std::set<int> outsourced_set(const Instance& inst);

struct InstanceProfile {
    std::optional<Rational> tau;
    std::optional<Rational> kappa;
    std::set<int> k_l;
    int num_commodities = 0;
    int num_outsourced = 0;    // |k_l|
    int num_regular_paths = 0; // candidate design paths (outsourcing excluded)
};

InstanceProfile profile_instance(const Instance& inst);

// Gap to the best cost in a result set, as integer percent (round half up).
// When the best cost is zero the relative gap is undefined and left absent.
struct GapRow {
    std::string label;
    Rational cost;
    std::optional<long long> gap_pct;
};

std::vector<GapRow> gap_table(const std::vector<std::pair<std::string, Rational>>& results);

// CSV with header "label,cost,gap_pct"; absent gaps render as empty cells.
std::string gap_table_csv(const std::vector<GapRow>& rows);

std::string profile_to_json(const InstanceProfile& p);
std::string gap_table_to_json(const std::vector<GapRow>& rows);

}  // namespace pde
