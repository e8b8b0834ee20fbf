#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pde/rational.hpp"

namespace pde {

/// A transport demand: origin-destination pair plus a free-form type tag.
/// Commodity ids are unique and contiguous from 0, so id == position.
struct Commodity {
    int id = 0;
    std::string origin;
    std::string destination;
    std::string kind;
};

/// A routing option for one or more commodities. Outsourcing paths carry
/// overflow demand: they have zero design cost, no capacity limit, and a
/// flow cost above every regular path serving the same commodity.
struct Path {
    int id = 0;
    std::vector<int> served_commodities;      // sorted, unique
    std::optional<long long> capacity;        // nullopt = unbounded
    Rational design_cost;
    Rational flow_cost;                       // outsourcing paths: the outsourcing rate
    bool outsourcing = false;
    std::vector<std::string> services;        // labels of trains/legs traversed

    bool serves(int commodity) const;
};

/// T x K nonnegative integer demand matrix, row-major (rows = periods).
class DemandMatrix {
public:
    DemandMatrix() = default;
    DemandMatrix(int periods, int commodities, long long fill = 0);

    int periods() const { return periods_; }
    int commodities() const { return commodities_; }

    long long at(int t, int k) const { return values_[static_cast<size_t>(t) * commodities_ + k]; }
    long long& at(int t, int k) { return values_[static_cast<size_t>(t) * commodities_ + k]; }

    /// One commodity's demand series over the horizon.
    std::vector<long long> column(int k) const;

    friend bool operator==(const DemandMatrix&, const DemandMatrix&) = default;

private:
    int periods_ = 0;
    int commodities_ = 0;
    std::vector<long long> values_;
};

struct Instance {
    std::vector<Commodity> commodities;
    std::vector<Path> paths;
    DemandMatrix forecasts;
    std::optional<DemandMatrix> observed;

    int num_commodities() const { return static_cast<int>(commodities.size()); }
    int num_paths() const { return static_cast<int>(paths.size()); }
    int periods() const { return forecasts.periods(); }

    /// Indices (positions in `paths`) of the paths serving commodity k.
    const std::vector<int>& paths_of(int k) const;

    /// Position in `paths` of the path with the given external id.
    int path_index(int path_id) const;

    /// Rebuilds the commodity->paths index; called by the loader and by
    /// anything that edits `paths` in place.
    void reindex();

private:
    std::vector<std::vector<int>> paths_by_commodity_;
};

/// One violated invariant, reported as data rather than thrown.
struct Violation {
    std::string message;
    std::optional<int> path_id;
    std::optional<int> commodity_id;

    std::string str() const;
};

/// Checks every structural invariant; empty result means the instance is
/// well-formed.
std::vector<Violation> validate_instance(const Instance& inst);

struct CommodityStats {
    Rational mean;       // exact (1/T) * sum_t y_tk
    long long min = 0;
    long long max = 0;
};

/// Per-commodity mean/min/max of the forecast series.
std::vector<CommodityStats> demand_stats(const Instance& inst);

/// Raised on malformed documents; `context` names the offending field.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& context, const std::string& what)
        : std::runtime_error(context + ": " + what) {}
};

/// Raised when a parsed document fails validation.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::vector<Violation>& violations);
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

/// JSON document round trip. load_instance parses, indexes and validates
/// (throws ParseError / ValidationError); save produces the canonical form.
Instance load_instance_from_string(const std::string& json_text);
Instance load_instance_file(const std::string& filename);
std::string save_instance_to_string(const Instance& inst);
void save_instance_file(const Instance& inst, const std::string& filename);

}  // namespace pde
