#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pde/cluster.hpp"
#include "pde/lowersolve.hpp"
#include "pde/periodic.hpp"

namespace pde {

/// Memoizing front end to evaluate_cpde. Coefficient vectors that round to
/// the same periodic demand share one cached breakdown, and the solve
/// counter advances once per distinct demand vector — the cost metric the
/// experiments report. Safe for concurrent callers; the observer, if any,
/// fires on every evaluate() call (hits included) and must be thread-safe
/// itself when evaluations run concurrently.
class Evaluator {
public:
    Evaluator(const Instance& inst, const DemandMatrix& demands);

    const CostBreakdown& evaluate(const DeviationVector& dv);
    const CostBreakdown& evaluate_demand(const std::vector<long long>& y_p);

    long long lower_level_solves() const;
    const Instance& instance() const { return inst_; }
    const DemandMatrix& demands() const { return demands_; }

    void set_observer(std::function<void(const DeviationVector&, const CostBreakdown&)> observer) {
        observer_ = std::move(observer);
    }

private:
    const Instance& inst_;
    const DemandMatrix& demands_;
    std::map<std::vector<long long>, CostBreakdown> memo_;
    long long solves_ = 0;
    mutable std::mutex mu_;
    std::function<void(const DeviationVector&, const CostBreakdown&)> observer_;
};

/// Where the upper level moves: one coefficient per cluster. Scalar mode is
/// the single global cluster, full mode one cluster per commodity; every
/// point expands to a bounded DeviationVector the same way.
struct SearchSpace {
    enum class Mode { scalar, clustered, full };

    Mode mode = Mode::scalar;
    Clustering clustering;
    std::vector<std::pair<Rational, Rational>> bounds;  // per dimension

    int dimension() const { return clustering.size(); }

    static SearchSpace make_scalar(const Instance& inst);
    static SearchSpace make_full(const Instance& inst);
    static SearchSpace make_clustered(const Instance& inst, Clustering clustering);

    /// The all-ones starting point (always feasible: bounds straddle 1).
    std::vector<Rational> initial_point() const;
    std::vector<Rational> clamp(std::vector<Rational> point) const;
    DeviationVector to_deviation(const Instance& inst, const std::vector<Rational>& point) const;
};

struct SearchResult {
    std::vector<Rational> best_alpha;
    Rational best_cost;
    long long evaluations_to_best = 0;  // lower-level solves when best was first hit
    long long evaluations_total = 0;
    long long iterations = 0;
    std::vector<std::pair<long long, Rational>> trace;  // (iteration, incumbent cost)
    std::uint64_t seed = 0;
    std::string algorithm;
};

/// Standard normal draws via Box-Muller on a seeded mt19937_64.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}
    double next();

private:
    std::mt19937_64 rng_;
    std::optional<double> spare_;
};

/// V draws from N(center, beta*I), each coordinate clamped to the space
/// bounds. Perturbations are quantized onto a fine dyadic grid so points
/// stay exact rationals; beta = 0 therefore yields exact copies of center.
std::vector<std::vector<Rational>> neighborhood(const SearchSpace& space,
                                                const std::vector<Rational>& center, double beta,
                                                int V, NormalSampler& rng);

/// Neighborhood search: move to the best neighbor while it strictly
/// improves, stop at the first iteration that does not.
SearchResult ns(const SearchSpace& space, Evaluator& evaluator,
                const std::vector<Rational>& alpha0, double beta, int V, std::uint64_t seed);

/// Neighborhood search with diversification and intensification: always
/// move to the best neighbor; shrink beta on improvement, grow beta and V
/// otherwise; stop after M consecutive non-improving iterations.
SearchResult nsdi(const SearchSpace& space, Evaluator& evaluator,
                  const std::vector<Rational>& alpha0, double beta, int V, int M, double b_minus,
                  double b_plus, const Rational& v_plus, std::uint64_t seed);

/// In-process plug-in contract for external derivative-free optimizers:
/// ask() proposes a point (empty = finished), tell() reports its cost.
class BlackBoxOptimizer {
public:
    virtual ~BlackBoxOptimizer() = default;
    virtual void initialize(int dimension, const std::vector<std::pair<Rational, Rational>>& bounds,
                            std::uint64_t seed) = 0;
    virtual std::optional<std::vector<Rational>> ask() = 0;
    virtual void tell(const std::vector<Rational>& point, const Rational& cost) = 0;
};

/// Drives any BlackBoxOptimizer against the evaluator, stopping when the
/// optimizer finishes or after `budget` ask/tell requests.
SearchResult run_black_box(const SearchSpace& space, Evaluator& evaluator, BlackBoxOptimizer& opt,
                           std::uint64_t seed, long long budget, const std::string& algorithm);

/// Built-in deterministic coordinate pattern search implementing the
/// plug-in contract: poll +/-step per dimension, move to the first strict
/// improvement, halve the step after a full failed poll.
class PatternSearch final : public BlackBoxOptimizer {
public:
    PatternSearch(std::vector<Rational> start, double initial_step, double min_step);

    void initialize(int dimension, const std::vector<std::pair<Rational, Rational>>& bounds,
                    std::uint64_t seed) override;
    std::optional<std::vector<Rational>> ask() override;
    void tell(const std::vector<Rational>& point, const Rational& cost) override;

private:
    std::vector<Rational> make_candidate() const;

    std::vector<Rational> start_;
    double step_;
    double min_step_;
    std::vector<std::pair<Rational, Rational>> bounds_;
    std::vector<Rational> center_;
    Rational center_cost_;
    bool have_center_ = false;
    bool done_ = false;
    int poll_index_ = 0;  // 2*dim directions: +e0, -e0, +e1, ...
};

SearchResult direct_search(const SearchSpace& space, Evaluator& evaluator,
                           const std::vector<Rational>& alpha0, double initial_step,
                           double min_step, long long budget);

struct MappingRow {
    Mapping which;
    std::vector<long long> y_p;
    Rational cost;
    std::optional<Rational> actual_cost;  // present when the instance has observed demand
};

/// Costs of the four fixed mappings (the enumeration baseline), in the
/// order mean, q2, q3, max.
std::vector<MappingRow> enumerate_mappings(const Instance& inst, Evaluator& evaluator);

}  // namespace pde
