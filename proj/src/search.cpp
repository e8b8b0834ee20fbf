#include "pde/search.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pde {

namespace {

/// Nearest rational with denominator 2^32. Keeps sampled perturbations
/// exact without letting denominators explode across iterations.
Rational quantize(double x) {
    constexpr double kScale = 4294967296.0;  // 2^32
    double clamped = std::clamp(x, -1.0e6, 1.0e6);
    return Rational(static_cast<long long>(std::llround(clamped * kScale)), 1LL << 32);
}

Rational clamp_rational(const Rational& x, const std::pair<Rational, Rational>& b) {
    return min(max(x, b.first), b.second);
}

}  // namespace

Evaluator::Evaluator(const Instance& inst, const DemandMatrix& demands)
    : inst_(inst), demands_(demands) {
    if (demands.commodities() != inst.num_commodities())
        throw std::invalid_argument("demand matrix width does not match instance");
}

const CostBreakdown& Evaluator::evaluate(const DeviationVector& dv) {
    const CostBreakdown& cb = evaluate_demand(alpha_to_demand(inst_, dv).y_p);
    if (observer_) observer_(dv, cb);
    return cb;
}

const CostBreakdown& Evaluator::evaluate_demand(const std::vector<long long>& y_p) {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = memo_.find(y_p);
        if (it != memo_.end()) return it->second;
    }
    CostBreakdown fresh = evaluate_cpde(inst_, y_p, demands_);
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, inserted] = memo_.emplace(y_p, std::move(fresh));
    if (inserted) ++solves_;
    return it->second;
}

long long Evaluator::lower_level_solves() const {
    std::lock_guard<std::mutex> lock(mu_);
    return solves_;
}

namespace {

/// Per-dimension bounds hull: the widest member interval of each cluster.
SearchSpace make_space(const Instance& inst, Clustering clustering, SearchSpace::Mode mode) {
    SearchSpace space;
    space.mode = mode;
    auto per_commodity = alpha_bounds(inst);
    for (const auto& cluster : clustering.clusters) {
        Rational lo = per_commodity[static_cast<size_t>(cluster.front())].first;
        Rational hi = per_commodity[static_cast<size_t>(cluster.front())].second;
        for (int k : cluster) {
            lo = min(lo, per_commodity[static_cast<size_t>(k)].first);
            hi = max(hi, per_commodity[static_cast<size_t>(k)].second);
        }
        space.bounds.emplace_back(lo, hi);
    }
    space.clustering = std::move(clustering);
    return space;
}

}  // namespace

SearchSpace SearchSpace::make_scalar(const Instance& inst) {
    return make_space(inst, global_clustering(inst), Mode::scalar);
}

SearchSpace SearchSpace::make_full(const Instance& inst) {
    return make_space(inst, singleton_clustering(inst), Mode::full);
}

SearchSpace SearchSpace::make_clustered(const Instance& inst, Clustering clustering) {
    return make_space(inst, std::move(clustering), Mode::clustered);
}

std::vector<Rational> SearchSpace::initial_point() const {
    return clamp(std::vector<Rational>(static_cast<size_t>(dimension()), Rational(1)));
}

std::vector<Rational> SearchSpace::clamp(std::vector<Rational> point) const {
    if (point.size() != bounds.size())
        throw std::invalid_argument("point dimension does not match the search space");
    for (size_t d = 0; d < point.size(); ++d) point[d] = clamp_rational(point[d], bounds[d]);
    return point;
}

DeviationVector SearchSpace::to_deviation(const Instance& inst,
                                          const std::vector<Rational>& point) const {
    return expand(clustering, point, inst);
}

double NormalSampler::next() {
    if (spare_) {
        double v = *spare_;
        spare_.reset();
        return v;
    }
    auto uniform01 = [this] {  // (0, 1]: never feeds log a zero
        return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    };
    double radius = std::sqrt(-2.0 * std::log(uniform01()));
    double angle = 2.0 * std::numbers::pi * uniform01();
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

std::vector<std::vector<Rational>> neighborhood(const SearchSpace& space,
                                                const std::vector<Rational>& center, double beta,
                                                int V, NormalSampler& rng) {
    if (beta < 0) throw std::invalid_argument("beta must be nonnegative");
    if (V < 1) throw std::invalid_argument("neighborhood size must be positive");
    if (static_cast<int>(center.size()) != space.dimension())
        throw std::invalid_argument("center dimension does not match the search space");

    const double sigma = std::sqrt(beta);
    std::vector<std::vector<Rational>> out;
    out.reserve(static_cast<size_t>(V));
    for (int v = 0; v < V; ++v) {
        std::vector<Rational> point(center.size());
        for (size_t d = 0; d < center.size(); ++d)
            point[d] = clamp_rational(center[d] + quantize(sigma * rng.next()), space.bounds[d]);
        out.push_back(std::move(point));
    }
    return out;
}

namespace {

struct RunTracker {
    Evaluator& eval;
    long long baseline;
    SearchResult res;
    bool have_best = false;

    RunTracker(Evaluator& e, std::uint64_t seed, std::string algorithm)
        : eval(e), baseline(e.lower_level_solves()) {
        res.seed = seed;
        res.algorithm = std::move(algorithm);
    }

    /// Returns true when the point became the new incumbent.
    bool offer(const std::vector<Rational>& point, const Rational& cost, long long solves_at,
               long long iteration) {
        if (have_best && !(cost < res.best_cost)) return false;
        have_best = true;
        res.best_alpha = point;
        res.best_cost = cost;
        res.evaluations_to_best = solves_at - baseline;
        res.trace.emplace_back(iteration, cost);
        return true;
    }

    SearchResult finish(long long iterations) {
        res.iterations = iterations;
        res.evaluations_total = eval.lower_level_solves() - baseline;
        return std::move(res);
    }
};

/// Evaluates a neighborhood sequentially, returning the minimizer's index
/// (lowest index on ties), its cost, and the solve count right after the
/// winner's own evaluation.
struct ScanResult {
    size_t index;
    Rational cost;
    long long solves_at;
};

ScanResult scan(const SearchSpace& space, Evaluator& eval,
                const std::vector<std::vector<Rational>>& points) {
    ScanResult best{0, Rational(0), 0};
    bool first = true;
    for (size_t i = 0; i < points.size(); ++i) {
        const CostBreakdown& cb = eval.evaluate(space.to_deviation(eval.instance(), points[i]));
        long long solves = eval.lower_level_solves();
        if (first || cb.c_pde < best.cost) {
            best = {i, cb.c_pde, solves};
            first = false;
        }
    }
    return best;
}

}  // namespace

SearchResult ns(const SearchSpace& space, Evaluator& evaluator,
                const std::vector<Rational>& alpha0, double beta, int V, std::uint64_t seed) {
    if (beta < 0) throw std::invalid_argument("beta must be nonnegative");
    if (V < 1) throw std::invalid_argument("neighborhood size must be positive");

    RunTracker run(evaluator, seed, "ns");
    std::vector<Rational> current = space.clamp(alpha0);
    const CostBreakdown& cb0 = evaluator.evaluate(space.to_deviation(evaluator.instance(), current));
    run.offer(current, cb0.c_pde, evaluator.lower_level_solves(), 0);
    if (space.dimension() == 0) return run.finish(0);

    NormalSampler rng(seed);
    long long iter = 0;
    for (;;) {
        ++iter;
        auto points = neighborhood(space, current, beta, V, rng);
        ScanResult winner = scan(space, evaluator, points);
        if (!run.offer(points[winner.index], winner.cost, winner.solves_at, iter)) break;
        current = points[winner.index];
    }
    return run.finish(iter);
}

SearchResult nsdi(const SearchSpace& space, Evaluator& evaluator,
                  const std::vector<Rational>& alpha0, double beta, int V, int M, double b_minus,
                  double b_plus, const Rational& v_plus, std::uint64_t seed) {
    if (beta < 0) throw std::invalid_argument("beta must be nonnegative");
    if (V < 1) throw std::invalid_argument("neighborhood size must be positive");
    if (M < 1) throw std::invalid_argument("M must be positive");
    if (!(b_minus > 0 && b_minus < 1)) throw std::invalid_argument("b_minus must lie in (0, 1)");
    if (!(b_plus > 1)) throw std::invalid_argument("b_plus must exceed 1");
    if (!(v_plus > Rational(1))) throw std::invalid_argument("v_plus must exceed 1");

    RunTracker run(evaluator, seed, "nsdi");
    std::vector<Rational> current = space.clamp(alpha0);
    const CostBreakdown& cb0 = evaluator.evaluate(space.to_deviation(evaluator.instance(), current));
    run.offer(current, cb0.c_pde, evaluator.lower_level_solves(), 0);
    if (space.dimension() == 0) return run.finish(0);

    NormalSampler rng(seed);
    double beta_cur = beta;
    long long v_cur = V;
    int stalls = 0;
    long long iter = 0;
    while (stalls < M) {
        ++iter;
        auto points = neighborhood(space, current, beta_cur, static_cast<int>(v_cur), rng);
        ScanResult winner = scan(space, evaluator, points);
        if (run.offer(points[winner.index], winner.cost, winner.solves_at, iter)) {
            stalls = 0;
            beta_cur *= b_minus;
        } else {
            ++stalls;
            beta_cur *= b_plus;
            v_cur = (Rational(v_cur) * v_plus).ceil_int();
        }
        current = points[winner.index];  // move even without improvement
    }
    return run.finish(iter);
}

SearchResult run_black_box(const SearchSpace& space, Evaluator& evaluator, BlackBoxOptimizer& opt,
                           std::uint64_t seed, long long budget, const std::string& algorithm) {
    if (budget < 1) throw std::invalid_argument("evaluation budget must be positive");

    RunTracker run(evaluator, seed, algorithm);
    opt.initialize(space.dimension(), space.bounds, seed);
    long long requests = 0;
    while (requests < budget) {
        auto proposal = opt.ask();
        if (!proposal) break;
        std::vector<Rational> point = space.clamp(std::move(*proposal));
        const CostBreakdown& cb = evaluator.evaluate(space.to_deviation(evaluator.instance(), point));
        run.offer(point, cb.c_pde, evaluator.lower_level_solves(), requests);
        ++requests;
        opt.tell(point, cb.c_pde);
    }
    return run.finish(requests);
}

PatternSearch::PatternSearch(std::vector<Rational> start, double initial_step, double min_step)
    : start_(std::move(start)), step_(initial_step), min_step_(min_step) {
    if (!(initial_step > min_step) || !(min_step > 0))
        throw std::invalid_argument("need initial_step > min_step > 0");
}

void PatternSearch::initialize(int dimension,
                               const std::vector<std::pair<Rational, Rational>>& bounds,
                               std::uint64_t /*seed*/) {
    if (static_cast<int>(start_.size()) != dimension)
        throw std::invalid_argument("start point dimension does not match the search space");
    bounds_ = bounds;
    for (size_t d = 0; d < start_.size(); ++d) start_[d] = clamp_rational(start_[d], bounds_[d]);
}

std::vector<Rational> PatternSearch::make_candidate() const {
    std::vector<Rational> point = center_;
    size_t d = static_cast<size_t>(poll_index_) / 2;
    Rational delta = quantize(poll_index_ % 2 == 0 ? step_ : -step_);
    point[d] = clamp_rational(point[d] + delta, bounds_[d]);
    return point;
}

std::optional<std::vector<Rational>> PatternSearch::ask() {
    if (done_) return std::nullopt;
    if (!have_center_) return start_;
    if (start_.empty()) return std::nullopt;  // 0-dimensional: nothing to poll
    return make_candidate();
}

void PatternSearch::tell(const std::vector<Rational>& point, const Rational& cost) {
    if (done_) return;
    if (!have_center_) {
        center_ = point;
        center_cost_ = cost;
        have_center_ = true;
        if (start_.empty()) done_ = true;
        return;
    }
    if (cost < center_cost_) {  // move to the first strict improvement
        center_ = point;
        center_cost_ = cost;
        poll_index_ = 0;
        return;
    }
    if (++poll_index_ == 2 * static_cast<int>(center_.size())) {
        poll_index_ = 0;
        step_ /= 2;
        if (step_ < min_step_) done_ = true;
    }
}

SearchResult direct_search(const SearchSpace& space, Evaluator& evaluator,
                           const std::vector<Rational>& alpha0, double initial_step,
                           double min_step, long long budget) {
    PatternSearch optimizer(space.clamp(alpha0), initial_step, min_step);
    return run_black_box(space, evaluator, optimizer, 0, budget, "direct");
}

std::vector<MappingRow> enumerate_mappings(const Instance& inst, Evaluator& evaluator) {
    std::vector<MappingRow> rows;
    for (Mapping m : {Mapping::mean, Mapping::q2, Mapping::q3, Mapping::max}) {
        MappingRow row;
        row.which = m;
        row.y_p = mapping(inst, m).y_p;
        row.cost = evaluator.evaluate_demand(row.y_p).c_pde;
        if (inst.observed) row.actual_cost = evaluate_cpde(inst, row.y_p, *inst.observed).c_pde;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace pde
