#pragma once

// Benchmark grids: the four demand mappings as fixed baselines plus any
// combination of search algorithm and search space, each cell run on its own
// evaluator, reported as cost, gap to the best cell, and evaluation counts.

#include <cstdint>
#include <string>
#include <vector>

#include "pde/metrics.hpp"
#include "pde/model.hpp"
#include "pde/rational.hpp"
#include "pde/search.hpp"

namespace pde {

struct SearchParams {
    int V = 15;
    double beta = 0.05;
    int M = 15;
    double b_minus = 0.7;
    double b_plus = 1.3;
    Rational v_plus = Rational(11, 10);
    double step = 0.5;      // direct search initial step
    double min_step = 0.01;
    long long budget = 1000;
    int n_c = 5;            // variance-clustering bucket count

    // Lighter sampling for larger instances.
    static SearchParams large() {
        SearchParams p;
        p.V = 10;
        p.beta = 0.02;
        p.M = 7;
        return p;
    }
};

// mode: scalar | clustered | full; clustering: cv | cr | cru (clustered only).
SearchSpace space_for(const Instance& inst, const std::string& mode,
                      const std::string& clustering, int n_c);

// algo: ns | nsdi | direct.
SearchResult run_algorithm(const SearchSpace& space, Evaluator& evaluator, const std::string& algo,
                           const SearchParams& params, std::uint64_t seed);

struct BenchCell {
    std::string label;
    Rational cost;
    long long evaluations_to_best = 1;  // 1 when the initial plan was never improved
    long long evaluations_total = 1;
    std::vector<Rational> alpha;        // expanded per commodity; empty for mapping rows
};

struct BenchConfig {
    std::vector<std::string> algorithms{"ns", "nsdi", "direct"};
    std::vector<std::string> modes{"scalar"};
    std::string clustering = "cv";
    SearchParams params;
    std::uint64_t seed = 0;
};

struct BenchReport {
    std::vector<BenchCell> cells;  // mapping baselines first, then algo x mode
    std::vector<GapRow> gaps;      // aligned with cells
};

BenchReport run_bench(const Instance& inst, const BenchConfig& config);

// CSV columns: label,cost,gap_pct,evaluations_to_best,evaluations_total.
std::string bench_to_csv(const BenchReport& report);
std::string bench_to_json(const BenchReport& report);

}  // namespace pde
