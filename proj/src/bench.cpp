#include "pde/bench.hpp"

#include <functional>
#include <future>
#include <stdexcept>

#include <json.hpp>

#include "pde/cluster.hpp"
#include "pde/periodic.hpp"

namespace pde {

SearchSpace space_for(const Instance& inst, const std::string& mode,
                      const std::string& clustering, int n_c) {
    if (mode == "scalar") return SearchSpace::make_scalar(inst);
    if (mode == "full") return SearchSpace::make_full(inst);
    if (mode == "clustered") {
        if (clustering == "cv") return SearchSpace::make_clustered(inst, cluster_cv(inst, n_c));
        if (clustering == "cr") return SearchSpace::make_clustered(inst, cluster_cr(inst));
        if (clustering == "cru") return SearchSpace::make_clustered(inst, cluster_cru(inst));
        throw std::invalid_argument("unknown clustering method: " + clustering);
    }
    throw std::invalid_argument("unknown search mode: " + mode);
}

SearchResult run_algorithm(const SearchSpace& space, Evaluator& evaluator, const std::string& algo,
                           const SearchParams& params, std::uint64_t seed) {
    if (algo == "ns")
        return ns(space, evaluator, space.initial_point(), params.beta, params.V, seed);
    if (algo == "nsdi")
        return nsdi(space, evaluator, space.initial_point(), params.beta, params.V, params.M,
                    params.b_minus, params.b_plus, params.v_plus, seed);
    if (algo == "direct")
        return direct_search(space, evaluator, space.initial_point(), params.step, params.min_step,
                             params.budget);
    throw std::invalid_argument("unknown algorithm: " + algo);
}

BenchReport run_bench(const Instance& inst, const BenchConfig& config) {
    std::vector<std::function<BenchCell()>> jobs;

    for (Mapping m : {Mapping::mean, Mapping::q2, Mapping::q3, Mapping::max})
        jobs.push_back([&inst, m] {
            Evaluator ev(inst, inst.forecasts);
            BenchCell cell;
            cell.label = mapping_name(m);
            cell.cost = ev.evaluate_demand(mapping(inst, m).y_p).c_pde;
            return cell;
        });

    for (const std::string& mode : config.modes)
        for (const std::string& algo : config.algorithms)
            jobs.push_back([&inst, &config, mode, algo] {
                SearchSpace space = space_for(inst, mode, config.clustering, config.params.n_c);
                Evaluator ev(inst, inst.forecasts);
                SearchResult r = run_algorithm(space, ev, algo, config.params, config.seed);
                BenchCell cell;
                cell.label = algo + "-" + mode;
                if (mode == "clustered") cell.label += "-" + config.clustering;
                cell.cost = r.best_cost;
                cell.evaluations_to_best = r.evaluations_to_best;
                cell.evaluations_total = r.evaluations_total;
                cell.alpha = space.to_deviation(inst, r.best_alpha).alpha;
                return cell;
            });

    // Cells are independent (each owns its evaluator); run them concurrently
    // and assemble in grid order.
    std::vector<std::future<BenchCell>> futures;
    futures.reserve(jobs.size());
    for (auto& job : jobs) futures.push_back(std::async(std::launch::async, job));

    BenchReport report;
    std::vector<std::pair<std::string, Rational>> costs;
    for (auto& f : futures) {
        report.cells.push_back(f.get());
        costs.emplace_back(report.cells.back().label, report.cells.back().cost);
    }
    report.gaps = gap_table(costs);
    return report;
}

std::string bench_to_csv(const BenchReport& report) {
    std::string out = "label,cost,gap_pct,evaluations_to_best,evaluations_total\n";
    for (size_t i = 0; i < report.cells.size(); ++i) {
        const BenchCell& c = report.cells[i];
        out += c.label + ',' + c.cost.str() + ',';
        if (report.gaps[i].gap_pct) out += std::to_string(*report.gaps[i].gap_pct);
        out += ',' + std::to_string(c.evaluations_to_best) + ',' +
               std::to_string(c.evaluations_total) + '\n';
    }
    return out;
}

std::string bench_to_json(const BenchReport& report) {
    nlohmann::json arr = nlohmann::json::array();
    for (size_t i = 0; i < report.cells.size(); ++i) {
        const BenchCell& c = report.cells[i];
        nlohmann::json j;
        j["label"] = c.label;
        j["cost"] = c.cost.str();
        j["gap_pct"] =
            report.gaps[i].gap_pct ? nlohmann::json(*report.gaps[i].gap_pct) : nlohmann::json(nullptr);
        j["evaluations_to_best"] = c.evaluations_to_best;
        j["evaluations_total"] = c.evaluations_total;
        nlohmann::json alpha = nlohmann::json::array();
        for (const Rational& a : c.alpha) alpha.push_back(a.str());
        j["alpha"] = std::move(alpha);
        arr.push_back(std::move(j));
    }
    return arr.dump(2);
}

}  // namespace pde
