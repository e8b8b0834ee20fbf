#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pde/bench.hpp"
#include "pde/cluster.hpp"
#include "pde/generate.hpp"
#include "pde/lowersolve.hpp"
#include "pde/metrics.hpp"
#include "pde/model.hpp"
#include "pde/periodic.hpp"
#include "pde/search.hpp"

namespace fs = std::filesystem;
using namespace pde;

namespace {

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::vector<Rational> parse_alpha(const std::string& text, int commodities) {
    std::vector<Rational> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(Rational::parse(item));
    if (values.size() == 1) values.assign(static_cast<size_t>(commodities), values.front());
    if (static_cast<int>(values.size()) != commodities)
        throw std::invalid_argument("expected 1 or " + std::to_string(commodities) +
                                    " deviation coefficients, got " + std::to_string(values.size()));
    return values;
}

std::string join_alpha(const std::vector<Rational>& alpha) {
    std::string out;
    for (size_t i = 0; i < alpha.size(); ++i) {
        if (i) out += ',';
        out += alpha[i].str();
    }
    return out;
}

// One result line in the layout of the baseline cost table: built paths,
// design cost, design-problem flow cost, per-period flow total, plan cost,
// and the plan cost against observed demand when available.
std::string breakdown_row(const Instance& inst, const std::vector<long long>& y_p) {
    CostBreakdown cb = evaluate_cpde(inst, y_p, inst.forecasts);
    std::vector<int> ids = built_path_ids(inst, cb.design);

    std::string row = ids.size() == 1 ? "Path " : "Paths ";
    if (ids.empty()) row += "-";
    for (size_t i = 0; i < ids.size(); ++i) {
        if (i) row += ',';
        row += std::to_string(ids[i]);
    }
    row += ", " + cb.design_cost.str();
    row += ", " + cb.mcnd_flow_cost.str();
    row += ", " + cb.wmcnd_cost.str();
    row += ", " + cb.c_pde.str();
    if (inst.observed) row += ", " + evaluate_cpde(inst, y_p, *inst.observed).c_pde.str();
    return row;
}

nlohmann::json breakdown_json(const Instance& inst, const std::vector<long long>& y_p) {
    CostBreakdown cb = evaluate_cpde(inst, y_p, inst.forecasts);
    nlohmann::json j;
    j["built_paths"] = built_path_ids(inst, cb.design);
    j["y_p"] = y_p;
    j["design_cost"] = cb.design_cost.str();
    j["mcnd_flow_cost"] = cb.mcnd_flow_cost.str();
    j["wmcnd_cost"] = cb.wmcnd_cost.str();
    j["c_pde"] = cb.c_pde.str();
    if (inst.observed) j["c_pde_actual"] = evaluate_cpde(inst, y_p, *inst.observed).c_pde.str();
    return j;
}

nlohmann::json search_result_json(const Instance& inst, const SearchSpace& space,
                                  const SearchResult& r) {
    nlohmann::json j;
    j["algorithm"] = r.algorithm;
    j["seed"] = r.seed;
    j["best_cost"] = r.best_cost.str();
    nlohmann::json point = nlohmann::json::array();
    for (const Rational& a : r.best_alpha) point.push_back(a.str());
    j["space_point"] = std::move(point);
    nlohmann::json alpha = nlohmann::json::array();
    for (const Rational& a : space.to_deviation(inst, r.best_alpha).alpha) alpha.push_back(a.str());
    j["alpha"] = std::move(alpha);
    j["evaluations_to_best"] = r.evaluations_to_best;
    j["evaluations_total"] = r.evaluations_total;
    j["iterations"] = r.iterations;
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& [iter, cost] : r.trace) trace.push_back({iter, cost.str()});
    j["trace"] = std::move(trace);
    return j;
}

struct GenFlags {
    GeneratorSpec spec;
    std::string preset;
    std::uint64_t seed = 0;
    std::string out;
};

struct RunFlags {
    std::string instance;
    std::string mode = "scalar";
    std::string clustering = "cv";
    std::string algo = "nsdi";
    std::vector<std::string> algos{"ns", "nsdi", "direct"};
    std::vector<std::string> modes{"scalar"};
    std::string alpha;
    std::string mapping_name;
    std::string preset;
    std::uint64_t seed = 0;
    SearchParams params;
    std::string v_plus = "1.1";
    std::string out;
    bool actual = false;
};

int cmd_gen(const GenFlags& flags) {
    Instance inst = generate_instance(flags.spec, flags.seed);
    save_instance_file(inst, flags.out);
    std::cout << "wrote " << flags.out << " (" << inst.commodities.size() << " commodities, "
              << inst.paths.size() << " paths, " << inst.forecasts.periods() << " periods)\n";
    return 0;
}

int cmd_solve(const Instance& inst, const RunFlags& flags) {
    if (flags.alpha.empty() == flags.mapping_name.empty())
        throw std::invalid_argument("pick exactly one of --alpha and --mapping");
    if (flags.actual && !inst.observed)
        throw std::invalid_argument("--actual needs an instance with an observed demand matrix");

    std::vector<long long> y_p;
    if (!flags.mapping_name.empty()) {
        y_p = mapping(inst, mapping_from_name(flags.mapping_name)).y_p;
    } else {
        DeviationVector dv = unit_deviation(inst);
        dv.alpha = parse_alpha(flags.alpha, static_cast<int>(inst.commodities.size()));
        y_p = alpha_to_demand(inst, dv).y_p;
    }

    std::cout << breakdown_row(inst, y_p) << "\n";
    if (!flags.out.empty())
        write_file(fs::path(flags.out) / "solve.json", breakdown_json(inst, y_p).dump(2));
    return 0;
}

int cmd_search(const Instance& inst, const RunFlags& flags) {
    if (flags.algo == "enumerate") {
        Evaluator ev(inst, inst.forecasts);
        nlohmann::json rows_json = nlohmann::json::array();
        for (const MappingRow& row : enumerate_mappings(inst, ev)) {
            std::cout << mapping_name(row.which) << ": " << breakdown_row(inst, row.y_p) << "\n";
            nlohmann::json j = breakdown_json(inst, row.y_p);
            j["mapping"] = mapping_name(row.which);
            rows_json.push_back(std::move(j));
        }
        if (!flags.out.empty())
            write_file(fs::path(flags.out) / "mappings.json", rows_json.dump(2));
        return 0;
    }

    SearchSpace space = space_for(inst, flags.mode, flags.clustering, flags.params.n_c);
    Evaluator ev(inst, inst.forecasts);
    SearchResult r = run_algorithm(space, ev, flags.algo, flags.params, flags.seed);

    std::cout << "algorithm: " << r.algorithm << "\n"
              << "best_cost: " << r.best_cost.str() << "\n"
              << "alpha: " << join_alpha(space.to_deviation(inst, r.best_alpha).alpha) << "\n"
              << "evaluations_to_best: " << r.evaluations_to_best << "\n"
              << "evaluations_total: " << r.evaluations_total << "\n"
              << "iterations: " << r.iterations << "\n";
    if (!flags.out.empty())
        write_file(fs::path(flags.out) / "result.json",
                   search_result_json(inst, space, r).dump(2));
    return 0;
}

int cmd_cluster(const Instance& inst, const RunFlags& flags) {
    Clustering clustering;
    if (flags.clustering == "cv")
        clustering = cluster_cv(inst, flags.params.n_c);
    else if (flags.clustering == "cr")
        clustering = cluster_cr(inst);
    else if (flags.clustering == "cru")
        clustering = cluster_cru(inst);
    else
        throw std::invalid_argument("unknown clustering method: " + flags.clustering);

    std::string text = clustering_to_json(clustering);
    std::cout << text << "\n";
    if (!flags.out.empty()) write_file(fs::path(flags.out) / "clustering.json", text);
    return 0;
}

int cmd_bench(const Instance& inst, const RunFlags& flags) {
    BenchConfig config;
    config.algorithms = flags.algos;
    config.modes = flags.modes;
    config.clustering = flags.clustering;
    config.params = flags.params;
    config.seed = flags.seed;
    if (4 + config.algorithms.size() * config.modes.size() < 2)
        throw std::invalid_argument("bench needs at least two grid cells");

    BenchReport report = run_bench(inst, config);
    std::cout << bench_to_csv(report);
    if (!flags.out.empty()) {
        write_file(fs::path(flags.out) / "bench.csv", bench_to_csv(report));
        write_file(fs::path(flags.out) / "bench.json", bench_to_json(report));
    }
    return 0;
}

int cmd_report(const Instance& inst, const RunFlags& flags) {
    std::string text = profile_to_json(profile_instance(inst));
    std::cout << text << "\n";
    if (!flags.out.empty()) write_file(fs::path(flags.out) / "profile.json", text);
    return 0;
}

void add_search_params(CLI::App* cmd, RunFlags& flags) {
    cmd->add_option("--V", flags.params.V, "neighborhood sample count");
    cmd->add_option("--beta", flags.params.beta, "neighborhood variance");
    cmd->add_option("--M", flags.params.M, "max consecutive non-improving iterations");
    cmd->add_option("--b-minus", flags.params.b_minus, "variance shrink factor on improvement");
    cmd->add_option("--b-plus", flags.params.b_plus, "variance growth factor on stall");
    cmd->add_option("--v-plus", flags.v_plus, "sample count growth factor (rational)");
    cmd->add_option("--step", flags.params.step, "direct search initial step");
    cmd->add_option("--min-step", flags.params.min_step, "direct search stopping step");
    cmd->add_option("--budget", flags.params.budget, "direct search evaluation budget");
    cmd->add_option("--n-c", flags.params.n_c, "variance clustering bucket count");
    cmd->add_option("--preset", flags.preset, "parameter preset: large")
        ->check(CLI::IsMember({"large"}));
}

void finish_params(RunFlags& flags) {
    if (flags.preset == "large") {
        SearchParams base = SearchParams::large();
        SearchParams defaults;
        // preset supplies values the user did not override
        if (flags.params.V == defaults.V) flags.params.V = base.V;
        if (flags.params.beta == defaults.beta) flags.params.beta = base.beta;
        if (flags.params.M == defaults.M) flags.params.M = base.M;
    }
    flags.params.v_plus = Rational::parse(flags.v_plus);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"periodic demand estimation for tactical service network design"};
    app.require_subcommand(1);

    GenFlags gen_flags;
    std::string gen_capacity_ratio, gen_preset;
    auto* gen = app.add_subcommand("gen", "generate a synthetic instance");
    gen->add_option("--out", gen_flags.out, "output instance file")->required();
    gen->add_option("--seed", gen_flags.seed, "random seed");
    auto* gk = gen->add_option("--K", gen_flags.spec.commodities, "commodities");
    auto* gt = gen->add_option("--T", gen_flags.spec.periods, "periods");
    auto* gp = gen->add_option("--paths-per-commodity", gen_flags.spec.paths_per_commodity,
                               "paths per commodity, outsourcing included");
    auto* gtau = gen->add_option("--tau", gen_flags.spec.tau_target,
                                 "target commodities per service label");
    auto* gratio = gen->add_option("--capacity-ratio", gen_capacity_ratio,
                                   "path capacity as a multiple of served mean demand (rational)");
    auto* gdlo = gen->add_option("--demand-lo", gen_flags.spec.demand_lo, "demand lower bound");
    auto* gdhi = gen->add_option("--demand-hi", gen_flags.spec.demand_hi, "demand upper bound");
    auto* gflo = gen->add_option("--flow-lo", gen_flags.spec.flow_lo, "flow cost lower bound");
    auto* gfhi = gen->add_option("--flow-hi", gen_flags.spec.flow_hi, "flow cost upper bound");
    auto* gclo = gen->add_option("--design-lo", gen_flags.spec.design_lo, "design cost lower bound");
    auto* gchi = gen->add_option("--design-hi", gen_flags.spec.design_hi, "design cost upper bound");
    auto* gprem = gen->add_option("--premium", gen_flags.spec.outsourcing_premium,
                                  "outsourcing cost premium over the highest flow cost");
    bool gen_no_observed = false;
    gen->add_flag("--no-observed", gen_no_observed, "skip the observed demand matrix");
    gen->add_option("--preset", gen_preset, "structural preset")
        ->check(CLI::IsMember({"uncapacitated", "tight"}));

    RunFlags flags;
    auto add_common = [&](CLI::App* cmd, bool needs_instance = true) {
        auto* opt = cmd->add_option("--instance", flags.instance, "instance file");
        if (needs_instance) opt->required();
        cmd->add_option("--out", flags.out, "output directory");
        cmd->add_option("--seed", flags.seed, "random seed");
    };

    auto* solve = app.add_subcommand("solve", "evaluate one fixed periodic demand");
    add_common(solve);
    solve->add_option("--alpha", flags.alpha, "deviation coefficients: one value or one per commodity");
    solve->add_option("--mapping", flags.mapping_name, "demand mapping: mean|q2|q3|max")
        ->check(CLI::IsMember({"mean", "q2", "q3", "max"}));
    solve->add_flag("--actual", flags.actual, "require the observed-demand cost column");

    auto* search = app.add_subcommand("search", "run one search algorithm");
    add_common(search);
    search->add_option("--algo", flags.algo, "ns|nsdi|direct|enumerate")
        ->check(CLI::IsMember({"ns", "nsdi", "direct", "enumerate"}));
    search->add_option("--mode", flags.mode, "search space: scalar|clustered|full")
        ->check(CLI::IsMember({"scalar", "clustered", "full"}));
    search->add_option("--clustering", flags.clustering, "clustered-mode method: cv|cr|cru")
        ->check(CLI::IsMember({"cv", "cr", "cru"}));
    add_search_params(search, flags);

    auto* cluster = app.add_subcommand("cluster", "group commodities");
    add_common(cluster);
    cluster->add_option("--clustering", flags.clustering, "cv|cr|cru")
        ->check(CLI::IsMember({"cv", "cr", "cru"}));
    cluster->add_option("--n-c", flags.params.n_c, "variance clustering bucket count");

    auto* bench = app.add_subcommand("bench", "run a mapping/search benchmark grid");
    add_common(bench);
    bench->add_option("--algos", flags.algos, "search algorithms to include");
    bench->add_option("--modes", flags.modes, "search spaces to include");
    bench->add_option("--clustering", flags.clustering, "clustered-mode method: cv|cr|cru")
        ->check(CLI::IsMember({"cv", "cr", "cru"}));
    add_search_params(bench, flags);

    auto* report = app.add_subcommand("report", "instance profile: tau, kappa, outsourced set");
    add_common(report);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            if (gen_preset == "uncapacitated") {
                GeneratorSpec base = GeneratorSpec::uncapacitated();
                if (!gratio->count()) gen_flags.spec.capacity_ratio = base.capacity_ratio;
                if (!gflo->count()) gen_flags.spec.flow_lo = base.flow_lo;
                if (!gfhi->count()) gen_flags.spec.flow_hi = base.flow_hi;
                if (!gprem->count()) gen_flags.spec.outsourcing_premium = base.outsourcing_premium;
            } else if (gen_preset == "tight") {
                GeneratorSpec base = GeneratorSpec::tight();
                if (!gratio->count()) gen_flags.spec.capacity_ratio = base.capacity_ratio;
                if (!gprem->count()) gen_flags.spec.outsourcing_premium = base.outsourcing_premium;
            }
            if (gratio->count()) gen_flags.spec.capacity_ratio = Rational::parse(gen_capacity_ratio);
            if (gen_no_observed) gen_flags.spec.with_observed = false;
            (void)gk; (void)gt; (void)gp; (void)gtau; (void)gdlo; (void)gdhi; (void)gclo; (void)gchi;
            return cmd_gen(gen_flags);
        }

        finish_params(flags);
        Instance inst = load_instance_file(flags.instance);
        if (solve->parsed()) return cmd_solve(inst, flags);
        if (search->parsed()) return cmd_search(inst, flags);
        if (cluster->parsed()) return cmd_cluster(inst, flags);
        if (bench->parsed()) return cmd_bench(inst, flags);
        if (report->parsed()) return cmd_report(inst, flags);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
