#include "pde/metrics.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "pde/lowersolve.hpp"
#include "pde/periodic.hpp"

namespace pde {

namespace {

// label -> commodities incident through some serving path
std::map<std::string, std::set<int>> incidence(const Instance& inst) {
    std::map<std::string, std::set<int>> by_label;
    for (const Path& p : inst.paths)
        for (const std::string& s : p.services)
            for (int k : p.served_commodities) by_label[s].insert(k);
    return by_label;
}

}  // namespace

std::optional<Rational> tau(const Instance& inst) {
    auto by_label = incidence(inst);
    if (by_label.empty()) return std::nullopt;
    long long total = 0;
    for (const auto& [label, ks] : by_label) total += static_cast<long long>(ks.size());
    return Rational(total, static_cast<long long>(by_label.size()));
}

std::optional<Rational> kappa(const Instance& inst) {
    auto by_label = incidence(inst);
    if (by_label.empty()) return std::nullopt;

    const int K = static_cast<int>(inst.commodities.size());
    std::vector<std::set<std::string>> labels_of(K);
    for (const auto& [label, ks] : by_label)
        for (int k : ks) labels_of[k].insert(label);

    long long total = 0;
    for (int k = 0; k < K; ++k) {
        for (int other = 0; other < K; ++other) {
            if (other == k) continue;
            bool shares = std::any_of(labels_of[k].begin(), labels_of[k].end(),
                                      [&](const std::string& s) { return labels_of[other].count(s) > 0; });
            if (shares) ++total;
        }
    }
    return Rational(total, K);
}

std::set<int> outsourced_set(const Instance& inst) {
    DeviationVector unit = unit_deviation(inst);
    PeriodicDemand rounded_mean = alpha_to_demand(inst, unit);
    McndSolution sol = solve_mcnd(inst, rounded_mean.y_p);

    std::set<int> out;
    for (int pos = 0; pos < inst.num_paths(); ++pos) {
        const Path& p = inst.paths[static_cast<size_t>(pos)];
        if (!p.outsourcing) continue;
        for (int k : p.served_commodities)
            if (sol.flows.flow_for(inst, pos, k) > 0) out.insert(k);
    }
    return out;
}

InstanceProfile profile_instance(const Instance& inst) {
    InstanceProfile p;
    p.tau = tau(inst);
    p.kappa = kappa(inst);
    p.k_l = outsourced_set(inst);
    p.num_commodities = static_cast<int>(inst.commodities.size());
    p.num_outsourced = static_cast<int>(p.k_l.size());
    for (const Path& path : inst.paths)
        if (!path.outsourcing) ++p.num_regular_paths;
    return p;
}

std::vector<GapRow> gap_table(const std::vector<std::pair<std::string, Rational>>& results) {
    if (results.empty()) throw std::invalid_argument("gap_table needs at least one result");

    Rational best = results.front().second;
    for (const auto& [label, cost] : results) best = std::min(best, cost);

    std::vector<GapRow> rows;
    rows.reserve(results.size());
    for (const auto& [label, cost] : results) {
        GapRow row{label, cost, std::nullopt};
        if (best != Rational(0))
            row.gap_pct = ((cost - best) / best * Rational(100)).round_half_up();
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string gap_table_csv(const std::vector<GapRow>& rows) {
    std::string out = "label,cost,gap_pct\n";
    for (const GapRow& r : rows) {
        out += r.label;
        out += ',';
        out += r.cost.str();
        out += ',';
        if (r.gap_pct) out += std::to_string(*r.gap_pct);
        out += '\n';
    }
    return out;
}

std::string profile_to_json(const InstanceProfile& p) {
    nlohmann::json j;
    j["tau"] = p.tau ? nlohmann::json(p.tau->str()) : nlohmann::json(nullptr);
    j["kappa"] = p.kappa ? nlohmann::json(p.kappa->str()) : nlohmann::json(nullptr);
    j["k_l"] = p.k_l;
    j["commodities"] = p.num_commodities;
    j["outsourced"] = p.num_outsourced;
    j["regular_paths"] = p.num_regular_paths;
    return j.dump(2);
}

std::string gap_table_to_json(const std::vector<GapRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const GapRow& r : rows) {
        nlohmann::json j;
        j["label"] = r.label;
        j["cost"] = r.cost.str();
        j["gap_pct"] = r.gap_pct ? nlohmann::json(*r.gap_pct) : nlohmann::json(nullptr);
        arr.push_back(std::move(j));
    }
    return arr.dump(2);
}

}  // namespace pde
