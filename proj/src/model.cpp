#include "pde/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pde {

using nlohmann::json;

bool Path::serves(int commodity) const {
    return std::binary_search(served_commodities.begin(), served_commodities.end(), commodity);
}

DemandMatrix::DemandMatrix(int periods, int commodities, long long fill)
    : periods_(periods),
      commodities_(commodities),
      values_(static_cast<size_t>(periods) * commodities, fill) {}

std::vector<long long> DemandMatrix::column(int k) const {
    std::vector<long long> out(static_cast<size_t>(periods_));
    for (int t = 0; t < periods_; ++t) out[static_cast<size_t>(t)] = at(t, k);
    return out;
}

void Instance::reindex() {
    paths_by_commodity_.assign(commodities.size(), {});
    for (size_t p = 0; p < paths.size(); ++p) {
        std::sort(paths[p].served_commodities.begin(), paths[p].served_commodities.end());
        paths[p].served_commodities.erase(
            std::unique(paths[p].served_commodities.begin(), paths[p].served_commodities.end()),
            paths[p].served_commodities.end());
        for (int k : paths[p].served_commodities)
            if (k >= 0 && k < static_cast<int>(commodities.size()))
                paths_by_commodity_[static_cast<size_t>(k)].push_back(static_cast<int>(p));
    }
}

const std::vector<int>& Instance::paths_of(int k) const {
    return paths_by_commodity_.at(static_cast<size_t>(k));
}

int Instance::path_index(int path_id) const {
    for (size_t p = 0; p < paths.size(); ++p)
        if (paths[p].id == path_id) return static_cast<int>(p);
    throw std::out_of_range("no path with id " + std::to_string(path_id));
}

std::string Violation::str() const {
    std::ostringstream os;
    os << message;
    if (path_id) os << " (path " << *path_id << ")";
    if (commodity_id) os << " (commodity " << *commodity_id << ")";
    return os.str();
}

std::vector<Violation> validate_instance(const Instance& inst) {
    std::vector<Violation> out;
    const int K = inst.num_commodities();

    for (int k = 0; k < K; ++k)
        if (inst.commodities[static_cast<size_t>(k)].id != k)
            out.push_back({"commodity ids must be unique and contiguous from 0", std::nullopt, k});

    std::vector<int> seen_ids;
    for (const Path& p : inst.paths) {
        if (std::find(seen_ids.begin(), seen_ids.end(), p.id) != seen_ids.end())
            out.push_back({"duplicate path id", p.id, std::nullopt});
        seen_ids.push_back(p.id);

        for (int k : p.served_commodities)
            if (k < 0 || k >= K)
                out.push_back({"served commodity id out of range", p.id, k});

        if (p.design_cost.sign() < 0)
            out.push_back({"design cost must be nonnegative", p.id, std::nullopt});
        if (p.flow_cost.sign() < 0)
            out.push_back({"flow cost must be nonnegative", p.id, std::nullopt});
        if (p.capacity && *p.capacity < 0)
            out.push_back({"capacity must be nonnegative", p.id, std::nullopt});

        if (p.outsourcing) {
            if (!p.design_cost.is_zero())
                out.push_back({"outsourcing path must have zero design cost", p.id, std::nullopt});
            if (p.capacity)
                out.push_back({"outsourcing path must be uncapacitated", p.id, std::nullopt});
        } else if (!p.capacity) {
            out.push_back({"non-outsourcing path must have finite capacity", p.id, std::nullopt});
        }
    }

    for (int k = 0; k < K; ++k) {
        bool has_out = false;
        for (const Path& p : inst.paths)
            if (p.outsourcing && p.serves(k)) has_out = true;
        if (!has_out)
            out.push_back({"commodity " + std::to_string(k) + " has no outsourcing path",
                           std::nullopt, k});

        // Outsourcing must be the strictly most expensive way to move k.
        for (const Path& po : inst.paths) {
            if (!po.outsourcing || !po.serves(k)) continue;
            for (const Path& pr : inst.paths) {
                if (pr.outsourcing || !pr.serves(k)) continue;
                if (!(po.flow_cost > pr.flow_cost)) {
                    out.push_back({"outsourcing flow cost must exceed flow cost of path " +
                                       std::to_string(pr.id),
                                   po.id, k});
                }
            }
        }
    }

    if (inst.forecasts.periods() < 1)
        out.push_back({"forecast matrix needs at least one period", std::nullopt, std::nullopt});
    if (inst.forecasts.commodities() != K)
        out.push_back({"forecast matrix width does not match commodity count", std::nullopt,
                       std::nullopt});
    for (int t = 0; t < inst.forecasts.periods(); ++t)
        for (int k = 0; k < inst.forecasts.commodities(); ++k)
            if (inst.forecasts.at(t, k) < 0)
                out.push_back({"negative forecast demand at period " + std::to_string(t),
                               std::nullopt, k});
    if (inst.observed) {
        if (inst.observed->periods() != inst.forecasts.periods() ||
            inst.observed->commodities() != inst.forecasts.commodities())
            out.push_back({"observed matrix shape differs from forecasts", std::nullopt,
                           std::nullopt});
        for (int t = 0; t < inst.observed->periods(); ++t)
            for (int k = 0; k < inst.observed->commodities(); ++k)
                if (inst.observed->at(t, k) < 0)
                    out.push_back({"negative observed demand at period " + std::to_string(t),
                                   std::nullopt, k});
    }
    return out;
}

std::vector<CommodityStats> demand_stats(const Instance& inst) {
    const int K = inst.num_commodities();
    const int T = inst.periods();
    std::vector<CommodityStats> out(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k) {
        long long sum = 0, lo = inst.forecasts.at(0, k), hi = lo;
        for (int t = 0; t < T; ++t) {
            long long v = inst.forecasts.at(t, k);
            sum += v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        out[static_cast<size_t>(k)] = {Rational(sum, T), lo, hi};
    }
    return out;
}

ValidationError::ValidationError(const std::vector<Violation>& violations)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "instance validation failed (" << violations.size() << " violation"
             << (violations.size() == 1 ? "" : "s") << "):";
          for (const Violation& v : violations) os << "\n  - " << v.str();
          return os.str();
      }()),
      violations_(violations) {}

namespace {

DemandMatrix parse_matrix(const json& j, int K, const std::string& ctx) {
    if (!j.is_array() || j.empty()) throw ParseError(ctx, "expected a nonempty array of rows");
    const int T = static_cast<int>(j.size());
    DemandMatrix m(T, K);
    for (int t = 0; t < T; ++t) {
        const json& row = j[static_cast<size_t>(t)];
        if (!row.is_array() || static_cast<int>(row.size()) != K)
            throw ParseError(ctx + "[" + std::to_string(t) + "]",
                             "expected a row of " + std::to_string(K) + " integers");
        for (int k = 0; k < K; ++k) {
            const json& cell = row[static_cast<size_t>(k)];
            if (!cell.is_number_integer())
                throw ParseError(ctx + "[" + std::to_string(t) + "][" + std::to_string(k) + "]",
                                 "expected an integer");
            m.at(t, k) = cell.get<long long>();
        }
    }
    return m;
}

Rational parse_cost(const json& j, const std::string& ctx) {
    if (j.is_string()) {
        try {
            return Rational::parse(j.get<std::string>());
        } catch (const std::exception& e) {
            throw ParseError(ctx, e.what());
        }
    }
    if (j.is_number_integer()) return Rational(j.get<long long>());
    throw ParseError(ctx, "expected a decimal string");
}

json matrix_to_json(const DemandMatrix& m) {
    json rows = json::array();
    for (int t = 0; t < m.periods(); ++t) {
        json row = json::array();
        for (int k = 0; k < m.commodities(); ++k) row.push_back(m.at(t, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

Instance load_instance_from_string(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError("document", e.what());
    }
    if (!doc.is_object()) throw ParseError("document", "expected a JSON object");
    for (const char* key : {"commodities", "paths", "forecasts"})
        if (!doc.contains(key)) throw ParseError("document", std::string("missing key '") + key + "'");

    Instance inst;
    for (const json& jc : doc["commodities"]) {
        Commodity c;
        try {
            c.id = jc.at("id").get<int>();
            c.origin = jc.at("origin").get<std::string>();
            c.destination = jc.at("destination").get<std::string>();
            c.kind = jc.value("kind", std::string{});
        } catch (const json::exception& e) {
            throw ParseError("commodities", e.what());
        }
        inst.commodities.push_back(std::move(c));
    }

    for (const json& jp : doc["paths"]) {
        Path p;
        const std::string ctx = "paths[" + std::to_string(inst.paths.size()) + "]";
        try {
            p.id = jp.at("id").get<int>();
            p.served_commodities = jp.at("served_commodities").get<std::vector<int>>();
            p.outsourcing = jp.value("outsourcing", false);
            const json& cap = jp.at("capacity");
            if (cap.is_null())
                p.capacity = std::nullopt;
            else if (cap.is_number_integer())
                p.capacity = cap.get<long long>();
            else
                throw ParseError(ctx + ".capacity", "expected an integer or null");
            p.services = jp.value("services", std::vector<std::string>{});
        } catch (const json::exception& e) {
            throw ParseError(ctx, e.what());
        }
        p.design_cost = parse_cost(jp.at("design_cost"), ctx + ".design_cost");
        p.flow_cost = parse_cost(jp.at("flow_cost"), ctx + ".flow_cost");
        inst.paths.push_back(std::move(p));
    }

    const int K = inst.num_commodities();
    inst.forecasts = parse_matrix(doc["forecasts"], K, "forecasts");
    if (doc.contains("observed") && !doc["observed"].is_null())
        inst.observed = parse_matrix(doc["observed"], K, "observed");

    inst.reindex();
    auto violations = validate_instance(inst);
    if (!violations.empty()) throw ValidationError(violations);
    return inst;
}

Instance load_instance_file(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw ParseError(filename, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_instance_from_string(buf.str());
}

std::string save_instance_to_string(const Instance& inst) {
    json doc;
    doc["commodities"] = json::array();
    for (const Commodity& c : inst.commodities)
        doc["commodities"].push_back(
            {{"id", c.id}, {"origin", c.origin}, {"destination", c.destination}, {"kind", c.kind}});
    doc["paths"] = json::array();
    for (const Path& p : inst.paths) {
        json jp = {{"id", p.id},
                   {"served_commodities", p.served_commodities},
                   {"design_cost", p.design_cost.str()},
                   {"flow_cost", p.flow_cost.str()},
                   {"outsourcing", p.outsourcing},
                   {"services", p.services}};
        jp["capacity"] = p.capacity ? json(*p.capacity) : json(nullptr);
        doc["paths"].push_back(std::move(jp));
    }
    doc["forecasts"] = matrix_to_json(inst.forecasts);
    if (inst.observed) doc["observed"] = matrix_to_json(*inst.observed);
    return doc.dump(2) + "\n";
}

void save_instance_file(const Instance& inst, const std::string& filename) {
    std::ofstream out(filename);
    if (!out) throw ParseError(filename, "cannot open file for writing");
    out << save_instance_to_string(inst);
}

}  // namespace pde
