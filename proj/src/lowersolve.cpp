#include "pde/lowersolve.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace pde {

namespace {

/// Successive shortest augmenting paths with node potentials. Costs are
/// exact rationals and nonnegative, so Dijkstra works from the start and
/// every comparison is exact.
class MinCostFlow {
public:
    explicit MinCostFlow(int n) : g_(static_cast<size_t>(n)) {}

    /// Returns the index of the forward edge within g_[u].
    int add_edge(int u, int v, long long cap, const Rational& cost) {
        g_[static_cast<size_t>(u)].push_back({v, cap, cost, static_cast<int>(g_[static_cast<size_t>(v)].size())});
        g_[static_cast<size_t>(v)].push_back({u, 0, -cost, static_cast<int>(g_[static_cast<size_t>(u)].size()) - 1});
        return static_cast<int>(g_[static_cast<size_t>(u)].size()) - 1;
    }

    long long flow_on(int u, int edge_index) const {
        const Edge& e = g_[static_cast<size_t>(u)][static_cast<size_t>(edge_index)];
        return g_[static_cast<size_t>(e.to)][static_cast<size_t>(e.rev)].cap;
    }

    Rational push(int s, int t, long long want) {
        const int n = static_cast<int>(g_.size());
        std::vector<Rational> pot(static_cast<size_t>(n));
        Rational total;
        while (want > 0) {
            std::vector<Rational> dist(static_cast<size_t>(n));
            std::vector<char> seen(static_cast<size_t>(n), 0), done(static_cast<size_t>(n), 0);
            std::vector<std::pair<int, int>> prev(static_cast<size_t>(n), {-1, -1});
            using Item = std::pair<Rational, int>;
            auto by_dist = [](const Item& a, const Item& b) { return a.first > b.first; };
            std::priority_queue<Item, std::vector<Item>, decltype(by_dist)> pq(by_dist);
            seen[static_cast<size_t>(s)] = 1;
            pq.push({Rational(0), s});
            while (!pq.empty()) {
                auto [d, u] = pq.top();
                pq.pop();
                if (done[static_cast<size_t>(u)]) continue;
                done[static_cast<size_t>(u)] = 1;
                for (int i = 0; i < static_cast<int>(g_[static_cast<size_t>(u)].size()); ++i) {
                    const Edge& e = g_[static_cast<size_t>(u)][static_cast<size_t>(i)];
                    if (e.cap <= 0 || done[static_cast<size_t>(e.to)]) continue;
                    Rational nd = d + e.cost + pot[static_cast<size_t>(u)] - pot[static_cast<size_t>(e.to)];
                    if (!seen[static_cast<size_t>(e.to)] || nd < dist[static_cast<size_t>(e.to)]) {
                        seen[static_cast<size_t>(e.to)] = 1;
                        dist[static_cast<size_t>(e.to)] = nd;
                        prev[static_cast<size_t>(e.to)] = {u, i};
                        pq.push({nd, e.to});
                    }
                }
            }
            if (!done[static_cast<size_t>(t)])
                throw std::logic_error("flow network disconnected: some demand has no open path");
            for (int v = 0; v < n; ++v)
                if (done[static_cast<size_t>(v)]) pot[static_cast<size_t>(v)] += dist[static_cast<size_t>(v)];

            long long delta = want;
            Rational path_cost;
            for (int v = t; v != s;) {
                auto [u, i] = prev[static_cast<size_t>(v)];
                const Edge& e = g_[static_cast<size_t>(u)][static_cast<size_t>(i)];
                delta = std::min(delta, e.cap);
                path_cost += e.cost;
                v = u;
            }
            for (int v = t; v != s;) {
                auto [u, i] = prev[static_cast<size_t>(v)];
                Edge& e = g_[static_cast<size_t>(u)][static_cast<size_t>(i)];
                e.cap -= delta;
                g_[static_cast<size_t>(e.to)][static_cast<size_t>(e.rev)].cap += delta;
                v = u;
            }
            total += Rational(delta) * path_cost;
            want -= delta;
        }
        return total;
    }

private:
    struct Edge {
        int to;
        long long cap;
        Rational cost;
        int rev;
    };
    std::vector<std::vector<Edge>> g_;
};

}  // namespace

Design all_open(const Instance& inst) {
    return {std::vector<char>(static_cast<size_t>(inst.num_paths()), 1)};
}

Design design_from_path_ids(const Instance& inst, const std::vector<int>& ids) {
    Design d{std::vector<char>(static_cast<size_t>(inst.num_paths()), 0)};
    for (int p = 0; p < inst.num_paths(); ++p)
        if (inst.paths[static_cast<size_t>(p)].outsourcing) d.open[static_cast<size_t>(p)] = 1;
    for (int id : ids) d.open[static_cast<size_t>(inst.path_index(id))] = 1;
    return d;
}

std::vector<int> built_path_ids(const Instance& inst, const Design& design) {
    std::vector<int> ids;
    for (int p = 0; p < inst.num_paths(); ++p)
        if (design.is_open(p) && !inst.paths[static_cast<size_t>(p)].outsourcing)
            ids.push_back(inst.paths[static_cast<size_t>(p)].id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

long long FlowSolution::flow_for(const Instance& inst, int path_pos, int commodity) const {
    const auto& served = inst.paths[static_cast<size_t>(path_pos)].served_commodities;
    auto it = std::lower_bound(served.begin(), served.end(), commodity);
    if (it == served.end() || *it != commodity) return 0;
    return flow[static_cast<size_t>(path_pos)][static_cast<size_t>(it - served.begin())];
}

long long FlowSolution::path_total(int path_pos) const {
    const auto& f = flow[static_cast<size_t>(path_pos)];
    return std::accumulate(f.begin(), f.end(), 0LL);
}

FlowSolution solve_flow(const Instance& inst, const Design& design,
                        const std::vector<long long>& demand) {
    const int K = inst.num_commodities();
    const int P = inst.num_paths();
    FlowSolution sol;
    sol.flow.resize(static_cast<size_t>(P));
    for (int p = 0; p < P; ++p)
        sol.flow[static_cast<size_t>(p)].assign(inst.paths[static_cast<size_t>(p)].served_commodities.size(), 0);

    long long total = std::accumulate(demand.begin(), demand.end(), 0LL);
    if (total == 0) return sol;

    // Nodes: 0 source, 1..K commodities, K+1..K+P paths, K+P+1 sink.
    const int source = 0, sink = K + P + 1;
    MinCostFlow mcf(K + P + 2);
    for (int k = 0; k < K; ++k)
        if (demand[static_cast<size_t>(k)] > 0) mcf.add_edge(source, 1 + k, demand[static_cast<size_t>(k)], Rational(0));

    // Remember each commodity->path edge to read flows back afterwards.
    std::vector<std::vector<int>> edge_of(static_cast<size_t>(P));
    for (int p = 0; p < P; ++p) {
        const Path& path = inst.paths[static_cast<size_t>(p)];
        edge_of[static_cast<size_t>(p)].assign(path.served_commodities.size(), -1);
        if (!design.is_open(p)) continue;
        for (size_t i = 0; i < path.served_commodities.size(); ++i) {
            int k = path.served_commodities[i];
            if (demand[static_cast<size_t>(k)] <= 0) continue;
            edge_of[static_cast<size_t>(p)][i] =
                mcf.add_edge(1 + k, K + 1 + p, demand[static_cast<size_t>(k)], Rational(0));
        }
        long long cap = path.capacity ? *path.capacity : total;
        mcf.add_edge(K + 1 + p, sink, cap, path.flow_cost);
    }

    mcf.push(source, sink, total);

    for (int p = 0; p < P; ++p) {
        const Path& path = inst.paths[static_cast<size_t>(p)];
        for (size_t i = 0; i < path.served_commodities.size(); ++i) {
            int idx = edge_of[static_cast<size_t>(p)][i];
            if (idx < 0) continue;
            long long x = mcf.flow_on(1 + path.served_commodities[i], idx);
            sol.flow[static_cast<size_t>(p)][i] = x;
            if (x > 0) {
                Rational c = Rational(x) * path.flow_cost;
                (path.outsourcing ? sol.out_cost : sol.flow_cost) += c;
            }
        }
    }
    return sol;
}

namespace {

struct BranchState {
    const Instance& inst;
    const std::vector<long long>& y;
    std::vector<int> cand;  // path positions, in branch order
    Design design;          // current node: decided prefix + undecided open
    Rational best_obj;
    std::vector<int> best_ids;  // open candidate ids at the incumbent, sorted
    Design best_design;
    FlowSolution best_flows;
    Rational best_flow_cost;
    bool have_incumbent = false;

    Rational committed_design_cost(size_t depth) const {
        Rational c;
        for (size_t i = 0; i < depth; ++i) {
            int p = cand[i];
            if (design.is_open(p)) c += inst.paths[static_cast<size_t>(p)].design_cost;
        }
        return c;
    }

    void offer(size_t depth, const Rational& objective, const FlowSolution& flows) {
        std::vector<int> ids;
        for (size_t i = 0; i < depth; ++i)
            if (design.is_open(cand[i])) ids.push_back(inst.paths[static_cast<size_t>(cand[i])].id);
        std::sort(ids.begin(), ids.end());
        if (have_incumbent && !(objective < best_obj) &&
            !(objective == best_obj && ids < best_ids))
            return;
        have_incumbent = true;
        best_obj = objective;
        best_ids = std::move(ids);
        best_design = design;
        best_flows = flows;
        best_flow_cost = flows.total_cost();
    }

    void branch(size_t depth) {
        FlowSolution flows = solve_flow(inst, design, y);
        Rational bound = committed_design_cost(depth) + flows.total_cost();
        if (depth == cand.size()) {
            offer(depth, bound, flows);
            return;
        }
        // Keep exploring on ties so the lexicographic rule sees every
        // equal-cost optimum.
        if (have_incumbent && bound > best_obj) return;
        int p = cand[depth];
        design.open[static_cast<size_t>(p)] = 0;
        branch(depth + 1);
        design.open[static_cast<size_t>(p)] = 1;
        branch(depth + 1);
    }
};

}  // namespace

McndSolution solve_mcnd(const Instance& inst, const std::vector<long long>& y_p) {
    if (static_cast<int>(y_p.size()) != inst.num_commodities())
        throw std::invalid_argument("periodic demand length does not match commodity count");
    for (long long v : y_p)
        if (v < 0) throw std::invalid_argument("periodic demand must be nonnegative");

    Design base{std::vector<char>(static_cast<size_t>(inst.num_paths()), 0)};
    std::vector<int> cand;
    for (int p = 0; p < inst.num_paths(); ++p) {
        const Path& path = inst.paths[static_cast<size_t>(p)];
        if (path.outsourcing) {
            base.open[static_cast<size_t>(p)] = 1;
            continue;
        }
        bool useful = false;
        for (int k : path.served_commodities)
            if (y_p[static_cast<size_t>(k)] > 0) useful = true;
        if (useful) {
            cand.push_back(p);
            base.open[static_cast<size_t>(p)] = 1;  // undecided start open
        }
    }
    std::sort(cand.begin(), cand.end(), [&](int a, int b) {
        const Path& pa = inst.paths[static_cast<size_t>(a)];
        const Path& pb = inst.paths[static_cast<size_t>(b)];
        if (pa.design_cost != pb.design_cost) return pa.design_cost > pb.design_cost;
        return pa.id < pb.id;
    });

    BranchState state{inst, y_p, std::move(cand), std::move(base),
                      Rational(0), {}, {}, {}, Rational(0)};
    state.branch(0);

    McndSolution sol;
    sol.design = std::move(state.best_design);
    sol.flows = std::move(state.best_flows);
    sol.flow_cost = state.best_flow_cost;
    sol.objective = state.best_obj;
    sol.design_cost = sol.objective - sol.flow_cost;
    return sol;
}

WmcndSolution solve_wmcnd(const Instance& inst, const Design& design,
                          const DemandMatrix& demands) {
    WmcndSolution sol;
    for (int t = 0; t < demands.periods(); ++t) {
        std::vector<long long> row(static_cast<size_t>(demands.commodities()));
        for (int k = 0; k < demands.commodities(); ++k) row[static_cast<size_t>(k)] = demands.at(t, k);
        sol.per_period.push_back(solve_flow(inst, design, row));
        sol.cost += sol.per_period.back().total_cost();
    }
    return sol;
}

CostBreakdown evaluate_cpde(const Instance& inst, const std::vector<long long>& y_p,
                            const DemandMatrix& demands) {
    McndSolution mcnd = solve_mcnd(inst, y_p);
    WmcndSolution wmcnd = solve_wmcnd(inst, mcnd.design, demands);

    CostBreakdown out;
    out.design = std::move(mcnd.design);
    out.mcnd_flows = std::move(mcnd.flows);
    out.design_cost = mcnd.design_cost;
    out.mcnd_flow_cost = mcnd.flow_cost;
    out.wmcnd_cost = wmcnd.cost;
    for (const FlowSolution& f : wmcnd.per_period) out.per_period.push_back(f.total_cost());
    out.c_pde = Rational(demands.periods()) * out.design_cost + out.wmcnd_cost;
    return out;
}

Rational oracle_mcnd(const Instance& inst, const std::vector<long long>& y_p) {
    std::vector<int> regular;
    for (int p = 0; p < inst.num_paths(); ++p)
        if (!inst.paths[static_cast<size_t>(p)].outsourcing) regular.push_back(p);
    long long total = std::accumulate(y_p.begin(), y_p.end(), 0LL);
    if (regular.size() > 12 || total > 50)
        throw std::invalid_argument("oracle cap exceeded: needs <= 12 regular paths and total demand <= 50");

    Rational best;
    bool first = true;
    for (unsigned mask = 0; mask < (1u << regular.size()); ++mask) {
        Design d{std::vector<char>(static_cast<size_t>(inst.num_paths()), 0)};
        Rational design_cost;
        for (int p = 0; p < inst.num_paths(); ++p)
            if (inst.paths[static_cast<size_t>(p)].outsourcing) d.open[static_cast<size_t>(p)] = 1;
        for (size_t i = 0; i < regular.size(); ++i)
            if (mask & (1u << i)) {
                d.open[static_cast<size_t>(regular[i])] = 1;
                design_cost += inst.paths[static_cast<size_t>(regular[i])].design_cost;
            }
        Rational obj = design_cost + solve_flow(inst, d, y_p).total_cost();
        if (first || obj < best) {
            best = obj;
            first = false;
        }
    }
    return best;
}

}  // namespace pde
