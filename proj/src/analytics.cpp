#include "mancalog/analytics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace mancalog {

ThresholdSubgraph threshold_subgraph(const MembershipResult& res, const Graph& g,
                                     std::string_view group, const Rational& threshold) {
    if (threshold < 0 || threshold > 1)
        throw std::invalid_argument("threshold must lie in [0,1]");
    auto git = std::find(res.groups.begin(), res.groups.end(), group);
    if (git == res.groups.end())
        throw std::invalid_argument("unknown group: " + std::string(group));
    size_t gi = static_cast<size_t>(git - res.groups.begin());

    ThresholdSubgraph sub;
    sub.group = std::string(group);
    sub.threshold = threshold;
    std::vector<bool> keep(g.node_count(), false);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const WeightInterval& b = res.at(v, gi);
        if (!b.is_empty() && b.lower() >= threshold) {
            keep[v] = true;
            sub.nodes.push_back(v);
        }
    }
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const auto& [from, to] = g.edge(e);
        if (keep[from] && keep[to])
            sub.edges.emplace_back(from, to);
    }
    return sub;
}

ShellAssignment shell_decomposition(const ThresholdSubgraph& sub) {
    if (sub.nodes.empty())
        throw std::invalid_argument("shell decomposition of an empty subgraph");

    std::map<NodeId, size_t> local;
    for (size_t i = 0; i < sub.nodes.size(); ++i)
        local.emplace(sub.nodes[i], i);

    // Undirected view: each ordered pair contributes one adjacency, and a
    // double-headed pair collapses to a single one.
    std::vector<std::set<size_t>> adj(sub.nodes.size());
    for (const auto& [from, to] : sub.edges) {
        size_t a = local.at(from), b = local.at(to);
        adj[a].insert(b);
        adj[b].insert(a);
    }

    ShellAssignment out;
    out.nodes = sub.nodes;
    out.shell.assign(sub.nodes.size(), 0);

    std::vector<size_t> degree(sub.nodes.size());
    for (size_t i = 0; i < adj.size(); ++i)
        degree[i] = adj[i].size();
    std::vector<bool> alive(sub.nodes.size(), true);
    size_t remaining = sub.nodes.size();

    for (uint32_t k = 1; remaining > 0; ++k) {
        std::vector<size_t> peel;
        for (size_t i = 0; i < sub.nodes.size(); ++i)
            if (alive[i] && degree[i] < k)
                peel.push_back(i);
        while (!peel.empty()) {
            size_t i = peel.back();
            peel.pop_back();
            if (!alive[i])
                continue;
            alive[i] = false;
            --remaining;
            out.shell[i] = k - 1;
            out.max_shell = std::max(out.max_shell, k - 1);
            for (size_t j : adj[i])
                if (alive[j] && --degree[j] < k)
                    peel.push_back(j);
        }
    }
    return out;
}

} // namespace mancalog
