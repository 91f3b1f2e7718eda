#pragma once

#include "mancalog/membership.hpp"

namespace mancalog {

// The subgraph induced by nodes whose degree of membership for one group
// meets a threshold, with exactly the original edges between them.
struct ThresholdSubgraph {
    std::string group;
    Rational threshold;
    std::vector<NodeId> nodes;                      // ascending original ids
    std::vector<std::pair<NodeId, NodeId>> edges;   // original ids, edge order
};

ThresholdSubgraph threshold_subgraph(const MembershipResult& res, const Graph& g,
                                     std::string_view group, const Rational& threshold);

// Shell indices from k-core peeling on the undirected view of the
// subgraph: a node's shell is the largest k for which it survives in the
// subgraph of minimum degree k. Nodes in the maximum shell are the core.
struct ShellAssignment {
    std::vector<NodeId> nodes;   // same order as the subgraph
    std::vector<uint32_t> shell; // parallel to nodes
    uint32_t max_shell = 0;

    bool is_core(size_t i) const { return shell[i] == max_shell; }
};

ShellAssignment shell_decomposition(const ThresholdSubgraph& sub);

} // namespace mancalog
