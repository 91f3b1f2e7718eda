#pragma once

#include "mancalog/engine.hpp"

#include <map>
#include <string>
#include <vector>

namespace mancalog {

struct MembershipParams {
    std::vector<Rational> alpha; // per group, in (0,1]
    Rational theta = Rational(1); // contagion threshold; 1 = only confirmed members influence
    uint32_t rounds = 0;          // tmax of the generated program
};

// A partially labeled network: some nodes have a known group, the rest get
// a degree of membership per group inferred from their neighborhoods.
struct MembershipProblem {
    Graph graph;
    std::vector<std::string> groups;
    std::map<NodeId, uint32_t> known; // node -> group index, one group per node
    MembershipParams params;

    // alpha defaulted to 1/2 for groups without an explicit parameter.
    void finalize_params();
};

// The generated program: per known member of g, point facts [1,1] for g and
// [0,0] for every other group; per unknown node, [0,1] priors for every
// group; plus a non-fluent guard label marking the unknown nodes, which the
// generated rules target so known nodes are never re-derived.
Program encode_membership(const MembershipProblem& prob);

// One rule per group: unknown nodes adopt the group bound produced by a
// tip influence function over in-neighbors whose group bound lies within
// [theta, 1]. With theta = 1 only confirmed members influence; lower
// thresholds let derived members propagate transitively.
std::vector<Rule> generate_rules(const MembershipProblem& prob, const LabelTable& labels);

enum class Provenance : uint8_t { fact_fixed, rule_derived };

struct MembershipResult {
    std::vector<std::string> groups;
    std::vector<std::string> nodes; // by NodeId
    std::vector<WeightInterval> bounds;
    std::vector<Provenance> provenance;
    uint64_t iterations = 0;

    size_t index(NodeId v, size_t group) const { return v * groups.size() + group; }
    const WeightInterval& at(NodeId v, size_t group) const { return bounds[index(v, group)]; }
    Provenance prov(NodeId v, size_t group) const { return provenance[index(v, group)]; }
    // Degree of membership: the lower bound of the tight interval.
    const Rational& degree(NodeId v, size_t group) const { return at(v, group).lower(); }
};

// Encode, generate rules, run the fixpoint, and read the bounds at
// t = rounds. The generated encoding is consistent by construction.
MembershipResult solve_membership(const MembershipProblem& prob, const EngineOptions& opts = {});

struct HistogramBin {
    Rational lo, hi; // bin covers (lo, hi]
    uint64_t count = 0;
};

// Bins (node, group) pairs by the lower bound of their degree, omitting
// pairs whose lower bound is zero and pairs fact-fixed at one. bin_width
// must divide 1 evenly.
std::vector<HistogramBin> membership_histogram(const MembershipResult& res,
                                               const Rational& bin_width);

} // namespace mancalog
