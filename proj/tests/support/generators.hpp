#pragma once

#include "mancalog/engine.hpp"

#include <random>

namespace mancalog::testing {

using Rng = std::mt19937_64;

inline uint64_t pick(Rng& rng, uint64_t lo, uint64_t hi) { // inclusive
    return lo + rng() % (hi - lo + 1);
}
inline bool chance(Rng& rng, double p) {
    return std::uniform_real_distribution<double>(0, 1)(rng) < p;
}

Rational random_rational(Rng& rng, unsigned max_den = 6);

// Random sub-interval of [0,1]; open endpoints are rare and never empty.
WeightInterval random_interval(Rng& rng);
WeightInterval random_subinterval(Rng& rng, const WeightInterval& within);
WeightInterval random_superinterval(Rng& rng, const WeightInterval& of);

struct GenOptions {
    uint32_t min_nodes = 2;
    uint32_t max_nodes = 50;
    uint32_t max_labels = 8;
    uint32_t min_tmax = 1;
    uint32_t max_tmax = 5;
    uint32_t max_rules = 20;
    uint32_t max_facts = 25;
    uint32_t max_ics = 3;
};

Graph random_graph(Rng& rng, uint32_t min_nodes, uint32_t max_nodes);

LabelTable random_labels(Rng& rng, uint32_t max_labels);

// allow_negation=false keeps the formula monotone under tightening, the
// fragment where the fixpoint is guaranteed to be a model (a negated
// target criterion can drop time points out of the target time set after
// a non-fluent fact lands, stranding earlier tightenings).
NetworkFormula random_formula(Rng& rng, const LabelTable& labels, Fluency fluency, int depth,
                              bool allow_negation = true);

struct GeneratedProgram {
    Program program;
    Graph graph;
};

GeneratedProgram random_program(Rng& rng, const GenOptions& opts = {});

// Random programs filtered for consistency through the engine; the
// fixpoint-is-model property is then checked by the independent oracle.
GeneratedProgram random_consistent_program(Rng& rng, const GenOptions& opts = {});

enum class ContradictionKind : uint8_t { disjoint_facts, ic_vs_fact, suppress_vs_fact };

// A consistent base program with one contradiction injected.
GeneratedProgram random_contradictory_program(Rng& rng, ContradictionKind kind,
                                              const GenOptions& opts = {});

// Random tightening that stays a model (proposals failing the model checker
// are rolled back).
Interpretation random_verified_tightening(Rng& rng, const Program& p, const Graph& g,
                                          const Interpretation& model, int proposals);

// Random widening: bounds move toward [0,1], so the result precedes the input.
Interpretation random_widening(Rng& rng, const Interpretation& of, int proposals);

// Tiny instances for exhaustive model enumeration over the closure of the
// program's bounds; nullopt when the assignment space exceeds the cap.
struct TinyInstance {
    Program program;
    Graph graph;
};
TinyInstance random_tiny_instance(Rng& rng);
std::optional<bool> brute_force_consistent(const Program& p, const Graph& g,
                                           uint64_t cap = 5000000);

// Scaled synthetic membership workload mirroring a network of 2333 nodes,
// 3676 directed edges and 58 groups.
struct ScaledInstance {
    Program program;
    Graph graph;
};
ScaledInstance scaled_membership_instance();

} // namespace mancalog::testing
