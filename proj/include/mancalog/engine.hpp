#pragma once

#include "mancalog/program.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mancalog {

struct CellRef {
    uint32_t t = 0;
    ComponentId component = 0;
    LabelId label = 0;

    bool operator==(const CellRef&) const = default;
};

struct EngineOptions {
    unsigned threads = 0;        // 0 = hardware concurrency
    uint64_t max_iterations = 0; // 0 = derived cap from the convergence bound
    bool record_trace = false;
    bool record_deltas = false;
};

struct IterationTrace {
    uint64_t iteration = 0;
    uint64_t changed_cells = 0;
    double wall_ms = 0.0;
};

// Outcome of iterating the narrowing operator to a fixpoint. When
// inconsistent is set, some cell's bound collapsed to empty and the
// witness names the first such cell in canonical order.
struct FixpointResult {
    bool inconsistent = false;
    Interpretation model;
    uint64_t iterations = 0; // least k with step^k = step^(k+1)
    std::optional<CellRef> witness;
    uint64_t touched_cells = 0; // distinct cells that ever tightened
    uint64_t change_events = 0; // tightenings counted with multiplicity
    std::vector<IterationTrace> trace;
    std::vector<std::vector<CellRef>> deltas; // per iteration, when recorded
};

class engine_limit_error : public std::runtime_error {
public:
    explicit engine_limit_error(const std::string& what) : std::runtime_error(what) {}
};

// Precomputed target time sets: for each (component, label), the set of
// time points constrained by some rule, fact, or integrity constraint of
// the program under a given interpretation.
class TTSIndex {
public:
    static TTSIndex compute(const Program& p, const Graph& g, const Interpretation& i);

    bool contains(ComponentId c, LabelId l, uint32_t t) const {
        const auto& w = bits_[static_cast<size_t>(c) * labels_ + l];
        return (w[t >> 6] >> (t & 63)) & 1;
    }

private:
    uint32_t labels_ = 0;
    std::vector<std::vector<uint64_t>> bits_;
};

// In-neighbors of v whose node world satisfies node_criteria and whose
// connecting edge world satisfies edge_criteria, sorted by node id.
std::vector<NodeId> eligible_set(NodeId v, const NetworkFormula& edge_criteria,
                                 const NetworkFormula& node_criteria,
                                 const NetworkInterpretation& ni, const Graph& g);

// Eligible neighbors that additionally satisfy every contagion literal.
std::vector<NodeId> qualifying_set(NodeId v, const NetworkFormula& edge_criteria,
                                   const NetworkFormula& node_criteria,
                                   const std::vector<Literal>& contagion,
                                   const NetworkInterpretation& ni, const Graph& g);

// The bound a rule enforces on node v under a network interpretation:
// the rule's influence function applied to |Qual| and |Elig|.
WeightInterval rule_bound(const Rule& r, NodeId v, const NetworkInterpretation& ni, const Graph& g);

// Time points at which the rule constrains node v: t >= delta_t with the
// target criteria satisfied delta_t steps earlier.
std::vector<uint32_t> tts_rule(const Interpretation& i, NodeId v, const Rule& r);

// Program-level target time set for one (component, label) cell.
std::vector<uint32_t> tts_program(const Interpretation& i, ComponentId c, LabelId l,
                                  const Program& p, const Graph& g);

// One synchronous application of the narrowing operator: every cell's new
// bound is its old bound intersected with all fact, integrity-constraint,
// and rule bounds, reading only the input interpretation.
Interpretation gamma_step(const Program& p, const Graph& g, const Interpretation& i);

// Iterates from the all-[0,1] interpretation until an exact fixpoint,
// scheduling re-evaluation through a dependency worklist. Stops early when
// any bound becomes empty. Throws engine_limit_error past the iteration cap.
FixpointResult gamma_fixpoint(const Program& p, const Graph& g, const EngineOptions& opts = {});

// Turns a consistent fixpoint into a canonical model: time points not in
// the target time set inherit the previous time point's bound instead of
// resetting to [0,1]. Carried values may trigger integrity constraints, so
// carry passes interleave with narrowing passes until a joint fixpoint;
// the result can be inconsistent even when the input was not.
FixpointResult canonicalize(const Program& p, const Graph& g, const FixpointResult& fix,
                            const EngineOptions& opts = {});

struct ModelViolation {
    std::string kind; // "fact", "strict-fact", "ic", "rule", "off-tts", "empty-bound", ...
    CellRef where;
    std::string message;
};

struct ModelCheck {
    bool ok = true;
    std::vector<ModelViolation> violations;
};

// Direct-from-definitions model verification, deliberately sharing no code
// with gamma_step: every rule, integrity constraint and fact is checked by
// brute enumeration, plus the off-target-time clause of the requested
// model flavor. Used as the independent oracle for the fixpoint path.
ModelCheck check_model(const Program& p, const Graph& g, const Interpretation& i, bool canonical);

// i1 precedes i2: every bound in i2 is a subset of the matching bound in i1.
bool interp_precedes(const Interpretation& i1, const Interpretation& i2);

// Default iteration cap shaped after the convergence bound
// |P| * max-in-degree * t_max * |E|, padded so degenerate factors of zero
// still leave room for the trivial iterations.
uint64_t default_iteration_cap(const Program& p, const Graph& g);

} // namespace mancalog
