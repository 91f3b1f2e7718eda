#pragma once

#include "mancalog/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mancalog {

// Asserts an atom on a component over a closed window of time points.
// Non-fluent facts must span the whole timeline [0, t_max].
struct Fact {
    NetworkAtom atom;
    ComponentId component = 0;
    uint32_t t_from = 0;
    uint32_t t_to = 0;

    bool covers(uint32_t t) const { return t_from <= t && t <= t_to; }
    bool operator==(const Fact&) const = default;
};

// head <- body: whenever a component satisfies the body conjunction at a
// time point, its weight for the head label must lie in the head bound.
struct IntegrityConstraint {
    NetworkAtom head; // fluent label
    std::vector<NetworkAtom> body;

    bool operator==(const IntegrityConstraint&) const = default;
};

// Maps (qualifying count, eligible count) to a weight interval. Evaluation
// is constant time and the result narrows as the qualifying count grows.
class InfluenceFunction {
public:
    enum class Family : uint8_t { tip, suppress, frac_threshold, table };

    struct TableRow {
        uint32_t qual = 0;
        uint32_t elig = 0;
        WeightInterval value;

        bool operator==(const TableRow&) const = default;
    };

    // (q,e) -> [1-(1-alpha)^q, 1]; alpha in (0,1].
    static InfluenceFunction tip(Rational alpha);
    // (q,e) -> [0, (1-beta)^q]; beta in (0,1].
    static InfluenceFunction suppress(Rational beta);
    // (q,e) -> bnd when e > 0 and q/e >= theta, else [0,1].
    static InfluenceFunction frac_threshold(Rational theta, WeightInterval bnd);
    // Explicit rows; lookup takes the row with the largest qual <= q for
    // the exact elig, defaulting to [0,1]. Rows must narrow as qual grows,
    // which validate_program checks exhaustively.
    static InfluenceFunction table(std::vector<TableRow> rows);

    Family family() const { return family_; }
    const Rational& parameter() const { return param_; } // alpha, beta, or theta
    const WeightInterval& threshold_bound() const { return bnd_; }
    const std::vector<TableRow>& rows() const { return rows_; }

    bool operator==(const InfluenceFunction&) const = default;

private:
    Family family_ = Family::tip;
    Rational param_;
    WeightInterval bnd_;
    std::vector<TableRow> rows_;
};

// Evaluates the descriptor. qual must not exceed elig.
WeightInterval influence_eval(const InfluenceFunction& ifl, uint64_t qual, uint64_t elig);

struct Literal {
    bool negated = false;
    NetworkAtom atom;

    bool operator==(const Literal&) const = default;
};

// Which neighbors may influence a node and how: edge_criteria constrains
// the incoming edge, node_criteria the neighbor (both non-fluent), and the
// contagion literals decide which eligible neighbors actually qualify.
struct NeighborCriterion {
    NetworkFormula edge_criteria;
    NetworkFormula node_criteria;
    std::vector<Literal> contagion; // conjunction; empty means always
    InfluenceFunction ifl;

    bool operator==(const NeighborCriterion&) const = default;
};

struct Rule {
    LabelId head = 0;   // fluent label
    uint32_t delta_t = 0;
    NetworkFormula target_criteria; // non-fluent
    NeighborCriterion neighbor;

    bool operator==(const Rule&) const = default;
};

struct Program {
    LabelTable labels;
    std::vector<Fact> facts;
    std::vector<Rule> rules;
    std::vector<IntegrityConstraint> ics;
    uint32_t t_max = 0;

    // Statement count |P|.
    size_t size() const { return facts.size() + rules.size() + ics.size(); }

    bool operator==(const Program&) const = default;
};

struct ValidationIssue {
    enum class Subject : uint8_t { program, fact, rule, ic };
    Subject subject = Subject::program;
    size_t index = 0;
    std::string message;

    std::string location() const;
};

// Checks every side condition of a program against its graph. Returns all
// violations rather than stopping at the first; an empty list means the
// program is well-formed.
std::vector<ValidationIssue> validate_program(const Program& p, const Graph& g);

} // namespace mancalog
