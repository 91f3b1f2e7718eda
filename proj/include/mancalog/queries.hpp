#pragma once

#include "mancalog/engine.hpp"

#include <optional>

namespace mancalog {

enum class QueryKind : uint8_t { consistent, inconsistent, entailed, not_entailed, tight_bound };

struct QueryResult {
    QueryKind kind = QueryKind::consistent;
    std::optional<WeightInterval> bound; // present for tight_bound
    std::optional<CellRef> witness;      // present for inconsistent
    // Entailment against an inconsistent program holds vacuously; results
    // report that explicitly instead of a bare yes.
    bool vacuous = false;
};

// A program is consistent iff the fixpoint (canonicalized when requested)
// does not collapse any bound to empty.
QueryResult consistency(const Program& p, const Graph& g, bool canonical);

// A fact is entailed iff the (canonical) minimal model satisfies it.
QueryResult entails(const Program& p, const Graph& g, const Fact& fact, bool canonical);
QueryResult entails_in(const FixpointResult& fix, const Program& p, const Fact& fact);

// The tightest interval entailed for one (time, component, label) cell:
// the minimal model's bound there.
QueryResult tight_bound(const Program& p, const Graph& g, ComponentId c, LabelId l, uint32_t t,
                        bool canonical);
QueryResult tight_bound_in(const FixpointResult& fix, ComponentId c, LabelId l, uint32_t t);

} // namespace mancalog
