#include "mancalog/queries.hpp"

#include <stdexcept>

namespace mancalog {

namespace {

FixpointResult solve(const Program& p, const Graph& g, bool canonical) {
    FixpointResult fix = gamma_fixpoint(p, g);
    if (!fix.inconsistent && canonical)
        fix = canonicalize(p, g, fix);
    return fix;
}

} // namespace

QueryResult consistency(const Program& p, const Graph& g, bool canonical) {
    FixpointResult fix = solve(p, g, canonical);
    QueryResult r;
    if (fix.inconsistent) {
        r.kind = QueryKind::inconsistent;
        r.witness = fix.witness;
    } else {
        r.kind = QueryKind::consistent;
    }
    return r;
}

QueryResult entails_in(const FixpointResult& fix, const Program& p, const Fact& fact) {
    QueryResult r;
    if (fix.inconsistent) {
        r.kind = QueryKind::entailed;
        r.vacuous = true;
        r.witness = fix.witness;
        return r;
    }
    if (fact.t_to > p.t_max)
        throw std::invalid_argument("fact window exceeds tmax");
    bool sat = true;
    for (uint32_t t = fact.t_from; t <= fact.t_to; ++t)
        if (!world_satisfies(fix.model.at(t).world(fact.component), fact.atom)) {
            sat = false;
            break;
        }
    r.kind = sat ? QueryKind::entailed : QueryKind::not_entailed;
    return r;
}

QueryResult entails(const Program& p, const Graph& g, const Fact& fact, bool canonical) {
    if (fact.component >= g.component_count())
        throw std::invalid_argument("fact references an unknown component");
    if (fact.atom.label >= p.labels.size())
        throw std::invalid_argument("fact references an unknown label");
    FixpointResult fix = solve(p, g, canonical);
    return entails_in(fix, p, fact);
}

QueryResult tight_bound_in(const FixpointResult& fix, ComponentId c, LabelId l, uint32_t t) {
    QueryResult r;
    if (fix.inconsistent) {
        r.kind = QueryKind::inconsistent;
        r.witness = fix.witness;
        return r;
    }
    r.kind = QueryKind::tight_bound;
    r.bound = fix.model.bound(t, c, l);
    return r;
}

QueryResult tight_bound(const Program& p, const Graph& g, ComponentId c, LabelId l, uint32_t t,
                        bool canonical) {
    if (c >= g.component_count())
        throw std::invalid_argument("unknown component");
    if (l >= p.labels.size())
        throw std::invalid_argument("unknown label");
    if (t > p.t_max)
        throw std::invalid_argument("time point exceeds tmax");
    FixpointResult fix = solve(p, g, canonical);
    return tight_bound_in(fix, c, l, t);
}

} // namespace mancalog
