#pragma once

#include "mancalog/analytics.hpp"
#include "mancalog/dsl.hpp"
#include "mancalog/engine.hpp"
#include "mancalog/queries.hpp"

#include <json.hpp>

namespace mancalog {

// JSON views of parsed structures and results. Field names are stable;
// rationals appear both as authoritative fraction strings and as decimal
// strings for convenience.
nlohmann::json interval_to_json(const WeightInterval& v);
nlohmann::json atom_to_json(const NetworkAtom& a, const LabelTable& labels);
nlohmann::json formula_to_json(const NetworkFormula& f, const LabelTable& labels);
nlohmann::json graph_to_json(const Graph& g, const LabelTable& labels,
                             const std::vector<std::pair<ComponentId, NetworkAtom>>& annotations);
nlohmann::json program_to_json(const Program& p, const Graph& g);

// Minimal model dump: every non-[0,1] bound as a (t, component, label)
// record in canonical order, plus consistency and iteration metadata.
nlohmann::json model_to_json(const FixpointResult& fix, const Program& p, const Graph& g);

nlohmann::json query_result_to_json(const QueryStatement& q, const QueryResult& r,
                                    const Program& p, const Graph& g);

nlohmann::json membership_to_json(const MembershipResult& res);

} // namespace mancalog
