#include "mancalog/json_io.hpp"

namespace mancalog {

using nlohmann::json;

json interval_to_json(const WeightInterval& v) {
    if (v.is_empty())
        return json{{"empty", true}};
    return json{
        {"empty", false},
        {"lower", to_fraction_string(v.lower())},
        {"upper", to_fraction_string(v.upper())},
        {"lower_open", v.lower_open()},
        {"upper_open", v.upper_open()},
        {"lower_decimal", to_decimal_string(v.lower())},
        {"upper_decimal", to_decimal_string(v.upper())},
    };
}

json atom_to_json(const NetworkAtom& a, const LabelTable& labels) {
    return json{{"label", labels[a.label].name}, {"bound", interval_to_json(a.bnd)}};
}

json formula_to_json(const NetworkFormula& f, const LabelTable& labels) {
    switch (f.kind()) {
    case NetworkFormula::Kind::truth:
        return json{{"kind", "true"}};
    case NetworkFormula::Kind::falsity:
        return json{{"kind", "false"}};
    case NetworkFormula::Kind::atom:
        return json{{"kind", "atom"}, {"atom", atom_to_json(f.as_atom(), labels)}};
    case NetworkFormula::Kind::negation:
        return json{{"kind", "not"}, {"arg", formula_to_json(f.child(0), labels)}};
    case NetworkFormula::Kind::conjunction:
        return json{{"kind", "and"},
                    {"args", json::array({formula_to_json(f.child(0), labels),
                                          formula_to_json(f.child(1), labels)})}};
    case NetworkFormula::Kind::disjunction:
        return json{{"kind", "or"},
                    {"args", json::array({formula_to_json(f.child(0), labels),
                                          formula_to_json(f.child(1), labels)})}};
    }
    return json();
}

json graph_to_json(const Graph& g, const LabelTable& labels,
                   const std::vector<std::pair<ComponentId, NetworkAtom>>& annotations) {
    json out;
    out["labels"] = json::array();
    for (LabelId l = 0; l < labels.size(); ++l)
        out["labels"].push_back(
            json{{"name", labels[l].name}, {"fluent", labels[l].fluency == Fluency::fluent}});
    out["nodes"] = json::array();
    for (NodeId v = 0; v < g.node_count(); ++v)
        out["nodes"].push_back(g.node_name(v));
    out["edges"] = json::array();
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        out["edges"].push_back(
            json{{"from", g.node_name(g.edge(e).first)}, {"to", g.node_name(g.edge(e).second)}});
    out["annotations"] = json::array();
    for (const auto& [c, atom] : annotations) {
        json rec = atom_to_json(atom, labels);
        rec["component"] = g.component_name(c);
        out["annotations"].push_back(std::move(rec));
    }
    return out;
}

namespace {

json influence_to_json(const InfluenceFunction& ifl) {
    switch (ifl.family()) {
    case InfluenceFunction::Family::tip:
        return json{{"family", "tip"}, {"alpha", to_fraction_string(ifl.parameter())}};
    case InfluenceFunction::Family::suppress:
        return json{{"family", "suppress"}, {"beta", to_fraction_string(ifl.parameter())}};
    case InfluenceFunction::Family::frac_threshold:
        return json{{"family", "frac_threshold"},
                    {"theta", to_fraction_string(ifl.parameter())},
                    {"bound", interval_to_json(ifl.threshold_bound())}};
    case InfluenceFunction::Family::table: {
        json rows = json::array();
        for (const auto& row : ifl.rows())
            rows.push_back(json{{"qual", row.qual},
                                {"elig", row.elig},
                                {"value", interval_to_json(row.value)}});
        return json{{"family", "table"}, {"rows", std::move(rows)}};
    }
    }
    return json();
}

} // namespace

json program_to_json(const Program& p, const Graph& g) {
    json out;
    out["tmax"] = p.t_max;
    out["labels"] = json::array();
    for (LabelId l = 0; l < p.labels.size(); ++l)
        out["labels"].push_back(
            json{{"name", p.labels[l].name}, {"fluent", p.labels[l].fluency == Fluency::fluent}});
    out["facts"] = json::array();
    for (const Fact& f : p.facts) {
        json rec = atom_to_json(f.atom, p.labels);
        rec["component"] = g.component_name(f.component);
        rec["from"] = f.t_from;
        rec["to"] = f.t_to;
        out["facts"].push_back(std::move(rec));
    }
    out["ics"] = json::array();
    for (const IntegrityConstraint& ic : p.ics) {
        json body = json::array();
        for (const NetworkAtom& a : ic.body)
            body.push_back(atom_to_json(a, p.labels));
        out["ics"].push_back(
            json{{"head", atom_to_json(ic.head, p.labels)}, {"body", std::move(body)}});
    }
    out["rules"] = json::array();
    for (const Rule& r : p.rules) {
        json contagion = json::array();
        for (const Literal& lit : r.neighbor.contagion)
            contagion.push_back(
                json{{"negated", lit.negated}, {"atom", atom_to_json(lit.atom, p.labels)}});
        out["rules"].push_back(json{
            {"head", p.labels[r.head].name},
            {"delta_t", r.delta_t},
            {"target", formula_to_json(r.target_criteria, p.labels)},
            {"edge_criteria", formula_to_json(r.neighbor.edge_criteria, p.labels)},
            {"node_criteria", formula_to_json(r.neighbor.node_criteria, p.labels)},
            {"contagion", std::move(contagion)},
            {"influence", influence_to_json(r.neighbor.ifl)},
        });
    }
    return out;
}

json model_to_json(const FixpointResult& fix, const Program& p, const Graph& g) {
    json out;
    out["tmax"] = p.t_max;
    out["iterations"] = fix.iterations;
    out["consistent"] = !fix.inconsistent;
    if (fix.witness) {
        out["witness"] = json{{"t", fix.witness->t},
                              {"component", g.component_name(fix.witness->component)},
                              {"label", p.labels[fix.witness->label].name}};
    }
    json bounds = json::array();
    if (!fix.inconsistent) {
        for (uint32_t t = 0; t < fix.model.slices.size(); ++t) {
            for (ComponentId c = 0; c < g.component_count(); ++c) {
                for (const auto& [l, bnd] : fix.model.at(t).world(c).entries()) {
                    json rec = interval_to_json(bnd);
                    bounds.push_back(json{{"t", t},
                                          {"component", g.component_name(c)},
                                          {"label", p.labels[l].name},
                                          {"bound", std::move(rec)}});
                }
            }
        }
    }
    out["bounds"] = std::move(bounds);
    return out;
}

json query_result_to_json(const QueryStatement& q, const QueryResult& r, const Program& p,
                          const Graph& g) {
    json out;
    if (q.type == QueryStatement::Type::entails) {
        out["query"] = "entails";
        out["fact"] = atom_to_json(q.fact.atom, p.labels);
        out["component"] = g.component_name(q.fact.component);
        out["from"] = q.fact.t_from;
        out["to"] = q.fact.t_to;
    } else {
        out["query"] = "tight";
        out["label"] = p.labels[q.label].name;
        out["component"] = g.component_name(q.component);
        out["t"] = q.t;
    }
    switch (r.kind) {
    case QueryKind::consistent:
        out["result"] = "consistent";
        break;
    case QueryKind::inconsistent:
        out["result"] = "inconsistent";
        break;
    case QueryKind::entailed:
        out["result"] = "entailed";
        break;
    case QueryKind::not_entailed:
        out["result"] = "not-entailed";
        break;
    case QueryKind::tight_bound:
        out["result"] = "tight-bound";
        break;
    }
    if (r.bound)
        out["bound"] = interval_to_json(*r.bound);
    if (r.vacuous)
        out["vacuous"] = true;
    if (r.witness)
        out["witness"] = json{{"t", r.witness->t},
                              {"component", g.component_name(r.witness->component)},
                              {"label", p.labels[r.witness->label].name}};
    return out;
}

json membership_to_json(const MembershipResult& res) {
    json out;
    out["groups"] = res.groups;
    out["iterations"] = res.iterations;
    json rows = json::array();
    for (NodeId v = 0; v < res.nodes.size(); ++v) {
        for (size_t gi = 0; gi < res.groups.size(); ++gi) {
            const WeightInterval& b = res.at(v, gi);
            json rec = interval_to_json(b);
            rows.push_back(json{
                {"node", res.nodes[v]},
                {"group", res.groups[gi]},
                {"bound", std::move(rec)},
                {"degree", b.is_empty() ? "0" : to_fraction_string(b.lower())},
                {"provenance",
                 res.prov(v, gi) == Provenance::fact_fixed ? "fact-fixed" : "rule-derived"},
            });
        }
    }
    out["memberships"] = std::move(rows);
    return out;
}

} // namespace mancalog
