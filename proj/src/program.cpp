#include "mancalog/program.hpp"

#include <map>
#include <set>
#include <stdexcept>

namespace mancalog {

std::string ValidationIssue::location() const {
    switch (subject) {
    case Subject::fact:
        return "fact " + std::to_string(index);
    case Subject::rule:
        return "rule " + std::to_string(index);
    case Subject::ic:
        return "ic " + std::to_string(index);
    case Subject::program:
        break;
    }
    return "program";
}

InfluenceFunction InfluenceFunction::tip(Rational alpha) {
    if (alpha <= 0 || alpha > 1)
        throw std::invalid_argument("tip parameter must lie in (0,1]");
    InfluenceFunction f;
    f.family_ = Family::tip;
    f.param_ = std::move(alpha);
    return f;
}

InfluenceFunction InfluenceFunction::suppress(Rational beta) {
    if (beta <= 0 || beta > 1)
        throw std::invalid_argument("suppress parameter must lie in (0,1]");
    InfluenceFunction f;
    f.family_ = Family::suppress;
    f.param_ = std::move(beta);
    return f;
}

InfluenceFunction InfluenceFunction::frac_threshold(Rational theta, WeightInterval bnd) {
    if (theta <= 0 || theta > 1)
        throw std::invalid_argument("frac_threshold parameter must lie in (0,1]");
    InfluenceFunction f;
    f.family_ = Family::frac_threshold;
    f.param_ = std::move(theta);
    f.bnd_ = std::move(bnd);
    return f;
}

InfluenceFunction InfluenceFunction::table(std::vector<TableRow> rows) {
    InfluenceFunction f;
    f.family_ = Family::table;
    f.rows_ = std::move(rows);
    return f;
}

WeightInterval influence_eval(const InfluenceFunction& ifl, uint64_t qual, uint64_t elig) {
    if (qual > elig)
        throw std::invalid_argument("influence function called with qual > elig");
    switch (ifl.family()) {
    case InfluenceFunction::Family::tip: {
        Rational miss = rational_pow(1 - ifl.parameter(), static_cast<unsigned long>(qual));
        return WeightInterval::closed(1 - miss, 1);
    }
    case InfluenceFunction::Family::suppress: {
        Rational keep = rational_pow(1 - ifl.parameter(), static_cast<unsigned long>(qual));
        return WeightInterval::closed(0, keep);
    }
    case InfluenceFunction::Family::frac_threshold: {
        if (elig > 0 && Rational(qual) >= ifl.parameter() * Rational(elig))
            return ifl.threshold_bound();
        return WeightInterval::unit();
    }
    case InfluenceFunction::Family::table: {
        const InfluenceFunction::TableRow* best = nullptr;
        for (const auto& row : ifl.rows()) {
            if (row.elig != elig || row.qual > qual)
                continue;
            if (!best || row.qual > best->qual)
                best = &row;
        }
        return best ? best->value : WeightInterval::unit();
    }
    }
    return WeightInterval::unit();
}

namespace {

void check_formula_labels(const NetworkFormula& f, const Program& p, Fluency wanted,
                          size_t rule_index, const char* what,
                          std::vector<ValidationIssue>& issues) {
    std::vector<LabelId> ids;
    f.collect_labels(ids);
    for (LabelId id : ids) {
        if (p.labels[id].fluency != wanted) {
            issues.push_back({ValidationIssue::Subject::rule, rule_index,
                              std::string(what) + " must be a non-fluent formula, but '" +
                                  p.labels[id].name + "' is fluent"});
            return;
        }
    }
}

} // namespace

std::vector<ValidationIssue> validate_program(const Program& p, const Graph& g) {
    std::vector<ValidationIssue> issues;

    std::map<std::pair<ComponentId, LabelId>, size_t> non_fluent_seen;
    for (size_t i = 0; i < p.facts.size(); ++i) {
        const Fact& f = p.facts[i];
        auto issue = [&](std::string msg) {
            issues.push_back({ValidationIssue::Subject::fact, i, std::move(msg)});
        };
        if (f.component >= g.component_count()) {
            issue("component does not exist in the graph");
            continue;
        }
        if (f.atom.label >= p.labels.size()) {
            issue("unknown label");
            continue;
        }
        if (f.t_from > f.t_to)
            issue("time window is reversed");
        if (f.t_to > p.t_max)
            issue("time window exceeds tmax");
        if (!p.labels.is_fluent(f.atom.label)) {
            if (f.t_from != 0 || f.t_to != p.t_max)
                issue("non-fluent fact must span [0,tmax]");
            auto key = std::make_pair(f.component, f.atom.label);
            auto it = non_fluent_seen.find(key);
            if (it != non_fluent_seen.end())
                issue("non-fluent label '" + p.labels[f.atom.label].name +
                      "' already fixed on this component by fact " + std::to_string(it->second));
            else
                non_fluent_seen.emplace(key, i);
        }
    }

    for (size_t i = 0; i < p.ics.size(); ++i) {
        const IntegrityConstraint& ic = p.ics[i];
        auto issue = [&](std::string msg) {
            issues.push_back({ValidationIssue::Subject::ic, i, std::move(msg)});
        };
        if (!p.labels.is_fluent(ic.head.label))
            issue("integrity constraint head must be a fluent label");
        if (ic.head.bnd.is_empty())
            issue("integrity constraint head bound must not be empty");
    }

    for (size_t i = 0; i < p.rules.size(); ++i) {
        const Rule& r = p.rules[i];
        auto issue = [&](std::string msg) {
            issues.push_back({ValidationIssue::Subject::rule, i, std::move(msg)});
        };
        if (!p.labels.is_fluent(r.head))
            issue("rule head must be a fluent label");
        check_formula_labels(r.target_criteria, p, Fluency::non_fluent, i, "target criteria",
                             issues);
        check_formula_labels(r.neighbor.edge_criteria, p, Fluency::non_fluent, i,
                             "neighbor edge criterion", issues);
        check_formula_labels(r.neighbor.node_criteria, p, Fluency::non_fluent, i,
                             "neighbor node criterion", issues);
        if (r.neighbor.ifl.family() == InfluenceFunction::Family::table) {
            const auto& rows = r.neighbor.ifl.rows();
            for (size_t a = 0; a < rows.size(); ++a) {
                if (rows[a].qual > rows[a].elig)
                    issue("influence table row " + std::to_string(a) + " has qual > elig");
                if (rows[a].value.is_empty())
                    issue("influence table row " + std::to_string(a) + " maps to empty");
                for (size_t b = 0; b < rows.size(); ++b) {
                    if (a == b)
                        continue;
                    if (rows[a].elig == rows[b].elig && rows[a].qual == rows[b].qual && b > a)
                        issue("influence table rows " + std::to_string(a) + " and " +
                              std::to_string(b) + " are duplicates");
                    // Narrowing axiom: a larger qualifying count must give
                    // a subset of the bound for a smaller one.
                    if (rows[a].elig == rows[b].elig && rows[b].qual > rows[a].qual &&
                        !interval_subseteq(rows[b].value, rows[a].value))
                        issue("influence table violates narrowing between qual=" +
                              std::to_string(rows[a].qual) + " and qual=" +
                              std::to_string(rows[b].qual) + " at elig=" +
                              std::to_string(rows[a].elig));
                }
            }
        }
        if (r.neighbor.ifl.family() == InfluenceFunction::Family::frac_threshold &&
            r.neighbor.ifl.threshold_bound().is_empty())
            issue("frac_threshold bound must not be empty");
    }

    return issues;
}

} // namespace mancalog
