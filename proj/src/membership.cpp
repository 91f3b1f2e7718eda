#include "mancalog/membership.hpp"

#include <stdexcept>

namespace mancalog {

void MembershipProblem::finalize_params() {
    params.alpha.resize(groups.size(), Rational(1, 2));
}

namespace {

constexpr const char* kUnknownLabel = "unk";

LabelTable membership_vocabulary(const MembershipProblem& prob) {
    LabelTable labels;
    for (const std::string& gname : prob.groups) {
        if (!labels.add(gname, Fluency::fluent))
            throw std::invalid_argument("duplicate group name: " + gname);
    }
    if (!labels.add(kUnknownLabel, Fluency::non_fluent))
        throw std::invalid_argument("group name collides with the guard label");
    return labels;
}

} // namespace

Program encode_membership(const MembershipProblem& prob) {
    if (prob.groups.empty())
        throw std::invalid_argument("membership problem needs at least one group");
    for (const auto& [v, gi] : prob.known) {
        if (v >= prob.graph.node_count())
            throw std::invalid_argument("known member is not a node of the graph");
        if (gi >= prob.groups.size())
            throw std::invalid_argument("known member references an unknown group");
    }

    Program p;
    p.labels = membership_vocabulary(prob);
    p.t_max = prob.params.rounds;
    LabelId unk = *p.labels.find(kUnknownLabel);

    const auto one = WeightInterval::point(Rational(1));
    const auto zero = WeightInterval::point(Rational(0));
    for (NodeId v = 0; v < prob.graph.node_count(); ++v) {
        auto it = prob.known.find(v);
        if (it != prob.known.end()) {
            for (uint32_t gi = 0; gi < prob.groups.size(); ++gi) {
                LabelId gl = *p.labels.find(prob.groups[gi]);
                p.facts.push_back({{gl, gi == it->second ? one : zero}, v, 0, 0});
            }
            p.facts.push_back({{unk, zero}, v, 0, p.t_max});
        } else {
            for (uint32_t gi = 0; gi < prob.groups.size(); ++gi) {
                LabelId gl = *p.labels.find(prob.groups[gi]);
                p.facts.push_back({{gl, WeightInterval::unit()}, v, 0, 0});
            }
            p.facts.push_back({{unk, one}, v, 0, p.t_max});
        }
    }
    return p;
}

std::vector<Rule> generate_rules(const MembershipProblem& prob, const LabelTable& labels) {
    auto unk = labels.find(kUnknownLabel);
    if (!unk)
        throw std::invalid_argument("vocabulary lacks the guard label");
    MembershipParams params = prob.params;
    if (params.alpha.size() < prob.groups.size())
        params.alpha.resize(prob.groups.size(), Rational(1, 2));

    std::vector<Rule> rules;
    for (uint32_t gi = 0; gi < prob.groups.size(); ++gi) {
        auto gl = labels.find(prob.groups[gi]);
        if (!gl)
            throw std::invalid_argument("vocabulary lacks group label " + prob.groups[gi]);
        Rule r;
        r.head = *gl;
        r.delta_t = 0;
        r.target_criteria = NetworkFormula::atom({*unk, WeightInterval::point(Rational(1))});
        r.neighbor.edge_criteria = NetworkFormula::truth();
        r.neighbor.node_criteria = NetworkFormula::truth();
        r.neighbor.contagion = {
            {false, {*gl, WeightInterval::closed(params.theta, Rational(1))}}};
        r.neighbor.ifl = InfluenceFunction::tip(params.alpha[gi]);
        rules.push_back(std::move(r));
    }
    return rules;
}

MembershipResult solve_membership(const MembershipProblem& prob, const EngineOptions& opts) {
    Program p = encode_membership(prob);
    p.rules = generate_rules(prob, p.labels);

    FixpointResult fix = gamma_fixpoint(p, prob.graph, opts);
    if (fix.inconsistent)
        throw std::logic_error("membership encoding produced an inconsistent program");

    MembershipResult res;
    res.groups = prob.groups;
    res.nodes.reserve(prob.graph.node_count());
    for (NodeId v = 0; v < prob.graph.node_count(); ++v)
        res.nodes.push_back(prob.graph.node_name(v));
    res.iterations = fix.iterations;
    res.bounds.reserve(static_cast<size_t>(prob.graph.node_count()) * prob.groups.size());
    res.provenance.reserve(res.bounds.capacity());
    for (NodeId v = 0; v < prob.graph.node_count(); ++v) {
        bool fixed = prob.known.count(v) > 0;
        for (uint32_t gi = 0; gi < prob.groups.size(); ++gi) {
            LabelId gl = *p.labels.find(prob.groups[gi]);
            res.bounds.push_back(fix.model.bound(prob.params.rounds, v, gl));
            res.provenance.push_back(fixed ? Provenance::fact_fixed : Provenance::rule_derived);
        }
    }
    return res;
}

std::vector<HistogramBin> membership_histogram(const MembershipResult& res,
                                               const Rational& bin_width) {
    // Bin boundaries must land on terminating decimals: the width is 1/n
    // with n a product of twos and fives (1/4 works, 1/3 does not).
    bool ok = bin_width > 0 && bin_width <= 1 && denominator(Rational(1) / bin_width) == 1;
    if (ok) {
        BigInt n = denominator(bin_width);
        while (n % 2 == 0)
            n /= 2;
        while (n % 5 == 0)
            n /= 5;
        ok = n == 1;
    }
    if (!ok)
        throw std::invalid_argument("bin width must divide 1 evenly");
    uint64_t bins = (Rational(1) / bin_width).convert_to<uint64_t>();

    std::vector<HistogramBin> out;
    out.reserve(bins);
    for (uint64_t k = 0; k < bins; ++k)
        out.push_back({Rational(k) * bin_width, Rational(k + 1) * bin_width, 0});

    for (NodeId v = 0; v < res.nodes.size(); ++v) {
        for (size_t gi = 0; gi < res.groups.size(); ++gi) {
            const WeightInterval& b = res.at(v, gi);
            if (b.is_empty())
                continue;
            const Rational& lower = b.lower();
            if (lower == 0)
                continue;
            if (lower == 1 && res.prov(v, gi) == Provenance::fact_fixed)
                continue;
            // lower falls in ((k-1)w, kw]; k = ceil(lower / w)
            Rational q = lower / bin_width;
            BigInt k = numerator(q) / denominator(q);
            if (k * denominator(q) != numerator(q))
                k += 1;
            out[k.convert_to<uint64_t>() - 1].count += 1;
        }
    }
    return out;
}

} // namespace mancalog
