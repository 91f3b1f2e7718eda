#include "mancalog/membership.hpp"

#include "support/generators.hpp"

#include <doctest.h>

using namespace mancalog;
using namespace mancalog::testing;

namespace {

MembershipProblem star_problem(int spokes, Rational alpha) {
    MembershipProblem prob;
    prob.graph.add_node("center");
    for (int i = 0; i < spokes; ++i) {
        NodeId v = prob.graph.add_node("s" + std::to_string(i));
        prob.graph.add_edge(v, 0);
    }
    prob.groups = {"g1"};
    for (int i = 0; i < spokes; ++i)
        prob.known.emplace(static_cast<NodeId>(i + 1), 0);
    prob.finalize_params();
    prob.params.alpha[0] = alpha;
    return prob;
}

MembershipProblem random_problem(Rng& rng) {
    MembershipProblem prob;
    prob.graph = random_graph(rng, 2, 25);
    uint32_t groups = static_cast<uint32_t>(pick(rng, 1, 4));
    for (uint32_t gi = 0; gi < groups; ++gi)
        prob.groups.push_back("g" + std::to_string(gi));
    for (NodeId v = 0; v < prob.graph.node_count(); ++v)
        if (chance(rng, 0.4))
            prob.known.emplace(v, static_cast<uint32_t>(pick(rng, 0, groups - 1)));
    prob.finalize_params();
    for (auto& a : prob.params.alpha)
        a = Rational(pick(rng, 1, 4), 4);
    if (chance(rng, 0.3))
        prob.params.theta = Rational(3, 4);
    return prob;
}

} // namespace

TEST_CASE("encoding spells out point facts, priors and the guard label") {
    MembershipProblem prob;
    prob.graph.add_node("known");
    prob.graph.add_node("unknown");
    prob.graph.add_edge(0, 1);
    prob.groups = {"g1", "g2"};
    prob.known.emplace(0, 0);
    prob.finalize_params();

    Program p = encode_membership(prob);
    auto unk = p.labels.find("unk");
    REQUIRE(unk);
    CHECK(!p.labels.is_fluent(*unk));
    // known node: [1,1] own group, [0,0] other; unknown node: [0,1] per
    // group; one guard fact per node
    CHECK(p.facts.size() == 6);
    int unit_priors = 0, guard = 0, one_facts = 0, zero_facts = 0;
    for (const Fact& f : p.facts) {
        if (f.atom.label == *unk) {
            ++guard;
            CHECK(f.t_from == 0);
            CHECK(f.t_to == p.t_max);
        } else if (f.atom.bnd.is_unit()) {
            ++unit_priors;
            CHECK(f.component == 1);
        } else if (f.atom.bnd == WeightInterval::point(Rational(1))) {
            ++one_facts;
        } else if (f.atom.bnd == WeightInterval::point(Rational(0))) {
            ++zero_facts;
        }
    }
    CHECK(guard == 2);
    CHECK(unit_priors == 2);
    CHECK(one_facts == 1);
    CHECK(zero_facts == 1);

    auto rules = generate_rules(prob, p.labels);
    REQUIRE(rules.size() == 2);
    CHECK(rules[0].delta_t == 0);
    CHECK(rules[0].target_criteria.as_atom().label == *unk);
    CHECK(rules[0].neighbor.ifl.family() == InfluenceFunction::Family::tip);
}

TEST_CASE("known members read back as basis vectors") {
    MembershipProblem prob = star_problem(3, Rational(1, 2));
    prob.groups.push_back("g2");
    prob.finalize_params();
    MembershipResult res = solve_membership(prob);
    for (int i = 0; i < 3; ++i) {
        NodeId v = static_cast<NodeId>(i + 1);
        CHECK(res.degree(v, 0) == Rational(1));
        CHECK(res.at(v, 1) == WeightInterval::point(Rational(0)));
        CHECK(res.prov(v, 0) == Provenance::fact_fixed);
    }
}

TEST_CASE("star centers accumulate one minus a power of the miss rate") {
    for (int k : {1, 2, 3, 5}) {
        MembershipProblem prob = star_problem(k, Rational(1, 2));
        MembershipResult res = solve_membership(prob);
        Rational expect = Rational(1) - rational_pow(Rational(1, 2), k);
        CHECK(res.degree(0, 0) == expect);
        CHECK(res.at(0, 0).upper() == Rational(1));
        CHECK(res.prov(0, 0) == Provenance::rule_derived);
    }
}

TEST_CASE("isolated unknown nodes keep degree zero") {
    MembershipProblem prob;
    prob.graph.add_node("a");
    prob.graph.add_node("b");
    prob.graph.add_edge(0, 1);
    prob.graph.add_node("loner");
    prob.groups = {"g1"};
    prob.known.emplace(0, 0);
    prob.finalize_params();
    MembershipResult res = solve_membership(prob);
    CHECK(res.degree(2, 0) == Rational(0));
    CHECK(res.at(2, 0).is_unit());
}

TEST_CASE("a lowered contagion threshold propagates along a chain") {
    MembershipProblem prob;
    prob.graph.add_node("u1");
    prob.graph.add_node("u2");
    prob.graph.add_node("u3");
    prob.graph.add_edge(0, 1);
    prob.graph.add_edge(1, 2);
    prob.groups = {"g1"};
    prob.known.emplace(0, 0);
    prob.finalize_params();
    prob.params.alpha[0] = Rational(3, 4);
    prob.params.theta = Rational(3, 4);

    MembershipResult res = solve_membership(prob);
    CHECK(res.at(1, 0) == WeightInterval::closed(Rational(3, 4), Rational(1)));
    CHECK(res.at(2, 0) == WeightInterval::closed(Rational(3, 4), Rational(1)));

    SUBCASE("the default threshold stops at direct neighbors") {
        prob.params.theta = Rational(1);
        MembershipResult strict = solve_membership(prob);
        CHECK(strict.at(1, 0) == WeightInterval::closed(Rational(3, 4), Rational(1)));
        CHECK(strict.at(2, 0).is_unit());
    }
}

TEST_CASE("no unknown nodes means nothing to derive") {
    MembershipProblem prob;
    prob.graph.add_node("a");
    prob.graph.add_node("b");
    prob.graph.add_edge(0, 1);
    prob.groups = {"g1"};
    prob.known.emplace(0, 0u);
    prob.known.emplace(1, 0u);
    prob.finalize_params();
    MembershipResult res = solve_membership(prob);
    for (NodeId v = 0; v < 2; ++v)
        CHECK(res.degree(v, 0) == Rational(1));
}

TEST_CASE("an empty known set leaves every bound untouched") {
    Rng rng(101);
    MembershipProblem prob;
    prob.graph = random_graph(rng, 2, 10);
    prob.groups = {"g1", "g2"};
    prob.finalize_params();
    MembershipResult res = solve_membership(prob);
    for (NodeId v = 0; v < prob.graph.node_count(); ++v)
        for (size_t gi = 0; gi < 2; ++gi)
            CHECK(res.at(v, gi).is_unit());
}

TEST_CASE("generated encodings never collapse") {
    Rng rng(103);
    for (int trial = 0; trial < 60; ++trial) {
        MembershipProblem prob = random_problem(rng);
        MembershipResult res = solve_membership(prob); // throws on collapse
        for (const auto& [v, gi] : prob.known)
            CHECK(res.degree(v, gi) == Rational(1));
    }
}

TEST_CASE("one more confirmed neighbor never lowers a degree") {
    Rng rng(107);
    for (int trial = 0; trial < 30; ++trial) {
        MembershipProblem prob = random_problem(rng);
        // find an unknown node with an unknown in-neighbor to upgrade
        NodeId target = UINT32_MAX, upgrade = UINT32_MAX;
        for (NodeId v = 0; v < prob.graph.node_count() && target == UINT32_MAX; ++v) {
            if (prob.known.count(v))
                continue;
            for (const auto& [u, e] : prob.graph.in_edges(v)) {
                if (!prob.known.count(u)) {
                    target = v;
                    upgrade = u;
                    break;
                }
            }
        }
        if (target == UINT32_MAX)
            continue;
        MembershipResult before = solve_membership(prob);
        uint32_t gi = static_cast<uint32_t>(pick(rng, 0, prob.groups.size() - 1));
        prob.known.emplace(upgrade, gi);
        MembershipResult after = solve_membership(prob);
        CHECK(after.degree(target, gi) >= before.degree(target, gi));
    }
}

TEST_CASE("histogram bins by lower bound and skips fixed ones and zeros") {
    MembershipProblem prob = star_problem(3, Rational(1, 2));
    MembershipResult res = solve_membership(prob);
    // lower bounds: three fact-fixed 1s, one derived 7/8
    auto bins = membership_histogram(res, Rational(1, 4));
    REQUIRE(bins.size() == 4);
    CHECK(bins[3].lo == Rational(3, 4));
    CHECK(bins[3].hi == Rational(1));
    CHECK(bins[3].count == 1);
    CHECK(bins[0].count + bins[1].count + bins[2].count == 0);

    SUBCASE("bin widths must divide one evenly") {
        CHECK_THROWS_AS(membership_histogram(res, Rational(1, 3)), std::invalid_argument);
        CHECK_THROWS_AS(membership_histogram(res, Rational(2, 5)), std::invalid_argument);
    }
    SUBCASE("an all-unknown network yields an empty histogram") {
        MembershipProblem empty;
        empty.graph.add_node("a");
        empty.graph.add_node("b");
        empty.graph.add_edge(0, 1);
        empty.groups = {"g1"};
        empty.finalize_params();
        auto hist = membership_histogram(solve_membership(empty), Rational(1, 4));
        for (const auto& bin : hist)
            CHECK(bin.count == 0);
    }
}

TEST_CASE("rule-derived exact ones still count in the histogram") {
    MembershipProblem prob = star_problem(2, Rational(1));
    MembershipResult res = solve_membership(prob);
    CHECK(res.degree(0, 0) == Rational(1));
    auto bins = membership_histogram(res, Rational(1, 2));
    CHECK(bins[1].count == 1); // derived 1 kept, fact-fixed 1s dropped
}

TEST_CASE("encoding rejects foreign nodes in the known map") {
    MembershipProblem prob;
    prob.graph.add_node("a");
    prob.groups = {"g"};
    prob.known.emplace(5, 0u);
    prob.finalize_params();
    CHECK_THROWS_AS(encode_membership(prob), std::invalid_argument);
}

TEST_CASE("extra rounds leave later time points unconstrained by default") {
    MembershipProblem prob = star_problem(3, Rational(1, 2));
    prob.params.rounds = 1;
    MembershipResult res = solve_membership(prob);
    // point facts live at t=0 only, so the readout at t=rounds is open
    CHECK(res.at(0, 0).is_unit());
    CHECK(res.at(1, 0).is_unit());

    prob.params.rounds = 0;
    MembershipResult base = solve_membership(prob);
    CHECK(base.degree(0, 0) == Rational(7, 8));
}
