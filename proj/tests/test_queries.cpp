#include "mancalog/queries.hpp"

#include "support/generators.hpp"

#include <doctest.h>

using namespace mancalog;
using namespace mancalog::testing;

namespace {

WeightInterval civ(int ln, int ld, int un, int ud) {
    return WeightInterval::closed(Rational(ln, ld), Rational(un, ud));
}

struct TwoFact {
    Graph g;
    Program p;
    LabelId l;

    TwoFact() {
        g.add_node("v");
        l = *p.labels.add("L", Fluency::fluent);
        p.t_max = 0;
        p.facts.push_back({{l, civ(2, 5, 9, 10)}, 0, 0, 0});
        p.facts.push_back({{l, civ(3, 5, 1, 1)}, 0, 0, 0});
    }
};

} // namespace

TEST_CASE("consistency of simple programs") {
    Graph g;
    g.add_node("v");
    Program empty;
    empty.labels.add("L", Fluency::fluent);
    CHECK(consistency(empty, g, false).kind == QueryKind::consistent);
    CHECK(consistency(empty, g, true).kind == QueryKind::consistent);

    TwoFact fx;
    CHECK(consistency(fx.p, fx.g, false).kind == QueryKind::consistent);

    fx.p.facts[0].atom.bnd = civ(0, 1, 3, 10);
    fx.p.facts[1].atom.bnd = civ(1, 2, 1, 1);
    QueryResult r = consistency(fx.p, fx.g, false);
    CHECK(r.kind == QueryKind::inconsistent);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->t == 0);
    CHECK(r.witness->component == 0);
}

TEST_CASE("constraint against a conflicting fact is inconsistent") {
    Graph g;
    g.add_node("c");
    Program p;
    LabelId fem = *p.labels.add("fem", Fluency::non_fluent);
    LabelId male = *p.labels.add("male", Fluency::fluent);
    p.t_max = 0;
    p.facts.push_back({{fem, civ(1, 1, 1, 1)}, 0, 0, 0});
    p.ics.push_back({{male, civ(0, 1, 0, 1)}, {{fem, civ(1, 1, 1, 1)}}});
    p.facts.push_back({{male, civ(1, 1, 1, 1)}, 0, 0, 0});
    CHECK(consistency(p, g, false).kind == QueryKind::inconsistent);
}

TEST_CASE("entailment reads the minimal model") {
    TwoFact fx;
    // model bound is [3/5, 9/10]
    CHECK(entails(fx.p, fx.g, {{fx.l, civ(1, 2, 1, 1)}, 0, 0, 0}, false).kind ==
          QueryKind::entailed);
    CHECK(entails(fx.p, fx.g, {{fx.l, civ(7, 10, 4, 5)}, 0, 0, 0}, false).kind ==
          QueryKind::not_entailed);
    CHECK(entails(fx.p, fx.g, {{fx.l, WeightInterval::unit()}, 0, 0, 0}, false).kind ==
          QueryKind::entailed);
    CHECK_THROWS_AS(entails(fx.p, fx.g, {{fx.l, civ(0, 1, 1, 1)}, 7, 0, 0}, false),
                    std::invalid_argument);
}

TEST_CASE("inconsistent programs entail vacuously") {
    TwoFact fx;
    fx.p.facts[0].atom.bnd = civ(0, 1, 3, 10);
    fx.p.facts[1].atom.bnd = civ(1, 2, 1, 1);
    QueryResult r = entails(fx.p, fx.g, {{fx.l, civ(0, 1, 1, 100)}, 0, 0, 0}, false);
    CHECK(r.kind == QueryKind::entailed);
    CHECK(r.vacuous);
}

TEST_CASE("tight bounds are the minimal model's bounds") {
    TwoFact fx;
    QueryResult r = tight_bound(fx.p, fx.g, 0, fx.l, 0, false);
    CHECK(r.kind == QueryKind::tight_bound);
    CHECK(*r.bound == civ(3, 5, 9, 10));

    LabelId other = *fx.p.labels.add("M", Fluency::fluent);
    QueryResult unconstrained = tight_bound(fx.p, fx.g, 0, other, 0, false);
    CHECK(unconstrained.bound->is_unit());
}

TEST_CASE("entailment coincides with tight-bound containment over windows") {
    Rng rng(83);
    GenOptions opts;
    opts.max_nodes = 8;
    opts.max_rules = 5;
    for (int trial = 0; trial < 8; ++trial) {
        GeneratedProgram gen = random_consistent_program(rng, opts);
        FixpointResult fix = gamma_fixpoint(gen.program, gen.graph);
        for (int q = 0; q < 25; ++q) {
            ComponentId c =
                static_cast<ComponentId>(pick(rng, 0, gen.graph.component_count() - 1));
            LabelId l = static_cast<LabelId>(pick(rng, 0, gen.program.labels.size() - 1));
            uint32_t t1 = static_cast<uint32_t>(pick(rng, 0, gen.program.t_max));
            uint32_t t2 = static_cast<uint32_t>(pick(rng, t1, gen.program.t_max));
            WeightInterval query = chance(rng, 0.3) ? WeightInterval::unit() : random_interval(rng);
            Fact f{{l, query}, c, t1, t2};
            bool by_model = entails_in(fix, gen.program, f).kind == QueryKind::entailed;
            bool by_tight = true;
            for (uint32_t t = t1; t <= t2; ++t) {
                QueryResult tb = tight_bound_in(fix, c, l, t);
                // the unit query bound is entailed regardless; mirror
                // world-level satisfaction for the comparison
                if (query.is_unit())
                    continue;
                if (query.is_empty() || !interval_subseteq(*tb.bound, query)) {
                    by_tight = false;
                    break;
                }
            }
            CHECK(by_model == by_tight);
        }
    }
}

TEST_CASE("entailment is monotone in the queried bound") {
    Rng rng(89);
    GenOptions opts;
    opts.max_nodes = 8;
    opts.max_rules = 5;
    GeneratedProgram gen = random_consistent_program(rng, opts);
    FixpointResult fix = gamma_fixpoint(gen.program, gen.graph);
    for (int q = 0; q < 100; ++q) {
        ComponentId c = static_cast<ComponentId>(pick(rng, 0, gen.graph.component_count() - 1));
        LabelId l = static_cast<LabelId>(pick(rng, 0, gen.program.labels.size() - 1));
        uint32_t t1 = static_cast<uint32_t>(pick(rng, 0, gen.program.t_max));
        uint32_t t2 = static_cast<uint32_t>(pick(rng, t1, gen.program.t_max));
        WeightInterval wide = random_interval(rng);
        WeightInterval narrow = random_subinterval(rng, wide);
        Fact narrow_fact{{l, narrow}, c, t1, t2};
        Fact wide_fact{{l, wide}, c, t1, t2};
        if (entails_in(fix, gen.program, narrow_fact).kind == QueryKind::entailed)
            CHECK(entails_in(fix, gen.program, wide_fact).kind == QueryKind::entailed);
    }
}

TEST_CASE("consistency agrees with exhaustive model search on tiny instances") {
    Rng rng(97);
    int verified = 0;
    for (int trial = 0; trial < 120 && verified < 40; ++trial) {
        TinyInstance tiny = random_tiny_instance(rng);
        if (!validate_program(tiny.program, tiny.graph).empty())
            continue;
        auto brute = brute_force_consistent(tiny.program, tiny.graph);
        if (!brute)
            continue; // assignment space above the cap
        bool fix = consistency(tiny.program, tiny.graph, false).kind == QueryKind::consistent;
        CHECK(fix == *brute);
        ++verified;
    }
    CHECK(verified == 40);
}
