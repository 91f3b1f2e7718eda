#include "mancalog/model.hpp"

#include "support/generators.hpp"

#include <doctest.h>

using namespace mancalog;
using namespace mancalog::testing;

namespace {

struct Soc {
    LabelTable labels;
    LabelId fem, male, vis_a, vis_b;

    Soc() {
        fem = *labels.add("fem", Fluency::non_fluent);
        male = *labels.add("male", Fluency::non_fluent);
        vis_a = *labels.add("visPgA", Fluency::fluent);
        vis_b = *labels.add("visPgB", Fluency::fluent);
    }
};

NetworkFormula random_any_formula(Rng& rng, const LabelTable& labels, int depth) {
    // mixed-fluency formulas exercise satisfaction, not rule validity
    if (depth > 0 && chance(rng, 0.4)) {
        switch (pick(rng, 0, 2)) {
        case 0:
            return NetworkFormula::negate(random_any_formula(rng, labels, depth - 1));
        case 1:
            return NetworkFormula::conjoin(random_any_formula(rng, labels, depth - 1),
                                           random_any_formula(rng, labels, depth - 1));
        default:
            return NetworkFormula::disjoin(random_any_formula(rng, labels, depth - 1),
                                           random_any_formula(rng, labels, depth - 1));
        }
    }
    LabelId l = static_cast<LabelId>(pick(rng, 0, labels.size() - 1));
    return NetworkFormula::atom({l, random_interval(rng)});
}

World random_world(Rng& rng, const LabelTable& labels) {
    World w;
    for (LabelId l = 0; l < labels.size(); ++l)
        if (chance(rng, 0.6))
            w.set(l, random_interval(rng));
    return w;
}

} // namespace

TEST_CASE("a woman visiting page A satisfies the example formula") {
    Soc soc;
    World w;
    w.set(soc.fem, WeightInterval::point(Rational(1)));
    w.set(soc.male, WeightInterval::point(Rational(0)));
    w.set(soc.vis_a, WeightInterval::point(Rational(1)));
    w.set(soc.vis_b, WeightInterval::point(Rational(0)));

    NetworkFormula f = NetworkFormula::conjoin(
        NetworkFormula::atom({soc.fem, WeightInterval::point(Rational(1))}),
        NetworkFormula::conjoin(
            NetworkFormula::negate(NetworkFormula::atom(
                {soc.vis_a, WeightInterval::closed(Rational(1, 2), Rational(9, 10))})),
            NetworkFormula::negate(NetworkFormula::atom(
                {soc.vis_b, WeightInterval::closed(Rational(1, 10), Rational(7, 10))}))));
    CHECK(world_satisfies(w, f));
}

TEST_CASE("unit-bound atoms are always satisfied, empty-bound atoms never") {
    Soc soc;
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        World w = random_world(rng, soc.labels);
        CHECK(world_satisfies(w, NetworkAtom{soc.fem, WeightInterval::unit()}));
        CHECK(!world_satisfies(w, NetworkAtom{soc.fem, WeightInterval::empty()}));
    }
}

TEST_CASE("absent labels read as the unit interval") {
    Soc soc;
    World w;
    CHECK(w.get(soc.male) == WeightInterval::unit());
    CHECK(!world_satisfies(w, NetworkAtom{soc.male,
                                          WeightInterval::closed(Rational(3, 10), Rational(7, 10))}));
    // storing the unit erases the entry
    w.set(soc.male, WeightInterval::closed(Rational(0), Rational(1)));
    CHECK(w.entries().empty());
}

TEST_CASE("an empty stored bound satisfies every non-empty query bound") {
    Soc soc;
    World w;
    w.set(soc.vis_a, WeightInterval::empty());
    CHECK(world_satisfies(w, NetworkAtom{soc.vis_a,
                                         WeightInterval::closed(Rational(1, 4), Rational(1, 2))}));
    CHECK(world_satisfies(w, NetworkAtom{soc.vis_a, WeightInterval::unit()}));
    CHECK(!world_satisfies(w, NetworkAtom{soc.vis_a, WeightInterval::empty()}));
    CHECK(w.has_empty_bound());
}

TEST_CASE("single positive atoms stay satisfied under world tightening") {
    Soc soc;
    Rng rng(5);
    for (int i = 0; i < 300; ++i) {
        World w = random_world(rng, soc.labels);
        World tighter = w;
        for (const auto& [l, bnd] : w.entries())
            tighter.set(l, random_subinterval(rng, bnd));
        LabelId l = static_cast<LabelId>(pick(rng, 0, soc.labels.size() - 1));
        NetworkAtom a{l, random_interval(rng)};
        if (world_satisfies(w, a))
            CHECK(world_satisfies(tighter, a));
    }
}

TEST_CASE("De Morgan over random formulas and worlds") {
    Soc soc;
    Rng rng(9);
    for (int i = 0; i < 500; ++i) {
        World w = random_world(rng, soc.labels);
        NetworkFormula f1 = random_any_formula(rng, soc.labels, 2);
        NetworkFormula f2 = random_any_formula(rng, soc.labels, 2);
        bool lhs = world_satisfies(w, NetworkFormula::negate(NetworkFormula::conjoin(f1, f2)));
        bool rhs = world_satisfies(w, NetworkFormula::disjoin(NetworkFormula::negate(f1),
                                                              NetworkFormula::negate(f2)));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("graphs reject self loops and duplicate edges") {
    Graph g;
    NodeId a = g.add_node("a");
    NodeId b = g.add_node("b");
    CHECK(!g.add_edge(a, a));
    CHECK(g.add_edge(a, b));
    CHECK(!g.add_edge(a, b));
    CHECK(g.add_edge(b, a)); // reverse direction is a different edge
    CHECK(g.edge_count() == 2);
    CHECK(g.component_name(g.edge_component(0)) == "a->b");
    CHECK(g.max_in_degree() == 1);
    CHECK_THROWS_AS(g.add_node("a"), std::invalid_argument);
}

TEST_CASE("formula fluency classification") {
    Soc soc;
    NetworkFormula non_fluent = NetworkFormula::conjoin(
        NetworkFormula::atom({soc.fem, WeightInterval::point(Rational(1))}),
        NetworkFormula::atom({soc.male, WeightInterval::point(Rational(0))}));
    CHECK(formula_has_only(non_fluent, soc.labels, Fluency::non_fluent));
    CHECK(!formula_has_only(non_fluent, soc.labels, Fluency::fluent));
    NetworkFormula mixed = NetworkFormula::disjoin(
        non_fluent, NetworkFormula::atom({soc.vis_a, WeightInterval::unit()}));
    CHECK(!formula_has_only(mixed, soc.labels, Fluency::non_fluent));
    CHECK(formula_has_only(NetworkFormula::truth(), soc.labels, Fluency::non_fluent));
}
