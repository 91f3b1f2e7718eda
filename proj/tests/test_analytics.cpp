#include "mancalog/analytics.hpp"

#include "support/generators.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

using namespace mancalog;
using namespace mancalog::testing;

namespace {

MembershipResult fake_result(const Graph& g, const std::vector<Rational>& degrees) {
    MembershipResult res;
    res.groups = {"g1"};
    for (NodeId v = 0; v < g.node_count(); ++v) {
        res.nodes.push_back(g.node_name(v));
        res.bounds.push_back(WeightInterval::closed(degrees[v], Rational(1)));
        res.provenance.push_back(degrees[v] == 1 ? Provenance::fact_fixed
                                                 : Provenance::rule_derived);
    }
    return res;
}

// Brute-force k-core: repeatedly delete nodes of undirected degree < k.
std::map<NodeId, uint32_t> brute_shells(const ThresholdSubgraph& sub) {
    std::set<std::pair<NodeId, NodeId>> und;
    for (auto [a, b] : sub.edges)
        und.insert({std::min(a, b), std::max(a, b)});
    std::map<NodeId, uint32_t> shell;
    for (NodeId v : sub.nodes)
        shell[v] = 0;
    for (uint32_t k = 1;; ++k) {
        std::set<NodeId> alive(sub.nodes.begin(), sub.nodes.end());
        for (;;) {
            bool removed = false;
            for (auto it = alive.begin(); it != alive.end();) {
                size_t deg = 0;
                for (const auto& [a, b] : und) {
                    if ((a == *it && alive.count(b)) || (b == *it && alive.count(a)))
                        ++deg;
                }
                if (deg < k) {
                    it = alive.erase(it);
                    removed = true;
                } else {
                    ++it;
                }
            }
            if (!removed)
                break;
        }
        if (alive.empty())
            break;
        for (NodeId v : alive)
            shell[v] = k;
    }
    return shell;
}

} // namespace

TEST_CASE("threshold subgraphs keep qualifying nodes and induced edges") {
    Graph g;
    g.add_node("a");
    g.add_node("b");
    g.add_node("c");
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 0);
    MembershipResult res = fake_result(g, {Rational(1), Rational(7, 8), Rational(0)});

    ThresholdSubgraph sub = threshold_subgraph(res, g, "g1", Rational(3, 10));
    CHECK(sub.nodes == std::vector<NodeId>{0, 1});
    REQUIRE(sub.edges.size() == 1);
    CHECK(sub.edges[0] == std::pair<NodeId, NodeId>{0, 1});

    CHECK(threshold_subgraph(res, g, "g1", Rational(0)).nodes.size() == 3);
    CHECK(threshold_subgraph(res, g, "g1", Rational(1)).nodes == std::vector<NodeId>{0});
    CHECK_THROWS_AS(threshold_subgraph(res, g, "nope", Rational(0)), std::invalid_argument);
}

TEST_CASE("threshold filtering is antitone in the threshold") {
    Rng rng(109);
    Graph g = random_graph(rng, 3, 20);
    std::vector<Rational> degrees;
    for (NodeId v = 0; v < g.node_count(); ++v)
        degrees.push_back(random_rational(rng));
    MembershipResult res = fake_result(g, degrees);
    Rational t1 = random_rational(rng);
    Rational t2 = random_rational(rng);
    if (t1 > t2)
        std::swap(t1, t2);
    auto low = threshold_subgraph(res, g, "g1", t1);
    auto high = threshold_subgraph(res, g, "g1", t2);
    for (NodeId v : high.nodes)
        CHECK(std::find(low.nodes.begin(), low.nodes.end(), v) != low.nodes.end());
}

TEST_CASE("triangle with a pendant peels into shells two and one") {
    Graph g;
    for (const char* n : {"a", "b", "c", "d"})
        g.add_node(n);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 0);
    g.add_edge(0, 3); // pendant
    MembershipResult res =
        fake_result(g, {Rational(1), Rational(1), Rational(1), Rational(1)});
    ThresholdSubgraph sub = threshold_subgraph(res, g, "g1", Rational(0));
    ShellAssignment shells = shell_decomposition(sub);
    std::map<NodeId, uint32_t> got;
    for (size_t i = 0; i < shells.nodes.size(); ++i)
        got[shells.nodes[i]] = shells.shell[i];
    CHECK(got[0] == 2);
    CHECK(got[1] == 2);
    CHECK(got[2] == 2);
    CHECK(got[3] == 1);
    CHECK(shells.max_shell == 2);
    CHECK(shells.is_core(0));
    CHECK(!shells.is_core(3));
}

TEST_CASE("an isolated node sits in shell zero") {
    Graph g;
    g.add_node("only");
    MembershipResult res = fake_result(g, {Rational(1)});
    ShellAssignment shells = shell_decomposition(threshold_subgraph(res, g, "g1", Rational(0)));
    CHECK(shells.shell == std::vector<uint32_t>{0});
    CHECK(shells.max_shell == 0);
}

TEST_CASE("the complete graph on four nodes is its own three-core") {
    Graph g;
    for (int i = 0; i < 4; ++i)
        g.add_node("k" + std::to_string(i));
    for (NodeId a = 0; a < 4; ++a)
        for (NodeId b = 0; b < 4; ++b)
            if (a != b)
                g.add_edge(a, b);
    MembershipResult res =
        fake_result(g, {Rational(1), Rational(1), Rational(1), Rational(1)});
    ShellAssignment shells = shell_decomposition(threshold_subgraph(res, g, "g1", Rational(0)));
    for (uint32_t s : shells.shell)
        CHECK(s == 3);
}

TEST_CASE("an empty subgraph cannot be decomposed") {
    Graph g;
    g.add_node("a");
    MembershipResult res = fake_result(g, {Rational(0)});
    ThresholdSubgraph sub = threshold_subgraph(res, g, "g1", Rational(1, 2));
    CHECK(sub.nodes.empty());
    CHECK_THROWS_AS(shell_decomposition(sub), std::invalid_argument);
}

TEST_CASE("peeling agrees with the brute-force core fixed point") {
    Rng rng(113);
    for (int trial = 0; trial < 40; ++trial) {
        Graph g = random_graph(rng, 2, 20);
        std::vector<Rational> degrees;
        for (NodeId v = 0; v < g.node_count(); ++v)
            degrees.push_back(Rational(1));
        MembershipResult res = fake_result(g, degrees);
        ThresholdSubgraph sub = threshold_subgraph(res, g, "g1", Rational(0));
        ShellAssignment shells = shell_decomposition(sub);
        auto expect = brute_shells(sub);
        for (size_t i = 0; i < shells.nodes.size(); ++i)
            CHECK(shells.shell[i] == expect.at(shells.nodes[i]));
    }
}

TEST_CASE("shell indices are invariant under node relabeling") {
    Rng rng(127);
    for (int trial = 0; trial < 15; ++trial) {
        Graph g = random_graph(rng, 2, 12);
        uint32_t n = g.node_count();
        std::vector<NodeId> perm(n);
        for (NodeId v = 0; v < n; ++v)
            perm[v] = v;
        std::shuffle(perm.begin(), perm.end(), rng);

        Graph h;
        std::vector<std::string> names(n);
        for (NodeId v = 0; v < n; ++v)
            names[perm[v]] = "m" + std::to_string(perm[v]);
        for (NodeId v = 0; v < n; ++v)
            h.add_node("m" + std::to_string(v));
        for (EdgeId e = 0; e < g.edge_count(); ++e)
            h.add_edge(perm[g.edge(e).first], perm[g.edge(e).second]);

        std::vector<Rational> ones_g(n, Rational(1));
        MembershipResult res_g = fake_result(g, ones_g);
        MembershipResult res_h = fake_result(h, ones_g);
        auto shells_g = shell_decomposition(threshold_subgraph(res_g, g, "g1", Rational(0)));
        auto shells_h = shell_decomposition(threshold_subgraph(res_h, h, "g1", Rational(0)));
        std::map<NodeId, uint32_t> by_id_h;
        for (size_t i = 0; i < shells_h.nodes.size(); ++i)
            by_id_h[shells_h.nodes[i]] = shells_h.shell[i];
        for (size_t i = 0; i < shells_g.nodes.size(); ++i)
            CHECK(shells_g.shell[i] == by_id_h.at(perm[shells_g.nodes[i]]));
    }
}
