#pragma once

#include "mancalog/interval.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mancalog {

using LabelId = uint32_t;
using NodeId = uint32_t;
using EdgeId = uint32_t;

// Components of a network are its nodes followed by its directed edges;
// a ComponentId below Graph::node_count() names a node, the rest edges.
using ComponentId = uint32_t;

enum class Fluency : uint8_t { fluent, non_fluent };

struct Label {
    std::string name;
    Fluency fluency;

    bool operator==(const Label&) const = default;
};

// A label vocabulary. Names are unique and fluency is fixed per name.
class LabelTable {
public:
    // Adds a label; returns the existing id when the name is already
    // present with the same fluency, nullopt on a fluency conflict.
    std::optional<LabelId> add(std::string_view name, Fluency fluency);

    std::optional<LabelId> find(std::string_view name) const;
    const Label& operator[](LabelId id) const { return labels_[id]; }
    bool is_fluent(LabelId id) const { return labels_[id].fluency == Fluency::fluent; }
    uint32_t size() const { return static_cast<uint32_t>(labels_.size()); }

    bool operator==(const LabelTable& other) const { return labels_ == other.labels_; }

private:
    std::vector<Label> labels_;
    std::map<std::string, LabelId, std::less<>> index_;
};

struct NetworkAtom {
    LabelId label = 0;
    WeightInterval bnd;

    bool operator==(const NetworkAtom&) const = default;
};

// Boolean combinations of network atoms. The tautology and contradiction
// are explicit node kinds so they survive serialization round-trips.
class NetworkFormula {
public:
    enum class Kind : uint8_t { truth, falsity, atom, negation, conjunction, disjunction };

    NetworkFormula() : kind_(Kind::truth) {}

    static NetworkFormula truth() { return NetworkFormula(); }
    static NetworkFormula falsity() {
        NetworkFormula f;
        f.kind_ = Kind::falsity;
        return f;
    }
    static NetworkFormula atom(NetworkAtom a);
    static NetworkFormula negate(NetworkFormula f);
    static NetworkFormula conjoin(NetworkFormula lhs, NetworkFormula rhs);
    static NetworkFormula disjoin(NetworkFormula lhs, NetworkFormula rhs);

    Kind kind() const { return kind_; }
    const NetworkAtom& as_atom() const { return atom_; }
    const NetworkFormula& child(size_t i) const { return kids_[i]; }
    size_t child_count() const { return kids_.size(); }

    // Collects the label of every atom in the formula.
    void collect_labels(std::vector<LabelId>& out) const;

    bool operator==(const NetworkFormula& other) const;

private:
    Kind kind_;
    NetworkAtom atom_;
    std::vector<NetworkFormula> kids_;
};

// True when every atom in the formula has the requested fluency; a formula
// without atoms qualifies vacuously.
bool formula_has_only(const NetworkFormula& f, const LabelTable& labels, Fluency fluency);

// An assignment of at most one weight interval per label. Absent labels
// read as [0,1]; storing [0,1] erases the entry so equality is canonical.
class World {
public:
    const WeightInterval& get(LabelId label) const;
    void set(LabelId label, WeightInterval bnd);

    const std::vector<std::pair<LabelId, WeightInterval>>& entries() const { return entries_; }
    bool has_empty_bound() const;

    bool operator==(const World&) const = default;

private:
    std::vector<std::pair<LabelId, WeightInterval>> entries_; // sorted by label
};

bool world_satisfies(const World& w, const NetworkAtom& a);
bool world_satisfies(const World& w, const NetworkFormula& f);

// Directed graph. One edge per ordered node pair, no self loops.
class Graph {
public:
    NodeId add_node(std::string name);
    std::optional<NodeId> find_node(std::string_view name) const;

    // Returns nullopt for self loops, duplicate edges, or bad endpoints.
    std::optional<EdgeId> add_edge(NodeId from, NodeId to);
    std::optional<EdgeId> find_edge(NodeId from, NodeId to) const;

    uint32_t node_count() const { return static_cast<uint32_t>(node_names_.size()); }
    uint32_t edge_count() const { return static_cast<uint32_t>(edges_.size()); }
    uint32_t component_count() const { return node_count() + edge_count(); }

    const std::string& node_name(NodeId v) const { return node_names_[v]; }
    const std::pair<NodeId, NodeId>& edge(EdgeId e) const { return edges_[e]; }

    bool is_node(ComponentId c) const { return c < node_count(); }
    ComponentId node_component(NodeId v) const { return v; }
    ComponentId edge_component(EdgeId e) const { return node_count() + e; }
    EdgeId edge_of_component(ComponentId c) const { return c - node_count(); }
    std::string component_name(ComponentId c) const;

    // In-edges of v as (source node, edge id), ordered by insertion.
    const std::vector<std::pair<NodeId, EdgeId>>& in_edges(NodeId v) const { return in_[v]; }
    const std::vector<std::pair<NodeId, EdgeId>>& out_edges(NodeId v) const { return out_[v]; }

    uint32_t max_in_degree() const;

    bool operator==(const Graph& other) const {
        return node_names_ == other.node_names_ && edges_ == other.edges_;
    }

private:
    std::vector<std::string> node_names_;
    std::map<std::string, NodeId, std::less<>> node_index_;
    std::vector<std::pair<NodeId, NodeId>> edges_;
    std::map<std::pair<NodeId, NodeId>, EdgeId> edge_index_;
    std::vector<std::vector<std::pair<NodeId, EdgeId>>> in_;
    std::vector<std::vector<std::pair<NodeId, EdgeId>>> out_;
};

// Worlds for every component of a network at one time point.
struct NetworkInterpretation {
    std::vector<World> worlds; // indexed by ComponentId

    const World& world(ComponentId c) const { return worlds[c]; }
    World& world(ComponentId c) { return worlds[c]; }

    bool operator==(const NetworkInterpretation&) const = default;
};

// A timeline of network interpretations for t in [0, t_max].
struct Interpretation {
    std::vector<NetworkInterpretation> slices;

    uint32_t t_max() const { return static_cast<uint32_t>(slices.size()) - 1; }
    const NetworkInterpretation& at(uint32_t t) const { return slices[t]; }
    NetworkInterpretation& at(uint32_t t) { return slices[t]; }

    const WeightInterval& bound(uint32_t t, ComponentId c, LabelId l) const {
        return slices[t].worlds[c].get(l);
    }
    void set_bound(uint32_t t, ComponentId c, LabelId l, WeightInterval bnd) {
        slices[t].worlds[c].set(l, std::move(bnd));
    }

    bool operator==(const Interpretation&) const = default;
};

// The all-[0,1] interpretation over the graph's components.
Interpretation bottom_interpretation(const Graph& g, uint32_t t_max);

} // namespace mancalog
