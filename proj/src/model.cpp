#include "mancalog/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace mancalog {

std::optional<LabelId> LabelTable::add(std::string_view name, Fluency fluency) {
    auto it = index_.find(name);
    if (it != index_.end()) {
        if (labels_[it->second].fluency != fluency)
            return std::nullopt;
        return it->second;
    }
    LabelId id = static_cast<LabelId>(labels_.size());
    labels_.push_back(Label{std::string(name), fluency});
    index_.emplace(labels_.back().name, id);
    return id;
}

std::optional<LabelId> LabelTable::find(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

NetworkFormula NetworkFormula::atom(NetworkAtom a) {
    NetworkFormula f;
    f.kind_ = Kind::atom;
    f.atom_ = std::move(a);
    return f;
}

NetworkFormula NetworkFormula::negate(NetworkFormula f) {
    NetworkFormula r;
    r.kind_ = Kind::negation;
    r.kids_.push_back(std::move(f));
    return r;
}

NetworkFormula NetworkFormula::conjoin(NetworkFormula lhs, NetworkFormula rhs) {
    NetworkFormula r;
    r.kind_ = Kind::conjunction;
    r.kids_.push_back(std::move(lhs));
    r.kids_.push_back(std::move(rhs));
    return r;
}

NetworkFormula NetworkFormula::disjoin(NetworkFormula lhs, NetworkFormula rhs) {
    NetworkFormula r;
    r.kind_ = Kind::disjunction;
    r.kids_.push_back(std::move(lhs));
    r.kids_.push_back(std::move(rhs));
    return r;
}

void NetworkFormula::collect_labels(std::vector<LabelId>& out) const {
    if (kind_ == Kind::atom)
        out.push_back(atom_.label);
    for (const auto& k : kids_)
        k.collect_labels(out);
}

bool NetworkFormula::operator==(const NetworkFormula& other) const {
    if (kind_ != other.kind_)
        return false;
    if (kind_ == Kind::atom)
        return atom_ == other.atom_;
    return kids_ == other.kids_;
}

bool formula_has_only(const NetworkFormula& f, const LabelTable& labels, Fluency fluency) {
    std::vector<LabelId> ids;
    f.collect_labels(ids);
    for (LabelId id : ids)
        if (labels[id].fluency != fluency)
            return false;
    return true;
}

const WeightInterval& World::get(LabelId label) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), label,
                               [](const auto& e, LabelId l) { return e.first < l; });
    if (it != entries_.end() && it->first == label)
        return it->second;
    return WeightInterval::unit();
}

void World::set(LabelId label, WeightInterval bnd) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), label,
                               [](const auto& e, LabelId l) { return e.first < l; });
    bool present = it != entries_.end() && it->first == label;
    if (bnd.is_unit()) {
        if (present)
            entries_.erase(it);
        return;
    }
    if (present)
        it->second = std::move(bnd);
    else
        entries_.emplace(it, label, std::move(bnd));
}

bool World::has_empty_bound() const {
    for (const auto& [label, bnd] : entries_)
        if (bnd.is_empty())
            return true;
    return false;
}

bool world_satisfies(const World& w, const NetworkAtom& a) {
    if (a.bnd.is_unit())
        return true;
    if (a.bnd.is_empty())
        return false;
    return interval_subseteq(w.get(a.label), a.bnd);
}

bool world_satisfies(const World& w, const NetworkFormula& f) {
    switch (f.kind()) {
    case NetworkFormula::Kind::truth:
        return true;
    case NetworkFormula::Kind::falsity:
        return false;
    case NetworkFormula::Kind::atom:
        return world_satisfies(w, f.as_atom());
    case NetworkFormula::Kind::negation:
        return !world_satisfies(w, f.child(0));
    case NetworkFormula::Kind::conjunction:
        return world_satisfies(w, f.child(0)) && world_satisfies(w, f.child(1));
    case NetworkFormula::Kind::disjunction:
        return world_satisfies(w, f.child(0)) || world_satisfies(w, f.child(1));
    }
    return false;
}

NodeId Graph::add_node(std::string name) {
    auto it = node_index_.find(name);
    if (it != node_index_.end())
        throw std::invalid_argument("duplicate node id: " + name);
    NodeId id = static_cast<NodeId>(node_names_.size());
    node_names_.push_back(std::move(name));
    node_index_.emplace(node_names_.back(), id);
    in_.emplace_back();
    out_.emplace_back();
    return id;
}

std::optional<NodeId> Graph::find_node(std::string_view name) const {
    auto it = node_index_.find(name);
    if (it == node_index_.end())
        return std::nullopt;
    return it->second;
}

std::optional<EdgeId> Graph::add_edge(NodeId from, NodeId to) {
    if (from >= node_count() || to >= node_count() || from == to)
        return std::nullopt;
    if (edge_index_.count({from, to}))
        return std::nullopt;
    EdgeId id = static_cast<EdgeId>(edges_.size());
    edges_.emplace_back(from, to);
    edge_index_.emplace(std::make_pair(from, to), id);
    out_[from].emplace_back(to, id);
    in_[to].emplace_back(from, id);
    return id;
}

std::optional<EdgeId> Graph::find_edge(NodeId from, NodeId to) const {
    auto it = edge_index_.find({from, to});
    if (it == edge_index_.end())
        return std::nullopt;
    return it->second;
}

std::string Graph::component_name(ComponentId c) const {
    if (is_node(c))
        return node_names_[c];
    const auto& [from, to] = edges_[edge_of_component(c)];
    return node_names_[from] + "->" + node_names_[to];
}

uint32_t Graph::max_in_degree() const {
    uint32_t d = 0;
    for (const auto& in : in_)
        d = std::max(d, static_cast<uint32_t>(in.size()));
    return d;
}

Interpretation bottom_interpretation(const Graph& g, uint32_t t_max) {
    Interpretation i;
    i.slices.resize(t_max + 1);
    for (auto& slice : i.slices)
        slice.worlds.resize(g.component_count());
    return i;
}

} // namespace mancalog
