#include "mancalog/engine.hpp"

#include <algorithm>
#include <chrono>
#include <thread>
#include <unordered_map>

namespace mancalog {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool literals_satisfied(const World& w, const std::vector<Literal>& lits) {
    for (const Literal& lit : lits) {
        bool sat = world_satisfies(w, lit.atom);
        if (lit.negated ? sat : !sat)
            return false;
    }
    return true;
}

// Per-run lookup structures: which statements constrain which cells, and
// which cells to re-examine when a cell changes.
struct EngineIndex {
    const Program& p;
    const Graph& g;
    uint32_t labels;
    uint32_t comps;

    std::unordered_map<uint64_t, std::vector<uint32_t>> facts_by_cell; // (c,l) -> fact idx
    std::vector<std::vector<uint32_t>> rules_by_head;                  // label -> rule idx
    std::vector<std::vector<uint32_t>> ics_by_head;                    // label -> ic idx

    std::vector<std::vector<uint32_t>> ics_by_body_label;
    std::vector<std::vector<uint32_t>> rules_by_target_label; // target criteria mentions label
    std::vector<std::vector<uint32_t>> rules_by_node_label;   // node criteria or contagion
    std::vector<std::vector<uint32_t>> rules_by_edge_label;   // edge criteria

    std::vector<LabelId> constrained_labels; // labels that can ever tighten

    static uint64_t cell_key(ComponentId c, LabelId l, uint32_t labels) {
        return static_cast<uint64_t>(c) * labels + l;
    }

    explicit EngineIndex(const Program& prog, const Graph& graph)
        : p(prog), g(graph), labels(prog.labels.size()), comps(graph.component_count()),
          rules_by_head(labels), ics_by_head(labels), ics_by_body_label(labels),
          rules_by_target_label(labels), rules_by_node_label(labels), rules_by_edge_label(labels) {
        std::vector<bool> constrained(labels, false);
        for (uint32_t i = 0; i < p.facts.size(); ++i) {
            const Fact& f = p.facts[i];
            facts_by_cell[cell_key(f.component, f.atom.label, labels)].push_back(i);
            constrained[f.atom.label] = true;
        }
        std::vector<LabelId> mention;
        for (uint32_t i = 0; i < p.rules.size(); ++i) {
            const Rule& r = p.rules[i];
            rules_by_head[r.head].push_back(i);
            constrained[r.head] = true;
            mention.clear();
            r.target_criteria.collect_labels(mention);
            for (LabelId l : dedupe(mention))
                rules_by_target_label[l].push_back(i);
            mention.clear();
            r.neighbor.node_criteria.collect_labels(mention);
            for (const Literal& lit : r.neighbor.contagion)
                mention.push_back(lit.atom.label);
            for (LabelId l : dedupe(mention))
                rules_by_node_label[l].push_back(i);
            mention.clear();
            r.neighbor.edge_criteria.collect_labels(mention);
            for (LabelId l : dedupe(mention))
                rules_by_edge_label[l].push_back(i);
        }
        for (uint32_t i = 0; i < p.ics.size(); ++i) {
            const IntegrityConstraint& ic = p.ics[i];
            ics_by_head[ic.head.label].push_back(i);
            constrained[ic.head.label] = true;
            mention.clear();
            for (const NetworkAtom& a : ic.body)
                mention.push_back(a.label);
            for (LabelId l : dedupe(mention))
                ics_by_body_label[l].push_back(i);
        }
        for (LabelId l = 0; l < labels; ++l)
            if (constrained[l])
                constrained_labels.push_back(l);
    }

    static std::vector<LabelId> dedupe(std::vector<LabelId> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }

    uint64_t cell_id(uint32_t t, ComponentId c, LabelId l) const {
        return (static_cast<uint64_t>(t) * comps + c) * labels + l;
    }
    CellRef cell_ref(uint64_t id) const {
        CellRef ref;
        ref.label = static_cast<LabelId>(id % labels);
        id /= labels;
        ref.component = static_cast<ComponentId>(id % comps);
        ref.t = static_cast<uint32_t>(id / comps);
        return ref;
    }

    // The new bound for one cell, reading only the input interpretation.
    WeightInterval compute_cell(const Interpretation& in, uint32_t t, ComponentId c,
                                LabelId l) const {
        WeightInterval bnd = in.bound(t, c, l);
        auto fit = facts_by_cell.find(cell_key(c, l, labels));
        if (fit != facts_by_cell.end()) {
            for (uint32_t fi : fit->second) {
                const Fact& f = p.facts[fi];
                if (f.covers(t))
                    bnd = interval_intersect(bnd, f.atom.bnd);
            }
        }
        const World& here = in.at(t).world(c);
        for (uint32_t ii : ics_by_head[l]) {
            const IntegrityConstraint& ic = p.ics[ii];
            bool body_sat = true;
            for (const NetworkAtom& a : ic.body) {
                if (!world_satisfies(here, a)) {
                    body_sat = false;
                    break;
                }
            }
            if (body_sat)
                bnd = interval_intersect(bnd, ic.head.bnd);
        }
        if (g.is_node(c)) {
            NodeId v = c;
            for (uint32_t ri : rules_by_head[l]) {
                const Rule& r = p.rules[ri];
                if (t < r.delta_t)
                    continue;
                const NetworkInterpretation& ni = in.at(t - r.delta_t);
                if (!world_satisfies(ni.world(v), r.target_criteria))
                    continue;
                // The program-level target time set for the head label
                // contains every rule target time, so the membership test
                // reduces to the rule's own target time set.
                uint64_t elig = 0, qual = 0;
                for (const auto& [u, e] : g.in_edges(v)) {
                    if (!world_satisfies(ni.world(g.edge_component(e)), r.neighbor.edge_criteria))
                        continue;
                    if (!world_satisfies(ni.world(u), r.neighbor.node_criteria))
                        continue;
                    ++elig;
                    if (literals_satisfied(ni.world(u), r.neighbor.contagion))
                        ++qual;
                }
                bnd = interval_intersect(bnd, influence_eval(r.neighbor.ifl, qual, elig));
            }
        }
        return bnd;
    }

    // Cells whose inputs include the given cell, for worklist scheduling.
    void successors(uint64_t id, std::vector<uint64_t>& out) const {
        CellRef ref = cell_ref(id);
        for (uint32_t ii : ics_by_body_label[ref.label])
            out.push_back(cell_id(ref.t, ref.component, p.ics[ii].head.label));
        if (g.is_node(ref.component)) {
            NodeId u = ref.component;
            for (uint32_t ri : rules_by_target_label[ref.label]) {
                uint64_t t2 = static_cast<uint64_t>(ref.t) + p.rules[ri].delta_t;
                if (t2 <= p.t_max)
                    out.push_back(cell_id(static_cast<uint32_t>(t2), u, p.rules[ri].head));
            }
            for (uint32_t ri : rules_by_node_label[ref.label]) {
                uint64_t t2 = static_cast<uint64_t>(ref.t) + p.rules[ri].delta_t;
                if (t2 > p.t_max)
                    continue;
                for (const auto& [v, e] : g.out_edges(u))
                    out.push_back(cell_id(static_cast<uint32_t>(t2), v, p.rules[ri].head));
            }
        } else {
            EdgeId e = ref.component - g.node_count();
            NodeId target = g.edge(e).second;
            for (uint32_t ri : rules_by_edge_label[ref.label]) {
                uint64_t t2 = static_cast<uint64_t>(ref.t) + p.rules[ri].delta_t;
                if (t2 <= p.t_max)
                    out.push_back(cell_id(static_cast<uint32_t>(t2), target, p.rules[ri].head));
            }
        }
    }
};

struct CellUpdate {
    uint64_t id;
    WeightInterval bnd;
};

// Evaluates the dirty cells against the input interpretation, in parallel
// chunks; updates come back in canonical (ascending cell id) order so the
// outcome is independent of the thread count.
std::vector<CellUpdate> evaluate_cells(const EngineIndex& index, const Interpretation& in,
                                       const std::vector<uint64_t>& dirty, unsigned threads) {
    std::vector<CellUpdate> updates;
    auto eval_range = [&](size_t lo, size_t hi, std::vector<CellUpdate>& out) {
        for (size_t i = lo; i < hi; ++i) {
            CellRef ref = index.cell_ref(dirty[i]);
            WeightInterval now = index.compute_cell(in, ref.t, ref.component, ref.label);
            if (now != in.bound(ref.t, ref.component, ref.label))
                out.push_back({dirty[i], std::move(now)});
        }
    };
    constexpr size_t kMinGrain = 512;
    size_t want = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    size_t parts = std::min(want, std::max<size_t>(1, dirty.size() / kMinGrain));
    if (parts <= 1) {
        eval_range(0, dirty.size(), updates);
        return updates;
    }
    std::vector<std::vector<CellUpdate>> partial(parts);
    std::vector<std::thread> pool;
    size_t chunk = (dirty.size() + parts - 1) / parts;
    for (size_t j = 0; j < parts; ++j) {
        size_t lo = j * chunk;
        size_t hi = std::min(dirty.size(), lo + chunk);
        pool.emplace_back([&, lo, hi, j] { eval_range(lo, hi, partial[j]); });
    }
    for (auto& th : pool)
        th.join();
    for (auto& part : partial)
        for (auto& u : part)
            updates.push_back(std::move(u));
    return updates;
}

} // namespace

std::vector<NodeId> eligible_set(NodeId v, const NetworkFormula& edge_criteria,
                                 const NetworkFormula& node_criteria,
                                 const NetworkInterpretation& ni, const Graph& g) {
    std::vector<NodeId> out;
    for (const auto& [u, e] : g.in_edges(v)) {
        if (world_satisfies(ni.world(u), node_criteria) &&
            world_satisfies(ni.world(g.edge_component(e)), edge_criteria))
            out.push_back(u);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<NodeId> qualifying_set(NodeId v, const NetworkFormula& edge_criteria,
                                   const NetworkFormula& node_criteria,
                                   const std::vector<Literal>& contagion,
                                   const NetworkInterpretation& ni, const Graph& g) {
    std::vector<NodeId> out;
    for (NodeId u : eligible_set(v, edge_criteria, node_criteria, ni, g))
        if (literals_satisfied(ni.world(u), contagion))
            out.push_back(u);
    return out;
}

WeightInterval rule_bound(const Rule& r, NodeId v, const NetworkInterpretation& ni,
                          const Graph& g) {
    auto elig = eligible_set(v, r.neighbor.edge_criteria, r.neighbor.node_criteria, ni, g);
    uint64_t qual = 0;
    for (NodeId u : elig)
        if (literals_satisfied(ni.world(u), r.neighbor.contagion))
            ++qual;
    return influence_eval(r.neighbor.ifl, qual, elig.size());
}

std::vector<uint32_t> tts_rule(const Interpretation& i, NodeId v, const Rule& r) {
    std::vector<uint32_t> out;
    for (uint32_t t = r.delta_t; t <= i.t_max(); ++t)
        if (world_satisfies(i.at(t - r.delta_t).world(v), r.target_criteria))
            out.push_back(t);
    return out;
}

std::vector<uint32_t> tts_program(const Interpretation& i, ComponentId c, LabelId l,
                                  const Program& p, const Graph& g) {
    std::vector<bool> in(i.t_max() + 1, false);
    if (g.is_node(c)) {
        for (const Rule& r : p.rules)
            if (r.head == l)
                for (uint32_t t : tts_rule(i, c, r))
                    in[t] = true;
    }
    for (const Fact& f : p.facts)
        if (f.component == c && f.atom.label == l)
            for (uint32_t t = f.t_from; t <= f.t_to && t <= i.t_max(); ++t)
                in[t] = true;
    for (const IntegrityConstraint& ic : p.ics) {
        if (ic.head.label != l)
            continue;
        for (uint32_t t = 0; t <= i.t_max(); ++t) {
            bool sat = true;
            for (const NetworkAtom& a : ic.body)
                if (!world_satisfies(i.at(t).world(c), a)) {
                    sat = false;
                    break;
                }
            if (sat)
                in[t] = true;
        }
    }
    std::vector<uint32_t> out;
    for (uint32_t t = 0; t <= i.t_max(); ++t)
        if (in[t])
            out.push_back(t);
    return out;
}

TTSIndex TTSIndex::compute(const Program& p, const Graph& g, const Interpretation& i) {
    TTSIndex idx;
    idx.labels_ = p.labels.size();
    uint32_t words = (i.t_max() + 64) / 64;
    idx.bits_.assign(static_cast<size_t>(g.component_count()) * idx.labels_,
                     std::vector<uint64_t>(words, 0));
    auto mark = [&](ComponentId c, LabelId l, uint32_t t) {
        idx.bits_[static_cast<size_t>(c) * idx.labels_ + l][t >> 6] |= uint64_t(1) << (t & 63);
    };
    for (const Fact& f : p.facts)
        for (uint32_t t = f.t_from; t <= f.t_to && t <= i.t_max(); ++t)
            mark(f.component, f.atom.label, t);
    for (const Rule& r : p.rules)
        for (NodeId v = 0; v < g.node_count(); ++v)
            for (uint32_t t = r.delta_t; t <= i.t_max(); ++t)
                if (world_satisfies(i.at(t - r.delta_t).world(v), r.target_criteria))
                    mark(v, r.head, t);
    for (const IntegrityConstraint& ic : p.ics) {
        for (ComponentId c = 0; c < g.component_count(); ++c) {
            for (uint32_t t = 0; t <= i.t_max(); ++t) {
                bool sat = true;
                for (const NetworkAtom& a : ic.body)
                    if (!world_satisfies(i.at(t).world(c), a)) {
                        sat = false;
                        break;
                    }
                if (sat)
                    mark(c, ic.head.label, t);
            }
        }
    }
    return idx;
}

Interpretation gamma_step(const Program& p, const Graph& g, const Interpretation& i) {
    EngineIndex index(p, g);
    Interpretation out = i;
    for (uint32_t t = 0; t <= i.t_max(); ++t)
        for (ComponentId c = 0; c < g.component_count(); ++c)
            for (LabelId l : index.constrained_labels)
                out.set_bound(t, c, l, index.compute_cell(i, t, c, l));
    return out;
}

uint64_t default_iteration_cap(const Program& p, const Graph& g) {
    uint64_t cap = (static_cast<uint64_t>(p.size()) + 1) * (g.max_in_degree() + 1) *
                   (static_cast<uint64_t>(p.t_max) + 1) * (g.edge_count() + 1);
    return cap + 1;
}

FixpointResult gamma_fixpoint(const Program& p, const Graph& g, const EngineOptions& opts) {
    EngineIndex index(p, g);
    FixpointResult result;
    result.model = bottom_interpretation(g, p.t_max);
    uint64_t cap = opts.max_iterations ? opts.max_iterations : default_iteration_cap(p, g);

    std::vector<uint64_t> dirty;
    dirty.reserve(static_cast<size_t>(p.t_max + 1) * g.component_count() *
                  index.constrained_labels.size());
    for (uint32_t t = 0; t <= p.t_max; ++t)
        for (ComponentId c = 0; c < g.component_count(); ++c)
            for (LabelId l : index.constrained_labels)
                dirty.push_back(index.cell_id(t, c, l));

    std::vector<bool> touched(static_cast<size_t>(p.t_max + 1) * g.component_count() *
                                  index.labels,
                              false);
    auto start = Clock::now();
    for (uint64_t iter = 1;; ++iter) {
        if (dirty.empty()) {
            result.iterations = iter - 1;
            break;
        }
        auto updates = evaluate_cells(index, result.model, dirty, opts.threads);
        if (updates.empty()) {
            result.iterations = iter - 1;
            break;
        }
        if (iter > cap)
            throw engine_limit_error("fixpoint iteration cap of " + std::to_string(cap) +
                                     " exceeded");
        bool saw_empty = false;
        std::vector<CellRef> delta;
        for (const CellUpdate& u : updates) {
            CellRef ref = index.cell_ref(u.id);
            result.model.set_bound(ref.t, ref.component, ref.label, u.bnd);
            if (!touched[u.id]) {
                touched[u.id] = true;
                ++result.touched_cells;
            }
            ++result.change_events;
            if (u.bnd.is_empty() && !saw_empty) {
                saw_empty = true;
                result.witness = ref;
            }
            if (opts.record_deltas)
                delta.push_back(ref);
        }
        if (opts.record_trace)
            result.trace.push_back({iter, updates.size(), ms_since(start)});
        if (opts.record_deltas)
            result.deltas.push_back(std::move(delta));
        if (saw_empty) {
            // Intersections never resurrect an empty bound; stop here.
            result.inconsistent = true;
            result.iterations = iter;
            break;
        }
        std::vector<uint64_t> next;
        for (const CellUpdate& u : updates)
            index.successors(u.id, next);
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        dirty = std::move(next);
    }
    return result;
}

FixpointResult canonicalize(const Program& p, const Graph& g, const FixpointResult& fix,
                            const EngineOptions& opts) {
    if (fix.inconsistent)
        throw std::logic_error("canonicalize requires a consistent fixpoint");
    (void)opts;
    EngineIndex index(p, g);
    FixpointResult result = fix;
    Interpretation& i = result.model;

    for (;;) {
        bool changed = false;
        TTSIndex tts = TTSIndex::compute(p, g, i);
        for (uint32_t t = 1; t <= p.t_max; ++t) {
            for (ComponentId c = 0; c < g.component_count(); ++c) {
                for (LabelId l = 0; l < p.labels.size(); ++l) {
                    if (tts.contains(c, l, t))
                        continue;
                    const WeightInterval& prev = i.bound(t - 1, c, l);
                    if (i.bound(t, c, l) != prev) {
                        i.set_bound(t, c, l, prev);
                        changed = true;
                    }
                }
            }
        }
        Interpretation next = i;
        for (uint32_t t = 0; t <= p.t_max; ++t)
            for (ComponentId c = 0; c < g.component_count(); ++c)
                for (LabelId l : index.constrained_labels)
                    next.set_bound(t, c, l, index.compute_cell(i, t, c, l));
        if (next != i) {
            changed = true;
            i = std::move(next);
            ++result.iterations;
        }
        for (uint32_t t = 0; t <= p.t_max; ++t) {
            for (ComponentId c = 0; c < g.component_count(); ++c) {
                for (const auto& [l, bnd] : i.at(t).world(c).entries()) {
                    if (bnd.is_empty()) {
                        result.inconsistent = true;
                        result.witness = CellRef{t, c, l};
                        return result;
                    }
                }
            }
        }
        if (!changed)
            break;
    }
    return result;
}

ModelCheck check_model(const Program& p, const Graph& g, const Interpretation& i, bool canonical) {
    ModelCheck check;
    auto fail = [&](std::string kind, CellRef where, std::string message) {
        check.ok = false;
        check.violations.push_back({std::move(kind), where, std::move(message)});
    };

    if (i.slices.size() != static_cast<size_t>(p.t_max) + 1) {
        fail("shape", {}, "interpretation timeline does not span [0,tmax]");
        return check;
    }

    for (uint32_t t = 0; t <= p.t_max; ++t)
        for (ComponentId c = 0; c < g.component_count(); ++c)
            for (const auto& [l, bnd] : i.at(t).world(c).entries())
                if (bnd.is_empty())
                    fail("empty-bound", {t, c, l}, "bound collapsed to empty");
    if (!check.ok)
        return check;

    for (const Fact& f : p.facts) {
        for (uint32_t t = f.t_from; t <= f.t_to && t <= p.t_max; ++t) {
            const World& w = i.at(t).world(f.component);
            if (p.labels.is_fluent(f.atom.label)) {
                if (!world_satisfies(w, f.atom))
                    fail("fact", {t, f.component, f.atom.label}, "fluent fact not satisfied");
            } else {
                if (w.get(f.atom.label) != f.atom.bnd)
                    fail("strict-fact", {t, f.component, f.atom.label},
                         "non-fluent fact not strictly satisfied");
            }
        }
    }

    for (const IntegrityConstraint& ic : p.ics) {
        for (uint32_t t = 0; t <= p.t_max; ++t) {
            for (ComponentId c = 0; c < g.component_count(); ++c) {
                const World& w = i.at(t).world(c);
                bool body_sat = true;
                for (const NetworkAtom& a : ic.body)
                    if (!world_satisfies(w, a)) {
                        body_sat = false;
                        break;
                    }
                if (body_sat && !world_satisfies(w, ic.head))
                    fail("ic", {t, c, ic.head.label}, "integrity constraint violated");
            }
        }
    }

    for (const Rule& r : p.rules) {
        for (NodeId v = 0; v < g.node_count(); ++v) {
            for (uint32_t t = r.delta_t; t <= p.t_max; ++t) {
                const NetworkInterpretation& ni = i.at(t - r.delta_t);
                if (!world_satisfies(ni.world(v), r.target_criteria))
                    continue;
                uint64_t elig = 0, qual = 0;
                for (NodeId u = 0; u < g.node_count(); ++u) {
                    auto e = g.find_edge(u, v);
                    if (!e)
                        continue;
                    if (!world_satisfies(ni.world(u), r.neighbor.node_criteria))
                        continue;
                    if (!world_satisfies(ni.world(g.edge_component(*e)), r.neighbor.edge_criteria))
                        continue;
                    ++elig;
                    if (literals_satisfied(ni.world(u), r.neighbor.contagion))
                        ++qual;
                }
                NetworkAtom enforced{r.head, influence_eval(r.neighbor.ifl, qual, elig)};
                if (!world_satisfies(i.at(t).world(v), enforced))
                    fail("rule", {t, v, r.head}, "rule bound not satisfied");
            }
        }
    }

    // Off-target-time clause, from scratch rather than via TTSIndex.
    for (ComponentId c = 0; c < g.component_count(); ++c) {
        for (LabelId l = 0; l < p.labels.size(); ++l) {
            std::vector<bool> in_tts(p.t_max + 1, false);
            for (const Fact& f : p.facts)
                if (f.component == c && f.atom.label == l)
                    for (uint32_t t = f.t_from; t <= f.t_to && t <= p.t_max; ++t)
                        in_tts[t] = true;
            if (g.is_node(c)) {
                for (const Rule& r : p.rules) {
                    if (r.head != l)
                        continue;
                    for (uint32_t t = r.delta_t; t <= p.t_max; ++t)
                        if (world_satisfies(i.at(t - r.delta_t).world(c), r.target_criteria))
                            in_tts[t] = true;
                }
            }
            for (const IntegrityConstraint& ic : p.ics) {
                if (ic.head.label != l)
                    continue;
                for (uint32_t t = 0; t <= p.t_max; ++t) {
                    bool sat = true;
                    for (const NetworkAtom& a : ic.body)
                        if (!world_satisfies(i.at(t).world(c), a)) {
                            sat = false;
                            break;
                        }
                    if (sat)
                        in_tts[t] = true;
                }
            }
            for (uint32_t t = 0; t <= p.t_max; ++t) {
                if (in_tts[t])
                    continue;
                const WeightInterval& here = i.at(t).world(c).get(l);
                if (!canonical || t == 0) {
                    if (!here.is_unit())
                        fail("off-tts", {t, c, l},
                             canonical ? "canonical model must start unconstrained time points at [0,1]"
                                       : "bound tightened outside the target time set");
                } else if (here != i.at(t - 1).world(c).get(l)) {
                    fail("off-tts", {t, c, l},
                         "canonical model must carry the previous time point's bound");
                }
            }
        }
    }

    return check;
}

bool interp_precedes(const Interpretation& i1, const Interpretation& i2) {
    if (i1.slices.size() != i2.slices.size())
        return false;
    for (uint32_t t = 0; t < i1.slices.size(); ++t) {
        const auto& w1 = i1.at(t).worlds;
        const auto& w2 = i2.at(t).worlds;
        if (w1.size() != w2.size())
            return false;
        for (size_t c = 0; c < w1.size(); ++c) {
            for (const auto& [l, bnd] : w1[c].entries())
                if (!interval_subseteq(w2[c].get(l), bnd))
                    return false;
            for (const auto& [l, bnd] : w2[c].entries())
                if (!interval_subseteq(bnd, w1[c].get(l)))
                    return false;
        }
    }
    return true;
}

} // namespace mancalog
