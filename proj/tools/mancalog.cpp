#include "mancalog/analytics.hpp"
#include "mancalog/dsl.hpp"
#include "mancalog/engine.hpp"
#include "mancalog/json_io.hpp"
#include "mancalog/membership.hpp"
#include "mancalog/queries.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace mancalog;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconsistent = 2;

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string fnv1a64(std::string_view data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void print_diagnostics(const std::vector<ParseDiagnostic>& diags) {
    for (const auto& d : diags)
        std::cerr << d.to_string() << "\n";
}

struct CommonOptions {
    std::string graph_path;
    std::vector<std::string> program_paths;
    std::string out_dir = "out";
    bool canonical = false;
    bool trace = false;
    bool dump_json = false;
    unsigned threads = 0;
    uint64_t max_iters = 0;
};

struct LoadedInputs {
    GraphParse graph;
    Program program;
    json input_records = json::array();
};

// Parses the graph and program files, merges multi-file programs under a
// shared vocabulary, folds graph annotations in as non-fluent facts, and
// re-validates the merged result.
std::optional<LoadedInputs> load_inputs(const CommonOptions& opts, bool need_programs) {
    LoadedInputs in;
    auto graph_text = read_file(opts.graph_path);
    if (!graph_text) {
        std::cerr << "error: cannot read graph file '" << opts.graph_path << "'\n";
        return std::nullopt;
    }
    in.input_records.push_back(json{{"path", opts.graph_path}, {"fnv1a64", fnv1a64(*graph_text)}});
    in.graph = parse_graph(*graph_text, opts.graph_path);
    print_diagnostics(in.graph.diagnostics);
    if (!in.graph.ok)
        return std::nullopt;

    in.program.labels = in.graph.labels;
    if (need_programs && opts.program_paths.empty()) {
        std::cerr << "error: no program file given\n";
        return std::nullopt;
    }
    bool first = true;
    for (const std::string& path : opts.program_paths) {
        auto text = read_file(path);
        if (!text) {
            std::cerr << "error: cannot read program file '" << path << "'\n";
            return std::nullopt;
        }
        in.input_records.push_back(json{{"path", path}, {"fnv1a64", fnv1a64(*text)}});
        ProgramParse pp = parse_program(*text, in.program.labels, in.graph.graph, path);
        print_diagnostics(pp.diagnostics);
        if (!pp.ok)
            return std::nullopt;
        if (first) {
            in.program = std::move(pp.program);
            first = false;
        } else {
            in.program.labels = pp.program.labels;
            in.program.t_max = std::max(in.program.t_max, pp.program.t_max);
            for (auto& f : pp.program.facts)
                in.program.facts.push_back(std::move(f));
            for (auto& r : pp.program.rules)
                in.program.rules.push_back(std::move(r));
            for (auto& ic : pp.program.ics)
                in.program.ics.push_back(std::move(ic));
        }
    }
    for (const auto& [c, atom] : in.graph.annotations)
        in.program.facts.push_back({atom, c, 0, in.program.t_max});

    auto issues = validate_program(in.program, in.graph.graph);
    for (const auto& issue : issues)
        std::cerr << "error: " << issue.location() << ": " << issue.message << "\n";
    if (!issues.empty())
        return std::nullopt;
    return in;
}

bool write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write '" << path.string() << "'\n";
        return false;
    }
    out << text;
    return out.good();
}

struct RunArtifacts {
    json outputs = json::array();
    fs::path dir;

    bool emit(const std::string& name, const std::string& text) {
        if (!write_text(dir / name, text))
            return false;
        outputs.push_back(name);
        return true;
    }
};

bool write_manifest(RunArtifacts& artifacts, const std::string& command,
                    const LoadedInputs& inputs, const json& parameters, uint64_t iterations,
                    double wall_ms) {
    json manifest{
        {"command", command},    {"inputs", inputs.input_records}, {"parameters", parameters},
        {"iterations", iterations}, {"wall_ms", wall_ms},          {"outputs", artifacts.outputs},
    };
    return write_text(artifacts.dir / "manifest.json", manifest.dump(2) + "\n");
}

EngineOptions engine_options(const CommonOptions& opts) {
    EngineOptions eo;
    eo.threads = opts.threads;
    eo.max_iterations = opts.max_iters;
    eo.record_trace = opts.trace;
    return eo;
}

std::string trace_to_jsonl(const FixpointResult& fix) {
    std::string out;
    for (const auto& row : fix.trace) {
        json rec{{"iteration", row.iteration},
                 {"changed_cells", row.changed_cells},
                 {"wall_ms", row.wall_ms}};
        out += rec.dump() + "\n";
    }
    return out;
}

int run_fixpoint_like(const CommonOptions& opts, const std::string& command,
                      const std::string& queries_path) {
    auto inputs = load_inputs(opts, true);
    if (!inputs)
        return kExitError;
    QueriesParse queries;
    std::string queries_text;
    if (!queries_path.empty()) {
        auto text = read_file(queries_path);
        if (!text) {
            std::cerr << "error: cannot read query file '" << queries_path << "'\n";
            return kExitError;
        }
        queries_text = *text;
        inputs->input_records.push_back(
            json{{"path", queries_path}, {"fnv1a64", fnv1a64(queries_text)}});
        queries = parse_queries(queries_text, inputs->program.labels, inputs->graph.graph,
                                inputs->program.t_max, queries_path);
        print_diagnostics(queries.diagnostics);
        if (!queries.ok)
            return kExitError;
    }

    RunArtifacts artifacts;
    artifacts.dir = opts.out_dir;
    std::error_code ec;
    fs::create_directories(artifacts.dir, ec);

    auto start = std::chrono::steady_clock::now();
    FixpointResult fix;
    try {
        fix = gamma_fixpoint(inputs->program, inputs->graph.graph, engine_options(opts));
        if (!fix.inconsistent && opts.canonical)
            fix = canonicalize(inputs->program, inputs->graph.graph, fix);
    } catch (const engine_limit_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();

    if (opts.dump_json) {
        if (!artifacts.emit("graph.json", graph_to_json(inputs->graph.graph, inputs->graph.labels,
                                                        inputs->graph.annotations)
                                                  .dump(2) +
                                              "\n"))
            return kExitError;
        if (!artifacts.emit("program.json",
                            program_to_json(inputs->program, inputs->graph.graph).dump(2) + "\n"))
            return kExitError;
    }
    if (!artifacts.emit("model.json",
                        model_to_json(fix, inputs->program, inputs->graph.graph).dump(2) + "\n"))
        return kExitError;
    if (opts.trace && !artifacts.emit("trace.jsonl", trace_to_jsonl(fix)))
        return kExitError;

    if (!queries_path.empty() && !queries.queries.empty()) {
        json results = json::array();
        for (const QueryStatement& q : queries.queries) {
            QueryResult r = q.type == QueryStatement::Type::entails
                                ? entails_in(fix, inputs->program, q.fact)
                                : tight_bound_in(fix, q.component, q.label, q.t);
            results.push_back(query_result_to_json(q, r, inputs->program, inputs->graph.graph));
        }
        if (!artifacts.emit("queries.json", results.dump(2) + "\n"))
            return kExitError;
    }

    json params{{"canonical", opts.canonical},
                {"threads", opts.threads},
                {"max_iters", opts.max_iters},
                {"tmax", inputs->program.t_max}};
    if (!write_manifest(artifacts, command, *inputs, params, fix.iterations, wall_ms))
        return kExitError;

    if (fix.inconsistent) {
        std::cerr << "inconsistent: bound collapsed at t=" << fix.witness->t << " component="
                  << inputs->graph.graph.component_name(fix.witness->component) << " label="
                  << inputs->program.labels[fix.witness->label].name << "\n";
        return kExitInconsistent;
    }
    std::cout << "consistent after " << fix.iterations << " iterations\n";
    return kExitOk;
}

std::string membership_csv(const MembershipResult& res) {
    std::string out = "node,group,lower,upper,provenance\n";
    for (NodeId v = 0; v < res.nodes.size(); ++v) {
        for (size_t gi = 0; gi < res.groups.size(); ++gi) {
            const WeightInterval& b = res.at(v, gi);
            out += res.nodes[v] + "," + res.groups[gi] + "," + to_fraction_string(b.lower()) +
                   "," + to_fraction_string(b.upper()) + "," +
                   (res.prov(v, gi) == Provenance::fact_fixed ? "fact-fixed" : "rule-derived") +
                   "\n";
        }
    }
    return out;
}

std::string histogram_csv(const std::vector<HistogramBin>& bins) {
    std::string out = "bin_low,bin_high,count\n";
    for (const auto& bin : bins)
        out += to_fraction_string(bin.lo) + "," + to_fraction_string(bin.hi) + "," +
               std::to_string(bin.count) + "\n";
    return out;
}

std::string edge_list(const ThresholdSubgraph& sub, const Graph& g) {
    std::string out;
    for (const auto& [from, to] : sub.edges)
        out += g.node_name(from) + " " + g.node_name(to) + "\n";
    return out;
}

std::string shells_csv(const ThresholdSubgraph& sub, const ShellAssignment& shells,
                       const MembershipResult& res, size_t group_index) {
    std::string out = "node,degree_lower,shell,is_core\n";
    for (size_t i = 0; i < shells.nodes.size(); ++i) {
        NodeId v = shells.nodes[i];
        out += res.nodes[v] + "," + to_fraction_string(res.at(v, group_index).lower()) + "," +
               std::to_string(shells.shell[i]) + "," + (shells.is_core(i) ? "1" : "0") + "\n";
    }
    return out;
}

int run_membership(const CommonOptions& opts, const std::string& members_path,
                   const std::string& group, const std::string& threshold_text,
                   const std::string& bin_width_text, bool analytics_only) {
    auto graph_text = read_file(opts.graph_path);
    if (!graph_text) {
        std::cerr << "error: cannot read graph file '" << opts.graph_path << "'\n";
        return kExitError;
    }
    GraphParse gp = parse_graph(*graph_text, opts.graph_path);
    print_diagnostics(gp.diagnostics);
    if (!gp.ok)
        return kExitError;

    auto members_text = read_file(members_path);
    if (!members_text) {
        std::cerr << "error: cannot read membership file '" << members_path << "'\n";
        return kExitError;
    }
    MembershipParse mp = parse_membership(*members_text, gp.graph, members_path);
    print_diagnostics(mp.diagnostics);
    if (!mp.ok)
        return kExitError;
    if (mp.groups.empty()) {
        std::cerr << "error: membership file declares no groups\n";
        return kExitError;
    }

    std::optional<Rational> threshold;
    if (!threshold_text.empty()) {
        threshold = parse_rational(threshold_text);
        if (!threshold || *threshold < 0 || *threshold > 1) {
            std::cerr << "error: --threshold must be a rational in [0,1]\n";
            return kExitError;
        }
    }
    auto bin_width = parse_rational(bin_width_text);
    if (!bin_width || *bin_width <= 0 || *bin_width > 1 ||
        denominator(Rational(1) / *bin_width) != 1) {
        std::cerr << "error: --bin-width must divide 1 evenly\n";
        return kExitError;
    }
    if (analytics_only && (group.empty() || !threshold)) {
        std::cerr << "error: analyze requires --group and --threshold\n";
        return kExitError;
    }
    if (!group.empty() &&
        std::find(mp.groups.begin(), mp.groups.end(), group) == mp.groups.end()) {
        std::cerr << "error: unknown group '" << group << "'\n";
        return kExitError;
    }

    MembershipProblem prob;
    prob.graph = std::move(gp.graph);
    prob.groups = mp.groups;
    prob.known = mp.known;
    prob.params = mp.params;
    prob.finalize_params();

    LoadedInputs manifest_inputs;
    manifest_inputs.input_records.push_back(
        json{{"path", opts.graph_path}, {"fnv1a64", fnv1a64(*graph_text)}});
    manifest_inputs.input_records.push_back(
        json{{"path", members_path}, {"fnv1a64", fnv1a64(*members_text)}});

    RunArtifacts artifacts;
    artifacts.dir = opts.out_dir;
    std::error_code ec;
    fs::create_directories(artifacts.dir, ec);

    auto start = std::chrono::steady_clock::now();
    MembershipResult res = solve_membership(prob, engine_options(opts));
    double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();

    if (!analytics_only) {
        if (!artifacts.emit("membership.csv", membership_csv(res)))
            return kExitError;
        if (!artifacts.emit("membership.json", membership_to_json(res).dump(2) + "\n"))
            return kExitError;
        if (!artifacts.emit("histogram.csv", histogram_csv(membership_histogram(res, *bin_width))))
            return kExitError;
    }
    if (!group.empty() && threshold) {
        ThresholdSubgraph sub = threshold_subgraph(res, prob.graph, group, *threshold);
        if (!artifacts.emit("subgraph.edges", edge_list(sub, prob.graph)))
            return kExitError;
        if (sub.nodes.empty()) {
            std::cerr << "warning: threshold subgraph is empty; no shell decomposition\n";
        } else {
            ShellAssignment shells = shell_decomposition(sub);
            size_t gi = static_cast<size_t>(
                std::find(res.groups.begin(), res.groups.end(), group) - res.groups.begin());
            if (!artifacts.emit("shells.csv", shells_csv(sub, shells, res, gi)))
                return kExitError;
        }
    }

    json params{{"threads", opts.threads},
                {"rounds", prob.params.rounds},
                {"theta", to_fraction_string(prob.params.theta)},
                {"bin_width", bin_width_text}};
    if (!group.empty())
        params["group"] = group;
    if (threshold)
        params["threshold"] = to_fraction_string(*threshold);
    if (!write_manifest(artifacts, analytics_only ? "analyze" : "membership", manifest_inputs,
                        params, res.iterations, wall_ms))
        return kExitError;

    std::cout << "membership computed for " << prob.graph.node_count() << " nodes, "
              << prob.groups.size() << " groups in " << res.iterations << " iterations\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mancalog: multi-attribute network cascade reasoner"};
    app.require_subcommand(1);

    CommonOptions common;
    std::string queries_path, members_path, group, threshold_text;
    std::string bin_width_text = "1/10";

    auto add_common = [&](CLI::App* cmd, bool programs) {
        cmd->add_option("--graph", common.graph_path, "graph file (.mcg)")->required();
        if (programs) {
            cmd->add_option("--program", common.program_paths, "program file(s) (.mcp)");
            cmd->add_flag("--canonical", common.canonical, "use canonical-model semantics");
            cmd->add_flag("--dump-json", common.dump_json,
                          "also write parsed graph/program as JSON");
        }
        cmd->add_option("--out", common.out_dir, "output directory");
        cmd->add_option("--threads", common.threads, "engine worker threads (0 = machine)");
        cmd->add_option("--max-iters", common.max_iters, "iteration cap override");
        cmd->add_flag("--trace", common.trace, "write per-iteration trace.jsonl");
    };

    CLI::App* fixpoint = app.add_subcommand("fixpoint", "compute the minimal model");
    add_common(fixpoint, true);

    CLI::App* query = app.add_subcommand("query", "run entailment and tight-bound queries");
    add_common(query, true);
    query->add_option("--queries", queries_path, "query file (.mcq)")->required();

    CLI::App* membership = app.add_subcommand("membership", "degree-of-membership inference");
    add_common(membership, false);
    membership->add_option("--members", members_path, "membership file")->required();
    membership->add_option("--group", group, "group for the threshold subgraph");
    membership->add_option("--threshold", threshold_text, "degree threshold, e.g. 3/10");
    membership->add_option("--bin-width", bin_width_text, "histogram bin width");

    CLI::App* analyze = app.add_subcommand("analyze", "threshold subgraph and shell decomposition");
    add_common(analyze, false);
    analyze->add_option("--members", members_path, "membership file")->required();
    analyze->add_option("--group", group, "group to analyze")->required();
    analyze->add_option("--threshold", threshold_text, "degree threshold")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (fixpoint->parsed())
            return run_fixpoint_like(common, "fixpoint", "");
        if (query->parsed())
            return run_fixpoint_like(common, "query", queries_path);
        if (membership->parsed())
            return run_membership(common, members_path, group, threshold_text, bin_width_text,
                                  false);
        if (analyze->parsed())
            return run_membership(common, members_path, group, threshold_text, bin_width_text,
                                  true);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
