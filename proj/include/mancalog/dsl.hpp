#pragma once

#include "mancalog/membership.hpp"
#include "mancalog/program.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace mancalog {

struct SourcePos {
    uint32_t line = 1;
    uint32_t column = 1;
};

struct SourceSpan {
    std::string file;
    SourcePos begin;
    SourcePos end;
};

enum class Severity : uint8_t { error, warning };

struct ParseDiagnostic {
    Severity severity = Severity::error;
    std::string message;
    SourceSpan span;

    std::string to_string() const;
};

bool has_errors(const std::vector<ParseDiagnostic>& diags);

// Result of parsing a .mcg graph file: the graph, the label vocabulary it
// declares, and the non-fluent atoms annotated inline on nodes and edges.
// On error the parse is total: ok is false and graph/labels are unusable.
struct GraphParse {
    bool ok = false;
    Graph graph;
    LabelTable labels;
    std::vector<std::pair<ComponentId, NetworkAtom>> annotations;
    std::vector<ParseDiagnostic> diagnostics;
};

GraphParse parse_graph(std::string_view text, std::string_view filename = "<graph>");

// Parses a .mcp program file against a vocabulary (usually from the graph
// file; inline label declarations may extend it) and the graph that fact
// components resolve against. A successful parse is validated.
struct ProgramParse {
    bool ok = false;
    Program program;
    std::vector<ParseDiagnostic> diagnostics;
};

ProgramParse parse_program(std::string_view text, const LabelTable& vocabulary, const Graph& graph,
                           std::string_view filename = "<program>");

struct QueryStatement {
    enum class Type : uint8_t { entails, tight };
    Type type = Type::entails;
    Fact fact;                 // entails queries
    ComponentId component = 0; // tight queries
    LabelId label = 0;
    uint32_t t = 0;
};

struct QueriesParse {
    bool ok = false;
    std::vector<QueryStatement> queries;
    std::vector<ParseDiagnostic> diagnostics;
};

QueriesParse parse_queries(std::string_view text, const LabelTable& vocabulary, const Graph& graph,
                           uint32_t t_max, std::string_view filename = "<queries>");

// Membership problem files: group, member and param statements.
struct MembershipParse {
    bool ok = false;
    std::vector<std::string> groups;
    std::map<NodeId, uint32_t> known;
    MembershipParams params;
    std::vector<ParseDiagnostic> diagnostics;
};

MembershipParse parse_membership(std::string_view text, const Graph& graph,
                                 std::string_view filename = "<membership>");

// Serializers; parse(serialize(x)) reproduces x structurally. Rationals
// always print in fraction form.
std::string serialize_interval(const WeightInterval& v);
std::string serialize_atom(const NetworkAtom& a, const LabelTable& labels);
std::string serialize_formula(const NetworkFormula& f, const LabelTable& labels);
std::string serialize_graph(const Graph& g, const LabelTable& labels,
                            const std::vector<std::pair<ComponentId, NetworkAtom>>& annotations);
std::string serialize_program(const Program& p, const Graph& g);

} // namespace mancalog
