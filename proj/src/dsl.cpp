#include "mancalog/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace mancalog {

std::string ParseDiagnostic::to_string() const {
    std::ostringstream os;
    os << span.file << ":" << span.begin.line << ":" << span.begin.column << ": "
       << (severity == Severity::error ? "error: " : "warning: ") << message;
    return os.str();
}

bool has_errors(const std::vector<ParseDiagnostic>& diags) {
    for (const auto& d : diags)
        if (d.severity == Severity::error)
            return true;
    return false;
}

namespace {

enum class Tok : uint8_t {
    ident,
    integer,
    decimal,
    langle,    // <
    rangle,    // >
    lbracket,  // [
    rbracket,  // ]
    lparen,    // (
    rparen,    // )
    comma,
    semi,
    at,
    colon,
    slash,
    minus,
    arrow,      // ->
    left_arrow, // <-
    end,
    bad,
};

struct Token {
    Tok kind = Tok::end;
    std::string_view text;
    SourcePos begin;
    SourcePos end;
};

class Lexer {
public:
    Lexer(std::string_view src, std::vector<ParseDiagnostic>& diags, std::string_view file)
        : src_(src), diags_(diags), file_(file) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_trivia();
            Token t = next();
            out.push_back(t);
            if (t.kind == Tok::end)
                break;
        }
        return out;
    }

private:
    std::string_view src_;
    std::vector<ParseDiagnostic>& diags_;
    std::string_view file_;
    size_t pos_ = 0;
    SourcePos at_;

    bool done() const { return pos_ >= src_.size(); }
    char cur() const { return src_[pos_]; }
    char ahead() const { return pos_ + 1 < src_.size() ? src_[pos_ + 1] : '\0'; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++at_.line;
            at_.column = 1;
        } else {
            ++at_.column;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (!done()) {
            char c = cur();
            if (c == '#') {
                while (!done() && cur() != '\n')
                    advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f') {
                advance();
            } else {
                break;
            }
        }
    }

    Token make(Tok kind, size_t from, SourcePos begin) {
        Token t;
        t.kind = kind;
        t.text = src_.substr(from, pos_ - from);
        t.begin = begin;
        t.end = at_;
        return t;
    }

    Token next() {
        SourcePos begin = at_;
        size_t from = pos_;
        if (done())
            return make(Tok::end, from, begin);
        char c = cur();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (!done() && (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_'))
                advance();
            return make(Tok::ident, from, begin);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (!done() && std::isdigit(static_cast<unsigned char>(cur())))
                advance();
            if (!done() && cur() == '.' && pos_ + 1 < src_.size() &&
                std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
                advance();
                while (!done() && std::isdigit(static_cast<unsigned char>(cur())))
                    advance();
                return make(Tok::decimal, from, begin);
            }
            return make(Tok::integer, from, begin);
        }
        advance();
        switch (c) {
        case '<':
            if (!done() && cur() == '-') {
                advance();
                return make(Tok::left_arrow, from, begin);
            }
            return make(Tok::langle, from, begin);
        case '-':
            if (!done() && cur() == '>') {
                advance();
                return make(Tok::arrow, from, begin);
            }
            return make(Tok::minus, from, begin);
        case '>':
            return make(Tok::rangle, from, begin);
        case '[':
            return make(Tok::lbracket, from, begin);
        case ']':
            return make(Tok::rbracket, from, begin);
        case '(':
            return make(Tok::lparen, from, begin);
        case ')':
            return make(Tok::rparen, from, begin);
        case ',':
            return make(Tok::comma, from, begin);
        case ';':
            return make(Tok::semi, from, begin);
        case '@':
            return make(Tok::at, from, begin);
        case ':':
            return make(Tok::colon, from, begin);
        case '/':
            return make(Tok::slash, from, begin);
        default:
            break;
        }
        Token t = make(Tok::bad, from, begin);
        diags_.push_back({Severity::error, "unexpected character", span_of(t)});
        return t;
    }

    SourceSpan span_of(const Token& t) const { return {std::string(file_), t.begin, t.end}; }
};

const std::set<std::string_view>& reserved_words() {
    static const std::set<std::string_view> words = {
        "label", "fluent", "nonfluent", "node",   "edge",  "fact",    "ic",
        "rule",  "tmax",   "if",        "via",    "having", "using",  "and",
        "or",    "not",    "empty",     "TRUE",   "FALSE",  "query",  "entails",
        "tight", "group",  "member",    "param",  "tip",    "suppress",
        "frac_threshold",  "table"};
    return words;
}

// Recursive-descent parser over the token stream. Every consumer survives
// arbitrary input: errors produce diagnostics and synchronize to the next
// statement, and formula nesting is depth-capped.
class Parser {
public:
    Parser(std::string_view text, std::string_view file, std::vector<ParseDiagnostic>& diags)
        : file_(file), diags_(diags) {
        toks_ = Lexer(text, diags, file).run();
    }

protected:
    std::string_view file_;
    std::vector<ParseDiagnostic>& diags_;
    std::vector<Token> toks_;
    size_t pos_ = 0;
    int depth_ = 0;
    static constexpr int kMaxDepth = 200;

    const Token& peek(size_t off = 0) const {
        size_t i = pos_ + off;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    const Token& get() {
        const Token& t = peek();
        if (pos_ + 1 < toks_.size())
            ++pos_;
        return t;
    }
    bool at(Tok k) const { return peek().kind == k; }
    bool at_kw(std::string_view kw) const { return at(Tok::ident) && peek().text == kw; }
    bool accept(Tok k) {
        if (!at(k))
            return false;
        get();
        return true;
    }
    bool accept_kw(std::string_view kw) {
        if (!at_kw(kw))
            return false;
        get();
        return true;
    }

    SourceSpan span(const Token& t) const { return {std::string(file_), t.begin, t.end}; }
    SourceSpan span(const Token& from, const Token& to) const {
        return {std::string(file_), from.begin, to.end};
    }
    void error(const Token& t, std::string msg) {
        diags_.push_back({Severity::error, std::move(msg), span(t)});
    }
    void warn(const Token& t, std::string msg) {
        diags_.push_back({Severity::warning, std::move(msg), span(t)});
    }

    bool expect(Tok k, const char* what) {
        if (accept(k))
            return true;
        error(peek(), std::string("expected ") + what);
        return false;
    }
    bool expect_kw(std::string_view kw) {
        if (accept_kw(kw))
            return true;
        error(peek(), "expected '" + std::string(kw) + "'");
        return false;
    }

    // Skip past the next ';' (or to end of input).
    void sync() {
        while (!at(Tok::end)) {
            if (get().kind == Tok::semi)
                return;
        }
    }

    std::optional<std::string> parse_name(const char* what) {
        if (!at(Tok::ident)) {
            error(peek(), std::string("expected ") + what);
            return std::nullopt;
        }
        if (reserved_words().count(peek().text)) {
            error(peek(), "'" + std::string(peek().text) + "' is a reserved word");
            get();
            return std::nullopt;
        }
        return std::string(get().text);
    }

    std::optional<uint32_t> parse_small_int(const char* what, uint64_t limit = 1000000000) {
        if (!at(Tok::integer)) {
            error(peek(), std::string("expected ") + what);
            return std::nullopt;
        }
        const Token& t = get();
        if (t.text.size() > 10) {
            error(t, std::string(what) + " is too large");
            return std::nullopt;
        }
        uint64_t v = 0;
        for (char c : t.text)
            v = v * 10 + static_cast<uint64_t>(c - '0');
        if (v > limit) {
            error(t, std::string(what) + " is too large");
            return std::nullopt;
        }
        return static_cast<uint32_t>(v);
    }

    std::optional<Rational> parse_rational_value() {
        if (at(Tok::decimal)) {
            auto r = parse_rational(get().text);
            if (!r)
                error(peek(), "malformed decimal literal");
            return r;
        }
        if (!at(Tok::integer)) {
            error(peek(), "expected a rational literal");
            return std::nullopt;
        }
        const Token& num = get();
        if (!accept(Tok::slash)) {
            auto r = parse_rational(num.text);
            if (!r)
                error(num, "malformed integer literal");
            return r;
        }
        if (!at(Tok::integer)) {
            error(peek(), "expected denominator after '/'");
            return std::nullopt;
        }
        const Token& den = get();
        auto r = parse_rational(std::string(num.text) + "/" + std::string(den.text));
        if (!r)
            error(den, "denominator must be non-zero");
        return r;
    }

    std::optional<WeightInterval> parse_interval() {
        if (accept_kw("empty"))
            return WeightInterval::empty();
        bool lo_open;
        const Token& open = peek();
        if (accept(Tok::lbracket))
            lo_open = false;
        else if (accept(Tok::lparen))
            lo_open = true;
        else {
            error(open, "expected an interval");
            return std::nullopt;
        }
        auto lo = parse_rational_value();
        if (!lo)
            return std::nullopt;
        if (!expect(Tok::comma, "',' in interval"))
            return std::nullopt;
        auto hi = parse_rational_value();
        if (!hi)
            return std::nullopt;
        bool hi_open;
        const Token& close = peek();
        if (accept(Tok::rbracket))
            hi_open = false;
        else if (accept(Tok::rparen))
            hi_open = true;
        else {
            error(close, "expected ']' or ')' closing the interval");
            return std::nullopt;
        }
        if (*lo < 0 || *lo > 1 || *hi < 0 || *hi > 1) {
            error(close, "interval endpoints must lie in [0,1]");
            return std::nullopt;
        }
        WeightInterval v = WeightInterval::make(*lo, *hi, lo_open, hi_open);
        if (v.is_empty())
            warn(close, "interval denotes the empty set");
        return v;
    }

    std::optional<NetworkAtom> parse_atom(const LabelTable& labels) {
        if (!expect(Tok::langle, "'<' opening a network atom"))
            return std::nullopt;
        const Token& name = peek();
        if (!at(Tok::ident)) {
            error(name, "expected a label name");
            return std::nullopt;
        }
        get();
        auto id = labels.find(name.text);
        if (!id) {
            error(name, "unknown label '" + std::string(name.text) + "'");
            // keep parsing the shape so later diagnostics line up
        }
        if (!expect(Tok::comma, "',' in network atom"))
            return std::nullopt;
        auto bnd = parse_interval();
        if (!bnd)
            return std::nullopt;
        if (!expect(Tok::rangle, "'>' closing the network atom"))
            return std::nullopt;
        if (!id)
            return std::nullopt;
        return NetworkAtom{*id, *bnd};
    }

    // formula := conj ('or' conj)* ; conj := unary ('and' unary)* ;
    // unary := 'not' unary | '(' formula ')' | TRUE | FALSE | atom
    std::optional<NetworkFormula> parse_formula(const LabelTable& labels) {
        if (depth_ > kMaxDepth) {
            error(peek(), "formula nesting too deep");
            return std::nullopt;
        }
        ++depth_;
        auto out = parse_disjunction(labels);
        --depth_;
        return out;
    }

    std::optional<NetworkFormula> parse_disjunction(const LabelTable& labels) {
        auto lhs = parse_conjunction(labels);
        while (lhs && accept_kw("or")) {
            auto rhs = parse_conjunction(labels);
            if (!rhs)
                return std::nullopt;
            lhs = NetworkFormula::disjoin(std::move(*lhs), std::move(*rhs));
        }
        return lhs;
    }

    std::optional<NetworkFormula> parse_conjunction(const LabelTable& labels) {
        auto lhs = parse_unary(labels);
        while (lhs && accept_kw("and")) {
            auto rhs = parse_unary(labels);
            if (!rhs)
                return std::nullopt;
            lhs = NetworkFormula::conjoin(std::move(*lhs), std::move(*rhs));
        }
        return lhs;
    }

    std::optional<NetworkFormula> parse_unary(const LabelTable& labels) {
        if (depth_ > kMaxDepth) {
            error(peek(), "formula nesting too deep");
            return std::nullopt;
        }
        ++depth_;
        std::optional<NetworkFormula> out;
        if (accept_kw("not")) {
            auto inner = parse_unary(labels);
            if (inner)
                out = NetworkFormula::negate(std::move(*inner));
        } else if (accept_kw("TRUE")) {
            out = NetworkFormula::truth();
        } else if (accept_kw("FALSE")) {
            out = NetworkFormula::falsity();
        } else if (accept(Tok::lparen)) {
            auto inner = parse_formula(labels);
            if (inner && expect(Tok::rparen, "')'"))
                out = std::move(*inner);
        } else if (at(Tok::langle)) {
            auto a = parse_atom(labels);
            if (a)
                out = NetworkFormula::atom(std::move(*a));
        } else {
            error(peek(), "expected a formula");
        }
        --depth_;
        return out;
    }

    // literal conjunction, used by rule contagion clauses:
    // TRUE | literal ('and' literal)* with literal := ['not'] atom
    std::optional<std::vector<Literal>> parse_literals(const LabelTable& labels) {
        std::vector<Literal> out;
        if (accept_kw("TRUE"))
            return out;
        for (;;) {
            Literal lit;
            lit.negated = accept_kw("not");
            auto a = parse_atom(labels);
            if (!a)
                return std::nullopt;
            lit.atom = std::move(*a);
            out.push_back(std::move(lit));
            if (!accept_kw("and"))
                break;
        }
        return out;
    }

    std::optional<ComponentId> parse_component(const Graph& g) {
        const Token& first = peek();
        auto name = parse_name("a node name");
        if (!name)
            return std::nullopt;
        auto from = g.find_node(*name);
        if (!accept(Tok::arrow)) {
            if (!from) {
                error(first, "unknown node '" + *name + "'");
                return std::nullopt;
            }
            return g.node_component(*from);
        }
        const Token& second = peek();
        auto to_name = parse_name("a node name");
        if (!to_name)
            return std::nullopt;
        auto to = g.find_node(*to_name);
        if (!from) {
            error(first, "unknown node '" + *name + "'");
            return std::nullopt;
        }
        if (!to) {
            error(second, "unknown node '" + *to_name + "'");
            return std::nullopt;
        }
        auto e = g.find_edge(*from, *to);
        if (!e) {
            error(second, "no edge " + *name + " -> " + *to_name + " in the graph");
            return std::nullopt;
        }
        return g.edge_component(*e);
    }

    std::optional<InfluenceFunction> parse_influence() {
        const Token& name = peek();
        if (!at(Tok::ident)) {
            error(name, "expected an influence function");
            return std::nullopt;
        }
        if (name.text == "tip" || name.text == "suppress") {
            bool is_tip = name.text == "tip";
            get();
            if (!expect(Tok::lparen, "'('"))
                return std::nullopt;
            auto r = parse_rational_value();
            if (!r)
                return std::nullopt;
            if (!expect(Tok::rparen, "')'"))
                return std::nullopt;
            if (*r <= 0 || *r > 1) {
                error(name, "parameter must lie in (0,1]");
                return std::nullopt;
            }
            return is_tip ? InfluenceFunction::tip(*r) : InfluenceFunction::suppress(*r);
        }
        if (accept_kw("frac_threshold")) {
            if (!expect(Tok::lparen, "'('"))
                return std::nullopt;
            auto theta = parse_rational_value();
            if (!theta)
                return std::nullopt;
            if (!expect(Tok::comma, "','"))
                return std::nullopt;
            auto bnd = parse_interval();
            if (!bnd)
                return std::nullopt;
            if (!expect(Tok::rparen, "')'"))
                return std::nullopt;
            if (*theta <= 0 || *theta > 1) {
                error(name, "threshold must lie in (0,1]");
                return std::nullopt;
            }
            return InfluenceFunction::frac_threshold(*theta, *bnd);
        }
        if (accept_kw("table")) {
            if (!expect(Tok::lparen, "'('"))
                return std::nullopt;
            std::vector<InfluenceFunction::TableRow> rows;
            if (accept(Tok::rparen))
                return InfluenceFunction::table(std::move(rows));
            for (;;) {
                InfluenceFunction::TableRow row;
                auto q = parse_small_int("qualifying count");
                if (!q)
                    return std::nullopt;
                if (!expect(Tok::comma, "','"))
                    return std::nullopt;
                auto e = parse_small_int("eligible count");
                if (!e)
                    return std::nullopt;
                if (!expect(Tok::arrow, "'->'"))
                    return std::nullopt;
                auto v = parse_interval();
                if (!v)
                    return std::nullopt;
                row.qual = *q;
                row.elig = *e;
                row.value = *v;
                rows.push_back(std::move(row));
                if (!accept(Tok::comma))
                    break;
            }
            if (!expect(Tok::rparen, "')'"))
                return std::nullopt;
            return InfluenceFunction::table(std::move(rows));
        }
        error(name, "unknown influence function '" + std::string(name.text) + "'");
        return std::nullopt;
    }
};

class GraphFileParser : public Parser {
public:
    using Parser::Parser;

    void run(GraphParse& out) {
        for (;;) {
            if (at(Tok::end))
                break;
            if (accept_kw("label")) {
                if (!parse_label_decl(out.labels))
                    sync();
            } else if (accept_kw("node")) {
                if (!parse_node(out))
                    sync();
            } else if (accept_kw("edge")) {
                if (!parse_edge(out))
                    sync();
            } else {
                error(peek(), "expected a 'label', 'node' or 'edge' statement");
                sync();
            }
        }
        if (out.graph.node_count() == 0)
            diags_.push_back({Severity::error, "graph must contain at least one node",
                              {std::string(file_), {}, {}}});
    }

private:
    bool parse_label_decl(LabelTable& labels) {
        Fluency fluency;
        if (accept_kw("fluent"))
            fluency = Fluency::fluent;
        else if (accept_kw("nonfluent"))
            fluency = Fluency::non_fluent;
        else {
            error(peek(), "expected 'fluent' or 'nonfluent'");
            return false;
        }
        for (;;) {
            const Token& tok = peek();
            auto name = parse_name("a label name");
            if (!name)
                return false;
            if (!labels.add(*name, fluency))
                error(tok, "label '" + *name + "' already declared with the other fluency");
            if (!accept(Tok::comma))
                break;
        }
        return expect(Tok::semi, "';'");
    }

    bool parse_annotations(GraphParse& out, ComponentId c) {
        if (!accept(Tok::colon))
            return expect(Tok::semi, "';'");
        for (;;) {
            const Token& tok = peek();
            auto a = parse_atom(out.labels);
            if (!a)
                return false;
            if (out.labels.is_fluent(a->label))
                error(tok, "initial atoms must use non-fluent labels; use a fact instead");
            else
                out.annotations.emplace_back(c, std::move(*a));
            if (!accept(Tok::comma))
                break;
        }
        return expect(Tok::semi, "';'");
    }

    bool parse_node(GraphParse& out) {
        const Token& tok = peek();
        auto name = parse_name("a node name");
        if (!name)
            return false;
        if (out.graph.find_node(*name)) {
            error(tok, "duplicate node id '" + *name + "'");
            return false;
        }
        NodeId v = out.graph.add_node(*name);
        return parse_annotations(out, out.graph.node_component(v));
    }

    bool parse_edge(GraphParse& out) {
        const Token& from_tok = peek();
        auto from_name = parse_name("a node name");
        if (!from_name)
            return false;
        if (!expect(Tok::arrow, "'->'"))
            return false;
        const Token& to_tok = peek();
        auto to_name = parse_name("a node name");
        if (!to_name)
            return false;
        auto from = out.graph.find_node(*from_name);
        auto to = out.graph.find_node(*to_name);
        if (!from) {
            error(from_tok, "unknown node '" + *from_name + "'");
            return false;
        }
        if (!to) {
            error(to_tok, "unknown node '" + *to_name + "'");
            return false;
        }
        auto e = out.graph.add_edge(*from, *to);
        if (!e) {
            error(to_tok, *from == *to ? "self loops are not allowed"
                                       : "duplicate edge " + *from_name + " -> " + *to_name);
            return false;
        }
        return parse_annotations(out, out.graph.edge_component(*e));
    }
};

class ProgramFileParser : public Parser {
public:
    ProgramFileParser(std::string_view text, std::string_view file,
                      std::vector<ParseDiagnostic>& diags, const Graph& graph)
        : Parser(text, file, diags), graph_(graph) {}

    void run(ProgramParse& out) {
        Program& p = out.program;
        for (;;) {
            if (at(Tok::end))
                break;
            const Token& stmt = peek();
            if (accept_kw("label")) {
                if (!parse_label_decl(p.labels))
                    sync();
            } else if (accept_kw("tmax")) {
                if (!parse_tmax(p, stmt))
                    sync();
            } else if (accept_kw("fact")) {
                if (!parse_fact(p, stmt))
                    sync();
            } else if (accept_kw("ic")) {
                if (!parse_ic(p, stmt))
                    sync();
            } else if (accept_kw("rule")) {
                if (!parse_rule(p, stmt))
                    sync();
            } else {
                error(stmt, "expected a 'label', 'tmax', 'fact', 'ic' or 'rule' statement");
                sync();
            }
        }
        if (!has_errors(diags_)) {
            for (const auto& issue : validate_program(p, graph_)) {
                SourceSpan where{std::string(file_), {}, {}};
                if (issue.subject == ValidationIssue::Subject::fact &&
                    issue.index < fact_spans_.size())
                    where = fact_spans_[issue.index];
                else if (issue.subject == ValidationIssue::Subject::rule &&
                         issue.index < rule_spans_.size())
                    where = rule_spans_[issue.index];
                else if (issue.subject == ValidationIssue::Subject::ic &&
                         issue.index < ic_spans_.size())
                    where = ic_spans_[issue.index];
                diags_.push_back({Severity::error, issue.message, where});
            }
        }
    }

private:
    const Graph& graph_;
    bool tmax_declared_ = false;
    std::vector<SourceSpan> fact_spans_;
    std::vector<SourceSpan> rule_spans_;
    std::vector<SourceSpan> ic_spans_;

    bool parse_label_decl(LabelTable& labels) {
        Fluency fluency;
        if (accept_kw("fluent"))
            fluency = Fluency::fluent;
        else if (accept_kw("nonfluent"))
            fluency = Fluency::non_fluent;
        else {
            error(peek(), "expected 'fluent' or 'nonfluent'");
            return false;
        }
        for (;;) {
            const Token& tok = peek();
            auto name = parse_name("a label name");
            if (!name)
                return false;
            if (!labels.add(*name, fluency))
                error(tok, "label '" + *name + "' already declared with the other fluency");
            if (!accept(Tok::comma))
                break;
        }
        return expect(Tok::semi, "';'");
    }

    bool parse_tmax(Program& p, const Token& stmt) {
        if (tmax_declared_) {
            error(stmt, "tmax already declared");
            return false;
        }
        auto v = parse_small_int("tmax", 1000000);
        if (!v)
            return false;
        p.t_max = *v;
        tmax_declared_ = true;
        return expect(Tok::semi, "';'");
    }

    std::optional<uint32_t> parse_time(const Program& p) {
        if (at_kw("tmax")) {
            const Token& tok = get();
            if (!tmax_declared_) {
                error(tok, "'tmax' used before its declaration");
                return std::nullopt;
            }
            return p.t_max;
        }
        return parse_small_int("a time point");
    }

    bool parse_fact(Program& p, const Token& stmt) {
        if (!expect(Tok::lparen, "'('"))
            return false;
        auto atom = parse_atom(p.labels);
        if (!atom)
            return false;
        if (!expect(Tok::comma, "','"))
            return false;
        auto c = parse_component(graph_);
        if (!c)
            return false;
        if (!expect(Tok::rparen, "')'"))
            return false;
        if (!expect(Tok::at, "'@'"))
            return false;
        if (!expect(Tok::lbracket, "'['"))
            return false;
        auto t1 = parse_time(p);
        if (!t1)
            return false;
        if (!expect(Tok::comma, "','"))
            return false;
        auto t2 = parse_time(p);
        if (!t2)
            return false;
        if (!expect(Tok::rbracket, "']'"))
            return false;
        if (!expect(Tok::semi, "';'"))
            return false;
        p.facts.push_back({std::move(*atom), *c, *t1, *t2});
        fact_spans_.push_back(span(stmt, toks_[pos_ - 1]));
        return true;
    }

    bool parse_ic(Program& p, const Token& stmt) {
        auto head = parse_atom(p.labels);
        if (!head)
            return false;
        if (!expect(Tok::left_arrow, "'<-'"))
            return false;
        std::vector<NetworkAtom> body;
        if (!accept_kw("TRUE")) {
            for (;;) {
                auto a = parse_atom(p.labels);
                if (!a)
                    return false;
                body.push_back(std::move(*a));
                if (!accept_kw("and"))
                    break;
            }
        }
        if (!expect(Tok::semi, "';'"))
            return false;
        p.ics.push_back({std::move(*head), std::move(body)});
        ic_spans_.push_back(span(stmt, toks_[pos_ - 1]));
        return true;
    }

    // rule head <-N- if f via edge g_e node g_n having h using ifl ;
    bool parse_rule(Program& p, const Token& stmt) {
        Rule r;
        const Token& head_tok = peek();
        auto head = parse_name("a label name");
        if (!head)
            return false;
        auto head_id = p.labels.find(*head);
        if (!head_id) {
            error(head_tok, "unknown label '" + *head + "'");
            return false;
        }
        r.head = *head_id;
        if (!expect(Tok::left_arrow, "'<-'"))
            return false;
        auto dt = parse_small_int("a delay", 1000000);
        if (!dt)
            return false;
        r.delta_t = *dt;
        if (!expect(Tok::minus, "'-' closing the rule arrow"))
            return false;
        if (!expect_kw("if"))
            return false;
        auto target = parse_formula(p.labels);
        if (!target)
            return false;
        r.target_criteria = std::move(*target);
        if (!expect_kw("via"))
            return false;
        if (!expect_kw("edge"))
            return false;
        auto ge = parse_formula(p.labels);
        if (!ge)
            return false;
        r.neighbor.edge_criteria = std::move(*ge);
        if (!expect_kw("node"))
            return false;
        auto gn = parse_formula(p.labels);
        if (!gn)
            return false;
        r.neighbor.node_criteria = std::move(*gn);
        if (!expect_kw("having"))
            return false;
        auto h = parse_literals(p.labels);
        if (!h)
            return false;
        r.neighbor.contagion = std::move(*h);
        if (!expect_kw("using"))
            return false;
        auto ifl = parse_influence();
        if (!ifl)
            return false;
        r.neighbor.ifl = std::move(*ifl);
        if (!expect(Tok::semi, "';'"))
            return false;
        p.rules.push_back(std::move(r));
        rule_spans_.push_back(span(stmt, toks_[pos_ - 1]));
        return true;
    }
};

class QueryFileParser : public Parser {
public:
    QueryFileParser(std::string_view text, std::string_view file,
                    std::vector<ParseDiagnostic>& diags, const LabelTable& labels,
                    const Graph& graph, uint32_t t_max)
        : Parser(text, file, diags), labels_(labels), graph_(graph), t_max_(t_max) {}

    void run(QueriesParse& out) {
        for (;;) {
            if (at(Tok::end))
                break;
            if (accept_kw("query")) {
                if (!parse_query(out))
                    sync();
            } else {
                error(peek(), "expected a 'query' statement");
                sync();
            }
        }
    }

private:
    const LabelTable& labels_;
    const Graph& graph_;
    uint32_t t_max_;

    std::optional<uint32_t> parse_time() {
        if (at_kw("tmax")) {
            get();
            return t_max_;
        }
        return parse_small_int("a time point");
    }

    bool parse_query(QueriesParse& out) {
        if (accept_kw("entails")) {
            QueryStatement q;
            q.type = QueryStatement::Type::entails;
            if (!expect(Tok::lparen, "'('"))
                return false;
            auto atom = parse_atom(labels_);
            if (!atom)
                return false;
            if (!expect(Tok::comma, "','"))
                return false;
            auto c = parse_component(graph_);
            if (!c)
                return false;
            if (!expect(Tok::rparen, "')'"))
                return false;
            if (!expect(Tok::at, "'@'"))
                return false;
            if (!expect(Tok::lbracket, "'['"))
                return false;
            auto t1 = parse_time();
            if (!t1)
                return false;
            if (!expect(Tok::comma, "','"))
                return false;
            auto t2 = parse_time();
            if (!t2)
                return false;
            if (!expect(Tok::rbracket, "']'"))
                return false;
            if (!expect(Tok::semi, "';'"))
                return false;
            const Token& closing = toks_[pos_ - 1];
            if (*t1 > *t2 || *t2 > t_max_) {
                error(closing, "query window must lie within [0,tmax]");
                return false;
            }
            q.fact = {std::move(*atom), *c, *t1, *t2};
            out.queries.push_back(std::move(q));
            return true;
        }
        if (accept_kw("tight")) {
            QueryStatement q;
            q.type = QueryStatement::Type::tight;
            if (!expect(Tok::lparen, "'('"))
                return false;
            const Token& name = peek();
            auto label = parse_name("a label name");
            if (!label)
                return false;
            auto id = labels_.find(*label);
            if (!id) {
                error(name, "unknown label '" + *label + "'");
                return false;
            }
            q.label = *id;
            if (!expect(Tok::comma, "','"))
                return false;
            auto c = parse_component(graph_);
            if (!c)
                return false;
            q.component = *c;
            if (!expect(Tok::rparen, "')'"))
                return false;
            if (!expect(Tok::at, "'@'"))
                return false;
            auto t = parse_time();
            if (!t)
                return false;
            if (!expect(Tok::semi, "';'"))
                return false;
            if (*t > t_max_) {
                error(toks_[pos_ - 1], "time point exceeds tmax");
                return false;
            }
            q.t = *t;
            out.queries.push_back(std::move(q));
            return true;
        }
        error(peek(), "expected 'entails' or 'tight'");
        return false;
    }
};

class MembershipFileParser : public Parser {
public:
    MembershipFileParser(std::string_view text, std::string_view file,
                         std::vector<ParseDiagnostic>& diags, const Graph& graph)
        : Parser(text, file, diags), graph_(graph) {}

    void run(MembershipParse& out) {
        std::map<std::string, uint32_t, std::less<>> group_index;
        for (;;) {
            if (at(Tok::end))
                break;
            if (accept_kw("group")) {
                const Token& tok = peek();
                auto name = parse_name("a group name");
                if (!name) {
                    sync();
                    continue;
                }
                if (group_index.count(*name))
                    error(tok, "duplicate group '" + *name + "'");
                else {
                    group_index.emplace(*name, static_cast<uint32_t>(out.groups.size()));
                    out.groups.push_back(*name);
                }
                expect(Tok::semi, "';'");
            } else if (accept_kw("member")) {
                const Token& ntok = peek();
                auto node = parse_name("a node name");
                if (!node) {
                    sync();
                    continue;
                }
                const Token& gtok = peek();
                auto group = parse_name("a group name");
                if (!group) {
                    sync();
                    continue;
                }
                auto v = graph_.find_node(*node);
                if (!v)
                    error(ntok, "unknown node '" + *node + "'");
                auto git = group_index.find(*group);
                if (git == group_index.end())
                    error(gtok, "unknown group '" + *group + "'");
                if (v && git != group_index.end()) {
                    if (out.known.count(*v))
                        error(ntok, "node '" + *node + "' already has a known group");
                    else
                        out.known.emplace(*v, git->second);
                }
                expect(Tok::semi, "';'");
            } else if (accept_kw("param")) {
                if (!parse_param(out, group_index))
                    sync();
            } else {
                error(peek(), "expected a 'group', 'member' or 'param' statement");
                sync();
            }
        }
        out.params.alpha.resize(out.groups.size(), Rational(1, 2));
        for (const auto& [gi, a] : alpha_)
            out.params.alpha[gi] = a;
    }

private:
    const Graph& graph_;
    std::map<uint32_t, Rational> alpha_;

    bool parse_param(MembershipParse& out, const std::map<std::string, uint32_t, std::less<>>& groups) {
        const Token& key = peek();
        if (accept_kw("alpha")) {
            const Token& gtok = peek();
            auto group = parse_name("a group name");
            if (!group)
                return false;
            auto r = parse_rational_value();
            if (!r)
                return false;
            if (*r <= 0 || *r > 1) {
                error(gtok, "alpha must lie in (0,1]");
                return false;
            }
            auto git = groups.find(*group);
            if (git == groups.end()) {
                error(gtok, "unknown group '" + *group + "'");
                return false;
            }
            alpha_[git->second] = *r;
            return expect(Tok::semi, "';'");
        }
        if (accept_kw("theta")) {
            auto r = parse_rational_value();
            if (!r)
                return false;
            if (*r <= 0 || *r > 1) {
                error(key, "theta must lie in (0,1]");
                return false;
            }
            out.params.theta = *r;
            return expect(Tok::semi, "';'");
        }
        if (accept_kw("rounds")) {
            auto v = parse_small_int("rounds");
            if (!v)
                return false;
            out.params.rounds = *v;
            return expect(Tok::semi, "';'");
        }
        error(key, "expected 'alpha', 'theta' or 'rounds'");
        return false;
    }
};

} // namespace

GraphParse parse_graph(std::string_view text, std::string_view filename) {
    GraphParse out;
    GraphFileParser parser(text, filename, out.diagnostics);
    parser.run(out);
    out.ok = !has_errors(out.diagnostics);
    if (!out.ok) {
        out.graph = Graph();
        out.labels = LabelTable();
        out.annotations.clear();
    }
    return out;
}

ProgramParse parse_program(std::string_view text, const LabelTable& vocabulary, const Graph& graph,
                           std::string_view filename) {
    ProgramParse out;
    out.program.labels = vocabulary;
    ProgramFileParser parser(text, filename, out.diagnostics, graph);
    parser.run(out);
    out.ok = !has_errors(out.diagnostics);
    if (!out.ok)
        out.program = Program();
    return out;
}

QueriesParse parse_queries(std::string_view text, const LabelTable& vocabulary, const Graph& graph,
                           uint32_t t_max, std::string_view filename) {
    QueriesParse out;
    QueryFileParser parser(text, filename, out.diagnostics, vocabulary, graph, t_max);
    parser.run(out);
    out.ok = !has_errors(out.diagnostics);
    if (!out.ok)
        out.queries.clear();
    return out;
}

MembershipParse parse_membership(std::string_view text, const Graph& graph,
                                 std::string_view filename) {
    MembershipParse out;
    MembershipFileParser parser(text, filename, out.diagnostics, graph);
    parser.run(out);
    out.ok = !has_errors(out.diagnostics);
    return out;
}

std::string serialize_interval(const WeightInterval& v) {
    return v.to_string();
}

std::string serialize_atom(const NetworkAtom& a, const LabelTable& labels) {
    return "<" + labels[a.label].name + "," + serialize_interval(a.bnd) + ">";
}

namespace {

int formula_precedence(const NetworkFormula& f) {
    switch (f.kind()) {
    case NetworkFormula::Kind::disjunction:
        return 1;
    case NetworkFormula::Kind::conjunction:
        return 2;
    default:
        return 3;
    }
}

void write_formula(std::string& out, const NetworkFormula& f, const LabelTable& labels,
                   int parent_precedence) {
    int prec = formula_precedence(f);
    bool wrap = prec < parent_precedence;
    if (wrap)
        out += '(';
    switch (f.kind()) {
    case NetworkFormula::Kind::truth:
        out += "TRUE";
        break;
    case NetworkFormula::Kind::falsity:
        out += "FALSE";
        break;
    case NetworkFormula::Kind::atom:
        out += serialize_atom(f.as_atom(), labels);
        break;
    case NetworkFormula::Kind::negation:
        out += "not ";
        write_formula(out, f.child(0), labels, 3);
        break;
    case NetworkFormula::Kind::conjunction:
        // binary operators parse left-associative; a right-nested child of
        // the same precedence keeps its parentheses
        write_formula(out, f.child(0), labels, 2);
        out += " and ";
        write_formula(out, f.child(1), labels, 3);
        break;
    case NetworkFormula::Kind::disjunction:
        write_formula(out, f.child(0), labels, 1);
        out += " or ";
        write_formula(out, f.child(1), labels, 2);
        break;
    }
    if (wrap)
        out += ')';
}

std::string serialize_influence(const InfluenceFunction& ifl) {
    switch (ifl.family()) {
    case InfluenceFunction::Family::tip:
        return "tip(" + to_fraction_string(ifl.parameter()) + ")";
    case InfluenceFunction::Family::suppress:
        return "suppress(" + to_fraction_string(ifl.parameter()) + ")";
    case InfluenceFunction::Family::frac_threshold:
        return "frac_threshold(" + to_fraction_string(ifl.parameter()) + "," +
               serialize_interval(ifl.threshold_bound()) + ")";
    case InfluenceFunction::Family::table: {
        std::string out = "table(";
        bool first = true;
        for (const auto& row : ifl.rows()) {
            if (!first)
                out += ", ";
            first = false;
            out += std::to_string(row.qual) + "," + std::to_string(row.elig) + " -> " +
                   serialize_interval(row.value);
        }
        return out + ")";
    }
    }
    return "";
}

std::string serialize_labels(const LabelTable& labels) {
    std::string out;
    for (LabelId l = 0; l < labels.size(); ++l) {
        out += labels[l].fluency == Fluency::fluent ? "label fluent " : "label nonfluent ";
        out += labels[l].name;
        out += ";\n";
    }
    return out;
}

} // namespace

std::string serialize_formula(const NetworkFormula& f, const LabelTable& labels) {
    std::string out;
    write_formula(out, f, labels, 0);
    return out;
}

std::string serialize_graph(const Graph& g, const LabelTable& labels,
                            const std::vector<std::pair<ComponentId, NetworkAtom>>& annotations) {
    std::string out = serialize_labels(labels);
    std::vector<std::pair<ComponentId, NetworkAtom>> sorted = annotations;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first < b.first : a.second.label < b.second.label;
    });
    auto write_annotations = [&](ComponentId c) {
        bool first = true;
        for (const auto& [comp, atom] : sorted) {
            if (comp != c)
                continue;
            out += first ? " : " : ", ";
            first = false;
            out += serialize_atom(atom, labels);
        }
    };
    for (NodeId v = 0; v < g.node_count(); ++v) {
        out += "node " + g.node_name(v);
        write_annotations(g.node_component(v));
        out += ";\n";
    }
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const auto& [from, to] = g.edge(e);
        out += "edge " + g.node_name(from) + " -> " + g.node_name(to);
        write_annotations(g.edge_component(e));
        out += ";\n";
    }
    return out;
}

std::string serialize_program(const Program& p, const Graph& g) {
    std::string out = serialize_labels(p.labels);
    out += "tmax " + std::to_string(p.t_max) + ";\n";
    for (const Fact& f : p.facts) {
        out += "fact (" + serialize_atom(f.atom, p.labels) + ", " + g.component_name(f.component) +
               ") @ [" + std::to_string(f.t_from) + "," + std::to_string(f.t_to) + "];\n";
    }
    for (const IntegrityConstraint& ic : p.ics) {
        out += "ic " + serialize_atom(ic.head, p.labels) + " <- ";
        if (ic.body.empty()) {
            out += "TRUE";
        } else {
            for (size_t i = 0; i < ic.body.size(); ++i) {
                if (i)
                    out += " and ";
                out += serialize_atom(ic.body[i], p.labels);
            }
        }
        out += ";\n";
    }
    for (const Rule& r : p.rules) {
        out += "rule " + p.labels[r.head].name + " <-" + std::to_string(r.delta_t) + "- if " +
               serialize_formula(r.target_criteria, p.labels) + " via edge " +
               serialize_formula(r.neighbor.edge_criteria, p.labels) + " node " +
               serialize_formula(r.neighbor.node_criteria, p.labels) + " having ";
        if (r.neighbor.contagion.empty()) {
            out += "TRUE";
        } else {
            for (size_t i = 0; i < r.neighbor.contagion.size(); ++i) {
                if (i)
                    out += " and ";
                if (r.neighbor.contagion[i].negated)
                    out += "not ";
                out += serialize_atom(r.neighbor.contagion[i].atom, p.labels);
            }
        }
        out += " using " + serialize_influence(r.neighbor.ifl) + ";\n";
    }
    return out;
}

} // namespace mancalog
