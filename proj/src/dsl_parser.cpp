#include <algorithm>
#include <charconv>
#include <limits>

#include "thimac/dsl.hpp"

namespace thimac {

namespace {

enum class Tok { Ident, String, Number, LBrace, RBrace, Semi, Colon, Comma, Dot, Arrow, Pipe, Equals, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;  // identifier text or decoded string literal
    std::uint32_t number = 0;
    std::size_t start = 0;
    std::size_t end = 0;
};

std::string_view describe(Tok t) {
    switch (t) {
        case Tok::Ident: return "identifier";
        case Tok::String: return "string";
        case Tok::Number: return "number";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::Semi: return "';'";
        case Tok::Colon: return "':'";
        case Tok::Comma: return "','";
        case Tok::Dot: return "'.'";
        case Tok::Arrow: return "'->'";
        case Tok::Pipe: return "'|'";
        case Tok::Equals: return "'='";
        case Tok::End: return "end of input";
    }
    return "?";
}

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }

/// Maps byte offsets to line/column.
class LineIndex {
public:
    explicit LineIndex(std::string_view text) {
        starts_.push_back(0);
        for (std::size_t i = 0; i < text.size(); ++i)
            if (text[i] == '\n') starts_.push_back(i + 1);
    }

    SourceSpan span(std::string_view file, std::size_t start, std::size_t end) const {
        auto it = std::upper_bound(starts_.begin(), starts_.end(), start);
        const auto line = static_cast<std::size_t>(it - starts_.begin());
        return SourceSpan{std::string(file), start, end, line, start - starts_[line - 1] + 1};
    }

private:
    std::vector<std::size_t> starts_;
};

class Sink {
public:
    void add(Diagnostic d) {
        if (full()) return;
        items_.push_back(std::move(d));
    }
    bool full() const noexcept { return items_.size() >= kDiagnosticLimit; }
    std::vector<Diagnostic>& items() noexcept { return items_; }

private:
    std::vector<Diagnostic> items_;
};

std::vector<Token> lex(std::string_view text, const LineIndex& lines, std::string_view file, Sink& sink) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto error = [&](std::size_t a, std::size_t b, std::string msg) {
        sink.add(make_diagnostic("L1", std::move(msg), lines.span(file, a, b)));
    };
    while (i < text.size() && !sink.full()) {
        const char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        const std::size_t start = i;
        Token tok;
        tok.start = start;
        if (ident_start(c)) {
            ++i;
            // '-' joins identifier parts unless it starts an arrow.
            while (i < text.size() &&
                   (ident_char(text[i]) || (text[i] == '-' && i + 1 < text.size() && text[i + 1] != '>' &&
                                            ident_char(text[i + 1]))))
                ++i;
            tok.kind = Tok::Ident;
            tok.text = std::string(text.substr(start, i - start));
        } else if (digit(c)) {
            while (i < text.size() && digit(text[i])) ++i;
            std::uint32_t value = 0;
            auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + i, value);
            if (ec != std::errc{} || (i < text.size() && ident_start(text[i]))) {
                while (i < text.size() && ident_char(text[i])) ++i;
                error(start, i, "malformed number '" + std::string(text.substr(start, i - start)) + "'");
                continue;
            }
            tok.kind = Tok::Number;
            tok.number = value;
        } else if (c == '"') {
            ++i;
            bool closed = false;
            while (i < text.size()) {
                const char d = text[i];
                if (d == '"') {
                    closed = true;
                    ++i;
                    break;
                }
                if (d == '\n') break;
                if (d == '\\' && i + 1 < text.size()) {
                    const char e = text[i + 1];
                    tok.text += e == 'n' ? '\n' : e == 't' ? '\t' : e;
                    i += 2;
                    continue;
                }
                tok.text += d;
                ++i;
            }
            if (!closed) {
                error(start, i, "unterminated string literal");
                continue;
            }
            tok.kind = Tok::String;
        } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            tok.kind = Tok::Arrow;
            i += 2;
        } else {
            switch (c) {
                case '{': tok.kind = Tok::LBrace; break;
                case '}': tok.kind = Tok::RBrace; break;
                case ';': tok.kind = Tok::Semi; break;
                case ':': tok.kind = Tok::Colon; break;
                case ',': tok.kind = Tok::Comma; break;
                case '.': tok.kind = Tok::Dot; break;
                case '|': tok.kind = Tok::Pipe; break;
                case '=': tok.kind = Tok::Equals; break;
                default: {
                    // Consume a whole UTF-8 sequence so one stray code point is one diagnostic.
                    std::size_t len = 1;
                    const auto u = static_cast<unsigned char>(c);
                    if (u >= 0xC0) len = u >= 0xF0 ? 4 : u >= 0xE0 ? 3 : 2;
                    i = std::min(text.size(), i + len);
                    error(start, i, "unexpected character");
                    continue;
                }
            }
            ++i;
        }
        tok.end = i;
        out.push_back(std::move(tok));
    }
    Token end;
    end.kind = Tok::End;
    end.start = end.end = text.size();
    out.push_back(end);
    return out;
}

// ---- syntax tree --------------------------------------------------------

struct PathRef {
    std::vector<std::string> segments;
    std::size_t start = 0;
    std::size_t end = 0;

    std::string dotted() const {
        std::string s;
        for (const auto& seg : segments) {
            if (!s.empty()) s += '.';
            s += seg;
        }
        return s;
    }
};

struct StageAst {
    ActionKind kind;
    std::size_t start, end;
};

struct MachineAst {
    std::string name;
    std::size_t start = 0, end = 0;
    std::vector<StageAst> stages;
    std::vector<MachineAst> children;
};

struct EdgeAst {
    bool trigger = false;
    std::optional<std::string> thing;
    PathRef from, to;
    std::size_t start = 0, end = 0;
};

struct StorageAst {
    std::string thing;
    PathRef machine;
    std::size_t start = 0, end = 0;
};

struct RegionAst {
    std::string name;
    std::vector<PathRef> stages;
    std::size_t start = 0, end = 0;
};

struct EventAst {
    std::string name;
    std::optional<std::string> label;
    std::string region;
    std::size_t region_start = 0, region_end = 0;
    std::optional<std::uint32_t> duration;
    std::size_t start = 0, end = 0;
};

struct NameRef {
    std::string name;
    std::size_t start, end;
};

struct BehaviorAst {
    BehaviorStatement stmt;
    std::vector<NameRef> refs;
};

struct DocumentAst {
    std::vector<MachineAst> machines;
    std::vector<EdgeAst> edges;
    std::vector<StorageAst> storages;
    std::vector<RegionAst> regions;
    std::vector<EventAst> events;
    std::vector<BehaviorAst> behavior;
};

struct SyntaxAbort {};

class Parser {
public:
    Parser(std::vector<Token> tokens, const LineIndex& lines, std::string_view file, Sink& sink)
        : toks_(std::move(tokens)), lines_(lines), file_(file), sink_(sink) {}

    DocumentAst parse_document() {
        DocumentAst doc;
        while (!at(Tok::End) && !sink_.full()) {
            const std::size_t before = pos_;
            const int depth0 = depth_;
            try {
                parse_item(doc);
            } catch (const SyntaxAbort&) {
                synchronize(depth0);
            }
            if (pos_ == before) {
                // Stray token at top level (e.g. an unmatched '}').
                error_here("unexpected " + std::string(describe(peek().kind)));
                advance();
            }
        }
        return doc;
    }

private:
    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    bool at(Tok k) const { return peek().kind == k; }
    bool at_word(std::string_view w, std::size_t ahead = 0) const {
        return peek(ahead).kind == Tok::Ident && peek(ahead).text == w;
    }

    const Token& advance() {
        const Token& t = toks_[pos_];
        if (t.kind == Tok::LBrace) ++depth_;
        if (t.kind == Tok::RBrace) --depth_;
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }

    SourceSpan span(std::size_t a, std::size_t b) const { return lines_.span(file_, a, b); }

    void error_here(std::string msg) {
        const auto& t = peek();
        sink_.add(make_diagnostic("S1", std::move(msg), span(t.start, t.end)));
    }

    [[noreturn]] void fail(std::string msg) {
        error_here(std::move(msg));
        throw SyntaxAbort{};
    }

    const Token& expect(Tok k, std::string_view context) {
        if (!at(k))
            fail("expected " + std::string(describe(k)) + " " + std::string(context) + ", found " +
                 std::string(describe(peek().kind)));
        return advance();
    }

    std::string expect_ident(std::string_view context) { return expect(Tok::Ident, context).text; }

    void expect_word(std::string_view w) {
        if (!at_word(w)) fail("expected '" + std::string(w) + "', found " + std::string(describe(peek().kind)));
        advance();
    }

    /// Skips to the end of the current statement: a ';' or a block closed
    /// at the statement's starting brace depth, or a '}' that belongs to
    /// the enclosing block (left in place).
    void synchronize(int depth0) {
        while (!at(Tok::End)) {
            if (at(Tok::Semi) && depth_ == depth0) {
                advance();
                return;
            }
            if (at(Tok::RBrace)) {
                if (depth_ <= depth0) return;
                advance();
                if (depth_ == depth0) {
                    if (at(Tok::Semi)) advance();
                    return;
                }
                continue;
            }
            advance();
        }
    }

    void parse_item(DocumentAst& doc) {
        if (at(Tok::Semi)) {
            advance();
            return;
        }
        if (!at(Tok::Ident)) fail("expected a declaration, found " + std::string(describe(peek().kind)));
        const auto& w = peek().text;
        if (w == "machine") {
            doc.machines.push_back(parse_machine(1));
        } else if (w == "flow" || w == "trigger") {
            doc.edges.push_back(parse_edge());
        } else if (w == "storage") {
            doc.storages.push_back(parse_storage());
        } else if (w == "region") {
            doc.regions.push_back(parse_region());
        } else if (w == "event") {
            doc.events.push_back(parse_event());
        } else if (w == "behavior") {
            parse_behavior(doc);
        } else {
            fail("unknown declaration '" + w + "'");
        }
    }

    MachineAst parse_machine(std::size_t nesting) {
        MachineAst m;
        m.start = peek().start;
        expect_word("machine");
        if (nesting > kMaxNestingDepth) fail("machine nesting deeper than " + std::to_string(kMaxNestingDepth));
        const auto& name = expect(Tok::Ident, "after 'machine'");
        m.name = name.text;
        m.start = name.start;
        m.end = name.end;
        expect(Tok::LBrace, "to open the machine body");
        while (!at(Tok::RBrace) && !at(Tok::End) && !sink_.full()) {
            const int depth0 = depth_;
            const std::size_t before = pos_;
            try {
                if (at(Tok::Semi)) {
                    advance();
                } else if (at_word("stage")) {
                    advance();
                    const auto& k = expect(Tok::Ident, "after 'stage'");
                    const auto kind = parse_action_kind(k.text);
                    if (!kind) {
                        sink_.add(make_diagnostic(
                            "S1", "unknown stage kind '" + k.text + "' (expected create, process, release, transfer or receive)",
                            span(k.start, k.end)));
                        throw SyntaxAbort{};
                    }
                    const std::size_t kstart = k.start, kend = k.end;
                    expect(Tok::Semi, "after stage declaration");
                    m.stages.push_back(StageAst{*kind, kstart, kend});
                } else if (at_word("machine")) {
                    m.children.push_back(parse_machine(nesting + 1));
                } else {
                    fail("expected 'stage' or 'machine' inside machine body, found " +
                         std::string(at(Tok::Ident) ? "'" + peek().text + "'" : describe(peek().kind)));
                }
            } catch (const SyntaxAbort&) {
                synchronize(depth0);
                if (pos_ == before) advance();
            }
        }
        expect(Tok::RBrace, "to close machine '" + m.name + "'");
        return m;
    }

    PathRef parse_path(std::string_view context) {
        PathRef p;
        const auto& first = expect(Tok::Ident, context);
        p.start = first.start;
        p.end = first.end;
        p.segments.push_back(first.text);
        while (at(Tok::Dot)) {
            advance();
            const auto& seg = expect(Tok::Ident, "after '.' in path");
            p.segments.push_back(seg.text);
            p.end = seg.end;
        }
        return p;
    }

    EdgeAst parse_edge() {
        EdgeAst e;
        e.start = peek().start;
        e.trigger = advance().text == "trigger";
        if (!e.trigger && (at(Tok::Ident) || at(Tok::String))) e.thing = advance().text;
        expect(Tok::Colon, e.trigger ? "after 'trigger'" : "before flow endpoints");
        e.from = parse_path("as edge source");
        expect(Tok::Arrow, "between edge endpoints");
        e.to = parse_path("as edge target");
        e.end = expect(Tok::Semi, "after edge declaration").end;
        return e;
    }

    StorageAst parse_storage() {
        StorageAst s;
        s.start = peek().start;
        advance();
        if (!at(Tok::Ident) && !at(Tok::String)) fail("expected storage thing label");
        s.thing = advance().text;
        expect_word("in");
        s.machine = parse_path("as storage owner");
        s.end = expect(Tok::Semi, "after storage declaration").end;
        return s;
    }

    RegionAst parse_region() {
        RegionAst r;
        r.start = peek().start;
        advance();
        r.name = expect_ident("as region name");
        expect(Tok::Equals, "after region name");
        expect(Tok::LBrace, "to open region stage list");
        if (!at(Tok::RBrace)) {
            r.stages.push_back(parse_path("in region stage list"));
            while (at(Tok::Comma)) {
                advance();
                r.stages.push_back(parse_path("in region stage list"));
            }
        }
        expect(Tok::RBrace, "to close region stage list");
        r.end = expect(Tok::Semi, "after region declaration").end;
        return r;
    }

    EventAst parse_event() {
        EventAst e;
        e.start = peek().start;
        advance();
        e.name = expect_ident("as event name");
        if (at(Tok::String)) e.label = advance().text;
        expect_word("on");
        const auto& region = expect(Tok::Ident, "as event region");
        e.region = region.text;
        e.region_start = region.start;
        e.region_end = region.end;
        if (at_word("duration")) {
            advance();
            const auto& n = expect(Tok::Number, "after 'duration'");
            e.duration = n.number;
        }
        e.end = expect(Tok::Semi, "after event declaration").end;
        return e;
    }

    NameRef event_ref(std::string_view context) {
        const auto& t = expect(Tok::Ident, context);
        return NameRef{t.text, t.start, t.end};
    }

    void parse_behavior(DocumentAst& doc) {
        advance();
        expect(Tok::LBrace, "to open behavior block");
        while (!at(Tok::RBrace) && !at(Tok::End) && !sink_.full()) {
            const int depth0 = depth_;
            const std::size_t before = pos_;
            try {
                if (at(Tok::Semi))
                    advance();
                else
                    parse_behavior_statement(doc);
            } catch (const SyntaxAbort&) {
                synchronize(depth0);
                if (pos_ == before) advance();
            }
        }
        expect(Tok::RBrace, "to close behavior block");
    }

    void parse_group(BehaviorAst& ast, std::vector<std::string>& members, Tok separator) {
        advance();  // choice | concurrent
        expect(Tok::LBrace, "to open group");
        auto first = event_ref("as group member");
        members.push_back(first.name);
        ast.refs.push_back(first);
        while (at(separator)) {
            advance();
            auto next = event_ref("as group member");
            members.push_back(next.name);
            ast.refs.push_back(next);
        }
        expect(Tok::RBrace, "to close group");
    }

    bool at_group() const { return (at_word("choice") || at_word("concurrent")) && peek(1).kind == Tok::LBrace; }

    void parse_group_with_source(BehaviorAst& ast, std::optional<std::string> from) {
        if (at_word("choice")) {
            ChoiceDecl c{std::move(from), {}};
            parse_group(ast, c.alternatives, Tok::Pipe);
            ast.stmt.decl = std::move(c);
        } else {
            ConcurrentDecl c{std::move(from), {}};
            parse_group(ast, c.branches, Tok::Comma);
            ast.stmt.decl = std::move(c);
        }
    }

    void parse_behavior_statement(DocumentAst& doc) {
        const std::size_t start = peek().start;
        std::vector<BehaviorAst> produced;
        if (at_group()) {
            BehaviorAst ast;
            parse_group_with_source(ast, std::nullopt);
            produced.push_back(std::move(ast));
        } else if (at_word("repeat") && peek(1).kind == Tok::Ident) {
            advance();
            BehaviorAst ast;
            auto from = event_ref("after 'repeat'");
            ast.refs.push_back(from);
            RepeatDecl r{from.name, from.name, std::nullopt};
            if (at(Tok::Arrow)) {
                advance();
                auto to = event_ref("as repeat target");
                ast.refs.push_back(to);
                r.to = to.name;
            }
            if (at_word("bound")) {
                advance();
                const auto& n = expect(Tok::Number, "after 'bound'");
                r.bound = n.number;
            }
            ast.stmt.decl = std::move(r);
            produced.push_back(std::move(ast));
        } else {
            auto from = event_ref("to start a behavior statement");
            expect(Tok::Arrow, "after event in behavior statement");
            if (at_group()) {
                BehaviorAst ast;
                ast.refs.push_back(from);
                parse_group_with_source(ast, from.name);
                produced.push_back(std::move(ast));
            } else {
                auto prev = from;
                while (true) {
                    auto to = event_ref("as sequence target");
                    BehaviorAst ast;
                    ast.refs = {prev, to};
                    ast.stmt.decl = SequenceDecl{prev.name, to.name};
                    produced.push_back(std::move(ast));
                    prev = to;
                    if (!at(Tok::Arrow)) break;
                    advance();
                }
            }
        }
        const auto end = expect(Tok::Semi, "after behavior statement").end;
        for (auto& ast : produced) {
            ast.stmt.span = span(start, end);
            doc.behavior.push_back(std::move(ast));
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int depth_ = 0;
    const LineIndex& lines_;
    std::string_view file_;
    Sink& sink_;
};

// ---- resolution ---------------------------------------------------------

class Resolver {
public:
    Resolver(const LineIndex& lines, std::string_view file, Sink& sink) : lines_(lines), file_(file), sink_(sink) {}

    ModelDocument resolve(const DocumentAst& ast) {
        auto doc = ModelDocument::from_model(StaticModel{});
        for (const auto& m : ast.machines) declare_machine(doc, m, doc.model.root());
        for (const auto& e : ast.edges) resolve_edge(doc, e);
        for (const auto& s : ast.storages) {
            auto owner = machine_ref(doc.model, s.machine);
            if (!owner) continue;
            auto id = doc.model.add_storage(*owner, s.thing);
            doc.storage_spans.emplace(id, span(s.start, s.end));
        }
        for (const auto& r : ast.regions) resolve_region(doc, r);
        for (const auto& e : ast.events) resolve_event(doc, e);
        for (const auto& b : ast.behavior) resolve_behavior(doc, b);
        doc.model.freeze();
        return doc;
    }

private:
    SourceSpan span(std::size_t a, std::size_t b) const { return lines_.span(file_, a, b); }

    void declare_machine(ModelDocument& doc, const MachineAst& m, MachineId parent) {
        if (doc.model.child_named(parent, m.name)) {
            sink_.add(make_diagnostic("N1", "duplicate machine '" + m.name + "'", span(m.start, m.end)));
            return;
        }
        const auto id = doc.model.add_machine(m.name, parent);
        doc.machine_spans.emplace(id, span(m.start, m.end));
        for (const auto& s : m.stages) {
            if (doc.model.stage_of(id, s.kind)) {
                sink_.add(make_diagnostic("D1",
                                          "machine '" + doc.model.path(id) + "' already has a " +
                                              std::string(to_string(s.kind)) + " stage",
                                          span(s.start, s.end)));
                continue;
            }
            doc.stage_spans.emplace(doc.model.add_stage(id, s.kind), span(s.start, s.end));
        }
        for (const auto& c : m.children) declare_machine(doc, c, id);
    }

    std::optional<MachineId> machine_ref(const StaticModel& model, const PathRef& p) {
        auto m = model.find_machine(p.dotted());
        if (!m) sink_.add(make_diagnostic("N2", "unknown machine '" + p.dotted() + "'", span(p.start, p.end)));
        return m;
    }

    std::optional<StageId> stage_ref(const StaticModel& model, const PathRef& p) {
        const auto& last = p.segments.back();
        const auto kind = parse_action_kind(last);
        if (!kind || p.segments.size() < 2) {
            sink_.add(make_diagnostic("N2", "'" + p.dotted() + "' does not name a stage (expected <machine>.<kind>)",
                                      span(p.start, p.end)));
            return std::nullopt;
        }
        PathRef owner = p;
        owner.segments.pop_back();
        auto m = model.find_machine(owner.dotted());
        if (!m) {
            sink_.add(make_diagnostic("N2", "unknown machine '" + owner.dotted() + "'", span(p.start, p.end)));
            return std::nullopt;
        }
        auto s = model.stage_of(*m, *kind);
        if (!s)
            sink_.add(make_diagnostic("N2", "machine '" + owner.dotted() + "' has no " + last + " stage",
                                      span(p.start, p.end)));
        return s;
    }

    void resolve_edge(ModelDocument& doc, const EdgeAst& e) {
        auto from = stage_ref(doc.model, e.from);
        auto to = stage_ref(doc.model, e.to);
        if (!from || !to) return;
        if (e.trigger)
            doc.trigger_spans.emplace(doc.model.add_trigger(*from, *to), span(e.start, e.end));
        else
            doc.flow_spans.emplace(doc.model.add_flow(*from, *to, e.thing), span(e.start, e.end));
    }

    void resolve_region(ModelDocument& doc, const RegionAst& r) {
        if (doc.find_region(r.name)) {
            sink_.add(make_diagnostic("N1", "duplicate region '" + r.name + "'", span(r.start, r.end)));
            return;
        }
        RegionDecl decl{r.name, {}, span(r.start, r.end)};
        for (const auto& p : r.stages)
            if (auto s = stage_ref(doc.model, p)) decl.stages.push_back(*s);
        doc.regions.push_back(std::move(decl));
    }

    void resolve_event(ModelDocument& doc, const EventAst& e) {
        if (doc.find_event(e.name)) {
            sink_.add(make_diagnostic("N1", "duplicate event '" + e.name + "'", span(e.start, e.end)));
            return;
        }
        if (!doc.find_region(e.region)) {
            sink_.add(make_diagnostic("N2", "unknown region '" + e.region + "'", span(e.region_start, e.region_end)));
            return;
        }
        doc.events.push_back(EventDecl{e.name, e.label, e.region, e.duration, span(e.start, e.end)});
    }

    void resolve_behavior(ModelDocument& doc, const BehaviorAst& b) {
        bool ok = true;
        for (const auto& ref : b.refs)
            if (!doc.find_event(ref.name)) {
                sink_.add(make_diagnostic("N2", "unknown event '" + ref.name + "'", span(ref.start, ref.end)));
                ok = false;
            }
        if (ok) doc.behavior.push_back(b.stmt);
    }

    const LineIndex& lines_;
    std::string_view file_;
    Sink& sink_;
};

}  // namespace

bool is_identifier(std::string_view text) {
    if (text.empty() || !ident_start(text.front())) return false;
    for (std::size_t i = 1; i < text.size(); ++i) {
        const char c = text[i];
        if (ident_char(c)) continue;
        if (c == '-' && i + 1 < text.size() && ident_char(text[i + 1])) continue;
        return false;
    }
    return true;
}

ParseResult parse(std::string_view text, std::string_view file) {
    const LineIndex lines(text);
    Sink sink;
    auto tokens = lex(text, lines, file, sink);
    Parser parser(std::move(tokens), lines, file, sink);
    auto ast = parser.parse_document();

    ParseResult result;
    if (!sink.full()) {
        Resolver resolver(lines, file, sink);
        auto doc = resolver.resolve(ast);
        if (!has_errors(sink.items())) result.document = std::move(doc);
    }
    result.diagnostics = std::move(sink.items());
    return result;
}

}  // namespace thimac
