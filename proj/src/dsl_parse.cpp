#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "sketchkit/dsl.hpp"

namespace sketchkit {

namespace {

enum class Tok { name, punct, end };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

struct SyntaxFailure {
    ParseError error;
};

bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    static const char* puncts[] = {"|->", "|-", "->", "{", "}", "(", ")", ":", ";", ",", ".", "="};
    while (i < src.size()) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (name_char(c)) {
            std::size_t j = i;
            while (j < src.size() && name_char(src[j])) ++j;
            out.push_back({Tok::name, std::string(src.substr(i, j - i)), line, col});
            advance(j - i);
            continue;
        }
        bool matched = false;
        for (const char* p : puncts) {
            std::string_view pv(p);
            if (src.substr(i, pv.size()) == pv) {
                out.push_back({Tok::punct, std::string(pv), line, col});
                advance(pv.size());
                matched = true;
                break;
            }
        }
        if (!matched) {
            std::string shown = (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f)
                                    ? "byte " + std::to_string(static_cast<unsigned char>(c))
                                    : std::string("'") + c + "'";
            throw SyntaxFailure{{line, col, "unexpected character " + shown, {}}};
        }
    }
    out.push_back({Tok::end, "", line, col});
    return out;
}

struct RawPath {
    bool identity = false;
    std::vector<std::string> names;  // as written, left to right
    std::size_t line = 0, column = 0;
};

struct RawLeg {
    std::string node, arrow;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    void document(ParseOutcome& out) {
        while (peek().kind != Tok::end) {
            const Token& t = peek();
            if (is_word("category")) {
                category(out);
            } else if (is_word("sketch")) {
                sketch(out);
            } else if (is_word("sequent")) {
                sequent(out);
            } else if (is_word("structure")) {
                structure(out);
            } else {
                fail(t, {"category", "sketch", "sequent", "structure"});
            }
        }
    }

private:
    // ---- token helpers ----
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Token& next() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    bool is_word(std::string_view w, std::size_t k = 0) const {
        return peek(k).kind == Tok::name && peek(k).text == w;
    }
    bool is_punct(std::string_view p, std::size_t k = 0) const {
        return peek(k).kind == Tok::punct && peek(k).text == p;
    }
    [[noreturn]] void fail(const Token& t, std::vector<std::string> expected) {
        std::string msg = t.kind == Tok::end ? "unexpected end of input" : "unexpected '" + t.text + "'";
        throw SyntaxFailure{{t.line, t.column, std::move(msg), std::move(expected)}};
    }
    void expect_punct(std::string_view p) {
        if (!is_punct(p)) fail(peek(), {std::string(p)});
        next();
    }
    void expect_word(std::string_view w) {
        if (!is_word(w)) fail(peek(), {std::string(w)});
        next();
    }
    const Token& expect_name() {
        if (peek().kind != Tok::name) fail(peek(), {"NAME"});
        return next();
    }
    bool accept_punct(std::string_view p) {
        if (!is_punct(p)) return false;
        next();
        return true;
    }
    // names := (NAME ("," NAME)*)?
    std::vector<std::string> names() {
        std::vector<std::string> out;
        if (peek().kind != Tok::name) return out;
        out.push_back(next().text);
        while (accept_punct(",")) out.push_back(expect_name().text);
        return out;
    }

    void issue(ParseOutcome& out, const Token& at, std::string msg) {
        out.resolution_errors.push_back({at.line, at.column, std::move(msg)});
    }

    // ---- category ----
    void category(ParseOutcome& out) {
        const Token& kw = next();
        const Token& name = expect_name();
        expect_punct("{");
        expect_word("objects");
        expect_punct(":");
        const Token& objs_at = peek();
        auto objs = names();
        expect_punct(";");

        struct RawArrow {
            Token at;
            std::string name, source, target;
        };
        struct RawCompose {
            Token at;
            std::string g, f, h;
        };
        std::vector<RawArrow> arrows;
        std::vector<RawCompose> composes;
        while (!is_punct("}")) {
            if (is_word("arrow")) {
                const Token at = next();
                std::string n = expect_name().text;
                expect_punct(":");
                std::string s = expect_name().text;
                expect_punct("->");
                std::string t = expect_name().text;
                expect_punct(";");
                arrows.push_back({at, n, s, t});
            } else if (is_word("compose")) {
                const Token at = next();
                std::string g = expect_name().text;
                expect_punct(".");
                std::string f = expect_name().text;
                expect_punct("=");
                std::string h = expect_name().text;
                expect_punct(";");
                composes.push_back({at, g, f, h});
            } else {
                fail(peek(), {"arrow", "compose", "}"});
            }
        }
        next();

        if (out.document.find_category(name.text)) {
            issue(out, name, "duplicate category '" + name.text + "'");
            return;
        }
        CategoryBuilder b(name.text);
        bool ok = true;
        for (const auto& o : objs) {
            try {
                b.add_object(o);
            } catch (const ResolutionError& e) {
                issue(out, objs_at, e.what());
                ok = false;
            }
        }
        std::map<std::string, std::pair<std::string, std::string>> ends;
        for (const auto& o : objs) ends["id_" + o] = {o, o};
        for (const auto& a : arrows) {
            try {
                b.add_arrow(a.name, a.source, a.target);
                ends[a.name] = {a.source, a.target};
            } catch (const ResolutionError& e) {
                issue(out, a.at, e.what());
                ok = false;
            }
        }
        for (const auto& c : composes) {
            auto gi = ends.find(c.g), fi = ends.find(c.f);
            if (gi != ends.end() && fi != ends.end() && gi->second.first != fi->second.second) {
                issue(out, c.at, "'" + c.g + "." + c.f + "' is not a composable pair");
                ok = false;
                continue;
            }
            try {
                b.set_composite(c.g, c.f, c.h);
            } catch (const ResolutionError& e) {
                issue(out, c.at, e.what());
                ok = false;
            }
        }
        (void)kw;
        if (ok) out.document.add(b.build());
    }

    // ---- sketch ----
    RawPath path() {
        RawPath p;
        p.line = peek().line;
        p.column = peek().column;
        if (is_word("id") && is_punct("(", 1)) {
            next();
            next();
            p.identity = true;
            p.names.push_back(expect_name().text);
            expect_punct(")");
            return p;
        }
        if (peek().kind != Tok::name) fail(peek(), {"NAME", "id"});
        p.names.push_back(next().text);
        while (accept_punct(".")) p.names.push_back(expect_name().text);
        return p;
    }

    std::optional<Path> resolve_path(ParseOutcome& out, const Graph& g, const RawPath& rp) {
        auto bad = [&](const std::string& m) {
            out.resolution_errors.push_back({rp.line, rp.column, m});
            return std::nullopt;
        };
        if (rp.identity) {
            if (!g.has_vertex(rp.names[0])) return bad("unknown object '" + rp.names[0] + "'");
            return Path{rp.names[0], {}};
        }
        Path p;
        for (auto it = rp.names.rbegin(); it != rp.names.rend(); ++it) {
            if (!g.has_edge(*it)) return bad("unknown arrow '" + *it + "'");
            p.edges.push_back(*it);
        }
        p.start = g.find_edge(p.edges.front())->source;
        return p;
    }

    void sketch(ParseOutcome& out) {
        next();
        const Token& name = expect_name();
        Sketch s;
        bool ok = true;
        if (is_word("extends")) {
            next();
            const Token& base = expect_name();
            if (const auto* sk = out.document.find_sketch(base.text)) {
                s = sk->sketch;
            } else if (const auto* cat = out.document.find_category(base.text)) {
                s = underlying_sketch(*cat);
            } else {
                issue(out, base, "unknown sketch or category '" + base.text + "'");
                ok = false;
            }
        }
        expect_punct("{");
        auto known = [&](const std::string& n) { return s.graph.has_vertex(n) || s.graph.has_edge(n); };
        while (!is_punct("}")) {
            if (is_word("objects")) {
                next();
                expect_punct(":");
                const Token at = peek();
                for (auto& v : names()) {
                    if (known(v)) {
                        issue(out, at, "duplicate name '" + v + "'");
                        ok = false;
                    } else {
                        s.graph.vertices.push_back(v);
                    }
                }
                expect_punct(";");
            } else if (is_word("arrow")) {
                const Token at = next();
                std::string n = expect_name().text;
                expect_punct(":");
                std::string src = expect_name().text;
                expect_punct("->");
                std::string tgt = expect_name().text;
                expect_punct(";");
                if (known(n)) {
                    issue(out, at, "duplicate name '" + n + "'");
                    ok = false;
                } else if (!s.graph.has_vertex(src) || !s.graph.has_vertex(tgt)) {
                    issue(out, at, "arrow '" + n + "' has an undeclared endpoint");
                    ok = false;
                } else {
                    s.graph.edges.push_back({n, src, tgt});
                }
            } else if (is_word("commute")) {
                next();
                RawPath l = path();
                expect_punct("=");
                RawPath r = path();
                expect_punct(";");
                auto lp = resolve_path(out, s.graph, l);
                auto rp = resolve_path(out, s.graph, r);
                if (lp && rp) {
                    s.commutativities.push_back({*lp, *rp});
                } else {
                    ok = false;
                }
            } else if (is_word("limit") || is_word("colimit")) {
                auto c = convergence(out, s.graph);
                expect_punct(";");
                if (c) {
                    s.convergences.push_back(std::move(*c));
                } else {
                    ok = false;
                }
            } else {
                fail(peek(), {"objects", "arrow", "commute", "limit", "colimit", "}"});
            }
        }
        next();
        if (out.document.find_sketch(name.text)) {
            issue(out, name, "duplicate sketch '" + name.text + "'");
            return;
        }
        if (ok) out.document.add(NamedSketch{name.text, std::move(s)});
    }

    std::optional<ConvergenceCondition> convergence(ParseOutcome& out, const Graph& g) {
        const Token kw = next();
        const ConeKind kind = kw.text == "limit" ? ConeKind::limit : ConeKind::colimit;
        const Token& apex = expect_name();
        expect_word("with");
        expect_punct("(");
        std::vector<RawLeg> legs;
        if (peek().kind == Tok::name) {
            do {
                std::string node = expect_name().text;
                expect_punct(":");
                std::string arrow = expect_name().text;
                legs.push_back({node, arrow});
            } while (accept_punct(","));
        } else if (!is_punct(")")) {
            fail(peek(), {"NAME", ")"});
        }
        expect_punct(")");
        expect_word("over");
        expect_punct("{");
        std::optional<std::vector<std::string>> nodes;
        std::vector<ShapeEdgeSpec> edges;
        while (!is_punct("}")) {
            if (is_word("nodes")) {
                next();
                expect_punct(":");
                auto ns = names();
                if (!nodes) nodes.emplace();
                nodes->insert(nodes->end(), ns.begin(), ns.end());
                expect_punct(";");
            } else if (is_word("edge")) {
                next();
                ShapeEdgeSpec e;
                e.name = expect_name().text;
                expect_punct(":");
                e.source = expect_name().text;
                expect_punct("->");
                e.target = expect_name().text;
                expect_punct("|->");
                e.image = expect_name().text;
                expect_punct(";");
                edges.push_back(std::move(e));
            } else {
                fail(peek(), {"nodes", "edge", "}"});
            }
        }
        next();

        auto bad = [&](const std::string& m) {
            issue(out, kw, m);
            return std::nullopt;
        };
        if (!g.has_vertex(apex.text)) return bad("unknown object '" + apex.text + "'");
        std::map<std::string, std::string> leg_of;
        for (const auto& l : legs) {
            if (!leg_of.emplace(l.node, l.arrow).second) return bad("node '" + l.node + "' has two legs");
        }
        std::vector<std::string> order;
        if (nodes) {
            std::set<std::string> seen;
            for (const auto& n : *nodes) {
                if (!seen.insert(n).second) return bad("duplicate node '" + n + "'");
                if (!leg_of.count(n)) return bad("node '" + n + "' has no leg");
            }
            if (seen.size() != leg_of.size()) return bad("every leg must name a declared node");
            order = *nodes;
        } else {
            for (const auto& l : legs) order.push_back(l.node);
        }
        std::vector<std::pair<std::string, std::string>> ordered;
        for (const auto& n : order) ordered.emplace_back(n, leg_of[n]);
        for (const auto& e : edges) {
            if (!leg_of.count(e.source) || !leg_of.count(e.target)) {
                return bad("shape edge '" + e.name + "' has an undeclared endpoint");
            }
            if (!g.has_edge(e.image)) return bad("unknown arrow '" + e.image + "'");
        }
        try {
            return make_convergence(g, kind, apex.text, ordered, edges);
        } catch (const ResolutionError& e) {
            return bad(e.what());
        }
    }

    // ---- sequent ----
    void sequent(ParseOutcome& out) {
        next();
        const Token& name = expect_name();
        expect_punct("=");
        const Token& x = expect_name();
        expect_punct("|-");
        const Token& a = expect_name();
        expect_punct("|-");
        const Token& b = expect_name();
        expect_punct(";");
        bool ok = true;
        for (const Token* t : {&x, &a, &b}) {
            if (!out.document.find_sketch(t->text)) {
                issue(out, *t, "unknown sketch '" + t->text + "'");
                ok = false;
            }
        }
        if (out.document.find_sequent(name.text)) {
            issue(out, name, "duplicate sequent '" + name.text + "'");
            return;
        }
        if (ok) out.document.add(SequentDecl{name.text, x.text, a.text, b.text});
    }

    // ---- structure ----
    void structure(ParseOutcome& out) {
        next();
        const Token& name = expect_name();
        expect_punct(":");
        const Token& sk = expect_name();
        expect_word("in");
        const Token& cat = expect_name();
        expect_punct("{");
        std::vector<std::pair<std::string, std::string>> bindings;
        while (!is_punct("}")) {
            if (!is_word("map")) fail(peek(), {"map", "}"});
            next();
            std::string from = expect_name().text;
            expect_punct("|->");
            std::string to = expect_name().text;
            expect_punct(";");
            bindings.emplace_back(std::move(from), std::move(to));
        }
        next();

        const auto* s = out.document.find_sketch(sk.text);
        const auto* c = out.document.find_category(cat.text);
        if (!s) issue(out, sk, "unknown sketch '" + sk.text + "'");
        if (!c) issue(out, cat, "unknown category '" + cat.text + "'");
        if (!s || !c) return;
        if (out.document.find_structure(name.text)) {
            issue(out, name, "duplicate structure '" + name.text + "'");
            return;
        }
        try {
            Structure st = make_structure(s->sketch, *c, bindings, sk.text);
            out.document.add(StructureDecl{name.text, sk.text, cat.text, bindings_of(s->sketch, *c, st)});
        } catch (const ResolutionError& e) {
            issue(out, name, e.what());
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

ParseOutcome parse_document(std::string_view text) {
    ParseOutcome out;
    try {
        Parser p(lex(text));
        p.document(out);
    } catch (const SyntaxFailure& f) {
        out.syntax_error = f.error;
    }
    return out;
}

}  // namespace sketchkit
