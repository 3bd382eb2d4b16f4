// SPDX-License-Identifier: Apache-2.0
#pragma once

/*! \file
 *  \brief Recursive-descent parser for `.cat` documents.
 *
 *  Section keywords (`nodes`, `arrows`, `equations`, `table`, ...) are contextual: a keyword directly followed by
 *  `:` is read as a name, so schemas may use them as vertex or arrow names.
 */

#include <catmig/dsl/document.hpp>
#include <catmig/dsl/lexer.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace catmig::dsl {

namespace detail {

class Parser
{
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const Document *context_;
    Document doc_;

    public:
    Parser(std::string_view text, const Document *context)
        : toks_(tokenize(text))
        , context_(context)
    { }

    Document run()
    {
        while (peek().kind != Tok::End) {
            const Token &t = peek();
            if (is_word("schema")) declaration(t, [&] { return Declaration(schema()); });
            else if (is_word("instance")) declaration(t, [&] { return Declaration(instance()); });
            else if (is_word("translation")) declaration(t, [&] { return Declaration(translation()); });
            else if (is_word("morphism")) declaration(t, [&] { return Declaration(morphism()); });
            else if (is_word("typedinstance")) declaration(t, [&] { return Declaration(typed()); });
            else fail(t, "expected a declaration", {"schema", "instance", "translation", "morphism", "typedinstance"});
        }
        return std::move(doc_);
    }

    private:
    const Token & peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    const Token & next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] static void fail(const Token &t, const std::string &msg, std::vector<std::string> expected = {})
    {
        throw ParseError(t.line, t.column, msg, std::move(expected));
    }

    bool is_word(std::string_view w, std::size_t ahead = 0) const
    {
        return peek(ahead).kind == Tok::Ident and peek(ahead).text == w;
    }

    // A section keyword only when it is not the start of a `name :` item.
    bool is_keyword(std::string_view w) const { return is_word(w) and peek(1).kind != Tok::Colon; }

    const Token & expect(Tok k)
    {
        if (peek().kind != k) fail(peek(), std::string("unexpected ") + found(peek()), {describe(k)});
        return next();
    }

    void expect_word(std::string_view w)
    {
        if (not is_word(w)) fail(peek(), std::string("unexpected ") + found(peek()), {"'" + std::string(w) + "'"});
        next();
    }

    bool accept(Tok k)
    {
        if (peek().kind != k) return false;
        next();
        return true;
    }

    static std::string found(const Token &t)
    {
        if (t.kind == Tok::Ident) return "'" + t.text + "'";
        if (t.kind == Tok::String) return "string \"" + t.text + "\"";
        return describe(t.kind);
    }

    const Token & name()
    {
        if (peek().kind != Tok::Ident and peek().kind != Tok::String)
            fail(peek(), std::string("unexpected ") + found(peek()), {"identifier", "string"});
        return next();
    }

    template<typename Make>
    void declaration(const Token &at, Make make)
    {
        Token start = at;
        Declaration d = make();
        if (doc_.contains(d) or (context_ and context_->contains(d)))
            fail(start, std::string("duplicate ") + declaration_kind(d) + " '" + declaration_name(d) + "'");
        doc_.add(std::move(d));
    }

    // --- lookups across this document and the context ---

    template<typename Get>
    auto lookup(Get get) const -> decltype(get(doc_))
    {
        if (auto *x = get(doc_)) return x;
        if (context_) return get(*context_);
        return nullptr;
    }

    SchemaPtr schema_named(const Token &t) const
    {
        auto *d = lookup([&](const Document &doc) { return doc.schema(t.text); });
        if (not d) fail(t, "unknown schema '" + t.text + "'");
        return d->schema;
    }

    const InstanceDecl & instance_named(const Token &t) const
    {
        auto *d = lookup([&](const Document &doc) { return doc.instance(t.text); });
        if (not d) fail(t, "unknown instance '" + t.text + "'");
        return *d;
    }

    static VertexId vertex_in(const Graph &g, const Token &t, const std::string &schema)
    {
        auto v = g.find_vertex(t.text);
        if (not v) fail(t, "unknown vertex '" + t.text + "' in schema '" + schema + "'");
        return *v;
    }

    // path := 'id' | name ('.' name)*
    Path path(const Graph &g, VertexId source, const std::string &schema)
    {
        const Token &first = name();
        Path p(source);
        if (first.kind == Tok::Ident and first.text == "id" and peek().kind != Tok::Dot) return p;
        std::vector<const Token *> parts{&first};
        while (accept(Tok::Dot)) parts.push_back(&name());
        VertexId at = source;
        for (const Token *t : parts) {
            auto a = g.find_arrow(t->text);
            if (not a) fail(*t, "unknown arrow '" + t->text + "' in schema '" + schema + "'");
            if (g.source(*a) != at)
                fail(*t, "arrow '" + t->text + "' starts at '" + g.name(g.source(*a)) + "', but the path is at '" +
                             g.name(at) + "'");
            p.arrows.push_back(*a);
            at = g.target(*a);
        }
        return p;
    }

    // --- schema ---

    SchemaDecl schema()
    {
        expect_word("schema");
        const Token &n = name();
        expect(Tok::LBrace);
        Graph g;
        std::vector<PathEquation> eqs;
        while (not accept(Tok::RBrace)) {
            if (is_keyword("nodes")) {
                next();
                do {
                    const Token &v = name();
                    if (g.find_vertex(v.text)) fail(v, "duplicate vertex '" + v.text + "'");
                    g.add_vertex(v.text);
                } while (accept(Tok::Comma));
                expect(Tok::Semi);
            } else if (is_keyword("arrows")) {
                next();
                while (peek().kind == Tok::Ident or peek().kind == Tok::String) {
                    if (is_keyword("nodes") or is_keyword("arrows") or is_keyword("equations")) break;
                    const Token &a = name();
                    expect(Tok::Colon);
                    const Token &s = name();
                    expect(Tok::Arrow);
                    const Token &t = name();
                    expect(Tok::Semi);
                    vertex_in(g, s, n.text);
                    vertex_in(g, t, n.text);
                    if (a.text == "id") fail(a, "'id' is reserved for trivial paths");
                    if (g.find_arrow(a.text)) fail(a, "duplicate arrow '" + a.text + "' (arrow names must be unique)");
                    try {
                        g.add_arrow(a.text, s.text, t.text);
                    } catch (const StructureError &e) {
                        fail(a, e.what());
                    }
                }
            } else if (is_keyword("equations")) {
                next();
                while (peek().kind == Tok::Ident or peek().kind == Tok::String) {
                    if (is_keyword("nodes") or is_keyword("arrows") or is_keyword("equations")) break;
                    Token v = name();
                    VertexId src = vertex_in(g, v, n.text);
                    expect(Tok::Colon);
                    Path l = path(g, src, n.text);
                    expect(Tok::Equals);
                    Token rhs_at = peek();
                    Path r = path(g, src, n.text);
                    expect(Tok::Semi);
                    if (target(g, l) != target(g, r))
                        fail(rhs_at, "equation sides end at different vertices ('" + g.name(target(g, l)) + "' vs '" +
                                         g.name(target(g, r)) + "')");
                    eqs.push_back({std::move(l), std::move(r)});
                }
            } else {
                fail(peek(), std::string("unexpected ") + found(peek()), {"nodes", "arrows", "equations", "'}'"});
            }
        }
        auto s = std::make_shared<Schema>(n.text, std::move(g));
        for (auto &e : eqs) s->add_equation(std::move(e));
        return SchemaDecl{std::move(s)};
    }

    // --- instance ---

    InstanceDecl instance()
    {
        expect_word("instance");
        Token n = name();
        expect_word("on");
        SchemaPtr s = schema_named(name());
        const Graph &g = s->graph();
        expect(Tok::LBrace);
        InstanceBuilder b(s);
        struct Cell { Token arrow; Token value; VertexId v; RowIndex row; std::string row_id; };
        std::vector<Cell> cells;
        std::set<std::size_t> seen_tables;
        while (not accept(Tok::RBrace)) {
            if (not is_word("table")) fail(peek(), std::string("unexpected ") + found(peek()), {"table", "'}'"});
            next();
            const Token &tn = name();
            VertexId v = vertex_in(g, tn, s->name());
            if (not seen_tables.insert(index(v)).second) fail(tn, "table '" + tn.text + "' appears twice");
            expect(Tok::LBrace);
            while (not accept(Tok::RBrace)) {
                const Token &row = name();
                if (b.partial().find_row(v, row.text)) fail(row, "duplicate row '" + row.text + "' in table '" + tn.text + "'");
                RowIndex r = b.add_row(v, row.text);
                if (not accept(Tok::Arrow)) continue;
                do {
                    expect(Tok::LParen);
                    const Token &a = name();
                    expect(Tok::Equals);
                    const Token &val = name();
                    expect(Tok::RParen);
                    cells.push_back({a, val, v, r, row.text});
                } while (peek().kind == Tok::LParen);
            }
        }
        for (const auto &c : cells) {
            auto a = g.find_arrow(c.arrow.text);
            if (not a) fail(c.arrow, "unknown arrow '" + c.arrow.text + "' in schema '" + s->name() + "'");
            if (g.source(*a) != c.v)
                fail(c.arrow, "arrow '" + c.arrow.text + "' is not a column of table '" + g.name(c.v) + "'");
            if (b.is_set(*a, c.row)) fail(c.arrow, "column '" + c.arrow.text + "' of row '" + c.row_id + "' is set twice");
            auto t = b.partial().find_row(g.target(*a), c.value.text);
            if (not t)
                fail(c.value, "column '" + c.arrow.text + "' of row '" + c.row_id + "' refers to undeclared row '" +
                                  c.value.text + "' of table '" + g.name(g.target(*a)) + "'");
            b.set(*a, c.row, *t);
        }
        try {
            return InstanceDecl{n.text, std::make_shared<const Instance>(std::move(b).build())};
        } catch (const StructureError &e) {
            fail(n, e.what());
        }
    }

    // --- translation ---

    TranslationDecl translation()
    {
        expect_word("translation");
        Token n = name();
        expect(Tok::Colon);
        SchemaPtr src = schema_named(name());
        expect(Tok::Arrow);
        SchemaPtr tgt = schema_named(name());
        const Graph &c = src->graph();
        const Graph &d = tgt->graph();
        expect(Tok::LBrace);
        std::vector<std::optional<VertexId>> vmap(c.vertex_count());
        std::vector<std::optional<Path>> amap(c.arrow_count());
        while (not accept(Tok::RBrace)) {
            if (is_keyword("nodes")) {
                next();
                do {
                    const Token &from = name();
                    expect(Tok::Arrow);
                    const Token &to = name();
                    VertexId v = vertex_in(c, from, src->name());
                    if (vmap[index(v)]) fail(from, "vertex '" + from.text + "' is mapped twice");
                    vmap[index(v)] = vertex_in(d, to, tgt->name());
                } while (accept(Tok::Comma));
                expect(Tok::Semi);
            } else if (is_keyword("arrows")) {
                next();
                while ((peek().kind == Tok::Ident or peek().kind == Tok::String) and not is_keyword("nodes") and
                       not is_keyword("arrows")) {
                    const Token &from = name();
                    auto a = c.find_arrow(from.text);
                    if (not a) fail(from, "unknown arrow '" + from.text + "' in schema '" + src->name() + "'");
                    if (amap[index(*a)]) fail(from, "arrow '" + from.text + "' is mapped twice");
                    auto sv = vmap[index(c.source(*a))];
                    if (not sv) fail(from, "map vertex '" + c.name(c.source(*a)) + "' before its arrows");
                    expect(Tok::Arrow);
                    amap[index(*a)] = path(d, *sv, tgt->name());
                    expect(Tok::Semi);
                }
            } else {
                fail(peek(), std::string("unexpected ") + found(peek()), {"nodes", "arrows", "'}'"});
            }
        }
        std::vector<VertexId> vs;
        for (std::size_t v = 0; v < vmap.size(); ++v) {
            if (not vmap[v]) fail(n, "translation '" + n.text + "' does not map vertex '" + c.name(vertex_id(v)) + "'");
            vs.push_back(*vmap[v]);
        }
        std::vector<Path> as;
        for (std::size_t a = 0; a < amap.size(); ++a) {
            if (not amap[a]) fail(n, "translation '" + n.text + "' does not map arrow '" + c.name(arrow_id(a)) + "'");
            as.push_back(*amap[a]);
        }
        return TranslationDecl{n.text, Translation(src, tgt, std::move(vs), std::move(as))};
    }

    // --- morphisms and typed instances ---

    std::vector<std::vector<RowIndex>> components(const Instance &src, const Instance &tgt, const Token &at)
    {
        const Graph &g = src.graph();
        std::vector<std::vector<std::optional<RowIndex>>> comp(g.vertex_count());
        for (std::size_t v = 0; v < g.vertex_count(); ++v) comp[v].resize(src.row_count(vertex_id(v)));
        expect(Tok::LBrace);
        while (not accept(Tok::RBrace)) {
            const Token &vt = name();
            VertexId v = vertex_in(g, vt, src.schema().name());
            expect(Tok::LBrace);
            while (not accept(Tok::RBrace)) {
                const Token &from = name();
                expect(Tok::Arrow);
                const Token &to = name();
                auto r = src.find_row(v, from.text);
                if (not r) fail(from, "unknown row '" + from.text + "' in table '" + vt.text + "' of the source");
                auto s = tgt.find_row(v, to.text);
                if (not s) fail(to, "unknown row '" + to.text + "' in table '" + vt.text + "' of the target");
                if (comp[index(v)][*r]) fail(from, "row '" + from.text + "' is mapped twice");
                comp[index(v)][*r] = *s;
            }
        }
        std::vector<std::vector<RowIndex>> out(g.vertex_count());
        for (std::size_t v = 0; v < g.vertex_count(); ++v)
            for (RowIndex r = 0; r < comp[v].size(); ++r) {
                if (not comp[v][r])
                    fail(at, "no image for row '" + src.row(vertex_id(v), r) + "' of table '" + g.name(vertex_id(v)) + "'");
                out[v].push_back(*comp[v][r]);
            }
        return out;
    }

    MorphismDecl morphism()
    {
        expect_word("morphism");
        Token n = name();
        expect(Tok::Colon);
        const Token &s = name();
        const InstanceDecl &src = instance_named(s);
        expect(Tok::Arrow);
        const Token &t = name();
        const InstanceDecl &tgt = instance_named(t);
        if (src.instance->schema() != tgt.instance->schema())
            fail(t, "instances '" + s.text + "' and '" + t.text + "' are on different schemas");
        auto comps = components(*src.instance, *tgt.instance, n);
        return MorphismDecl{n.text, s.text, t.text, InstanceMorphism(src.instance, tgt.instance, std::move(comps))};
    }

    TypedDecl typed()
    {
        expect_word("typedinstance");
        Token n = name();
        expect(Tok::LBrace);
        expect_word("instance");
        const Token &i = name();
        const InstanceDecl &inst = instance_named(i);
        expect(Tok::Semi);
        expect_word("typing");
        const Token &p = name();
        const InstanceDecl &typing = instance_named(p);
        expect(Tok::Semi);
        if (inst.instance->schema() != typing.instance->schema())
            fail(p, "instances '" + i.text + "' and '" + p.text + "' are on different schemas");
        expect_word("components");
        auto comps = components(*inst.instance, *typing.instance, n);
        expect(Tok::RBrace);
        return TypedDecl{n.text, i.text, p.text,
                         TypedInstance(InstanceMorphism(inst.instance, typing.instance, std::move(comps)))};
    }
};

}

/// Parses a document.  Names in `context` (e.g. earlier files) may be referenced but are not copied.
inline Document parse(std::string_view text, const Document *context = nullptr)
{
    return detail::Parser(text, context).run();
}

}
