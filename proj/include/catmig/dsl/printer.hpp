// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <catmig/dsl/document.hpp>
#include <catmig/dsl/lexer.hpp>

#include <string>

namespace catmig::dsl {

namespace detail {

inline std::string q(std::string_view s) { return quote_if_needed(s); }

inline std::string path_text(const Graph &g, const Path &p)
{
    if (p.is_trivial()) return "id";
    std::string out;
    for (std::size_t i = 0; i < p.arrows.size(); ++i) out += (i ? "." : "") + q(g.name(p.arrows[i]));
    return out;
}

inline void print_schema(std::string &out, const Schema &s)
{
    const Graph &g = s.graph();
    if (g.vertex_count() == 0 and s.equations().empty()) {
        out += "schema " + q(s.name()) + " {}\n";
        return;
    }
    out += "schema " + q(s.name()) + " {\n";
    if (g.vertex_count()) {
        out += "  nodes ";
        for (std::size_t v = 0; v < g.vertex_count(); ++v) out += (v ? ", " : "") + q(g.name(vertex_id(v)));
        out += ";\n";
    }
    if (g.arrow_count()) {
        out += "  arrows\n";
        for (const auto &a : g.arrows())
            out += "    " + q(a.name) + " : " + q(g.name(a.source)) + " -> " + q(g.name(a.target)) + ";\n";
    }
    if (not s.equations().empty()) {
        out += "  equations\n";
        for (const auto &e : s.equations())
            out += "    " + q(g.name(e.lhs.source)) + " : " + path_text(g, e.lhs) + " = " + path_text(g, e.rhs) + ";\n";
    }
    out += "}\n";
}

inline void print_instance(std::string &out, const std::string &name, const Instance &I)
{
    const Graph &g = I.graph();
    out += "instance " + q(name) + " on " + q(I.schema().name()) + " {";
    if (g.vertex_count() == 0) {
        out += "}\n";
        return;
    }
    out += "\n";
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        VertexId vid = vertex_id(v);
        out += "  table " + q(g.name(vid)) + " {";
        if (I.row_count(vid) == 0) {
            out += "}\n";
            continue;
        }
        out += "\n";
        auto cols = g.outgoing(vid);
        for (RowIndex r = 0; r < I.row_count(vid); ++r) {
            out += "    " + q(I.row(vid, r));
            if (not cols.empty()) {
                out += " ->";
                for (ArrowId a : cols) out += " (" + q(g.name(a)) + " = " + q(I.row(g.target(a), I.value(a, r))) + ")";
            }
            out += "\n";
        }
        out += "  }\n";
    }
    out += "}\n";
}

inline void print_translation(std::string &out, const std::string &name, const Translation &F)
{
    const Graph &c = F.source().graph();
    const Graph &d = F.target().graph();
    out += "translation " + q(name) + " : " + q(F.source().name()) + " -> " + q(F.target().name()) + " {";
    if (c.vertex_count() == 0) {
        out += "}\n";
        return;
    }
    out += "\n  nodes ";
    for (std::size_t v = 0; v < c.vertex_count(); ++v)
        out += (v ? ", " : "") + q(c.name(vertex_id(v))) + " -> " + q(d.name(F(vertex_id(v))));
    out += ";\n";
    if (c.arrow_count()) {
        out += "  arrows\n";
        for (std::size_t a = 0; a < c.arrow_count(); ++a)
            out += "    " + q(c.name(arrow_id(a))) + " -> " + path_text(d, F(arrow_id(a))) + ";\n";
    }
    out += "}\n";
}

inline void print_components(std::string &out, const InstanceMorphism &m, const std::string &indent)
{
    const Graph &g = m.graph();
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        VertexId vid = vertex_id(v);
        if (m.source().row_count(vid) == 0) continue;
        out += indent + q(g.name(vid)) + " {\n";
        for (RowIndex r = 0; r < m.source().row_count(vid); ++r)
            out += indent + "  " + q(m.source().row(vid, r)) + " -> " + q(m.target().row(vid, m(vid, r))) + "\n";
        out += indent + "}\n";
    }
}

}

inline std::string print(const Document &doc)
{
    std::string out;
    for (const auto &d : doc.declarations()) {
        if (not out.empty()) out += "\n";
        std::visit([&](const auto &x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, SchemaDecl>) detail::print_schema(out, *x.schema);
            else if constexpr (std::is_same_v<T, InstanceDecl>) detail::print_instance(out, x.name, *x.instance);
            else if constexpr (std::is_same_v<T, TranslationDecl>) detail::print_translation(out, x.name, x.translation);
            else if constexpr (std::is_same_v<T, MorphismDecl>) {
                out += "morphism " + detail::q(x.name) + " : " + detail::q(x.source) + " -> " + detail::q(x.target) + " {\n";
                detail::print_components(out, x.morphism, "  ");
                out += "}\n";
            } else {
                out += "typedinstance " + detail::q(x.name) + " {\n  instance " + detail::q(x.instance) + ";\n  typing " +
                       detail::q(x.typing) + ";\n  components {\n";
                detail::print_components(out, x.typed.tau(), "    ");
                out += "  }\n}\n";
            }
        }, d);
    }
    return out;
}

/// A single instance declaration, as written by `migrate`.
inline std::string print_instance(const std::string &name, const Instance &I)
{
    std::string out;
    detail::print_instance(out, name, I);
    return out;
}

}
