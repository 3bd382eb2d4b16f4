// SPDX-License-Identifier: Apache-2.0
#pragma once

/*! \file
 *  \brief Grothendieck construction: an instance as a typed graph of elements, i.e. subject/predicate/object
 *         triples, and the way back.
 */

#include <catmig/instance.hpp>

#include <algorithm>
#include <cctype>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace catmig {

struct Triple
{
    std::string subject;
    std::string predicate;
    std::string object;

    auto operator<=>(const Triple&) const = default;
};

struct TripleNode
{
    std::string id;
    std::string type;  // a vertex of the schema

    auto operator<=>(const TripleNode&) const = default;
};

struct TripleStore
{
    SchemaPtr schema;
    std::vector<TripleNode> nodes;
    std::vector<Triple> triples;
};

inline std::string node_id(const std::string &vertex, const std::string &row) { return vertex + "/" + row; }

inline TripleStore grothendieck(const Instance &I)
{
    const Graph &g = I.graph();
    TripleStore s{I.schema_ptr(), {}, {}};
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        for (const auto &row : I.rows(vertex_id(v))) s.nodes.push_back({node_id(g.name(vertex_id(v)), row), g.name(vertex_id(v))});
    for (std::size_t ai = 0; ai < g.arrow_count(); ++ai) {
        ArrowId a = arrow_id(ai);
        const std::string &src = g.name(g.source(a)), &tgt = g.name(g.target(a));
        for (RowIndex r = 0; r < I.row_count(g.source(a)); ++r)
            s.triples.push_back({node_id(src, I.row(g.source(a), r)), g.name(a),
                                 node_id(tgt, I.row(g.target(a), I.value(a, r)))});
    }
    return s;
}

/// Rebuilds the instance; nodes must be typed by vertices and carry exactly one triple per outgoing arrow.
inline Instance ungrothendieck(const TripleStore &s)
{
    const Graph &g = s.schema->graph();
    InstanceBuilder b(s.schema);
    std::map<std::string, std::pair<VertexId, RowIndex>> where;
    for (const auto &n : s.nodes) {
        auto v = g.find_vertex(n.type);
        if (not v) throw StructureError("node '" + n.id + "' has unknown type '" + n.type + "'");
        std::string prefix = n.type + "/";
        std::string row = n.id.starts_with(prefix) ? n.id.substr(prefix.size()) : n.id;
        if (where.contains(n.id)) throw StructureError("node '" + n.id + "' is declared twice");
        where[n.id] = {*v, b.add_row(*v, row)};
    }
    for (const auto &t : s.triples) {
        auto a = g.find_arrow(t.predicate);
        if (not a) throw StructureError("triple uses unknown predicate '" + t.predicate + "'");
        auto subj = where.find(t.subject), obj = where.find(t.object);
        if (subj == where.end()) throw StructureError("triple subject '" + t.subject + "' is not a node");
        if (obj == where.end()) throw StructureError("triple object '" + t.object + "' is not a node");
        if (subj->second.first != g.source(*a) or obj->second.first != g.target(*a))
            throw StructureError("triple <" + t.subject + " " + t.predicate + " " + t.object +
                                 "> does not respect the types of '" + t.predicate + "'");
        if (b.is_set(*a, subj->second.second))
            throw StructureError("duplicate predicate '" + t.predicate + "' on node '" + t.subject + "'");
        b.set(*a, subj->second.second, obj->second.second);
    }
    for (const auto &n : s.nodes) {
        auto [v, r] = where[n.id];
        for (ArrowId a : g.outgoing(v))
            if (not b.is_set(a, r))
                throw StructureError("missing triple: node '" + n.id + "' has no '" + g.name(a) + "'");
    }
    return std::move(b).build();
}

inline std::string percent_encode(const std::string &text)
{
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char ch : text) {
        if (std::isalnum(ch) or ch == '-' or ch == '.' or ch == '_' or ch == '~' or ch == '/') out += static_cast<char>(ch);
        else {
            out += '%';
            out += hex[ch >> 4];
            out += hex[ch & 15];
        }
    }
    return out;
}

/// N-Triples-shaped lines, sorted bytewise.
inline std::string export_triples(const TripleStore &s, std::string base)
{
    if (not base.empty() and base.back() == '/') base.pop_back();
    std::vector<std::string> lines;
    for (const auto &t : s.triples)
        lines.push_back("<" + base + "/" + percent_encode(t.subject) + "> <" + base + "/" + percent_encode(t.predicate) +
                        "> <" + base + "/" + percent_encode(t.object) + "> .");
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto &l : lines) out += l + "\n";
    return out;
}

}
