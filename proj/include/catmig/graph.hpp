// SPDX-License-Identifier: Apache-2.0
#pragma once

/*! \file
 *  \brief Finite directed multigraphs and head-to-tail paths.
 *
 *  Vertices and arrows are addressed by dense indices (`VertexId`, `ArrowId`) in declaration order.  Names
 *  are unique within their kind; a vertex and an arrow may share a name.
 */

#include <catmig/error.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace catmig {

enum class VertexId : std::uint32_t {};
enum class ArrowId : std::uint32_t {};

constexpr std::size_t index(VertexId v) { return static_cast<std::size_t>(v); }
constexpr std::size_t index(ArrowId a) { return static_cast<std::size_t>(a); }
constexpr VertexId vertex_id(std::size_t i) { return static_cast<VertexId>(i); }
constexpr ArrowId arrow_id(std::size_t i) { return static_cast<ArrowId>(i); }

struct Arrow
{
    std::string name;
    VertexId source;
    VertexId target;

    bool operator==(const Arrow&) const = default;
};

class Graph
{
    std::vector<std::string> vertices_;
    std::vector<Arrow> arrows_;
    std::unordered_map<std::string, VertexId> vertex_index_;
    std::unordered_map<std::string, ArrowId> arrow_index_;
    std::vector<std::vector<ArrowId>> outgoing_;

    public:
    Graph() = default;

    VertexId add_vertex(std::string name)
    {
        if (name.empty())
            throw StructureError("vertex name must not be empty");
        auto id = vertex_id(vertices_.size());
        if (not vertex_index_.emplace(name, id).second)
            throw StructureError("duplicate vertex '" + name + "'");
        vertices_.push_back(std::move(name));
        outgoing_.emplace_back();
        return id;
    }

    ArrowId add_arrow(std::string name, VertexId source, VertexId target)
    {
        if (name.empty())
            throw StructureError("arrow name must not be empty");
        if (name == "id")
            throw StructureError("'id' is reserved for trivial paths and cannot name an arrow");
        if (index(source) >= vertices_.size() or index(target) >= vertices_.size())
            throw StructureError("arrow '" + name + "' refers to an undeclared vertex");
        auto id = arrow_id(arrows_.size());
        if (not arrow_index_.emplace(name, id).second)
            throw StructureError("duplicate arrow '" + name + "'");
        arrows_.push_back({std::move(name), source, target});
        outgoing_[index(source)].push_back(id);
        return id;
    }

    ArrowId add_arrow(std::string name, std::string_view source, std::string_view target)
    {
        return add_arrow(std::move(name), vertex(source), vertex(target));
    }

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t arrow_count() const { return arrows_.size(); }

    const std::string & name(VertexId v) const { return vertices_.at(index(v)); }
    const std::string & name(ArrowId a) const { return arrows_.at(index(a)).name; }
    const Arrow & arrow(ArrowId a) const { return arrows_.at(index(a)); }
    VertexId source(ArrowId a) const { return arrow(a).source; }
    VertexId target(ArrowId a) const { return arrow(a).target; }

    std::span<const std::string> vertex_names() const { return vertices_; }
    std::span<const Arrow> arrows() const { return arrows_; }
    std::span<const ArrowId> outgoing(VertexId v) const { return outgoing_.at(index(v)); }

    std::optional<VertexId> find_vertex(std::string_view name) const
    {
        if (auto it = vertex_index_.find(std::string(name)); it != vertex_index_.end())
            return it->second;
        return std::nullopt;
    }

    std::optional<ArrowId> find_arrow(std::string_view name) const
    {
        if (auto it = arrow_index_.find(std::string(name)); it != arrow_index_.end())
            return it->second;
        return std::nullopt;
    }

    VertexId vertex(std::string_view name) const
    {
        if (auto v = find_vertex(name)) return *v;
        throw StructureError("unknown vertex '" + std::string(name) + "'");
    }

    ArrowId arrow_named(std::string_view name) const
    {
        if (auto a = find_arrow(name)) return *a;
        throw StructureError("unknown arrow '" + std::string(name) + "'");
    }

    bool operator==(const Graph &other) const
    {
        return vertices_ == other.vertices_ and arrows_ == other.arrows_;
    }
};

/// A head-to-tail sequence of arrows.  An empty arrow list is the trivial path on `source`.
struct Path
{
    VertexId source{};
    std::vector<ArrowId> arrows;

    Path() = default;
    explicit Path(VertexId source, std::vector<ArrowId> arrows = {})
        : source(source)
        , arrows(std::move(arrows))
    { }

    static Path trivial(VertexId v) { return Path(v); }

    bool is_trivial() const { return arrows.empty(); }
    std::size_t length() const { return arrows.size(); }

    auto operator<=>(const Path&) const = default;
    bool operator==(const Path&) const = default;
};

inline VertexId target(const Graph &g, const Path &p)
{
    return p.arrows.empty() ? p.source : g.target(p.arrows.back());
}

/// Throws `StructureError` unless `p` is head-to-tail in `g`.
inline void check_path(const Graph &g, const Path &p)
{
    if (index(p.source) >= g.vertex_count())
        throw StructureError("path starts at an undeclared vertex");
    VertexId at = p.source;
    for (ArrowId a : p.arrows) {
        if (index(a) >= g.arrow_count())
            throw StructureError("path uses an undeclared arrow");
        if (g.source(a) != at)
            throw StructureError("arrow '" + g.name(a) + "' starts at '" + g.name(g.source(a)) +
                                 "', not at '" + g.name(at) + "'");
        at = g.target(a);
    }
}

inline bool is_valid_path(const Graph &g, const Path &p)
{
    try {
        check_path(g, p);
        return true;
    } catch (const StructureError&) {
        return false;
    }
}

/// Concatenation `p` then `q` (diagrammatic order).
inline Path compose_paths(const Graph &g, const Path &p, const Path &q)
{
    VertexId meet = target(g, p);
    if (meet != q.source)
        throw CompositionError(g.name(meet), g.name(q.source));
    Path out = p;
    out.arrows.insert(out.arrows.end(), q.arrows.begin(), q.arrows.end());
    return out;
}

/// Dot-separated arrow names, or `id` for a trivial path.
inline std::string path_to_string(const Graph &g, const Path &p)
{
    if (p.arrows.empty()) return "id";
    std::string out;
    for (ArrowId a : p.arrows) {
        if (not out.empty()) out += '.';
        out += g.name(a);
    }
    return out;
}

/// Parses `id` or `a.b.c`; `source` is only consulted for `id`.
inline Path parse_path(const Graph &g, VertexId source, std::string_view text)
{
    Path p(source);
    if (text == "id") return p;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto dot = text.find('.', start);
        auto part = text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
        p.arrows.push_back(g.arrow_named(part));
        if (dot == std::string_view::npos) break;
        start = dot + 1;
    }
    p.source = g.source(p.arrows.front());
    check_path(g, p);
    return p;
}

}
