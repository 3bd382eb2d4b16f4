// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <catmig/graph.hpp>

#include <memory>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace catmig {

/// A declared generator `lhs ≃ rhs` of a schema's path equivalence relation.
struct PathEquation
{
    Path lhs;
    Path rhs;

    bool operator==(const PathEquation&) const = default;
};

/// A finitely presented category: a graph plus generating path equations.
class Schema
{
    std::string name_;
    Graph graph_;
    std::vector<PathEquation> equations_;

    public:
    Schema() = default;
    explicit Schema(std::string name, Graph graph = {}, std::vector<PathEquation> equations = {})
        : name_(std::move(name))
        , graph_(std::move(graph))
    {
        for (auto &eq : equations)
            add_equation(std::move(eq));
    }

    const std::string & name() const { return name_; }
    const Graph & graph() const { return graph_; }
    const std::vector<PathEquation> & equations() const { return equations_; }

    void add_equation(PathEquation eq)
    {
        check_path(graph_, eq.lhs);
        check_path(graph_, eq.rhs);
        if (eq.lhs.source != eq.rhs.source)
            throw StructureError("equation sides start at different vertices ('" + graph_.name(eq.lhs.source) +
                                 "' vs '" + graph_.name(eq.rhs.source) + "')");
        if (target(graph_, eq.lhs) != target(graph_, eq.rhs))
            throw StructureError("equation " + path_to_string(graph_, eq.lhs) + " = " +
                                 path_to_string(graph_, eq.rhs) + " relates paths with different targets");
        equations_.push_back(std::move(eq));
    }

    /// Convenience for tests and examples: `add_equation("A", "f.g", "f")`.
    void add_equation(std::string_view source, std::string_view lhs, std::string_view rhs)
    {
        VertexId v = graph_.vertex(source);
        add_equation(PathEquation{parse_path(graph_, v, lhs), parse_path(graph_, v, rhs)});
    }

    std::string equation_to_string(const PathEquation &eq) const
    {
        return path_to_string(graph_, eq.lhs) + " = " + path_to_string(graph_, eq.rhs);
    }

    bool operator==(const Schema&) const = default;
};

using SchemaPtr = std::shared_ptr<const Schema>;

/// Incremental construction of a `Schema` by name.
class SchemaBuilder
{
    std::string name_;
    Graph graph_;
    std::vector<std::tuple<std::string, std::string, std::string>> pending_;

    public:
    explicit SchemaBuilder(std::string name) : name_(std::move(name)) { }

    SchemaBuilder & vertex(std::string name) { graph_.add_vertex(std::move(name)); return *this; }

    template<typename... Names>
    SchemaBuilder & vertices(Names&&... names) { (vertex(std::string(names)), ...); return *this; }

    SchemaBuilder & arrow(std::string name, std::string_view source, std::string_view target)
    {
        graph_.add_arrow(std::move(name), source, target);
        return *this;
    }

    SchemaBuilder & equation(std::string source, std::string lhs, std::string rhs)
    {
        pending_.emplace_back(std::move(source), std::move(lhs), std::move(rhs));
        return *this;
    }

    SchemaPtr build() const
    {
        auto s = std::make_shared<Schema>(name_, graph_);
        for (auto &[src, lhs, rhs] : pending_)
            s->add_equation(src, lhs, rhs);
        return s;
    }
};

}
