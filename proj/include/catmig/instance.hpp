// SPDX-License-Identifier: Apache-2.0
#pragma once

/*! \file
 *  \brief Set-valued instances on a schema: one table of row-ids per vertex and one total column per arrow.
 *
 *  Rows are stored in declaration order and addressed by their position (`RowIndex`).  Row-ids are unique per
 *  table, not globally.  Construction enforces totality and foreign-key closure; equation satisfaction is
 *  checked separately by `validate_instance`, which reports instead of throwing.
 */

#include <catmig/schema.hpp>

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace catmig {

using RowIndex = std::size_t;

class Instance
{
    struct Table
    {
        std::vector<std::string> rows;
        std::unordered_map<std::string, RowIndex> index;

        bool operator==(const Table &other) const { return rows == other.rows; }
    };

    SchemaPtr schema_;
    std::vector<Table> tables_;
    std::vector<std::vector<RowIndex>> columns_;

    friend class InstanceBuilder;

    public:
    Instance() = default;

    /// The empty instance on `schema`.
    explicit Instance(SchemaPtr schema)
        : schema_(std::move(schema))
        , tables_(schema_->graph().vertex_count())
        , columns_(schema_->graph().arrow_count())
    { }

    const Schema & schema() const { return *schema_; }
    const SchemaPtr & schema_ptr() const { return schema_; }
    const Graph & graph() const { return schema_->graph(); }

    std::size_t row_count(VertexId v) const { return tables_.at(index(v)).rows.size(); }
    std::span<const std::string> rows(VertexId v) const { return tables_.at(index(v)).rows; }
    const std::string & row(VertexId v, RowIndex r) const { return tables_.at(index(v)).rows.at(r); }

    std::size_t total_rows() const
    {
        std::size_t n = 0;
        for (const auto &t : tables_) n += t.rows.size();
        return n;
    }

    std::optional<RowIndex> find_row(VertexId v, std::string_view id) const
    {
        const auto &t = tables_.at(index(v));
        if (auto it = t.index.find(std::string(id)); it != t.index.end()) return it->second;
        return std::nullopt;
    }

    RowIndex row_index(VertexId v, std::string_view id) const
    {
        if (auto r = find_row(v, id)) return *r;
        throw UnknownRowError(graph().name(v), std::string(id));
    }

    /// The column of arrow `a`, indexed by source row.
    std::span<const RowIndex> column(ArrowId a) const { return columns_.at(index(a)); }
    RowIndex value(ArrowId a, RowIndex r) const { return columns_.at(index(a)).at(r); }

    bool operator==(const Instance &other) const
    {
        if (schema_ != other.schema_ and (not schema_ or not other.schema_ or *schema_ != *other.schema_))
            return false;
        return tables_ == other.tables_ and columns_ == other.columns_;
    }
};

/// Builds an `Instance`; `build()` throws `StructureError` on partial columns.
class InstanceBuilder
{
    Instance inst_;
    std::vector<std::vector<std::optional<RowIndex>>> cells_;

    public:
    explicit InstanceBuilder(SchemaPtr schema)
        : inst_(std::move(schema))
        , cells_(inst_.graph().arrow_count())
    { }

    const Graph & graph() const { return inst_.graph(); }
    const Instance & partial() const { return inst_; }

    RowIndex add_row(VertexId v, std::string id)
    {
        auto &t = inst_.tables_.at(index(v));
        RowIndex r = t.rows.size();
        if (not t.index.emplace(id, r).second)
            throw StructureError("duplicate row '" + id + "' in table '" + graph().name(v) + "'");
        t.rows.push_back(std::move(id));
        for (ArrowId a : graph().outgoing(v))
            cells_[index(a)].emplace_back();
        return r;
    }

    RowIndex add_row(std::string_view vertex, std::string id) { return add_row(graph().vertex(vertex), std::move(id)); }

    void set(ArrowId a, RowIndex source_row, RowIndex target_row)
    {
        const Graph &g = graph();
        if (target_row >= inst_.row_count(g.target(a)))
            throw StructureError("column '" + g.name(a) + "' points outside table '" + g.name(g.target(a)) + "'");
        cells_.at(index(a)).at(source_row) = target_row;
    }

    /// Sets a cell by names; the target row must already exist.
    void set(std::string_view arrow, std::string_view source_row, std::string_view target_row)
    {
        const Graph &g = graph();
        ArrowId a = g.arrow_named(arrow);
        auto src = inst_.find_row(g.source(a), source_row);
        if (not src)
            throw StructureError("column '" + g.name(a) + "': unknown row '" + std::string(source_row) +
                                 "' in table '" + g.name(g.source(a)) + "'");
        auto tgt = inst_.find_row(g.target(a), target_row);
        if (not tgt)
            throw StructureError("column '" + g.name(a) + "' of row '" + std::string(source_row) +
                                 "' refers to undeclared row '" + std::string(target_row) + "' of table '" +
                                 g.name(g.target(a)) + "'");
        set(a, *src, *tgt);
    }

    bool is_set(ArrowId a, RowIndex r) const { return cells_.at(index(a)).at(r).has_value(); }

    Instance build() &&
    {
        const Graph &g = graph();
        for (std::size_t ai = 0; ai < g.arrow_count(); ++ai) {
            ArrowId a = arrow_id(ai);
            auto &col = inst_.columns_[ai];
            col.clear();
            col.reserve(cells_[ai].size());
            for (RowIndex r = 0; r < cells_[ai].size(); ++r) {
                if (not cells_[ai][r])
                    throw StructureError("row '" + inst_.row(g.source(a), r) + "' of table '" +
                                         g.name(g.source(a)) + "' has no value for column '" + g.name(a) + "'");
                col.push_back(*cells_[ai][r]);
            }
        }
        return std::move(inst_);
    }
};

/// Row reached from `r` by following `p` (`r` must be a row of `p.source`).
inline RowIndex evaluate_path(const Instance &inst, const Path &p, RowIndex r)
{
    if (r >= inst.row_count(p.source))
        throw UnknownRowError(inst.graph().name(p.source), "#" + std::to_string(r));
    for (ArrowId a : p.arrows) r = inst.value(a, r);
    return r;
}

inline std::string evaluate_path(const Instance &inst, const Path &p, std::string_view row)
{
    RowIndex r = inst.row_index(p.source, row);
    return inst.row(target(inst.graph(), p), evaluate_path(inst, p, r));
}

struct EquationViolation
{
    std::size_t equation;  ///< index into `schema().equations()`
    std::string equation_text;
    std::string row;
    std::string lhs_value;
    std::string rhs_value;
};

struct InstanceReport
{
    std::vector<EquationViolation> violations;

    bool ok() const { return violations.empty(); }
};

/// Checks every declared equation on every row of its source table.
inline InstanceReport validate_instance(const Instance &inst)
{
    InstanceReport report;
    const Schema &s = inst.schema();
    const Graph &g = s.graph();
    for (std::size_t e = 0; e < s.equations().size(); ++e) {
        const auto &eq = s.equations()[e];
        VertexId tgt = target(g, eq.lhs);
        for (RowIndex r = 0; r < inst.row_count(eq.lhs.source); ++r) {
            RowIndex l = evaluate_path(inst, eq.lhs, r);
            RowIndex rr = evaluate_path(inst, eq.rhs, r);
            if (l != rr)
                report.violations.push_back({e, s.equation_to_string(eq), inst.row(eq.lhs.source, r),
                                             inst.row(tgt, l), inst.row(tgt, rr)});
        }
    }
    return report;
}

/// Copies `inst` onto an equal-valued schema object (e.g. one re-parsed from text).
inline Instance rebind(const Instance &inst, SchemaPtr schema)
{
    if (inst.schema() != *schema)
        throw SchemaMismatch("cannot rebind instance of '" + inst.schema().name() + "' onto '" + schema->name() + "'");
    InstanceBuilder b(schema);
    const Graph &g = schema->graph();
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        for (const auto &row : inst.rows(vertex_id(v)))
            b.add_row(vertex_id(v), row);
    for (std::size_t a = 0; a < g.arrow_count(); ++a)
        for (RowIndex r = 0; r < inst.column(arrow_id(a)).size(); ++r)
            b.set(arrow_id(a), r, inst.value(arrow_id(a), r));
    return std::move(b).build();
}

}
