// SPDX-License-Identifier: Apache-2.0
#pragma once

/*! \file
 *  \brief Translations (functor presentations) between schemas: vertices to vertices, arrows to paths.
 */

#include <catmig/word_problem.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace catmig {

class Translation
{
    SchemaPtr source_;
    SchemaPtr target_;
    std::vector<VertexId> vertex_map_;
    std::vector<Path> arrow_map_;

    public:
    Translation() = default;

    /// Structural checks only (totality, valid target paths); endpoint and equation preservation are reported
    /// by `check_translation`.
    Translation(SchemaPtr source, SchemaPtr target, std::vector<VertexId> vertex_map, std::vector<Path> arrow_map)
        : source_(std::move(source))
        , target_(std::move(target))
        , vertex_map_(std::move(vertex_map))
        , arrow_map_(std::move(arrow_map))
    {
        const Graph &c = source_->graph();
        const Graph &d = target_->graph();
        if (vertex_map_.size() != c.vertex_count())
            throw StructureError("translation must map every vertex of '" + source_->name() + "'");
        if (arrow_map_.size() != c.arrow_count())
            throw StructureError("translation must map every arrow of '" + source_->name() + "'");
        for (VertexId v : vertex_map_)
            if (index(v) >= d.vertex_count())
                throw StructureError("translation maps a vertex outside '" + target_->name() + "'");
        for (const Path &p : arrow_map_) check_path(d, p);
    }

    const Schema & source() const { return *source_; }
    const Schema & target() const { return *target_; }
    const SchemaPtr & source_ptr() const { return source_; }
    const SchemaPtr & target_ptr() const { return target_; }

    VertexId operator()(VertexId v) const { return vertex_map_.at(index(v)); }
    const Path & operator()(ArrowId a) const { return arrow_map_.at(index(a)); }
    const std::vector<VertexId> & vertex_map() const { return vertex_map_; }
    const std::vector<Path> & arrow_map() const { return arrow_map_; }

    /// Image of a source path: concatenation of the arrow images, starting at the image of its source.
    Path apply(const Path &p) const
    {
        Path out(vertex_map_.at(index(p.source)));
        for (ArrowId a : p.arrows) {
            const Path &img = arrow_map_.at(index(a));
            out.arrows.insert(out.arrows.end(), img.arrows.begin(), img.arrows.end());
        }
        return out;
    }

    bool operator==(const Translation &other) const
    {
        return *source_ == *other.source_ and *target_ == *other.target_ and vertex_map_ == other.vertex_map_ and
               arrow_map_ == other.arrow_map_;
    }
};

/// Builds a translation from names; `arrow(a, "p.q")` or `arrow(a, "id")`.
class TranslationBuilder
{
    SchemaPtr source_;
    SchemaPtr target_;
    std::vector<std::optional<VertexId>> vertices_;
    std::vector<std::optional<std::string>> arrows_;

    public:
    TranslationBuilder(SchemaPtr source, SchemaPtr target)
        : source_(std::move(source))
        , target_(std::move(target))
        , vertices_(source_->graph().vertex_count())
        , arrows_(source_->graph().arrow_count())
    { }

    TranslationBuilder & vertex(std::string_view from, std::string_view to)
    {
        vertices_[index(source_->graph().vertex(from))] = target_->graph().vertex(to);
        return *this;
    }

    TranslationBuilder & arrow(std::string_view from, std::string path)
    {
        arrows_[index(source_->graph().arrow_named(from))] = std::move(path);
        return *this;
    }

    Translation build() const
    {
        const Graph &c = source_->graph();
        std::vector<VertexId> vmap;
        for (std::size_t v = 0; v < vertices_.size(); ++v) {
            if (not vertices_[v])
                throw StructureError("translation does not map vertex '" + c.name(vertex_id(v)) + "'");
            vmap.push_back(*vertices_[v]);
        }
        std::vector<Path> amap;
        for (std::size_t a = 0; a < arrows_.size(); ++a) {
            if (not arrows_[a])
                throw StructureError("translation does not map arrow '" + c.name(arrow_id(a)) + "'");
            amap.push_back(parse_path(target_->graph(), vmap[index(c.source(arrow_id(a)))], *arrows_[a]));
        }
        return Translation(source_, target_, std::move(vmap), std::move(amap));
    }
};

inline Translation identity_translation(SchemaPtr schema)
{
    const Graph &g = schema->graph();
    std::vector<VertexId> vmap;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) vmap.push_back(vertex_id(v));
    std::vector<Path> amap;
    for (std::size_t a = 0; a < g.arrow_count(); ++a)
        amap.push_back(Path(g.source(arrow_id(a)), {arrow_id(a)}));
    return Translation(schema, schema, std::move(vmap), std::move(amap));
}

/// `first` then `second`: C -> D -> E.
inline Translation compose(const Translation &first, const Translation &second)
{
    if (first.target() != second.source())
        throw SchemaMismatch("cannot compose translations: '" + first.target().name() + "' is not '" +
                             second.source().name() + "'");
    std::vector<VertexId> vmap;
    for (VertexId v : first.vertex_map()) vmap.push_back(second(v));
    std::vector<Path> amap;
    for (const Path &p : first.arrow_map()) amap.push_back(second.apply(p));
    return Translation(first.source_ptr(), second.target_ptr(), std::move(vmap), std::move(amap));
}

struct EndpointViolation
{
    std::string arrow;
    std::string expected_source;
    std::string actual_source;
    std::string expected_target;
    std::string actual_target;
};

/// An equation whose translated sides could not be proved equivalent within the rewrite budget.
struct UnverifiedEquation
{
    std::string equation;
    std::string lhs_image;
    std::string rhs_image;
    std::size_t budget;
};

struct TranslationReport
{
    std::vector<EndpointViolation> endpoint_violations;
    std::vector<UnverifiedEquation> unverified;

    bool ok() const { return endpoint_violations.empty() and unverified.empty(); }
    bool endpoints_ok() const { return endpoint_violations.empty(); }
};

inline TranslationReport check_translation(const Translation &F, const RewriteOptions &opts = {})
{
    TranslationReport report;
    const Graph &c = F.source().graph();
    const Graph &d = F.target().graph();
    std::vector<bool> arrow_ok(c.arrow_count(), true);
    for (std::size_t ai = 0; ai < c.arrow_count(); ++ai) {
        ArrowId a = arrow_id(ai);
        const Path &img = F(a);
        VertexId want_src = F(c.source(a)), want_tgt = F(c.target(a));
        VertexId got_tgt = target(d, img);
        if (img.source != want_src or got_tgt != want_tgt) {
            arrow_ok[ai] = false;
            report.endpoint_violations.push_back(
                {c.name(a), d.name(want_src), d.name(img.source), d.name(want_tgt), d.name(got_tgt)});
        }
    }
    PathEquivalenceOracle oracle(F.target(), opts);
    for (const auto &eq : F.source().equations()) {
        bool usable = true;
        for (ArrowId a : eq.lhs.arrows) usable = usable and arrow_ok[index(a)];
        for (ArrowId a : eq.rhs.arrows) usable = usable and arrow_ok[index(a)];
        if (not usable) continue;
        Path l = F.apply(eq.lhs), r = F.apply(eq.rhs);
        if (not oracle.equivalent(l, r))
            report.unverified.push_back(
                {F.source().equation_to_string(eq), path_to_string(d, l), path_to_string(d, r), opts.budget});
    }
    return report;
}

/// Throws `InvalidTranslation` when an arrow image has the wrong endpoints.
inline void require_endpoints(const Translation &F)
{
    auto report = check_translation(F, RewriteOptions{.budget = 0});
    if (not report.endpoints_ok()) {
        const auto &v = report.endpoint_violations.front();
        throw InvalidTranslation("arrow '" + v.arrow + "' is sent to a path " + v.actual_source + " -> " +
                                 v.actual_target + " but must go " + v.expected_source + " -> " + v.expected_target);
    }
}

enum class TranslationEquality { Equal, NotProvedWithinBudget, Different };

/// Translations agree if their vertex maps coincide and each arrow's images are equivalent paths.
inline TranslationEquality translations_equal(const Translation &F, const Translation &G, const RewriteOptions &opts = {})
{
    if (F.source() != G.source() or F.target() != G.target())
        throw SchemaMismatch("translations_equal needs translations between the same schemas");
    if (F.vertex_map() != G.vertex_map()) return TranslationEquality::Different;
    PathEquivalenceOracle oracle(F.target(), opts);
    for (std::size_t a = 0; a < F.arrow_map().size(); ++a)
        if (not oracle.equivalent(F.arrow_map()[a], G.arrow_map()[a]))
            return TranslationEquality::NotProvedWithinBudget;
    return TranslationEquality::Equal;
}

}
