// SPDX-License-Identifier: Apache-2.0
#pragma once

/*! \file
 *  \brief Natural transformations between instances on one schema, morphism search, and fiber products.
 */

#include <catmig/instance.hpp>

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace catmig {

/// A family of functions `rows_source(v) -> rows_target(v)`, one per vertex.
class InstanceMorphism
{
    std::shared_ptr<const Instance> source_;
    std::shared_ptr<const Instance> target_;
    std::vector<std::vector<RowIndex>> components_;

    public:
    InstanceMorphism() = default;

    /// Throws `StructureError` if a component is not a total function into the target table.
    InstanceMorphism(std::shared_ptr<const Instance> source, std::shared_ptr<const Instance> target,
                     std::vector<std::vector<RowIndex>> components)
        : source_(std::move(source))
        , target_(std::move(target))
        , components_(std::move(components))
    {
        if (source_->schema() != target_->schema())
            throw SchemaMismatch("morphism between instances of '" + source_->schema().name() + "' and '" +
                                 target_->schema().name() + "'");
        const Graph &g = source_->graph();
        if (components_.size() != g.vertex_count())
            throw StructureError("morphism needs one component per vertex");
        for (std::size_t v = 0; v < g.vertex_count(); ++v) {
            if (components_[v].size() != source_->row_count(vertex_id(v)))
                throw StructureError("morphism component at '" + g.name(vertex_id(v)) + "' is not total");
            for (RowIndex r : components_[v])
                if (r >= target_->row_count(vertex_id(v)))
                    throw StructureError("morphism component at '" + g.name(vertex_id(v)) +
                                         "' points outside the target table");
        }
    }

    InstanceMorphism(const Instance &source, const Instance &target, std::vector<std::vector<RowIndex>> components)
        : InstanceMorphism(std::make_shared<const Instance>(source), std::make_shared<const Instance>(target),
                           std::move(components))
    { }

    const Instance & source() const { return *source_; }
    const Instance & target() const { return *target_; }
    const std::shared_ptr<const Instance> & source_ptr() const { return source_; }
    const std::shared_ptr<const Instance> & target_ptr() const { return target_; }
    const Graph & graph() const { return source_->graph(); }

    const std::vector<RowIndex> & component(VertexId v) const { return components_.at(index(v)); }
    RowIndex operator()(VertexId v, RowIndex r) const { return components_.at(index(v)).at(r); }
    const std::vector<std::vector<RowIndex>> & components() const { return components_; }

    bool is_injective() const
    {
        for (std::size_t v = 0; v < components_.size(); ++v) {
            std::vector<bool> hit(target_->row_count(vertex_id(v)));
            for (RowIndex r : components_[v]) {
                if (hit[r]) return false;
                hit[r] = true;
            }
        }
        return true;
    }

    bool is_bijective() const
    {
        if (not is_injective()) return false;
        for (std::size_t v = 0; v < components_.size(); ++v)
            if (components_[v].size() != target_->row_count(vertex_id(v))) return false;
        return true;
    }

    bool operator==(const InstanceMorphism &other) const
    {
        return source() == other.source() and target() == other.target() and components_ == other.components_;
    }
};

inline InstanceMorphism identity_morphism(const Instance &inst)
{
    auto p = std::make_shared<const Instance>(inst);
    std::vector<std::vector<RowIndex>> comps(inst.graph().vertex_count());
    for (std::size_t v = 0; v < comps.size(); ++v)
        for (RowIndex r = 0; r < inst.row_count(vertex_id(v)); ++r) comps[v].push_back(r);
    return InstanceMorphism(p, p, std::move(comps));
}

/// `first` then `second`.
inline InstanceMorphism compose(const InstanceMorphism &first, const InstanceMorphism &second)
{
    if (first.target() != second.source())
        throw SchemaMismatch("cannot compose morphisms: target of the first is not the source of the second");
    std::vector<std::vector<RowIndex>> comps(first.components().size());
    for (std::size_t v = 0; v < comps.size(); ++v)
        for (RowIndex r : first.component(vertex_id(v)))
            comps[v].push_back(second(vertex_id(v), r));
    return InstanceMorphism(first.source_ptr(), second.target_ptr(), std::move(comps));
}

struct NaturalityViolation
{
    std::string arrow;
    std::string row;
    std::string via_source;  ///< component applied after the source column
    std::string via_target;  ///< target column applied after the component
};

struct NaturalityReport
{
    std::vector<NaturalityViolation> violations;

    bool ok() const { return violations.empty(); }
};

inline NaturalityReport check_naturality(const InstanceMorphism &m)
{
    NaturalityReport report;
    const Graph &g = m.graph();
    for (std::size_t ai = 0; ai < g.arrow_count(); ++ai) {
        ArrowId a = arrow_id(ai);
        VertexId v = g.source(a), w = g.target(a);
        for (RowIndex r = 0; r < m.source().row_count(v); ++r) {
            RowIndex lhs = m(w, m.source().value(a, r));
            RowIndex rhs = m.target().value(a, m(v, r));
            if (lhs != rhs)
                report.violations.push_back({g.name(a), m.source().row(v, r), m.target().row(w, lhs),
                                             m.target().row(w, rhs)});
        }
    }
    return report;
}

namespace detail {

/// Backtracking search for natural maps `source -> target` with forward propagation along columns.
class MorphismSearch
{
    public:
    using Candidates = std::function<bool(VertexId, RowIndex, RowIndex)>;

    MorphismSearch(const Instance &source, const Instance &target, bool injective, Candidates allowed)
        : src_(source)
        , tgt_(target)
        , g_(source.graph())
        , injective_(injective)
        , allowed_(std::move(allowed))
    {
        if (source.schema() != target.schema())
            throw SchemaMismatch("morphism search across different schemas");
        assignment_.resize(g_.vertex_count());
        used_.resize(g_.vertex_count());
        for (std::size_t v = 0; v < g_.vertex_count(); ++v) {
            assignment_[v].assign(src_.row_count(vertex_id(v)), kUnset);
            used_[v].assign(tgt_.row_count(vertex_id(v)), 0);
        }
    }

    /// Elements ordered so that each connected component of the element graph is contiguous.
    std::vector<std::vector<std::pair<VertexId, RowIndex>>> components() const
    {
        std::vector<std::vector<std::size_t>> comp_of(g_.vertex_count());
        for (std::size_t v = 0; v < g_.vertex_count(); ++v)
            comp_of[v].assign(src_.row_count(vertex_id(v)), kUnset);
        // undirected adjacency through columns
        std::vector<std::vector<std::vector<std::pair<VertexId, RowIndex>>>> back(g_.vertex_count());
        for (std::size_t v = 0; v < g_.vertex_count(); ++v)
            back[v].resize(src_.row_count(vertex_id(v)));
        for (std::size_t ai = 0; ai < g_.arrow_count(); ++ai) {
            ArrowId a = arrow_id(ai);
            for (RowIndex r = 0; r < src_.row_count(g_.source(a)); ++r)
                back[index(g_.target(a))][src_.value(a, r)].push_back({g_.source(a), r});
        }
        std::vector<std::vector<std::pair<VertexId, RowIndex>>> out;
        for (std::size_t v = 0; v < g_.vertex_count(); ++v) {
            for (RowIndex r = 0; r < src_.row_count(vertex_id(v)); ++r) {
                if (comp_of[v][r] != kUnset) continue;
                std::vector<std::pair<VertexId, RowIndex>> comp{{vertex_id(v), r}};
                comp_of[v][r] = out.size();
                for (std::size_t i = 0; i < comp.size(); ++i) {
                    auto [x, xr] = comp[i];
                    auto visit = [&](VertexId y, RowIndex yr) {
                        if (comp_of[index(y)][yr] != kUnset) return;
                        comp_of[index(y)][yr] = out.size();
                        comp.push_back({y, yr});
                    };
                    for (ArrowId a : g_.outgoing(x)) visit(g_.target(a), src_.value(a, xr));
                    for (auto [y, yr] : back[index(x)][xr]) visit(y, yr);
                }
                out.push_back(std::move(comp));
            }
        }
        return out;
    }

    /// Invokes `on_solution` for every natural map; stops early when it returns false.
    template<typename OnSolution>
    void run(const std::vector<std::pair<VertexId, RowIndex>> &order, OnSolution &&on_solution)
    {
        stop_ = false;
        search(order, 0, on_solution);
    }

    const std::vector<std::vector<RowIndex>> & assignment() const { return assignment_; }

    private:
    static constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

    const Instance &src_;
    const Instance &tgt_;
    const Graph &g_;
    bool injective_;
    Candidates allowed_;
    std::vector<std::vector<RowIndex>> assignment_;
    std::vector<std::vector<int>> used_;
    std::vector<std::pair<VertexId, RowIndex>> trail_;
    bool stop_ = false;

    bool assign(VertexId v, RowIndex r, RowIndex image)
    {
        auto &slot = assignment_[index(v)][r];
        if (slot != kUnset) return slot == image;
        if (allowed_ and not allowed_(v, r, image)) return false;
        if (injective_ and used_[index(v)][image]) return false;
        slot = image;
        ++used_[index(v)][image];
        trail_.push_back({v, r});
        for (ArrowId a : g_.outgoing(v))
            if (not assign(g_.target(a), src_.value(a, r), tgt_.value(a, image))) return false;
        return true;
    }

    void undo(std::size_t mark)
    {
        while (trail_.size() > mark) {
            auto [v, r] = trail_.back();
            trail_.pop_back();
            --used_[index(v)][assignment_[index(v)][r]];
            assignment_[index(v)][r] = kUnset;
        }
    }

    template<typename OnSolution>
    void search(const std::vector<std::pair<VertexId, RowIndex>> &order, std::size_t pos, OnSolution &on_solution)
    {
        while (pos < order.size() and assignment_[index(order[pos].first)][order[pos].second] != kUnset) ++pos;
        if (pos == order.size()) {
            if (not on_solution()) stop_ = true;
            return;
        }
        auto [v, r] = order[pos];
        for (RowIndex image = 0; image < tgt_.row_count(v) and not stop_; ++image) {
            std::size_t mark = trail_.size();
            if (assign(v, r, image)) search(order, pos + 1, on_solution);
            undo(mark);
        }
    }
};

inline std::vector<std::pair<VertexId, RowIndex>> flatten(
    const std::vector<std::vector<std::pair<VertexId, RowIndex>>> &comps)
{
    std::vector<std::pair<VertexId, RowIndex>> out;
    for (const auto &c : comps) out.insert(out.end(), c.begin(), c.end());
    return out;
}

}

/// Restricts morphism search: `allowed(v, source_row, target_row)`.
using MorphismFilter = std::function<bool(VertexId, RowIndex, RowIndex)>;

/// Calls `visit` with every natural transformation `source -> target`; `visit` returns false to stop.
inline void enumerate_morphisms(const Instance &source, const Instance &target,
                                const std::function<bool(const InstanceMorphism&)> &visit,
                                const MorphismFilter &allowed = {})
{
    detail::MorphismSearch search(source, target, false, allowed);
    auto order = detail::flatten(search.components());
    auto src = std::make_shared<const Instance>(source);
    auto tgt = std::make_shared<const Instance>(target);
    search.run(order, [&] { return visit(InstanceMorphism(src, tgt, search.assignment())); });
}

/// Number of natural transformations `source -> target`, or nullopt once it exceeds `cap`.
inline std::optional<std::uint64_t> count_morphisms(const Instance &source, const Instance &target,
                                                    std::uint64_t cap = std::numeric_limits<std::uint64_t>::max(),
                                                    const MorphismFilter &allowed = {})
{
    detail::MorphismSearch search(source, target, false, allowed);
    std::uint64_t total = 1;
    for (const auto &comp : search.components()) {
        std::uint64_t n = 0;
        bool over = false;
        search.run(comp, [&] {
            if (++n > cap) { over = true; return false; }
            return true;
        });
        if (over) return std::nullopt;
        if (n == 0) return 0;
        if (total > cap / n) return std::nullopt;
        total *= n;
    }
    return total;
}

/// A natural bijection `a -> b`, if one exists.
inline std::optional<InstanceMorphism> find_isomorphism(const Instance &a, const Instance &b,
                                                        const MorphismFilter &allowed = {})
{
    if (a.schema() != b.schema()) return std::nullopt;
    for (std::size_t v = 0; v < a.graph().vertex_count(); ++v)
        if (a.row_count(vertex_id(v)) != b.row_count(vertex_id(v))) return std::nullopt;
    detail::MorphismSearch search(a, b, true, allowed);
    auto order = detail::flatten(search.components());
    std::optional<std::vector<std::vector<RowIndex>>> found;
    search.run(order, [&] {
        found = search.assignment();
        return false;
    });
    if (not found) return std::nullopt;
    return InstanceMorphism(a, b, std::move(*found));
}

inline bool isomorphic(const Instance &a, const Instance &b) { return find_isomorphism(a, b).has_value(); }

/// Pointwise pullback of `f: A -> I <- B: g` with its two projections.
struct FiberProduct
{
    Instance apex;
    InstanceMorphism to_left;
    InstanceMorphism to_right;
};

inline FiberProduct instance_fiber_product(const InstanceMorphism &f, const InstanceMorphism &g)
{
    if (f.target() != g.target())
        throw SchemaMismatch("fiber product needs morphisms into the same instance");
    const Graph &gr = f.graph();
    const Instance &A = f.source();
    const Instance &B = g.source();
    InstanceBuilder b(f.source().schema_ptr());
    std::vector<std::vector<std::pair<RowIndex, RowIndex>>> pairs(gr.vertex_count());
    std::vector<std::map<std::pair<RowIndex, RowIndex>, RowIndex>> lookup(gr.vertex_count());
    for (std::size_t v = 0; v < gr.vertex_count(); ++v) {
        VertexId vid = vertex_id(v);
        for (RowIndex x = 0; x < A.row_count(vid); ++x)
            for (RowIndex y = 0; y < B.row_count(vid); ++y)
                if (f(vid, x) == g(vid, y)) {
                    lookup[v][{x, y}] = b.add_row(vid, "(" + A.row(vid, x) + "," + B.row(vid, y) + ")");
                    pairs[v].push_back({x, y});
                }
    }
    for (std::size_t ai = 0; ai < gr.arrow_count(); ++ai) {
        ArrowId a = arrow_id(ai);
        std::size_t v = index(gr.source(a)), w = index(gr.target(a));
        for (RowIndex r = 0; r < pairs[v].size(); ++r) {
            auto [x, y] = pairs[v][r];
            auto it = lookup[w].find({A.value(a, x), B.value(a, y)});
            if (it == lookup[w].end())
                throw StructureError("fiber product: inputs are not natural along '" + gr.name(a) + "'");
            b.set(a, r, it->second);
        }
    }
    auto apex = std::make_shared<const Instance>(std::move(b).build());
    std::vector<std::vector<RowIndex>> left(gr.vertex_count()), right(gr.vertex_count());
    for (std::size_t v = 0; v < gr.vertex_count(); ++v)
        for (auto [x, y] : pairs[v]) {
            left[v].push_back(x);
            right[v].push_back(y);
        }
    return {*apex, InstanceMorphism(apex, f.source_ptr(), std::move(left)),
            InstanceMorphism(apex, g.source_ptr(), std::move(right))};
}

}
