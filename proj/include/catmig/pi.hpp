// SPDX-License-Identifier: Apache-2.0
#pragma once

/*! \file
 *  \brief Right pushforward: limits over the comma categories `(d ↓ F)`.
 *
 *  For each target vertex `d` the ≃-classes of paths out of `d` are enumerated breadth first by extending class
 *  representatives one arrow at a time.  Enumeration is pruned to vertices that can still reach the image of
 *  `F`, and must close within `path_bound`; a class first seen at `path_bound + 1` means the comma category is
 *  not exhausted and the migration fails rather than truncating.
 */

#include <catmig/delta.hpp>

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace catmig {

struct MigrationOptions
{
    std::size_t path_bound = 16;         ///< Π: longest path representative explored in a comma category
    std::size_t saturation_bound = 1000; ///< Σ live elements, Π rows per table and path classes per vertex
    RewriteOptions rewrite{};
};

/// Things a migration had to assume or that the caller may want to see in a report.
struct MigrationLog
{
    std::vector<std::string> unverified;       ///< comma-category triangles that could not be proved to commute
    std::vector<std::size_t> element_counts;   ///< Σ: live elements after each saturation round
};

/// Objects and morphisms of `(d ↓ F)`.  Objects are `(c, class)` with the class's representative ending at `F(c)`.
struct CommaCategory
{
    struct Object
    {
        VertexId c;
        std::size_t cls;
    };

    struct Morphism
    {
        std::size_t from;
        std::size_t to;
        ArrowId arrow;  // a C-arrow
    };

    VertexId d;
    std::vector<Path> classes;  // representatives; classes[0] is the trivial path
    std::vector<Object> objects;
    std::vector<Morphism> morphisms;
    std::map<std::pair<VertexId, std::size_t>, std::size_t> object_index;

    std::optional<std::size_t> object(VertexId c, std::size_t cls) const
    {
        if (auto it = object_index.find({c, cls}); it != object_index.end()) return it->second;
        return std::nullopt;
    }
};

/// All comma categories of a translation, plus a cached class lookup for arbitrary paths.
class CommaCategories
{
    std::shared_ptr<const Translation> F_;
    MigrationOptions opts_;
    std::vector<CommaCategory> cats_;
    std::vector<bool> useful_;
    mutable PathEquivalenceOracle oracle_;
    mutable std::map<Path, std::optional<std::size_t>> lookup_;

    public:
    CommaCategories(const Translation &F, const MigrationOptions &opts = {}, MigrationLog *log = nullptr)
        : F_(std::make_shared<const Translation>(F))
        , opts_(opts)
        , oracle_(F_->target(), opts.rewrite)
    {
        require_endpoints(*F_);
        const Graph &dg = F_->target().graph();
        compute_useful();
        for (std::size_t d = 0; d < dg.vertex_count(); ++d) cats_.push_back(enumerate(vertex_id(d), log));
    }

    const Translation & translation() const { return *F_; }
    const CommaCategory & at(VertexId d) const { return cats_.at(index(d)); }
    const MigrationOptions & options() const { return opts_; }

    /// Class of `p` among the representatives at `p.source`, or nullopt if no equivalence could be proved.
    std::optional<std::size_t> class_of(const Path &p) const
    {
        if (auto it = lookup_.find(p); it != lookup_.end()) return it->second;
        std::optional<std::size_t> found;
        if (index(p.source) < cats_.size()) found = find_in(cats_[index(p.source)].classes, p);
        lookup_.emplace(p, found);
        return found;
    }

    private:
    std::optional<std::size_t> find_in(const std::vector<Path> &classes, const Path &p) const
    {
        const Graph &dg = F_->target().graph();
        VertexId t = target(dg, p);
        for (std::size_t k = 0; k < classes.size(); ++k)
            if (classes[k] == p) return k;
        for (std::size_t k = 0; k < classes.size(); ++k)
            if (target(dg, classes[k]) == t and oracle_.equivalent(classes[k], p)) return k;
        return std::nullopt;
    }

    // Vertices from which some vertex in the image of F is reachable.
    void compute_useful()
    {
        const Graph &dg = F_->target().graph();
        useful_.assign(dg.vertex_count(), false);
        std::vector<VertexId> stack;
        for (VertexId v : F_->vertex_map())
            if (not useful_[index(v)]) useful_[index(v)] = true, stack.push_back(v);
        while (not stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            for (const auto &a : dg.arrows())
                if (a.target == v and not useful_[index(a.source)]) {
                    useful_[index(a.source)] = true;
                    stack.push_back(a.source);
                }
        }
    }

    CommaCategory enumerate(VertexId d, MigrationLog *log)
    {
        const Graph &dg = F_->target().graph();
        const Graph &cg = F_->source().graph();
        CommaCategory cat;
        cat.d = d;
        if (not useful_[index(d)]) return cat;
        cat.classes.push_back(Path(d));
        for (std::size_t i = 0; i < cat.classes.size(); ++i) {
            Path p = cat.classes[i];
            for (ArrowId g : dg.outgoing(target(dg, p))) {
                if (not useful_[index(dg.target(g))]) continue;
                Path q = p;
                q.arrows.push_back(g);
                if (find_in(cat.classes, q)) continue;
                if (q.length() > opts_.path_bound)
                    throw BoundError(dg.name(d), "comma category at '" + dg.name(d) + "' is not exhausted by paths of length " +
                                                     std::to_string(opts_.path_bound) + " (new class " +
                                                     path_to_string(dg, q) + ")");
                if (cat.classes.size() >= opts_.saturation_bound)
                    throw BoundError(dg.name(d), "comma category at '" + dg.name(d) + "' has more than " +
                                                     std::to_string(opts_.saturation_bound) + " path classes");
                cat.classes.push_back(std::move(q));
            }
        }
        for (std::size_t k = 0; k < cat.classes.size(); ++k) {
            VertexId t = target(dg, cat.classes[k]);
            for (std::size_t c = 0; c < cg.vertex_count(); ++c)
                if ((*F_)(vertex_id(c)) == t) {
                    cat.object_index[{vertex_id(c), k}] = cat.objects.size();
                    cat.objects.push_back({vertex_id(c), k});
                }
        }
        for (std::size_t o = 0; o < cat.objects.size(); ++o) {
            auto [c, k] = cat.objects[o];
            for (ArrowId a : cg.outgoing(c)) {
                Path q = compose_paths(dg, cat.classes[k], (*F_)(a));
                auto k2 = find_in(cat.classes, q);
                if (not k2) {
                    if (log)
                        log->unverified.push_back("(" + dg.name(d) + " ↓ F): " + path_to_string(dg, q) +
                                                  " matched no path class; no morphism along " + cg.name(a));
                    continue;
                }
                cat.morphisms.push_back({o, *cat.object(cg.target(a), *k2), a});
            }
        }
        lookup_.clear();
        return cat;
    }
};

namespace detail {

struct FamilyMorphism
{
    std::size_t from;
    std::size_t to;
    ArrowId arrow;
};

/// Backtracking over assignments `object -> candidate row` with `I(arrow)(x[from]) = x[to]` for every morphism.
inline std::vector<std::vector<RowIndex>> compatible_families(const std::vector<std::vector<RowIndex>> &candidates,
                                                              const std::vector<FamilyMorphism> &morphisms,
                                                              const Instance &I, std::size_t cap,
                                                              const std::string &vertex)
{
    constexpr RowIndex unset = std::numeric_limits<RowIndex>::max();
    std::size_t n = candidates.size();
    std::vector<std::vector<bool>> allowed(n);
    std::vector<std::vector<std::pair<ArrowId, std::size_t>>> out(n), in(n);
    for (std::size_t o = 0; o < n; ++o)
        for (RowIndex r : candidates[o]) {
            if (allowed[o].size() <= r) allowed[o].resize(r + 1, false);
            allowed[o][r] = true;
        }
    for (const auto &m : morphisms) {
        out[m.from].push_back({m.arrow, m.to});
        in[m.to].push_back({m.arrow, m.from});
    }
    std::vector<RowIndex> x(n, unset);
    std::vector<std::vector<RowIndex>> families;

    auto consistent = [&](std::size_t o, RowIndex v) {
        for (auto [a, o2] : out[o])
            if (x[o2] != unset and I.value(a, v) != x[o2]) return false;
        for (auto [a, o1] : in[o])
            if (x[o1] != unset and I.value(a, x[o1]) != v) return false;
        return true;
    };

    auto rec = [&](auto &self, std::size_t assigned) -> void {
        if (assigned == n) {
            if (families.size() >= cap)
                throw BoundError(vertex, "right pushforward at '" + vertex + "' has more than " +
                                             std::to_string(cap) + " rows");
            families.push_back(x);
            return;
        }
        // prefer an object whose value is forced by an assigned neighbour
        std::optional<std::pair<std::size_t, RowIndex>> forced;
        std::size_t first_free = n;
        for (std::size_t o = 0; o < n and not forced; ++o) {
            if (x[o] != unset) continue;
            if (first_free == n) first_free = o;
            for (auto [a, o1] : in[o])
                if (x[o1] != unset) {
                    forced = {o, I.value(a, x[o1])};
                    break;
                }
        }
        if (forced) {
            auto [o, v] = *forced;
            if (v >= allowed[o].size() or not allowed[o][v] or not consistent(o, v)) return;
            x[o] = v;
            self(self, assigned + 1);
            x[o] = unset;
            return;
        }
        std::size_t o = first_free;
        for (RowIndex v : candidates[o]) {
            if (not consistent(o, v)) continue;
            x[o] = v;
            self(self, assigned + 1);
            x[o] = unset;
        }
    };
    rec(rec, 0);
    return families;
}

/// Compatible families over one comma category, in backtracking order.
inline std::vector<std::vector<RowIndex>> compatible_families(const CommaCategory &cat, const Instance &I,
                                                              std::size_t cap, const std::string &vertex)
{
    std::vector<std::vector<RowIndex>> candidates;
    for (const auto &o : cat.objects) {
        candidates.emplace_back(I.row_count(o.c));
        std::iota(candidates.back().begin(), candidates.back().end(), RowIndex{0});
    }
    std::vector<FamilyMorphism> morphisms;
    for (const auto &m : cat.morphisms) morphisms.push_back({m.from, m.to, m.arrow});
    return compatible_families(candidates, morphisms, I, cap, vertex);
}

}

/// `Π_F I` together with the data needed for units, counits and functoriality.
struct PiResult
{
    std::shared_ptr<const CommaCategories> comma;
    Instance instance;
    std::vector<std::vector<std::vector<RowIndex>>> families;  // per D-vertex, per row: a value per comma object
    std::vector<std::map<std::vector<RowIndex>, RowIndex>> row_of;

    std::optional<RowIndex> find(VertexId d, const std::vector<RowIndex> &family) const
    {
        const auto &m = row_of.at(index(d));
        if (auto it = m.find(family); it != m.end()) return it->second;
        return std::nullopt;
    }
};

namespace detail {

inline std::vector<std::string> pi_row_ids(const CommaCategory &cat, const std::vector<std::vector<RowIndex>> &families,
                                           const Instance &I, const Graph &dg)
{
    const Graph &cg = I.graph();
    std::vector<std::size_t> trivial, all;
    for (std::size_t o = 0; o < cat.objects.size(); ++o) {
        all.push_back(o);
        if (cat.objects[o].cls == 0) trivial.push_back(o);
    }
    auto project = [&](const std::vector<RowIndex> &fam, const std::vector<std::size_t> &objs) {
        std::vector<RowIndex> key;
        for (auto o : objs) key.push_back(fam[o]);
        return key;
    };
    bool use_trivial = not trivial.empty();
    if (use_trivial) {
        std::set<std::vector<RowIndex>> seen;
        for (const auto &fam : families)
            if (not seen.insert(project(fam, trivial)).second) { use_trivial = false; break; }
    }
    const auto &objs = use_trivial ? trivial : all;
    std::vector<std::size_t> uses(cg.vertex_count(), 0);
    for (auto o : objs) ++uses[index(cat.objects[o].c)];
    std::vector<bool> repeated(cg.vertex_count());
    for (std::size_t c = 0; c < uses.size(); ++c) repeated[c] = uses[c] > 1;

    std::vector<std::string> ids;
    std::map<std::string, std::size_t> used;
    for (const auto &fam : families) {
        std::string id;
        if (objs.empty()) id = "*";
        else if (objs.size() == 1) id = I.row(cat.objects[objs[0]].c, fam[objs[0]]);
        else {
            std::vector<std::string> parts;
            for (auto o : objs) {
                auto [c, k] = cat.objects[o];
                std::string key = cg.name(c);
                if (repeated[index(c)]) key += "@" + path_to_string(dg, cat.classes[k]);
                parts.push_back(key + "=" + I.row(c, fam[o]));
            }
            std::sort(parts.begin(), parts.end());
            for (std::size_t i = 0; i < parts.size(); ++i) id += (i ? ";" : "") + parts[i];
        }
        if (std::size_t n = used[id]++; n > 0) id += "#" + std::to_string(n);
        ids.push_back(std::move(id));
    }
    return ids;
}

}

inline PiResult pi_detailed(std::shared_ptr<const CommaCategories> comma, const Instance &I)
{
    const Translation &F = comma->translation();
    require_on(I, F.source(), "pi");
    const Graph &dg = F.target().graph();
    const std::size_t cap = comma->options().saturation_bound;
    PiResult res;
    res.comma = comma;
    res.families.resize(dg.vertex_count());
    res.row_of.resize(dg.vertex_count());
    InstanceBuilder b(F.target_ptr());
    for (std::size_t d = 0; d < dg.vertex_count(); ++d) {
        const auto &cat = comma->at(vertex_id(d));
        // a vertex that cannot reach the image of F is a limit over the empty diagram
        res.families[d] = detail::compatible_families(cat, I, cap, dg.name(vertex_id(d)));
        auto ids = detail::pi_row_ids(cat, res.families[d], I, dg);
        for (std::size_t r = 0; r < ids.size(); ++r) {
            b.add_row(vertex_id(d), ids[r]);
            res.row_of[d].emplace(res.families[d][r], r);
        }
    }
    // g: d -> d' acts by restriction: the component at (c, [q]) of d' is the component at (c, [g.q]) of d.
    for (std::size_t gi = 0; gi < dg.arrow_count(); ++gi) {
        ArrowId g = arrow_id(gi);
        VertexId d = dg.source(g), d2 = dg.target(g);
        const auto &src = comma->at(d);
        const auto &tgt = comma->at(d2);
        std::vector<std::size_t> pick(tgt.objects.size());
        for (std::size_t o = 0; o < tgt.objects.size(); ++o) {
            auto [c, k] = tgt.objects[o];
            Path q(d, {g});
            q.arrows.insert(q.arrows.end(), tgt.classes[k].arrows.begin(), tgt.classes[k].arrows.end());
            auto k2 = comma->class_of(q);
            if (not k2)
                throw BoundError(dg.name(d), "cannot identify the path class of " + path_to_string(dg, q) +
                                                 " within the rewrite budget");
            pick[o] = *src.object(c, *k2);
        }
        for (RowIndex r = 0; r < res.families[index(d)].size(); ++r) {
            const auto &fam = res.families[index(d)][r];
            std::vector<RowIndex> image;
            for (auto o : pick) image.push_back(fam[o]);
            auto row = res.find(d2, image);
            if (not row)
                throw StructureError("right pushforward: restriction along '" + dg.name(g) +
                                     "' left the compatible families");
            b.set(g, r, *row);
        }
    }
    res.instance = std::move(b).build();
    return res;
}

inline PiResult pi_detailed(const Translation &F, const Instance &I, const MigrationOptions &opts = {},
                            MigrationLog *log = nullptr)
{
    return pi_detailed(std::make_shared<const CommaCategories>(F, opts, log), I);
}

inline Instance pi(const Translation &F, const Instance &I, const MigrationOptions &opts = {}, MigrationLog *log = nullptr)
{
    return pi_detailed(F, I, opts, log).instance;
}

/// `Π_F m` for `m: I -> I'`: families are mapped componentwise.
inline InstanceMorphism pi_on_morphism(const PiResult &source, const PiResult &target, const InstanceMorphism &m)
{
    const CommaCategories &comma = *source.comma;
    const Graph &dg = comma.translation().target().graph();
    std::vector<std::vector<RowIndex>> comps(dg.vertex_count());
    for (std::size_t d = 0; d < dg.vertex_count(); ++d) {
        const auto &cat = comma.at(vertex_id(d));
        for (const auto &fam : source.families[d]) {
            std::vector<RowIndex> image(fam.size());
            for (std::size_t o = 0; o < fam.size(); ++o) image[o] = m(cat.objects[o].c, fam[o]);
            auto row = target.find(vertex_id(d), image);
            if (not row) throw StructureError("pi_on_morphism: image is not a compatible family; is m natural?");
            comps[d].push_back(*row);
        }
    }
    return InstanceMorphism(std::make_shared<const Instance>(source.instance),
                            std::make_shared<const Instance>(target.instance), std::move(comps));
}

inline InstanceMorphism pi_on_morphism(const Translation &F, const InstanceMorphism &m, const MigrationOptions &opts = {})
{
    auto comma = std::make_shared<const CommaCategories>(F, opts);
    return pi_on_morphism(pi_detailed(comma, m.source()), pi_detailed(comma, m.target()), m);
}

}
