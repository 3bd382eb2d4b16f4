// SPDX-License-Identifier: Apache-2.0
#pragma once

/*! \file
 *  \brief Typed instances (objects of the slice over a typing instance) and the type-change functors.
 *
 *  A typed instance is just an instance morphism `τ: I -> P`.  Σ̂ post-composes, Δ̂ pulls back pointwise, and
 *  Π̂ is the dependent product: a row over `q ∈ Q(v)` is a section of `I` over the part of `P` that `k` sends
 *  into the representable at `(v, q)`.
 */

#include <catmig/pi.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace catmig {

class TypedInstance
{
    InstanceMorphism tau_;

    public:
    TypedInstance() = default;
    explicit TypedInstance(InstanceMorphism tau) : tau_(std::move(tau)) { }

    const Instance & instance() const { return tau_.source(); }
    const Instance & typing() const { return tau_.target(); }
    const InstanceMorphism & tau() const { return tau_; }

    bool operator==(const TypedInstance &other) const { return tau_ == other.tau_; }
};

/// `(B, V, G)`: a bridge schema, the value sets over it given extensionally, and its attachment `G: B -> C`.
struct TypingAuxiliary
{
    SchemaPtr bridge;
    Instance values;
    Translation attachment;
};

inline Instance implied_typing_instance(const TypingAuxiliary &aux, const MigrationOptions &opts = {})
{
    if (aux.values.schema() != *aux.bridge or aux.attachment.source() != *aux.bridge)
        throw SchemaMismatch("typing auxiliary: values and attachment must be on the bridge schema");
    return pi(aux.attachment, aux.values, opts);
}

inline NaturalityReport validate_typed(const TypedInstance &t) { return check_naturality(t.tau()); }

namespace detail {

inline void require_typed_over(const TypedInstance &t, const Instance &P, const char *what)
{
    if (t.typing() != P)
        throw SchemaMismatch(std::string(what) + ": typed instance is not typed over the source of k");
}

}

/// Σ̂_k: same instance, typing `k ∘ τ`.
inline TypedInstance typechange_sigma(const InstanceMorphism &k, const TypedInstance &t)
{
    detail::require_typed_over(t, k.source(), "typechange_sigma");
    return TypedInstance(compose(t.tau(), k));
}

/// Δ̂_k: the pointwise fiber product `I ×_Q P`, typed by its projection to `P`.
inline TypedInstance typechange_delta(const InstanceMorphism &k, const TypedInstance &t)
{
    detail::require_typed_over(t, k.target(), "typechange_delta");
    const Instance &I = t.instance();
    const Instance &P = k.source();
    const Graph &g = I.graph();
    const bool injective = k.is_injective();
    InstanceBuilder b(I.schema_ptr());
    std::vector<std::vector<std::pair<RowIndex, RowIndex>>> pairs(g.vertex_count());
    std::vector<std::map<std::pair<RowIndex, RowIndex>, RowIndex>> row_of(g.vertex_count());
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        VertexId vid = vertex_id(v);
        for (RowIndex i = 0; i < I.row_count(vid); ++i)
            for (RowIndex p = 0; p < P.row_count(vid); ++p) {
                if (t.tau()(vid, i) != k(vid, p)) continue;
                std::string id = injective ? I.row(vid, i) : "(" + I.row(vid, i) + "," + P.row(vid, p) + ")";
                row_of[v][{i, p}] = b.add_row(vid, std::move(id));
                pairs[v].push_back({i, p});
            }
    }
    for (std::size_t ai = 0; ai < g.arrow_count(); ++ai) {
        ArrowId a = arrow_id(ai);
        std::size_t v = index(g.source(a)), w = index(g.target(a));
        for (RowIndex r = 0; r < pairs[v].size(); ++r) {
            auto [i, p] = pairs[v][r];
            auto it = row_of[w].find({I.value(a, i), P.value(a, p)});
            if (it == row_of[w].end())
                throw StructureError("typechange_delta: typing is not natural along '" + g.name(a) + "'");
            b.set(a, r, it->second);
        }
    }
    auto out = std::make_shared<const Instance>(std::move(b).build());
    std::vector<std::vector<RowIndex>> proj(g.vertex_count());
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        for (auto [i, p] : pairs[v]) proj[v].push_back(p);
    return TypedInstance(InstanceMorphism(out, k.source_ptr(), std::move(proj)));
}

/// Π̂_k: dependent product along `k`.
///
/// For `v` and `q ∈ Q(v)`, the entries are pairs `(u, p)` with `u: v -> w` a path class of C and `p ∈ P(w)` with
/// `k(p) = Q(u)(q)`.  A row chooses `s(u, p) ∈ τ⁻¹(p)` for every entry, compatibly along C's arrows.  Row-ids list
/// the choices at the trivial path in `P`-order, e.g. `(a,b)`.
inline TypedInstance typechange_pi(const InstanceMorphism &k, const TypedInstance &t, const MigrationOptions &opts = {})
{
    detail::require_typed_over(t, k.source(), "typechange_pi");
    const Instance &I = t.instance();
    const Instance &P = k.source();
    const Instance &Q = k.target();
    const Graph &g = I.graph();
    const std::size_t cap = opts.saturation_bound;
    CommaCategories classes(identity_translation(I.schema_ptr()), opts);

    struct Entry
    {
        std::size_t object;  // (w, u) in (v ↓ id)
        RowIndex p;
    };
    struct Over
    {
        std::vector<Entry> entries;
        std::map<std::pair<std::size_t, RowIndex>, std::size_t> index;
        std::vector<std::vector<RowIndex>> sections;
        RowIndex q;
    };
    // per vertex, per q
    std::vector<std::vector<Over>> over(g.vertex_count());
    std::vector<std::vector<std::pair<std::size_t, RowIndex>>> rows(g.vertex_count());  // (q, section#)
    std::vector<std::map<std::pair<RowIndex, std::vector<RowIndex>>, RowIndex>> row_of(g.vertex_count());

    InstanceBuilder b(I.schema_ptr());
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        const auto &cat = classes.at(vertex_id(v));
        for (RowIndex q = 0; q < Q.row_count(vertex_id(v)); ++q) {
            Over o;
            o.q = q;
            for (std::size_t ob = 0; ob < cat.objects.size(); ++ob) {
                auto [w, cls] = cat.objects[ob];
                RowIndex qw = evaluate_path(Q, cat.classes[cls], q);
                for (RowIndex p = 0; p < P.row_count(w); ++p)
                    if (k(w, p) == qw) {
                        o.index[{ob, p}] = o.entries.size();
                        o.entries.push_back({ob, p});
                    }
            }
            std::vector<std::vector<RowIndex>> candidates;
            for (const auto &e : o.entries) {
                VertexId w = cat.objects[e.object].c;
                candidates.emplace_back();
                for (RowIndex i = 0; i < I.row_count(w); ++i)
                    if (t.tau()(w, i) == e.p) candidates.back().push_back(i);
            }
            std::vector<detail::FamilyMorphism> morphisms;
            for (const auto &m : cat.morphisms)
                for (std::size_t e = 0; e < o.entries.size(); ++e) {
                    if (o.entries[e].object != m.from) continue;
                    auto to = o.index.find({m.to, P.value(m.arrow, o.entries[e].p)});
                    if (to == o.index.end())
                        throw StructureError("typechange_pi: k is not natural along '" + g.name(m.arrow) + "'");
                    morphisms.push_back({e, to->second, m.arrow});
                }
            o.sections = detail::compatible_families(candidates, morphisms, I, cap, g.name(vertex_id(v)));
            over[v].push_back(std::move(o));
        }

        // ids: the choices at the trivial path; disambiguated by q, then by the full section
        auto short_id = [&](const Over &o, const std::vector<RowIndex> &s) {
            std::string id = "(";
            bool first = true;
            for (std::size_t e = 0; e < o.entries.size(); ++e) {
                if (cat.objects[o.entries[e].object].cls != 0) continue;
                id += (first ? "" : ",") + I.row(vertex_id(v), s[e]);
                first = false;
            }
            return id + ")";
        };
        auto full_id = [&](const Over &o, const std::vector<RowIndex> &s) {
            std::string id = "(";
            for (std::size_t e = 0; e < o.entries.size(); ++e) {
                const auto &obj = cat.objects[o.entries[e].object];
                id += (e ? "," : "") + path_to_string(g, cat.classes[obj.cls]) + ":" + P.row(obj.c, o.entries[e].p) +
                      "=" + I.row(obj.c, s[e]);
            }
            return id + ")@" + Q.row(vertex_id(v), o.q);
        };
        std::map<std::string, std::size_t> uses;
        for (const auto &o : over[v])
            for (const auto &s : o.sections) ++uses[short_id(o, s)];
        std::map<std::string, std::size_t> uses_q;
        for (const auto &o : over[v])
            for (const auto &s : o.sections) {
                std::string id = short_id(o, s);
                if (uses[id] > 1) ++uses_q[id + "@" + Q.row(vertex_id(v), o.q)];
            }
        for (std::size_t qi = 0; qi < over[v].size(); ++qi) {
            const auto &o = over[v][qi];
            for (std::size_t si = 0; si < o.sections.size(); ++si) {
                const auto &s = o.sections[si];
                std::string id = short_id(o, s);
                if (uses[id] > 1) {
                    id += "@" + Q.row(vertex_id(v), o.q);
                    if (uses_q[id] > 1) id = full_id(o, s);
                }
                RowIndex r = b.add_row(vertex_id(v), std::move(id));
                rows[v].push_back({qi, si});
                row_of[v][{o.q, s}] = r;
            }
        }
    }

    // a: v -> v' sends (q, s) to (Q(a)(q), s') with s'(u', p) = s(a.u', p)
    for (std::size_t ai = 0; ai < g.arrow_count(); ++ai) {
        ArrowId a = arrow_id(ai);
        std::size_t v = index(g.source(a)), v2 = index(g.target(a));
        const auto &cat2 = classes.at(vertex_id(v2));
        for (RowIndex r = 0; r < rows[v].size(); ++r) {
            auto [qi, si] = rows[v][r];
            const Over &o = over[v][qi];
            RowIndex q2 = Q.value(a, o.q);
            const Over &o2 = over[v2][q2];
            std::vector<RowIndex> s2(o2.entries.size());
            for (std::size_t e = 0; e < o2.entries.size(); ++e) {
                const auto &obj = cat2.objects[o2.entries[e].object];
                Path u(vertex_id(v), {a});
                u.arrows.insert(u.arrows.end(), cat2.classes[obj.cls].arrows.begin(), cat2.classes[obj.cls].arrows.end());
                auto cls = classes.class_of(u);
                if (not cls)
                    throw BoundError(g.name(vertex_id(v)), "cannot identify the path class of " + path_to_string(g, u));
                auto ob = classes.at(vertex_id(v)).object(obj.c, *cls);
                s2[e] = o.sections[si][o.index.at({*ob, o2.entries[e].p})];
            }
            auto it = row_of[v2].find({q2, s2});
            if (it == row_of[v2].end())
                throw StructureError("typechange_pi: restriction along '" + g.name(a) + "' is not a section");
            b.set(a, r, it->second);
        }
    }

    auto out = std::make_shared<const Instance>(std::move(b).build());
    std::vector<std::vector<RowIndex>> typing(g.vertex_count());
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        for (auto [qi, si] : rows[v]) typing[v].push_back(over[v][qi].q);
    return TypedInstance(InstanceMorphism(out, k.target_ptr(), std::move(typing)));
}

/// Morphisms `t -> u` over their common typing instance.
inline std::optional<std::uint64_t> count_slice_morphisms(const TypedInstance &t, const TypedInstance &u,
                                                          std::uint64_t cap = std::numeric_limits<std::uint64_t>::max())
{
    if (t.typing() != u.typing())
        throw SchemaMismatch("slice morphisms need instances typed over the same instance");
    return count_morphisms(t.instance(), u.instance(), cap, [&](VertexId v, RowIndex from, RowIndex to) {
        return t.tau()(v, from) == u.tau()(v, to);
    });
}

}
