// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <catmig/morphism.hpp>
#include <catmig/translation.hpp>

namespace catmig {

inline void require_on(const Instance &inst, const Schema &schema, const char *what)
{
    if (inst.schema() != schema)
        throw SchemaMismatch(std::string(what) + ": instance is on '" + inst.schema().name() + "', expected '" +
                             schema.name() + "'");
}

/// Pullback along `F: C -> D`.  Row-ids are copied from `J` unchanged.
inline Instance delta(const Translation &F, const Instance &J)
{
    require_on(J, F.target(), "delta");
    require_endpoints(F);
    const Graph &c = F.source().graph();
    InstanceBuilder b(F.source_ptr());
    for (std::size_t v = 0; v < c.vertex_count(); ++v)
        for (const auto &row : J.rows(F(vertex_id(v))))
            b.add_row(vertex_id(v), row);
    for (std::size_t ai = 0; ai < c.arrow_count(); ++ai) {
        ArrowId a = arrow_id(ai);
        const Path &p = F(a);
        for (RowIndex r = 0; r < J.row_count(p.source); ++r)
            b.set(a, r, evaluate_path(J, p, r));
    }
    return std::move(b).build();
}

/// Whiskering: the component at `v` is `m`'s component at `F(v)`.
inline InstanceMorphism delta_on_morphism(const Translation &F, const InstanceMorphism &m)
{
    auto src = std::make_shared<const Instance>(delta(F, m.source()));
    auto tgt = std::make_shared<const Instance>(delta(F, m.target()));
    std::vector<std::vector<RowIndex>> comps;
    for (VertexId v : F.vertex_map()) comps.push_back(m.component(v));
    return InstanceMorphism(std::move(src), std::move(tgt), std::move(comps));
}

}
