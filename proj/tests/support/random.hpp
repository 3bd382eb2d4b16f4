// SPDX-License-Identifier: Apache-2.0
#pragma once

// Random schemas, instances and translations for the property tests. Everything is
// driven by an explicit seed so a failing case can be replayed from its number.

#include "oracles.hpp"

#include <catmig/catmig.hpp>

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace catmig::testing {

using Rng = std::mt19937_64;

struct SchemaShape
{
    std::size_t max_vertices = 4;
    std::size_t max_arrows = 5;
    std::size_t max_equations = 2;
    bool acyclic = true;
    std::size_t equation_length = 3;  // longest side of a generated equation
};

inline std::size_t uniform(Rng &rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

template<typename T>
const T & pick(Rng &rng, const std::vector<T> &xs)
{
    return xs[uniform(rng, 0, xs.size() - 1)];
}

/// Two distinct parallel paths out of a random vertex, or nothing if the graph has none.
inline std::optional<std::pair<Path, Path>> random_parallel_pair(Rng &rng, const Graph &g, std::size_t max_len)
{
    for (int attempt = 0; attempt < 20; ++attempt) {
        VertexId v = vertex_id(uniform(rng, 0, g.vertex_count() - 1));
        auto paths = oracle::paths_from(g, v, max_len);
        Path p = pick(rng, paths);
        std::vector<Path> same;
        for (const auto &q : paths)
            if (q != p and target(g, q) == target(g, p)) same.push_back(q);
        if (not same.empty()) return std::pair{p, pick(rng, same)};
    }
    return std::nullopt;
}

/// Vertex names `<prefix>0..`, arrow names `<prefix>a0..`. Acyclic shapes only draw arrows
/// from lower to higher vertex numbers.
inline SchemaPtr random_schema(Rng &rng, const SchemaShape &shape, const std::string &prefix = "V")
{
    Graph g;
    std::size_t nv = uniform(rng, 1, shape.max_vertices);
    for (std::size_t v = 0; v < nv; ++v) g.add_vertex(prefix + std::to_string(v));
    std::size_t na = uniform(rng, 0, shape.max_arrows);
    for (std::size_t a = 0; a < na; ++a) {
        std::size_t s = uniform(rng, 0, nv - 1), t = uniform(rng, 0, nv - 1);
        if (shape.acyclic) {
            if (nv < 2) break;
            s = uniform(rng, 0, nv - 2);
            t = uniform(rng, s + 1, nv - 1);
        }
        g.add_arrow(prefix + "a" + std::to_string(a), vertex_id(s), vertex_id(t));
    }
    auto s = std::make_shared<Schema>(prefix, g);
    std::size_t ne = uniform(rng, 0, shape.max_equations);
    for (std::size_t e = 0; e < ne; ++e)
        if (auto pq = random_parallel_pair(rng, g, shape.equation_length))
            s->add_equation({pq->first, pq->second});
    return s;
}

namespace detail {

inline RowIndex follow(const Graph &g, const std::vector<std::vector<RowIndex>> &cols, const Path &p, RowIndex r)
{
    for (ArrowId a : p.arrows) r = cols[index(a)][r];
    (void)g;
    return r;
}

inline Instance assemble(SchemaPtr s, const std::vector<std::size_t> &rows, const std::vector<std::vector<RowIndex>> &cols,
                         const std::string &tag)
{
    const Graph &g = s->graph();
    InstanceBuilder b(s);
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        for (std::size_t r = 0; r < rows[v]; ++r) b.add_row(vertex_id(v), tag + g.name(vertex_id(v)) + "_" + std::to_string(r));
    for (std::size_t a = 0; a < g.arrow_count(); ++a)
        for (RowIndex r = 0; r < cols[a].size(); ++r) b.set(arrow_id(a), r, cols[a][r]);
    return std::move(b).build();
}

}

/// A valid instance on an acyclic schema with at most `max_rows` rows per table. Tables are
/// filled from the sinks backwards; a row whose equations cannot be met in a few draws is dropped.
inline Instance random_instance(Rng &rng, SchemaPtr s, std::size_t max_rows, const std::string &tag = "")
{
    const Graph &g = s->graph();
    std::vector<std::size_t> rows(g.vertex_count(), 0);
    std::vector<std::vector<RowIndex>> cols(g.arrow_count());
    for (std::size_t vi = g.vertex_count(); vi-- > 0;) {
        VertexId v = vertex_id(vi);
        std::size_t want = uniform(rng, 0, max_rows);
        bool blocked = false;
        for (ArrowId a : g.outgoing(v)) blocked = blocked or rows[index(g.target(a))] == 0;
        if (blocked) want = 0;
        for (std::size_t r = 0; r < want; ++r) {
            bool placed = false;
            for (int attempt = 0; attempt < 30 and not placed; ++attempt) {
                for (ArrowId a : g.outgoing(v)) cols[index(a)].push_back(uniform(rng, 0, rows[index(g.target(a))] - 1));
                RowIndex me = rows[vi];
                placed = true;
                for (const auto &eq : s->equations())
                    if (eq.lhs.source == v)
                        placed = placed and detail::follow(g, cols, eq.lhs, me) == detail::follow(g, cols, eq.rhs, me);
                if (not placed)
                    for (ArrowId a : g.outgoing(v)) cols[index(a)].pop_back();
            }
            if (placed) ++rows[vi];
        }
    }
    return detail::assemble(s, rows, cols, tag);
}

/// Any random instance (possibly invalid) on an arbitrary schema; callers filter with validate_instance.
inline Instance random_raw_instance(Rng &rng, SchemaPtr s, std::size_t max_rows)
{
    const Graph &g = s->graph();
    std::vector<std::size_t> rows(g.vertex_count());
    for (auto &n : rows) n = uniform(rng, 1, max_rows);
    std::vector<std::vector<RowIndex>> cols(g.arrow_count());
    for (std::size_t a = 0; a < g.arrow_count(); ++a)
        for (std::size_t r = 0; r < rows[index(g.source(arrow_id(a)))]; ++r)
            cols[a].push_back(uniform(rng, 0, rows[index(g.target(arrow_id(a)))] - 1));
    return detail::assemble(s, rows, cols, "");
}

/// A random acyclic C with a translation into `D`. C's equations are kept only when the
/// oracle proves their images equivalent, so F is always a genuine translation.
inline Translation random_translation(Rng &rng, SchemaPtr D, const SchemaShape &shape)
{
    const Graph &dg = D->graph();
    oracle::PathClasses pc(*D);
    Graph g;
    std::vector<VertexId> vmap;
    std::size_t nv = uniform(rng, 1, shape.max_vertices);
    for (std::size_t v = 0; v < nv; ++v) {
        g.add_vertex("C" + std::to_string(v));
        vmap.push_back(vertex_id(uniform(rng, 0, dg.vertex_count() - 1)));
    }
    std::vector<Path> amap;
    std::size_t na = uniform(rng, 0, shape.max_arrows);
    for (std::size_t a = 0; a < na and nv > 1; ++a) {
        for (int attempt = 0; attempt < 10; ++attempt) {
            std::size_t s = uniform(rng, 0, nv - 2), t = uniform(rng, s + 1, nv - 1);
            std::vector<Path> images;
            for (auto &p : oracle::paths_from(dg, vmap[s], dg.vertex_count()))
                if (target(dg, p) == vmap[t]) images.push_back(std::move(p));
            if (images.empty()) continue;
            g.add_arrow("Ca" + std::to_string(a), vertex_id(s), vertex_id(t));
            amap.push_back(pick(rng, images));
            break;
        }
    }
    auto C = std::make_shared<Schema>("C", g);
    auto apply = [&](const Path &p) {
        Path out(vmap[index(p.source)]);
        for (ArrowId a : p.arrows) out.arrows.insert(out.arrows.end(), amap[index(a)].arrows.begin(), amap[index(a)].arrows.end());
        return out;
    };
    std::size_t ne = uniform(rng, 0, shape.max_equations);
    for (std::size_t e = 0, tries = 0; e < ne and tries < 40; ++tries) {
        auto pq = random_parallel_pair(rng, g, shape.equation_length);
        if (not pq) break;
        if (pc.equivalent(apply(pq->first), apply(pq->second))) {
            C->add_equation({pq->first, pq->second});
            ++e;
        }
    }
    return Translation(C, D, std::move(vmap), std::move(amap));
}

}
