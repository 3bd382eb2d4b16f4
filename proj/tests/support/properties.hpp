// SPDX-License-Identifier: Apache-2.0
#pragma once

// Randomized checks shared by the property tests and the acceptance runner. Each check takes
// a seed and reports the first thing that went wrong, so failures replay from the seed alone.

#include "oracles.hpp"
#include "random.hpp"

#include <catmig/catmig.hpp>

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>

namespace catmig::testing {

// Hom-sets of ≤3-row instances stay far below this; hitting it counts as a failure.
inline constexpr std::uint64_t property_hom_cap = 1'000'000'000;

inline MigrationOptions property_options()
{
    MigrationOptions o;
    // Π over three-row tables can legitimately exceed the default 1000 rows (products of
    // fibers); the point here is agreement with the oracles, not the default bound.
    o.saturation_bound = 1u << 20;
    return o;
}

struct MigrationCase
{
    SchemaPtr D;
    Translation F;
    Instance I;  // on F's source
    Instance J;  // on D
};

inline MigrationCase make_migration_case(std::uint64_t seed, std::size_t max_rows = 3)
{
    Rng rng(seed);
    SchemaShape shape;  // ≤4 vertices, ≤5 arrows, ≤2 equations, acyclic
    MigrationCase c;
    c.D = random_schema(rng, shape, "D");
    c.F = random_translation(rng, c.D, shape);
    c.I = random_instance(rng, c.F.source_ptr(), max_rows, "i");
    c.J = random_instance(rng, c.D, max_rows, "j");
    return c;
}

/// One failure message per sub-check; empty when it passed.
struct MigrationChecks
{
    std::optional<std::string> oracles;     // (a)
    std::optional<std::string> hom_counts;  // (b)
    std::optional<std::string> triangles;   // (c)
    std::optional<std::string> validity;    // (d)
    std::optional<std::string> round_trip;  // (e)

    bool ok() const { return not(oracles or hom_counts or triangles or validity or round_trip); }
};

namespace detail {

inline std::string count_text(const std::optional<std::uint64_t> &n) { return n ? std::to_string(*n) : "over cap"; }

}

inline MigrationChecks check_migration_case(const MigrationCase &c)
{
    MigrationChecks out;
    const MigrationOptions opts = property_options();
    auto guard = [](std::optional<std::string> &slot, auto &&body) {
        try {
            body();
        } catch (const std::exception &e) {
            slot = std::string("threw: ") + e.what();
        }
    };

    SigmaResult s;
    PiResult p;
    guard(out.oracles, [&] {
        s = sigma_detailed(c.F, c.I, opts);
        p = pi_detailed(c.F, c.I, opts);
        if (auto e = oracle::compare_sigma(c.F, c.I, s)) out.oracles = "sigma: " + *e;
        else if (auto e2 = oracle::compare_pi(c.F, c.I, p)) out.oracles = "pi: " + *e2;
    });
    if (out.oracles) return out;

    guard(out.hom_counts, [&] {
        auto h = count_adjunction_homs(c.F, c.I, c.J, opts, property_hom_cap);
        if (not h.sigma_pair_equal() or not h.pi_pair_equal())
            out.hom_counts = "Hom(SI,J)=" + detail::count_text(h.sigma_left) + " Hom(I,DJ)=" + detail::count_text(h.delta_right) +
                             " Hom(DJ,I)=" + detail::count_text(h.delta_left) + " Hom(J,PI)=" + detail::count_text(h.pi_right);
    });

    guard(out.triangles, [&] {
        auto w = adjunction_unit_counit(c.F, c.I, c.J, opts);
        if (not w.triangles_hold) out.triangles = w.triangle_failures.front();
    });

    guard(out.validity, [&] {
        Instance dJ = delta(c.F, c.J);
        if (not validate_instance(s.instance).ok()) out.validity = "sigma output";
        else if (not validate_instance(p.instance).ok()) out.validity = "pi output";
        else if (not validate_instance(dJ).ok()) out.validity = "delta output";
    });

    guard(out.round_trip, [&] {
        dsl::Document doc;
        doc.add(dsl::SchemaDecl{c.D});
        doc.add(dsl::SchemaDecl{c.F.source_ptr()});
        doc.add(dsl::TranslationDecl{"F", c.F});
        doc.add(dsl::InstanceDecl{"I", std::make_shared<const Instance>(c.I)});
        doc.add(dsl::InstanceDecl{"J", std::make_shared<const Instance>(c.J)});
        doc.add(dsl::InstanceDecl{"SigmaI", std::make_shared<const Instance>(s.instance)});
        doc.add(dsl::InstanceDecl{"PiI", std::make_shared<const Instance>(p.instance)});
        doc.add(dsl::MorphismDecl{"idJ", "J", "J", identity_morphism(c.J)});
        std::string text = dsl::print(doc);
        if (dsl::parse(text) != doc) out.round_trip = "parse(print(d)) != d";
        else if (dsl::print(dsl::parse(text)) != text) out.round_trip = "print is not stable";
    });
    return out;
}

// --- path equivalence ---

struct WordProblemChecks
{
    std::size_t equivalent_pairs = 0;       // pairs the engine proved, each tested on instances
    std::size_t instances = 0;              // valid instances the pairs were evaluated on
    std::size_t soundness_violations = 0;
    std::optional<std::string> failure;     // first failed condition, if any
};

namespace detail {

inline Path concat(const Graph &g, const Path &p, const Path &q) { return compose_paths(g, p, q); }

// A few valid instances: random raw data on the bare graph, then quotiented into the schema by
// sigma along the identity-on-graph translation. Always valid, and works for cyclic schemas.
inline std::vector<Instance> valid_instances(Rng &rng, SchemaPtr s, std::size_t count)
{
    const Graph &g = s->graph();
    auto bare = std::make_shared<Schema>(s->name() + "_bare", g);
    std::vector<VertexId> vmap;
    std::vector<Path> amap;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) vmap.push_back(vertex_id(v));
    for (std::size_t a = 0; a < g.arrow_count(); ++a) amap.push_back(Path(g.source(arrow_id(a)), {arrow_id(a)}));
    Translation quotient(bare, s, vmap, amap);
    std::vector<Instance> out;
    for (std::size_t i = 0; i < count; ++i) {
        Instance raw = random_raw_instance(rng, bare, 3);
        out.push_back(sigma(quotient, raw));
        // raw data that happens to satisfy the equations is kept as is, without merging
        Instance direct = random_raw_instance(rng, s, 3);
        if (validate_instance(direct).ok()) out.push_back(std::move(direct));
    }
    return out;
}

inline Path random_walk(Rng &rng, const Schema &s, Path p, std::size_t steps)
{
    for (std::size_t i = 0; i < steps; ++i) {
        auto next = oracle::one_step_rewrites(s, p);
        if (next.empty()) break;
        p = pick(rng, next);
    }
    return p;
}

inline std::string show(const Graph &g, const Path &p) { return g.name(p.source) + ":" + path_to_string(g, p); }

}

/// Conditions 1-4 of a categorical path equivalence relation, the composition lemma, and
/// soundness of paths_equivalent against valid instances, on one random (possibly cyclic) schema.
inline WordProblemChecks check_word_problem(std::uint64_t seed)
{
    Rng rng(seed);
    SchemaShape shape;
    shape.acyclic = seed % 2 == 0;
    SchemaPtr s = random_schema(rng, shape, "S");
    const Graph &g = s->graph();
    WordProblemChecks out;
    auto fail = [&](std::string why) {
        if (not out.failure) out.failure = std::move(why);
    };
    RewriteOptions one;
    one.budget = 1;

    std::vector<std::pair<Path, Path>> proved;
    auto note = [&](const Path &p, const Path &q, const RewriteOptions &o, const std::string &what) {
        auto r = paths_equivalent(*s, p, q, o);
        if (not r.equivalent()) {
            fail(what + ": " + detail::show(g, p) + " vs " + detail::show(g, q) + " not proved within " +
                 std::to_string(o.budget));
            return std::optional<EquivalenceResult>{};
        }
        proved.emplace_back(p, q);
        return std::optional{r};
    };

    for (const auto &eq : s->equations()) {
        note(eq.lhs, eq.rhs, one, "declared equation");
        // 3: precompose with every arrow into the source
        for (std::size_t ai = 0; ai < g.arrow_count(); ++ai) {
            ArrowId a = arrow_id(ai);
            Path m(g.source(a), {a});
            if (g.target(a) == eq.lhs.source)
                note(detail::concat(g, m, eq.lhs), detail::concat(g, m, eq.rhs), one, "condition 3");
            // 4: postcompose with every arrow out of the target
            if (g.source(a) == target(g, eq.lhs)) {
                Path n(g.source(a), {a});
                note(detail::concat(g, eq.lhs, n), detail::concat(g, eq.rhs, n), one, "condition 4");
            }
        }
    }

    // reflexivity, symmetry, and 1-2: different endpoints are never equivalent
    for (int i = 0; i < 6; ++i) {
        VertexId v = vertex_id(uniform(rng, 0, g.vertex_count() - 1));
        auto paths = oracle::paths_from(g, v, 3);
        const Path &p = pick(rng, paths);
        auto r = paths_equivalent(*s, p, p);
        if (not r.equivalent() or r.steps != 0) fail("reflexivity at " + detail::show(g, p));
        VertexId w = vertex_id(uniform(rng, 0, g.vertex_count() - 1));
        Path q = pick(rng, oracle::paths_from(g, w, 3));
        if ((q.source != p.source or target(g, q) != target(g, p)) and paths_equivalent(*s, p, q).equivalent())
            fail("conditions 1-2: " + detail::show(g, p) + " ~ " + detail::show(g, q));
    }

    // the lemma: p ~ q and r ~ s within B give pr ~ qs within 2B
    for (int i = 0; i < 6; ++i) {
        VertexId a = vertex_id(uniform(rng, 0, g.vertex_count() - 1));
        Path p = pick(rng, oracle::paths_from(g, a, 3));
        Path q = detail::random_walk(rng, *s, p, uniform(rng, 0, 3));
        Path r = pick(rng, oracle::paths_from(g, target(g, p), 3));
        Path t = detail::random_walk(rng, *s, r, uniform(rng, 0, 3));
        if (p.length() + r.length() > 12 or q.length() + t.length() > 12) continue;
        auto pq = paths_equivalent(*s, p, q);
        auto rt = paths_equivalent(*s, r, t);
        if (not pq.equivalent() or not rt.equivalent()) continue;  // a walk may leave the budget; nothing to check
        proved.emplace_back(p, q);
        proved.emplace_back(r, t);
        auto sym = paths_equivalent(*s, q, p);
        if (not sym.equivalent()) fail("symmetry at " + detail::show(g, p));
        RewriteOptions twice;
        twice.budget = 2 * std::max({pq.steps, rt.steps, std::size_t{1}});
        note(detail::concat(g, p, r), detail::concat(g, q, t), twice, "lemma");
    }

    // random parallel pairs the engine happens to prove
    for (int i = 0; i < 6; ++i)
        if (auto pq = random_parallel_pair(rng, g, 4))
            if (paths_equivalent(*s, pq->first, pq->second).equivalent()) proved.push_back(*pq);

    // soundness on valid instances
    out.equivalent_pairs = proved.size();
    for (const Instance &I : detail::valid_instances(rng, s, 4)) {
        if (not validate_instance(I).ok()) {
            fail("instance generator produced an invalid instance");
            continue;
        }
        ++out.instances;
        for (const auto &[p, q] : proved)
            for (RowIndex r = 0; r < I.row_count(p.source); ++r)
                if (evaluate_path(I, p, r) != evaluate_path(I, q, r)) {
                    ++out.soundness_violations;
                    fail("soundness: " + detail::show(g, p) + " and " + detail::show(g, q) + " differ on row " +
                         I.row(p.source, r));
                }
    }
    return out;
}

}
