// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <catmig/sigma.hpp>

#include <cstdint>
#include <optional>

namespace catmig {

/// η_I: I -> Δ Σ I.
inline InstanceMorphism sigma_unit(const Translation &F, const SigmaResult &sigma_I, const Instance &I)
{
    auto target = std::make_shared<const Instance>(delta(F, sigma_I.instance));
    return InstanceMorphism(std::make_shared<const Instance>(I), std::move(target), sigma_I.unit);
}

/// ε_J: Σ Δ J -> J, where `sigma_delta_J` was computed from `Δ_F J`.
inline InstanceMorphism sigma_counit(const SigmaResult &sigma_delta_J, const Instance &J)
{
    std::vector<std::vector<RowIndex>> comps(sigma_delta_J.terms.size());
    for (std::size_t d = 0; d < comps.size(); ++d)
        for (const auto &t : sigma_delta_J.terms[d])
            comps[d].push_back(evaluate_path(J, t.path, t.r));  // Δ J(c) has J(F c)'s rows in the same order
    return InstanceMorphism(std::make_shared<const Instance>(sigma_delta_J.instance), std::make_shared<const Instance>(J),
                            std::move(comps));
}

/// η'_J: J -> Π Δ J; a row goes to the family of its values along every comma-category path.
inline InstanceMorphism pi_unit(const PiResult &pi_delta_J, const Instance &J)
{
    const CommaCategories &comma = *pi_delta_J.comma;
    const Graph &dg = J.graph();
    std::vector<std::vector<RowIndex>> comps(dg.vertex_count());
    for (std::size_t d = 0; d < dg.vertex_count(); ++d) {
        const auto &cat = comma.at(vertex_id(d));
        for (RowIndex j = 0; j < J.row_count(vertex_id(d)); ++j) {
            std::vector<RowIndex> fam;
            for (const auto &o : cat.objects) fam.push_back(evaluate_path(J, cat.classes[o.cls], j));
            auto row = pi_delta_J.find(vertex_id(d), fam);
            if (not row) throw StructureError("pi unit: J's row does not give a compatible family");
            comps[d].push_back(*row);
        }
    }
    return InstanceMorphism(std::make_shared<const Instance>(J), std::make_shared<const Instance>(pi_delta_J.instance),
                            std::move(comps));
}

/// ε'_I: Δ Π I -> I; a family at F(c) is projected to its component at (c, id).
inline InstanceMorphism pi_counit(const Translation &F, const PiResult &pi_I, const Instance &I)
{
    const CommaCategories &comma = *pi_I.comma;
    const Graph &cg = F.source().graph();
    std::vector<std::vector<RowIndex>> comps(cg.vertex_count());
    for (std::size_t c = 0; c < cg.vertex_count(); ++c) {
        VertexId d = F(vertex_id(c));
        std::size_t o = *comma.at(d).object(vertex_id(c), 0);
        for (const auto &fam : pi_I.families[index(d)]) comps[c].push_back(fam[o]);
    }
    return InstanceMorphism(std::make_shared<const Instance>(delta(F, pi_I.instance)), std::make_shared<const Instance>(I),
                            std::move(comps));
}

/// The four unit/counit components for `I` on C and `J` on D, plus everything needed to check the triangles.
struct AdjunctionWitness
{
    InstanceMorphism sigma_unit;   // η_I : I -> Δ Σ I
    InstanceMorphism sigma_counit; // ε_J : Σ Δ J -> J
    InstanceMorphism pi_unit;      // η'_J : J -> Π Δ J
    InstanceMorphism pi_counit;    // ε'_I : Δ Π I -> I

    bool triangles_hold = false;
    std::vector<std::string> triangle_failures;
};

namespace detail {

inline bool is_identity(const InstanceMorphism &m)
{
    if (m.source() != m.target()) return false;
    for (std::size_t v = 0; v < m.components().size(); ++v)
        for (RowIndex r = 0; r < m.components()[v].size(); ++r)
            if (m.components()[v][r] != r) return false;
    return true;
}

}

inline AdjunctionWitness adjunction_unit_counit(const Translation &F, const Instance &I, const Instance &J,
                                                const MigrationOptions &opts = {})
{
    require_on(I, F.source(), "adjunction");
    require_on(J, F.target(), "adjunction");
    auto comma = std::make_shared<const CommaCategories>(F, opts);
    Instance dJ = delta(F, J);
    SigmaResult sI = sigma_detailed(F, I, opts);
    SigmaResult sdJ = sigma_detailed(F, dJ, opts);
    PiResult pI = pi_detailed(comma, I);
    PiResult pdJ = pi_detailed(comma, dJ);

    AdjunctionWitness w{sigma_unit(F, sI, I), sigma_counit(sdJ, J), pi_unit(pdJ, J), pi_counit(F, pI, I), false, {}};
    for (const auto *m : {&w.sigma_unit, &w.sigma_counit, &w.pi_unit, &w.pi_counit})
        if (not check_naturality(*m).ok()) w.triangle_failures.push_back("a unit or counit is not natural");

    auto check = [&](const char *what, const InstanceMorphism &m) {
        if (not detail::is_identity(m)) w.triangle_failures.push_back(what);
    };

    // Σ ⊣ Δ:  ε_{Σ I} ∘ Σ η_I = id  and  Δ ε_J ∘ η_{Δ J} = id
    {
        Instance dsI = delta(F, sI.instance);
        SigmaResult sdsI = sigma_detailed(F, dsI, opts);
        InstanceMorphism s_eta = sigma_on_morphism(sI, sdsI, w.sigma_unit);
        InstanceMorphism eps_s = sigma_counit(sdsI, sI.instance);
        check("Σ triangle on I", compose(s_eta, eps_s));

        InstanceMorphism eta_d = sigma_unit(F, sdJ, dJ);
        InstanceMorphism d_eps = delta_on_morphism(F, w.sigma_counit);
        check("Δ triangle on J (Σ side)", compose(eta_d, d_eps));
    }
    // Δ ⊣ Π:  Π ε'_I ∘ η'_{Π I} = id  and  ε'_{Δ J} ∘ Δ η'_J = id
    {
        // Π ε' ∘ η'_{Π I} sends a family x to (c, [p]) ↦ ε'_c(Π I(p)(x)). Evaluated row by row, since
        // Π Δ Π I is often orders of magnitude larger than Π I.
        const Graph &dg = F.target().graph();
        bool ok = true;
        for (std::size_t d = 0; d < dg.vertex_count() and ok; ++d) {
            const auto &cat = comma->at(vertex_id(d));
            for (RowIndex x = 0; x < pI.instance.row_count(vertex_id(d)) and ok; ++x)
                for (std::size_t o = 0; o < cat.objects.size() and ok; ++o) {
                    auto [c, k] = cat.objects[o];
                    RowIndex y = evaluate_path(pI.instance, cat.classes[k], x);
                    ok = w.pi_counit(c, y) == pI.families[d][x][o];
                }
        }
        if (not ok) w.triangle_failures.push_back("Π triangle on I");

        InstanceMorphism d_eta = delta_on_morphism(F, w.pi_unit);
        InstanceMorphism eps_d = pi_counit(F, pdJ, dJ);
        check("Δ triangle on J (Π side)", compose(d_eta, eps_d));
    }
    w.triangles_hold = w.triangle_failures.empty();
    return w;
}

/// |Hom(Σ I, J)|, |Hom(I, Δ J)|, |Hom(Δ J, I)|, |Hom(J, Π I)|; nullopt entries exceeded `cap`.
struct HomCounts
{
    std::optional<std::uint64_t> sigma_left;
    std::optional<std::uint64_t> delta_right;
    std::optional<std::uint64_t> delta_left;
    std::optional<std::uint64_t> pi_right;

    bool sigma_pair_equal() const { return sigma_left and delta_right and *sigma_left == *delta_right; }
    bool pi_pair_equal() const { return delta_left and pi_right and *delta_left == *pi_right; }
};

inline HomCounts count_adjunction_homs(const Translation &F, const Instance &I, const Instance &J,
                                       const MigrationOptions &opts = {},
                                       std::uint64_t cap = std::numeric_limits<std::uint64_t>::max())
{
    Instance sI = sigma(F, I, opts);
    Instance dJ = delta(F, J);
    Instance pI = pi(F, I, opts);
    return HomCounts{count_morphisms(sI, J, cap), count_morphisms(I, dJ, cap), count_morphisms(dJ, I, cap),
                     count_morphisms(J, pI, cap)};
}

}
