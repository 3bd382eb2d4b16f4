// SPDX-License-Identifier: Apache-2.0
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace catmig;
using namespace catmig::testing;

namespace {

struct TwoFacts
{
    dsl::Document doc = load("two_facts.cat");
    dsl::Document expected = load("two_facts_expected.cat", &doc);
    const Translation &F = translation(doc, "F");
    const Instance &I = instance(doc, "I");
    const Instance &J = instance(doc, "J");
};

const TwoFacts & facts()
{
    static const TwoFacts f;
    return f;
}

std::set<std::string> row_set(const Instance &I, std::string_view vertex)
{
    auto r = rows_of(I, vertex);
    return {r.begin(), r.end()};
}

// The rows of table `v` as tuples of cell text, ignoring row ids.
std::multiset<std::vector<std::string>> tuples(const Instance &I, std::string_view vertex)
{
    const Graph &g = I.graph();
    VertexId v = g.vertex(vertex);
    std::multiset<std::vector<std::string>> out;
    for (RowIndex r = 0; r < I.row_count(v); ++r) {
        std::vector<std::string> t;
        for (ArrowId a : g.outgoing(v)) t.push_back(I.row(g.target(a), I.value(a, r)));
        out.insert(t);
    }
    return out;
}

bool is_identity(const InstanceMorphism &m)
{
    if (m.source() != m.target()) return false;
    for (const auto &comp : m.components())
        for (RowIndex r = 0; r < comp.size(); ++r)
            if (comp[r] != r) return false;
    return true;
}

// two_facts I with T1-003 dropped, and the inclusion into I
constexpr const char *smaller_text = R"(
instance Ism on C {
  table T1 {
    T1-001 -> (T1_SSN = 115-234) (T1_First = Bob) (T1_Last = Smith)
    T1-002 -> (T1_SSN = 122-988) (T1_First = Sue) (T1_Last = Smith)
  }
  table T2 {
    T2-A101 -> (T2_First = Alice) (T2_Last = Jones) (T2_Salary = $100)
    T2-A102 -> (T2_First = Sam) (T2_Last = Miller) (T2_Salary = $150)
    T2-A104 -> (T2_First = Sue) (T2_Last = Smith) (T2_Salary = $300)
    T2-A110 -> (T2_First = Carl) (T2_Last = Pratt) (T2_Salary = $200)
  }
  table SSN { 115-234 118-334 122-988 198-877 342-164 }
  table First { Adam Alice Bob Carl Sam Sue }
  table Last { Jones Miller Pratt Richards Smith }
  table Salary { $100 $150 $200 $250 $300 }
}
morphism incl : Ism -> I {
  T1 { T1-001 -> T1-001 T1-002 -> T1-002 }
  T2 { T2-A101 -> T2-A101 T2-A102 -> T2-A102 T2-A104 -> T2-A104 T2-A110 -> T2-A110 }
  SSN { 115-234 -> 115-234 118-334 -> 118-334 122-988 -> 122-988 198-877 -> 198-877 342-164 -> 342-164 }
  First { Adam -> Adam Alice -> Alice Bob -> Bob Carl -> Carl Sam -> Sam Sue -> Sue }
  Last { Jones -> Jones Miller -> Miller Pratt -> Pratt Richards -> Richards Smith -> Smith }
  Salary { $100 -> $100 $150 -> $150 $200 -> $200 $250 -> $250 $300 -> $300 }
}
)";

}

// --- translations ---

TEST(Translation, FactTablesFoldIntoOne)
{
    EXPECT_TRUE(check_translation(facts().F).ok());
}

TEST(Translation, EquivalenceTranslationIsValid)
{
    auto doc = load("equivalence.cat");
    auto rep = check_translation(translation(doc, "F"));
    EXPECT_TRUE(rep.ok());
    EXPECT_TRUE(rep.unverified.empty());
}

TEST(Translation, EndpointViolation)
{
    const Translation &F = facts().F;
    const Graph &d = F.target().graph();
    std::vector<VertexId> vmap;
    std::vector<Path> amap;
    for (std::size_t v = 0; v < F.source().graph().vertex_count(); ++v) vmap.push_back(F(vertex_id(v)));
    for (std::size_t a = 0; a < F.source().graph().arrow_count(); ++a) amap.push_back(F(arrow_id(a)));
    // T1_SSN sent to a trivial path on SSN: starts at SSN instead of T
    amap[index(F.source().graph().arrow_named("T1_SSN"))] = Path::trivial(d.vertex("SSN"));
    Translation bad(F.source_ptr(), F.target_ptr(), vmap, amap);
    auto rep = check_translation(bad);
    ASSERT_EQ(rep.endpoint_violations.size(), 1u);
    EXPECT_EQ(rep.endpoint_violations[0].arrow, "T1_SSN");
    EXPECT_EQ(rep.endpoint_violations[0].expected_source, "T");
    EXPECT_EQ(rep.endpoint_violations[0].actual_source, "SSN");
    EXPECT_THROW(delta(bad, facts().J), InvalidTranslation);
}

TEST(Translation, UnprovedEquationIsReportedNotRefuted)
{
    auto doc = dsl::parse(R"(
schema C { nodes A, B; arrows f : A -> B; g : A -> B; equations A : f = g; }
schema D { nodes X, Y; arrows p : X -> Y; q : X -> Y; }
translation F : C -> D { nodes A -> X, B -> Y; arrows f -> p; g -> q; }
)");
    auto rep = check_translation(translation(doc, "F"));
    EXPECT_TRUE(rep.endpoints_ok());
    ASSERT_EQ(rep.unverified.size(), 1u);
    EXPECT_EQ(rep.unverified[0].lhs_image, "p");
    EXPECT_EQ(rep.unverified[0].rhs_image, "q");
}

TEST(Translation, Equality)
{
    auto doc = dsl::parse(R"(
schema C { nodes T1, T2; arrows i12 : T1 -> T2; i21 : T2 -> T1; equations T1 : i12.i21 = id; T2 : i21.i12 = id; }
schema Loop { nodes P; arrows a : P -> P; }
translation Long : Loop -> C { nodes P -> T1; arrows a -> i12.i21; }
translation Short : Loop -> C { nodes P -> T1; arrows a -> id; }
translation Other : Loop -> C { nodes P -> T2; arrows a -> id; }
schema Two { nodes X, Y; arrows p : X -> Y; q : X -> Y; }
schema Arrow { nodes S, T; arrows e : S -> T; }
translation ToP : Arrow -> Two { nodes S -> X, T -> Y; arrows e -> p; }
translation ToQ : Arrow -> Two { nodes S -> X, T -> Y; arrows e -> q; }
)");
    EXPECT_EQ(translations_equal(translation(doc, "Long"), translation(doc, "Long")), TranslationEquality::Equal);
    EXPECT_EQ(translations_equal(translation(doc, "Long"), translation(doc, "Short")), TranslationEquality::Equal);
    EXPECT_EQ(translations_equal(translation(doc, "Short"), translation(doc, "Other")), TranslationEquality::Different);
    EXPECT_EQ(translations_equal(translation(doc, "ToP"), translation(doc, "ToQ")),
              TranslationEquality::NotProvedWithinBudget);
    EXPECT_THROW(translations_equal(translation(doc, "Long"), translation(doc, "ToP")), SchemaMismatch);
}

TEST(Translation, CompositionWithIdentity)
{
    const Translation &F = facts().F;
    EXPECT_EQ(compose(identity_translation(F.source_ptr()), F), F);
    EXPECT_EQ(compose(F, identity_translation(F.target_ptr())), F);
}

// --- delta ---

TEST(Delta, SplitsTheFactTable)
{
    Instance d = delta(facts().F, facts().J);
    EXPECT_EQ(row_set(d, "T1"), (std::set<std::string>{"XF667", "XF891", "XF221"}));
    EXPECT_EQ(row_set(d, "T2"), (std::set<std::string>{"XF667", "XF891", "XF221"}));
    EXPECT_EQ(cell(d, "T1_SSN", "XF667"), "115-234");
    EXPECT_EQ(cell(d, "T1_First", "XF667"), "Bob");
    EXPECT_EQ(cell(d, "T1_Last", "XF667"), "Smith");
    EXPECT_EQ(cell(d, "T2_Salary", "XF221"), "$100");
    EXPECT_TRUE(isomorphic(d, instance(facts().expected, "DeltaJ")));
    EXPECT_TRUE(validate_instance(d).ok());
}

TEST(Delta, IdentityTranslation)
{
    const Instance &J = facts().J;
    EXPECT_EQ(delta(identity_translation(J.schema_ptr()), J), J);
}

TEST(Delta, EquivalencePullbackHasIdentityColumns)
{
    auto doc = load("equivalence.cat");
    Instance d = delta(translation(doc, "F"), instance(doc, "J"));
    for (const auto &r : rows_of(d, "T1")) EXPECT_EQ(cell(d, "i12", r), r);
    for (const auto &r : rows_of(d, "T2")) EXPECT_EQ(cell(d, "i21", r), r);
    EXPECT_TRUE(isomorphic(d, instance(doc, "I")));
}

TEST(Delta, StrictlyFunctorial)
{
    auto doc = load("equivalence.cat");
    const Translation &F = translation(doc, "F");
    auto loop = dsl::parse(R"(
schema L { nodes P; arrows a : P -> P; }
translation G : L -> C { nodes P -> T1; arrows a -> i12.i21; }
)", &doc);
    const Translation &G = translation(loop, "G");
    const Instance &J = instance(doc, "J");
    EXPECT_EQ(delta(compose(G, F), J), delta(G, delta(F, J)));
}

TEST(Delta, OnMorphisms)
{
    const Translation &F = facts().F;
    const Instance &J = facts().J;
    EXPECT_TRUE(is_identity(delta_on_morphism(F, identity_morphism(J))));
    EXPECT_EQ(delta_on_morphism(identity_translation(J.schema_ptr()), identity_morphism(J)), identity_morphism(J));

    // J plus one extra fact row; the inclusion restricts to inclusions on T1 and T2
    auto more = dsl::parse(R"(
instance Jplus on D {
  table T {
    XF667 -> (SSN = 115-234) (First = Bob) (Last = Smith) (Salary = $250)
    XF891 -> (SSN = 122-988) (First = Sue) (Last = Smith) (Salary = $300)
    XF221 -> (SSN = 198-877) (First = Alice) (Last = Jones) (Salary = $100)
    XF999 -> (SSN = 342-164) (First = Adam) (Last = Richards) (Salary = $150)
  }
  table SSN { 115-234 118-334 122-988 198-877 342-164 }
  table First { Adam Alice Bob Carl Sam Sue }
  table Last { Jones Miller Pratt Richards Smith }
  table Salary { $100 $150 $200 $250 $300 }
}
morphism up : J -> Jplus {
  T { XF667 -> XF667 XF891 -> XF891 XF221 -> XF221 }
  SSN { 115-234 -> 115-234 118-334 -> 118-334 122-988 -> 122-988 198-877 -> 198-877 342-164 -> 342-164 }
  First { Adam -> Adam Alice -> Alice Bob -> Bob Carl -> Carl Sam -> Sam Sue -> Sue }
  Last { Jones -> Jones Miller -> Miller Pratt -> Pratt Richards -> Richards Smith -> Smith }
  Salary { $100 -> $100 $150 -> $150 $200 -> $200 $250 -> $250 $300 -> $300 }
}
)", &facts().doc);
    auto m = delta_on_morphism(F, morphism(more, "up"));
    EXPECT_TRUE(check_naturality(m).ok());
    for (const char *t : {"T1", "T2"}) {
        VertexId v = m.source().graph().vertex(t);
        EXPECT_EQ(m.target().row_count(v), 4u);
        for (RowIndex r = 0; r < m.source().row_count(v); ++r)
            EXPECT_EQ(m.target().row(v, m(v, r)), m.source().row(v, r));
    }
}

// --- pi ---

TEST(Pi, JoinOfTheFactTables)
{
    Instance p = pi(facts().F, facts().I);
    ASSERT_EQ(p.row_count(p.graph().vertex("T")), 2u);
    std::multiset<std::vector<std::string>> want{{"122-988", "Sue", "Smith", "$300"}, {"198-877", "Alice", "Jones", "$100"}};
    EXPECT_EQ(tuples(p, "T"), want);
    EXPECT_TRUE(isomorphic(p, instance(facts().expected, "PiI")));
    EXPECT_TRUE(validate_instance(p).ok());
}

TEST(Pi, LeafTablesAreUnchanged)
{
    Instance p = pi(facts().F, facts().I);
    for (const char *leaf : {"SSN", "First", "Last", "Salary"}) EXPECT_EQ(rows_of(p, leaf), rows_of(facts().I, leaf)) << leaf;
}

TEST(Pi, AgreesWithBruteForce)
{
    auto res = pi_detailed(facts().F, facts().I);
    EXPECT_EQ(oracle::compare_pi(facts().F, facts().I, res), std::nullopt);
}

TEST(Pi, IdentityTranslation)
{
    const Instance &I = facts().I;
    EXPECT_TRUE(isomorphic(pi(identity_translation(I.schema_ptr()), I), I));
}

TEST(Pi, InfiniteCommaCategoryHitsTheBound)
{
    auto emp = load("employee.cat");
    auto seed = load("employee_seed.cat", &emp);
    try {
        pi(translation(seed, "Hire"), instance(seed, "Newcomer"));
        FAIL() << "expected a bound error";
    } catch (const BoundError &e) {
        EXPECT_FALSE(e.vertex.empty());
    }
}

TEST(Pi, OnMorphisms)
{
    const Translation &F = facts().F;
    const Instance &I = facts().I;
    EXPECT_TRUE(is_identity(pi_on_morphism(F, identity_morphism(I))));

    auto more = dsl::parse(smaller_text, &facts().doc);
    auto m = pi_on_morphism(F, morphism(more, "incl"));
    EXPECT_TRUE(check_naturality(m).ok());
    // recompute both sides: the one surviving join row goes to the join row with the same columns
    VertexId t = m.source().graph().vertex("T");
    ASSERT_EQ(m.source().row_count(t), 1u);
    const Graph &g = m.source().graph();
    for (ArrowId a : g.outgoing(t))
        EXPECT_EQ(m.target().row(g.target(a), m.target().value(a, m(t, 0))),
                  m.source().row(g.target(a), m.source().value(a, 0)));
}

// --- sigma ---

TEST(Sigma, UnionWithSkolems)
{
    Instance s = sigma(facts().F, facts().I);
    EXPECT_EQ(s, instance(facts().expected, "SigmaI"));
    EXPECT_EQ(s.row_count(s.graph().vertex("T")), 7u);
    EXPECT_EQ(cell(s, "Salary", "T1-001"), "T1-001.Salary");
    EXPECT_EQ(cell(s, "SSN", "T2-A101"), "T2-A101.SSN");
    EXPECT_TRUE(validate_instance(s).ok());
}

TEST(Sigma, SalaryLeafGainsThreeSkolems)
{
    auto res = sigma_detailed(facts().F, facts().I);
    EXPECT_EQ(oracle::compare_sigma(facts().F, facts().I, res), std::nullopt);
    oracle::SigmaOracle o(facts().F, facts().I);
    VertexId salary = res.instance.graph().vertex("Salary");
    EXPECT_EQ(res.instance.row_count(salary), o.classes_at(salary).size());
    EXPECT_EQ(res.instance.row_count(salary), 5u + 3u);
}

TEST(Sigma, IdentityTranslationAddsNothing)
{
    const Instance &I = facts().I;
    Instance s = sigma(identity_translation(I.schema_ptr()), I);
    EXPECT_TRUE(isomorphic(s, I));
    EXPECT_EQ(s, I);
}

TEST(Sigma, ManagerLoopDoesNotSaturate)
{
    auto emp = load("employee.cat");
    auto seed = load("employee_seed.cat", &emp);
    MigrationOptions o;
    o.saturation_bound = 200;
    try {
        sigma(translation(seed, "Hire"), instance(seed, "Newcomer"), o);
        FAIL() << "expected a bound error";
    } catch (const BoundError &e) {
        EXPECT_EQ(e.vertex, "Employee");
    }
}

TEST(Sigma, OnMorphisms)
{
    const Translation &F = facts().F;
    const Instance &I = facts().I;
    EXPECT_TRUE(is_identity(sigma_on_morphism(F, identity_morphism(I))));

    auto more = dsl::parse(smaller_text, &facts().doc);
    auto m = sigma_on_morphism(F, morphism(more, "incl"));
    EXPECT_TRUE(check_naturality(m).ok());
    // both sides name rows after the same seeds, so the inclusion is by name
    for (std::size_t v = 0; v < m.source().graph().vertex_count(); ++v)
        for (RowIndex r = 0; r < m.source().row_count(vertex_id(v)); ++r)
            EXPECT_EQ(m.target().row(vertex_id(v), m(vertex_id(v), r)), m.source().row(vertex_id(v), r));
}

TEST(Sigma, MergingRowsMergesClasses)
{
    // two copies of T2-A101 sent to one
    auto more = dsl::parse(R"(
instance Idup on C {
  table T1 { T1-001 -> (T1_SSN = 115-234) (T1_First = Bob) (T1_Last = Smith) }
  table T2 {
    T2-A101 -> (T2_First = Alice) (T2_Last = Jones) (T2_Salary = $100)
    T2-copy -> (T2_First = Alice) (T2_Last = Jones) (T2_Salary = $100)
  }
  table SSN { 115-234 }
  table First { Alice Bob }
  table Last { Jones Smith }
  table Salary { $100 }
}
instance Ione on C {
  table T1 { T1-001 -> (T1_SSN = 115-234) (T1_First = Bob) (T1_Last = Smith) }
  table T2 { T2-A101 -> (T2_First = Alice) (T2_Last = Jones) (T2_Salary = $100) }
  table SSN { 115-234 }
  table First { Alice Bob }
  table Last { Jones Smith }
  table Salary { $100 }
}
morphism merge : Idup -> Ione {
  T1 { T1-001 -> T1-001 }
  T2 { T2-A101 -> T2-A101 T2-copy -> T2-A101 }
  SSN { 115-234 -> 115-234 }
  First { Alice -> Alice Bob -> Bob }
  Last { Jones -> Jones Smith -> Smith }
  Salary { $100 -> $100 }
}
)", &facts().doc);
    auto m = sigma_on_morphism(facts().F, morphism(more, "merge"));
    EXPECT_TRUE(check_naturality(m).ok());
    const Graph &g = m.source().graph();
    VertexId t = g.vertex("T"), ssn = g.vertex("SSN");
    EXPECT_EQ(m.source().row_count(t), 3u);
    EXPECT_EQ(m.target().row_count(t), 2u);
    EXPECT_EQ(m(t, m.source().row_index(t, "T2-copy")), m.target().row_index(t, "T2-A101"));
    EXPECT_EQ(m(ssn, m.source().row_index(ssn, "T2-copy.SSN")), m.target().row_index(ssn, "T2-A101.SSN"));
}

// --- adjunctions ---

TEST(Adjunction, IdentityTranslationGivesIdentities)
{
    const Instance &I = facts().I;
    auto id = identity_translation(I.schema_ptr());
    auto w = adjunction_unit_counit(id, I, I);
    EXPECT_TRUE(w.triangles_hold);
    for (const auto *m : {&w.sigma_unit, &w.sigma_counit, &w.pi_unit, &w.pi_counit}) EXPECT_TRUE(is_identity(*m));
}

TEST(Adjunction, PiCounitPicksTheJoinedRows)
{
    auto w = adjunction_unit_counit(facts().F, facts().I, facts().J);
    EXPECT_TRUE(w.triangles_hold);
    const InstanceMorphism &eps = w.pi_counit;
    VertexId t1 = eps.source().graph().vertex("T1");
    ASSERT_EQ(eps.source().row_count(t1), 2u);
    std::set<std::string> image;
    for (RowIndex r = 0; r < 2; ++r) image.insert(eps.target().row(t1, eps(t1, r)));
    EXPECT_EQ(image, (std::set<std::string>{"T1-002", "T1-003"}));
}

TEST(Adjunction, SigmaCounitFollowsTheOracle)
{
    const Translation &F = facts().F;
    const Instance &J = facts().J;
    auto w = adjunction_unit_counit(F, facts().I, J);
    Instance dJ = delta(F, J);
    oracle::SigmaOracle o(F, dJ);
    const InstanceMorphism &eps = w.sigma_counit;
    VertexId t = J.graph().vertex("T");
    EXPECT_EQ(eps.source().row_count(t), o.classes_at(t).size());
    // each class goes to the J row its seed came from
    auto res = sigma_detailed(F, dJ);
    for (RowIndex r = 0; r < res.instance.row_count(t); ++r) {
        const auto &term = res.terms[index(t)][r];
        EXPECT_EQ(eps(t, r), evaluate_path(J, term.path, term.r));
    }
}

TEST(Adjunction, HomCountsOnTruncatedInstances)
{
    auto small = load("two_facts_small.cat", &facts().doc);
    auto counts = count_adjunction_homs(facts().F, instance(small, "I3"), instance(small, "J3"));
    EXPECT_TRUE(counts.sigma_pair_equal());
    EXPECT_TRUE(counts.pi_pair_equal());
    EXPECT_TRUE(adjunction_unit_counit(facts().F, instance(small, "I3"), instance(small, "J3")).triangles_hold);
}

TEST(Adjunction, EquivalenceRoundTrips)
{
    auto doc = load("equivalence.cat");
    const Translation &F = translation(doc, "F");
    const Instance &I = instance(doc, "I");
    const Instance &J = instance(doc, "J");
    EXPECT_TRUE(find_isomorphism(delta(F, sigma(F, I)), I).has_value());
    EXPECT_TRUE(find_isomorphism(sigma(F, delta(F, J)), J).has_value());
}

// --- pipelines ---

TEST(Pipeline, EmptyPipelineReturnsTheStart)
{
    const Instance &I = facts().I;
    EXPECT_EQ(std::get<Instance>(run_pipeline({}, I)), I);
}

TEST(Pipeline, SingleDelta)
{
    PipelineValue out = run_pipeline({{StepKind::Delta, facts().F}}, facts().J);
    EXPECT_EQ(std::get<Instance>(out), delta(facts().F, facts().J));
}

TEST(Pipeline, DeltaThenSigmaFeedsTheCounit)
{
    const Translation &F = facts().F;
    PipelineValue out = run_pipeline({{StepKind::Delta, F}, {StepKind::Sigma, F}}, facts().J);
    auto w = adjunction_unit_counit(F, facts().I, facts().J);
    EXPECT_EQ(std::get<Instance>(out), w.sigma_counit.source());
}

TEST(Pipeline, StepMismatch)
{
    EXPECT_THROW(run_pipeline({{StepKind::Sigma, facts().F}}, facts().J), SchemaMismatch);
    EXPECT_THROW(run_pipeline({{StepKind::SigmaHat, identity_morphism(facts().J)}}, facts().J), Error);
}

TEST(Pipeline, StepKindNames)
{
    for (auto k : {StepKind::Delta, StepKind::Sigma, StepKind::Pi, StepKind::SigmaHat, StepKind::DeltaHat, StepKind::PiHat})
        EXPECT_EQ(parse_step_kind(to_string(k)), k);
    EXPECT_FALSE(parse_step_kind("gamma").has_value());
}
