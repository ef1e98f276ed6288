#include <doctest.h>

#include "test_support.hpp"

using namespace sketchkit;
using namespace testsupport;

namespace {

bool holds(const std::string& seq, const std::string& structure) {
    auto s = sequent(seq);
    auto r = resolve_structure(corpus(), structure);
    return exists_verification(s, *r.category, r.structure).holds;
}

}  // namespace

TEST_CASE("iso and mono sequents on the named arrows") {
    CHECK(holds("IsoSeq", "F_iso2"));
    CHECK(holds("IsoSeq", "F_iso2_inv"));
    CHECK_FALSE(holds("IsoSeq", "F_two"));
    CHECK(holds("MonoSeq", "F_two"));
    CHECK(holds("MonoSeq", "F_parfork_g1"));
    CHECK_FALSE(holds("MonoSeq", "F_parfork_h"));
}

TEST_CASE("a negative verdict names the offending extension") {
    auto s = sequent("MonoSeq");
    auto r = resolve_structure(corpus(), "F_parfork_h");
    auto d = exists_verification(s, *r.category, r.structure);
    REQUIRE_FALSE(d.holds);
    REQUIRE(d.counterexample);
    CHECK(d.fibre_size == 1);
    CHECK(restrict_to_subsketch(s.x, s.a, *d.counterexample) == r.structure);
    CHECK(fibre(SketchMorphism::inclusion(s.a), s.a, s.b, *r.category, *d.counterexample).empty());
}

TEST_CASE("witnesses restrict to their extension") {
    auto s = sequent("ProdSeq");
    const auto& c = cat("B2");
    auto d = exists_verification(s, c, empty_structure(c));
    REQUIRE(d.holds);
    CHECK(d.witnesses.size() == d.fibre_size);
    CHECK(d.fibre_size == 16);
    for (const auto& [g, h] : d.witnesses) {
        CHECK(is_structure(s.b, c, h));
        CHECK(restrict_to_subsketch(s.a, s.b, h) == g);
    }
}

TEST_CASE("product sequents match the meet oracle") {
    for (const auto& cn : {"B2", "Vee", "Two", "One"}) {
        const auto& c = cat(cn);
        bool all_meets = true;
        for (std::size_t x = 0; x < c.object_count(); ++x) {
            for (std::size_t y = 0; y < c.object_count(); ++y) {
                all_meets = all_meets && oracle::meet_exists(c, object_id(x), object_id(y));
            }
        }
        CHECK(exists_verification(sequent("ProdSeq"), c, empty_structure(c)).holds == all_meets);
    }
}

TEST_CASE("unconditional sequents") {
    for (const auto& n : {"MonoSeq", "IsoSeq", "ProdSeq", "ReflSeq1", "ReflSeq2", "RegEpiRawSeq", "RegEpiFixedSeq",
                          "BiproductSeq"}) {
        CHECK(is_unconditional_finite_kind(sequent(n)));
    }
    CHECK_FALSE(is_unconditional_finite_kind(sequent("ChoiceSeq")));
    CHECK_FALSE(is_unconditional_finite_kind(sequent("IdemSeq")));
}

TEST_CASE("the three deciders agree on certified sequents") {
    for (const auto& q : corpus().sequents) {
        auto s = sequent(q.name);
        if (!certify_constructible(s.a, s.b).constructible()) continue;
        for (const auto& cn : base_categories()) {
            const auto& c = cat(cn);
            for (const auto& f : enumerate_structures(s.x, c)) {
                INFO(q.name << " in " << cn);
                bool strict = exists_verification(s, c, f).holds;
                CHECK(exists_verification_upto_iso(s, c, f).holds == strict);
                FunctorialOptions generic;
                generic.force_generic = true;
                CHECK(exists_functorial_verification(s, c, f, generic).holds == strict);
                CHECK(exists_functorial_verification(s, c, f).method == DecisionMethod::functorial_delegated);
            }
        }
    }
}

TEST_CASE("strict verification implies verification up to iso") {
    auto s = sequent("ReflSeq1");
    for (const auto& cn : base_categories()) {
        const auto& c = cat(cn);
        for (const auto& f : enumerate_structures(s.x, c)) {
            bool strict = exists_verification(s, c, f).holds;
            bool iso = exists_verification_upto_iso(s, c, f).holds;
            CHECK((!strict || iso));
        }
    }
}

TEST_CASE("generic functorial search refuses when a fibre is empty") {
    auto s = sequent("MonoSeq");
    auto r = resolve_structure(corpus(), "F_parfork_h");
    FunctorialOptions generic;
    generic.force_generic = true;
    auto d = exists_functorial_verification(s, *r.category, r.structure, generic);
    CHECK_FALSE(d.holds);
    CHECK(d.method == DecisionMethod::functorial_generic);
    CHECK(d.counterexample);
}

TEST_CASE("the generic search stops at its cap") {
    auto s = sequent("ProdSeq");
    const auto& c = cat("B2");
    FunctorialOptions tiny;
    tiny.force_generic = true;
    tiny.cap = 1;
    CHECK_THROWS_AS(exists_functorial_verification(s, c, empty_structure(c), tiny), BudgetExceeded);
}

TEST_CASE("verdicts are invariant under dualization") {
    for (const auto& q : corpus().sequents) {
        auto s = sequent(q.name);
        auto d = dualize_sequent(s);
        for (const auto& cn : base_categories()) {
            const auto& c = cat(cn);
            auto dc = dual_category(c);
            for (const auto& f : enumerate_structures(s.x, c)) {
                INFO(q.name << " in " << cn);
                CHECK(exists_verification(s, c, f).holds ==
                      exists_verification(d, dc, dualize_structure(f, dc)).holds);
            }
        }
        CHECK(is_unconditional_finite_kind(s) == is_unconditional_finite_kind(d));
    }
}

TEST_CASE("deciders reject structures over the wrong sketch") {
    auto s = sequent("MonoSeq");
    const auto& c = cat("B2");
    CHECK_THROWS_AS(exists_verification(s, c, empty_structure(c)), std::invalid_argument);
}

TEST_CASE("fibre morphisms fix the base") {
    auto s = sequent("ProdPairSeq");
    auto r = resolve_structure(corpus(), "P_b2_ab");
    const auto& c = *r.category;
    auto g = r.structure;
    for (const auto& t : fibre_morphisms(s, c, g, g)) {
        for (std::size_t i = 0; i < s.x.graph.vertices.size(); ++i) {
            CHECK(c.is_identity(t.components[i]));
        }
    }
}

TEST_CASE("malformed sequents are reported") {
    auto s = sequent("ProdSeq");
    auto swapped = s;
    std::swap(swapped.a, swapped.b);
    CHECK_FALSE(validate_sequent(swapped).ok());
    auto outside = s;
    outside.x = sketch("ArrowX");
    CHECK_FALSE(validate_sequent(outside).ok());
}

TEST_CASE("identity inclusions always verify") {
    auto s = sequent("ProdPairSeq");
    s.b = s.a;
    s.b_name = s.a_name;
    for (const auto& cn : base_categories()) {
        const auto& c = cat(cn);
        for (const auto& f : enumerate_structures(s.x, c)) {
            CHECK(exists_verification(s, c, f).holds);
            CHECK(exists_verification_upto_iso(s, c, f).holds);
            FunctorialOptions fo;
            fo.force_generic = true;
            CHECK(exists_functorial_verification(s, c, f, fo).holds);
        }
    }
}
