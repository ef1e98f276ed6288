#include <doctest.h>

#include "test_support.hpp"

using namespace sketchkit;
using namespace testsupport;

namespace {

std::vector<Structure> sorted(std::vector<Structure> v) {
    std::sort(v.begin(), v.end(), [](const Structure& a, const Structure& b) {
        return std::tie(a.objects, a.arrows) < std::tie(b.objects, b.arrows);
    });
    return v;
}

// Sketches small enough for the brute-force oracle in every target category.
const std::vector<std::string> small_sketches = {"Empty", "ArrowX", "ArrowA", "IsoB",  "MonoB", "ProdA",
                                                 "ProdB", "CoprodB", "TermB", "AMOB", "ReflA", "ZeroB",
                                                 "PbA",   "PbB",    "ChoiceA", "IdemA", "IdemB"};

}  // namespace

TEST_CASE("enumeration agrees with the brute-force oracle") {
    for (const auto& zn : small_sketches) {
        for (const auto& cn : target_categories()) {
            INFO(zn << " in " << cn);
            const auto& z = sketch(zn);
            const auto& c = cat(cn);
            auto got = enumerate_structures(z, c);
            auto want = oracle::structures(z, c);
            CHECK(sorted(got) == sorted(want));
            for (const auto& s : got) CHECK(is_structure(z, c, s));
        }
    }
}

TEST_CASE("serial and parallel enumeration give the same sequence") {
    for (const auto& zn : {"RegEpiFixedB", "BiprodB", "ReflB2", "ChoiceB", "PbB"}) {
        for (const auto& cn : target_categories()) {
            const auto& z = sketch(zn);
            const auto& c = cat(cn);
            CHECK(enumerate_structures_serial(z, c) == enumerate_structures(z, c));
        }
    }
}

TEST_CASE("budget overruns throw instead of returning a partial answer") {
    SearchOptions tiny{5, true};
    CHECK_THROWS_AS(enumerate_structures(sketch("RegEpiFixedB"), cat("B2"), tiny), BudgetExceeded);
    SearchOptions tiny_serial{5, false};
    CHECK_THROWS_AS(enumerate_structures_serial(sketch("RegEpiFixedB"), cat("B2"), tiny_serial), BudgetExceeded);
}

TEST_CASE("validate_structure explains failures") {
    const auto& c = cat("ParFork");
    const auto& mono = sketch("MonoB");
    auto h = make_structure(mono, c, {{"A", "b"}, {"B", "c"}, {"id_A", "id_b"}, {"id_B", "id_c"}, {"f", "h"}});
    auto r = validate_structure(mono, c, h);
    REQUIRE_FALSE(r.ok());
    auto bad = make_structure(mono, c, {{"A", "a"}, {"B", "c"}, {"id_A", "id_b"}, {"id_B", "id_c"}, {"f", "h"}});
    CHECK(validate_structure(mono, c, bad).violations.size() >= 2);
    CHECK_THROWS_AS(make_structure(mono, c, {{"A", "a"}}), ResolutionError);
}

TEST_CASE("fibres equal the filtered enumeration") {
    for (const auto& q : corpus().sequents) {
        auto s = sequent(q.name);
        auto beta = SketchMorphism::inclusion(s.a);
        for (const auto& cn : base_categories()) {
            const auto& c = cat(cn);
            std::vector<Structure> all_b;
            try {
                all_b = enumerate_structures(s.b, c);
            } catch (const BudgetExceeded&) {
                continue;
            }
            for (const auto& g : enumerate_structures(s.a, c)) {
                std::vector<Structure> want;
                for (const auto& h : all_b) {
                    if (restrict_to_subsketch(s.a, s.b, h) == g) want.push_back(h);
                }
                INFO(q.name << " in " << cn);
                CHECK(fibre(beta, s.a, s.b, c, g) == want);
                auto first = first_in_fibre(beta, s.a, s.b, c, g);
                CHECK(first.has_value() == !want.empty());
                if (first) CHECK(*first == want.front());
            }
        }
    }
}

TEST_CASE("natural transformations agree with brute force and form a category") {
    for (const auto& zn : {"ArrowA", "ProdA", "ReflA", "IdemA"}) {
        for (const auto& cn : base_categories()) {
            const auto& z = sketch(zn);
            const auto& c = cat(cn);
            auto models = enumerate_structures(z, c);
            for (const auto& f : models) {
                CHECK(is_natural(z, c, identity_transformation(c, f)));
                for (const auto& g : models) {
                    auto ts = enumerate_nat_transformations(z, c, f, g);
                    CHECK(ts == oracle::transformations(z, c, f, g));
                    auto iso = find_natural_iso(z, c, f, g);
                    bool any_iso = false;
                    for (const auto& t : ts) any_iso = any_iso || is_natural_iso(c, t);
                    CHECK(iso.has_value() == any_iso);
                    if (iso) {
                        auto inv = inverse_transformation(c, *iso);
                        REQUIRE(inv);
                        CHECK(compose_transformations(c, *inv, *iso) == identity_transformation(c, f));
                    }
                    for (const auto& h : models) {
                        for (const auto& t : ts) {
                            for (const auto& u : enumerate_nat_transformations(z, c, g, h)) {
                                CHECK(is_natural(z, c, compose_transformations(c, u, t)));
                            }
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("restriction is a functor on transformations") {
    const auto& a = sketch("ReflA");
    const auto& b = sketch("ReflB2");
    auto beta = SketchMorphism::inclusion(a);
    for (const auto& cn : base_categories()) {
        const auto& c = cat(cn);
        auto models = enumerate_structures(b, c);
        for (const auto& f : models) {
            CHECK(restrict_transformation(beta, a, b, identity_transformation(c, f)) ==
                  identity_transformation(c, restrict_to_subsketch(a, b, f)));
            for (const auto& g : models) {
                for (const auto& t : enumerate_nat_transformations(b, c, f, g)) {
                    auto r = restrict_transformation(beta, a, b, t);
                    CHECK(is_natural(a, c, r));
                }
            }
        }
    }
}

TEST_CASE("transport along an isomorphism") {
    const auto& a = sketch("ProdA");
    const auto& b = sketch("ProdB");
    auto beta = SketchMorphism::inclusion(a);
    const auto& c = cat("Iso2");
    for (const auto& h : enumerate_structures(b, c)) {
        auto hb = restrict_to_subsketch(a, b, h);
        for (const auto& g : enumerate_structures(a, c)) {
            for (const auto& i : enumerate_nat_transformations(a, c, hb, g)) {
                if (!is_natural_iso(c, i)) continue;
                auto t = transport_along_iso(beta, a, b, c, h, i);
                CHECK(is_structure(b, c, t.structure));
                CHECK(restrict_to_subsketch(a, b, t.structure) == g);
                CHECK(restrict_transformation(beta, a, b, t.iso) == i);
                CHECK(is_natural_iso(c, t.iso));
            }
        }
    }
    auto h = enumerate_structures(b, c).front();
    auto i = identity_transformation(c, enumerate_structures(a, c).back());
    CHECK_THROWS_AS(transport_along_iso(beta, a, b, c, h, i), std::invalid_argument);
}

TEST_CASE("structures in the dual category are the dual structures") {
    for (const auto& zn : small_sketches) {
        for (const auto& cn : base_categories()) {
            const auto& z = sketch(zn);
            const auto& c = cat(cn);
            auto dual_c = dual_category(c);
            auto dual_z = dualize_sketch(z);
            auto models = enumerate_structures(z, c);
            auto dual_models = enumerate_structures(dual_z, dual_c);
            CHECK(models == dual_models);
        }
    }
}

TEST_CASE("counts on small examples") {
    const auto& arrow = sketch("ArrowX");
    CHECK(enumerate_structures(arrow, cat("Two")).size() == 3);
    CHECK(enumerate_structures(arrow, cat("Iso2")).size() == 4);
    for (const auto& ns : corpus().sketches) {
        if (ns.name == "IdemA" || ns.name == "IdemB") continue;
        CHECK(enumerate_structures(ns.sketch, cat("One")).size() == 1);
    }
    const auto& two = cat("Two");
    auto f = make_structure(arrow, two, {{"A", "s"}, {"B", "s"}, {"f", "id_s"}});
    auto g = make_structure(arrow, two, {{"A", "s"}, {"B", "t"}, {"f", "u"}});
    CHECK(enumerate_nat_transformations(arrow, two, f, g).size() == 1);
    CHECK(enumerate_nat_transformations(arrow, two, g, f).empty());
}

TEST_CASE("fibre examples") {
    auto iso = sequent("IsoSeq");
    const auto& c = cat("Iso2");
    auto g = make_structure(iso.a, c, {{"A", "s"}, {"B", "t"}, {"id_A", "id_s"}, {"id_B", "id_t"}, {"f", "f"}});
    CHECK(fibre(SketchMorphism::inclusion(iso.a), iso.a, iso.b, c, g).size() == 1);
    auto id = SketchMorphism::inclusion(iso.a);
    CHECK(fibre(id, iso.a, iso.a, c, g) == std::vector<Structure>{g});
}
