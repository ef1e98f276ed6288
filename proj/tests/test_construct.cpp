#include <doctest.h>

#include "test_support.hpp"

using namespace sketchkit;
using namespace testsupport;

namespace {

const std::vector<std::pair<std::string, bool>> golden = {
    {"MonoSeq", true},      {"IsoSeq", true},        {"ProdSeq", true},        {"ProdPairSeq", true},
    {"CoprodSeq", true},    {"CoprodPairSeq", true}, {"TerminalSeq", true},    {"AtMostOneSeq", true},
    {"ReflSeq1", false},    {"ReflSeq2", true},      {"PullbackSeq", true},    {"RegEpiRawSeq", false},
    {"RegEpiFixedSeq", true}, {"ZeroSeq", true},     {"BiproductSeq", true},   {"ChoiceSeq", false},
    {"IdemSeq", true},
};

}  // namespace

TEST_CASE("golden constructibility verdicts") {
    for (const auto& [name, expect] : golden) {
        auto s = sequent(name);
        auto r = certify_constructible(s.a, s.b);
        INFO(name);
        CHECK(r.constructible() == expect);
        if (r.certificate) {
            CHECK(replay_certificate(*r.certificate, s.a, s.b));
            CHECK(r.frontier.empty());
        } else {
            REQUIRE_FALSE(r.frontier.empty());
            for (const auto& f : r.frontier) CHECK_FALSE(f.missing.empty());
        }
    }
}

TEST_CASE("verdicts agree with plain breadth-first reachability") {
    for (const auto& [name, expect] : golden) {
        auto s = sequent(name);
        auto bfs = oracle::reachable(s.a, s.b);
        INFO(name);
        if (bfs) CHECK(*bfs == certify_constructible(s.a, s.b).constructible());
    }
}

TEST_CASE("the first step of some certificates") {
    auto mono = certify_constructible(sequent("MonoSeq").a, sequent("MonoSeq").b);
    REQUIRE(mono.certificate);
    REQUIRE(mono.certificate->steps.size() == 1);
    CHECK(mono.certificate->steps[0].procedure == Procedure::include_conditions);

    auto prod = certify_constructible(sequent("ProdSeq").a, sequent("ProdSeq").b);
    REQUIRE(prod.certificate);
    REQUIRE(prod.certificate->steps.size() == 1);
    CHECK(prod.certificate->steps[0].procedure == Procedure::limit_object);
    CHECK(prod.certificate->steps[0].objects == std::vector<std::string>{"P"});
}

TEST_CASE("the refused reflexive-relation sequent lacks the diagonal") {
    auto s = sequent("ReflSeq1");
    auto r = certify_constructible(s.a, s.b);
    REQUIRE_FALSE(r.constructible());
    const auto& missing = r.frontier.front().missing;
    CHECK(std::find(missing.begin(), missing.end(), "arrow e") != missing.end());
}

TEST_CASE("tampered certificates do not replay") {
    auto s = sequent("RegEpiFixedSeq");
    auto r = certify_constructible(s.a, s.b);
    REQUIRE(r.certificate);
    auto cert = *r.certificate;
    REQUIRE(cert.steps.size() > 2);

    auto dropped = cert;
    dropped.steps.pop_back();
    CHECK_FALSE(replay_certificate(dropped, s.a, s.b));

    auto swapped = cert;
    std::swap(swapped.steps[0], swapped.steps[1]);
    CHECK_FALSE(replay_certificate(swapped, s.a, s.b));

    auto repeated = cert;
    repeated.steps.push_back(cert.steps.front());
    CHECK_FALSE(replay_certificate(repeated, s.a, s.b));

    CHECK_FALSE(replay_certificate(cert, s.a, sequent("RegEpiRawSeq").b));
}

TEST_CASE("dual certificates replay on the dual inclusion") {
    for (const auto& [name, expect] : golden) {
        auto s = sequent(name);
        auto d = dualize_sequent(s);
        auto r = certify_constructible(s.a, s.b);
        auto rd = certify_constructible(d.a, d.b);
        INFO(name);
        CHECK(r.constructible() == rd.constructible());
        if (r.certificate) CHECK(replay_certificate(dualize_certificate(*r.certificate), d.a, d.b));
    }
}

TEST_CASE("apply_step guards") {
    const auto& b = sketch("ProdB");
    ItemSet start = items_of(sketch("ProdA"), b);
    auto steps = applicable_steps(start, b);
    REQUIRE_FALSE(steps.empty());
    for (const auto& st : steps) {
        auto next = apply_step(start, b, st);
        REQUIRE(next);
        CHECK(next->contains(start));
        CHECK(next->count() > start.count());
    }
    ConstructStep bogus;
    bogus.procedure = Procedure::limit_object;
    bogus.objects = {"X"};
    CHECK_FALSE(apply_step(start, b, bogus));
    CHECK_FALSE(apply_step(all_items(b), b, steps.front()));
}

TEST_CASE("budget exhaustion is an error, not a refusal") {
    auto s = sequent("RegEpiFixedSeq");
    CHECK_THROWS_AS(certify_constructible(s.a, s.b, ConstructOptions{1}), BudgetExceeded);
}

TEST_CASE("procedure names") {
    for (auto p : {Procedure::include_conditions, Procedure::defined_arrow, Procedure::limit_object,
                   Procedure::colimit_object, Procedure::induced_into_limit, Procedure::induced_from_colimit}) {
        CHECK(procedure_from_short_name(short_name(p)) == p);
        CHECK(dual(dual(p)) == p);
    }
    CHECK(dual(Procedure::limit_object) == Procedure::colimit_object);
}

TEST_CASE("applicable steps at the start and at the end") {
    auto mono = sequent("MonoSeq");
    auto steps = applicable_steps(items_of(mono.a, mono.b), mono.b);
    REQUIRE(steps.size() == 1);
    CHECK(steps[0].procedure == Procedure::include_conditions);
    CHECK(steps[0].convergences == std::vector<std::size_t>{0});
    CHECK(applicable_steps(all_items(mono.b), mono.b).empty());

    auto prod = sequent("ProdSeq");
    auto p = applicable_steps(items_of(prod.a, prod.b), prod.b);
    REQUIRE(p.size() == 1);
    CHECK(p[0].procedure == Procedure::limit_object);
}

TEST_CASE("breadth-first oracle decides every corpus inclusion") {
    for (const auto& [name, expect] : golden) {
        auto s = sequent(name);
        INFO(name);
        auto bfs = oracle::reachable(s.a, s.b);
        REQUIRE(bfs);
        CHECK(*bfs == expect);
    }
}
