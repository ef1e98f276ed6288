// One line per acceptance criterion. Exit status is non-zero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <tuple>

#include "test_support.hpp"

using namespace sketchkit;
using namespace testsupport;

namespace {

// Wall-clock limits per criterion, in seconds.
constexpr double kLimit1 = 5, kLimit2 = 5, kLimit3 = 5, kLimit4 = 30, kLimit5 = 60, kLimit6 = 30, kLimit7 = 30,
                 kLimit8 = 30, kLimit10 = 10;
constexpr int kTransportInstances = 500;
constexpr int kGeneratedDocuments = 1000;

struct Outcome {
    bool ok = true;
    std::string detail;
};

int failures = 0;

void report(int n, const char* title, double limit, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = limit <= 0 || s < limit;
    bool pass = o.ok && in_time;
    if (!pass) ++failures;
    std::printf("criterion %2d %s: %s (%.3f s%s%s) %s\n", n, pass ? "PASS" : "FAIL", title, s,
                limit > 0 ? ", limit " : "", limit > 0 ? (std::to_string(static_cast<int>(limit)) + " s").c_str() : "",
                o.detail.c_str());
    std::fflush(stdout);
}

std::vector<const FiniteCategory*> all_corpus_categories() {
    std::vector<const FiniteCategory*> out;
    for (const auto& c : corpus().categories) out.push_back(&c);
    return out;
}

Outcome arrow_sequent_vs(const std::string& seq, bool (*oracle_fn)(const FiniteCategory&, ArrowId)) {
    auto s = sequent(seq);
    std::size_t n = 0, bad = 0;
    for (const auto* c : all_corpus_categories()) {
        for (std::size_t f = 0; f < c->arrow_count(); ++f) {
            auto st = arrow_structure(*c, arrow_id(f));
            bool got = exists_verification(s, *c, st).holds;
            if (got != oracle_fn(*c, arrow_id(f))) ++bad;
            ++n;
        }
    }
    return {bad == 0, std::to_string(n) + " arrows, " + std::to_string(bad) + " mismatches"};
}

std::vector<std::string> certified_sequents() {
    std::vector<std::string> out;
    for (const auto& q : corpus().sequents) {
        auto s = sequent(q.name);
        if (certify_constructible(s.a, s.b).constructible()) out.push_back(q.name);
    }
    return out;
}

// Some natural isomorphism h => k that is the identity on the vertices of a.
bool iso_over(const Sketch& a, const Sketch& b, const FiniteCategory& c, const Structure& h, const Structure& k) {
    PinnedComponents pins(b.graph.vertices.size());
    for (std::size_t i = 0; i < b.graph.vertices.size(); ++i) {
        if (a.graph.has_vertex(b.graph.vertices[i])) pins[i] = c.identity(h.objects[i]);
    }
    for (const auto& t : enumerate_nat_transformations(b, c, h, k, pins)) {
        if (is_natural_iso(c, t)) return true;
    }
    return false;
}

Outcome criterion5() {
    std::size_t cases = 0, disagree = 0, non_iso = 0;
    for (const auto& name : certified_sequents()) {
        auto s = sequent(name);
        auto alpha = SketchMorphism::inclusion(s.x);
        auto beta = SketchMorphism::inclusion(s.a);
        for (const auto* cp : all_corpus_categories()) {
            const auto& c = *cp;
            for (const auto& f : enumerate_structures(s.x, c)) {
                ++cases;
                bool strict = exists_verification(s, c, f).holds;
                bool iso = exists_verification_upto_iso(s, c, f).holds;
                FunctorialOptions fo;
                fo.force_generic = true;
                bool functorial = exists_functorial_verification(s, c, f, fo).holds;
                if (strict != iso || strict != functorial) ++disagree;
                for (const auto& g : fibre(alpha, s.x, s.a, c, f)) {
                    auto hs = fibre(beta, s.a, s.b, c, g);
                    for (std::size_t i = 1; i < hs.size(); ++i) {
                        if (!iso_over(s.a, s.b, c, hs[0], hs[i])) ++non_iso;
                    }
                }
            }
        }
    }
    std::string detail = std::to_string(cases) + " cases over all corpus categories, " +
                         std::to_string(disagree) + " disagreements, " + std::to_string(non_iso) +
                         " non-isomorphic witness pairs";
    return {cases > 0 && disagree == 0 && non_iso == 0, detail};
}

Outcome criterion6() {
    std::size_t pairs = 0, bad = 0;
    for (const auto& name : certified_sequents()) {
        auto s = sequent(name);
        auto beta = SketchMorphism::inclusion(s.a);
        for (const auto* cp : all_corpus_categories()) {
            const auto& c = *cp;
            auto models = enumerate_structures(s.b, c);
            for (const auto& h : models) {
                auto hb = restrict_to_subsketch(s.a, s.b, h);
                for (const auto& k : models) {
                    auto kb = restrict_to_subsketch(s.a, s.b, k);
                    auto up = enumerate_nat_transformations(s.b, c, h, k);
                    auto down = enumerate_nat_transformations(s.a, c, hb, kb);
                    std::set<std::vector<ArrowId>> image;
                    for (const auto& t : up) image.insert(restrict_transformation(beta, s.a, s.b, t).components);
                    bool injective = image.size() == up.size();
                    bool surjective = image.size() == down.size();
                    if (!injective || !surjective) ++bad;
                    ++pairs;
                }
            }
        }
    }
    return {bad == 0, std::to_string(pairs) + " structure pairs, " + std::to_string(bad) + " not bijective"};
}

Outcome criterion7() {
    std::size_t checked = 0, bad = 0;
    for (const auto& q : corpus().sequents) {
        auto s = sequent(q.name);
        auto d = dualize_sequent(s);
        if (is_unconditional_finite_kind(s) != is_unconditional_finite_kind(d)) ++bad;
        if (certify_constructible(s.a, s.b).constructible() != certify_constructible(d.a, d.b).constructible()) {
            ++bad;
        }
        checked += 2;
        for (const auto* cp : all_corpus_categories()) {
            const auto& c = *cp;
            auto dc = dual_category(c);
            for (const auto& f : enumerate_structures(s.x, c)) {
                auto fd = dualize_structure(f, dc);
                if (exists_verification(s, c, f).holds != exists_verification(d, dc, fd).holds) ++bad;
                ++checked;
            }
        }
    }
    return {bad == 0, std::to_string(checked) + " comparisons, " + std::to_string(bad) + " differ"};
}

Outcome criterion8() {
    std::mt19937_64 rng(8);
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    // (sequent, category) pairs with at least one b-structure
    struct Pool {
        ExactnessSequent s;
        const FiniteCategory* c;
        std::vector<Structure> hs, gs;
    };
    std::vector<Pool> pools;
    for (const auto& q : corpus().sequents) {
        for (const auto& cn : target_categories()) {
            auto s = sequent(q.name);
            const auto& c = cat(cn);
            auto hs = enumerate_structures(s.b, c);
            if (hs.empty()) continue;
            pools.push_back({s, &c, hs, enumerate_structures(s.a, c)});
        }
    }
    int done = 0, bad = 0, attempts = 0;
    while (done < kTransportInstances && attempts < 100 * kTransportInstances) {
        ++attempts;
        auto& p = pools[pick(pools.size())];
        const auto& h = p.hs[pick(p.hs.size())];
        auto hb = restrict_to_subsketch(p.s.a, p.s.b, h);
        const auto& g = p.gs[pick(p.gs.size())];
        std::vector<NatTransformation> isos;
        for (auto& t : enumerate_nat_transformations(p.s.a, *p.c, hb, g)) {
            if (is_natural_iso(*p.c, t)) isos.push_back(std::move(t));
        }
        if (isos.empty()) continue;
        const auto& i = isos[pick(isos.size())];
        auto beta = SketchMorphism::inclusion(p.s.a);
        auto e = transport_along_iso(beta, p.s.a, p.s.b, *p.c, h, i);
        bool ok = is_structure(p.s.b, *p.c, e.structure) && restrict_to_subsketch(p.s.a, p.s.b, e.structure) == g &&
                  restrict_transformation(beta, p.s.a, p.s.b, e.iso) == i && is_natural_iso(*p.c, e.iso);
        if (!ok) ++bad;
        ++done;
    }
    return {done == kTransportInstances && bad == 0,
            std::to_string(done) + " instances, " + std::to_string(bad) + " violations"};
}

// Every graph morphism of z into c that satisfies the commutativities,
// passed to `visit`.
void graph_maps(const Sketch& z, const FiniteCategory& c, const std::function<void(const Structure&)>& visit) {
    Structure s;
    s.objects.assign(z.graph.vertices.size(), object_id(0));
    s.arrows.assign(z.graph.edges.size(), arrow_id(0));
    std::function<void(std::size_t)> edges = [&](std::size_t j) {
        if (j == z.graph.edges.size()) {
            for (const auto& cm : z.commutativities) {
                auto l = oracle::eval(z, c, s, cm.lhs), r = oracle::eval(z, c, s, cm.rhs);
                if (!l || !r || *l != *r) return;
            }
            return visit(s);
        }
        const auto& e = z.graph.edges[j];
        for (ArrowId a :
             c.hom(s.objects[*z.graph.vertex_index(e.source)], s.objects[*z.graph.vertex_index(e.target)])) {
            s.arrows[j] = a;
            edges(j + 1);
        }
    };
    std::function<void(std::size_t)> vertices = [&](std::size_t i) {
        if (i == z.graph.vertices.size()) return edges(0);
        for (std::size_t o = 0; o < c.object_count(); ++o) {
            s.objects[i] = object_id(o);
            vertices(i + 1);
        }
    };
    vertices(0);
}

Outcome criterion9() {
    // sketches carrying convergence conditions in suites 1 to 5
    std::set<std::string> names;
    for (const auto& n : {"IsoSeq", "MonoSeq", "ProdSeq"}) names.insert(sequent(n).b_name);
    for (const auto& n : certified_sequents()) {
        auto s = sequent(n);
        names.insert(s.a_name);
        names.insert(s.b_name);
    }
    using Key = std::tuple<std::string, std::vector<int>, std::vector<std::tuple<std::size_t, std::size_t, int>>, int,
                           std::vector<int>, int>;
    std::set<Key> seen;
    std::size_t instances = 0, bad = 0, positive = 0;
    for (const auto& zn : names) {
        const auto& z = sketch(zn);
        if (z.convergences.empty()) continue;
        for (const auto* c : all_corpus_categories()) {
            graph_maps(z, *c, [&](const Structure& s) {
                for (const auto& cv : z.convergences) {
                    auto [d, k] = oracle::diagram_of(z, s, cv);
                    Key key{c->name(), {}, {}, static_cast<int>(k.vertex), {}, static_cast<int>(k.orientation)};
                    for (auto o : d.objects) std::get<1>(key).push_back(static_cast<int>(o));
                    for (auto& e : d.edges) std::get<2>(key).emplace_back(e.source, e.target, static_cast<int>(e.arrow));
                    for (auto l : k.legs) std::get<4>(key).push_back(static_cast<int>(l));
                    if (!seen.insert(key).second) continue;
                    ++instances;
                    bool want = oracle::is_universal(*c, d, k);
                    bool got = cv.kind == ConeKind::limit ? is_limiting_cone(*c, d, k) : is_colimiting_cone(*c, d, k);
                    positive += want;
                    if (got != want) ++bad;
                }
            });
        }
    }
    return {bad == 0 && instances > 0, std::to_string(instances) + " distinct instances (" +
                                           std::to_string(positive) + " universal), " + std::to_string(bad) +
                                           " mismatches"};
}

Outcome criterion10() {
    std::size_t bad = 0;
    {
        auto back = parse_document(serialize_document(corpus()));
        if (!back.ok() || !(back.document == corpus())) ++bad;
    }
    DocumentGenerator gen(10);
    for (int i = 0; i < kGeneratedDocuments; ++i) {
        auto d = gen.next();
        auto back = parse_document(serialize_document(d));
        if (!back.ok() || !(back.document == d)) ++bad;
    }
    return {bad == 0, "corpus + " + std::to_string(kGeneratedDocuments) + " generated documents, " +
                          std::to_string(bad) + " mismatches"};
}

}  // namespace

int main() {
    report(1, "iso sequent vs is_iso oracle", kLimit1, [] { return arrow_sequent_vs("IsoSeq", oracle::is_iso); });

    report(2, "mono sequent vs is_mono oracle", kLimit2, [] {
        auto o = arrow_sequent_vs("MonoSeq", oracle::is_mono);
        const auto& pf = cat("ParFork");
        bool h_negative = !exists_verification(sequent("MonoSeq"), pf, arrow_structure(pf, *pf.find_arrow("h"))).holds;
        o.ok = o.ok && h_negative;
        o.detail += h_negative ? ", h in ParFork refused" : ", h in ParFork NOT refused";
        return o;
    });

    report(3, "product sequent vs meet oracle", kLimit3, [] {
        auto s = sequent("ProdSeq");
        Outcome o;
        for (const auto& cn : {"B2", "Vee"}) {
            const auto& c = cat(cn);
            bool meets = true;
            for (std::size_t x = 0; x < c.object_count(); ++x) {
                for (std::size_t y = 0; y < c.object_count(); ++y) {
                    meets = meets && oracle::meet_exists(c, object_id(x), object_id(y));
                }
            }
            bool got = exists_verification(s, c, empty_structure(c)).holds;
            bool expected = std::string(cn) == "B2";
            o.ok = o.ok && got == meets && got == expected;
            o.detail += std::string(cn) + (got ? " holds" : " fails") + "; ";
        }
        return o;
    });

    report(4, "constructibility golden set", kLimit4, [] {
        const std::vector<std::pair<std::string, bool>> golden = {
            {"MonoSeq", true},       {"IsoSeq", true},         {"ProdSeq", true}, {"ReflSeq2", true},
            {"ReflSeq1", false},     {"RegEpiRawSeq", false},  {"RegEpiFixedSeq", true},
        };
        Outcome o;
        for (const auto& [name, expect] : golden) {
            auto s = sequent(name);
            auto r = certify_constructible(s.a, s.b);
            bool replays = !r.certificate || replay_certificate(*r.certificate, s.a, s.b);
            bool ok = r.constructible() == expect && replays;
            o.ok = o.ok && ok;
            o.detail += name + (r.constructible() ? "=certified" : "=refused") + (ok ? "" : "(!)") + " ";
        }
        return o;
    });

    report(5, "strict / iso / functorial equivalence", kLimit5, criterion5);
    report(6, "restriction full and faithful", kLimit6, criterion6);
    report(7, "duality invariance", kLimit7, criterion7);
    report(8, "transport along isomorphisms", kLimit8, criterion8);
    report(9, "limit checks vs brute-force cones", 0, criterion9);
    report(10, "DSL round trip", kLimit10, criterion10);

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
