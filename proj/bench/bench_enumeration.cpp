// Serial vs OpenMP structure enumeration on corpus workloads.
//
//   sketchkit_bench [repetitions]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include "sketchkit/cli.hpp"
#include "sketchkit/dsl.hpp"
#include "sketchkit/models.hpp"

using namespace sketchkit;

namespace {

struct Workload {
    const char* sketch;
    const char* category;
};

// The subsets of an n-element set ordered by inclusion.
FiniteCategory boolean_lattice(int n) {
    CategoryBuilder b("Bool" + std::to_string(n));
    auto name = [](int m) { return "s" + std::to_string(m); };
    for (int m = 0; m < (1 << n); ++m) b.add_object(name(m));
    auto arrow = [&](int x, int y) { return x == y ? "id_" + name(x) : name(x) + "_" + name(y); };
    for (int x = 0; x < (1 << n); ++x) {
        for (int y = 0; y < (1 << n); ++y) {
            if (x != y && (x & y) == x) b.add_arrow(arrow(x, y), name(x), name(y));
        }
    }
    for (int x = 0; x < (1 << n); ++x) {
        for (int y = 0; y < (1 << n); ++y) {
            for (int z = 0; z < (1 << n); ++z) {
                if ((x & y) == x && (y & z) == y && x != y && y != z) b.set_composite(arrow(y, z), arrow(x, y), arrow(x, z));
            }
        }
    }
    return b.build();
}

template <class F>
double best_ms(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        f();
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        if (ms < best) best = ms;
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    int reps = argc > 1 ? std::atoi(argv[1]) : 5;
    std::ifstream in(default_corpus_dir() / "corpus.sk");
    std::stringstream ss;
    ss << in.rdbuf();
    auto parsed = parse_document(ss.str());
    if (!parsed.ok()) {
        std::fprintf(stderr, "corpus does not parse\n");
        return 2;
    }
    Document d = parsed.document;
    d.add(boolean_lattice(3));
    d.add(boolean_lattice(4));

    const std::vector<Workload> loads = {
        {"RegEpiFixedB", "B2"}, {"RegEpiFixedB", "ParFork"}, {"BiprodB", "B2"},  {"ReflB2", "ParFork"},
        {"PbB", "B2Op"},        {"ChoiceB", "B2"},           {"IdemB", "Iso2"},   {"ProdB", "Vee"},
        {"PbB", "Bool4"},       {"BiprodB", "Bool3"},        {"RegEpiFixedB", "Bool3"}, {"ReflB2", "Bool4"},
    };

    std::printf("threads %d, best of %d\n", omp_get_max_threads(), reps);
    std::printf("%-14s %-9s %8s %11s %11s %8s %s\n", "sketch", "category", "models", "serial_ms", "omp_ms",
                "speedup", "same");
    for (const auto& w : loads) {
        const auto& z = d.find_sketch(w.sketch)->sketch;
        const auto& c = *d.find_category(w.category);
        std::vector<Structure> serial, parallel;
        double ts = best_ms(reps, [&] { serial = enumerate_structures_serial(z, c); });
        double tp = best_ms(reps, [&] { parallel = enumerate_structures(z, c); });
        std::printf("%-14s %-9s %8zu %11.3f %11.3f %8.2f %s\n", w.sketch, w.category, serial.size(), ts, tp,
                    tp > 0 ? ts / tp : 0.0, serial == parallel ? "yes" : "NO");
    }
    return 0;
}
