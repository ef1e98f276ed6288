// Backtracking enumeration of structures and natural transformations.
//
// Variables are taken in a fixed order: vertex 0, then every edge whose
// endpoints are both assigned, vertex 1, and so on. Each condition is checked
// as soon as the last variable it mentions is assigned. The parallel path
// expands a breadth-first frontier of prefixes and runs the serial search
// below each prefix; per-prefix results are concatenated in prefix order,
// which is the serial order.

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <map>
#include <stdexcept>

#include "sketchkit/models.hpp"

namespace sketchkit {

namespace {

constexpr std::int32_t kUnset = -1;
constexpr std::size_t kFrontierTarget = 64;

struct Var {
    bool vertex;
    std::size_t index;
};

struct CompiledPath {
    std::size_t start;
    std::vector<std::size_t> edges;
};

struct CompiledConvergence {
    ConeKind kind;
    std::vector<std::size_t> diagram_vertices;
    std::vector<std::pair<std::size_t, std::size_t>> shape_edges;  // shape endpoints
    std::vector<std::size_t> diagram_edges;
    std::size_t vertex;
    std::vector<std::size_t> legs;
};

struct Check {
    bool convergence;
    std::size_t index;
};

struct Assignment {
    std::vector<std::int32_t> obj;
    std::vector<std::int32_t> arr;
};

using ConvergenceCache = std::vector<std::map<std::vector<std::int32_t>, bool>>;

class NodeCounter {
public:
    explicit NodeCounter(std::uint64_t budget) : budget_(budget) {}
    // False once the budget is spent.
    bool tick() {
        if (exceeded_.load(std::memory_order_relaxed)) return false;
        if (count_.fetch_add(1, std::memory_order_relaxed) + 1 > budget_) {
            exceeded_.store(true, std::memory_order_relaxed);
            return false;
        }
        return true;
    }
    bool exceeded() const { return exceeded_.load(); }
    void raise() const {
        throw BudgetExceeded("structure search exceeded its budget of " + std::to_string(budget_) + " nodes");
    }

private:
    std::uint64_t budget_;
    std::atomic<std::uint64_t> count_{0};
    std::atomic<bool> exceeded_{false};
};

class Engine {
public:
    Engine(const Sketch& z, const FiniteCategory& c, std::vector<std::optional<ObjectId>> vertex_pins,
           std::vector<std::optional<ArrowId>> edge_pins)
        : z_(z), c_(c), vpins_(std::move(vertex_pins)), epins_(std::move(edge_pins)) {
        const auto& g = z.graph;
        const auto nv = g.vertices.size();
        const auto ne = g.edges.size();
        vpins_.resize(nv);
        epins_.resize(ne);

        auto vidx = [&](const std::string& n) {
            auto i = g.vertex_index(n);
            if (!i) throw ResolutionError("unknown vertex '" + n + "'");
            return *i;
        };
        auto eidx = [&](const std::string& n) {
            auto i = g.edge_index(n);
            if (!i) throw ResolutionError("unknown edge '" + n + "'");
            return *i;
        };

        for (const auto& e : g.edges) {
            esrc_.push_back(vidx(e.source));
            etgt_.push_back(vidx(e.target));
        }

        // Variable order and the position at which each variable is set.
        std::vector<std::size_t> vpos(nv), epos(ne);
        for (std::size_t v = 0; v < nv; ++v) {
            vpos[v] = order_.size();
            order_.push_back({true, v});
            for (std::size_t e = 0; e < ne; ++e) {
                if (std::max(esrc_[e], etgt_[e]) == v) {
                    epos[e] = order_.size();
                    order_.push_back({false, e});
                }
            }
        }
        checks_.resize(order_.size());

        auto last_position = [&](const ConditionSupport& s) {
            std::size_t p = 0;
            for (const auto& v : s.vertices) p = std::max(p, vpos[vidx(v)]);
            for (const auto& e : s.edges) p = std::max(p, epos[eidx(e)]);
            return p;
        };
        auto compile = [&](const Path& p) {
            CompiledPath cp{vidx(p.start), {}};
            for (const auto& e : p.edges) cp.edges.push_back(eidx(e));
            return cp;
        };

        for (std::size_t i = 0; i < z.commutativities.size(); ++i) {
            const auto& cc = z.commutativities[i];
            comms_.push_back({compile(cc.lhs), compile(cc.rhs)});
            if (!order_.empty()) checks_[last_position(support(cc))].push_back({false, i});
        }
        for (std::size_t i = 0; i < z.convergences.size(); ++i) {
            const auto& cv = z.convergences[i];
            CompiledConvergence k{cv.kind, {}, {}, {}, vidx(cv.vertex), {}};
            for (const auto& v : cv.diagram_vertices) k.diagram_vertices.push_back(vidx(v));
            for (const auto& he : cv.shape.edges) {
                auto s = cv.shape.vertex_index(he.source);
                auto t = cv.shape.vertex_index(he.target);
                if (!s || !t) throw ResolutionError("shape edge '" + he.name + "' has an undeclared endpoint");
                k.shape_edges.emplace_back(*s, *t);
            }
            for (const auto& e : cv.diagram_edges) k.diagram_edges.push_back(eidx(e));
            for (const auto& l : cv.legs) k.legs.push_back(eidx(l));
            convs_.push_back(std::move(k));
            checks_[last_position(support(cv))].push_back({true, i});
        }
    }

    std::size_t depth() const { return order_.size(); }

    Assignment blank() const {
        return {std::vector<std::int32_t>(z_.graph.vertices.size(), kUnset),
                std::vector<std::int32_t>(z_.graph.edges.size(), kUnset)};
    }

    ConvergenceCache fresh_cache() const { return ConvergenceCache(convs_.size()); }

    // Candidate values for the variable at position p.
    template <class F>
    void for_each_candidate(const Assignment& s, std::size_t p, F&& f) const {
        const Var& var = order_[p];
        if (var.vertex) {
            if (auto pin = vpins_[var.index]) {
                f(static_cast<std::int32_t>(index(*pin)));
                return;
            }
            for (std::size_t o = 0; o < c_.object_count(); ++o) {
                if (!f(static_cast<std::int32_t>(o))) return;
            }
            return;
        }
        ObjectId src = object_id(s.obj[esrc_[var.index]]);
        ObjectId tgt = object_id(s.obj[etgt_[var.index]]);
        if (auto pin = epins_[var.index]) {
            if (c_.source(*pin) == src && c_.target(*pin) == tgt) f(static_cast<std::int32_t>(index(*pin)));
            return;
        }
        for (ArrowId a : c_.hom(src, tgt)) {
            if (!f(static_cast<std::int32_t>(index(a)))) return;
        }
    }

    void set(Assignment& s, std::size_t p, std::int32_t value) const {
        const Var& var = order_[p];
        (var.vertex ? s.obj : s.arr)[var.index] = value;
    }

    bool checks_pass(const Assignment& s, std::size_t p, ConvergenceCache& cache) const {
        for (const Check& ch : checks_[p]) {
            if (ch.convergence ? !convergence_holds(s, ch.index, cache) : !commutes(s, ch.index)) return false;
        }
        return true;
    }

    Structure finish(const Assignment& s) const {
        Structure out{{}, c_.name(), {}, {}};
        for (auto o : s.obj) out.objects.push_back(object_id(o));
        for (auto a : s.arr) out.arrows.push_back(arrow_id(a));
        return out;
    }

    // Depth-first from position p. `emit` returns false to stop; returns
    // false if the search was stopped (by emit or by the budget).
    template <class Emit>
    bool dfs(Assignment& s, std::size_t p, ConvergenceCache& cache, NodeCounter& nodes, Emit& emit) const {
        if (p == order_.size()) return emit(s);
        bool keep_going = true;
        for_each_candidate(s, p, [&](std::int32_t value) {
            if (!nodes.tick()) return keep_going = false;
            set(s, p, value);
            if (checks_pass(s, p, cache)) keep_going = dfs(s, p + 1, cache, nodes, emit);
            return keep_going;
        });
        set(s, p, kUnset);
        return keep_going;
    }

    // Level-by-level expansion, stopping once the frontier is wide enough.
    std::vector<Assignment> frontier(std::size_t& p, NodeCounter& nodes) const {
        std::vector<Assignment> level{blank()};
        ConvergenceCache cache = fresh_cache();
        p = 0;
        while (p < order_.size() && !level.empty() && level.size() < kFrontierTarget) {
            std::vector<Assignment> next;
            for (auto& s : level) {
                for_each_candidate(s, p, [&](std::int32_t value) {
                    if (!nodes.tick()) return false;
                    Assignment t = s;
                    set(t, p, value);
                    if (checks_pass(t, p, cache)) next.push_back(std::move(t));
                    return true;
                });
                if (nodes.exceeded()) nodes.raise();
            }
            level = std::move(next);
            ++p;
        }
        return level;
    }

private:
    ArrowId evaluate(const Assignment& s, const CompiledPath& path) const {
        ArrowId acc = c_.identity(object_id(s.obj[path.start]));
        for (auto e : path.edges) acc = *c_.compose(arrow_id(s.arr[e]), acc);
        return acc;
    }

    bool commutes(const Assignment& s, std::size_t i) const {
        return evaluate(s, comms_[i].first) == evaluate(s, comms_[i].second);
    }

    bool convergence_holds(const Assignment& s, std::size_t i, ConvergenceCache& cache) const {
        const auto& k = convs_[i];
        std::vector<std::int32_t> key;
        key.reserve(k.diagram_vertices.size() + k.diagram_edges.size() + k.legs.size() + 1);
        for (auto v : k.diagram_vertices) key.push_back(s.obj[v]);
        for (auto e : k.diagram_edges) key.push_back(s.arr[e]);
        key.push_back(s.obj[k.vertex]);
        for (auto l : k.legs) key.push_back(s.arr[l]);
        auto [it, inserted] = cache[i].try_emplace(std::move(key), false);
        if (!inserted) return it->second;

        Diagram d;
        for (auto v : k.diagram_vertices) d.objects.push_back(object_id(s.obj[v]));
        for (std::size_t j = 0; j < k.shape_edges.size(); ++j) {
            d.edges.push_back({k.shape_edges[j].first, k.shape_edges[j].second, arrow_id(s.arr[k.diagram_edges[j]])});
        }
        Cone cone{object_id(s.obj[k.vertex]), {}, k.kind};
        for (auto l : k.legs) cone.legs.push_back(arrow_id(s.arr[l]));
        it->second = is_universal_cone(c_, d, cone);
        return it->second;
    }

    const Sketch& z_;
    const FiniteCategory& c_;
    std::vector<std::optional<ObjectId>> vpins_;
    std::vector<std::optional<ArrowId>> epins_;
    std::vector<std::size_t> esrc_, etgt_;
    std::vector<Var> order_;
    std::vector<std::vector<Check>> checks_;
    std::vector<std::pair<CompiledPath, CompiledPath>> comms_;
    std::vector<CompiledConvergence> convs_;
};

std::vector<Structure> run_serial(const Engine& engine, std::uint64_t budget, std::size_t limit) {
    NodeCounter nodes(budget);
    ConvergenceCache cache = engine.fresh_cache();
    std::vector<Structure> out;
    Assignment s = engine.blank();
    auto emit = [&](const Assignment& a) {
        out.push_back(engine.finish(a));
        return out.size() < limit;
    };
    engine.dfs(s, 0, cache, nodes, emit);
    if (nodes.exceeded()) nodes.raise();
    return out;
}

std::vector<Structure> run_parallel(const Engine& engine, std::uint64_t budget) {
    NodeCounter nodes(budget);
    std::size_t p = 0;
    std::vector<Assignment> prefixes = engine.frontier(p, nodes);
    std::vector<Structure> out;
    if (p == engine.depth()) {
        for (const auto& s : prefixes) out.push_back(engine.finish(s));
        return out;
    }

    std::vector<std::vector<Structure>> parts(prefixes.size());
    const auto n = static_cast<std::int64_t>(prefixes.size());
#pragma omp parallel
    {
        ConvergenceCache cache = engine.fresh_cache();
#pragma omp for schedule(dynamic)
        for (std::int64_t k = 0; k < n; ++k) {
            if (nodes.exceeded()) continue;
            auto& part = parts[static_cast<std::size_t>(k)];
            auto emit = [&](const Assignment& a) {
                part.push_back(engine.finish(a));
                return true;
            };
            Assignment s = prefixes[static_cast<std::size_t>(k)];
            engine.dfs(s, p, cache, nodes, emit);
        }
    }
    if (nodes.exceeded()) nodes.raise();
    for (auto& part : parts) {
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return out;
}

void label(std::vector<Structure>& v, const std::string& sketch) {
    for (auto& s : v) s.sketch = sketch;
}

// Pins on b forced by H . phi = g, or nullopt if g asks for two different
// values at the same place.
std::optional<std::pair<std::vector<std::optional<ObjectId>>, std::vector<std::optional<ArrowId>>>> fibre_pins(
    const SketchMorphism& phi, const Sketch& a, const Sketch& b, const Structure& g) {
    std::vector<std::optional<ObjectId>> vp(b.graph.vertices.size());
    std::vector<std::optional<ArrowId>> ep(b.graph.edges.size());
    for (std::size_t v = 0; v < a.graph.vertices.size(); ++v) {
        auto bi = b.graph.vertex_index(phi.vertex(a.graph.vertices[v]));
        if (!bi) throw ResolutionError("morphism sends a vertex outside the target sketch");
        if (vp[*bi] && *vp[*bi] != g.objects[v]) return std::nullopt;
        vp[*bi] = g.objects[v];
    }
    for (std::size_t e = 0; e < a.graph.edges.size(); ++e) {
        auto bi = b.graph.edge_index(phi.edge(a.graph.edges[e].name));
        if (!bi) throw ResolutionError("morphism sends an edge outside the target sketch");
        if (ep[*bi] && *ep[*bi] != g.arrows[e]) return std::nullopt;
        ep[*bi] = g.arrows[e];
    }
    return std::make_pair(std::move(vp), std::move(ep));
}

}  // namespace

std::vector<Structure> enumerate_structures(const Sketch& z, const FiniteCategory& c, const SearchOptions& opts) {
    if (!opts.parallel) return enumerate_structures_serial(z, c, opts);
    Engine engine(z, c, {}, {});
    return run_parallel(engine, opts.budget);
}

std::vector<Structure> enumerate_structures_serial(const Sketch& z, const FiniteCategory& c,
                                                   const SearchOptions& opts) {
    Engine engine(z, c, {}, {});
    return run_serial(engine, opts.budget, SIZE_MAX);
}

std::vector<Structure> fibre(const SketchMorphism& phi, const Sketch& a, const Sketch& b, const FiniteCategory& c,
                             const Structure& g, const SearchOptions& opts) {
    auto pins = fibre_pins(phi, a, b, g);
    if (!pins) return {};
    Engine engine(b, c, std::move(pins->first), std::move(pins->second));
    auto out = opts.parallel ? run_parallel(engine, opts.budget) : run_serial(engine, opts.budget, SIZE_MAX);
    label(out, g.sketch);
    return out;
}

std::optional<Structure> first_in_fibre(const SketchMorphism& phi, const Sketch& a, const Sketch& b,
                                        const FiniteCategory& c, const Structure& g, const SearchOptions& opts) {
    auto pins = fibre_pins(phi, a, b, g);
    if (!pins) return std::nullopt;
    Engine engine(b, c, std::move(pins->first), std::move(pins->second));
    auto out = run_serial(engine, opts.budget, 1);
    if (out.empty()) return std::nullopt;
    return out.front();
}

namespace {

template <class Emit>
void search_transformations(const Sketch& z, const FiniteCategory& c, const Structure& f, const Structure& g,
                            const PinnedComponents& pinned, bool isos_only, Emit&& emit) {
    if (f.category != g.category || f.objects.size() != g.objects.size() || f.arrows.size() != g.arrows.size() ||
        f.objects.size() != z.graph.vertices.size()) {
        throw std::invalid_argument("structures are over different sketches or categories");
    }
    const auto nv = z.graph.vertices.size();
    // Naturality squares to check once vertex v is assigned.
    std::vector<std::vector<std::size_t>> squares(nv);
    std::vector<std::size_t> src, tgt;
    for (std::size_t e = 0; e < z.graph.edges.size(); ++e) {
        src.push_back(*z.graph.vertex_index(z.graph.edges[e].source));
        tgt.push_back(*z.graph.vertex_index(z.graph.edges[e].target));
        squares[std::max(src.back(), tgt.back())].push_back(e);
    }
    std::vector<ArrowId> comp(nv);
    auto rec = [&](auto& self, std::size_t v) -> bool {
        if (v == nv) return emit(NatTransformation{f, g, comp});
        std::vector<ArrowId> options;
        if (v < pinned.size() && pinned[v]) {
            ArrowId a = *pinned[v];
            if (c.source(a) != f.objects[v] || c.target(a) != g.objects[v]) return true;
            options.push_back(a);
        } else {
            auto hom = c.hom(f.objects[v], g.objects[v]);
            options.assign(hom.begin(), hom.end());
        }
        for (ArrowId a : options) {
            if (isos_only && !is_iso(c, a)) continue;
            comp[v] = a;
            bool ok = true;
            for (auto e : squares[v]) {
                if (c.compose(g.arrows[e], comp[src[e]]) != c.compose(comp[tgt[e]], f.arrows[e])) {
                    ok = false;
                    break;
                }
            }
            if (ok && !self(self, v + 1)) return false;
        }
        return true;
    };
    rec(rec, 0);
}

}  // namespace

std::vector<NatTransformation> enumerate_nat_transformations(const Sketch& z, const FiniteCategory& c,
                                                             const Structure& f, const Structure& g,
                                                             const PinnedComponents& pinned) {
    std::vector<NatTransformation> out;
    search_transformations(z, c, f, g, pinned, false, [&](NatTransformation t) {
        out.push_back(std::move(t));
        return true;
    });
    return out;
}

std::optional<NatTransformation> find_natural_iso(const Sketch& z, const FiniteCategory& c, const Structure& f,
                                                  const Structure& g) {
    std::optional<NatTransformation> found;
    search_transformations(z, c, f, g, {}, true, [&](NatTransformation t) {
        found = std::move(t);
        return false;
    });
    return found;
}

}  // namespace sketchkit
