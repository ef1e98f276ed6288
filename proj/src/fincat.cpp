#include "sketchkit/fincat.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace sketchkit {

std::optional<ObjectId> FiniteCategory::find_object(std::string_view name) const {
    for (std::size_t i = 0; i < objects_.size(); ++i) {
        if (objects_[i] == name) return object_id(i);
    }
    return std::nullopt;
}

std::optional<ArrowId> FiniteCategory::find_arrow(std::string_view name) const {
    for (std::size_t i = 0; i < arrows_.size(); ++i) {
        if (arrows_[i].name == name) return arrow_id(i);
    }
    return std::nullopt;
}

std::optional<ArrowId> FiniteCategory::compose(ArrowId g, ArrowId f) const {
    if (target(f) != source(g)) return std::nullopt;
    auto v = table_[index(g) * arrows_.size() + index(f)];
    if (v < 0) return std::nullopt;
    return arrow_id(static_cast<std::size_t>(v));
}

void FiniteCategory::index_homs() {
    const std::size_t n = objects_.size();
    homs_.assign(n * n, {});
    for (std::size_t i = 0; i < arrows_.size(); ++i) {
        homs_[index(arrows_[i].source) * n + index(arrows_[i].target)].push_back(arrow_id(i));
    }
}

CategoryBuilder::CategoryBuilder(std::string name) { cat_.name_ = std::move(name); }

ObjectId CategoryBuilder::add_object(const std::string& name, std::string identity_name) {
    ObjectId o = add_bare_object(name);
    if (identity_name.empty()) identity_name = "id_" + name;
    ArrowId id = add_arrow(identity_name, name, name);
    cat_.identities_[index(o)] = id;
    has_identity_[index(o)] = true;
    return o;
}

ObjectId CategoryBuilder::add_bare_object(const std::string& name) {
    if (cat_.find_object(name) || cat_.find_arrow(name)) throw ResolutionError("duplicate name '" + name + "'");
    cat_.objects_.push_back(name);
    cat_.identities_.push_back(arrow_id(0));
    has_identity_.push_back(false);
    return object_id(cat_.objects_.size() - 1);
}

void CategoryBuilder::designate_identity(const std::string& object, const std::string& arrow) {
    auto o = cat_.find_object(object);
    if (!o) throw ResolutionError("unknown object '" + object + "'");
    ArrowId a = arrow_named(arrow);
    if (cat_.source(a) != *o || cat_.target(a) != *o) {
        throw ResolutionError("identity '" + arrow + "' is not a loop at '" + object + "'");
    }
    cat_.identities_[index(*o)] = a;
    has_identity_[index(*o)] = true;
}

ArrowId CategoryBuilder::add_arrow(const std::string& name, const std::string& source, const std::string& target) {
    if (cat_.find_object(name) || cat_.find_arrow(name)) throw ResolutionError("duplicate name '" + name + "'");
    auto s = cat_.find_object(source);
    auto t = cat_.find_object(target);
    if (!s) throw ResolutionError("arrow '" + name + "': unknown object '" + source + "'");
    if (!t) throw ResolutionError("arrow '" + name + "': unknown object '" + target + "'");
    cat_.arrows_.push_back({name, *s, *t});
    return arrow_id(cat_.arrows_.size() - 1);
}

ArrowId CategoryBuilder::arrow_named(const std::string& name) const {
    auto a = cat_.find_arrow(name);
    if (!a) throw ResolutionError("unknown arrow '" + name + "'");
    return *a;
}

void CategoryBuilder::set_composite(const std::string& g, const std::string& f, const std::string& h) {
    ArrowId ga = arrow_named(g), fa = arrow_named(f), ha = arrow_named(h);
    for (const auto& [g0, f0, h0] : composites_) {
        if (g0 == ga && f0 == fa && h0 != ha) {
            throw ResolutionError("conflicting composites for " + g + "." + f);
        }
    }
    composites_.emplace_back(ga, fa, ha);
}

FiniteCategory CategoryBuilder::build() const {
    FiniteCategory c = cat_;
    for (std::size_t i = 0; i < has_identity_.size(); ++i) {
        if (!has_identity_[i]) throw std::logic_error("object '" + c.objects_[i] + "' has no identity");
    }
    const std::size_t m = c.arrows_.size();
    c.table_.assign(m * m, -1);
    for (const auto& [g, f, h] : composites_) {
        c.table_[index(g) * m + index(f)] = static_cast<std::int32_t>(index(h));
    }
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = c.arrows_[i];
        auto left = index(c.identities_[index(a.target)]) * m + i;
        auto right = i * m + index(c.identities_[index(a.source)]);
        if (c.table_[left] < 0) c.table_[left] = static_cast<std::int32_t>(i);
        if (c.table_[right] < 0) c.table_[right] = static_cast<std::int32_t>(i);
    }
    c.index_homs();
    return c;
}

FiniteCategory free_category_on_acyclic(const std::string& name, const Graph& graph) {
    // Every nonempty path, found by extending shorter ones. A cycle shows up
    // as a path longer than the vertex count.
    std::vector<std::vector<std::size_t>> paths;
    for (std::size_t i = 0; i < graph.edges.size(); ++i) paths.push_back({i});
    for (std::size_t k = 0; k < paths.size(); ++k) {
        if (paths[k].size() > graph.vertices.size()) throw std::invalid_argument("graph has a cycle");
        const auto last = graph.edges[paths[k].back()].target;
        for (std::size_t i = 0; i < graph.edges.size(); ++i) {
            if (graph.edges[i].source == last) {
                auto p = paths[k];
                p.push_back(i);
                paths.push_back(std::move(p));
            }
        }
    }
    auto path_name = [&](const std::vector<std::size_t>& p) {
        std::string n;
        for (auto it = p.rbegin(); it != p.rend(); ++it) {
            if (!n.empty()) n += '_';
            n += graph.edges[*it].name;
        }
        return n;
    };
    CategoryBuilder b(name);
    for (const auto& v : graph.vertices) b.add_object(v);
    std::map<std::vector<std::size_t>, std::string> names;
    for (const auto& p : paths) {
        std::string n = path_name(p);
        try {
            b.add_arrow(n, graph.edges[p.front()].source, graph.edges[p.back()].target);
        } catch (const ResolutionError&) {
            throw std::invalid_argument("composite name '" + n + "' collides with an existing name");
        }
        names[p] = n;
    }
    for (const auto& p : paths) {
        for (const auto& q : paths) {
            if (graph.edges[p.back()].target != graph.edges[q.front()].source) continue;
            auto pq = p;
            pq.insert(pq.end(), q.begin(), q.end());
            b.set_composite(names[q], names[p], names[pq]);
        }
    }
    return b.build();
}

namespace {

// Composite only when the entry exists and has the right endpoints.
std::optional<ArrowId> typed_compose(const FiniteCategory& c, ArrowId g, ArrowId f) {
    auto h = c.compose(g, f);
    if (!h || c.source(*h) != c.source(f) || c.target(*h) != c.target(g)) return std::nullopt;
    return h;
}

}  // namespace

ValidationReport validate_category(const FiniteCategory& c) {
    ValidationReport r;
    std::set<std::string> names;
    for (const auto& o : c.objects()) {
        if (!names.insert(o).second) r.add("object '" + o + "'", "duplicate name");
    }
    for (const auto& a : c.arrows()) {
        if (!names.insert(a.name).second) r.add("arrow '" + a.name + "'", "duplicate name");
    }
    const std::size_t m = c.arrow_count();
    for (std::size_t gi = 0; gi < m; ++gi) {
        for (std::size_t fi = 0; fi < m; ++fi) {
            ArrowId g = arrow_id(gi), f = arrow_id(fi);
            if (c.target(f) != c.source(g)) continue;
            std::string loc = "compose " + c.arrow(g).name + "." + c.arrow(f).name;
            auto h = c.compose(g, f);
            if (!h) {
                r.add(loc, "composite is not defined");
                continue;
            }
            if (c.source(*h) != c.source(f) || c.target(*h) != c.target(g)) {
                r.add(loc, "composite '" + c.arrow(*h).name + "' has the wrong endpoints");
            }
        }
    }
    for (std::size_t fi = 0; fi < m; ++fi) {
        ArrowId f = arrow_id(fi);
        const auto& name = c.arrow(f).name;
        if (typed_compose(c, c.identity(c.target(f)), f).value_or(f) != f) {
            r.add("arrow '" + name + "'", "left identity law fails");
        }
        if (typed_compose(c, f, c.identity(c.source(f))).value_or(f) != f) {
            r.add("arrow '" + name + "'", "right identity law fails");
        }
    }
    for (std::size_t fi = 0; fi < m; ++fi) {
        for (std::size_t gi = 0; gi < m; ++gi) {
            auto gf = typed_compose(c, arrow_id(gi), arrow_id(fi));
            if (!gf) continue;
            for (std::size_t hi = 0; hi < m; ++hi) {
                ArrowId h = arrow_id(hi);
                auto hg = typed_compose(c, h, arrow_id(gi));
                if (!hg) continue;
                auto left = typed_compose(c, h, *gf);
                auto right = typed_compose(c, *hg, arrow_id(fi));
                if (left && right && *left != *right) {
                    r.add("compose " + c.arrow(h).name + "." + c.arrow(arrow_id(gi)).name + "." +
                              c.arrow(arrow_id(fi)).name,
                          "associativity fails");
                }
            }
        }
    }
    return r;
}

FiniteCategory dual_category(const FiniteCategory& c, std::string name) {
    CategoryBuilder b(name.empty() ? c.name() : std::move(name));
    for (const auto& o : c.objects()) b.add_bare_object(o);
    for (const auto& a : c.arrows()) b.add_arrow(a.name, c.object_name(a.target), c.object_name(a.source));
    for (std::size_t i = 0; i < c.object_count(); ++i) {
        b.designate_identity(c.objects()[i], c.arrow(c.identity(object_id(i))).name);
    }
    const std::size_t m = c.arrow_count();
    for (std::size_t gi = 0; gi < m; ++gi) {
        for (std::size_t fi = 0; fi < m; ++fi) {
            if (auto h = c.compose(arrow_id(gi), arrow_id(fi))) {
                b.set_composite(c.arrow(arrow_id(fi)).name, c.arrow(arrow_id(gi)).name, c.arrow(*h).name);
            }
        }
    }
    return b.build();
}

Sketch underlying_sketch(const FiniteCategory& c) {
    Sketch s;
    s.graph.vertices = c.objects();
    for (const auto& a : c.arrows()) {
        s.graph.edges.push_back({a.name, c.object_name(a.source), c.object_name(a.target)});
    }
    const std::size_t m = c.arrow_count();
    for (std::size_t fi = 0; fi < m; ++fi) {
        for (std::size_t gi = 0; gi < m; ++gi) {
            ArrowId f = arrow_id(fi), g = arrow_id(gi);
            auto h = c.compose(g, f);
            if (!h) continue;
            const auto& start = c.object_name(c.source(f));
            s.commutativities.push_back({Path{start, {c.arrow(f).name, c.arrow(g).name}}, Path{start, {c.arrow(*h).name}}});
        }
    }
    for (std::size_t i = 0; i < c.object_count(); ++i) {
        const auto& o = c.objects()[i];
        s.commutativities.push_back({Path{o, {c.arrow(c.identity(object_id(i))).name}}, Path{o, {}}});
    }
    return s;
}

ExtractedCategory extract_category(const Sketch& a, std::string name) {
    ExtractedCategory out;
    const auto& g = a.graph;
    std::vector<bool> consumed(a.commutativities.size(), false);
    auto consume = [&](const CommutativityCondition& c) {
        for (std::size_t i = 0; i < a.commutativities.size(); ++i) {
            if (same_commutativity(a.commutativities[i], c)) consumed[i] = true;
        }
    };

    std::vector<std::string> identity_of(g.vertices.size());
    for (std::size_t vi = 0; vi < g.vertices.size(); ++vi) {
        const auto& v = g.vertices[vi];
        for (const auto& e : g.edges) {
            if (e.source != v || e.target != v) continue;
            CommutativityCondition cond{Path{v, {e.name}}, Path{v, {}}};
            if (a.has_commutativity(cond)) {
                identity_of[vi] = e.name;
                consume(cond);
                break;
            }
        }
        if (identity_of[vi].empty()) {
            out.failure = "missing identity: no condition of the form e = id(" + v + ")";
            return out;
        }
    }

    CategoryBuilder b(std::move(name));
    try {
        for (const auto& v : g.vertices) b.add_bare_object(v);
        for (const auto& e : g.edges) b.add_arrow(e.name, e.source, e.target);
        for (std::size_t vi = 0; vi < g.vertices.size(); ++vi) b.designate_identity(g.vertices[vi], identity_of[vi]);
    } catch (const ResolutionError& err) {
        out.failure = std::string("ill-formed table: ") + err.what();
        return out;
    }

    for (const auto& f : g.edges) {
        for (const auto& gg : g.edges) {
            if (f.target != gg.source) continue;
            Path two{f.source, {f.name, gg.name}};
            std::vector<std::string> composites;
            for (const auto& c : a.commutativities) {
                const Path* other = nullptr;
                if (c.lhs == two) other = &c.rhs;
                else if (c.rhs == two) other = &c.lhs;
                if (!other || other->edges.size() != 1 || other->start != f.source) continue;
                const Edge* h = g.find_edge(other->edges[0]);
                if (!h || h->target != gg.target) continue;
                if (std::find(composites.begin(), composites.end(), h->name) == composites.end()) {
                    composites.push_back(h->name);
                }
            }
            std::string label = gg.name + "." + f.name;
            if (composites.empty()) {
                out.failure = "missing composite: no condition of the form " + label + " = h";
                return out;
            }
            if (composites.size() > 1) {
                out.failure = "ill-formed table: " + label + " has several composites";
                return out;
            }
            b.set_composite(gg.name, f.name, composites[0]);
            consume({two, Path{f.source, {composites[0]}}});
        }
    }

    FiniteCategory cat = b.build();
    auto report = validate_category(cat);
    if (!report.ok()) {
        const auto& v = report.violations.front();
        out.failure = "axiom violation: " + v.location + ": " + v.message;
        return out;
    }
    for (std::size_t i = 0; i < a.commutativities.size(); ++i) {
        if (!consumed[i]) out.residue.push_back(a.commutativities[i]);
    }
    out.category = std::move(cat);
    return out;
}

bool is_cone(const FiniteCategory& c, const Diagram& d, const Cone& cone) {
    if (cone.legs.size() != d.objects.size()) return false;
    const bool lim = cone.orientation == ConeKind::limit;
    for (std::size_t h = 0; h < d.objects.size(); ++h) {
        ArrowId leg = cone.legs[h];
        if (lim ? (c.source(leg) != cone.vertex || c.target(leg) != d.objects[h])
                : (c.source(leg) != d.objects[h] || c.target(leg) != cone.vertex)) {
            return false;
        }
    }
    for (const auto& e : d.edges) {
        auto lhs = lim ? c.compose(e.arrow, cone.legs[e.source]) : c.compose(cone.legs[e.target], e.arrow);
        auto want = lim ? cone.legs[e.target] : cone.legs[e.source];
        if (lhs != want) return false;
    }
    return true;
}

namespace {

void check_shape(const Diagram& d, const Cone& cone) {
    if (cone.legs.size() != d.objects.size()) throw std::invalid_argument("cone does not match the diagram's shape");
    for (const auto& e : d.edges) {
        if (e.source >= d.objects.size() || e.target >= d.objects.size()) {
            throw std::invalid_argument("diagram edge refers to a missing shape vertex");
        }
    }
}

// Shape edges grouped by the later of their endpoints, so a partial leg
// assignment can be checked as soon as both ends are fixed.
std::vector<std::vector<std::size_t>> edges_by_last_vertex(const Diagram& d) {
    std::vector<std::vector<std::size_t>> out(d.objects.size());
    for (std::size_t j = 0; j < d.edges.size(); ++j) {
        out[std::max(d.edges[j].source, d.edges[j].target)].push_back(j);
    }
    return out;
}

}  // namespace

std::vector<Cone> enumerate_cones_at(const FiniteCategory& c, const Diagram& d, ConeKind orientation, ObjectId vertex) {
    std::vector<Cone> out;
    const bool lim = orientation == ConeKind::limit;
    const auto checks = edges_by_last_vertex(d);
    Cone cone{vertex, std::vector<ArrowId>(d.objects.size()), orientation};
    std::function<void(std::size_t)> go = [&](std::size_t h) {
        if (h == d.objects.size()) {
            out.push_back(cone);
            return;
        }
        auto candidates = lim ? c.hom(vertex, d.objects[h]) : c.hom(d.objects[h], vertex);
        for (ArrowId leg : candidates) {
            cone.legs[h] = leg;
            bool ok = true;
            for (std::size_t j : checks[h]) {
                const auto& e = d.edges[j];
                auto lhs = lim ? c.compose(e.arrow, cone.legs[e.source]) : c.compose(cone.legs[e.target], e.arrow);
                if (lhs != (lim ? cone.legs[e.target] : cone.legs[e.source])) {
                    ok = false;
                    break;
                }
            }
            if (ok) go(h + 1);
        }
    };
    go(0);
    return out;
}

std::vector<Cone> enumerate_cones(const FiniteCategory& c, const Diagram& d, ConeKind orientation) {
    std::vector<Cone> out;
    for (std::size_t x = 0; x < c.object_count(); ++x) {
        auto at = enumerate_cones_at(c, d, orientation, object_id(x));
        out.insert(out.end(), std::make_move_iterator(at.begin()), std::make_move_iterator(at.end()));
    }
    return out;
}

bool is_universal_cone(const FiniteCategory& c, const Diagram& d, const Cone& cone) {
    check_shape(d, cone);
    if (!is_cone(c, d, cone)) return false;
    const bool lim = cone.orientation == ConeKind::limit;
    // Universal iff, for every object X, u |-> (cone transported along u) is a
    // bijection from hom(X, vertex) (or hom(vertex, X)) onto the cones at X.
    for (std::size_t x = 0; x < c.object_count(); ++x) {
        ObjectId X = object_id(x);
        auto mediators = lim ? c.hom(X, cone.vertex) : c.hom(cone.vertex, X);
        std::size_t competing = enumerate_cones_at(c, d, cone.orientation, X).size();
        if (mediators.size() != competing) return false;
        std::set<std::vector<ArrowId>> induced;
        for (ArrowId u : mediators) {
            std::vector<ArrowId> legs;
            legs.reserve(cone.legs.size());
            for (ArrowId leg : cone.legs) {
                auto moved = lim ? c.compose(leg, u) : c.compose(u, leg);
                if (!moved) return false;
                legs.push_back(*moved);
            }
            if (!induced.insert(std::move(legs)).second) return false;
        }
    }
    return true;
}

bool is_limiting_cone(const FiniteCategory& c, const Diagram& d, const Cone& cone) {
    if (cone.orientation != ConeKind::limit) throw std::invalid_argument("expected a limit cone");
    return is_universal_cone(c, d, cone);
}

bool is_colimiting_cone(const FiniteCategory& c, const Diagram& d, const Cone& cone) {
    if (cone.orientation != ConeKind::colimit) throw std::invalid_argument("expected a colimit cone");
    return is_universal_cone(c, d, cone);
}

std::optional<Cone> find_universal_cone(const FiniteCategory& c, const Diagram& d, ConeKind orientation) {
    for (const auto& cone : enumerate_cones(c, d, orientation)) {
        if (is_universal_cone(c, d, cone)) return cone;
    }
    return std::nullopt;
}

bool is_mono(const FiniteCategory& c, ArrowId f) {
    for (std::size_t x = 0; x < c.object_count(); ++x) {
        auto hom = c.hom(object_id(x), c.source(f));
        for (std::size_t i = 0; i < hom.size(); ++i) {
            for (std::size_t j = i + 1; j < hom.size(); ++j) {
                if (c.compose(f, hom[i]) == c.compose(f, hom[j])) return false;
            }
        }
    }
    return true;
}

bool is_epi(const FiniteCategory& c, ArrowId f) {
    for (std::size_t x = 0; x < c.object_count(); ++x) {
        auto hom = c.hom(c.target(f), object_id(x));
        for (std::size_t i = 0; i < hom.size(); ++i) {
            for (std::size_t j = i + 1; j < hom.size(); ++j) {
                if (c.compose(hom[i], f) == c.compose(hom[j], f)) return false;
            }
        }
    }
    return true;
}

std::optional<ArrowId> inverse(const FiniteCategory& c, ArrowId f) {
    for (ArrowId g : c.hom(c.target(f), c.source(f))) {
        if (c.compose(g, f) == c.identity(c.source(f)) && c.compose(f, g) == c.identity(c.target(f))) return g;
    }
    return std::nullopt;
}

}  // namespace sketchkit
