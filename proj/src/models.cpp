#include "sketchkit/models.hpp"

#include <stdexcept>

namespace sketchkit {

namespace {

std::size_t vertex_at(const Sketch& z, const std::string& name) {
    auto i = z.graph.vertex_index(name);
    if (!i) throw ResolutionError("unknown vertex '" + name + "'");
    return *i;
}

std::size_t edge_at(const Sketch& z, const std::string& name) {
    auto i = z.graph.edge_index(name);
    if (!i) throw ResolutionError("unknown edge '" + name + "'");
    return *i;
}

bool same_shape(const Structure& s, const Sketch& z) {
    return s.objects.size() == z.graph.vertices.size() && s.arrows.size() == z.graph.edges.size();
}

}  // namespace

Structure make_structure(const Sketch& z, const FiniteCategory& c,
                         const std::vector<std::pair<std::string, std::string>>& bindings, std::string sketch_name) {
    const auto& g = z.graph;
    std::vector<std::optional<ObjectId>> objs(g.vertices.size());
    std::vector<std::optional<ArrowId>> arrs(g.edges.size());
    for (const auto& [from, to] : bindings) {
        if (auto v = g.vertex_index(from)) {
            auto o = c.find_object(to);
            if (!o) throw ResolutionError("'" + to + "' is not an object of " + c.name());
            if (objs[*v]) throw ResolutionError("vertex '" + from + "' mapped twice");
            objs[*v] = *o;
        } else if (auto e = g.edge_index(from)) {
            auto a = c.find_arrow(to);
            if (!a) throw ResolutionError("'" + to + "' is not an arrow of " + c.name());
            if (arrs[*e]) throw ResolutionError("edge '" + from + "' mapped twice");
            arrs[*e] = *a;
        } else {
            throw ResolutionError("'" + from + "' is not a vertex or edge of the sketch");
        }
    }
    Structure s{std::move(sketch_name), c.name(), {}, {}};
    for (std::size_t i = 0; i < objs.size(); ++i) {
        if (!objs[i]) throw ResolutionError("vertex '" + g.vertices[i] + "' is not mapped");
        s.objects.push_back(*objs[i]);
    }
    for (std::size_t i = 0; i < arrs.size(); ++i) {
        if (!arrs[i]) throw ResolutionError("edge '" + g.edges[i].name + "' is not mapped");
        s.arrows.push_back(*arrs[i]);
    }
    return s;
}

std::vector<std::pair<std::string, std::string>> bindings_of(const Sketch& z, const FiniteCategory& c,
                                                              const Structure& s) {
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t i = 0; i < z.graph.vertices.size(); ++i) {
        out.emplace_back(z.graph.vertices[i], c.object_name(s.objects[i]));
    }
    for (std::size_t i = 0; i < z.graph.edges.size(); ++i) {
        out.emplace_back(z.graph.edges[i].name, c.arrow(s.arrows[i]).name);
    }
    return out;
}

std::optional<ArrowId> evaluate_path(const Sketch& z, const FiniteCategory& c, const Structure& s, const Path& p) {
    ArrowId acc = c.identity(s.objects[vertex_at(z, p.start)]);
    for (const auto& e : p.edges) {
        auto next = c.compose(s.arrows[edge_at(z, e)], acc);
        if (!next) return std::nullopt;
        acc = *next;
    }
    return acc;
}

std::pair<Diagram, Cone> instantiate(const Sketch& z, const FiniteCategory& c, const Structure& s,
                                     const ConvergenceCondition& cond) {
    (void)c;
    Diagram d;
    for (const auto& v : cond.diagram_vertices) d.objects.push_back(s.objects[vertex_at(z, v)]);
    for (std::size_t j = 0; j < cond.shape.edges.size(); ++j) {
        const Edge& he = cond.shape.edges[j];
        auto src = cond.shape.vertex_index(he.source);
        auto tgt = cond.shape.vertex_index(he.target);
        if (!src || !tgt) throw ResolutionError("shape edge '" + he.name + "' has an undeclared endpoint");
        d.edges.push_back({*src, *tgt, s.arrows[edge_at(z, cond.diagram_edges[j])]});
    }
    Cone cone{s.objects[vertex_at(z, cond.vertex)], {}, cond.kind};
    for (const auto& leg : cond.legs) cone.legs.push_back(s.arrows[edge_at(z, leg)]);
    return {std::move(d), std::move(cone)};
}

ValidationReport validate_structure(const Sketch& z, const FiniteCategory& c, const Structure& s) {
    ValidationReport r;
    if (!same_shape(s, z)) {
        r.add("structure", "maps do not match the sketch's vertices and edges");
        return r;
    }
    for (auto o : s.objects) {
        if (index(o) >= c.object_count()) {
            r.add("structure", "object out of range");
            return r;
        }
    }
    for (auto a : s.arrows) {
        if (index(a) >= c.arrow_count()) {
            r.add("structure", "arrow out of range");
            return r;
        }
    }
    bool graph_ok = true;
    for (std::size_t i = 0; i < z.graph.edges.size(); ++i) {
        const Edge& e = z.graph.edges[i];
        ArrowId a = s.arrows[i];
        if (c.source(a) != s.objects[vertex_at(z, e.source)] || c.target(a) != s.objects[vertex_at(z, e.target)]) {
            r.add("edge " + e.name, "image " + c.arrow(a).name + " does not have the mapped endpoints");
            graph_ok = false;
        }
    }
    if (!graph_ok) return r;
    for (const auto& cc : z.commutativities) {
        auto l = evaluate_path(z, c, s, cc.lhs);
        auto rr = evaluate_path(z, c, s, cc.rhs);
        if (!l || !rr) {
            r.add("commute " + render(cc), "composite undefined");
        } else if (*l != *rr) {
            r.add("commute " + render(cc),
                  "sides evaluate to " + c.arrow(*l).name + " and " + c.arrow(*rr).name);
        }
    }
    for (const auto& cv : z.convergences) {
        auto [d, cone] = instantiate(z, c, s, cv);
        if (!is_universal_cone(c, d, cone)) {
            r.add(render(cv), std::string("image is not a ") + to_string(cv.kind));
        }
    }
    return r;
}

Structure restrict_structure(const SketchMorphism& phi, const Sketch& a, const Sketch& b, const Structure& g) {
    Structure out{g.sketch, g.category, {}, {}};
    out.objects.reserve(a.graph.vertices.size());
    for (const auto& v : a.graph.vertices) out.objects.push_back(g.objects[vertex_at(b, phi.vertex(v))]);
    for (const auto& e : a.graph.edges) out.arrows.push_back(g.arrows[edge_at(b, phi.edge(e.name))]);
    return out;
}

Structure restrict_to_subsketch(const Sketch& a, const Sketch& b, const Structure& g) {
    return restrict_structure(SketchMorphism::inclusion(a), a, b, g);
}

Structure empty_structure(const FiniteCategory& c) { return Structure{{}, c.name(), {}, {}}; }

bool is_natural(const Sketch& z, const FiniteCategory& c, const NatTransformation& t) {
    const auto n = z.graph.vertices.size();
    if (t.components.size() != n || !same_shape(t.source, z) || !same_shape(t.target, z)) return false;
    for (std::size_t v = 0; v < n; ++v) {
        ArrowId a = t.components[v];
        if (c.source(a) != t.source.objects[v] || c.target(a) != t.target.objects[v]) return false;
    }
    for (std::size_t i = 0; i < z.graph.edges.size(); ++i) {
        const Edge& e = z.graph.edges[i];
        auto s = vertex_at(z, e.source);
        auto d = vertex_at(z, e.target);
        if (c.compose(t.target.arrows[i], t.components[s]) != c.compose(t.components[d], t.source.arrows[i])) {
            return false;
        }
    }
    return true;
}

NatTransformation identity_transformation(const FiniteCategory& c, const Structure& f) {
    NatTransformation t{f, f, {}};
    for (auto o : f.objects) t.components.push_back(c.identity(o));
    return t;
}

NatTransformation compose_transformations(const FiniteCategory& c, const NatTransformation& second,
                                          const NatTransformation& first) {
    if (!(first.target == second.source)) throw std::invalid_argument("transformations are not composable");
    NatTransformation t{first.source, second.target, {}};
    for (std::size_t v = 0; v < first.components.size(); ++v) {
        auto h = c.compose(second.components[v], first.components[v]);
        if (!h) throw std::invalid_argument("component composite undefined");
        t.components.push_back(*h);
    }
    return t;
}

bool is_natural_iso(const FiniteCategory& c, const NatTransformation& t) {
    for (auto a : t.components) {
        if (!is_iso(c, a)) return false;
    }
    return true;
}

std::optional<NatTransformation> inverse_transformation(const FiniteCategory& c, const NatTransformation& t) {
    NatTransformation inv{t.target, t.source, {}};
    for (auto a : t.components) {
        auto b = inverse(c, a);
        if (!b) return std::nullopt;
        inv.components.push_back(*b);
    }
    return inv;
}

NatTransformation restrict_transformation(const SketchMorphism& phi, const Sketch& a, const Sketch& b,
                                          const NatTransformation& t) {
    NatTransformation out{restrict_structure(phi, a, b, t.source), restrict_structure(phi, a, b, t.target), {}};
    for (const auto& v : a.graph.vertices) out.components.push_back(t.components[vertex_at(b, phi.vertex(v))]);
    return out;
}

Transported transport_along_iso(const SketchMorphism& beta, const Sketch& a, const Sketch& b,
                                const FiniteCategory& c, const Structure& h, const NatTransformation& i) {
    if (!beta.injective_on_vertices()) throw std::invalid_argument("beta is not injective on vertices");
    if (!(i.source == restrict_structure(beta, a, b, h))) {
        throw std::invalid_argument("i does not start at the restriction of H");
    }
    const Structure& g = i.target;
    const auto nb = b.graph.vertices.size();

    // For each vertex of b: the a-vertex over it, if any.
    std::vector<std::optional<std::size_t>> preimage(nb);
    for (std::size_t v = 0; v < a.graph.vertices.size(); ++v) {
        preimage[vertex_at(b, beta.vertex(a.graph.vertices[v]))] = v;
    }

    Structure e{h.sketch, h.category, std::vector<ObjectId>(nb), std::vector<ArrowId>(b.graph.edges.size())};
    std::vector<ArrowId> j(nb), j_inv(nb);
    for (std::size_t w = 0; w < nb; ++w) {
        if (preimage[w]) {
            e.objects[w] = g.objects[*preimage[w]];
            j[w] = i.components[*preimage[w]];
            auto inv = inverse(c, j[w]);
            if (!inv) throw std::invalid_argument("component of i at " + a.graph.vertices[*preimage[w]] +
                                                  " is not invertible");
            j_inv[w] = *inv;
        } else {
            e.objects[w] = h.objects[w];
            j[w] = j_inv[w] = c.identity(h.objects[w]);
        }
    }
    for (std::size_t k = 0; k < b.graph.edges.size(); ++k) {
        const Edge& edge = b.graph.edges[k];
        auto s = vertex_at(b, edge.source);
        auto t = vertex_at(b, edge.target);
        auto mid = c.compose(h.arrows[k], j_inv[s]);
        auto full = mid ? c.compose(j[t], *mid) : std::nullopt;
        if (!full) throw std::invalid_argument("H is not a graph morphism at " + edge.name);
        e.arrows[k] = *full;
    }
    return Transported{e, NatTransformation{h, e, std::move(j)}};
}

}  // namespace sketchkit
