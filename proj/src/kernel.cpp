#include "sketchkit/kernel.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

namespace sketchkit {

void ValidationReport::append(const ValidationReport& other, const std::string& prefix) {
    for (const auto& v : other.violations) {
        violations.push_back({prefix.empty() ? v.location : prefix + ": " + v.location, v.message});
    }
}

std::optional<std::size_t> Graph::vertex_index(std::string_view name) const {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i] == name) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> Graph::edge_index(std::string_view name) const {
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].name == name) return i;
    }
    return std::nullopt;
}

const Edge* Graph::find_edge(std::string_view name) const {
    auto i = edge_index(name);
    return i ? &edges[*i] : nullptr;
}

Graph Graph::reversed() const {
    Graph g;
    g.vertices = vertices;
    g.edges.reserve(edges.size());
    for (const auto& e : edges) g.edges.push_back({e.name, e.target, e.source});
    return g;
}

std::optional<std::string> path_end(const Graph& graph, const Path& path) {
    if (!graph.has_vertex(path.start)) return std::nullopt;
    std::string at = path.start;
    for (const auto& name : path.edges) {
        const Edge* e = graph.find_edge(name);
        if (!e || e->source != at) return std::nullopt;
        at = e->target;
    }
    return at;
}

bool same_commutativity(const CommutativityCondition& a, const CommutativityCondition& b) {
    return (a.lhs == b.lhs && a.rhs == b.rhs) || (a.lhs == b.rhs && a.rhs == b.lhs);
}

const char* to_string(ConeKind k) { return k == ConeKind::limit ? "limit" : "colimit"; }

ConvergenceCondition make_convergence(const Graph& ambient, ConeKind kind, std::string vertex,
                                      const std::vector<std::pair<std::string, std::string>>& legs,
                                      const std::vector<ShapeEdgeSpec>& shape_edges) {
    ConvergenceCondition c;
    c.kind = kind;
    c.vertex = std::move(vertex);
    for (const auto& [node, leg] : legs) {
        const Edge* e = ambient.find_edge(leg);
        if (!e) throw ResolutionError("unknown leg arrow '" + leg + "'");
        c.shape.vertices.push_back(node);
        c.diagram_vertices.push_back(kind == ConeKind::limit ? e->target : e->source);
        c.legs.push_back(leg);
    }
    for (const auto& se : shape_edges) {
        c.shape.edges.push_back({se.name, se.source, se.target});
        c.diagram_edges.push_back(se.image);
    }
    return c;
}

namespace {

std::vector<int> shape_endpoint_indices(const Graph& shape, bool sources) {
    std::vector<int> out;
    out.reserve(shape.edges.size());
    for (const auto& e : shape.edges) {
        auto i = shape.vertex_index(sources ? e.source : e.target);
        out.push_back(i ? static_cast<int>(*i) : -1);
    }
    return out;
}

struct EquivalenceSearch {
    const ConvergenceCondition& c1;
    const ConvergenceCondition& c2;
    std::vector<int> src1, tgt1, src2, tgt2;
    std::vector<int> iso;
    std::vector<bool> used;

    bool edges_match() const {
        using Triple = std::tuple<int, int, std::string>;
        std::vector<Triple> a, b;
        for (std::size_t j = 0; j < c1.shape.edges.size(); ++j) {
            int s = src1[j] < 0 ? -1 : iso[src1[j]];
            int t = tgt1[j] < 0 ? -1 : iso[tgt1[j]];
            a.emplace_back(s, t, c1.diagram_edges[j]);
        }
        for (std::size_t j = 0; j < c2.shape.edges.size(); ++j) {
            b.emplace_back(src2[j], tgt2[j], c2.diagram_edges[j]);
        }
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        return a == b;
    }

    bool assign(std::size_t i) {
        if (i == c1.shape.vertices.size()) return edges_match();
        for (std::size_t j = 0; j < c2.shape.vertices.size(); ++j) {
            if (used[j]) continue;
            if (c1.diagram_vertices[i] != c2.diagram_vertices[j] || c1.legs[i] != c2.legs[j]) continue;
            used[j] = true;
            iso[i] = static_cast<int>(j);
            if (assign(i + 1)) return true;
            used[j] = false;
        }
        return false;
    }
};

bool well_sized(const ConvergenceCondition& c) {
    return c.diagram_vertices.size() == c.shape.vertices.size() && c.legs.size() == c.shape.vertices.size() &&
           c.diagram_edges.size() == c.shape.edges.size();
}

}  // namespace

bool conditions_equivalent(const ConvergenceCondition& c1, const ConvergenceCondition& c2) {
    if (c1.kind != c2.kind || c1.vertex != c2.vertex) return false;
    if (!well_sized(c1) || !well_sized(c2)) return c1 == c2;
    if (c1.shape.vertices.size() != c2.shape.vertices.size()) return false;
    if (c1.shape.edges.size() != c2.shape.edges.size()) return false;
    EquivalenceSearch s{c1, c2, shape_endpoint_indices(c1.shape, true), shape_endpoint_indices(c1.shape, false),
                        shape_endpoint_indices(c2.shape, true), shape_endpoint_indices(c2.shape, false),
                        std::vector<int>(c1.shape.vertices.size(), -1),
                        std::vector<bool>(c2.shape.vertices.size(), false)};
    return s.assign(0);
}

bool Sketch::has_commutativity(const CommutativityCondition& c) const {
    return std::any_of(commutativities.begin(), commutativities.end(),
                       [&](const auto& d) { return same_commutativity(c, d); });
}

bool Sketch::has_convergence(const ConvergenceCondition& c) const {
    return std::any_of(convergences.begin(), convergences.end(),
                       [&](const auto& d) { return conditions_equivalent(c, d); });
}

ConditionSupport support(const CommutativityCondition& c) {
    ConditionSupport s;
    s.vertices = {c.lhs.start};
    if (c.rhs.start != c.lhs.start) s.vertices.push_back(c.rhs.start);
    s.edges = c.lhs.edges;
    s.edges.insert(s.edges.end(), c.rhs.edges.begin(), c.rhs.edges.end());
    return s;
}

ConditionSupport support(const ConvergenceCondition& c) {
    ConditionSupport s;
    s.vertices.push_back(c.vertex);
    s.vertices.insert(s.vertices.end(), c.diagram_vertices.begin(), c.diagram_vertices.end());
    s.edges = c.legs;
    s.edges.insert(s.edges.end(), c.diagram_edges.begin(), c.diagram_edges.end());
    return s;
}

namespace {
bool supported_by(const Graph& g, const ConditionSupport& s) {
    return std::all_of(s.vertices.begin(), s.vertices.end(), [&](const auto& v) { return g.has_vertex(v); }) &&
           std::all_of(s.edges.begin(), s.edges.end(), [&](const auto& e) { return g.has_edge(e); });
}
}  // namespace

bool expressible_in(const Graph& graph, const CommutativityCondition& c) { return supported_by(graph, support(c)); }
bool expressible_in(const Graph& graph, const ConvergenceCondition& c) { return supported_by(graph, support(c)); }

ValidationReport validate_graph(const Graph& g, const std::string& where) {
    ValidationReport r;
    std::set<std::string> seen;
    for (const auto& v : g.vertices) {
        if (!seen.insert(v).second) r.add(where + " vertex '" + v + "'", "duplicate vertex name");
    }
    std::set<std::string> seen_edges;
    for (const auto& e : g.edges) {
        std::string loc = where + " edge '" + e.name + "'";
        if (!seen_edges.insert(e.name).second) r.add(loc, "duplicate edge name");
        if (seen.count(e.name)) r.add(loc, "name is also used by a vertex");
        if (!g.has_vertex(e.source)) r.add(loc, "source vertex '" + e.source + "' is not declared");
        if (!g.has_vertex(e.target)) r.add(loc, "target vertex '" + e.target + "' is not declared");
    }
    return r;
}

namespace {

void check_path(const Graph& g, const Path& p, const std::string& loc, ValidationReport& r) {
    if (!g.has_vertex(p.start)) {
        r.add(loc, "path starts at undeclared vertex '" + p.start + "'");
        return;
    }
    std::string at = p.start;
    for (const auto& name : p.edges) {
        const Edge* e = g.find_edge(name);
        if (!e) {
            r.add(loc, "path uses undeclared edge '" + name + "'");
            return;
        }
        if (e->source != at) {
            r.add(loc, "edge '" + name + "' does not start at '" + at + "'");
            return;
        }
        at = e->target;
    }
}

void check_convergence(const Graph& g, const ConvergenceCondition& c, const std::string& loc, ValidationReport& r) {
    r.append(validate_graph(c.shape, "shape"), loc);
    if (!well_sized(c)) {
        r.add(loc, "diagram or leg family does not match the shape");
        return;
    }
    if (!g.has_vertex(c.vertex)) r.add(loc, "vertex '" + c.vertex + "' is not declared");
    for (std::size_t i = 0; i < c.shape.vertices.size(); ++i) {
        const auto& dv = c.diagram_vertices[i];
        if (!g.has_vertex(dv)) r.add(loc, "diagram vertex '" + dv + "' is not declared");
        const Edge* leg = g.find_edge(c.legs[i]);
        if (!leg) {
            r.add(loc, "leg '" + c.legs[i] + "' is not declared");
            continue;
        }
        bool ok = c.kind == ConeKind::limit ? (leg->source == c.vertex && leg->target == dv)
                                            : (leg->source == dv && leg->target == c.vertex);
        if (!ok) r.add(loc, "leg '" + c.legs[i] + "' at node '" + c.shape.vertices[i] + "' has the wrong endpoints");
    }
    for (std::size_t j = 0; j < c.shape.edges.size(); ++j) {
        const auto& se = c.shape.edges[j];
        const Edge* img = g.find_edge(c.diagram_edges[j]);
        if (!img) {
            r.add(loc, "diagram edge '" + c.diagram_edges[j] + "' is not declared");
            continue;
        }
        auto s = c.shape.vertex_index(se.source);
        auto t = c.shape.vertex_index(se.target);
        if (!s || !t) continue;
        if (img->source != c.diagram_vertices[*s] || img->target != c.diagram_vertices[*t]) {
            r.add(loc, "shape edge '" + se.name + "' is not sent to an edge between the images of its endpoints");
        }
    }
}

}  // namespace

ValidationReport validate_sketch(const Sketch& s) {
    ValidationReport r = validate_graph(s.graph);
    for (std::size_t i = 0; i < s.commutativities.size(); ++i) {
        const auto& c = s.commutativities[i];
        std::string loc = "commute #" + std::to_string(i + 1);
        ValidationReport local;
        check_path(s.graph, c.lhs, loc, local);
        check_path(s.graph, c.rhs, loc, local);
        if (local.ok()) {
            if (c.lhs.start != c.rhs.start || path_end(s.graph, c.lhs) != path_end(s.graph, c.rhs)) {
                local.add(loc, "the two paths are not parallel");
            }
        }
        r.append(local);
    }
    for (std::size_t i = 0; i < s.convergences.size(); ++i) {
        check_convergence(s.graph, s.convergences[i], "convergence #" + std::to_string(i + 1), r);
    }
    return r;
}

SketchMorphism SketchMorphism::inclusion(const Sketch& sub) {
    SketchMorphism m;
    for (const auto& v : sub.graph.vertices) m.vertex_map[v] = v;
    for (const auto& e : sub.graph.edges) m.edge_map[e.name] = e.name;
    return m;
}

const std::string& SketchMorphism::vertex(const std::string& v) const {
    auto it = vertex_map.find(v);
    if (it == vertex_map.end()) throw ResolutionError("morphism does not map vertex '" + v + "'");
    return it->second;
}

const std::string& SketchMorphism::edge(const std::string& e) const {
    auto it = edge_map.find(e);
    if (it == edge_map.end()) throw ResolutionError("morphism does not map edge '" + e + "'");
    return it->second;
}

bool SketchMorphism::injective_on_vertices() const {
    std::set<std::string> images;
    for (const auto& [k, v] : vertex_map) {
        if (!images.insert(v).second) return false;
    }
    return true;
}

Path map_path(const SketchMorphism& m, const Path& p) {
    Path out{m.vertex(p.start), {}};
    for (const auto& e : p.edges) out.edges.push_back(m.edge(e));
    return out;
}

CommutativityCondition map_condition(const SketchMorphism& m, const CommutativityCondition& c) {
    return {map_path(m, c.lhs), map_path(m, c.rhs)};
}

ConvergenceCondition map_condition(const SketchMorphism& m, const ConvergenceCondition& c) {
    ConvergenceCondition out = c;
    out.vertex = m.vertex(c.vertex);
    for (auto& v : out.diagram_vertices) v = m.vertex(v);
    for (auto& e : out.diagram_edges) e = m.edge(e);
    for (auto& l : out.legs) l = m.edge(l);
    return out;
}

bool is_sketch_morphism(const SketchMorphism& m, const Sketch& src, const Sketch& dst) {
    for (const auto& [k, v] : m.vertex_map) {
        if (!src.graph.has_vertex(k)) throw ResolutionError("morphism maps unknown source vertex '" + k + "'");
        if (!dst.graph.has_vertex(v)) throw ResolutionError("morphism targets unknown vertex '" + v + "'");
    }
    for (const auto& [k, v] : m.edge_map) {
        if (!src.graph.has_edge(k)) throw ResolutionError("morphism maps unknown source edge '" + k + "'");
        if (!dst.graph.has_edge(v)) throw ResolutionError("morphism targets unknown edge '" + v + "'");
    }
    for (const auto& v : src.graph.vertices) m.vertex(v);
    for (const auto& e : src.graph.edges) {
        const Edge* img = dst.graph.find_edge(m.edge(e.name));
        if (img->source != m.vertex(e.source) || img->target != m.vertex(e.target)) return false;
    }
    for (const auto& c : src.commutativities) {
        if (!dst.has_commutativity(map_condition(m, c))) return false;
    }
    for (const auto& c : src.convergences) {
        if (!dst.has_convergence(map_condition(m, c))) return false;
    }
    return true;
}

bool is_subsketch_inclusion(const Sketch& a, const Sketch& b) {
    for (const auto& v : a.graph.vertices) {
        if (!b.graph.has_vertex(v)) return false;
    }
    for (const auto& e : a.graph.edges) {
        const Edge* be = b.graph.find_edge(e.name);
        if (!be || *be != e) return false;
    }
    for (const auto& c : a.commutativities) {
        if (!b.has_commutativity(c)) return false;
    }
    for (const auto& c : a.convergences) {
        if (!b.has_convergence(c)) return false;
    }
    return true;
}

bool is_regular_subsketch(const Sketch& a, const Sketch& b) {
    if (!is_subsketch_inclusion(a, b)) throw std::invalid_argument("not a subsketch inclusion");
    for (const auto& c : b.commutativities) {
        if (expressible_in(a.graph, c) && !a.has_commutativity(c)) return false;
    }
    for (const auto& c : b.convergences) {
        if (expressible_in(a.graph, c) && !a.has_convergence(c)) return false;
    }
    return true;
}

CommutativityCondition dualize_condition(const CommutativityCondition& c, const Graph& ambient) {
    auto flip = [&](const Path& p) {
        Path out;
        out.start = path_end(ambient, p).value_or(p.start);
        out.edges.assign(p.edges.rbegin(), p.edges.rend());
        return out;
    };
    return {flip(c.lhs), flip(c.rhs)};
}

ConvergenceCondition dualize_condition(const ConvergenceCondition& c) {
    ConvergenceCondition out = c;
    out.kind = opposite(c.kind);
    out.shape = c.shape.reversed();
    return out;
}

Sketch dualize_sketch(const Sketch& z) {
    Sketch out;
    out.graph = z.graph.reversed();
    for (const auto& c : z.commutativities) out.commutativities.push_back(dualize_condition(c, z.graph));
    for (const auto& c : z.convergences) out.convergences.push_back(dualize_condition(c));
    return out;
}

Sketch strip_convergence(const Sketch& z) {
    Sketch out = z;
    out.convergences.clear();
    return out;
}

std::string render_path(const Path& p) {
    if (p.edges.empty()) return "id(" + p.start + ")";
    std::string out;
    for (auto it = p.edges.rbegin(); it != p.edges.rend(); ++it) {
        if (!out.empty()) out += '.';
        out += *it;
    }
    return out;
}

std::string render(const CommutativityCondition& c) { return render_path(c.lhs) + " = " + render_path(c.rhs); }

std::string render(const ConvergenceCondition& c) {
    std::ostringstream os;
    os << to_string(c.kind) << ' ' << c.vertex << " with (";
    for (std::size_t i = 0; i < c.legs.size() && i < c.shape.vertices.size(); ++i) {
        if (i) os << ", ";
        os << c.shape.vertices[i] << ": " << c.legs[i];
    }
    os << ") over { nodes: ";
    for (std::size_t i = 0; i < c.shape.vertices.size(); ++i) {
        if (i) os << ", ";
        os << c.shape.vertices[i];
    }
    os << ";";
    for (std::size_t j = 0; j < c.shape.edges.size() && j < c.diagram_edges.size(); ++j) {
        const auto& e = c.shape.edges[j];
        os << " edge " << e.name << ": " << e.source << " -> " << e.target << " |-> " << c.diagram_edges[j] << ';';
    }
    os << " }";
    return os.str();
}

}  // namespace sketchkit
