#include "sketchkit/construct.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sketchkit {

const char* to_string(Procedure p) {
    switch (p) {
        case Procedure::include_conditions: return "include conditions";
        case Procedure::defined_arrow: return "include defined arrow";
        case Procedure::limit_object: return "include limit object";
        case Procedure::colimit_object: return "include colimit object";
        case Procedure::induced_into_limit: return "include induced arrow into limit";
        case Procedure::induced_from_colimit: return "include induced arrow out of colimit";
    }
    return "?";
}

const char* short_name(Procedure p) {
    switch (p) {
        case Procedure::include_conditions: return "P1";
        case Procedure::defined_arrow: return "P2";
        case Procedure::limit_object: return "P3";
        case Procedure::colimit_object: return "P4";
        case Procedure::induced_into_limit: return "P5";
        case Procedure::induced_from_colimit: return "P6";
    }
    return "?";
}

std::optional<Procedure> procedure_from_short_name(const std::string& s) {
    static const Procedure all[] = {Procedure::include_conditions, Procedure::defined_arrow,
                                    Procedure::limit_object,       Procedure::colimit_object,
                                    Procedure::induced_into_limit, Procedure::induced_from_colimit};
    for (auto p : all) {
        if (s == short_name(p)) return p;
    }
    return std::nullopt;
}

Procedure dual(Procedure p) {
    switch (p) {
        case Procedure::limit_object: return Procedure::colimit_object;
        case Procedure::colimit_object: return Procedure::limit_object;
        case Procedure::induced_into_limit: return Procedure::induced_from_colimit;
        case Procedure::induced_from_colimit: return Procedure::induced_into_limit;
        default: return p;
    }
}

namespace {

std::size_t count_true(const std::vector<bool>& v) { return static_cast<std::size_t>(std::count(v.begin(), v.end(), true)); }

bool covers(const std::vector<bool>& big, const std::vector<bool>& small) {
    for (std::size_t i = 0; i < small.size(); ++i) {
        if (small[i] && !big[i]) return false;
    }
    return true;
}

struct CPath {
    std::size_t start;
    std::vector<std::size_t> edges;
    bool operator==(const CPath&) const = default;
};

struct CComm {
    CPath lhs, rhs;
    std::vector<std::size_t> vertices, edges;
};

struct CConv {
    ConeKind kind;
    std::size_t vertex;
    std::vector<std::size_t> legs;
    std::vector<std::size_t> diagram_vertices;
    std::vector<std::size_t> diagram_edges;
    std::vector<std::pair<std::size_t, std::size_t>> shape_edges;
    std::vector<std::size_t> vertices, edges;  // support
};

// b, indexed.
class Ambient {
public:
    explicit Ambient(const Sketch& b) : b_(b) {
        for (const auto& e : b.graph.edges) {
            src.push_back(vertex(e.source));
            tgt.push_back(vertex(e.target));
        }
        for (const auto& c : b.commutativities) {
            CComm k{path(c.lhs), path(c.rhs), {}, {}};
            auto s = support(c);
            for (const auto& v : s.vertices) k.vertices.push_back(vertex(v));
            for (const auto& e : s.edges) k.edges.push_back(edge(e));
            comms.push_back(std::move(k));
        }
        for (const auto& c : b.convergences) {
            CConv k{c.kind, vertex(c.vertex), {}, {}, {}, {}, {}, {}};
            for (const auto& l : c.legs) k.legs.push_back(edge(l));
            for (const auto& v : c.diagram_vertices) k.diagram_vertices.push_back(vertex(v));
            for (const auto& e : c.diagram_edges) k.diagram_edges.push_back(edge(e));
            for (const auto& he : c.shape.edges) {
                k.shape_edges.emplace_back(*c.shape.vertex_index(he.source), *c.shape.vertex_index(he.target));
            }
            auto s = support(c);
            for (const auto& v : s.vertices) k.vertices.push_back(vertex(v));
            for (const auto& e : s.edges) k.edges.push_back(edge(e));
            convs.push_back(std::move(k));
        }
    }

    std::size_t vertex(const std::string& n) const {
        auto i = b_.graph.vertex_index(n);
        if (!i) throw ResolutionError("unknown vertex '" + n + "'");
        return *i;
    }
    std::size_t edge(const std::string& n) const {
        auto i = b_.graph.edge_index(n);
        if (!i) throw ResolutionError("unknown edge '" + n + "'");
        return *i;
    }
    std::optional<std::size_t> find_edge(const std::string& n) const { return b_.graph.edge_index(n); }
    std::optional<std::size_t> find_vertex(const std::string& n) const { return b_.graph.vertex_index(n); }
    const std::string& edge_name(std::size_t e) const { return b_.graph.edges[e].name; }
    const std::string& vertex_name(std::size_t v) const { return b_.graph.vertices[v]; }

    CPath path(const Path& p) const {
        CPath out{vertex(p.start), {}};
        for (const auto& e : p.edges) out.edges.push_back(edge(e));
        return out;
    }

    bool comm_is(std::size_t i, const CPath& p, const CPath& q) const {
        const auto& c = comms[i];
        return (c.lhs == p && c.rhs == q) || (c.lhs == q && c.rhs == p);
    }

    // First commutativity of b stating p = q (either way round).
    std::optional<std::size_t> find_comm(const CPath& p, const CPath& q, const ItemSet* within = nullptr) const {
        for (std::size_t i = 0; i < comms.size(); ++i) {
            if (within && !within->commutativities[i]) continue;
            if (comm_is(i, p, q)) return i;
        }
        return std::nullopt;
    }

    bool expressible(const ItemSet& s, const std::vector<std::size_t>& vs, const std::vector<std::size_t>& es) const {
        for (auto v : vs) {
            if (!s.vertices[v]) return false;
        }
        for (auto e : es) {
            if (!s.edges[e]) return false;
        }
        return true;
    }
    bool comm_expressible(const ItemSet& s, std::size_t i) const {
        return expressible(s, comms[i].vertices, comms[i].edges);
    }
    bool conv_expressible(const ItemSet& s, std::size_t i) const {
        return expressible(s, convs[i].vertices, convs[i].edges);
    }

    const Sketch& b_;
    std::vector<std::size_t> src, tgt;
    std::vector<CComm> comms;
    std::vector<CConv> convs;
};

std::vector<std::size_t> unique_in_order(const std::vector<std::size_t>& v) {
    std::vector<std::size_t> out;
    for (auto x : v) {
        if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    }
    return out;
}

// The single-arrow path f, or the two-arrow path "first then second".
CPath one(const Ambient& amb, std::size_t f) { return {amb.src[f], {f}}; }
CPath two(const Ambient& amb, std::size_t first, std::size_t second) { return {amb.src[first], {first, second}}; }

// ---- guards -------------------------------------------------------------

bool check_p1(const Ambient& amb, const ItemSet& s, const ConstructStep& st) {
    if (!st.objects.empty() || !st.arrows.empty() || st.premise_convergence || !st.family.empty() ||
        !st.premise_commutativities.empty()) {
        return false;
    }
    if (st.commutativities.empty() && st.convergences.empty()) return false;
    for (auto i : st.commutativities) {
        if (i >= amb.comms.size() || s.commutativities[i] || !amb.comm_expressible(s, i)) return false;
    }
    for (auto i : st.convergences) {
        if (i >= amb.convs.size() || s.convergences[i] || !amb.conv_expressible(s, i)) return false;
    }
    return true;
}

bool check_p2(const Ambient& amb, const ItemSet& s, const ConstructStep& st) {
    if (!st.objects.empty() || st.arrows.size() != 1 || st.commutativities.size() != 1 || !st.convergences.empty() ||
        st.premise_convergence || !st.family.empty() || !st.premise_commutativities.empty()) {
        return false;
    }
    auto f = amb.find_edge(st.arrows[0]);
    if (!f || s.edges[*f] || !s.vertices[amb.src[*f]] || !s.vertices[amb.tgt[*f]]) return false;
    auto i = st.commutativities[0];
    if (i >= amb.comms.size()) return false;
    const auto& c = amb.comms[i];
    const CPath fp = one(amb, *f);
    const CPath* other = c.lhs == fp ? &c.rhs : (c.rhs == fp ? &c.lhs : nullptr);
    if (!other) return false;
    for (auto e : other->edges) {
        if (!s.edges[e]) return false;
    }
    return true;
}

bool check_p34(const Ambient& amb, const ItemSet& s, const ConstructStep& st, ConeKind kind) {
    if (st.objects.size() != 1 || !st.commutativities.empty() || st.convergences.size() != 1 ||
        st.premise_convergence || !st.family.empty() || !st.premise_commutativities.empty()) {
        return false;
    }
    auto c = amb.find_vertex(st.objects[0]);
    if (!c || s.vertices[*c]) return false;
    auto k = st.convergences[0];
    if (k >= amb.convs.size() || s.convergences[k]) return false;
    const auto& cv = amb.convs[k];
    if (cv.kind != kind || cv.vertex != *c) return false;
    for (auto v : cv.diagram_vertices) {
        if (!s.vertices[v]) return false;
    }
    for (auto e : cv.diagram_edges) {
        if (!s.edges[e]) return false;
    }
    auto legs = unique_in_order(cv.legs);
    if (st.arrows.size() != legs.size()) return false;
    for (std::size_t i = 0; i < legs.size(); ++i) {
        if (st.arrows[i] != amb.edge_name(legs[i]) || s.edges[legs[i]]) return false;
    }
    return true;
}

// Shared by P5 and P6; `into` selects P5.
bool check_p56(const Ambient& amb, const ItemSet& s, const ConstructStep& st, bool into) {
    if (!st.objects.empty() || st.arrows.size() != 1 || !st.convergences.empty() || !st.premise_convergence) {
        return false;
    }
    auto k = *st.premise_convergence;
    if (k >= amb.convs.size() || !s.convergences[k]) return false;
    const auto& cv = amb.convs[k];
    if (cv.kind != (into ? ConeKind::limit : ConeKind::colimit)) return false;
    auto f = amb.find_edge(st.arrows[0]);
    if (!f || s.edges[*f]) return false;
    const std::size_t apex_end = into ? amb.tgt[*f] : amb.src[*f];
    const std::size_t x = into ? amb.src[*f] : amb.tgt[*f];
    if (apex_end != cv.vertex || !s.vertices[x]) return false;

    if (st.family.size() != cv.diagram_vertices.size()) return false;
    std::vector<std::size_t> fam;
    for (std::size_t h = 0; h < st.family.size(); ++h) {
        auto e = amb.find_edge(st.family[h]);
        if (!e || !s.edges[*e]) return false;
        if (into ? (amb.src[*e] != x || amb.tgt[*e] != cv.diagram_vertices[h])
                 : (amb.src[*e] != cv.diagram_vertices[h] || amb.tgt[*e] != x)) {
            return false;
        }
        fam.push_back(*e);
    }
    if (st.premise_commutativities.size() != cv.shape_edges.size()) return false;
    for (std::size_t j = 0; j < cv.shape_edges.size(); ++j) {
        auto i = st.premise_commutativities[j];
        if (i >= amb.comms.size() || !s.commutativities[i]) return false;
        auto [h, h2] = cv.shape_edges[j];
        auto d = cv.diagram_edges[j];
        bool ok = into ? amb.comm_is(i, two(amb, fam[h], d), one(amb, fam[h2]))
                       : amb.comm_is(i, two(amb, d, fam[h2]), one(amb, fam[h]));
        if (!ok) return false;
    }
    // The included conditions are exactly the c_H . f = x_H (resp. f . c_H).
    std::vector<bool> covered(cv.legs.size(), false);
    if (st.commutativities.empty()) return cv.legs.empty();
    for (auto i : st.commutativities) {
        if (i >= amb.comms.size() || s.commutativities[i]) return false;
        bool any = false;
        for (std::size_t h = 0; h < cv.legs.size(); ++h) {
            CPath lhs = into ? two(amb, *f, cv.legs[h]) : two(amb, cv.legs[h], *f);
            if (amb.comm_is(i, lhs, one(amb, fam[h]))) {
                covered[h] = true;
                any = true;
            }
        }
        if (!any) return false;
    }
    return std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
}

bool guard(const Ambient& amb, const ItemSet& s, const ConstructStep& st) {
    switch (st.procedure) {
        case Procedure::include_conditions: return check_p1(amb, s, st);
        case Procedure::defined_arrow: return check_p2(amb, s, st);
        case Procedure::limit_object: return check_p34(amb, s, st, ConeKind::limit);
        case Procedure::colimit_object: return check_p34(amb, s, st, ConeKind::colimit);
        case Procedure::induced_into_limit: return check_p56(amb, s, st, true);
        case Procedure::induced_from_colimit: return check_p56(amb, s, st, false);
    }
    return false;
}

ItemSet apply_unchecked(const Ambient& amb, ItemSet s, const ConstructStep& st) {
    for (const auto& o : st.objects) s.vertices[amb.vertex(o)] = true;
    for (const auto& a : st.arrows) s.edges[amb.edge(a)] = true;
    for (auto i : st.commutativities) s.commutativities[i] = true;
    for (auto i : st.convergences) s.convergences[i] = true;
    return s;
}

// ---- step generation ----------------------------------------------------

std::vector<ConstructStep> p1_steps(const Ambient& amb, const ItemSet& s) {
    std::vector<ConstructStep> out;
    for (std::size_t i = 0; i < amb.comms.size(); ++i) {
        if (!s.commutativities[i] && amb.comm_expressible(s, i)) {
            out.push_back({Procedure::include_conditions, {}, {}, {i}, {}, {}, {}, {}});
        }
    }
    for (std::size_t i = 0; i < amb.convs.size(); ++i) {
        if (!s.convergences[i] && amb.conv_expressible(s, i)) {
            out.push_back({Procedure::include_conditions, {}, {}, {}, {i}, {}, {}, {}});
        }
    }
    return out;
}

std::optional<ConstructStep> p1_bundle(const Ambient& amb, const ItemSet& s) {
    ConstructStep st{Procedure::include_conditions, {}, {}, {}, {}, {}, {}, {}};
    for (const auto& one_step : p1_steps(amb, s)) {
        st.commutativities.insert(st.commutativities.end(), one_step.commutativities.begin(),
                                  one_step.commutativities.end());
        st.convergences.insert(st.convergences.end(), one_step.convergences.begin(), one_step.convergences.end());
    }
    if (st.commutativities.empty() && st.convergences.empty()) return std::nullopt;
    return st;
}

template <class Sink>
void p2_steps(const Ambient& amb, const ItemSet& s, Sink&& sink) {
    for (std::size_t f = 0; f < amb.src.size(); ++f) {
        if (s.edges[f] || !s.vertices[amb.src[f]] || !s.vertices[amb.tgt[f]]) continue;
        for (std::size_t i = 0; i < amb.comms.size(); ++i) {
            ConstructStep st{Procedure::defined_arrow, {}, {amb.edge_name(f)}, {i}, {}, {}, {}, {}};
            if (check_p2(amb, s, st) && !sink(std::move(st))) return;
        }
    }
}

template <class Sink>
void p34_steps(const Ambient& amb, const ItemSet& s, ConeKind kind, Sink&& sink) {
    for (std::size_t k = 0; k < amb.convs.size(); ++k) {
        const auto& cv = amb.convs[k];
        if (cv.kind != kind || s.vertices[cv.vertex]) continue;
        ConstructStep st{kind == ConeKind::limit ? Procedure::limit_object : Procedure::colimit_object,
                         {amb.vertex_name(cv.vertex)}, {}, {}, {k}, {}, {}, {}};
        for (auto l : unique_in_order(cv.legs)) st.arrows.push_back(amb.edge_name(l));
        if (check_p34(amb, s, st, kind) && !sink(std::move(st))) return;
    }
}

template <class Sink>
void p56_steps(const Ambient& amb, const ItemSet& s, bool into, Sink&& sink) {
    const ConeKind kind = into ? ConeKind::limit : ConeKind::colimit;
    for (std::size_t k = 0; k < amb.convs.size(); ++k) {
        const auto& cv = amb.convs[k];
        if (cv.kind != kind || !s.convergences[k]) continue;
        for (std::size_t f = 0; f < amb.src.size(); ++f) {
            if (s.edges[f]) continue;
            if ((into ? amb.tgt[f] : amb.src[f]) != cv.vertex) continue;
            const std::size_t x = into ? amb.src[f] : amb.tgt[f];
            if (!s.vertices[x]) continue;

            // Per shape vertex, the present x_H for which b has the
            // condition relating f, c_H and x_H.
            const std::size_t n = cv.legs.size();
            std::vector<std::vector<std::pair<std::size_t, std::size_t>>> options(n);  // (x_H, condition)
            bool possible = true;
            for (std::size_t h = 0; h < n && possible; ++h) {
                CPath lhs = into ? two(amb, f, cv.legs[h]) : two(amb, cv.legs[h], f);
                for (std::size_t e = 0; e < amb.src.size(); ++e) {
                    if (!s.edges[e]) continue;
                    if (into ? (amb.src[e] != x || amb.tgt[e] != cv.diagram_vertices[h])
                             : (amb.src[e] != cv.diagram_vertices[h] || amb.tgt[e] != x)) {
                        continue;
                    }
                    if (auto i = amb.find_comm(lhs, one(amb, e))) options[h].emplace_back(e, *i);
                }
                possible = !options[h].empty();
            }
            if (!possible) continue;

            std::vector<std::size_t> pick(n, 0);
            bool stop = false;
            std::function<void(std::size_t)> rec = [&](std::size_t h) {
                if (stop) return;
                if (h < n) {
                    for (std::size_t o = 0; o < options[h].size() && !stop; ++o) {
                        pick[h] = o;
                        rec(h + 1);
                    }
                    return;
                }
                ConstructStep st{into ? Procedure::induced_into_limit : Procedure::induced_from_colimit,
                                 {}, {amb.edge_name(f)}, {}, {}, k, {}, {}};
                std::vector<std::size_t> fam(n);
                std::vector<std::size_t> conds;
                for (std::size_t i = 0; i < n; ++i) {
                    fam[i] = options[i][pick[i]].first;
                    st.family.push_back(amb.edge_name(fam[i]));
                    conds.push_back(options[i][pick[i]].second);
                }
                st.commutativities = unique_in_order(conds);
                for (std::size_t j = 0; j < cv.shape_edges.size(); ++j) {
                    auto [hh, h2] = cv.shape_edges[j];
                    auto d = cv.diagram_edges[j];
                    auto prem = into ? amb.find_comm(two(amb, fam[hh], d), one(amb, fam[h2]), &s)
                                     : amb.find_comm(two(amb, d, fam[h2]), one(amb, fam[hh]), &s);
                    if (!prem) return;
                    st.premise_commutativities.push_back(*prem);
                }
                if (check_p56(amb, s, st, into) && !sink(std::move(st))) stop = true;
            };
            rec(0);
            if (stop) return;
        }
    }
}

std::optional<ConstructStep> first_of(const std::function<void(std::function<bool(ConstructStep)>)>& gen) {
    std::optional<ConstructStep> found;
    gen([&](ConstructStep st) {
        found = std::move(st);
        return false;
    });
    return found;
}

// Applies P1 (bundled), P2, P5 and P6 until none applies.
void saturate(const Ambient& amb, ItemSet& s, std::vector<ConstructStep>& steps) {
    for (;;) {
        std::optional<ConstructStep> st = p1_bundle(amb, s);
        if (!st) st = first_of([&](auto sink) { p2_steps(amb, s, sink); });
        if (!st) st = first_of([&](auto sink) { p56_steps(amb, s, true, sink); });
        if (!st) st = first_of([&](auto sink) { p56_steps(amb, s, false, sink); });
        if (!st) return;
        s = apply_unchecked(amb, std::move(s), *st);
        steps.push_back(std::move(*st));
    }
}

}  // namespace

std::size_t ItemSet::count() const {
    return count_true(vertices) + count_true(edges) + count_true(commutativities) + count_true(convergences);
}

bool ItemSet::contains(const ItemSet& other) const {
    return covers(vertices, other.vertices) && covers(edges, other.edges) &&
           covers(commutativities, other.commutativities) && covers(convergences, other.convergences);
}

ItemSet items_of(const Sketch& sub, const Sketch& b) {
    if (!is_subsketch_inclusion(sub, b)) throw std::invalid_argument("not a subsketch");
    ItemSet s{std::vector<bool>(b.graph.vertices.size()), std::vector<bool>(b.graph.edges.size()),
              std::vector<bool>(b.commutativities.size()), std::vector<bool>(b.convergences.size())};
    for (const auto& v : sub.graph.vertices) s.vertices[*b.graph.vertex_index(v)] = true;
    for (const auto& e : sub.graph.edges) s.edges[*b.graph.edge_index(e.name)] = true;
    for (std::size_t i = 0; i < b.commutativities.size(); ++i) {
        s.commutativities[i] = sub.has_commutativity(b.commutativities[i]);
    }
    for (std::size_t i = 0; i < b.convergences.size(); ++i) {
        s.convergences[i] = sub.has_convergence(b.convergences[i]);
    }
    return s;
}

ItemSet all_items(const Sketch& b) {
    return {std::vector<bool>(b.graph.vertices.size(), true), std::vector<bool>(b.graph.edges.size(), true),
            std::vector<bool>(b.commutativities.size(), true), std::vector<bool>(b.convergences.size(), true)};
}

Sketch sketch_of(const ItemSet& s, const Sketch& b) {
    Sketch out;
    for (std::size_t i = 0; i < s.vertices.size(); ++i) {
        if (s.vertices[i]) out.graph.vertices.push_back(b.graph.vertices[i]);
    }
    for (std::size_t i = 0; i < s.edges.size(); ++i) {
        if (s.edges[i]) out.graph.edges.push_back(b.graph.edges[i]);
    }
    for (std::size_t i = 0; i < s.commutativities.size(); ++i) {
        if (s.commutativities[i]) out.commutativities.push_back(b.commutativities[i]);
    }
    for (std::size_t i = 0; i < s.convergences.size(); ++i) {
        if (s.convergences[i]) out.convergences.push_back(b.convergences[i]);
    }
    return out;
}

std::vector<std::string> missing_items(const ItemSet& s, const Sketch& b) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < s.vertices.size(); ++i) {
        if (!s.vertices[i]) out.push_back("object " + b.graph.vertices[i]);
    }
    for (std::size_t i = 0; i < s.edges.size(); ++i) {
        if (!s.edges[i]) out.push_back("arrow " + b.graph.edges[i].name);
    }
    for (std::size_t i = 0; i < s.commutativities.size(); ++i) {
        if (!s.commutativities[i]) out.push_back("commute " + render(b.commutativities[i]));
    }
    for (std::size_t i = 0; i < s.convergences.size(); ++i) {
        if (!s.convergences[i]) out.push_back(render(b.convergences[i]));
    }
    return out;
}

std::optional<ItemSet> apply_step(const ItemSet& state, const Sketch& b, const ConstructStep& step) {
    Ambient amb(b);
    if (!guard(amb, state, step)) return std::nullopt;
    ItemSet next = apply_unchecked(amb, state, step);
    if (next == state) return std::nullopt;
    return next;
}

std::vector<ConstructStep> applicable_steps(const ItemSet& state, const Sketch& b) {
    Ambient amb(b);
    std::vector<ConstructStep> out = p1_steps(amb, state);
    auto sink = [&](ConstructStep st) {
        out.push_back(std::move(st));
        return true;
    };
    p2_steps(amb, state, sink);
    p34_steps(amb, state, ConeKind::limit, sink);
    p34_steps(amb, state, ConeKind::colimit, sink);
    p56_steps(amb, state, true, sink);
    p56_steps(amb, state, false, sink);
    return out;
}

ConstructResult certify_constructible(const Sketch& a, const Sketch& b, const ConstructOptions& opts) {
    Ambient amb(b);
    const ItemSet full = all_items(b);
    ConstructResult result;
    std::set<ItemSet> visited;
    std::vector<ItemSet> dead_ends;

    std::function<bool(ItemSet, std::vector<ConstructStep>&)> search = [&](ItemSet s,
                                                                           std::vector<ConstructStep>& steps) {
        saturate(amb, s, steps);
        if (s == full) return true;
        if (!visited.insert(s).second) return false;
        if (visited.size() > opts.budget) {
            throw BudgetExceeded("constructibility search exceeded its budget of " + std::to_string(opts.budget) +
                                 " states");
        }
        std::vector<ConstructStep> intros;
        auto sink = [&](ConstructStep st) {
            intros.push_back(std::move(st));
            return true;
        };
        p34_steps(amb, s, ConeKind::limit, sink);
        p34_steps(amb, s, ConeKind::colimit, sink);
        if (intros.empty()) {
            dead_ends.push_back(s);
            return false;
        }
        for (const auto& st : intros) {
            std::vector<ConstructStep> branch = steps;
            branch.push_back(st);
            if (search(apply_unchecked(amb, s, st), branch)) {
                steps = std::move(branch);
                return true;
            }
        }
        return false;
    };

    std::vector<ConstructStep> steps;
    const bool ok = search(items_of(a, b), steps);
    result.states_explored = visited.size();
    if (ok) {
        result.certificate = ConstructibilityCertificate{std::move(steps)};
        return result;
    }
    for (std::size_t i = 0; i < dead_ends.size(); ++i) {
        bool maximal = true;
        for (std::size_t j = 0; j < dead_ends.size() && maximal; ++j) {
            if (i != j && dead_ends[j] != dead_ends[i] && dead_ends[j].contains(dead_ends[i])) maximal = false;
        }
        if (maximal) result.frontier.push_back({dead_ends[i], missing_items(dead_ends[i], b)});
    }
    return result;
}

bool replay_certificate(const ConstructibilityCertificate& cert, const Sketch& a, const Sketch& b) {
    if (!is_subsketch_inclusion(a, b)) return false;
    Ambient amb(b);
    ItemSet s = items_of(a, b);
    for (const auto& st : cert.steps) {
        try {
            if (!guard(amb, s, st)) return false;
            ItemSet next = apply_unchecked(amb, s, st);
            if (next == s) return false;
            s = std::move(next);
        } catch (const ResolutionError&) {
            return false;
        }
    }
    return s == all_items(b);
}

ConstructibilityCertificate dualize_certificate(const ConstructibilityCertificate& cert) {
    ConstructibilityCertificate out = cert;
    for (auto& st : out.steps) st.procedure = dual(st.procedure);
    return out;
}

std::string describe(const ConstructStep& st, const Sketch& b) {
    std::ostringstream os;
    os << short_name(st.procedure) << ": " << to_string(st.procedure);
    auto list = [&](const char* label, const std::vector<std::string>& v) {
        if (v.empty()) return;
        os << "; " << label << ' ';
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    };
    list("object", st.objects);
    list("arrows", st.arrows);
    std::vector<std::string> conds;
    for (auto i : st.commutativities) conds.push_back(render(b.commutativities.at(i)));
    for (auto i : st.convergences) conds.push_back(render(b.convergences.at(i)));
    list("conditions", conds);
    if (st.premise_convergence) os << "; using " << render(b.convergences.at(*st.premise_convergence));
    list("family", st.family);
    return os.str();
}

}  // namespace sketchkit
