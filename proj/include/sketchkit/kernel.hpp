#pragma once

// Sketch data model: finite graphs, paths, commutativity and convergence
// conditions, sketches and sketch morphisms.
//
// Everything here is name based. Two items are the same iff their names are
// the same, which is what makes subsketch inclusions literal.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sketchkit {

/// Raised when an operation is handed a name it cannot resolve.
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a search exceeds its node budget or cap. Distinct from a
/// negative answer.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Violation {
    std::string location;
    std::string message;
    bool operator==(const Violation&) const = default;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    void add(std::string location, std::string message) {
        violations.push_back({std::move(location), std::move(message)});
    }
    void append(const ValidationReport& other, const std::string& prefix = {});
};

struct Edge {
    std::string name;
    std::string source;
    std::string target;
    bool operator==(const Edge&) const = default;
};

struct Graph {
    std::vector<std::string> vertices;
    std::vector<Edge> edges;

    bool operator==(const Graph&) const = default;

    std::optional<std::size_t> vertex_index(std::string_view name) const;
    std::optional<std::size_t> edge_index(std::string_view name) const;
    bool has_vertex(std::string_view name) const { return vertex_index(name).has_value(); }
    bool has_edge(std::string_view name) const { return edge_index(name).has_value(); }
    const Edge* find_edge(std::string_view name) const;

    /// Same vertices, every edge flipped.
    Graph reversed() const;
};

/// A path (A0, f1, A1, ..., fn, An). `edges` is in application order, so
/// the composite reads fn...f1. An empty edge list is the identity path at
/// `start`.
struct Path {
    std::string start;
    std::vector<std::string> edges;

    bool operator==(const Path&) const = default;
};

/// Endpoint of `path` in `graph`, or nullopt if the path is ill formed.
std::optional<std::string> path_end(const Graph& graph, const Path& path);

struct CommutativityCondition {
    Path lhs;
    Path rhs;

    bool operator==(const CommutativityCondition&) const = default;
};

/// Commutativity conditions state an equation, so `p = q` and `q = p` are
/// the same condition.
bool same_commutativity(const CommutativityCondition& a, const CommutativityCondition& b);

enum class ConeKind { limit, colimit };

inline ConeKind opposite(ConeKind k) { return k == ConeKind::limit ? ConeKind::colimit : ConeKind::limit; }
const char* to_string(ConeKind k);

/// A 4-tuple (shape, D, C, (c_H)). Shape vertex i is sent to
/// `diagram_vertices[i]` and has leg `legs[i]`; shape edge j is sent to
/// `diagram_edges[j]`. Legs point from `vertex` into the diagram for limits
/// and out of the diagram into `vertex` for colimits. Legs may repeat.
struct ConvergenceCondition {
    ConeKind kind = ConeKind::limit;
    Graph shape;
    std::vector<std::string> diagram_vertices;
    std::vector<std::string> diagram_edges;
    std::string vertex;
    std::vector<std::string> legs;

    bool operator==(const ConvergenceCondition&) const = default;
};

struct ShapeEdgeSpec {
    std::string name;
    std::string source;
    std::string target;
    std::string image;
};

/// Builds a convergence condition the way it is written down: legs per shape
/// vertex (the diagram's vertex map is read off the leg endpoints) and shape
/// edges with their images. Throws ResolutionError for unknown leg arrows.
ConvergenceCondition make_convergence(const Graph& ambient, ConeKind kind, std::string vertex,
                                      const std::vector<std::pair<std::string, std::string>>& legs,
                                      const std::vector<ShapeEdgeSpec>& shape_edges = {});

/// Decides equivalence of two 4-tuples: same kind, same vertex and a
/// shape isomorphism commuting with the diagrams and matching legs.
bool conditions_equivalent(const ConvergenceCondition& c1, const ConvergenceCondition& c2);

struct Sketch {
    Graph graph;
    std::vector<CommutativityCondition> commutativities;
    std::vector<ConvergenceCondition> convergences;

    bool operator==(const Sketch&) const = default;

    bool has_commutativity(const CommutativityCondition& c) const;
    bool has_convergence(const ConvergenceCondition& c) const;
};

/// Names of the vertices and edges a condition mentions.
struct ConditionSupport {
    std::vector<std::string> vertices;
    std::vector<std::string> edges;
};
ConditionSupport support(const CommutativityCondition& c);
ConditionSupport support(const ConvergenceCondition& c);

/// True iff every vertex and edge the condition mentions is in `graph`.
bool expressible_in(const Graph& graph, const CommutativityCondition& c);
bool expressible_in(const Graph& graph, const ConvergenceCondition& c);

ValidationReport validate_graph(const Graph& g, const std::string& where = "graph");
ValidationReport validate_sketch(const Sketch& s);

struct SketchMorphism {
    std::map<std::string, std::string> vertex_map;
    std::map<std::string, std::string> edge_map;

    bool operator==(const SketchMorphism&) const = default;

    /// The inclusion of `sub` into whatever contains it: identity on names.
    static SketchMorphism inclusion(const Sketch& sub);

    const std::string& vertex(const std::string& v) const;
    const std::string& edge(const std::string& e) const;

    bool injective_on_vertices() const;
};

Path map_path(const SketchMorphism& m, const Path& p);
CommutativityCondition map_condition(const SketchMorphism& m, const CommutativityCondition& c);
ConvergenceCondition map_condition(const SketchMorphism& m, const ConvergenceCondition& c);

/// Throws ResolutionError if `m` does not cover src or maps into names that
/// dst lacks.
bool is_sketch_morphism(const SketchMorphism& m, const Sketch& src, const Sketch& dst);

bool is_subsketch_inclusion(const Sketch& a, const Sketch& b);

/// Throws std::invalid_argument unless a is a subsketch of b.
bool is_regular_subsketch(const Sketch& a, const Sketch& b);

Sketch dualize_sketch(const Sketch& z);
ConvergenceCondition dualize_condition(const ConvergenceCondition& c);
CommutativityCondition dualize_condition(const CommutativityCondition& c, const Graph& ambient);

/// The same sketch with every convergence condition removed.
Sketch strip_convergence(const Sketch& z);

/// Text forms used in diagnostics and certificates; they are the DSL syntax.
std::string render_path(const Path& p);
std::string render(const CommutativityCondition& c);
std::string render(const ConvergenceCondition& c);

}  // namespace sketchkit
