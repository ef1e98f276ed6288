#include <sstream>

#include "sketchkit/dsl.hpp"

namespace sketchkit {

const char* to_string(DeclKind k) {
    switch (k) {
        case DeclKind::category: return "category";
        case DeclKind::sketch: return "sketch";
        case DeclKind::sequent: return "sequent";
        case DeclKind::structure: return "structure";
    }
    return "?";
}

namespace {

template <class T, class Name>
const T* find_named(const std::vector<T>& v, std::string_view name, Name&& get) {
    for (const auto& x : v) {
        if (get(x) == name) return &x;
    }
    return nullptr;
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += v[i];
    }
    return out;
}

}  // namespace

const FiniteCategory* Document::find_category(std::string_view name) const {
    return find_named(categories, name, [](const FiniteCategory& c) -> const std::string& { return c.name(); });
}
const NamedSketch* Document::find_sketch(std::string_view name) const {
    return find_named(sketches, name, [](const NamedSketch& s) -> const std::string& { return s.name; });
}
const SequentDecl* Document::find_sequent(std::string_view name) const {
    return find_named(sequents, name, [](const SequentDecl& s) -> const std::string& { return s.name; });
}
const StructureDecl* Document::find_structure(std::string_view name) const {
    return find_named(structures, name, [](const StructureDecl& s) -> const std::string& { return s.name; });
}

void Document::add(FiniteCategory c) {
    order.emplace_back(DeclKind::category, categories.size());
    categories.push_back(std::move(c));
}
void Document::add(NamedSketch s) {
    order.emplace_back(DeclKind::sketch, sketches.size());
    sketches.push_back(std::move(s));
}
void Document::add(SequentDecl s) {
    order.emplace_back(DeclKind::sequent, sequents.size());
    sequents.push_back(std::move(s));
}
void Document::add(StructureDecl s) {
    order.emplace_back(DeclKind::structure, structures.size());
    structures.push_back(std::move(s));
}

std::string ParseError::to_string() const {
    std::string out = std::to_string(line) + ":" + std::to_string(column) + ": " + message;
    if (!expected.empty()) {
        out += "; expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) out += (i ? " | " : "") + ("'" + expected[i] + "'");
    }
    return out;
}

std::string ResolutionIssue::to_string() const {
    return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
}

std::string serialize_category(const FiniteCategory& c) {
    std::ostringstream os;
    os << "category " << c.name() << " {\n  objects: " << join(c.objects()) << ";\n";
    for (std::size_t o = 0; o < c.object_count(); ++o) {
        const auto& id = c.arrow(c.identity(object_id(o))).name;
        if (id != "id_" + c.objects()[o]) {
            throw std::invalid_argument("identity of '" + c.objects()[o] + "' is not named id_" + c.objects()[o]);
        }
    }
    for (std::size_t i = 0; i < c.arrow_count(); ++i) {
        ArrowId a = arrow_id(i);
        if (c.is_identity(a)) continue;
        os << "  arrow " << c.arrow(a).name << ": " << c.object_name(c.source(a)) << " -> "
           << c.object_name(c.target(a)) << ";\n";
    }
    for (std::size_t g = 0; g < c.arrow_count(); ++g) {
        if (c.is_identity(arrow_id(g))) continue;
        for (std::size_t f = 0; f < c.arrow_count(); ++f) {
            if (c.is_identity(arrow_id(f)) || c.source(arrow_id(g)) != c.target(arrow_id(f))) continue;
            if (auto h = c.compose(arrow_id(g), arrow_id(f))) {
                os << "  compose " << c.arrow(arrow_id(g)).name << "." << c.arrow(arrow_id(f)).name << " = "
                   << c.arrow(*h).name << ";\n";
            }
        }
    }
    os << "}\n";
    return os.str();
}

std::string serialize_sketch(const std::string& name, const Sketch& s) {
    std::ostringstream os;
    os << "sketch " << name << " {\n  objects: " << join(s.graph.vertices) << ";\n";
    for (const auto& e : s.graph.edges) os << "  arrow " << e.name << ": " << e.source << " -> " << e.target << ";\n";
    for (const auto& c : s.commutativities) os << "  commute " << render(c) << ";\n";
    for (const auto& c : s.convergences) os << "  " << render(c) << ";\n";
    os << "}\n";
    return os.str();
}

std::string serialize_document(const Document& d) {
    std::string out;
    for (const auto& [kind, i] : d.order) {
        if (!out.empty()) out += "\n";
        switch (kind) {
            case DeclKind::category: out += serialize_category(d.categories[i]); break;
            case DeclKind::sketch: out += serialize_sketch(d.sketches[i].name, d.sketches[i].sketch); break;
            case DeclKind::sequent: {
                const auto& s = d.sequents[i];
                out += "sequent " + s.name + " = " + s.x + " |- " + s.a + " |- " + s.b + ";\n";
                break;
            }
            case DeclKind::structure: {
                const auto& s = d.structures[i];
                out += "structure " + s.name + " : " + s.sketch + " in " + s.category + " {\n";
                for (const auto& [from, to] : s.bindings) out += "  map " + from + " |-> " + to + ";\n";
                out += "}\n";
                break;
            }
        }
    }
    return out;
}

ExactnessSequent resolve_sequent(const Document& d, std::string_view name) {
    const auto* s = d.find_sequent(name);
    if (!s) throw ResolutionError("unknown sequent '" + std::string(name) + "'");
    auto sketch = [&](const std::string& n) -> const Sketch& {
        const auto* k = d.find_sketch(n);
        if (!k) throw ResolutionError("unknown sketch '" + n + "'");
        return k->sketch;
    };
    return {s->name, s->x, s->a, s->b, sketch(s->x), sketch(s->a), sketch(s->b)};
}

ResolvedStructure resolve_structure(const Document& d, std::string_view name) {
    const auto* s = d.find_structure(name);
    if (!s) throw ResolutionError("unknown structure '" + std::string(name) + "'");
    const auto* sk = d.find_sketch(s->sketch);
    const auto* c = d.find_category(s->category);
    if (!sk) throw ResolutionError("unknown sketch '" + s->sketch + "'");
    if (!c) throw ResolutionError("unknown category '" + s->category + "'");
    return {make_structure(sk->sketch, *c, s->bindings, s->sketch), &sk->sketch, c};
}

Document dualize_document(const Document& d) {
    Document out = d;
    for (auto& c : out.categories) c = dual_category(c);
    for (auto& s : out.sketches) s.sketch = dualize_sketch(s.sketch);
    return out;
}

}  // namespace sketchkit
