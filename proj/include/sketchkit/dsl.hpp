#pragma once

// The ".sk" document format: categories, sketches, sequents and structures.
//
//   category Two { objects: s, t; arrow u: s -> t; }
//   sketch B extends A { objects: P; arrow p: P -> X; limit P with (W: p) over { nodes: W; } }
//   sequent S = X |- A |- B;
//   structure F : X in Two { map A |-> s; map f |-> u; }
//
// Paths read right to left: "g.f" is f then g, and "id(A)" is the empty
// path at A. Identities of a category are named "id_<object>". Sketches
// declared with `extends` are stored flattened.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sketchkit/fincat.hpp"
#include "sketchkit/kernel.hpp"
#include "sketchkit/models.hpp"
#include "sketchkit/sequents.hpp"

namespace sketchkit {

struct NamedSketch {
    std::string name;
    Sketch sketch;
    bool operator==(const NamedSketch&) const = default;
};

struct SequentDecl {
    std::string name, x, a, b;
    bool operator==(const SequentDecl&) const = default;
};

struct StructureDecl {
    std::string name, sketch, category;
    std::vector<std::pair<std::string, std::string>> bindings;  // sketch order: vertices, then edges
    bool operator==(const StructureDecl&) const = default;
};

enum class DeclKind { category, sketch, sequent, structure };
const char* to_string(DeclKind k);

struct Document {
    std::vector<FiniteCategory> categories;
    std::vector<NamedSketch> sketches;
    std::vector<SequentDecl> sequents;
    std::vector<StructureDecl> structures;
    /// Declaration order across kinds: (kind, index within its list).
    std::vector<std::pair<DeclKind, std::size_t>> order;

    bool operator==(const Document&) const = default;

    const FiniteCategory* find_category(std::string_view name) const;
    const NamedSketch* find_sketch(std::string_view name) const;
    const SequentDecl* find_sequent(std::string_view name) const;
    const StructureDecl* find_structure(std::string_view name) const;

    void add(FiniteCategory c);
    void add(NamedSketch s);
    void add(SequentDecl s);
    void add(StructureDecl s);
};

struct ParseError {
    std::size_t line = 0;
    std::size_t column = 0;
    std::string message;
    std::vector<std::string> expected;

    std::string to_string() const;
};

struct ResolutionIssue {
    std::size_t line = 0;
    std::size_t column = 0;
    std::string message;

    std::string to_string() const;
};

struct ParseOutcome {
    Document document;
    std::optional<ParseError> syntax_error;
    std::vector<ResolutionIssue> resolution_errors;

    bool ok() const { return !syntax_error && resolution_errors.empty(); }
};

ParseOutcome parse_document(std::string_view text);

/// Canonical text. Categories whose identities are not named
/// "id_<object>" cannot be written and raise std::invalid_argument.
std::string serialize_document(const Document& d);

std::string serialize_category(const FiniteCategory& c);
std::string serialize_sketch(const std::string& name, const Sketch& s);

/// Thrown by the resolve_* helpers for unknown names.
ExactnessSequent resolve_sequent(const Document& d, std::string_view name);
/// The structure together with its sketch and category.
struct ResolvedStructure {
    Structure structure;
    const Sketch* sketch;
    const FiniteCategory* category;
};
ResolvedStructure resolve_structure(const Document& d, std::string_view name);

/// Every sketch, category and structure dualized; sequents kept by name.
Document dualize_document(const Document& d);

}  // namespace sketchkit
