#pragma once

// Structures (models of a sketch in a finite category), natural
// transformations between them, restriction, fibres and transport.
//
// A Structure stores its object map and arrow map positionally: entry i of
// `objects` is the image of the sketch's i-th vertex, entry j of `arrows`
// the image of its j-th edge. The sketch and category are passed alongside.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sketchkit/fincat.hpp"
#include "sketchkit/kernel.hpp"

namespace sketchkit {

struct Structure {
    std::string sketch;
    std::string category;
    std::vector<ObjectId> objects;
    std::vector<ArrowId> arrows;

    /// Equality of the underlying maps; the labels are not compared.
    bool operator==(const Structure& other) const { return objects == other.objects && arrows == other.arrows; }
};

/// Builds a structure from "vertex/edge |-> object/arrow" bindings. Throws
/// ResolutionError for unknown or missing names.
Structure make_structure(const Sketch& z, const FiniteCategory& c,
                         const std::vector<std::pair<std::string, std::string>>& bindings, std::string sketch_name = {});

/// Bindings in sketch order: vertices first, then edges.
std::vector<std::pair<std::string, std::string>> bindings_of(const Sketch& z, const FiniteCategory& c,
                                                              const Structure& s);

/// Composite of a path under s, or nullopt if it is not defined.
std::optional<ArrowId> evaluate_path(const Sketch& z, const FiniteCategory& c, const Structure& s, const Path& p);

/// The diagram and cone a convergence condition is sent to.
std::pair<Diagram, Cone> instantiate(const Sketch& z, const FiniteCategory& c, const Structure& s,
                                     const ConvergenceCondition& cond);

ValidationReport validate_structure(const Sketch& z, const FiniteCategory& c, const Structure& s);
inline bool is_structure(const Sketch& z, const FiniteCategory& c, const Structure& s) {
    return validate_structure(z, c, s).ok();
}

/// G . phi for a morphism phi: a -> b and a b-structure G.
Structure restrict_structure(const SketchMorphism& phi, const Sketch& a, const Sketch& b, const Structure& g);
Structure restrict_to_subsketch(const Sketch& a, const Sketch& b, const Structure& g);

/// The unique structure of the empty sketch.
Structure empty_structure(const FiniteCategory& c);

struct SearchOptions {
    std::uint64_t budget = 10'000'000;  // search nodes
    bool parallel = true;
};

/// All structures of z in c, in canonical order (lexicographic in the
/// search's variable order). Throws BudgetExceeded.
std::vector<Structure> enumerate_structures(const Sketch& z, const FiniteCategory& c, const SearchOptions& opts = {});

/// Single-threaded reference for enumerate_structures. Same output.
std::vector<Structure> enumerate_structures_serial(const Sketch& z, const FiniteCategory& c,
                                                   const SearchOptions& opts = {});

/// All b-structures H with H . phi = g on the nose.
std::vector<Structure> fibre(const SketchMorphism& phi, const Sketch& a, const Sketch& b, const FiniteCategory& c,
                             const Structure& g, const SearchOptions& opts = {});

/// First element of the fibre, without enumerating the rest.
std::optional<Structure> first_in_fibre(const SketchMorphism& phi, const Sketch& a, const Sketch& b,
                                        const FiniteCategory& c, const Structure& g, const SearchOptions& opts = {});

struct NatTransformation {
    Structure source;
    Structure target;
    std::vector<ArrowId> components;  // indexed by sketch vertex

    bool operator==(const NatTransformation&) const = default;
};

bool is_natural(const Sketch& z, const FiniteCategory& c, const NatTransformation& t);

/// Components fixed in advance, per vertex. Empty means none fixed.
using PinnedComponents = std::vector<std::optional<ArrowId>>;

/// All natural transformations f => g, in canonical order. Throws
/// std::invalid_argument if f and g are over different sketches or
/// categories.
std::vector<NatTransformation> enumerate_nat_transformations(const Sketch& z, const FiniteCategory& c,
                                                             const Structure& f, const Structure& g,
                                                             const PinnedComponents& pinned = {});

NatTransformation identity_transformation(const FiniteCategory& c, const Structure& f);
/// second . first
NatTransformation compose_transformations(const FiniteCategory& c, const NatTransformation& second,
                                          const NatTransformation& first);
bool is_natural_iso(const FiniteCategory& c, const NatTransformation& t);
std::optional<NatTransformation> inverse_transformation(const FiniteCategory& c, const NatTransformation& t);

/// Some natural isomorphism f => g, if one exists.
std::optional<NatTransformation> find_natural_iso(const Sketch& z, const FiniteCategory& c, const Structure& f,
                                                  const Structure& g);

NatTransformation restrict_transformation(const SketchMorphism& phi, const Sketch& a, const Sketch& b,
                                          const NatTransformation& t);

struct Transported {
    Structure structure;   // E, in the fibre over G
    NatTransformation iso;  // j: H => E
};

/// Given beta: a -> b injective on vertices, a b-structure H and an
/// isomorphism i: H . beta => G, builds E with E . beta = G and j: H => E
/// restricting to i. E agrees with G on the image of beta and is
/// conjugated from H elsewhere. Throws std::invalid_argument if beta is not
/// injective on vertices, i does not start at H . beta, or i is not
/// invertible.
Transported transport_along_iso(const SketchMorphism& beta, const Sketch& a, const Sketch& b,
                                const FiniteCategory& c, const Structure& h, const NatTransformation& i);

}  // namespace sketchkit
