#pragma once

// Finite categories given by explicit composition tables, and exhaustive
// limit / colimit / mono / iso oracles over them.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "sketchkit/kernel.hpp"

namespace sketchkit {

enum class ObjectId : std::uint32_t {};
enum class ArrowId : std::uint32_t {};

constexpr std::size_t index(ObjectId id) { return static_cast<std::size_t>(id); }
constexpr std::size_t index(ArrowId id) { return static_cast<std::size_t>(id); }
constexpr ObjectId object_id(std::size_t i) { return static_cast<ObjectId>(i); }
constexpr ArrowId arrow_id(std::size_t i) { return static_cast<ArrowId>(i); }

struct Arrow {
    std::string name;
    ObjectId source;
    ObjectId target;
    bool operator==(const Arrow&) const = default;
};

class FiniteCategory {
public:
    FiniteCategory() = default;

    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    std::size_t object_count() const { return objects_.size(); }
    std::size_t arrow_count() const { return arrows_.size(); }

    const std::vector<std::string>& objects() const { return objects_; }
    const std::vector<Arrow>& arrows() const { return arrows_; }
    const std::string& object_name(ObjectId o) const { return objects_[index(o)]; }
    const Arrow& arrow(ArrowId a) const { return arrows_[index(a)]; }
    ObjectId source(ArrowId a) const { return arrows_[index(a)].source; }
    ObjectId target(ArrowId a) const { return arrows_[index(a)].target; }

    std::optional<ObjectId> find_object(std::string_view name) const;
    std::optional<ArrowId> find_arrow(std::string_view name) const;

    ArrowId identity(ObjectId o) const { return identities_[index(o)]; }
    bool is_identity(ArrowId a) const { return identities_[index(source(a))] == a; }

    /// g . f, i.e. f first. nullopt if the pair is not composable or the
    /// table has no entry.
    std::optional<ArrowId> compose(ArrowId g, ArrowId f) const;

    /// Arrows from a to b, in declaration order.
    std::span<const ArrowId> hom(ObjectId a, ObjectId b) const {
        return homs_[index(a) * objects_.size() + index(b)];
    }

    bool operator==(const FiniteCategory& other) const {
        return name_ == other.name_ && objects_ == other.objects_ && arrows_ == other.arrows_ &&
               identities_ == other.identities_ && table_ == other.table_;
    }

    /// Same content, names ignored for the category itself.
    bool same_structure(const FiniteCategory& other) const {
        return objects_ == other.objects_ && arrows_ == other.arrows_ && identities_ == other.identities_ &&
               table_ == other.table_;
    }

private:
    friend class CategoryBuilder;
    void index_homs();

    std::string name_;
    std::vector<std::string> objects_;
    std::vector<Arrow> arrows_;
    std::vector<ArrowId> identities_;
    // table_[g * n + f] = g.f or -1
    std::vector<std::int32_t> table_;
    std::vector<std::vector<ArrowId>> homs_;
};

/// Assembles a FiniteCategory. Each object gets an identity arrow, named
/// "id_<object>" unless given. Composites with identities are filled in
/// automatically where the caller leaves them unset.
class CategoryBuilder {
public:
    explicit CategoryBuilder(std::string name);

    ObjectId add_object(const std::string& name, std::string identity_name = {});
    /// An object whose identity is designated later among its loops.
    ObjectId add_bare_object(const std::string& name);
    void designate_identity(const std::string& object, const std::string& arrow);
    ArrowId add_arrow(const std::string& name, const std::string& source, const std::string& target);
    /// Records h = g . f. Throws ResolutionError on unknown names or a
    /// conflicting earlier entry.
    void set_composite(const std::string& g, const std::string& f, const std::string& h);

    FiniteCategory build() const;

private:
    ArrowId arrow_named(const std::string& name) const;

    FiniteCategory cat_;
    std::vector<std::tuple<ArrowId, ArrowId, ArrowId>> composites_;
    std::vector<bool> has_identity_;
};

/// The free category on an acyclic graph. The composite of a path f1..fn
/// (n >= 2) is named "fn_..._f1". Throws std::invalid_argument on cycles.
FiniteCategory free_category_on_acyclic(const std::string& name, const Graph& graph);

ValidationReport validate_category(const FiniteCategory& c);

/// Same names, arrows reversed, composition swapped.
FiniteCategory dual_category(const FiniteCategory& c, std::string name = {});

/// Graph of the category; one commutativity per composable pair and one
/// per identity; no convergence conditions.
Sketch underlying_sketch(const FiniteCategory& c);

struct ExtractedCategory {
    std::optional<FiniteCategory> category;
    std::vector<CommutativityCondition> residue;
    std::string failure;

    bool ok() const { return category.has_value(); }
};

/// Reads a composition table back out of a sketch whose commutativities
/// contain an identity condition per vertex and a composite condition per
/// composable pair. Conditions not consumed that way are the residue.
ExtractedCategory extract_category(const Sketch& a, std::string name = {});

/// A graph morphism from a finite shape into a category.
struct Diagram {
    struct ShapeEdge {
        std::size_t source;
        std::size_t target;
        ArrowId arrow;
    };
    std::vector<ObjectId> objects;
    std::vector<ShapeEdge> edges;
};

struct Cone {
    ObjectId vertex;
    std::vector<ArrowId> legs;
    ConeKind orientation = ConeKind::limit;
    bool operator==(const Cone&) const = default;
};

/// Legs have the right endpoints and every shape edge commutes.
bool is_cone(const FiniteCategory& c, const Diagram& d, const Cone& cone);

/// All cones of the given orientation, ordered by vertex then legs.
std::vector<Cone> enumerate_cones(const FiniteCategory& c, const Diagram& d, ConeKind orientation);

/// Cones with a fixed vertex.
std::vector<Cone> enumerate_cones_at(const FiniteCategory& c, const Diagram& d, ConeKind orientation, ObjectId vertex);

/// Universal-property checks. The cone must match the diagram's shape
/// (std::invalid_argument otherwise).
bool is_limiting_cone(const FiniteCategory& c, const Diagram& d, const Cone& cone);
bool is_colimiting_cone(const FiniteCategory& c, const Diagram& d, const Cone& cone);
bool is_universal_cone(const FiniteCategory& c, const Diagram& d, const Cone& cone);

/// First universal cone in enumeration order, if any.
std::optional<Cone> find_universal_cone(const FiniteCategory& c, const Diagram& d, ConeKind orientation);

bool is_mono(const FiniteCategory& c, ArrowId f);
bool is_epi(const FiniteCategory& c, ArrowId f);
std::optional<ArrowId> inverse(const FiniteCategory& c, ArrowId f);
inline bool is_iso(const FiniteCategory& c, ArrowId f) { return inverse(c, f).has_value(); }

}  // namespace sketchkit
