#pragma once

// Constructibility of subsketch inclusions a -> b by the six inclusion
// procedures, with certificates that can be replayed step by step.
//
// A state is a subsketch of b, recorded as the set of b's items it contains.
// Conditions in steps are referred to by their index in b.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sketchkit/kernel.hpp"

namespace sketchkit {

enum class Procedure {
    include_conditions,  // P1
    defined_arrow,       // P2
    limit_object,        // P3
    colimit_object,      // P4
    induced_into_limit,  // P5
    induced_from_colimit // P6
};

const char* to_string(Procedure p);
/// "P1" .. "P6"
const char* short_name(Procedure p);
std::optional<Procedure> procedure_from_short_name(const std::string& s);

/// P3 <-> P4, P5 <-> P6, the others fixed.
Procedure dual(Procedure p);

struct ItemSet {
    std::vector<bool> vertices;
    std::vector<bool> edges;
    std::vector<bool> commutativities;
    std::vector<bool> convergences;

    bool operator==(const ItemSet&) const = default;
    auto operator<=>(const ItemSet&) const = default;

    std::size_t count() const;
    bool contains(const ItemSet& other) const;
};

/// Items of `sub` as a subset of b's. Throws std::invalid_argument unless
/// sub is a subsketch of b.
ItemSet items_of(const Sketch& sub, const Sketch& b);
ItemSet all_items(const Sketch& b);
Sketch sketch_of(const ItemSet& s, const Sketch& b);

/// Human-readable names of the items of b that s lacks.
std::vector<std::string> missing_items(const ItemSet& s, const Sketch& b);

struct ConstructStep {
    Procedure procedure = Procedure::include_conditions;
    std::vector<std::string> objects;           // P3/P4: the new object
    std::vector<std::string> arrows;            // P2: f; P3/P4: the legs; P5/P6: f
    std::vector<std::size_t> commutativities;   // included from b
    std::vector<std::size_t> convergences;      // included from b
    std::optional<std::size_t> premise_convergence;  // P5/P6
    std::vector<std::string> family;                 // P5/P6: x_H per shape vertex
    std::vector<std::size_t> premise_commutativities;// P5/P6: one per shape edge

    bool operator==(const ConstructStep&) const = default;
};

struct ConstructibilityCertificate {
    std::vector<ConstructStep> steps;
    bool operator==(const ConstructibilityCertificate&) const = default;
};

/// The state after the step, or nullopt if a guard fails or the step adds
/// nothing.
std::optional<ItemSet> apply_step(const ItemSet& state, const Sketch& b, const ConstructStep& step);

/// Every legal single step from `state`, in a fixed order: P1 per
/// condition, then P2, P3, P4, P5, P6.
std::vector<ConstructStep> applicable_steps(const ItemSet& state, const Sketch& b);

struct FrontierState {
    ItemSet state;
    std::vector<std::string> missing;
};

struct ConstructOptions {
    std::uint64_t budget = 100'000;  // saturated states visited
};

struct ConstructResult {
    std::optional<ConstructibilityCertificate> certificate;
    std::vector<FrontierState> frontier;  // on refusal: maximal dead ends
    std::uint64_t states_explored = 0;

    bool constructible() const { return certificate.has_value(); }
};

/// Throws std::invalid_argument unless a is a subsketch of b, and
/// BudgetExceeded when the budget runs out.
ConstructResult certify_constructible(const Sketch& a, const Sketch& b, const ConstructOptions& opts = {});

bool replay_certificate(const ConstructibilityCertificate& cert, const Sketch& a, const Sketch& b);

/// The certificate for the dual inclusion.
ConstructibilityCertificate dualize_certificate(const ConstructibilityCertificate& cert);

/// Text form of a step, with conditions rendered in DSL syntax.
std::string describe(const ConstructStep& step, const Sketch& b);

}  // namespace sketchkit
