#pragma once

// Exactness sequents X -> A -> B (both inclusions literal, by name) and the
// deciders for verification, verification up to isomorphism and functorial
// verification.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sketchkit/construct.hpp"
#include "sketchkit/fincat.hpp"
#include "sketchkit/kernel.hpp"
#include "sketchkit/models.hpp"

namespace sketchkit {

struct ExactnessSequent {
    std::string name;
    std::string x_name, a_name, b_name;
    Sketch x, a, b;
};

ValidationReport validate_sequent(const ExactnessSequent& s);

/// a is the underlying sketch of a finite category, and every condition of
/// a that is not one of its composition or identity conditions is a
/// condition of x.
bool is_unconditional_finite_kind(const ExactnessSequent& s);

ExactnessSequent dualize_sequent(const ExactnessSequent& s);

/// The same maps, now into the dual category.
Structure dualize_structure(const Structure& s, const FiniteCategory& dual_category);

enum class DecisionMethod { strict, up_to_iso, functorial_generic, functorial_delegated };
const char* to_string(DecisionMethod m);

struct VerificationDecision {
    bool holds = false;
    DecisionMethod method = DecisionMethod::strict;
    std::size_t fibre_size = 0;                          // |A-structures over F|
    std::vector<std::pair<Structure, Structure>> witnesses;  // (G, H) when holds
    std::optional<Structure> counterexample;                 // G when not
};

struct VerifyOptions {
    std::uint64_t budget = 10'000'000;   // structure search nodes
    bool parallel = true;
};

struct FunctorialOptions {
    std::uint64_t cap = 100'000;          // section search nodes
    std::uint64_t budget = 10'000'000;    // structure search nodes
    std::uint64_t construct_budget = 100'000;
    bool force_generic = false;
};

/// Every A-structure G with G . alpha = F has some B-structure H with
/// H . beta = G. Witnesses are the first H in canonical order.
VerificationDecision exists_verification(const ExactnessSequent& s, const FiniteCategory& c, const Structure& f,
                                         const VerifyOptions& opts = {});

/// As above with H . beta only required to be isomorphic to G.
VerificationDecision exists_verification_upto_iso(const ExactnessSequent& s, const FiniteCategory& c,
                                                  const Structure& f, const VerifyOptions& opts = {});

/// A right inverse functor of the restriction from the fibre of beta.alpha
/// over F to the fibre of alpha over F. When beta is certified
/// constructible this is the same question as exists_verification and is
/// delegated to it unless `force_generic` is set. The generic search throws
/// BudgetExceeded past `cap`.
VerificationDecision exists_functorial_verification(const ExactnessSequent& s, const FiniteCategory& c,
                                                    const Structure& f, const FunctorialOptions& opts = {});

/// Morphisms of the fibre of alpha over F from g to h: natural
/// transformations restricting to the identity on x.
std::vector<NatTransformation> fibre_morphisms(const ExactnessSequent& s, const FiniteCategory& c,
                                               const Structure& g, const Structure& h);

}  // namespace sketchkit
