#pragma once

// JSON forms of decisions, certificates and validation results, and the
// report envelope shared by every CLI command.

#include <string>
#include <vector>

#include <json.hpp>

#include "sketchkit/construct.hpp"
#include "sketchkit/fincat.hpp"
#include "sketchkit/kernel.hpp"
#include "sketchkit/models.hpp"
#include "sketchkit/sequents.hpp"

namespace sketchkit {

using json = nlohmann::ordered_json;

constexpr int kReportSchemaVersion = 1;

enum class Verdict { pass, fail, error };
const char* to_string(Verdict v);

struct Report {
    std::string command;
    std::vector<std::string> inputs;
    Verdict verdict = Verdict::error;
    json details = json::object();
    long long elapsed_ms = 0;

    json to_json() const;
};

json to_json(const ValidationReport& r);
/// Bindings as a name -> name object, in sketch order.
json to_json(const Sketch& z, const FiniteCategory& c, const Structure& s);
json to_json(const ConstructStep& step, const Sketch& b);
json to_json(const ConstructibilityCertificate& cert, const Sketch& b);
json to_json(const FrontierState& f);
json to_json(const VerificationDecision& d, const ExactnessSequent& s, const FiniteCategory& c);

}  // namespace sketchkit
