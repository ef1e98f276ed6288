#include "sketchkit/report.hpp"

namespace sketchkit {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::error: return "error";
    }
    return "?";
}

json Report::to_json() const {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["command"] = command;
    j["inputs"] = inputs;
    j["verdict"] = to_string(verdict);
    j["details"] = details;
    j["elapsed_ms"] = elapsed_ms;
    return j;
}

json to_json(const ValidationReport& r) {
    json out = json::array();
    for (const auto& v : r.violations) out.push_back({{"location", v.location}, {"message", v.message}});
    return out;
}

json to_json(const Sketch& z, const FiniteCategory& c, const Structure& s) {
    json out = json::object();
    for (const auto& [from, to] : bindings_of(z, c, s)) out[from] = to;
    return out;
}

json to_json(const ConstructStep& st, const Sketch& b) {
    json j;
    j["procedure"] = short_name(st.procedure);
    j["description"] = describe(st, b);
    j["objects"] = st.objects;
    j["arrows"] = st.arrows;
    json comms = json::array(), convs = json::array(), prem = json::array();
    for (auto i : st.commutativities) comms.push_back(render(b.commutativities.at(i)));
    for (auto i : st.convergences) convs.push_back(render(b.convergences.at(i)));
    for (auto i : st.premise_commutativities) prem.push_back(render(b.commutativities.at(i)));
    j["commutativities"] = comms;
    j["convergences"] = convs;
    j["premise_convergence"] =
        st.premise_convergence ? json(render(b.convergences.at(*st.premise_convergence))) : json(nullptr);
    j["family"] = st.family;
    j["premise_commutativities"] = prem;
    return j;
}

json to_json(const ConstructibilityCertificate& cert, const Sketch& b) {
    json out = json::array();
    for (const auto& st : cert.steps) out.push_back(to_json(st, b));
    return out;
}

json to_json(const FrontierState& f) {
    return {{"included_items", f.state.count()}, {"missing", f.missing}};
}

json to_json(const VerificationDecision& d, const ExactnessSequent& s, const FiniteCategory& c) {
    json j;
    j["holds"] = d.holds;
    j["method"] = to_string(d.method);
    j["fibre_size"] = d.fibre_size;
    json w = json::array();
    for (const auto& [g, h] : d.witnesses) {
        w.push_back({{"G", to_json(s.a, c, g)}, {"H", to_json(s.b, c, h)}});
    }
    j["witnesses"] = w;
    j["counterexample"] = d.counterexample ? to_json(s.a, c, *d.counterexample) : json(nullptr);
    return j;
}

}  // namespace sketchkit
