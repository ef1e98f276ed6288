#include "sketchkit/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sketchkit/construct.hpp"
#include "sketchkit/dsl.hpp"
#include "sketchkit/sequents.hpp"

namespace sketchkit {

namespace {

// Raised for unreadable files, syntax errors and unknown names.
struct InputError : std::runtime_error {
    json issues;
    InputError(const std::string& what, json issues_ = json::array())
        : std::runtime_error(what), issues(std::move(issues_)) {}
};

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw InputError("cannot read " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Document load_document(const std::filesystem::path& p) {
    auto outcome = parse_document(read_file(p));
    if (outcome.ok()) return std::move(outcome.document);
    json issues = json::array();
    std::string first;
    if (outcome.syntax_error) {
        const auto& e = *outcome.syntax_error;
        issues.push_back({{"kind", "syntax"}, {"line", e.line}, {"column", e.column}, {"message", e.message},
                          {"expected", e.expected}});
        first = e.to_string();
    }
    for (const auto& r : outcome.resolution_errors) {
        issues.push_back({{"kind", "resolution"}, {"line", r.line}, {"column", r.column}, {"message", r.message}});
        if (first.empty()) first = r.to_string();
    }
    throw InputError(p.string() + ":" + first, std::move(issues));
}

Verdict verdict_of(bool ok) { return ok ? Verdict::pass : Verdict::fail; }

json prefixed(const std::string& where, const ValidationReport& r) {
    json out = json::array();
    for (const auto& v : r.violations) {
        out.push_back({{"location", where + ": " + v.location}, {"message", v.message}});
    }
    return out;
}

// ---- commands: each fills a report and never throws past InputError or
// BudgetExceeded ----

void cmd_check(const Document& d, Report& rep) {
    json violations = json::array();
    for (const auto& c : d.categories) {
        for (auto& v : prefixed("category " + c.name(), validate_category(c))) violations.push_back(v);
    }
    for (const auto& s : d.sketches) {
        for (auto& v : prefixed("sketch " + s.name, validate_sketch(s.sketch))) violations.push_back(v);
    }
    for (const auto& s : d.sequents) {
        for (auto& v : prefixed("sequent " + s.name, validate_sequent(resolve_sequent(d, s.name)))) {
            violations.push_back(v);
        }
    }
    for (const auto& s : d.structures) {
        auto r = resolve_structure(d, s.name);
        auto report = validate_structure(*r.sketch, *r.category, r.structure);
        for (auto& v : prefixed("structure " + s.name, report)) violations.push_back(v);
    }
    rep.details["declarations"] = d.order.size();
    rep.details["violations"] = violations;
    rep.verdict = verdict_of(violations.empty());
}

struct VerifyArgs {
    std::string sequent, structure, mode = "strict";
    std::optional<std::uint64_t> cap, budget;
};

// Shared by `verify` and the corpus runner.
void cmd_verify(const Document& d, const VerifyArgs& a, Report& rep) {
    auto seq = resolve_sequent(d, a.sequent);
    auto rs = resolve_structure(d, a.structure);
    rep.details["sequent"] = a.sequent;
    rep.details["structure"] = a.structure;
    rep.details["mode"] = a.mode;

    json violations = prefixed("sequent " + a.sequent, validate_sequent(seq));
    if (!(*rs.sketch == seq.x)) {
        violations.push_back({{"location", "structure " + a.structure},
                              {"message", "is a structure over '" + d.find_structure(a.structure)->sketch +
                                              "', not over '" + seq.x_name + "'"}});
    } else {
        for (auto& v : prefixed("structure " + a.structure, validate_structure(seq.x, *rs.category, rs.structure))) {
            violations.push_back(v);
        }
    }
    rep.details["violations"] = violations;
    if (!violations.empty()) {
        rep.verdict = Verdict::fail;
        return;
    }

    VerifyOptions vo;
    if (a.budget) vo.budget = *a.budget;
    VerificationDecision dec;
    if (a.mode == "strict") {
        dec = exists_verification(seq, *rs.category, rs.structure, vo);
    } else if (a.mode == "iso") {
        dec = exists_verification_upto_iso(seq, *rs.category, rs.structure, vo);
    } else {
        FunctorialOptions fo;
        fo.budget = vo.budget;
        if (a.cap) fo.cap = *a.cap;
        dec = exists_functorial_verification(seq, *rs.category, rs.structure, fo);
    }
    rep.details["decision"] = to_json(dec, seq, *rs.category);
    rep.verdict = verdict_of(dec.holds);
}

void cmd_constructible(const Document& d, const std::string& sequent, std::optional<std::uint64_t> budget,
                       Report& rep) {
    auto seq = resolve_sequent(d, sequent);
    rep.details["sequent"] = sequent;
    json violations = prefixed("sequent " + sequent, validate_sequent(seq));
    rep.details["violations"] = violations;
    if (!violations.empty()) {
        rep.verdict = Verdict::fail;
        return;
    }
    ConstructOptions co;
    if (budget) co.budget = *budget;
    auto res = certify_constructible(seq.a, seq.b, co);
    rep.details["constructible"] = res.constructible();
    rep.details["states_explored"] = res.states_explored;
    bool replayed = false;
    if (res.certificate) {
        replayed = replay_certificate(*res.certificate, seq.a, seq.b);
        rep.details["certificate"] = to_json(*res.certificate, seq.b);
        rep.details["replayed"] = replayed;
    } else {
        rep.details["certificate"] = nullptr;
        rep.details["replayed"] = false;
    }
    json frontier = json::array();
    for (const auto& f : res.frontier) frontier.push_back(to_json(f));
    rep.details["frontier"] = frontier;
    rep.verdict = verdict_of(res.constructible() && replayed);
}

void cmd_unconditional(const Document& d, const std::string& sequent, Report& rep) {
    auto seq = resolve_sequent(d, sequent);
    rep.details["sequent"] = sequent;
    json violations = prefixed("sequent " + sequent, validate_sequent(seq));
    rep.details["violations"] = violations;
    bool holds = violations.empty() && is_unconditional_finite_kind(seq);
    rep.details["unconditional"] = holds;
    rep.verdict = verdict_of(holds);
}

// ---- output ----

struct Output {
    std::ostream& out;
    std::ostream& err;
    bool json_mode = false;
    bool timing = true;
};

int exit_code_for(const Report& rep) {
    switch (rep.verdict) {
        case Verdict::pass: return exit_pass;
        case Verdict::fail: return exit_fail;
        case Verdict::error: break;
    }
    return rep.details.value("error_kind", "") == "budget" ? exit_budget : exit_input;
}

void human_summary(const Report& rep, std::ostream& err) {
    err << rep.command << ": " << to_string(rep.verdict);
    if (rep.details.contains("error")) err << ": " << rep.details["error"].get<std::string>();
    err << "\n";
    if (rep.details.contains("violations")) {
        for (const auto& v : rep.details["violations"]) {
            err << "  " << v["location"].get<std::string>() << ": " << v["message"].get<std::string>() << "\n";
        }
    }
    if (rep.details.contains("decision")) {
        const auto& dec = rep.details["decision"];
        err << "  method " << dec["method"].get<std::string>() << ", fibre size " << dec["fibre_size"] << "\n";
        if (!dec["counterexample"].is_null()) err << "  counterexample G = " << dec["counterexample"].dump() << "\n";
    }
    if (rep.details.contains("certificate") && rep.details["certificate"].is_array()) {
        for (const auto& st : rep.details["certificate"]) {
            err << "  " << st["description"].get<std::string>() << "\n";
        }
    }
    if (rep.details.contains("frontier") && !rep.details["frontier"].empty()) {
        err << "  frontier (" << rep.details["frontier"].size() << " dead ends), missing in first:\n";
        for (const auto& m : rep.details["frontier"][0]["missing"]) err << "    " << m.get<std::string>() << "\n";
    }
    if (rep.details.contains("members")) {
        for (const auto& m : rep.details["members"]) {
            err << "  " << std::left << std::setw(48) << m["id"].get<std::string>() << " expected "
                << std::setw(6) << m["expected"].dump() << " actual " << std::setw(8) << m["actual"].dump()
                << (m["ok"].get<bool>() ? " ok" : " MISMATCH") << "\n";
        }
    }
}

int emit(Report& rep, const Output& o, std::chrono::steady_clock::time_point start) {
    rep.elapsed_ms = o.timing ? std::chrono::duration_cast<std::chrono::milliseconds>(
                                    std::chrono::steady_clock::now() - start)
                                    .count()
                              : 0;
    human_summary(rep, o.err);
    if (o.json_mode) o.out << rep.to_json().dump(2) << "\n";
    return exit_code_for(rep);
}

// Runs `body` and turns the library's exceptions into error verdicts.
template <class Body>
void guarded(Report& rep, Body&& body) {
    try {
        body();
    } catch (const InputError& e) {
        rep.verdict = Verdict::error;
        rep.details["error_kind"] = "input";
        rep.details["error"] = e.what();
        rep.details["issues"] = e.issues;
    } catch (const ResolutionError& e) {
        rep.verdict = Verdict::error;
        rep.details["error_kind"] = "input";
        rep.details["error"] = e.what();
    } catch (const BudgetExceeded& e) {
        rep.verdict = Verdict::error;
        rep.details["error_kind"] = "budget";
        rep.details["error"] = e.what();
    }
}

void write_text(const std::string& text, const std::optional<std::string>& path, Report& rep, const Output& o) {
    if (path) {
        std::ofstream f(*path, std::ios::binary);
        if (!f) throw InputError("cannot write " + *path);
        f << text;
        rep.details["out"] = *path;
    } else if (o.json_mode) {
        rep.details["document"] = text;
    } else {
        o.out << text;
    }
}

std::optional<std::uint64_t> effective_budget(std::optional<std::uint64_t> flag) {
    return flag ? flag : budget_from_env();
}

}  // namespace

std::filesystem::path default_corpus_dir() {
    if (const char* env = std::getenv("SKETCHKIT_CORPUS"); env && *env) return env;
    return SKETCHKIT_CORPUS_DIR;
}

std::optional<std::uint64_t> budget_from_env() {
    const char* env = std::getenv("SKETCHKIT_BUDGET");
    if (!env || !*env) return std::nullopt;
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || v == 0) return std::nullopt;
    return v;
}

Report corpus_run(const CorpusRunOptions& opts) {
    Report rep;
    rep.command = "corpus run";
    auto corpus_path = opts.dir / "corpus.sk";
    auto golden_path = opts.golden.value_or(opts.dir / "golden.json");
    rep.inputs = {corpus_path.string(), golden_path.string()};
    guarded(rep, [&] {
        Document d = load_document(corpus_path);
        json golden;
        try {
            golden = json::parse(read_file(golden_path));
        } catch (const json::exception& e) {
            throw InputError(golden_path.string() + ": " + e.what());
        }
        json members = json::array(), failed = json::array();
        for (const auto& e : golden.at("expectations")) {
            Report sub;
            const std::string kind = e.at("kind");
            guarded(sub, [&] {
                if (kind == "verify") {
                    VerifyArgs a{e.at("sequent"), e.at("structure"), e.value("mode", "strict"), std::nullopt,
                                 opts.budget};
                    cmd_verify(d, a, sub);
                } else if (kind == "constructible") {
                    cmd_constructible(d, e.at("sequent"), opts.budget, sub);
                } else if (kind == "unconditional") {
                    cmd_unconditional(d, e.at("sequent"), sub);
                } else if (kind == "check") {
                    cmd_check(d, sub);
                } else {
                    throw InputError("unknown expectation kind '" + kind + "'");
                }
            });
            json actual = sub.verdict == Verdict::error ? json("error") : json(sub.verdict == Verdict::pass);
            bool ok = actual == e.at("expect");
            members.push_back({{"id", e.at("id")}, {"expected", e.at("expect")}, {"actual", actual}, {"ok", ok}});
            if (!ok) failed.push_back(e.at("id"));
        }
        rep.details["members"] = members;
        rep.details["failed"] = failed;
        rep.verdict = verdict_of(failed.empty());
    });
    return rep;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exactness sketches over finite categories", "sketchkit"};
    app.require_subcommand(1);
    Output o{out, err};
    bool no_timing = false;
    app.add_flag("--json", o.json_mode, "Write the JSON report to standard output")->configurable(false);
    app.add_flag("--no-timing", no_timing, "Report elapsed_ms as 0");
    app.fallthrough();

    std::string file;
    VerifyArgs va;
    std::string sequent, sketch;
    std::optional<std::uint64_t> budget;
    std::optional<std::string> out_path;
    std::string corpus_dir = default_corpus_dir().string();
    std::optional<std::string> golden;

    auto* check = app.add_subcommand("check", "Validate every declaration");
    check->add_option("file", file)->required();

    auto* verify = app.add_subcommand("verify", "Decide whether a sequent has a verification at a structure");
    verify->add_option("file", file)->required();
    verify->add_option("--sequent", va.sequent)->required();
    verify->add_option("--structure", va.structure)->required();
    verify->add_option("--mode", va.mode)->check(CLI::IsMember({"strict", "iso", "functorial"}));
    verify->add_option("--cap", va.cap)->check(CLI::PositiveNumber);

    auto* constructible = app.add_subcommand("constructible", "Certify the second inclusion of a sequent");
    constructible->add_option("file", file)->required();
    constructible->add_option("--sequent", sequent)->required();
    constructible->add_option("--budget", budget)->check(CLI::PositiveNumber);

    auto* unconditional = app.add_subcommand("unconditional", "Decide unconditionality of finite kind");
    unconditional->add_option("file", file)->required();
    unconditional->add_option("--sequent", sequent)->required();

    auto* dualize = app.add_subcommand("dualize", "Dualize every declaration");
    dualize->add_option("file", file)->required();
    dualize->add_option("--out", out_path);

    auto* strip = app.add_subcommand("strip", "Drop the convergence conditions of a sketch");
    strip->add_option("file", file)->required();
    strip->add_option("--sketch", sketch)->required();
    strip->add_option("--out", out_path);

    auto* corpus = app.add_subcommand("corpus", "Bundled corpus");
    corpus->require_subcommand(1);
    auto* corpus_run_cmd = corpus->add_subcommand("run", "Run the golden suite");
    corpus_run_cmd->add_option("--dir", corpus_dir);
    corpus_run_cmd->add_option("--golden", golden);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_pass : exit_input;
    }
    o.timing = !no_timing;

    const auto start = std::chrono::steady_clock::now();
    Report rep;
    rep.inputs = {file};

    if (*corpus) {
        CorpusRunOptions co;
        co.dir = corpus_dir;
        if (golden) co.golden = *golden;
        co.budget = budget_from_env();
        rep = corpus_run(co);
        return emit(rep, o, start);
    }

    guarded(rep, [&] {
        if (*check) {
            rep.command = "check";
            cmd_check(load_document(file), rep);
        } else if (*verify) {
            rep.command = "verify";
            va.budget = budget_from_env();
            if (!va.cap) va.cap = budget_from_env();
            cmd_verify(load_document(file), va, rep);
        } else if (*constructible) {
            rep.command = "constructible";
            cmd_constructible(load_document(file), sequent, effective_budget(budget), rep);
        } else if (*unconditional) {
            rep.command = "unconditional";
            cmd_unconditional(load_document(file), sequent, rep);
        } else if (*dualize) {
            rep.command = "dualize";
            Document d = load_document(file);
            write_text(serialize_document(dualize_document(d)), out_path, rep, o);
            rep.verdict = Verdict::pass;
        } else if (*strip) {
            rep.command = "strip";
            Document d = load_document(file);
            const auto* z = d.find_sketch(sketch);
            if (!z) throw ResolutionError("unknown sketch '" + sketch + "'");
            Document stripped;
            stripped.add(NamedSketch{sketch + "_star", strip_convergence(z->sketch)});
            rep.details["sketch"] = sketch + "_star";
            write_text(serialize_document(stripped), out_path, rep, o);
            rep.verdict = Verdict::pass;
        }
    });
    return emit(rep, o, start);
}

}  // namespace sketchkit
