#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include "test_support.hpp"

#include "sketchkit/report.hpp"

using namespace sketchkit;
using namespace testsupport;

namespace {

struct Run {
    int code;
    std::string out, err;
    json report() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "sketchkit");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string corpus_file() { return (default_corpus_dir() / "corpus.sk").string(); }

// Enough of JSON Schema for docs/report.schema.json.
class SchemaCheck {
public:
    explicit SchemaCheck(json root) : root_(std::move(root)) {}

    std::vector<std::string> errors(const json& v) {
        errs_.clear();
        check(root_, v, "$");
        return errs_;
    }

private:
    static bool has_type(const json& v, const std::string& t) {
        if (t == "object") return v.is_object();
        if (t == "array") return v.is_array();
        if (t == "string") return v.is_string();
        if (t == "integer") return v.is_number_integer();
        if (t == "boolean") return v.is_boolean();
        if (t == "null") return v.is_null();
        return false;
    }

    bool ok(const json& s, const json& v) {
        auto saved = errs_;
        check(s, v, "");
        bool good = errs_.size() == saved.size();
        errs_ = saved;
        return good;
    }

    void check(const json& s, const json& v, const std::string& at) {
        if (s.contains("$ref")) {
            std::string ref = s["$ref"];
            return check(root_["$defs"][ref.substr(ref.rfind('/') + 1)], v, at);
        }
        if (s.contains("oneOf")) {
            int n = 0;
            for (const auto& alt : s["oneOf"]) n += ok(alt, v);
            if (n != 1) errs_.push_back(at + ": matches " + std::to_string(n) + " alternatives");
            return;
        }
        if (s.contains("type")) {
            bool any = false;
            if (s["type"].is_array()) {
                for (const auto& t : s["type"]) any = any || has_type(v, t);
            } else {
                any = has_type(v, s["type"]);
            }
            if (!any) return errs_.push_back(at + ": wrong type");
        }
        if (s.contains("enum") && std::find(s["enum"].begin(), s["enum"].end(), v) == s["enum"].end()) {
            errs_.push_back(at + ": not in enum");
        }
        if (s.contains("minimum") && v.is_number() && v.get<long long>() < s["minimum"].get<long long>()) {
            errs_.push_back(at + ": below minimum");
        }
        if (v.is_object()) {
            for (const auto& r : s.value("required", json::array())) {
                if (!v.contains(r.get<std::string>())) errs_.push_back(at + ": missing " + r.get<std::string>());
            }
            for (const auto& [k, sub] : v.items()) {
                if (s.contains("properties") && s["properties"].contains(k)) {
                    check(s["properties"][k], sub, at + "." + k);
                } else if (s.contains("additionalProperties")) {
                    const auto& ap = s["additionalProperties"];
                    if (ap.is_boolean()) {
                        if (!ap.get<bool>()) errs_.push_back(at + ": unexpected " + k);
                    } else {
                        check(ap, sub, at + "." + k);
                    }
                } else if (s.contains("properties")) {
                    errs_.push_back(at + ": undocumented field " + k);
                }
            }
        }
        if (v.is_array() && s.contains("items")) {
            for (std::size_t i = 0; i < v.size(); ++i) check(s["items"], v[i], at + "[" + std::to_string(i) + "]");
        }
    }

    json root_;
    std::vector<std::string> errs_;
};

SchemaCheck& schema() {
    static SchemaCheck s(json::parse(read_text(default_corpus_dir().parent_path() / "docs" / "report.schema.json")));
    return s;
}

void check_report(const Run& r) {
    auto j = r.report();
    auto errs = schema().errors(j);
    INFO(r.out);
    for (const auto& e : errs) CHECK_MESSAGE(false, e);
    std::string verdict = j["verdict"];
    int want = verdict == "pass" ? 0 : verdict == "fail" ? 1 : (j["details"]["error_kind"] == "budget" ? 3 : 2);
    CHECK(r.code == want);
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
    auto p = std::filesystem::temp_directory_path() / ("sketchkit_test_" + name);
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

}  // namespace

TEST_CASE("verify exit codes follow the verdict") {
    auto yes = run({"--json", "verify", corpus_file(), "--sequent", "IsoSeq", "--structure", "F_iso2"});
    CHECK(yes.code == 0);
    check_report(yes);

    auto no = run({"--json", "verify", corpus_file(), "--sequent", "MonoSeq", "--structure", "F_parfork_h"});
    CHECK(no.code == 1);
    check_report(no);
    auto j = no.report();
    CHECK(j["details"]["decision"]["counterexample"]["f"] == "h");

    for (const auto* mode : {"iso", "functorial"}) {
        auto m = run({"--json", "verify", corpus_file(), "--sequent", "IsoSeq", "--structure", "F_iso2", "--mode",
                      mode});
        CHECK(m.code == 0);
        check_report(m);
    }
}

TEST_CASE("verify rejects a structure over the wrong sketch") {
    auto r = run({"--json", "verify", corpus_file(), "--sequent", "ProdSeq", "--structure", "F_iso2"});
    CHECK(r.code == 1);
    check_report(r);
    CHECK_FALSE(r.report()["details"]["violations"].empty());
}

TEST_CASE("constructible reports certificates and frontiers") {
    auto yes = run({"--json", "constructible", corpus_file(), "--sequent", "RegEpiFixedSeq"});
    CHECK(yes.code == 0);
    check_report(yes);
    CHECK(yes.report()["details"]["replayed"] == true);

    auto no = run({"--json", "constructible", corpus_file(), "--sequent", "ReflSeq1"});
    CHECK(no.code == 1);
    check_report(no);
    CHECK_FALSE(no.report()["details"]["frontier"].empty());
}

TEST_CASE("budget exhaustion exits with 3") {
    auto r = run({"--json", "constructible", corpus_file(), "--sequent", "RegEpiFixedSeq", "--budget", "1"});
    CHECK(r.code == 3);
    check_report(r);

    auto cap = run({"--json", "verify", corpus_file(), "--sequent", "ProdSeq", "--structure", "E_B2", "--mode",
                    "functorial", "--cap", "1"});
    // delegated to the strict decider, so the cap is not reached
    CHECK(cap.code == 0);
}

TEST_CASE("SKETCHKIT_BUDGET overrides the default budget") {
    setenv("SKETCHKIT_BUDGET", "1", 1);
    auto r = run({"--json", "constructible", corpus_file(), "--sequent", "RegEpiFixedSeq"});
    unsetenv("SKETCHKIT_BUDGET");
    CHECK(r.code == 3);
    auto again = run({"--json", "constructible", corpus_file(), "--sequent", "RegEpiFixedSeq"});
    CHECK(again.code == 0);
}

TEST_CASE("parse and resolution errors exit with 2") {
    auto bad = temp_file("bad.sk", "category C {\n  objects A;\n}\n");
    auto r = run({"--json", "check", bad.string()});
    CHECK(r.code == 2);
    check_report(r);
    CHECK(r.report()["details"]["issues"][0]["line"] == 2);

    auto unknown = run({"--json", "verify", corpus_file(), "--sequent", "NoSuch", "--structure", "F_iso2"});
    CHECK(unknown.code == 2);
    check_report(unknown);

    auto missing = run({"--json", "check", "/nonexistent/file.sk"});
    CHECK(missing.code == 2);
    check_report(missing);

    CHECK(run({"verify"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("check passes on the corpus and fails on a broken structure") {
    auto ok = run({"--json", "check", corpus_file()});
    CHECK(ok.code == 0);
    check_report(ok);

    auto broken = temp_file("broken.sk", read_text(corpus_file()) +
                                             "\nstructure Broken : MonoB in ParFork { map A |-> b; map B |-> c; "
                                             "map id_A |-> id_b; map id_B |-> id_c; map f |-> h; }\n");
    auto r = run({"--json", "check", broken.string()});
    CHECK(r.code == 1);
    check_report(r);
}

TEST_CASE("unconditional") {
    CHECK(run({"unconditional", corpus_file(), "--sequent", "ReflSeq1"}).code == 0);
    CHECK(run({"unconditional", corpus_file(), "--sequent", "ChoiceSeq"}).code == 1);
}

TEST_CASE("dualize and strip write parseable documents") {
    auto out = std::filesystem::temp_directory_path() / "sketchkit_test_dual.sk";
    auto r = run({"--json", "dualize", corpus_file(), "--out", out.string()});
    CHECK(r.code == 0);
    check_report(r);
    auto dual = parse_document(read_text(out));
    REQUIRE(dual.ok());
    CHECK(dual.document == dualize_document(corpus()));

    auto s = run({"strip", corpus_file(), "--sketch", "ProdB"});
    CHECK(s.code == 0);
    auto stripped = parse_document(s.out);
    REQUIRE(stripped.ok());
    REQUIRE(stripped.document.find_sketch("ProdB_star"));
    CHECK(stripped.document.find_sketch("ProdB_star")->sketch == strip_convergence(sketch("ProdB")));

    auto j = run({"--json", "strip", corpus_file(), "--sketch", "ProdB"});
    check_report(j);
    CHECK(j.report()["details"]["document"] == s.out);
}

TEST_CASE("reports are byte-identical across runs") {
    std::vector<std::string> args = {"--json", "--no-timing", "constructible", corpus_file(), "--sequent",
                                     "BiproductSeq"};
    auto a = run(args), b = run(args);
    CHECK(a.out == b.out);
    CHECK(a.report()["elapsed_ms"] == 0);
    std::vector<std::string> v = {"--json", "--no-timing", "verify", corpus_file(), "--sequent", "ProdSeq",
                                  "--structure", "E_B2"};
    CHECK(run(v).out == run(v).out);
}

TEST_CASE("corpus run passes on a fresh checkout") {
    auto r = run({"--json", "corpus", "run"});
    CHECK(r.code == 0);
    check_report(r);
    CHECK(r.report()["details"]["failed"].empty());
}

TEST_CASE("corpus run lists exactly an inverted expectation") {
    auto golden = json::parse(read_text(default_corpus_dir() / "golden.json"));
    auto& e = golden["expectations"][3];
    e["expect"] = !e["expect"].get<bool>();
    std::string id = e["id"];
    auto path = temp_file("golden.json", golden.dump(2));
    auto r = run({"--json", "corpus", "run", "--golden", path.string()});
    CHECK(r.code == 1);
    check_report(r);
    auto failed = r.report()["details"]["failed"];
    REQUIRE(failed.size() == 1);
    CHECK(failed[0] == id);
}

TEST_CASE("human-readable output goes to standard error") {
    auto r = run({"verify", corpus_file(), "--sequent", "IsoSeq", "--structure", "F_iso2"});
    CHECK(r.out.empty());
    CHECK(r.err.find("verify: pass") != std::string::npos);
}
