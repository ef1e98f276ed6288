#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "sketchkit/report.hpp"

namespace sketchkit {

enum ExitCode : int { exit_pass = 0, exit_fail = 1, exit_input = 2, exit_budget = 3 };

/// Entry point of the `sketchkit` executable. JSON goes to `out` when
/// --json is given; human-readable text always goes to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// SKETCHKIT_CORPUS if set, else the corpus directory of the source tree.
std::filesystem::path default_corpus_dir();

/// SKETCHKIT_BUDGET parsed as a positive integer, if set.
std::optional<std::uint64_t> budget_from_env();

struct CorpusRunOptions {
    std::filesystem::path dir = default_corpus_dir();
    std::optional<std::filesystem::path> golden;  // defaults to dir/golden.json
    std::optional<std::uint64_t> budget;
};

/// Runs every expectation of the golden file against the corpus document.
/// The report's verdict is pass iff every member matches.
Report corpus_run(const CorpusRunOptions& opts);

}  // namespace sketchkit
