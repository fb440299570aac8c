#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "cograph/baselines.hpp"

namespace cograph {

enum ExitCode : int {
    kExitOk = 0,
    kExitIncomplete = 1,  // only with fail_on_timeout
    kExitConfig = 2,
    kExitOutput = 3,
    kExitTrace = 4,
};

inline constexpr const char* kOutputDirEnv = "COGRAPH_OUT";

struct RunOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;  // replaces the seed list with a single seed
    std::optional<Mode> mode;           // replaces the configured modes
    std::optional<std::string> output_dir;
    std::optional<bool> export_graph_evolution;
    bool fail_on_timeout = false;
};

/// Runs every configured mode for every repetition and writes per-run traces,
/// graphs and reports plus a batch summary.
int run_command(const RunOptions& options, std::ostream& out, std::ostream& err);

/// As run_command, for two or more modes on identical seeds; also writes a
/// mode-by-metric table and a per-seed paired table.
int compare_command(const RunOptions& options, std::ostream& out, std::ostream& err);

struct ExportOptions {
    std::string trace_path;
    std::optional<int> round;  // every round when unset
    std::string output_dir = ".";
    std::string format = "dot";  // dot or jsonl
};

int export_graph_command(const ExportOptions& options, std::ostream& out, std::ostream& err);

}  // namespace cograph
