#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cograph/baselines.hpp"
#include "cograph/commands.hpp"

namespace {

void add_run_flags(CLI::App* cmd, cograph::RunOptions& opts, std::optional<std::string>& mode,
                   bool& export_evolution) {
    cmd->add_option("config", opts.config_path, "Run configuration (JSON)")->required();
    cmd->add_option("--seed", opts.seed, "Run a single repetition with this scenario seed");
    cmd->add_option("--mode", mode, "Override the configured modes (latte, static, leader_worker, decentralized)");
    cmd->add_option("--out", opts.output_dir, "Output directory (default: config, then $COGRAPH_OUT, then ./out)");
    cmd->add_flag("--export-graphs", export_evolution, "Write a DOT graph per round for graph-backed modes");
    cmd->add_flag("--fail-on-timeout", opts.fail_on_timeout, "Exit 1 if any run hits the round limit");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coordination-graph simulator for LLM-style agent teams"};
    app.require_subcommand(1);

    cograph::RunOptions run_opts;
    std::optional<std::string> run_mode;
    bool run_export = false;
    auto* run = app.add_subcommand("run", "Run every configured mode for every repetition");
    add_run_flags(run, run_opts, run_mode, run_export);

    cograph::RunOptions cmp_opts;
    std::optional<std::string> cmp_mode;
    bool cmp_export = false;
    auto* compare = app.add_subcommand("compare", "Run two or more modes on shared seeds and tabulate them");
    add_run_flags(compare, cmp_opts, cmp_mode, cmp_export);

    cograph::ExportOptions exp_opts;
    auto* exp = app.add_subcommand("export-graph", "Rebuild the graph at a round from a trace");
    exp->add_option("trace", exp_opts.trace_path, "trace.jsonl written by run/compare")->required();
    exp->add_option("--round", exp_opts.round, "Round to export (default: every round)");
    exp->add_option("--out", exp_opts.output_dir, "Directory for the exported files");
    exp->add_option("--format", exp_opts.format, "dot or jsonl")->check(CLI::IsMember({"dot", "jsonl"}));

    CLI11_PARSE(app, argc, argv);

    auto finish = [](cograph::RunOptions& opts, const std::optional<std::string>& mode, bool exported) {
        if (mode) opts.mode = cograph::mode_from_string(*mode);
        if (exported) opts.export_graph_evolution = true;
    };

    try {
        if (*run) {
            finish(run_opts, run_mode, run_export);
            return cograph::run_command(run_opts, std::cout, std::cerr);
        }
        if (*compare) {
            finish(cmp_opts, cmp_mode, cmp_export);
            return cograph::compare_command(cmp_opts, std::cout, std::cerr);
        }
        if (*exp) return cograph::export_graph_command(exp_opts, std::cout, std::cerr);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cograph::kExitConfig;
    }
    return 0;
}
