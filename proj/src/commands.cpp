#include "cograph/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "cograph/config.hpp"
#include "cograph/export.hpp"
#include "cograph/metrics.hpp"
#include "cograph/protocol.hpp"
#include "cograph/trace.hpp"
#include "json.hpp"

namespace cograph {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw OutputError("cannot write " + path.string());
    f << content;
    if (!f) throw OutputError("failed writing " + path.string());
}

void make_dirs(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw OutputError("cannot create directory " + dir.string());
}

std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

std::string round_file(int t, const std::string& ext) {
    std::ostringstream name;
    name << "graph-r" << std::setw(3) << std::setfill('0') << t << '.' << ext;
    return name.str();
}

fs::path resolve_output_dir(const RunOptions& options, const RunConfig& config) {
    if (options.output_dir) return *options.output_dir;
    if (!config.output_dir.empty()) return config.output_dir;
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    return "out";
}

struct Batch {
    std::string config_path;
    RunConfig config;
    fs::path dir;
};

RunConfig resolve_config(const RunOptions& options, bool compare) {
    RunConfig config = load_config(options.config_path);
    if (options.seed) {
        config.seeds = {*options.seed};
        config.repetitions = 1;
    }
    if (options.mode) config.modes = {*options.mode};
    if (options.export_graph_evolution) config.export_graph_evolution = *options.export_graph_evolution;
    if (compare && config.modes.size() < 2) throw ConfigError("modes", "compare needs at least two modes");
    return config;
}

struct RunRow {
    std::uint64_t seed;
    Mode mode;
    MetricsReport report;
};

std::vector<RunRow> execute(const Batch& batch, const std::string& command, std::ostream& out) {
    const RunConfig& config = batch.config;
    std::vector<RunRow> rows;
    std::vector<BatchSummary> summaries;

    for (Mode mode : config.modes) {
        const ModeConfig mc = config.mode_for(mode);
        std::vector<MetricsReport> reports;
        for (int i = 0; i < config.repetitions; ++i) {
            const ScenarioSpec spec = config.scenario_for(i);
            RunResult result = run(config.protocol, spec, mc);

            const fs::path dir = batch.dir / to_string(mode) / ("seed-" + std::to_string(spec.seed));
            make_dirs(dir);
            std::ostringstream trace;
            write_trace(trace, result.trace);
            write_file(dir / "trace.jsonl", trace.str());
            write_file(dir / "graph.jsonl", graph_jsonl(result.graph));
            write_file(dir / "report.json", report_json(result.report) + "\n");
            if (config.export_graph_evolution && mc.uses_graph) {
                const fs::path evo = dir / "evolution";
                make_dirs(evo);
                for (int t = 0; t <= result.trace.last_round(); ++t)
                    write_file(evo / round_file(t, "dot"), graph_dot(replay(result.trace, t), "round " + std::to_string(t)));
            }

            out << to_string(mode) << " seed " << spec.seed << ": "
                << (result.completed ? "completed" : "timeout") << " after " << result.report.rounds_used
                << " rounds, cost " << result.report.total_cost_chars << " chars\n";
            reports.push_back(result.report);
            rows.push_back({spec.seed, mode, result.report});
        }
        summaries.push_back(aggregate(reports));
    }

    write_file(batch.dir / "summary.json", summary_json(summaries) + "\n");
    write_file(batch.dir / "summary.csv", summary_csv(summaries));

    json meta;
    meta["command"] = command;
    meta["created"] = timestamp();
    meta["config"] = batch.config_path;
    meta["modes"] = json::array();
    for (Mode m : config.modes) meta["modes"].push_back(to_string(m));
    meta["seeds"] = json::array();
    for (int i = 0; i < config.repetitions; ++i) meta["seeds"].push_back(config.seed_at(i));
    write_file(batch.dir / "meta.json", meta.dump(2) + "\n");
    return rows;
}

std::string num(double x) { return json(x).dump(); }

void write_comparison(const Batch& batch, const std::vector<RunRow>& rows) {
    const std::vector<std::string> columns = {
        "rounds_used",       "total_cost_chars", "messages_count", "messages_chars",
        "overwrites",        "concurrent_writes", "wasted_chars",  "team_active_fraction",
        "lead_active_fraction", "seeded_nodes",  "final_nodes",    "latency_median",
        "latency_p95"};

    std::ostringstream table;
    table << "mode,runs,completion_rate,mean_cost,expected_cost,pooled_latency_p95";
    for (const auto& c : columns) table << ',' << c;
    table << '\n';
    for (Mode m : batch.config.modes) {
        std::vector<MetricsReport> reports;
        for (const auto& r : rows)
            if (r.mode == m) reports.push_back(r.report);
        const BatchSummary s = aggregate(reports);
        table << s.mode << ',' << s.runs << ',' << num(s.completion_rate) << ',' << num(s.mean_cost) << ','
              << (s.expected_cost ? num(*s.expected_cost) : "") << ',' << s.pooled_latency_p95;
        for (const auto& c : columns) {
            auto it = s.metrics.find(c);
            table << ',' << (it == s.metrics.end() ? "" : num(it->second.mean));
        }
        table << '\n';
    }
    write_file(batch.dir / "comparison.csv", table.str());

    // Long format, one row per (seed, mode), seeds in repetition order.
    std::ostringstream paired;
    paired << "seed,mode";
    for (const auto& c : columns) paired << ',' << c;
    paired << ",completed\n";
    for (int i = 0; i < batch.config.repetitions; ++i) {
        const std::uint64_t seed = batch.config.seed_at(i);
        for (Mode m : batch.config.modes) {
            for (const auto& r : rows) {
                if (r.seed != seed || r.mode != m) continue;
                paired << seed << ',' << to_string(m);
                std::map<std::string, std::optional<double>> fields;
                for (const auto& [k, v] : scalar_fields(r.report)) fields[k] = v;
                for (const auto& c : columns) paired << ',' << (fields[c] ? num(*fields[c]) : "");
                paired << ',' << (r.report.completed ? 1 : 0) << '\n';
            }
        }
    }
    write_file(batch.dir / "paired.csv", paired.str());
}

int run_batch(const RunOptions& options, bool compare, std::ostream& out, std::ostream& err) {
    Batch batch;
    batch.config_path = options.config_path;
    try {
        batch.config = resolve_config(options, compare);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    batch.dir = resolve_output_dir(options, batch.config);

    std::vector<RunRow> rows;
    try {
        make_dirs(batch.dir);
        rows = execute(batch, compare ? "compare" : "run", out);
        if (compare) write_comparison(batch, rows);
    } catch (const OutputError& e) {
        err << "output error: " << e.what() << '\n';
        return kExitOutput;
    }
    out << "wrote " << rows.size() << " run(s) to " << batch.dir.string() << '\n';

    if (options.fail_on_timeout)
        for (const auto& r : rows)
            if (!r.report.completed) return kExitIncomplete;
    return kExitOk;
}

}  // namespace

int run_command(const RunOptions& options, std::ostream& out, std::ostream& err) {
    return run_batch(options, false, out, err);
}

int compare_command(const RunOptions& options, std::ostream& out, std::ostream& err) {
    return run_batch(options, true, out, err);
}

int export_graph_command(const ExportOptions& options, std::ostream& out, std::ostream& err) {
    std::ifstream in(options.trace_path);
    if (!in) {
        err << "missing-trace: cannot read " << options.trace_path << '\n';
        return kExitTrace;
    }
    Trace trace;
    try {
        trace = read_trace(in);
    } catch (const std::exception& e) {
        err << "missing-trace: " << options.trace_path << " is not a trace (" << e.what() << ")\n";
        return kExitTrace;
    }
    if (!trace.header()) {
        err << "missing-trace: " << options.trace_path << " has no run header\n";
        return kExitTrace;
    }
    if (options.format != "dot" && options.format != "jsonl") {
        err << "unknown format " << options.format << " (dot, jsonl)\n";
        return kExitConfig;
    }

    const int last = trace.last_round();
    if (options.round && (*options.round < 0 || *options.round > last)) {
        err << "round-out-of-range: " << *options.round << " not in [0, " << last << "]\n";
        return kExitTrace;
    }

    try {
        const fs::path dir = options.output_dir;
        make_dirs(dir);
        const int from = options.round.value_or(0);
        const int to = options.round.value_or(last);
        for (int t = from; t <= to; ++t) {
            const CoordinationGraph g = replay(trace, t);
            const std::string body =
                options.format == "dot" ? graph_dot(g, "round " + std::to_string(t)) : graph_jsonl(g);
            const fs::path file = dir / round_file(t, options.format);
            write_file(file, body);
            out << file.string() << '\n';
        }
    } catch (const OutputError& e) {
        err << "output error: " << e.what() << '\n';
        return kExitOutput;
    } catch (const std::runtime_error& e) {
        err << "missing-trace: replay failed: " << e.what() << '\n';
        return kExitTrace;
    }
    return kExitOk;
}

}  // namespace cograph
