#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cograph/graph.hpp"
#include "cograph/trace.hpp"
#include "cograph/workspace.hpp"

namespace cograph {

class IncompleteTrace : public std::runtime_error {
public:
    explicit IncompleteTrace(const std::string& why) : std::runtime_error("incomplete-trace: " + why) {}
};

class EmptyInput : public std::invalid_argument {
public:
    EmptyInput() : std::invalid_argument("empty-input: no reports to aggregate") {}
};

struct OpUsage {
    std::size_t accepted = 0;
    std::size_t rejected = 0;

    bool operator==(const OpUsage&) const = default;
};

struct MetricsReport {
    std::string mode;
    std::uint64_t seed = 0;
    bool completed = false;
    int rounds_used = 0;
    std::string error;

    // Cost proxy: every character an agent produced.
    std::size_t total_cost_chars = 0;
    std::size_t written_chars = 0;
    std::size_t op_chars = 0;
    std::size_t messages_count = 0;
    std::size_t messages_chars = 0;

    std::size_t overwrites = 0;
    std::size_t concurrent_writes = 0;
    std::size_t wasted_chars = 0;
    std::size_t surviving_chars = 0;

    std::map<AgentName, double> active_round_fraction;
    double team_active_fraction = 0.0;
    double worker_active_fraction = 0.0;
    std::optional<double> lead_active_fraction;

    std::size_t seeded_nodes = 0;
    int planning_turns_used = 0;
    std::size_t final_nodes = 0;
    std::size_t final_edges = 0;

    // Completion latency per finished node, in rounds, canonical node order.
    std::map<NodeId, int> latencies;
    double latency_mean = 0.0;
    double latency_median = 0.0;
    int latency_p95 = 0;

    // role -> operator -> counts; "start" is reported under the worker role.
    std::map<std::string, std::map<std::string, OpUsage>> op_usage;
    std::size_t op_records = 0;

    std::size_t heartbeats = 0;
    std::size_t promotions = 0;
    double artifact_completion = 0.0;

    bool operator==(const MetricsReport&) const = default;
};

/// Nearest-rank percentile over a non-empty sample; 0 for an empty one.
int nearest_rank(std::vector<int> values, double percentile);
double median(std::vector<double> values);

MetricsReport compute(const Trace& trace, const CoordinationGraph& final_graph,
                      const Workspace& final_workspace);

struct Stat {
    double mean = 0.0;
    double sem = 0.0;
};

struct BatchSummary {
    std::string mode;
    std::size_t runs = 0;
    std::size_t completed = 0;
    double completion_rate = 0.0;
    double mean_cost = 0.0;
    // Unset when nothing completed.
    std::optional<double> expected_cost;
    // False for single-report batches, whose SEMs are reported as 0.
    bool sem_defined = false;
    std::map<std::string, Stat> metrics;
    int pooled_latency_p95 = 0;
    double pooled_latency_median = 0.0;
    std::size_t pooled_latency_count = 0;
};

/// Scalar fields of a report by name, in a fixed order.
std::vector<std::pair<std::string, std::optional<double>>> scalar_fields(const MetricsReport& r);

BatchSummary aggregate(std::span<const MetricsReport> reports);

std::string report_json(const MetricsReport& r);
MetricsReport report_from_json(const std::string& text);
std::string summary_json(const std::vector<BatchSummary>& batches);
std::string summary_csv(const std::vector<BatchSummary>& batches);

}  // namespace cograph
