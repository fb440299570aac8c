#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cograph/graph.hpp"

namespace cograph {

class InvalidParameter : public std::invalid_argument {
public:
    InvalidParameter(const std::string& field, const std::string& why)
        : std::invalid_argument(field + ": " + why), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Forces `worker` silent for `rounds` rounds starting at `from`
/// (0 rounds means for the rest of the run).
struct ForcedStall {
    AgentName worker;
    Round from = 1;
    int rounds = 0;

    bool operator==(const ForcedStall&) const = default;
};

struct ScenarioSpec {
    std::uint64_t seed = 1;

    // Hidden tree shape.
    int roots = 8;
    int depth = 2;
    int branching = 2;
    int min_duration = 1;
    int max_duration = 4;
    int min_artifact_chars = 200;
    int max_artifact_chars = 800;
    double dependent_child_prob = 0.5;
    double initial_visible_fraction = 0.45;

    // Fault injection.
    double stall_prob = 0.05;
    int min_stall_rounds = 2;
    int max_stall_rounds = 8;
    double false_complete_prob = 0.05;
    double decline_prob = 0.05;
    std::vector<double> worker_speeds;  // missing entries default to 1.0
    std::vector<ForcedStall> forced_stalls;

    // Lead policy knobs.
    int risk_fanout = 2;
    int planning_nodes_per_turn = 4;

    void validate() const;
    double speed_of(std::size_t worker_index) const;

    bool operator==(const ScenarioSpec&) const = default;
};

struct HiddenChild {
    NodeId id;
    int reveal_after = 0;  // working rounds completed before the child is discovered

    bool operator==(const HiddenChild&) const = default;
};

struct HiddenTask {
    NodeId id;
    std::string title;
    std::string description;
    int duration = 1;
    std::string artifact;
    std::size_t artifact_chars = 0;
    std::vector<NodeId> deps;
    std::vector<HiddenChild> children;
    NodeId parent;  // empty for roots

    bool operator==(const HiddenTask&) const = default;
};

struct HiddenTree {
    std::map<NodeId, HiddenTask> tasks;
    std::vector<NodeId> roots;

    const HiddenTask& at(const NodeId& id) const;
    bool contains(const NodeId& id) const { return tasks.contains(id); }
    std::size_t size() const { return tasks.size(); }
    long long total_work() const;
    /// Longest chain of durations along dependency edges.
    long long critical_path() const;
    std::uint64_t hash() const;
};

HiddenTree generate(const ScenarioSpec& spec);

/// A hidden task becomes visible either at planning time or when a task that
/// reveals it has been worked on for `after` rounds.
struct Reveal {
    NodeId task;
    int after = 0;
    std::vector<NodeId> deps;
};

/// The hidden tree plus what is known up front, shared read-only by every
/// simulated agent. It plays the part of the environment the agents act in.
struct World {
    HiddenTree tree;
    std::vector<NodeId> initially_visible;
    std::map<NodeId, std::vector<Reveal>> reveals;
    std::string task_description;

    const std::vector<Reveal>& reveals_of(const NodeId& task) const;
};

/// Roots beyond the visible fraction are revealed by executing the visible
/// roots, round-robin, in their first working round.
World make_world(HiddenTree tree, double visible_fraction);

int visible_root_count(int roots, double visible_fraction);

std::string artifact_name(const NodeId& task);

}  // namespace cograph
