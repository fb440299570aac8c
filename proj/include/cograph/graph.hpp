#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cograph {

using NodeId = std::string;
using AgentName = std::string;
using Round = int;

enum class NodeStatus { pending, assigned, in_progress, done, verified };

const char* to_string(NodeStatus s);
NodeStatus status_from_string(const std::string& s);

/// (agent, status) pair carried by every node. An empty agent means unassigned.
struct NodeLabel {
    std::optional<AgentName> agent;
    NodeStatus status = NodeStatus::pending;

    bool operator==(const NodeLabel&) const = default;
};

struct TaskNode {
    NodeId id;
    std::string title;
    std::string description;
    std::set<NodeId> deps;
    NodeLabel label;
    Round created_round = 0;
    std::optional<Round> completed_round;

    // Set on nodes created by Verify; `verifies` names the node under review.
    bool is_verification = false;
    NodeId verifies;

    bool operator==(const TaskNode&) const = default;
};

class UnknownNode : public std::out_of_range {
public:
    explicit UnknownNode(const NodeId& id)
        : std::out_of_range("unknown node: " + id) {}
};

/// The shared task DAG. Nodes are kept in a map keyed by id, so every
/// iteration over `nodes` is already in canonical (lexicographic) order.
/// Edges are not stored separately: (u, v) exists iff u is in v.deps.
struct CoordinationGraph {
    std::map<NodeId, TaskNode> nodes;
    std::uint64_t version = 0;

    bool contains(const NodeId& id) const { return nodes.contains(id); }
    const TaskNode& at(const NodeId& id) const;
    TaskNode& at(const NodeId& id);
    std::size_t size() const { return nodes.size(); }
    bool empty() const { return nodes.empty(); }

    /// Edge list derived from deps, sorted by (u, v).
    std::vector<std::pair<NodeId, NodeId>> edges() const;
    std::size_t edge_count() const;

    /// Nodes that list `id` as a dependency.
    std::vector<NodeId> dependents(const NodeId& id) const;
    std::size_t out_degree(const NodeId& id) const { return dependents(id).size(); }
};

bool is_satisfying(NodeStatus s);
bool is_finished(NodeStatus s);

bool is_acyclic(const CoordinationGraph& g);

/// Throws UnknownNode if `v` is not in the graph.
bool dependency_satisfied(const CoordinationGraph& g, const NodeId& v);

std::vector<NodeId> frontier(const CoordinationGraph& g);

/// Frontier plus dependency-satisfied nodes already assigned to `worker`.
std::vector<NodeId> claimable(const CoordinationGraph& g, const AgentName& worker);

/// Nodes currently held by `worker` (status assigned or in_progress).
std::vector<NodeId> held_by(const CoordinationGraph& g, const AgentName& worker);

/// FNV-1a over every node field except the version counter.
std::uint64_t structural_hash(const CoordinationGraph& g);

/// FNV-1a over node ids and edges only; labels are ignored.
std::uint64_t topology_hash(const CoordinationGraph& g);

bool all_finished(const CoordinationGraph& g);

}  // namespace cograph
