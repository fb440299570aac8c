#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "cograph/graph.hpp"
#include "cograph/mutation.hpp"
#include "cograph/workspace.hpp"

namespace cograph {

inline constexpr const char* kBroadcast = "*";
inline constexpr const char* kLeadName = "lead";

// ---------------------------------------------------------------------------
// Actions an agent may emit in one step. The caller identity is attached by
// the orchestrator, never by the agent.

struct OpAction {
    OpKind kind = OpKind::discover;
    NodeId target;
    std::string title;
    std::string description;
    std::set<NodeId> deps;
    AgentName assignee;
};

/// Static mode only: begin work on a node the lead assigned.
struct BeginAction {
    NodeId target;
};

struct WriteAction {
    std::string artifact;
    std::size_t offset = 0;
    std::size_t length = 0;
};

struct MessageAction {
    AgentName to;  // kBroadcast for everyone else
    std::string text;
};

using Action = std::variant<OpAction, BeginAction, WriteAction, MessageAction>;
using Actions = std::vector<Action>;

struct Message {
    Round round = 0;
    AgentName from;
    std::string text;
    bool system = false;
};

// ---------------------------------------------------------------------------
// Scoped contexts.

struct NodeView {
    NodeId id;
    std::string title;
    std::string description;
    std::set<NodeId> deps;
    NodeStatus status = NodeStatus::pending;
    std::optional<AgentName> agent;
    bool is_verification = false;
    NodeId verifies;
};

NodeView view_of(const TaskNode& node);

/// What a worker sees: its own node(s), their direct predecessors, an
/// optional frontier offer, its mailbox and the artifacts it may touch.
struct WorkerContext {
    AgentName self;
    std::size_t index = 0;
    Round round = 0;
    std::vector<NodeView> held;
    std::vector<NodeView> predecessors;
    std::optional<NodeView> offer;
    std::vector<Message> mailbox;
    std::vector<ArtifactView> artifacts;

    const ArtifactView* artifact(const std::string& name) const;
    bool predecessors_satisfied(const NodeView& node) const;
};

/// What the lead sees: the graph, its mailbox and liveness summaries, but no
/// worker execution detail.
struct LeadContext {
    AgentName self;
    Round round = 0;
    int heartbeat_threshold = 4;
    CoordinationGraph graph;
    std::vector<Message> mailbox;
    std::vector<AgentName> workers;
    std::vector<AgentName> idle_workers;  // idle and not offered a node this round
    std::map<NodeId, AgentName> offered;  // frontier node -> idle worker it was offered to this round
    std::map<AgentName, int> silent_rounds;
    int claims_last_round = 0;
    std::vector<ArtifactView> artifacts;

    const ArtifactView* artifact(const std::string& name) const;
};

struct PlanningContext {
    AgentName self;
    int turn = 1;
    int max_turns = 1;
    std::string task_description;
    CoordinationGraph graph;
};

struct PlanTurn {
    std::vector<OpAction> ops;
    bool finished = false;
};

class LeadPolicy {
public:
    virtual ~LeadPolicy() = default;
    virtual PlanTurn plan(const PlanningContext&) { return {{}, true}; }
    virtual Actions act(const LeadContext& ctx) = 0;
};

class WorkerPolicy {
public:
    virtual ~WorkerPolicy() = default;
    virtual Actions act(const WorkerContext& ctx) = 0;
};

}  // namespace cograph
