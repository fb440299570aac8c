#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "cograph/agent.hpp"
#include "cograph/baselines.hpp"
#include "cograph/graph.hpp"
#include "cograph/metrics.hpp"
#include "cograph/scenario.hpp"
#include "cograph/trace.hpp"
#include "cograph/workspace.hpp"

namespace cograph {

inline constexpr std::size_t kLeadMailboxCap = 10;
inline constexpr std::size_t kWorkerMailboxCap = 20;

class EmptyPlan : public std::runtime_error {
public:
    EmptyPlan() : std::runtime_error("empty-plan: planning produced no nodes") {}
};

/// Per-agent liveness bookkeeping for the heartbeat monitor.
struct Liveness {
    std::map<AgentName, Round> last_action;  // missing = never acted
    std::map<NodeId, Round> acquired;        // round the current holder got the node
};

struct Flag {
    AgentName worker;
    NodeId node;

    bool operator==(const Flag&) const = default;
};

/// Held nodes whose holder has emitted nothing for H rounds. Silence is
/// counted from the later of the holder's last action and the round the node
/// was acquired; the flag first fires at silence start + H.
std::vector<Flag> heartbeat_scan(const Liveness& liveness, const CoordinationGraph& g, Round t, int H);

struct LeadTriggers {
    bool graph_changed = false;
    bool heartbeat = false;
    int idle_rounds = 0;
};

bool lead_due(const LeadTriggers& triggers, int H);

struct Offer {
    AgentName worker;
    NodeId node;

    bool operator==(const Offer&) const = default;
};

struct DispatchPlan {
    bool lead = false;
    std::vector<NodeId> frontier;
    std::vector<AgentName> busy;    // hold an assigned or in_progress node
    std::vector<AgentName> idle;    // hold nothing
    std::vector<Offer> offers;      // idle workers paired with distinct frontier nodes
    std::vector<AgentName> stepped; // every worker stepped this round, canonical order

    const NodeId* offer_for(const AgentName& worker) const;
};

/// Who acts this round. In selective mode busy workers are re-engaged and the
/// first min(|F|, idle) idle workers are offered the first frontier nodes in
/// canonical order; otherwise every worker steps.
DispatchPlan dispatch(const CoordinationGraph& g, const Team& team, const ModeConfig& mode,
                      const LeadTriggers& triggers, int H);

/// Bounded queue that keeps the most recent messages.
class Mailbox {
public:
    explicit Mailbox(std::size_t cap = kWorkerMailboxCap) : cap_(cap) {}
    void push(Message m);
    std::vector<Message> drain();
    std::size_t size() const { return queue_.size(); }
    std::size_t cap() const { return cap_; }

private:
    std::size_t cap_;
    std::deque<Message> queue_;
};

class Orchestrator {
public:
    Orchestrator(ProtocolConfig config, ModeConfig mode, Team team, std::shared_ptr<const World> world,
                 std::unique_ptr<LeadPolicy> lead, std::vector<std::unique_ptr<WorkerPolicy>> workers,
                 std::uint64_t seed);

    /// Planning phase; throws EmptyPlan if a graph mode seeded nothing.
    void plan();

    /// One round. Returns true once the run has terminated.
    bool step_round();

    /// Planning, rounds until termination or T, then the closing record.
    void run();

    Round round() const { return round_; }
    bool terminated() const { return terminated_; }
    bool completed() const { return terminated_; }

    const CoordinationGraph& graph() const { return graph_; }
    const Workspace& workspace() const { return workspace_; }
    const Trace& trace() const { return trace_; }
    const Team& team() const { return team_; }
    const DispatchPlan& last_dispatch() const { return last_dispatch_; }
    const std::vector<Flag>& last_flags() const { return last_flags_; }
    const Liveness& liveness() const { return liveness_; }

    void on_worker_context(std::function<void(const WorkerContext&)> f) { worker_observer_ = std::move(f); }
    void on_lead_context(std::function<void(const LeadContext&)> f) { lead_observer_ = std::move(f); }

private:
    struct Emission {
        AgentId agent;
        Actions actions;
    };

    WorkerContext worker_context(const AgentId& w, std::size_t index, const NodeId* offer);
    LeadContext lead_context(const DispatchPlan& plan);
    std::vector<ArtifactView> artifacts_for(const std::vector<NodeId>& nodes) const;

    void serialize(const Emission& e, bool planning);
    void apply_op(const AgentId& caller, const OpAction& a, bool planning);
    void deliver(const AgentName& from, const AgentName& to, const std::string& text, bool system);
    void finish(const std::string& error);
    bool check_termination() const;

    ProtocolConfig config_;
    ModeConfig mode_;
    Team team_;
    std::shared_ptr<const World> world_;
    std::unique_ptr<LeadPolicy> lead_;
    std::vector<std::unique_ptr<WorkerPolicy>> workers_;
    std::uint64_t seed_;

    CoordinationGraph graph_;
    Workspace workspace_;
    Trace trace_;
    Liveness liveness_;
    std::map<AgentName, Mailbox> mailboxes_;

    Round round_ = 0;
    bool planned_ = false;
    bool terminated_ = false;
    bool finished_ = false;
    bool graph_changed_ = false;
    Round lead_last_step_ = 0;
    int claims_this_round_ = 0;
    int claims_last_round_ = 0;
    std::vector<NodeId> completed_verifications_;
    DispatchPlan last_dispatch_;
    std::vector<Flag> last_flags_;

    std::function<void(const WorkerContext&)> worker_observer_;
    std::function<void(const LeadContext&)> lead_observer_;
};

struct Policies {
    std::unique_ptr<LeadPolicy> lead;
    std::vector<std::unique_ptr<WorkerPolicy>> workers;
};

/// Scripted policies matching `mode` for every member of `team`.
Policies make_policies(const ModeConfig& mode, const Team& team, std::shared_ptr<const World> world,
                       const ScenarioSpec& spec, const ProtocolConfig& config);

/// The world a mode plays in: the scenario's tree, with the mode's
/// visibility override applied.
std::shared_ptr<const World> make_mode_world(const ScenarioSpec& spec, const ModeConfig& mode);

struct RunResult {
    CoordinationGraph graph;
    Workspace workspace;
    Trace trace;
    MetricsReport report;
    bool completed = false;
};

RunResult run(const ProtocolConfig& config, const ScenarioSpec& spec, Mode mode);
RunResult run(const ProtocolConfig& config, const ScenarioSpec& spec, const ModeConfig& mode);

}  // namespace cograph
