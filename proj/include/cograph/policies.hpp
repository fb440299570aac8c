#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "cograph/agent.hpp"
#include "cograph/rng.hpp"
#include "cograph/scenario.hpp"

namespace cograph {

enum class PolicyKind { latte_lead, latte_worker, static_lead, static_worker, peer, lw_lead, lw_worker };

const char* to_string(PolicyKind k);

/// Progress of one agent on one hidden task.
struct Execution {
    double progress = 0.0;
    int worked_rounds = 0;
    std::set<NodeId> revealed;
    bool finished = false;
};

struct WorkStep {
    std::size_t from = 0;  // character span written this round
    std::size_t to = 0;
    std::vector<Reveal> reveals;
    bool finished = false;
};

/// One round of work on `task`: advances progress by `speed`, returns the
/// characters to write and any hidden tasks whose reveal point has passed.
WorkStep advance(Execution& exec, const HiddenTask& task, const World& world, double speed);

/// Stall bookkeeping shared by every worker-type policy.
class StallModel {
public:
    StallModel(const ScenarioSpec& spec, AgentName self);

    /// True while a forced or previously drawn stall covers `round`.
    bool silent(Round round) const;

    /// Draws a fresh stall for a working round; on success the agent is
    /// silent from `round` on for the drawn number of rounds.
    bool draw(Round round, Rng& rng);

private:
    double prob_;
    int min_rounds_;
    int max_rounds_;
    std::vector<ForcedStall> forced_;
    Round stalled_until_ = 0;  // exclusive
};

// ---------------------------------------------------------------------------
// Graph-mode policies.

class LatteWorkerPolicy : public WorkerPolicy {
public:
    LatteWorkerPolicy(std::shared_ptr<const World> world, const ScenarioSpec& spec, AgentName self,
                      std::size_t index);
    Actions act(const WorkerContext& ctx) override;

protected:
    Actions work(const WorkerContext& ctx, const NodeView& node, const AgentName& lead);

    std::shared_ptr<const World> world_;
    double speed_;
    double false_complete_prob_;
    double decline_prob_;
    StallModel stalls_;
    Rng rng_;
    NodeId current_;
    Execution exec_;
};

/// Works only what the lead assigned; begins an assigned node with a
/// BeginAction where a graph-mode worker would Claim.
class StaticWorkerPolicy : public LatteWorkerPolicy {
public:
    using LatteWorkerPolicy::LatteWorkerPolicy;
    Actions act(const WorkerContext& ctx) override;
};

struct LeadRules {
    int heartbeat_threshold = 4;
    int risk_fanout = 2;
    int nodes_per_turn = 4;
};

class LatteLeadPolicy : public LeadPolicy {
public:
    LatteLeadPolicy(std::shared_ptr<const World> world, LeadRules rules);
    PlanTurn plan(const PlanningContext& ctx) override;
    Actions act(const LeadContext& ctx) override;

private:
    std::shared_ptr<const World> world_;
    LeadRules rules_;
    std::size_t planned_ = 0;
    std::vector<NodeId> previous_frontier_;
    std::map<AgentName, Round> suspects_;
};

/// Seeds every known root, assigns everything round-robin, then stays out of
/// the way: no release, no verification.
class StaticLeadPolicy : public LeadPolicy {
public:
    StaticLeadPolicy(std::shared_ptr<const World> world, LeadRules rules);
    PlanTurn plan(const PlanningContext& ctx) override;
    Actions act(const LeadContext& ctx) override;

private:
    std::shared_ptr<const World> world_;
    LeadRules rules_;
    std::size_t planned_ = 0;
    std::size_t next_worker_ = 0;
};

// ---------------------------------------------------------------------------
// Graphless baselines. Agents coordinate by messages only; a task is done
// when its artifact is fully written.

/// Shared machinery for agents that pick tasks themselves and write directly.
class FreeAgentPolicy : public WorkerPolicy {
public:
    FreeAgentPolicy(std::shared_ptr<const World> world, const ScenarioSpec& spec, AgentName self,
                    std::size_t index);

protected:
    /// Updates known/believed-done sets from the mailbox.
    void absorb(const WorkerContext& ctx);
    bool incomplete(const WorkerContext& ctx, const NodeId& task) const;
    Actions work_on(const WorkerContext& ctx, const NodeId& task);

    std::shared_ptr<const World> world_;
    AgentName self_;
    double speed_;
    double false_complete_prob_;
    StallModel stalls_;
    Rng rng_;
    std::set<NodeId> known_;
    std::set<NodeId> believed_done_;
    std::map<NodeId, Execution> execs_;
    NodeId target_;
};

class LeaderWorkerWorkerPolicy : public FreeAgentPolicy {
public:
    using FreeAgentPolicy::FreeAgentPolicy;
    Actions act(const WorkerContext& ctx) override;

private:
    NodeId hint_;
};

class LeaderWorkerLeadPolicy : public LeadPolicy {
public:
    LeaderWorkerLeadPolicy(std::shared_ptr<const World> world, bool rebroadcast);
    Actions act(const LeadContext& ctx) override;

private:
    std::shared_ptr<const World> world_;
    bool rebroadcast_;
    bool broadcast_once_ = false;
    std::set<NodeId> known_;
    std::set<NodeId> reported_done_;
};

class PeerPolicy : public FreeAgentPolicy {
public:
    /// Preference order is seeded per peer unless `preference` is given, in
    /// which case listed tasks come first in the listed order.
    PeerPolicy(std::shared_ptr<const World> world, const ScenarioSpec& spec, AgentName self,
               std::size_t index, std::vector<NodeId> preference = {});
    Actions act(const WorkerContext& ctx) override;

private:
    std::uint64_t priority(const NodeId& task) const;

    std::uint64_t seed_;
    std::map<NodeId, std::size_t> preference_;
};

// Message vocabulary used by the policies above.
std::string msg_completed(const NodeId& id);
std::string msg_discovered(const NodeId& id);
std::string msg_hint(const NodeId& id);
std::string msg_taking(const NodeId& id);
std::string msg_heartbeat(const AgentName& worker, const NodeId& node);
std::string msg_assigned(const NodeId& id);

/// Splits "verb argument [argument]" messages; empty verb if malformed.
struct ParsedMessage {
    std::string verb;
    std::vector<std::string> args;
};
ParsedMessage parse_message(const std::string& text);

}  // namespace cograph
