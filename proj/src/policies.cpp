#include "cograph/policies.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cograph {

const char* to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::latte_lead: return "latte_lead";
        case PolicyKind::latte_worker: return "latte_worker";
        case PolicyKind::static_lead: return "static_lead";
        case PolicyKind::static_worker: return "static_worker";
        case PolicyKind::peer: return "peer";
        case PolicyKind::lw_lead: return "lw_lead";
        case PolicyKind::lw_worker: return "lw_worker";
    }
    return "?";
}

std::string msg_completed(const NodeId& id) { return "done " + id; }
std::string msg_discovered(const NodeId& id) { return "discovered " + id; }
std::string msg_hint(const NodeId& id) { return "hint " + id; }
std::string msg_taking(const NodeId& id) { return "taking " + id; }
std::string msg_heartbeat(const AgentName& worker, const NodeId& node) {
    return "heartbeat " + worker + " " + node;
}
std::string msg_assigned(const NodeId& id) { return "assigned " + id; }

ParsedMessage parse_message(const std::string& text) {
    ParsedMessage out;
    std::istringstream in(text);
    in >> out.verb;
    for (std::string arg; in >> arg;) out.args.push_back(arg);
    return out;
}

NodeView view_of(const TaskNode& node) {
    return {node.id,          node.title,           node.description, node.deps,
            node.label.status, node.label.agent, node.is_verification, node.verifies};
}

const ArtifactView* WorkerContext::artifact(const std::string& name) const {
    for (const auto& a : artifacts)
        if (a.name == name) return &a;
    return nullptr;
}

bool WorkerContext::predecessors_satisfied(const NodeView& node) const {
    return std::all_of(node.deps.begin(), node.deps.end(), [&](const NodeId& dep) {
        return std::any_of(predecessors.begin(), predecessors.end(), [&](const NodeView& p) {
            return p.id == dep && is_satisfying(p.status);
        });
    });
}

const ArtifactView* LeadContext::artifact(const std::string& name) const {
    for (const auto& a : artifacts)
        if (a.name == name) return &a;
    return nullptr;
}

// ---------------------------------------------------------------------------

WorkStep advance(Execution& exec, const HiddenTask& task, const World& world, double speed) {
    WorkStep step;
    if (exec.finished) return step;

    const double d = task.duration;
    const auto len = static_cast<double>(task.artifact_chars);
    const double before = std::min(exec.progress, d);
    exec.progress += speed;
    exec.worked_rounds += 1;

    step.finished = exec.progress >= d - 1e-9;
    step.from = static_cast<std::size_t>(std::floor(len * before / d));
    step.to = step.finished ? task.artifact_chars
                            : static_cast<std::size_t>(std::floor(len * exec.progress / d));

    for (const auto& r : world.reveals_of(task.id)) {
        if (exec.revealed.contains(r.task)) continue;
        if (step.finished || r.after < exec.worked_rounds) {
            exec.revealed.insert(r.task);
            step.reveals.push_back(r);
        }
    }
    exec.finished = step.finished;
    return step;
}

StallModel::StallModel(const ScenarioSpec& spec, AgentName self)
    : prob_(spec.stall_prob), min_rounds_(spec.min_stall_rounds), max_rounds_(spec.max_stall_rounds) {
    for (const auto& f : spec.forced_stalls)
        if (f.worker == self) forced_.push_back(f);
}

bool StallModel::silent(Round round) const {
    if (round < stalled_until_) return true;
    return std::any_of(forced_.begin(), forced_.end(), [&](const ForcedStall& f) {
        return round >= f.from && (f.rounds == 0 || round < f.from + f.rounds);
    });
}

bool StallModel::draw(Round round, Rng& rng) {
    if (!rng.bernoulli(prob_)) return false;
    stalled_until_ = round + static_cast<Round>(rng.between(min_rounds_, max_rounds_));
    return true;
}

namespace {

OpAction op(OpKind kind, const NodeId& target) {
    OpAction a;
    a.kind = kind;
    a.target = target;
    return a;
}

OpAction discover_from(const Reveal& r, const HiddenTree& tree) {
    OpAction a = op(OpKind::discover, r.task);
    const HiddenTask& t = tree.at(r.task);
    a.title = t.title;
    a.description = t.description;
    a.deps.insert(r.deps.begin(), r.deps.end());
    return a;
}

// Hidden task behind a graph node; verification nodes map to what they verify.
const HiddenTask* hidden_for(const World& world, NodeId id) {
    const std::string suffix = kVerificationSuffix;
    while (!world.tree.contains(id)) {
        if (id.size() <= suffix.size() || id.compare(id.size() - suffix.size(), suffix.size(), suffix) != 0)
            return nullptr;
        id.resize(id.size() - suffix.size());
    }
    return &world.tree.at(id);
}

}  // namespace

// ---------------------------------------------------------------------------

LatteWorkerPolicy::LatteWorkerPolicy(std::shared_ptr<const World> world, const ScenarioSpec& spec,
                                     AgentName self, std::size_t index)
    : world_(std::move(world)),
      speed_(spec.speed_of(index)),
      false_complete_prob_(spec.false_complete_prob),
      decline_prob_(spec.decline_prob),
      stalls_(spec, self),
      rng_(stream_seed(spec.seed, "agent:" + self)) {}

Actions LatteWorkerPolicy::act(const WorkerContext& ctx) {
    if (stalls_.silent(ctx.round)) return {};

    auto active = std::find_if(ctx.held.begin(), ctx.held.end(),
                               [](const NodeView& n) { return n.status == NodeStatus::in_progress; });
    if (active != ctx.held.end()) {
        if (current_ != active->id) {
            current_ = active->id;
            exec_ = {};
        }
        if (stalls_.draw(ctx.round, rng_)) return {};
        return work(ctx, *active, kLeadName);
    }
    current_.clear();
    exec_ = {};

    for (const auto& node : ctx.held)
        if (node.status == NodeStatus::assigned && ctx.predecessors_satisfied(node))
            return {op(OpKind::claim, node.id)};

    if (ctx.offer) {
        if (rng_.bernoulli(decline_prob_)) return {};
        return {op(OpKind::claim, ctx.offer->id)};
    }
    return {};
}

Actions LatteWorkerPolicy::work(const WorkerContext& ctx, const NodeView& node, const AgentName& lead) {
    Actions out;
    const HiddenTask* task = hidden_for(*world_, node.id);
    if (!task) return out;

    if (node.is_verification) {
        // One round: fill in whatever the original owner left unwritten.
        if (const ArtifactView* a = ctx.artifact(task->artifact);
            a && a->content_length < a->target_length)
            out.push_back(WriteAction{a->name, a->content_length, a->target_length - a->content_length});
        out.push_back(op(OpKind::complete, node.id));
        out.push_back(MessageAction{lead, msg_completed(node.id)});
        return out;
    }

    WorkStep step = advance(exec_, *task, *world_, speed_);
    if (step.to > step.from) out.push_back(WriteAction{task->artifact, step.from, step.to - step.from});
    for (const auto& r : step.reveals) out.push_back(discover_from(r, world_->tree));
    if (step.finished || rng_.bernoulli(false_complete_prob_)) {
        out.push_back(op(OpKind::complete, node.id));
        out.push_back(MessageAction{lead, msg_completed(node.id)});
    }
    return out;
}

Actions StaticWorkerPolicy::act(const WorkerContext& ctx) {
    if (stalls_.silent(ctx.round)) return {};

    auto active = std::find_if(ctx.held.begin(), ctx.held.end(),
                               [](const NodeView& n) { return n.status == NodeStatus::in_progress; });
    if (active != ctx.held.end()) {
        if (current_ != active->id) {
            current_ = active->id;
            exec_ = {};
        }
        if (stalls_.draw(ctx.round, rng_)) return {};
        return work(ctx, *active, kLeadName);
    }
    current_.clear();
    exec_ = {};

    for (const auto& node : ctx.held)
        if (node.status == NodeStatus::assigned && ctx.predecessors_satisfied(node))
            return {BeginAction{node.id}};
    return {};
}

// ---------------------------------------------------------------------------

LatteLeadPolicy::LatteLeadPolicy(std::shared_ptr<const World> world, LeadRules rules)
    : world_(std::move(world)), rules_(rules) {}

PlanTurn LatteLeadPolicy::plan(const PlanningContext&) {
    PlanTurn turn;
    const auto& visible = world_->initially_visible;
    while (planned_ < visible.size() && turn.ops.size() < static_cast<std::size_t>(rules_.nodes_per_turn)) {
        const HiddenTask& t = world_->tree.at(visible[planned_++]);
        OpAction a = op(OpKind::discover, t.id);
        a.title = t.title;
        a.description = t.description;
        a.deps.insert(t.deps.begin(), t.deps.end());
        turn.ops.push_back(std::move(a));
    }
    turn.finished = planned_ >= visible.size();
    return turn;
}

Actions LatteLeadPolicy::act(const LeadContext& ctx) {
    Actions out;
    const CoordinationGraph& g = ctx.graph;
    const Round window = 2 * rules_.heartbeat_threshold;

    std::vector<std::pair<AgentName, NodeId>> flags;
    for (const auto& m : ctx.mailbox) {
        if (!m.system) continue;
        auto parsed = parse_message(m.text);
        if (parsed.verb == "heartbeat" && parsed.args.size() == 2) {
            flags.emplace_back(parsed.args[0], parsed.args[1]);
            suspects_[parsed.args[0]] = ctx.round;
        }
    }

    std::vector<AgentName> idle;
    for (const auto& w : ctx.idle_workers) {
        auto it = suspects_.find(w);
        if (it == suspects_.end() || ctx.round - it->second >= window) idle.push_back(w);
    }
    std::size_t next_idle = 0;
    std::set<NodeId> handled;

    auto assign = [&](const NodeId& v) {
        if (next_idle >= idle.size()) return;
        OpAction a = op(OpKind::assign, v);
        a.assignee = idle[next_idle++];
        out.push_back(a);
        out.push_back(MessageAction{a.assignee, msg_assigned(v)});
    };

    // Straggler recovery: return the node to the pool and hand it to someone
    // who is not under suspicion.
    for (const auto& [worker, node] : flags) {
        if (handled.contains(node) || !g.contains(node)) continue;
        const NodeLabel& label = g.at(node).label;
        bool holding = label.status == NodeStatus::assigned || label.status == NodeStatus::in_progress;
        if (!holding || label.agent != worker) continue;
        handled.insert(node);
        out.push_back(op(OpKind::release, node));
        assign(node);
    }

    // Frontier nodes nobody picked up since the last look get delegated.
    const std::vector<NodeId> current = frontier(g);
    if (static_cast<int>(current.size()) > ctx.claims_last_round) {
        for (const auto& v : current) {
            if (handled.contains(v)) continue;
            // Leave it to the worker it was offered to, unless that worker has gone quiet.
            if (auto o = ctx.offered.find(v); o != ctx.offered.end()) {
                auto silent = ctx.silent_rounds.find(o->second);
                if (silent == ctx.silent_rounds.end() || silent->second < rules_.heartbeat_threshold) continue;
            }
            if (!std::binary_search(previous_frontier_.begin(), previous_frontier_.end(), v)) continue;
            handled.insert(v);
            assign(v);
        }
    }
    previous_frontier_ = current;

    // Selective verification of nodes many others build on.
    for (const auto& [id, node] : g.nodes) {
        if (node.is_verification || node.label.status != NodeStatus::done) continue;
        if (static_cast<int>(g.out_degree(id)) < rules_.risk_fanout) continue;
        if (g.contains(verification_id(id))) continue;
        out.push_back(op(OpKind::verify, id));
    }

    // Work that is visibly finished but whose owner went quiet.
    for (const auto& [id, node] : g.nodes) {
        const NodeLabel& label = node.label;
        bool holding = label.status == NodeStatus::assigned || label.status == NodeStatus::in_progress;
        if (!holding || !label.agent || node.is_verification || handled.contains(id)) continue;
        const ArtifactView* a = ctx.artifact(artifact_name(id));
        if (!a || !a->complete) continue;
        auto silent = ctx.silent_rounds.find(*label.agent);
        if (silent != ctx.silent_rounds.end() && silent->second >= rules_.heartbeat_threshold)
            out.push_back(op(OpKind::close, id));
    }
    return out;
}

StaticLeadPolicy::StaticLeadPolicy(std::shared_ptr<const World> world, LeadRules rules)
    : world_(std::move(world)), rules_(rules) {}

PlanTurn StaticLeadPolicy::plan(const PlanningContext&) {
    PlanTurn turn;
    const auto& visible = world_->initially_visible;
    while (planned_ < visible.size() && turn.ops.size() < static_cast<std::size_t>(rules_.nodes_per_turn)) {
        const HiddenTask& t = world_->tree.at(visible[planned_++]);
        OpAction a = op(OpKind::discover, t.id);
        a.title = t.title;
        a.description = t.description;
        a.deps.insert(t.deps.begin(), t.deps.end());
        turn.ops.push_back(std::move(a));
    }
    turn.finished = planned_ >= visible.size();
    return turn;
}

Actions StaticLeadPolicy::act(const LeadContext& ctx) {
    Actions out;
    if (ctx.workers.empty()) return out;
    for (const auto& [id, node] : ctx.graph.nodes) {
        if (node.label.status != NodeStatus::pending) continue;
        OpAction a = op(OpKind::assign, id);
        a.assignee = ctx.workers[next_worker_++ % ctx.workers.size()];
        out.push_back(a);
    }
    return out;
}

// ---------------------------------------------------------------------------

FreeAgentPolicy::FreeAgentPolicy(std::shared_ptr<const World> world, const ScenarioSpec& spec,
                                 AgentName self, std::size_t index)
    : world_(std::move(world)),
      self_(self),
      speed_(spec.speed_of(index)),
      false_complete_prob_(spec.false_complete_prob),
      stalls_(spec, self),
      rng_(stream_seed(spec.seed, "agent:" + self)) {}

void FreeAgentPolicy::absorb(const WorkerContext& ctx) {
    for (const auto& m : ctx.mailbox) {
        auto parsed = parse_message(m.text);
        if (parsed.args.size() != 1 || !world_->tree.contains(parsed.args[0])) continue;
        const NodeId& id = parsed.args[0];
        if (parsed.verb == "discovered" || parsed.verb == "hint" || parsed.verb == "taking")
            known_.insert(id);
        else if (parsed.verb == "done") {
            known_.insert(id);
            believed_done_.insert(id);
        }
    }
    // Anything already being written is visible in the workspace.
    for (const auto& a : ctx.artifacts) {
        const std::string prefix = artifact_name("");
        if (a.name.rfind(prefix, 0) == 0) {
            NodeId id = a.name.substr(prefix.size());
            if (world_->tree.contains(id)) known_.insert(id);
        }
    }
}

bool FreeAgentPolicy::incomplete(const WorkerContext& ctx, const NodeId& task) const {
    if (auto it = execs_.find(task); it != execs_.end() && it->second.finished) return false;
    const ArtifactView* a = ctx.artifact(artifact_name(task));
    return !a || !a->complete;
}

Actions FreeAgentPolicy::work_on(const WorkerContext& ctx, const NodeId& task_id) {
    Actions out;
    if (stalls_.draw(ctx.round, rng_)) return out;

    const HiddenTask& task = world_->tree.at(task_id);
    Execution& exec = execs_[task_id];
    WorkStep step = advance(exec, task, *world_, speed_);
    if (step.to > step.from) out.push_back(WriteAction{task.artifact, step.from, step.to - step.from});
    for (const auto& r : step.reveals) {
        known_.insert(r.task);
        out.push_back(MessageAction{kBroadcast, msg_discovered(r.task)});
    }
    if (!step.finished && rng_.bernoulli(false_complete_prob_)) exec.finished = true;
    if (exec.finished) {
        believed_done_.insert(task_id);
        out.push_back(MessageAction{kBroadcast, msg_completed(task_id)});
    }
    return out;
}

Actions LeaderWorkerWorkerPolicy::act(const WorkerContext& ctx) {
    absorb(ctx);
    for (const auto& m : ctx.mailbox) {
        auto parsed = parse_message(m.text);
        if (parsed.verb == "hint" && parsed.args.size() == 1) hint_ = parsed.args[0];
    }
    if (stalls_.silent(ctx.round)) return {};

    NodeId pick;
    if (!hint_.empty() && world_->tree.contains(hint_) && incomplete(ctx, hint_)) {
        pick = hint_;
    } else {
        for (const auto& id : known_)
            if (incomplete(ctx, id)) {
                pick = id;
                break;
            }
    }
    if (pick.empty()) return {};
    target_ = pick;
    return work_on(ctx, pick);
}

LeaderWorkerLeadPolicy::LeaderWorkerLeadPolicy(std::shared_ptr<const World> world, bool rebroadcast)
    : world_(std::move(world)), rebroadcast_(rebroadcast) {
    known_.insert(world_->initially_visible.begin(), world_->initially_visible.end());
}

Actions LeaderWorkerLeadPolicy::act(const LeadContext& ctx) {
    for (const auto& m : ctx.mailbox) {
        auto parsed = parse_message(m.text);
        if (parsed.args.size() != 1 || !world_->tree.contains(parsed.args[0])) continue;
        if (parsed.verb == "discovered") known_.insert(parsed.args[0]);
        if (parsed.verb == "done") reported_done_.insert(parsed.args[0]);
    }
    if (broadcast_once_ && !rebroadcast_) return {};

    std::vector<NodeId> open;
    for (const auto& id : known_)
        if (!reported_done_.contains(id)) open.push_back(id);
    if (open.empty() || ctx.workers.empty()) return {};

    Actions out;
    for (std::size_t i = 0; i < ctx.workers.size(); ++i)
        out.push_back(MessageAction{ctx.workers[i], msg_hint(open[i % open.size()])});
    broadcast_once_ = true;
    return out;
}

PeerPolicy::PeerPolicy(std::shared_ptr<const World> world, const ScenarioSpec& spec, AgentName self,
                       std::size_t index, std::vector<NodeId> preference)
    : FreeAgentPolicy(std::move(world), spec, self, index),
      seed_(stream_seed(spec.seed, "preference:" + self)) {
    for (std::size_t i = 0; i < preference.size(); ++i) preference_.emplace(preference[i], i);
    known_.insert(world_->initially_visible.begin(), world_->initially_visible.end());
}

std::uint64_t PeerPolicy::priority(const NodeId& task) const {
    if (auto it = preference_.find(task); it != preference_.end()) return it->second;
    return stream_seed(seed_, task) | (1ULL << 63);
}

Actions PeerPolicy::act(const WorkerContext& ctx) {
    absorb(ctx);
    if (stalls_.silent(ctx.round)) return {};

    if (target_.empty() || !incomplete(ctx, target_)) {
        NodeId best;
        for (const auto& id : known_) {
            if (!incomplete(ctx, id)) continue;
            if (best.empty() || priority(id) < priority(best)) best = id;
        }
        if (best.empty()) {
            target_.clear();
            return {};
        }
        target_ = best;
        Actions out{MessageAction{kBroadcast, msg_taking(best)}};
        Actions work = work_on(ctx, best);
        out.insert(out.end(), work.begin(), work.end());
        return out;
    }
    return work_on(ctx, target_);
}

}  // namespace cograph
