#include "cograph/protocol.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "cograph/policies.hpp"

namespace cograph {

namespace {

bool holding(const NodeLabel& label) {
    return label.status == NodeStatus::assigned || label.status == NodeStatus::in_progress;
}

const char* kSystem = "system";

}  // namespace

std::vector<Flag> heartbeat_scan(const Liveness& liveness, const CoordinationGraph& g, Round t, int H) {
    std::vector<Flag> flags;
    for (const auto& [id, node] : g.nodes) {
        if (!holding(node.label) || !node.label.agent) continue;
        const AgentName& w = *node.label.agent;
        Round since = 0;
        if (auto it = liveness.acquired.find(id); it != liveness.acquired.end()) since = it->second;
        if (auto it = liveness.last_action.find(w); it != liveness.last_action.end())
            since = std::max(since, it->second + 1);
        if (t >= since + H) flags.push_back({w, id});
    }
    std::sort(flags.begin(), flags.end(), [](const Flag& a, const Flag& b) {
        return std::tie(a.worker, a.node) < std::tie(b.worker, b.node);
    });
    return flags;
}

bool lead_due(const LeadTriggers& triggers, int H) {
    return triggers.graph_changed || triggers.heartbeat || triggers.idle_rounds >= H;
}

const NodeId* DispatchPlan::offer_for(const AgentName& worker) const {
    for (const auto& o : offers)
        if (o.worker == worker) return &o.node;
    return nullptr;
}

DispatchPlan dispatch(const CoordinationGraph& g, const Team& team, const ModeConfig& mode,
                      const LeadTriggers& triggers, int H) {
    DispatchPlan plan;
    if (team.lead) plan.lead = mode.lead_every_round || lead_due(triggers, H);
    if (mode.uses_graph) {
        plan.frontier = frontier(g);
        for (const auto& w : team.workers) {
            if (held_by(g, w.name).empty())
                plan.idle.push_back(w.name);
            else
                plan.busy.push_back(w.name);
        }
    } else {
        plan.idle = team.worker_names();
    }

    if (!mode.uses_graph || !mode.selective_dispatch) {
        plan.stepped = team.worker_names();
        return plan;
    }

    const std::size_t n = std::min(plan.frontier.size(), plan.idle.size());
    for (std::size_t i = 0; i < n; ++i) plan.offers.push_back({plan.idle[i], plan.frontier[i]});
    for (const auto& w : team.workers) {
        bool busy = std::find(plan.busy.begin(), plan.busy.end(), w.name) != plan.busy.end();
        if (busy || plan.offer_for(w.name)) plan.stepped.push_back(w.name);
    }
    return plan;
}

void Mailbox::push(Message m) {
    queue_.push_back(std::move(m));
    while (queue_.size() > cap_) queue_.pop_front();
}

std::vector<Message> Mailbox::drain() {
    std::vector<Message> out(queue_.begin(), queue_.end());
    queue_.clear();
    return out;
}

// ---------------------------------------------------------------------------

Orchestrator::Orchestrator(ProtocolConfig config, ModeConfig mode, Team team,
                           std::shared_ptr<const World> world, std::unique_ptr<LeadPolicy> lead,
                           std::vector<std::unique_ptr<WorkerPolicy>> workers, std::uint64_t seed)
    : config_(config),
      mode_(std::move(mode)),
      team_(std::move(team)),
      world_(std::move(world)),
      lead_(std::move(lead)),
      workers_(std::move(workers)),
      seed_(seed) {
    config_.validate();
    if (workers_.size() != team_.workers.size())
        throw std::invalid_argument("one worker policy per team worker required");
    if (team_.lead && !lead_) throw std::invalid_argument("team has a lead but no lead policy");

    RunHeaderRecord header;
    header.mode = to_string(mode_.mode);
    header.seed = seed_;
    if (team_.lead) header.team.push_back(*team_.lead);
    header.team.insert(header.team.end(), team_.workers.begin(), team_.workers.end());
    header.max_rounds = config_.max_rounds;
    header.heartbeat_threshold = config_.heartbeat_threshold;
    for (const auto& [id, task] : world_->tree.tasks) {
        workspace_.register_artifact(task.artifact, task.artifact_chars);
        header.artifacts[task.artifact] = task.artifact_chars;
    }
    trace_.append(header);

    if (team_.lead) mailboxes_.emplace(team_.lead->name, Mailbox(kLeadMailboxCap));
    for (const auto& w : team_.workers) mailboxes_.emplace(w.name, Mailbox(kWorkerMailboxCap));
}

void Orchestrator::plan() {
    if (planned_) throw std::logic_error("planning already ran");
    planned_ = true;
    if (!mode_.uses_graph || !lead_ || !team_.lead) return;

    const std::uint64_t before = graph_.version;
    for (int turn = 1; turn <= config_.planning_turns; ++turn) {
        PlanningContext ctx{team_.lead->name, turn, config_.planning_turns, world_->task_description, graph_};
        PlanTurn pt = lead_->plan(ctx);
        for (const auto& op : pt.ops) apply_op(*team_.lead, op, true);
        trace_.append(PlanTurnRecord{turn, pt.ops.size()});
        if (pt.finished) break;
    }
    graph_changed_ = graph_.version != before;
    if (graph_.empty()) throw EmptyPlan();
}

std::vector<ArtifactView> Orchestrator::artifacts_for(const std::vector<NodeId>& nodes) const {
    std::vector<ArtifactView> out;
    std::set<std::string> seen;
    const std::string suffix = kVerificationSuffix;
    for (NodeId id : nodes) {
        while (id.size() > suffix.size() && id.compare(id.size() - suffix.size(), suffix.size(), suffix) == 0 &&
               !world_->tree.contains(id))
            id.resize(id.size() - suffix.size());
        const std::string name = artifact_name(id);
        if (workspace_.contains(name) && seen.insert(name).second) out.push_back(workspace_.view(name));
    }
    return out;
}

WorkerContext Orchestrator::worker_context(const AgentId& w, std::size_t index, const NodeId* offer) {
    WorkerContext ctx;
    ctx.self = w.name;
    ctx.index = index;
    ctx.round = round_;
    ctx.mailbox = mailboxes_.at(w.name).drain();

    if (!mode_.uses_graph) {
        for (const auto& [name, a] : workspace_.artifacts())
            if (!a.chars.empty()) ctx.artifacts.push_back(workspace_.view(name));
        return ctx;
    }

    std::vector<NodeId> touched;
    std::set<NodeId> preds;
    for (const auto& id : held_by(graph_, w.name)) {
        const TaskNode& node = graph_.at(id);
        ctx.held.push_back(view_of(node));
        touched.push_back(id);
        preds.insert(node.deps.begin(), node.deps.end());
    }
    if (offer) {
        const TaskNode& node = graph_.at(*offer);
        ctx.offer = view_of(node);
        touched.push_back(*offer);
        preds.insert(node.deps.begin(), node.deps.end());
    }
    for (const auto& p : preds) ctx.predecessors.push_back(view_of(graph_.at(p)));
    ctx.artifacts = artifacts_for(touched);
    return ctx;
}

LeadContext Orchestrator::lead_context(const DispatchPlan& plan) {
    LeadContext ctx;
    ctx.self = team_.lead->name;
    ctx.round = round_;
    ctx.heartbeat_threshold = config_.heartbeat_threshold;
    ctx.graph = graph_;
    ctx.mailbox = mailboxes_.at(ctx.self).drain();
    ctx.workers = team_.worker_names();
    for (const auto& w : plan.idle)
        if (!plan.offer_for(w)) ctx.idle_workers.push_back(w);
    for (const auto& o : plan.offers) ctx.offered.emplace(o.node, o.worker);
    for (const auto& w : team_.workers) {
        auto it = liveness_.last_action.find(w.name);
        const Round last = it == liveness_.last_action.end() ? 0 : it->second;
        ctx.silent_rounds[w.name] = round_ - 1 - last;
    }
    ctx.claims_last_round = claims_last_round_;
    for (const auto& [name, a] : workspace_.artifacts()) ctx.artifacts.push_back(workspace_.view(name));
    return ctx;
}

void Orchestrator::deliver(const AgentName& from, const AgentName& to, const std::string& text, bool system) {
    Message m{round_, from, text, system};
    if (to == kBroadcast) {
        for (auto& [name, box] : mailboxes_)
            if (name != from) box.push(m);
    } else if (auto it = mailboxes_.find(to); it != mailboxes_.end()) {
        it->second.push(m);
    }
    trace_.append(MessageRecord{round_, from, to, text, system});
}

void Orchestrator::apply_op(const AgentId& caller, const OpAction& a, bool planning) {
    MutationOp op;
    op.kind = a.kind;
    op.target = a.target;
    op.caller = caller;
    op.title = a.title;
    op.description = a.description;
    op.deps = a.deps;

    Rejection gate = Rejection::none;
    if (a.kind == OpKind::assign) {
        const AgentId* assignee = team_.find(a.assignee);
        if (assignee)
            op.assignee = *assignee;
        else {
            op.assignee = AgentId{a.assignee, Role::worker};
            gate = Rejection::not_a_worker;
        }
    }
    if (planning && a.kind != OpKind::discover)
        gate = Rejection::planning_discover_only;
    else if (!planning && mode_.disabled_after_planning.contains(a.kind))
        gate = Rejection::mode_disabled;

    // Authorization is still reported ahead of serializer-level gates.
    if (gate != Rejection::none && !caller_permitted(a.kind, caller.role)) gate = Rejection::not_authorized;

    const OpOutcome outcome =
        gate == Rejection::none ? apply(graph_, op, round_) : OpOutcome{false, gate, graph_.version};
    trace_.append(OpRecord{round_, op, outcome});

    if (!outcome.accepted) {
        deliver(kSystem, caller.name,
                std::string("rejected ") + to_string(a.kind) + " " + a.target + " " + to_string(outcome.reason),
                true);
        return;
    }
    switch (a.kind) {
        case OpKind::claim:
            ++claims_this_round_;
            liveness_.acquired[a.target] = round_;
            break;
        case OpKind::assign: liveness_.acquired[a.target] = round_; break;
        case OpKind::release: liveness_.acquired.erase(a.target); break;
        case OpKind::complete:
        case OpKind::close:
            liveness_.acquired.erase(a.target);
            if (graph_.at(a.target).is_verification) completed_verifications_.push_back(a.target);
            break;
        default: break;
    }
}

void Orchestrator::serialize(const Emission& e, bool planning) {
    for (const auto& action : e.actions) {
        if (const auto* op = std::get_if<OpAction>(&action)) {
            if (mode_.uses_graph) apply_op(e.agent, *op, planning);
        } else if (const auto* begin = std::get_if<BeginAction>(&action)) {
            OpOutcome outcome{false, Rejection::mode_disabled, graph_.version};
            if (mode_.uses_graph && mode_.start_on_assign)
                outcome = start_assigned(graph_, begin->target, e.agent.name);
            trace_.append(StartRecord{round_, e.agent.name, begin->target, outcome});
            if (!outcome.accepted)
                deliver(kSystem, e.agent.name,
                        "rejected start " + begin->target + " " + to_string(outcome.reason), true);
        } else if (const auto* w = std::get_if<WriteAction>(&action)) {
            if (!workspace_.contains(w->artifact)) continue;
            if (w->offset > workspace_.view(w->artifact).content_length) continue;
            WriteRecord rec = workspace_.write(w->artifact, e.agent.name, round_, w->offset, w->length);
            if (rec.length > 0) trace_.append(rec);
        } else if (const auto* m = std::get_if<MessageAction>(&action)) {
            deliver(e.agent.name, m->to, m->text, false);
        }
    }
}

bool Orchestrator::check_termination() const {
    if (mode_.uses_graph) return !graph_.empty() && all_finished(graph_);
    return workspace_.all_complete();
}

bool Orchestrator::step_round() {
    if (!planned_) throw std::logic_error("plan() must run before step_round()");
    if (terminated_ || finished_) throw std::logic_error("run already over");

    claims_last_round_ = claims_this_round_;
    claims_this_round_ = 0;
    ++round_;
    const int H = config_.heartbeat_threshold;

    // 1. heartbeat scan
    last_flags_.clear();
    if (mode_.uses_graph) last_flags_ = heartbeat_scan(liveness_, graph_, round_, H);
    for (const auto& f : last_flags_) {
        trace_.append(HeartbeatRecord{round_, f.worker, f.node});
        if (team_.lead) deliver(kSystem, team_.lead->name, msg_heartbeat(f.worker, f.node), true);
    }

    // 2-3. frontier and dispatch
    LeadTriggers triggers{graph_changed_, !last_flags_.empty(), round_ - lead_last_step_};
    DispatchPlan plan = dispatch(graph_, team_, mode_, triggers, H);

    std::vector<AgentName> dispatched;
    if (plan.lead) {
        trace_.append(DispatchRecord{round_, team_.lead->name, DispatchReason::lead, ""});
        dispatched.push_back(team_.lead->name);
    }
    for (const auto& name : plan.stepped) {
        DispatchReason reason = DispatchReason::all;
        NodeId offered;
        if (mode_.uses_graph && mode_.selective_dispatch) {
            if (const NodeId* o = plan.offer_for(name)) {
                reason = DispatchReason::offer;
                offered = *o;
            } else {
                reason = DispatchReason::busy;
            }
        }
        trace_.append(DispatchRecord{round_, name, reason, offered});
        dispatched.push_back(name);
    }

    // 4. agents act against the same snapshot
    std::vector<Emission> emissions;
    if (plan.lead) {
        LeadContext ctx = lead_context(plan);
        if (lead_observer_) lead_observer_(ctx);
        emissions.push_back({*team_.lead, lead_->act(ctx)});
        lead_last_step_ = round_;
    }
    for (std::size_t i = 0; i < team_.workers.size(); ++i) {
        const AgentId& w = team_.workers[i];
        if (std::find(plan.stepped.begin(), plan.stepped.end(), w.name) == plan.stepped.end()) continue;
        WorkerContext ctx = worker_context(w, i, plan.offer_for(w.name));
        if (worker_observer_) worker_observer_(ctx);
        emissions.push_back({w, workers_[i]->act(ctx)});
    }

    // 5. serializer: lead first, then workers in canonical order
    const std::uint64_t before = graph_.version;
    std::vector<AgentName> acted;
    for (const auto& e : emissions) {
        serialize(e, false);
        if (!e.actions.empty()) {
            liveness_.last_action[e.agent.name] = round_;
            acted.push_back(e.agent.name);
        }
    }

    // 6. promotions
    std::sort(completed_verifications_.begin(), completed_verifications_.end());
    for (const auto& v : completed_verifications_) {
        PromoteStatus s = promote_verified(graph_, v);
        trace_.append(PromoteRecord{round_, v, graph_.at(v).verifies, s, graph_.version});
    }
    completed_verifications_.clear();
    graph_changed_ = graph_.version != before;

    // 7. termination
    terminated_ = check_termination();

    RoundRecord rec;
    rec.round = round_;
    rec.frontier = plan.frontier.size();
    rec.idle_workers = plan.idle.size();
    rec.offers = plan.offers.size();
    rec.dispatched = std::move(dispatched);
    rec.acted = std::move(acted);
    rec.nodes = graph_.size();
    rec.graph_hash = structural_hash(graph_);
    rec.terminated = terminated_;
    trace_.append(std::move(rec));

    last_dispatch_ = std::move(plan);
    return terminated_;
}

void Orchestrator::finish(const std::string& error) {
    if (finished_) return;
    finished_ = true;
    trace_.append(RunEndRecord{terminated_, round_, structural_hash(graph_), error});
}

void Orchestrator::run() {
    try {
        plan();
    } catch (const EmptyPlan& e) {
        finish("empty-plan");
        return;
    }
    while (!terminated_ && round_ < config_.max_rounds) step_round();
    finish("");
}

// ---------------------------------------------------------------------------

Policies make_policies(const ModeConfig& mode, const Team& team, std::shared_ptr<const World> world,
                       const ScenarioSpec& spec, const ProtocolConfig& config) {
    Policies p;
    const LeadRules rules{config.heartbeat_threshold, spec.risk_fanout, spec.planning_nodes_per_turn};
    switch (mode.mode) {
        case Mode::latte:
            p.lead = std::make_unique<LatteLeadPolicy>(world, rules);
            break;
        case Mode::static_graph:
            p.lead = std::make_unique<StaticLeadPolicy>(world, rules);
            break;
        case Mode::leader_worker:
            p.lead = std::make_unique<LeaderWorkerLeadPolicy>(world, mode.rebroadcast_hints);
            break;
        case Mode::decentralized: break;
    }
    if (!team.lead) p.lead.reset();

    for (std::size_t i = 0; i < team.workers.size(); ++i) {
        const AgentName& name = team.workers[i].name;
        switch (mode.mode) {
            case Mode::latte:
                p.workers.push_back(std::make_unique<LatteWorkerPolicy>(world, spec, name, i));
                break;
            case Mode::static_graph:
                p.workers.push_back(std::make_unique<StaticWorkerPolicy>(world, spec, name, i));
                break;
            case Mode::leader_worker:
                p.workers.push_back(std::make_unique<LeaderWorkerWorkerPolicy>(world, spec, name, i));
                break;
            case Mode::decentralized:
                p.workers.push_back(std::make_unique<PeerPolicy>(world, spec, name, i));
                break;
        }
    }
    return p;
}

std::shared_ptr<const World> make_mode_world(const ScenarioSpec& spec, const ModeConfig& mode) {
    spec.validate();
    const double visible = mode.visibility_override.value_or(spec.initial_visible_fraction);
    return std::make_shared<const World>(make_world(generate(spec), visible));
}

RunResult run(const ProtocolConfig& config, const ScenarioSpec& spec, const ModeConfig& mode) {
    config.validate();
    auto world = make_mode_world(spec, mode);
    Team team = make_team(mode);
    Policies policies = make_policies(mode, team, world, spec, config);
    Orchestrator orch(config, mode, team, world, std::move(policies.lead), std::move(policies.workers),
                      spec.seed);
    orch.run();

    RunResult r;
    r.graph = orch.graph();
    r.workspace = orch.workspace();
    r.trace = orch.trace();
    r.completed = orch.completed();
    r.report = compute(r.trace, r.graph, r.workspace);
    return r;
}

RunResult run(const ProtocolConfig& config, const ScenarioSpec& spec, Mode mode) {
    return run(config, spec, mode_config(mode, config));
}

}  // namespace cograph
