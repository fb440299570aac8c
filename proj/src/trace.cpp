#include "cograph/trace.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace cograph {

using json = nlohmann::json;

const char* to_string(DispatchReason r) {
    switch (r) {
        case DispatchReason::lead: return "lead";
        case DispatchReason::busy: return "busy";
        case DispatchReason::offer: return "offer";
        case DispatchReason::all: return "all";
    }
    return "?";
}

namespace {

DispatchReason dispatch_reason_from_string(const std::string& s) {
    for (auto r : {DispatchReason::lead, DispatchReason::busy, DispatchReason::offer, DispatchReason::all})
        if (s == to_string(r)) return r;
    throw std::invalid_argument("unknown dispatch reason: " + s);
}

PromoteStatus promote_status_from_string(const std::string& s) {
    for (auto p : {PromoteStatus::promoted, PromoteStatus::already_verified,
                   PromoteStatus::not_a_verification_node, PromoteStatus::parent_not_done})
        if (s == to_string(p)) return p;
    throw std::invalid_argument("unknown promote status: " + s);
}

json agent_json(const AgentId& a) { return {{"name", a.name}, {"role", to_string(a.role)}}; }

AgentId agent_from(const json& j) {
    return {j.at("name").get<std::string>(), role_from_string(j.at("role").get<std::string>())};
}

json outcome_json(const OpOutcome& o) {
    return {{"accepted", o.accepted}, {"reason", to_string(o.reason)}, {"version", o.graph_version}};
}

OpOutcome outcome_from(const json& j) {
    return {j.at("accepted").get<bool>(), rejection_from_string(j.at("reason").get<std::string>()),
            j.at("version").get<std::uint64_t>()};
}

struct ToJson {
    json operator()(const RunHeaderRecord& r) const {
        json team = json::array();
        for (const auto& a : r.team) team.push_back(agent_json(a));
        return {{"type", "run"},
                {"mode", r.mode},
                {"seed", r.seed},
                {"team", team},
                {"max_rounds", r.max_rounds},
                {"heartbeat_threshold", r.heartbeat_threshold},
                {"artifacts", r.artifacts}};
    }
    json operator()(const PlanTurnRecord& r) const {
        return {{"type", "plan_turn"}, {"turn", r.turn}, {"ops", r.ops}};
    }
    json operator()(const HeartbeatRecord& r) const {
        return {{"type", "heartbeat"}, {"round", r.round}, {"worker", r.worker}, {"node", r.node}};
    }
    json operator()(const DispatchRecord& r) const {
        return {{"type", "dispatch"},
                {"round", r.round},
                {"agent", r.agent},
                {"reason", to_string(r.reason)},
                {"offer", r.offer}};
    }
    json operator()(const OpRecord& r) const {
        json j = {{"type", "op"},
                  {"round", r.round},
                  {"kind", to_string(r.op.kind)},
                  {"target", r.op.target},
                  {"caller", agent_json(r.op.caller)},
                  {"outcome", outcome_json(r.outcome)}};
        if (r.op.kind == OpKind::discover) {
            j["title"] = r.op.title;
            j["description"] = r.op.description;
            j["deps"] = r.op.deps;
        }
        if (r.op.kind == OpKind::assign) j["assignee"] = agent_json(r.op.assignee);
        return j;
    }
    json operator()(const StartRecord& r) const {
        return {{"type", "start"},
                {"round", r.round},
                {"worker", r.worker},
                {"node", r.node},
                {"outcome", outcome_json(r.outcome)}};
    }
    json operator()(const PromoteRecord& r) const {
        return {{"type", "promote"},
                {"round", r.round},
                {"node", r.node},
                {"parent", r.parent},
                {"status", to_string(r.status)},
                {"version", r.graph_version}};
    }
    json operator()(const WriteRecord& r) const {
        return {{"type", "write"},  {"round", r.round},   {"agent", r.agent},      {"artifact", r.artifact},
                {"offset", r.offset}, {"length", r.length}, {"replaced", r.replaced}};
    }
    json operator()(const MessageRecord& r) const {
        return {{"type", "message"}, {"round", r.round}, {"from", r.from},
                {"to", r.to},        {"text", r.text},   {"system", r.system}};
    }
    json operator()(const RoundRecord& r) const {
        return {{"type", "round"},
                {"round", r.round},
                {"frontier", r.frontier},
                {"idle_workers", r.idle_workers},
                {"offers", r.offers},
                {"dispatched", r.dispatched},
                {"acted", r.acted},
                {"nodes", r.nodes},
                {"graph_hash", r.graph_hash},
                {"terminated", r.terminated}};
    }
    json operator()(const RunEndRecord& r) const {
        return {{"type", "run_end"},
                {"completed", r.completed},
                {"rounds_used", r.rounds_used},
                {"graph_hash", r.graph_hash},
                {"error", r.error}};
    }
};

}  // namespace

std::string to_jsonl(const TraceRecord& r) { return std::visit(ToJson{}, r).dump(); }

TraceRecord record_from_jsonl(const std::string& line) {
    const json j = json::parse(line);
    const std::string type = j.at("type").get<std::string>();

    if (type == "run") {
        RunHeaderRecord r;
        r.mode = j.at("mode").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& a : j.at("team")) r.team.push_back(agent_from(a));
        r.max_rounds = j.at("max_rounds").get<int>();
        r.heartbeat_threshold = j.at("heartbeat_threshold").get<int>();
        r.artifacts = j.at("artifacts").get<std::map<std::string, std::size_t>>();
        return r;
    }
    if (type == "plan_turn") return PlanTurnRecord{j.at("turn").get<int>(), j.at("ops").get<std::size_t>()};
    if (type == "heartbeat")
        return HeartbeatRecord{j.at("round").get<Round>(), j.at("worker").get<std::string>(),
                               j.at("node").get<std::string>()};
    if (type == "dispatch")
        return DispatchRecord{j.at("round").get<Round>(), j.at("agent").get<std::string>(),
                              dispatch_reason_from_string(j.at("reason").get<std::string>()),
                              j.at("offer").get<std::string>()};
    if (type == "op") {
        OpRecord r;
        r.round = j.at("round").get<Round>();
        r.op.kind = op_kind_from_string(j.at("kind").get<std::string>());
        r.op.target = j.at("target").get<std::string>();
        r.op.caller = agent_from(j.at("caller"));
        if (j.contains("title")) r.op.title = j.at("title").get<std::string>();
        if (j.contains("description")) r.op.description = j.at("description").get<std::string>();
        if (j.contains("deps")) r.op.deps = j.at("deps").get<std::set<NodeId>>();
        if (j.contains("assignee")) r.op.assignee = agent_from(j.at("assignee"));
        r.outcome = outcome_from(j.at("outcome"));
        return r;
    }
    if (type == "start")
        return StartRecord{j.at("round").get<Round>(), j.at("worker").get<std::string>(),
                           j.at("node").get<std::string>(), outcome_from(j.at("outcome"))};
    if (type == "promote")
        return PromoteRecord{j.at("round").get<Round>(), j.at("node").get<std::string>(),
                             j.at("parent").get<std::string>(),
                             promote_status_from_string(j.at("status").get<std::string>()),
                             j.at("version").get<std::uint64_t>()};
    if (type == "write")
        return WriteRecord{j.at("round").get<Round>(),        j.at("agent").get<std::string>(),
                           j.at("artifact").get<std::string>(), j.at("offset").get<std::size_t>(),
                           j.at("length").get<std::size_t>(),   j.at("replaced").get<std::size_t>()};
    if (type == "message")
        return MessageRecord{j.at("round").get<Round>(), j.at("from").get<std::string>(),
                             j.at("to").get<std::string>(), j.at("text").get<std::string>(),
                             j.at("system").get<bool>()};
    if (type == "round") {
        RoundRecord r;
        r.round = j.at("round").get<Round>();
        r.frontier = j.at("frontier").get<std::size_t>();
        r.idle_workers = j.at("idle_workers").get<std::size_t>();
        r.offers = j.at("offers").get<std::size_t>();
        r.dispatched = j.at("dispatched").get<std::vector<AgentName>>();
        r.acted = j.at("acted").get<std::vector<AgentName>>();
        r.nodes = j.at("nodes").get<std::size_t>();
        r.graph_hash = j.at("graph_hash").get<std::uint64_t>();
        r.terminated = j.at("terminated").get<bool>();
        return r;
    }
    if (type == "run_end")
        return RunEndRecord{j.at("completed").get<bool>(), j.at("rounds_used").get<int>(),
                            j.at("graph_hash").get<std::uint64_t>(), j.at("error").get<std::string>()};
    throw std::invalid_argument("unknown trace record type: " + type);
}

void write_trace(std::ostream& out, const Trace& trace) {
    for (const auto& r : trace.records()) out << to_jsonl(r) << '\n';
}

Trace read_trace(std::istream& in) {
    Trace t;
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) t.append(record_from_jsonl(line));
    return t;
}

const RunHeaderRecord* Trace::header() const {
    for (const auto& r : records_)
        if (const auto* p = std::get_if<RunHeaderRecord>(&r)) return p;
    return nullptr;
}

const RunEndRecord* Trace::end() const {
    for (auto it = records_.rbegin(); it != records_.rend(); ++it)
        if (const auto* p = std::get_if<RunEndRecord>(&*it)) return p;
    return nullptr;
}

Round Trace::last_round() const {
    Round last = 0;
    for (const auto& r : records_)
        if (const auto* p = std::get_if<RoundRecord>(&r)) last = std::max(last, p->round);
    return last;
}

CoordinationGraph replay(const Trace& trace, std::optional<Round> upto) {
    CoordinationGraph g;
    auto in_range = [&](Round r) { return !upto || r <= *upto; };
    for (const auto& rec : trace.records()) {
        if (const auto* op = std::get_if<OpRecord>(&rec)) {
            if (!op->outcome.accepted || !in_range(op->round)) continue;
            OpOutcome o = apply(g, op->op, op->round);
            if (!o.accepted)
                throw std::runtime_error("replay diverged at " + std::string(to_string(op->op.kind)) +
                                         " " + op->op.target + ": " + to_string(o.reason));
        } else if (const auto* st = std::get_if<StartRecord>(&rec)) {
            if (!st->outcome.accepted || !in_range(st->round)) continue;
            if (!start_assigned(g, st->node, st->worker).accepted)
                throw std::runtime_error("replay diverged at start " + st->node);
        } else if (const auto* pr = std::get_if<PromoteRecord>(&rec)) {
            if (pr->status != PromoteStatus::promoted || !in_range(pr->round)) continue;
            if (promote_verified(g, pr->node) != PromoteStatus::promoted)
                throw std::runtime_error("replay diverged at promote " + pr->node);
        }
    }
    return g;
}

std::size_t op_chars(const MutationOp& op) {
    std::size_t n = std::string(to_string(op.kind)).size() + op.target.size();
    if (op.kind == OpKind::discover) {
        n += op.title.size() + op.description.size();
        for (const auto& d : op.deps) n += d.size();
    }
    if (op.kind == OpKind::assign) n += op.assignee.name.size();
    return n;
}

}  // namespace cograph
