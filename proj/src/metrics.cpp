#include "cograph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace cograph {

using json = nlohmann::json;

int nearest_rank(std::vector<int> values, double percentile) {
    if (values.empty()) return 0;
    std::sort(values.begin(), values.end());
    const auto n = values.size();
    // Rank computed in integer hundredths to stay clear of 0.95 * 20 = 19.000000000000004.
    const auto p = static_cast<std::size_t>(std::llround(percentile * 100.0));
    std::size_t rank = (p * n + 99) / 100;
    rank = std::clamp<std::size_t>(rank, 1, n);
    return values[rank - 1];
}

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const auto n = values.size();
    return n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

MetricsReport compute(const Trace& trace, const CoordinationGraph& final_graph,
                      const Workspace& final_workspace) {
    const RunHeaderRecord* header = trace.header();
    if (!header) throw IncompleteTrace("missing run header");
    const RunEndRecord* end = trace.end();
    if (!end) throw IncompleteTrace("missing run end record");

    const auto rounds = trace.all<RoundRecord>();
    for (std::size_t i = 0; i < rounds.size(); ++i)
        if (rounds[i].round != static_cast<Round>(i + 1))
            throw IncompleteTrace("round " + std::to_string(i + 1) + " missing");
    if (static_cast<int>(rounds.size()) != end->rounds_used)
        throw IncompleteTrace("run end reports " + std::to_string(end->rounds_used) + " rounds, trace has " +
                              std::to_string(rounds.size()));

    MetricsReport r;
    r.mode = header->mode;
    r.seed = header->seed;
    r.completed = end->completed;
    r.rounds_used = end->rounds_used;
    r.error = end->error;

    // Operators, latency clocks and planning accounting.
    std::map<NodeId, Round> started;
    for (const auto& rec : trace.records()) {
        if (const auto* p = std::get_if<PlanTurnRecord>(&rec)) {
            r.planning_turns_used = std::max(r.planning_turns_used, p->turn);
        } else if (const auto* op = std::get_if<OpRecord>(&rec)) {
            ++r.op_records;
            r.op_chars += op_chars(op->op);
            OpUsage& u = r.op_usage[to_string(op->op.caller.role)][to_string(op->op.kind)];
            ++(op->outcome.accepted ? u.accepted : u.rejected);
            if (!op->outcome.accepted) continue;
            if (op->round == 0 && op->op.kind == OpKind::discover) ++r.seeded_nodes;
            switch (op->op.kind) {
                case OpKind::claim: started[op->op.target] = op->round; break;
                case OpKind::release: started.erase(op->op.target); break;
                case OpKind::complete:
                case OpKind::close:
                    if (auto it = started.find(op->op.target); it != started.end()) {
                        r.latencies[op->op.target] = op->round - it->second;
                        started.erase(it);
                    }
                    break;
                default: break;
            }
        } else if (const auto* st = std::get_if<StartRecord>(&rec)) {
            r.op_chars += std::string("start").size() + st->node.size();
            OpUsage& u = r.op_usage[to_string(Role::worker)]["start"];
            ++(st->outcome.accepted ? u.accepted : u.rejected);
            if (st->outcome.accepted) started[st->node] = st->round;
        } else if (const auto* m = std::get_if<MessageRecord>(&rec)) {
            if (m->system) continue;
            ++r.messages_count;
            r.messages_chars += m->text.size();
        } else if (const auto* w = std::get_if<WriteRecord>(&rec)) {
            r.written_chars += w->length;
        } else if (std::holds_alternative<HeartbeatRecord>(rec)) {
            ++r.heartbeats;
        } else if (const auto* pr = std::get_if<PromoteRecord>(&rec)) {
            if (pr->status == PromoteStatus::promoted) ++r.promotions;
        }
    }
    r.total_cost_chars = r.written_chars + r.op_chars + r.messages_chars;

    // Workspace conflicts, recomputed from the logged writes.
    const auto writes = trace.writes();
    r.overwrites = overwrite_events(writes);
    r.concurrent_writes = concurrent_write_events(writes);
    r.wasted_chars = wasted_characters(writes, final_workspace);
    r.surviving_chars = final_workspace.surviving();

    // Activity.
    std::map<AgentName, int> active;
    for (const auto& a : header->team) active[a.name] = 0;
    for (const auto& d : trace.all<DispatchRecord>()) ++active[d.agent];
    const double denom = std::max(1, r.rounds_used);
    int lead_rounds = 0, worker_rounds = 0, workers = 0;
    bool has_lead = false;
    for (const auto& a : header->team) {
        const int n = active[a.name];
        r.active_round_fraction[a.name] = r.rounds_used ? n / denom : 0.0;
        if (a.role == Role::lead) {
            has_lead = true;
            lead_rounds += n;
        } else {
            ++workers;
            worker_rounds += n;
        }
    }
    if (r.rounds_used > 0 && !header->team.empty()) {
        r.team_active_fraction = (lead_rounds + worker_rounds) / (denom * header->team.size());
        if (workers) r.worker_active_fraction = worker_rounds / (denom * workers);
    }
    if (has_lead) r.lead_active_fraction = r.rounds_used ? lead_rounds / denom : 0.0;

    // Graph shape.
    r.final_nodes = final_graph.size();
    r.final_edges = final_graph.edge_count();

    std::vector<int> lat;
    for (const auto& [id, l] : r.latencies) lat.push_back(l);
    if (!lat.empty()) {
        r.latency_mean = std::accumulate(lat.begin(), lat.end(), 0.0) / lat.size();
        r.latency_median = median(std::vector<double>(lat.begin(), lat.end()));
        r.latency_p95 = nearest_rank(lat, 0.95);
    }

    std::size_t complete = 0;
    for (const auto& [name, a] : final_workspace.artifacts())
        if (final_workspace.complete(name)) ++complete;
    const auto total = final_workspace.artifacts().size();
    r.artifact_completion = total ? static_cast<double>(complete) / total : 0.0;
    return r;
}

std::vector<std::pair<std::string, std::optional<double>>> scalar_fields(const MetricsReport& r) {
    auto d = [](auto v) { return std::optional<double>(static_cast<double>(v)); };
    return {
        {"completed", d(r.completed ? 1 : 0)},
        {"rounds_used", d(r.rounds_used)},
        {"total_cost_chars", d(r.total_cost_chars)},
        {"written_chars", d(r.written_chars)},
        {"op_chars", d(r.op_chars)},
        {"messages_count", d(r.messages_count)},
        {"messages_chars", d(r.messages_chars)},
        {"overwrites", d(r.overwrites)},
        {"concurrent_writes", d(r.concurrent_writes)},
        {"wasted_chars", d(r.wasted_chars)},
        {"surviving_chars", d(r.surviving_chars)},
        {"team_active_fraction", d(r.team_active_fraction)},
        {"worker_active_fraction", d(r.worker_active_fraction)},
        {"lead_active_fraction", r.lead_active_fraction},
        {"seeded_nodes", d(r.seeded_nodes)},
        {"planning_turns_used", d(r.planning_turns_used)},
        {"final_nodes", d(r.final_nodes)},
        {"final_edges", d(r.final_edges)},
        {"latency_mean", d(r.latency_mean)},
        {"latency_median", d(r.latency_median)},
        {"latency_p95", d(r.latency_p95)},
        {"heartbeats", d(r.heartbeats)},
        {"promotions", d(r.promotions)},
        {"artifact_completion", d(r.artifact_completion)},
    };
}

BatchSummary aggregate(std::span<const MetricsReport> reports) {
    if (reports.empty()) throw EmptyInput();
    for (const auto& r : reports)
        if (r.mode != reports.front().mode)
            throw std::invalid_argument("aggregate: mixed modes " + reports.front().mode + " and " + r.mode);

    BatchSummary s;
    s.mode = reports.front().mode;
    s.runs = reports.size();
    s.sem_defined = reports.size() > 1;

    std::size_t cost_sum = 0;
    std::vector<int> pooled;
    std::map<std::string, std::vector<double>> values;
    std::vector<std::string> order;
    for (const auto& r : reports) {
        if (r.completed) ++s.completed;
        cost_sum += r.total_cost_chars;
        for (const auto& [id, l] : r.latencies) pooled.push_back(l);
        for (const auto& [name, v] : scalar_fields(r)) {
            if (!values.contains(name)) order.push_back(name);
            if (v) values[name].push_back(*v);
        }
    }
    s.completion_rate = static_cast<double>(s.completed) / s.runs;
    s.mean_cost = static_cast<double>(cost_sum) / s.runs;
    if (s.completed > 0) s.expected_cost = s.mean_cost / s.completion_rate;

    for (const auto& name : order) {
        const auto& v = values[name];
        if (v.empty()) continue;
        Stat st;
        st.mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
        if (v.size() > 1) {
            double ss = 0.0;
            for (double x : v) ss += (x - st.mean) * (x - st.mean);
            st.sem = std::sqrt(ss / (v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
        }
        s.metrics[name] = st;
    }
    s.pooled_latency_count = pooled.size();
    s.pooled_latency_p95 = nearest_rank(pooled, 0.95);
    s.pooled_latency_median = median(std::vector<double>(pooled.begin(), pooled.end()));
    return s;
}

// ---------------------------------------------------------------------------

namespace {

json usage_json(const std::map<std::string, std::map<std::string, OpUsage>>& usage) {
    json j = json::object();
    for (const auto& [role, kinds] : usage)
        for (const auto& [kind, u] : kinds) j[role][kind] = {{"accepted", u.accepted}, {"rejected", u.rejected}};
    return j;
}

}  // namespace

std::string report_json(const MetricsReport& r) {
    json j;
    j["mode"] = r.mode;
    j["seed"] = r.seed;
    j["completed"] = r.completed;
    j["rounds_used"] = r.rounds_used;
    j["error"] = r.error;
    j["total_cost_chars"] = r.total_cost_chars;
    j["written_chars"] = r.written_chars;
    j["op_chars"] = r.op_chars;
    j["messages_count"] = r.messages_count;
    j["messages_chars"] = r.messages_chars;
    j["overwrites"] = r.overwrites;
    j["concurrent_writes"] = r.concurrent_writes;
    j["wasted_chars"] = r.wasted_chars;
    j["surviving_chars"] = r.surviving_chars;
    j["active_round_fraction"] = r.active_round_fraction;
    j["team_active_fraction"] = r.team_active_fraction;
    j["worker_active_fraction"] = r.worker_active_fraction;
    j["lead_active_fraction"] = r.lead_active_fraction ? json(*r.lead_active_fraction) : json(nullptr);
    j["seeded_nodes"] = r.seeded_nodes;
    j["planning_turns_used"] = r.planning_turns_used;
    j["final_nodes"] = r.final_nodes;
    j["final_edges"] = r.final_edges;
    j["latencies"] = r.latencies;
    j["latency_mean"] = r.latency_mean;
    j["latency_median"] = r.latency_median;
    j["latency_p95"] = r.latency_p95;
    j["op_usage"] = usage_json(r.op_usage);
    j["op_records"] = r.op_records;
    j["heartbeats"] = r.heartbeats;
    j["promotions"] = r.promotions;
    j["artifact_completion"] = r.artifact_completion;
    return j.dump(2);
}

MetricsReport report_from_json(const std::string& text) {
    const json j = json::parse(text);
    MetricsReport r;
    r.mode = j.at("mode").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.completed = j.at("completed").get<bool>();
    r.rounds_used = j.at("rounds_used").get<int>();
    r.error = j.at("error").get<std::string>();
    r.total_cost_chars = j.at("total_cost_chars").get<std::size_t>();
    r.written_chars = j.at("written_chars").get<std::size_t>();
    r.op_chars = j.at("op_chars").get<std::size_t>();
    r.messages_count = j.at("messages_count").get<std::size_t>();
    r.messages_chars = j.at("messages_chars").get<std::size_t>();
    r.overwrites = j.at("overwrites").get<std::size_t>();
    r.concurrent_writes = j.at("concurrent_writes").get<std::size_t>();
    r.wasted_chars = j.at("wasted_chars").get<std::size_t>();
    r.surviving_chars = j.at("surviving_chars").get<std::size_t>();
    r.active_round_fraction = j.at("active_round_fraction").get<std::map<AgentName, double>>();
    r.team_active_fraction = j.at("team_active_fraction").get<double>();
    r.worker_active_fraction = j.at("worker_active_fraction").get<double>();
    if (!j.at("lead_active_fraction").is_null()) r.lead_active_fraction = j.at("lead_active_fraction").get<double>();
    r.seeded_nodes = j.at("seeded_nodes").get<std::size_t>();
    r.planning_turns_used = j.at("planning_turns_used").get<int>();
    r.final_nodes = j.at("final_nodes").get<std::size_t>();
    r.final_edges = j.at("final_edges").get<std::size_t>();
    r.latencies = j.at("latencies").get<std::map<NodeId, int>>();
    r.latency_mean = j.at("latency_mean").get<double>();
    r.latency_median = j.at("latency_median").get<double>();
    r.latency_p95 = j.at("latency_p95").get<int>();
    for (const auto& [role, kinds] : j.at("op_usage").items())
        for (const auto& [kind, u] : kinds.items())
            r.op_usage[role][kind] = {u.at("accepted").get<std::size_t>(), u.at("rejected").get<std::size_t>()};
    r.op_records = j.at("op_records").get<std::size_t>();
    r.heartbeats = j.at("heartbeats").get<std::size_t>();
    r.promotions = j.at("promotions").get<std::size_t>();
    r.artifact_completion = j.at("artifact_completion").get<double>();
    return r;
}

std::string summary_json(const std::vector<BatchSummary>& batches) {
    json out = json::array();
    for (const auto& s : batches) {
        json j;
        j["mode"] = s.mode;
        j["runs"] = s.runs;
        j["completed"] = s.completed;
        j["completion_rate"] = s.completion_rate;
        j["mean_cost"] = s.mean_cost;
        j["expected_cost"] = s.expected_cost ? json(*s.expected_cost) : json(nullptr);
        j["sem_defined"] = s.sem_defined;
        j["pooled_latency_p95"] = s.pooled_latency_p95;
        j["pooled_latency_median"] = s.pooled_latency_median;
        j["pooled_latency_count"] = s.pooled_latency_count;
        json m = json::object();
        for (const auto& [name, st] : s.metrics) m[name] = {{"mean", st.mean}, {"sem", st.sem}};
        j["metrics"] = m;
        out.push_back(j);
    }
    return out.dump(2);
}

std::string summary_csv(const std::vector<BatchSummary>& batches) {
    std::vector<std::string> names;
    for (const auto& [name, v] : scalar_fields(MetricsReport{})) names.push_back(name);

    std::ostringstream out;
    out << "mode,runs,completed,completion_rate,mean_cost,expected_cost,pooled_latency_p95,"
           "pooled_latency_median";
    for (const auto& n : names) out << ',' << n << "_mean," << n << "_sem";
    out << '\n';
    for (const auto& s : batches) {
        out << s.mode << ',' << s.runs << ',' << s.completed << ',' << json(s.completion_rate).dump() << ','
            << json(s.mean_cost).dump() << ',' << (s.expected_cost ? json(*s.expected_cost).dump() : "") << ','
            << s.pooled_latency_p95 << ',' << json(s.pooled_latency_median).dump();
        for (const auto& n : names) {
            auto it = s.metrics.find(n);
            if (it == s.metrics.end())
                out << ",,";
            else
                out << ',' << json(it->second.mean).dump() << ',' << json(it->second.sem).dump();
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace cograph
