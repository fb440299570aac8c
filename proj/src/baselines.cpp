#include "cograph/baselines.hpp"

#include <stdexcept>

#include "cograph/agent.hpp"
#include "cograph/scenario.hpp"

namespace cograph {

const char* to_string(Mode m) {
    switch (m) {
        case Mode::latte: return "latte";
        case Mode::static_graph: return "static";
        case Mode::leader_worker: return "leader_worker";
        case Mode::decentralized: return "decentralized";
    }
    return "?";
}

Mode mode_from_string(const std::string& s) {
    for (Mode m : kAllModes)
        if (s == to_string(m)) return m;
    throw std::invalid_argument("unknown mode: " + s);
}

void ProtocolConfig::validate() const {
    if (max_rounds < 1) throw InvalidParameter("max_rounds", "must be at least 1");
    if (heartbeat_threshold < 1) throw InvalidParameter("heartbeat_threshold", "must be at least 1");
    if (workers < 1) throw InvalidParameter("workers", "must be at least 1");
    if (planning_turns < 1) throw InvalidParameter("planning_turns", "must be at least 1");
}

ModeConfig latte_mode(const ProtocolConfig& config) {
    ModeConfig m;
    m.mode = Mode::latte;
    m.workers = config.workers;
    return m;
}

ModeConfig static_mode(const ProtocolConfig& config) {
    ModeConfig m;
    m.mode = Mode::static_graph;
    m.workers = config.workers;
    m.selective_dispatch = false;
    m.disabled_after_planning = {OpKind::discover, OpKind::release, OpKind::verify, OpKind::claim};
    m.start_on_assign = true;
    m.visibility_override = 1.0;
    return m;
}

ModeConfig leader_worker_mode(const ProtocolConfig& config) {
    ModeConfig m;
    m.mode = Mode::leader_worker;
    m.workers = config.workers;
    m.uses_graph = false;
    m.selective_dispatch = false;
    m.lead_every_round = true;
    return m;
}

ModeConfig decentralized_mode(const ProtocolConfig& config) {
    ModeConfig m;
    m.mode = Mode::decentralized;
    m.workers = config.workers + 1;
    m.uses_graph = false;
    m.selective_dispatch = false;
    m.has_lead = false;
    return m;
}

ModeConfig mode_config(Mode mode, const ProtocolConfig& config) {
    switch (mode) {
        case Mode::latte: return latte_mode(config);
        case Mode::static_graph: return static_mode(config);
        case Mode::leader_worker: return leader_worker_mode(config);
        case Mode::decentralized: return decentralized_mode(config);
    }
    throw std::invalid_argument("unknown mode");
}

std::vector<AgentName> Team::worker_names() const {
    std::vector<AgentName> out;
    for (const auto& w : workers) out.push_back(w.name);
    return out;
}

const AgentId* Team::find(const AgentName& name) const {
    if (lead && lead->name == name) return &*lead;
    for (const auto& w : workers)
        if (w.name == name) return &w;
    return nullptr;
}

Team make_team(const ModeConfig& mode) {
    Team team;
    if (mode.has_lead) team.lead = AgentId{kLeadName, Role::lead};
    const std::string prefix = mode.has_lead ? "dev" : "peer";
    const auto width = std::to_string(mode.workers).size();
    for (int i = 1; i <= mode.workers; ++i) {
        std::string n = std::to_string(i);
        n.insert(0, width - n.size(), '0');
        team.workers.push_back({prefix + n, Role::worker});
    }
    return team;
}

}  // namespace cograph
