#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cograph/mutation.hpp"

namespace cograph {

enum class Mode { latte, static_graph, leader_worker, decentralized };

inline constexpr Mode kAllModes[] = {Mode::latte, Mode::static_graph, Mode::leader_worker,
                                     Mode::decentralized};

const char* to_string(Mode m);
Mode mode_from_string(const std::string& s);

struct ProtocolConfig {
    int max_rounds = 40;
    int heartbeat_threshold = 4;
    int workers = 4;
    int planning_turns = 5;

    void validate() const;
    bool operator==(const ProtocolConfig&) const = default;
};

/// How a coordination mode drives the shared harness.
struct ModeConfig {
    Mode mode = Mode::latte;

    // Graph-backed modes plan, keep a coordination graph and terminate when
    // every node is finished. Graphless modes terminate on workspace state.
    bool uses_graph = true;

    // Frontier-driven dispatch; otherwise every worker steps every round.
    bool selective_dispatch = true;

    // The lead steps every round instead of on triggers.
    bool lead_every_round = false;

    // Operators refused by the serializer once planning is over.
    std::set<OpKind> disabled_after_planning;

    // Workers may begin assigned nodes without Claim.
    bool start_on_assign = false;

    // Overrides the scenario's planning-time visibility.
    std::optional<double> visibility_override;

    // Leader-Worker: the lead repeats its hints every round.
    bool rebroadcast_hints = true;

    // Agents fielded: one lead plus `workers`, or `workers` + 1 peers.
    bool has_lead = true;
    int workers = 4;
};

ModeConfig latte_mode(const ProtocolConfig& config);
ModeConfig static_mode(const ProtocolConfig& config);
ModeConfig leader_worker_mode(const ProtocolConfig& config);
ModeConfig decentralized_mode(const ProtocolConfig& config);
ModeConfig mode_config(Mode mode, const ProtocolConfig& config);

struct Team {
    std::optional<AgentId> lead;
    std::vector<AgentId> workers;  // canonical order

    std::size_t headcount() const { return workers.size() + (lead ? 1 : 0); }
    std::vector<AgentName> worker_names() const;
    const AgentId* find(const AgentName& name) const;
};

/// Lead plus workers "dev1".."devN", or N+1 peers "peer1"... for the
/// decentralized mode. Numbers are zero-padded so lexicographic order matches
/// numeric order.
Team make_team(const ModeConfig& mode);

}  // namespace cograph
