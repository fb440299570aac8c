#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>

#include "cograph/graph.hpp"

namespace cograph {

enum class Role { lead, worker };

const char* to_string(Role r);
Role role_from_string(const std::string& s);

struct AgentId {
    AgentName name;
    Role role = Role::worker;

    bool operator==(const AgentId&) const = default;
};

enum class OpKind { discover, assign, claim, complete, release, close, verify };

inline constexpr OpKind kAllOpKinds[] = {OpKind::discover, OpKind::assign,  OpKind::claim,
                                         OpKind::complete, OpKind::release, OpKind::close,
                                         OpKind::verify};

const char* to_string(OpKind k);
OpKind op_kind_from_string(const std::string& s);

/// Why an operator (or a serializer-level transition) was refused.
enum class Rejection {
    none,
    not_authorized,
    unknown_node,
    duplicate_node,
    would_create_cycle,
    bad_status,
    not_claimable,
    not_owner,
    duplicate_verification,
    not_a_worker,
    mode_disabled,
    planning_discover_only,
};

const char* to_string(Rejection r);
Rejection rejection_from_string(const std::string& s);

struct MutationOp {
    OpKind kind = OpKind::discover;
    NodeId target;
    AgentId caller;

    // Discover payload.
    std::string title;
    std::string description;
    std::set<NodeId> deps;

    // Assign payload.
    AgentId assignee;

    bool operator==(const MutationOp&) const = default;
};

struct OpOutcome {
    bool accepted = false;
    Rejection reason = Rejection::none;
    std::uint64_t graph_version = 0;
};

/// Which role may call which operator.
bool caller_permitted(OpKind kind, Role role);

/// Verification node id for `parent`.
NodeId verification_id(const NodeId& parent);
inline constexpr const char* kVerificationSuffix = ":verify";

/// Checks every precondition of `op` against `g` without touching it.
Rejection check(const CoordinationGraph& g, const MutationOp& op);

/// Applies `op` in place. On rejection `g` is left untouched.
OpOutcome apply(CoordinationGraph& g, const MutationOp& op, Round round);

/// Value form: returns the successor graph alongside the outcome.
std::pair<CoordinationGraph, OpOutcome> applied(const CoordinationGraph& g, const MutationOp& op,
                                                Round round);

enum class PromoteStatus { promoted, already_verified, not_a_verification_node, parent_not_done };

const char* to_string(PromoteStatus s);

/// Marks the parent of a finished verification node as verified.
PromoteStatus promote_verified(CoordinationGraph& g, const NodeId& verification_node);

/// Static-mode substitute for Claim: a worker begins a node it was assigned.
/// Requires status assigned, agent == worker and satisfied dependencies.
Rejection check_start(const CoordinationGraph& g, const NodeId& v, const AgentName& worker);
OpOutcome start_assigned(CoordinationGraph& g, const NodeId& v, const AgentName& worker);

}  // namespace cograph
