#include "cograph/mutation.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace cograph {

const char* to_string(Role r) { return r == Role::lead ? "lead" : "worker"; }

Role role_from_string(const std::string& s) {
    if (s == "lead") return Role::lead;
    if (s == "worker") return Role::worker;
    throw std::invalid_argument("unknown role: " + s);
}

const char* to_string(OpKind k) {
    switch (k) {
        case OpKind::discover: return "discover";
        case OpKind::assign: return "assign";
        case OpKind::claim: return "claim";
        case OpKind::complete: return "complete";
        case OpKind::release: return "release";
        case OpKind::close: return "close";
        case OpKind::verify: return "verify";
    }
    return "?";
}

OpKind op_kind_from_string(const std::string& s) {
    for (OpKind k : kAllOpKinds)
        if (s == to_string(k)) return k;
    throw std::invalid_argument("unknown operator: " + s);
}

const char* to_string(Rejection r) {
    switch (r) {
        case Rejection::none: return "none";
        case Rejection::not_authorized: return "not-authorized";
        case Rejection::unknown_node: return "unknown-node";
        case Rejection::duplicate_node: return "duplicate-node";
        case Rejection::would_create_cycle: return "would-create-cycle";
        case Rejection::bad_status: return "bad-status";
        case Rejection::not_claimable: return "not-claimable";
        case Rejection::not_owner: return "not-owner";
        case Rejection::duplicate_verification: return "duplicate-verification";
        case Rejection::not_a_worker: return "not-a-worker";
        case Rejection::mode_disabled: return "mode-disabled";
        case Rejection::planning_discover_only: return "planning-discover-only";
    }
    return "?";
}

Rejection rejection_from_string(const std::string& s) {
    for (int i = 0; i <= static_cast<int>(Rejection::planning_discover_only); ++i) {
        auto r = static_cast<Rejection>(i);
        if (s == to_string(r)) return r;
    }
    throw std::invalid_argument("unknown rejection code: " + s);
}

bool caller_permitted(OpKind kind, Role role) {
    switch (kind) {
        case OpKind::discover: return true;
        case OpKind::claim:
        case OpKind::complete: return role == Role::worker;
        case OpKind::assign:
        case OpKind::release:
        case OpKind::close:
        case OpKind::verify: return role == Role::lead;
    }
    return false;
}

NodeId verification_id(const NodeId& parent) { return parent + kVerificationSuffix; }

namespace {

// True if `target` can be reached from any of `sources` by following
// dependency edges forward (u -> v where u in v.deps).
bool reaches(const CoordinationGraph& g, const std::set<NodeId>& sources, const NodeId& target) {
    std::set<NodeId> seen;
    std::vector<NodeId> stack(sources.begin(), sources.end());
    while (!stack.empty()) {
        NodeId u = std::move(stack.back());
        stack.pop_back();
        if (u == target) return true;
        if (!seen.insert(u).second) continue;
        for (auto& v : g.dependents(u)) stack.push_back(std::move(v));
    }
    return false;
}

bool holding(NodeStatus s) { return s == NodeStatus::assigned || s == NodeStatus::in_progress; }

}  // namespace

Rejection check(const CoordinationGraph& g, const MutationOp& op) {
    if (!caller_permitted(op.kind, op.caller.role)) return Rejection::not_authorized;

    if (op.kind == OpKind::discover) {
        if (op.target.empty()) return Rejection::unknown_node;
        if (g.contains(op.target)) return Rejection::duplicate_node;
        for (const auto& dep : op.deps)
            if (!g.contains(dep)) return Rejection::unknown_node;
        if (reaches(g, op.deps, op.target)) return Rejection::would_create_cycle;
        return Rejection::none;
    }

    auto it = g.nodes.find(op.target);
    if (it == g.nodes.end()) return Rejection::unknown_node;
    const NodeLabel& label = it->second.label;

    switch (op.kind) {
        case OpKind::assign:
            if (label.status != NodeStatus::pending) return Rejection::bad_status;
            if (op.assignee.role != Role::worker || op.assignee.name.empty())
                return Rejection::not_a_worker;
            return Rejection::none;
        case OpKind::claim: {
            auto open = claimable(g, op.caller.name);
            if (!std::binary_search(open.begin(), open.end(), op.target))
                return Rejection::not_claimable;
            return Rejection::none;
        }
        case OpKind::complete:
            if (label.status != NodeStatus::in_progress) return Rejection::bad_status;
            if (label.agent != op.caller.name) return Rejection::not_owner;
            return Rejection::none;
        case OpKind::release:
        case OpKind::close:
            if (!holding(label.status)) return Rejection::bad_status;
            return Rejection::none;
        case OpKind::verify:
            if (label.status != NodeStatus::done) return Rejection::bad_status;
            if (g.contains(verification_id(op.target))) return Rejection::duplicate_verification;
            return Rejection::none;
        case OpKind::discover: break;
    }
    return Rejection::none;
}

OpOutcome apply(CoordinationGraph& g, const MutationOp& op, Round round) {
    Rejection why = check(g, op);
    if (why != Rejection::none) return {false, why, g.version};

    switch (op.kind) {
        case OpKind::discover: {
            TaskNode node;
            node.id = op.target;
            node.title = op.title;
            node.description = op.description;
            node.deps = op.deps;
            node.created_round = round;
            g.nodes.emplace(op.target, std::move(node));
            break;
        }
        case OpKind::assign:
            g.at(op.target).label = {op.assignee.name, NodeStatus::assigned};
            break;
        case OpKind::claim:
            g.at(op.target).label = {op.caller.name, NodeStatus::in_progress};
            break;
        case OpKind::complete: {
            TaskNode& node = g.at(op.target);
            node.label = {op.caller.name, NodeStatus::done};
            node.completed_round = round;
            break;
        }
        case OpKind::release:
            g.at(op.target).label = {std::nullopt, NodeStatus::pending};
            break;
        case OpKind::close: {
            TaskNode& node = g.at(op.target);
            node.label.status = NodeStatus::done;
            node.completed_round = round;
            break;
        }
        case OpKind::verify: {
            const TaskNode& parent = g.at(op.target);
            TaskNode node;
            node.id = verification_id(op.target);
            node.title = "verify " + parent.title;
            node.description = "Review the output of " + op.target + " and repair any gaps.";
            node.deps = {op.target};
            node.created_round = round;
            node.is_verification = true;
            node.verifies = op.target;
            g.nodes.emplace(node.id, std::move(node));
            break;
        }
    }
    ++g.version;
    return {true, Rejection::none, g.version};
}

std::pair<CoordinationGraph, OpOutcome> applied(const CoordinationGraph& g, const MutationOp& op,
                                                Round round) {
    CoordinationGraph next = g;
    OpOutcome outcome = apply(next, op, round);
    return {std::move(next), outcome};
}

const char* to_string(PromoteStatus s) {
    switch (s) {
        case PromoteStatus::promoted: return "promoted";
        case PromoteStatus::already_verified: return "already-verified";
        case PromoteStatus::not_a_verification_node: return "not-a-verification-node";
        case PromoteStatus::parent_not_done: return "parent-not-done";
    }
    return "?";
}

PromoteStatus promote_verified(CoordinationGraph& g, const NodeId& verification_node) {
    auto it = g.nodes.find(verification_node);
    if (it == g.nodes.end() || !it->second.is_verification ||
        !is_finished(it->second.label.status))
        return PromoteStatus::not_a_verification_node;

    auto parent = g.nodes.find(it->second.verifies);
    if (parent == g.nodes.end()) return PromoteStatus::not_a_verification_node;
    if (parent->second.label.status == NodeStatus::verified) return PromoteStatus::already_verified;
    if (parent->second.label.status != NodeStatus::done) return PromoteStatus::parent_not_done;

    parent->second.label.status = NodeStatus::verified;
    ++g.version;
    return PromoteStatus::promoted;
}

Rejection check_start(const CoordinationGraph& g, const NodeId& v, const AgentName& worker) {
    auto it = g.nodes.find(v);
    if (it == g.nodes.end()) return Rejection::unknown_node;
    if (it->second.label.status != NodeStatus::assigned) return Rejection::bad_status;
    if (it->second.label.agent != worker) return Rejection::not_owner;
    if (!dependency_satisfied(g, v)) return Rejection::not_claimable;
    return Rejection::none;
}

OpOutcome start_assigned(CoordinationGraph& g, const NodeId& v, const AgentName& worker) {
    Rejection why = check_start(g, v, worker);
    if (why != Rejection::none) return {false, why, g.version};
    g.at(v).label.status = NodeStatus::in_progress;
    ++g.version;
    return {true, Rejection::none, g.version};
}

}  // namespace cograph
