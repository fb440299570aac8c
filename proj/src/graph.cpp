#include "cograph/graph.hpp"

#include <algorithm>

namespace cograph {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

struct Fnv {
    std::uint64_t h = kFnvOffset;

    void byte(unsigned char b) {
        h ^= b;
        h *= kFnvPrime;
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) byte(static_cast<unsigned char>((v >> (i * 8)) & 0xFFu));
    }
    void str(const std::string& s) {
        u64(s.size());
        for (char c : s) byte(static_cast<unsigned char>(c));
    }
};

}  // namespace

const char* to_string(NodeStatus s) {
    switch (s) {
        case NodeStatus::pending: return "pending";
        case NodeStatus::assigned: return "assigned";
        case NodeStatus::in_progress: return "in_progress";
        case NodeStatus::done: return "done";
        case NodeStatus::verified: return "verified";
    }
    return "?";
}

NodeStatus status_from_string(const std::string& s) {
    if (s == "pending") return NodeStatus::pending;
    if (s == "assigned") return NodeStatus::assigned;
    if (s == "in_progress") return NodeStatus::in_progress;
    if (s == "done") return NodeStatus::done;
    if (s == "verified") return NodeStatus::verified;
    throw std::invalid_argument("unknown node status: " + s);
}

const TaskNode& CoordinationGraph::at(const NodeId& id) const {
    auto it = nodes.find(id);
    if (it == nodes.end()) throw UnknownNode(id);
    return it->second;
}

TaskNode& CoordinationGraph::at(const NodeId& id) {
    auto it = nodes.find(id);
    if (it == nodes.end()) throw UnknownNode(id);
    return it->second;
}

std::vector<std::pair<NodeId, NodeId>> CoordinationGraph::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (const auto& [id, node] : nodes)
        for (const auto& dep : node.deps) out.emplace_back(dep, id);
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t CoordinationGraph::edge_count() const {
    std::size_t n = 0;
    for (const auto& [id, node] : nodes) n += node.deps.size();
    return n;
}

std::vector<NodeId> CoordinationGraph::dependents(const NodeId& id) const {
    std::vector<NodeId> out;
    for (const auto& [other, node] : nodes)
        if (node.deps.contains(id)) out.push_back(other);
    return out;
}

bool is_satisfying(NodeStatus s) {
    return s == NodeStatus::done || s == NodeStatus::verified;
}

bool is_finished(NodeStatus s) { return is_satisfying(s); }

bool is_acyclic(const CoordinationGraph& g) {
    // Kahn's algorithm over the dependency relation. Deps that point outside
    // the node map are ignored here; they cannot close a cycle.
    std::map<NodeId, std::size_t> unresolved;
    std::map<NodeId, std::vector<NodeId>> successors;
    for (const auto& [id, node] : g.nodes) {
        std::size_t n = 0;
        for (const auto& dep : node.deps) {
            if (!g.contains(dep)) continue;
            successors[dep].push_back(id);
            ++n;
        }
        unresolved[id] = n;
    }

    std::vector<NodeId> ready;
    for (const auto& [id, n] : unresolved)
        if (n == 0) ready.push_back(id);

    std::size_t visited = 0;
    while (!ready.empty()) {
        NodeId u = std::move(ready.back());
        ready.pop_back();
        ++visited;
        auto it = successors.find(u);
        if (it == successors.end()) continue;
        for (const auto& v : it->second)
            if (--unresolved[v] == 0) ready.push_back(v);
    }
    return visited == g.size();
}

bool dependency_satisfied(const CoordinationGraph& g, const NodeId& v) {
    const TaskNode& node = g.at(v);
    return std::all_of(node.deps.begin(), node.deps.end(), [&](const NodeId& dep) {
        auto it = g.nodes.find(dep);
        return it != g.nodes.end() && is_satisfying(it->second.label.status);
    });
}

std::vector<NodeId> frontier(const CoordinationGraph& g) {
    std::vector<NodeId> out;
    for (const auto& [id, node] : g.nodes)
        if (node.label.status == NodeStatus::pending && dependency_satisfied(g, id))
            out.push_back(id);
    return out;
}

std::vector<NodeId> claimable(const CoordinationGraph& g, const AgentName& worker) {
    std::vector<NodeId> out;
    for (const auto& [id, node] : g.nodes) {
        const auto& label = node.label;
        bool open = label.status == NodeStatus::pending ||
                    (label.status == NodeStatus::assigned && label.agent == worker);
        if (open && dependency_satisfied(g, id)) out.push_back(id);
    }
    return out;
}

std::vector<NodeId> held_by(const CoordinationGraph& g, const AgentName& worker) {
    std::vector<NodeId> out;
    for (const auto& [id, node] : g.nodes) {
        const auto s = node.label.status;
        if ((s == NodeStatus::assigned || s == NodeStatus::in_progress) && node.label.agent == worker)
            out.push_back(id);
    }
    return out;
}

std::uint64_t structural_hash(const CoordinationGraph& g) {
    Fnv f;
    f.u64(g.nodes.size());
    for (const auto& [id, node] : g.nodes) {
        f.str(id);
        f.str(node.title);
        f.str(node.description);
        f.u64(node.deps.size());
        for (const auto& dep : node.deps) f.str(dep);
        f.byte(node.label.agent ? 1 : 0);
        if (node.label.agent) f.str(*node.label.agent);
        f.byte(static_cast<unsigned char>(node.label.status));
        f.u64(static_cast<std::uint64_t>(node.created_round));
        f.byte(node.completed_round ? 1 : 0);
        if (node.completed_round) f.u64(static_cast<std::uint64_t>(*node.completed_round));
        f.byte(node.is_verification ? 1 : 0);
        f.str(node.verifies);
    }
    return f.h;
}

std::uint64_t topology_hash(const CoordinationGraph& g) {
    Fnv f;
    f.u64(g.nodes.size());
    for (const auto& [id, node] : g.nodes) {
        f.str(id);
        f.u64(node.deps.size());
        for (const auto& dep : node.deps) f.str(dep);
    }
    return f.h;
}

bool all_finished(const CoordinationGraph& g) {
    return std::all_of(g.nodes.begin(), g.nodes.end(),
                       [](const auto& kv) { return is_finished(kv.second.label.status); });
}

}  // namespace cograph
