#include "doctest.h"

#include <algorithm>

#include "cograph/graph.hpp"

using namespace cograph;

namespace {

TaskNode node(const NodeId& id, NodeStatus s, std::set<NodeId> deps = {}, std::optional<AgentName> agent = {}) {
    TaskNode n;
    n.id = id;
    n.deps = std::move(deps);
    n.label.status = s;
    n.label.agent = agent;
    if (s != NodeStatus::pending && !agent) n.label.agent = "w1";
    if (s == NodeStatus::done || s == NodeStatus::verified) n.completed_round = 1;
    return n;
}

CoordinationGraph graph_of(std::initializer_list<TaskNode> nodes) {
    CoordinationGraph g;
    for (const auto& n : nodes) g.nodes.emplace(n.id, n);
    return g;
}

// Kahn's algorithm: acyclic iff every node can be peeled off.
bool kahn_acyclic(const CoordinationGraph& g) {
    std::map<NodeId, std::size_t> indeg;
    for (const auto& [id, n] : g.nodes) indeg[id] = n.deps.size();
    std::vector<NodeId> ready;
    for (const auto& [id, d] : indeg)
        if (d == 0) ready.push_back(id);
    std::size_t peeled = 0;
    while (!ready.empty()) {
        NodeId u = ready.back();
        ready.pop_back();
        ++peeled;
        for (const auto& [id, n] : g.nodes)
            if (n.deps.contains(u) && --indeg[id] == 0) ready.push_back(id);
    }
    return peeled == g.size();
}

}  // namespace

TEST_CASE("acyclicity") {
    CHECK(is_acyclic(CoordinationGraph{}));
    auto chain = graph_of({node("a", NodeStatus::pending), node("b", NodeStatus::pending, {"a"})});
    CHECK(is_acyclic(chain));
    CHECK(kahn_acyclic(chain));

    // Built directly, bypassing the operators.
    auto cycle = graph_of({node("a", NodeStatus::pending, {"b"}), node("b", NodeStatus::pending, {"a"})});
    CHECK(kahn_acyclic(cycle) == false);
    CHECK(is_acyclic(cycle) == false);

    auto self = graph_of({node("a", NodeStatus::pending, {"a"})});
    CHECK_FALSE(is_acyclic(self));

    auto diamond = graph_of({node("a", NodeStatus::pending), node("b", NodeStatus::pending, {"a"}),
                             node("c", NodeStatus::pending, {"a"}), node("d", NodeStatus::pending, {"b", "c"})});
    CHECK(is_acyclic(diamond) == kahn_acyclic(diamond));
}

TEST_CASE("dependency satisfaction") {
    auto g = graph_of({node("a", NodeStatus::in_progress), node("b", NodeStatus::verified),
                       node("c", NodeStatus::done), node("free", NodeStatus::pending),
                       node("v1", NodeStatus::pending, {"a"}), node("v2", NodeStatus::pending, {"c", "b"})});
    CHECK(dependency_satisfied(g, "free"));
    CHECK_FALSE(dependency_satisfied(g, "v1"));
    CHECK(dependency_satisfied(g, "v2"));
    CHECK_THROWS_AS(dependency_satisfied(g, "nope"), UnknownNode);
}

TEST_CASE("frontier") {
    CHECK(frontier(CoordinationGraph{}).empty());

    auto g1 = graph_of({node("a", NodeStatus::pending), node("b", NodeStatus::pending, {"a"})});
    CHECK(frontier(g1) == std::vector<NodeId>{"a"});

    auto g2 = graph_of({node("a", NodeStatus::done), node("b", NodeStatus::pending, {"a"}),
                        node("c", NodeStatus::pending, {"a"})});
    CHECK(frontier(g2) == std::vector<NodeId>{"b", "c"});

    // Canonical order is lexicographic, not insertion order.
    auto g3 = graph_of({node("z", NodeStatus::pending), node("a10", NodeStatus::pending),
                        node("a2", NodeStatus::pending), node("m", NodeStatus::assigned)});
    CHECK(frontier(g3) == std::vector<NodeId>{"a10", "a2", "z"});
}

TEST_CASE("claimable") {
    auto single = graph_of({node("a", NodeStatus::pending)});
    CHECK(claimable(single, "w1") == std::vector<NodeId>{"a"});
    CHECK(claimable(single, "w7") == std::vector<NodeId>{"a"});

    auto assigned = graph_of({node("a", NodeStatus::assigned, {}, "w1")});
    CHECK(claimable(assigned, "w1") == std::vector<NodeId>{"a"});
    CHECK(claimable(assigned, "w2").empty());

    auto blocked = graph_of({node("a", NodeStatus::assigned, {"b"}, "w1"), node("b", NodeStatus::in_progress, {}, "w2")});
    CHECK(claimable(blocked, "w1").empty());
}

TEST_CASE("held nodes, edges and hashes") {
    auto g = graph_of({node("a", NodeStatus::in_progress, {}, "w1"), node("b", NodeStatus::assigned, {"a"}, "w1"),
                       node("c", NodeStatus::done, {"a"}, "w1"), node("d", NodeStatus::pending, {"b", "c"})});
    CHECK(held_by(g, "w1") == std::vector<NodeId>{"a", "b"});
    CHECK(g.edge_count() == 4);
    CHECK(g.edges().front() == std::pair<NodeId, NodeId>{"a", "b"});
    CHECK(g.dependents("a") == std::vector<NodeId>{"b", "c"});
    CHECK(g.out_degree("d") == 0);

    const auto h = structural_hash(g), t = topology_hash(g);
    auto relabeled = g;
    relabeled.at("d").label = {"w2", NodeStatus::assigned};
    relabeled.version = 99;
    CHECK(structural_hash(relabeled) != h);
    CHECK(topology_hash(relabeled) == t);
    auto versioned = g;
    versioned.version = 7;
    CHECK(structural_hash(versioned) == h);
}

TEST_CASE("all finished") {
    CHECK(all_finished(graph_of({node("a", NodeStatus::done), node("b", NodeStatus::verified)})));
    CHECK_FALSE(all_finished(graph_of({node("a", NodeStatus::done), node("a:verify", NodeStatus::pending, {"a"})})));
}

TEST_CASE("status names round-trip") {
    for (auto s : {NodeStatus::pending, NodeStatus::assigned, NodeStatus::in_progress, NodeStatus::done,
                   NodeStatus::verified})
        CHECK(status_from_string(to_string(s)) == s);
}
