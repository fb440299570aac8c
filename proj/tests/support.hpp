#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cograph/agent.hpp"
#include "cograph/baselines.hpp"
#include "cograph/protocol.hpp"
#include "cograph/scenario.hpp"

namespace testing {

using namespace cograph;

class FnWorker : public WorkerPolicy {
public:
    using Fn = std::function<Actions(const WorkerContext&)>;
    explicit FnWorker(Fn fn) : fn_(std::move(fn)) {}
    Actions act(const WorkerContext& ctx) override { return fn_ ? fn_(ctx) : Actions{}; }

private:
    Fn fn_;
};

class FnLead : public LeadPolicy {
public:
    using PlanFn = std::function<PlanTurn(const PlanningContext&)>;
    using ActFn = std::function<Actions(const LeadContext&)>;
    FnLead(PlanFn plan, ActFn act) : plan_(std::move(plan)), act_(std::move(act)) {}
    PlanTurn plan(const PlanningContext& ctx) override { return plan_ ? plan_(ctx) : PlanTurn{{}, true}; }
    Actions act(const LeadContext& ctx) override { return act_ ? act_(ctx) : Actions{}; }

private:
    PlanFn plan_;
    ActFn act_;
};

inline OpAction make_op(OpKind kind, const NodeId& target) {
    OpAction a;
    a.kind = kind;
    a.target = target;
    return a;
}

inline OpAction discover(const NodeId& id, std::set<NodeId> deps = {}) {
    OpAction a = make_op(OpKind::discover, id);
    a.title = "task " + id;
    a.deps = std::move(deps);
    return a;
}

/// A world with one flat hidden task per id, each `chars` long.
inline std::shared_ptr<const World> flat_world(const std::vector<NodeId>& ids, std::size_t chars = 100) {
    HiddenTree tree;
    for (const auto& id : ids) {
        HiddenTask t;
        t.id = id;
        t.title = "task " + id;
        t.artifact = artifact_name(id);
        t.artifact_chars = chars;
        tree.tasks.emplace(id, t);
        tree.roots.push_back(id);
    }
    auto w = std::make_shared<World>();
    w->tree = std::move(tree);
    w->initially_visible = ids;
    w->task_description = "test";
    return w;
}

/// Lead that seeds `ids` during planning and then runs `act`.
inline std::unique_ptr<LeadPolicy> seeding_lead(std::vector<NodeId> ids, FnLead::ActFn act = {}) {
    return std::make_unique<FnLead>(
        [ids](const PlanningContext&) {
            PlanTurn t;
            for (const auto& id : ids) t.ops.push_back(discover(id));
            t.finished = true;
            return t;
        },
        std::move(act));
}

inline Team latte_team(int workers) {
    ProtocolConfig cfg;
    cfg.workers = workers;
    return make_team(latte_mode(cfg));
}

}  // namespace testing
