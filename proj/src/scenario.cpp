#include "cograph/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "cograph/rng.hpp"

namespace cograph {

namespace {

void require_probability(const char* field, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter(field, "must lie in [0, 1]");
}

void require(bool ok, const char* field, const char* why) {
    if (!ok) throw InvalidParameter(field, why);
}

std::string pad(int value, int width) {
    std::string s = std::to_string(value);
    if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
    return s;
}

}  // namespace

void ScenarioSpec::validate() const {
    require(roots >= 1, "roots", "must be at least 1");
    require(depth >= 1, "depth", "must be at least 1");
    require(branching >= 0, "branching", "must be non-negative");
    require(min_duration >= 1, "min_duration", "must be at least 1");
    require(max_duration >= min_duration, "max_duration", "must be >= min_duration");
    require(min_artifact_chars >= 0, "min_artifact_chars", "must be non-negative");
    require(max_artifact_chars >= min_artifact_chars, "max_artifact_chars",
            "must be >= min_artifact_chars");
    require_probability("dependent_child_prob", dependent_child_prob);
    require(initial_visible_fraction > 0.0 && initial_visible_fraction <= 1.0,
            "initial_visible_fraction", "must lie in (0, 1]");
    require_probability("stall_prob", stall_prob);
    require(min_stall_rounds >= 1, "min_stall_rounds", "must be at least 1");
    require(max_stall_rounds >= min_stall_rounds, "max_stall_rounds", "must be >= min_stall_rounds");
    require_probability("false_complete_prob", false_complete_prob);
    require_probability("decline_prob", decline_prob);
    for (double s : worker_speeds) require(s > 0.0, "worker_speeds", "entries must be positive");
    for (const auto& f : forced_stalls) {
        require(!f.worker.empty(), "forced_stalls.worker", "must name a worker");
        require(f.from >= 1, "forced_stalls.from", "must be at least 1");
        require(f.rounds >= 0, "forced_stalls.rounds", "must be non-negative");
    }
    require(risk_fanout >= 1, "risk_fanout", "must be at least 1");
    require(planning_nodes_per_turn >= 1, "planning_nodes_per_turn", "must be at least 1");

    double size = roots;
    double level = roots;
    for (int d = 1; d < depth; ++d) {
        level *= branching;
        size += level;
    }
    require(size <= 100000.0, "depth", "hidden tree would exceed 100000 tasks");
}

double ScenarioSpec::speed_of(std::size_t worker_index) const {
    return worker_index < worker_speeds.size() ? worker_speeds[worker_index] : 1.0;
}

const HiddenTask& HiddenTree::at(const NodeId& id) const {
    auto it = tasks.find(id);
    if (it == tasks.end()) throw UnknownNode(id);
    return it->second;
}

long long HiddenTree::total_work() const {
    long long total = 0;
    for (const auto& [id, t] : tasks) total += t.duration;
    return total;
}

long long HiddenTree::critical_path() const {
    std::map<NodeId, long long> memo;
    std::function<long long(const NodeId&)> finish = [&](const NodeId& id) -> long long {
        if (auto it = memo.find(id); it != memo.end()) return it->second;
        const HiddenTask& t = at(id);
        long long start = 0;
        for (const auto& dep : t.deps) start = std::max(start, finish(dep));
        return memo[id] = start + t.duration;
    };
    long long best = 0;
    for (const auto& [id, t] : tasks) best = std::max(best, finish(id));
    return best;
}

std::uint64_t HiddenTree::hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix_str = [&](const std::string& s) {
        h = mix64(h ^ s.size());
        for (char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ULL;
        }
    };
    for (const auto& [id, t] : tasks) {
        mix_str(id);
        h = mix64(h ^ static_cast<std::uint64_t>(t.duration));
        h = mix64(h ^ t.artifact_chars);
        for (const auto& d : t.deps) mix_str(d);
        for (const auto& c : t.children) {
            mix_str(c.id);
            h = mix64(h ^ static_cast<std::uint64_t>(c.reveal_after));
        }
    }
    return h;
}

std::string artifact_name(const NodeId& task) { return "artifact/" + task; }

HiddenTree generate(const ScenarioSpec& spec) {
    spec.validate();
    Rng rng(stream_seed(spec.seed, "scenario"));
    HiddenTree tree;

    std::function<void(const NodeId&, const NodeId&, int)> build = [&](const NodeId& id,
                                                                       const NodeId& parent,
                                                                       int level) {
        HiddenTask t;
        t.id = id;
        t.parent = parent;
        t.duration = static_cast<int>(rng.between(spec.min_duration, spec.max_duration));
        t.artifact = artifact_name(id);
        t.artifact_chars =
            static_cast<std::size_t>(rng.between(spec.min_artifact_chars, spec.max_artifact_chars));
        t.title = "subtask " + id;
        t.description = "Produce " + t.artifact + " (" + std::to_string(t.artifact_chars) +
                        " characters) for subtask " + id + ".";
        if (!parent.empty() && rng.bernoulli(spec.dependent_child_prob)) t.deps.push_back(parent);

        std::vector<NodeId> child_ids;
        if (level < spec.depth) {
            for (int j = 0; j < spec.branching; ++j) {
                NodeId child = id + "." + std::to_string(j);
                int reveal_after = static_cast<int>(rng.between(0, t.duration - 1));
                t.children.push_back({child, reveal_after});
                child_ids.push_back(child);
            }
        }
        tree.tasks.emplace(id, t);
        for (const auto& child : child_ids) build(child, id, level + 1);
    };

    const int width = static_cast<int>(std::to_string(std::max(spec.roots - 1, 0)).size());
    for (int i = 0; i < spec.roots; ++i) {
        NodeId id = "t" + pad(i, width);
        tree.roots.push_back(id);
        build(id, "", 1);
    }
    return tree;
}

int visible_root_count(int roots, double visible_fraction) {
    int k = static_cast<int>(std::lround(visible_fraction * roots));
    return std::clamp(k, 1, roots);
}

const std::vector<Reveal>& World::reveals_of(const NodeId& task) const {
    static const std::vector<Reveal> none;
    auto it = reveals.find(task);
    return it == reveals.end() ? none : it->second;
}

World make_world(HiddenTree tree, double visible_fraction) {
    World w;
    const int roots = static_cast<int>(tree.roots.size());
    const int k = visible_root_count(roots, visible_fraction);
    w.initially_visible.assign(tree.roots.begin(), tree.roots.begin() + k);

    for (const auto& [id, t] : tree.tasks) {
        auto& list = w.reveals[id];
        for (const auto& child : t.children)
            list.push_back({child.id, child.reveal_after, tree.at(child.id).deps});
    }
    for (int j = k; j < roots; ++j) {
        const NodeId& carrier = tree.roots[static_cast<std::size_t>((j - k) % k)];
        w.reveals[carrier].insert(w.reveals[carrier].begin(),
                                  Reveal{tree.roots[static_cast<std::size_t>(j)], 0, {}});
    }
    w.task_description = "Complete " + std::to_string(tree.size()) +
                         " interdependent subtasks; " + std::to_string(k) + " of " +
                         std::to_string(roots) + " top-level subtasks are known up front.";
    w.tree = std::move(tree);
    return w;
}

}  // namespace cograph
