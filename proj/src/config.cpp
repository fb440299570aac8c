#include "cograph/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace cograph {

using json = nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.contains(key)) throw ConfigError(join(path, key), "unknown field");
}

const json& object_at(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
    return j;
}

template <typename T>
void read(const json& obj, const std::string& path, const std::string& key, T& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    const std::string field = join(path, key);
    if constexpr (std::is_same_v<T, bool>) {
        if (!it->is_boolean()) throw ConfigError(field, "expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
        if (!it->is_number_integer()) throw ConfigError(field, "expected an integer");
        if constexpr (std::is_unsigned_v<T>)
            if (it->is_number_integer() && !it->is_number_unsigned() && it->template get<long long>() < 0)
                throw ConfigError(field, "expected a non-negative integer");
    } else if constexpr (std::is_floating_point_v<T>) {
        if (!it->is_number()) throw ConfigError(field, "expected a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (!it->is_string()) throw ConfigError(field, "expected a string");
    }
    out = it->template get<T>();
}

ProtocolConfig parse_protocol(const json& j) {
    const std::string path = "protocol";
    object_at(j, path);
    reject_unknown(j, path, {"max_rounds", "heartbeat_threshold", "workers", "planning_turns"});
    ProtocolConfig p;
    read(j, path, "max_rounds", p.max_rounds);
    read(j, path, "heartbeat_threshold", p.heartbeat_threshold);
    read(j, path, "workers", p.workers);
    read(j, path, "planning_turns", p.planning_turns);
    try {
        p.validate();
    } catch (const InvalidParameter& e) {
        throw ConfigError(join(path, e.field()), e.what());
    }
    return p;
}

ScenarioSpec parse_scenario(const json& j, const std::string& path) {
    object_at(j, path);
    reject_unknown(j, path,
                   {"seed", "roots", "depth", "branching", "min_duration", "max_duration", "min_artifact_chars",
                    "max_artifact_chars", "dependent_child_prob", "initial_visible_fraction", "stall_prob",
                    "min_stall_rounds", "max_stall_rounds", "false_complete_prob", "decline_prob",
                    "worker_speeds", "forced_stalls", "risk_fanout", "planning_nodes_per_turn"});
    ScenarioSpec s;
    read(j, path, "seed", s.seed);
    read(j, path, "roots", s.roots);
    read(j, path, "depth", s.depth);
    read(j, path, "branching", s.branching);
    read(j, path, "min_duration", s.min_duration);
    read(j, path, "max_duration", s.max_duration);
    read(j, path, "min_artifact_chars", s.min_artifact_chars);
    read(j, path, "max_artifact_chars", s.max_artifact_chars);
    read(j, path, "dependent_child_prob", s.dependent_child_prob);
    read(j, path, "initial_visible_fraction", s.initial_visible_fraction);
    read(j, path, "stall_prob", s.stall_prob);
    read(j, path, "min_stall_rounds", s.min_stall_rounds);
    read(j, path, "max_stall_rounds", s.max_stall_rounds);
    read(j, path, "false_complete_prob", s.false_complete_prob);
    read(j, path, "decline_prob", s.decline_prob);
    read(j, path, "risk_fanout", s.risk_fanout);
    read(j, path, "planning_nodes_per_turn", s.planning_nodes_per_turn);

    if (auto it = j.find("worker_speeds"); it != j.end()) {
        const std::string field = join(path, "worker_speeds");
        if (!it->is_array()) throw ConfigError(field, "expected an array of numbers");
        for (std::size_t i = 0; i < it->size(); ++i) {
            if (!(*it)[i].is_number()) throw ConfigError(field + "[" + std::to_string(i) + "]", "expected a number");
            s.worker_speeds.push_back((*it)[i].get<double>());
        }
    }
    if (auto it = j.find("forced_stalls"); it != j.end()) {
        const std::string field = join(path, "forced_stalls");
        if (!it->is_array()) throw ConfigError(field, "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string item = field + "[" + std::to_string(i) + "]";
            const json& f = object_at((*it)[i], item);
            reject_unknown(f, item, {"worker", "from", "rounds"});
            ForcedStall stall;
            read(f, item, "worker", stall.worker);
            read(f, item, "from", stall.from);
            read(f, item, "rounds", stall.rounds);
            if (stall.worker.empty()) throw ConfigError(join(item, "worker"), "required");
            s.forced_stalls.push_back(stall);
        }
    }
    try {
        s.validate();
    } catch (const InvalidParameter& e) {
        throw ConfigError(join(path, e.field()), e.what());
    }
    return s;
}

Mode parse_mode(const json& j, const std::string& field) {
    if (!j.is_string()) throw ConfigError(field, "expected a mode name");
    try {
        return mode_from_string(j.get<std::string>());
    } catch (const std::invalid_argument&) {
        throw ConfigError(field, "unknown mode '" + j.get<std::string>() +
                                     "' (latte, static, leader_worker, decentralized)");
    }
}

}  // namespace

std::uint64_t RunConfig::seed_at(int i) const {
    if (!seeds.empty()) return seeds.at(static_cast<std::size_t>(i));
    return scenario.seed + static_cast<std::uint64_t>(i);
}

ScenarioSpec RunConfig::scenario_for(int i) const {
    ScenarioSpec s = scenario;
    s.seed = seed_at(i);
    return s;
}

ModeConfig RunConfig::mode_for(Mode m) const {
    ModeConfig c = mode_config(m, protocol);
    c.rebroadcast_hints = rebroadcast_hints;
    return c;
}

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("not valid JSON: ") + e.what());
    }
    object_at(root, "");
    reject_unknown(root, "",
                   {"protocol", "scenario", "mode", "modes", "repetitions", "seeds", "output_dir", "export",
                    "leader_worker"});

    RunConfig c;
    if (auto it = root.find("protocol"); it != root.end()) c.protocol = parse_protocol(*it);
    if (auto it = root.find("scenario"); it != root.end()) c.scenario = parse_scenario(*it, "scenario");

    if (root.contains("mode") && root.contains("modes")) throw ConfigError("modes", "give either mode or modes");
    if (auto it = root.find("mode"); it != root.end()) c.modes = {parse_mode(*it, "mode")};
    if (auto it = root.find("modes"); it != root.end()) {
        if (!it->is_array() || it->empty()) throw ConfigError("modes", "expected a non-empty array");
        c.modes.clear();
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string field = "modes[" + std::to_string(i) + "]";
            const json& entry = (*it)[i];
            if (entry.is_object()) {
                reject_unknown(entry, field, {"mode", "scenario"});
                if (!entry.contains("mode")) throw ConfigError(join(field, "mode"), "required");
                c.modes.push_back(parse_mode(entry.at("mode"), join(field, "mode")));
                if (entry.contains("scenario")) {
                    ScenarioSpec own = parse_scenario(entry.at("scenario"), join(field, "scenario"));
                    if (!(own == c.scenario))
                        throw ConfigError(join(field, "scenario"), "modes must share the top-level scenario");
                }
            } else {
                c.modes.push_back(parse_mode(entry, field));
            }
            for (std::size_t k = 0; k + 1 < c.modes.size(); ++k)
                if (c.modes[k] == c.modes.back()) throw ConfigError(field, "mode listed twice");
        }
    }

    read(root, "", "repetitions", c.repetitions);
    if (auto it = root.find("seeds"); it != root.end()) {
        if (!it->is_array() || it->empty()) throw ConfigError("seeds", "expected a non-empty array of integers");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const json& s = (*it)[i];
            if (!s.is_number_unsigned()) throw ConfigError("seeds[" + std::to_string(i) + "]", "expected a non-negative integer");
            c.seeds.push_back(s.get<std::uint64_t>());
        }
        if (root.contains("repetitions") && c.repetitions != static_cast<int>(c.seeds.size()))
            throw ConfigError("repetitions", "does not match the number of seeds");
        c.repetitions = static_cast<int>(c.seeds.size());
    }
    if (c.repetitions < 1) throw ConfigError("repetitions", "must be at least 1");

    read(root, "", "output_dir", c.output_dir);
    if (auto it = root.find("export"); it != root.end()) {
        object_at(*it, "export");
        reject_unknown(*it, "export", {"graph_evolution"});
        read(*it, "export", "graph_evolution", c.export_graph_evolution);
    }
    if (auto it = root.find("leader_worker"); it != root.end()) {
        object_at(*it, "leader_worker");
        reject_unknown(*it, "leader_worker", {"rebroadcast_hints"});
        read(*it, "leader_worker", "rebroadcast_hints", c.rebroadcast_hints);
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace cograph
