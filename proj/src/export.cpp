#include "cograph/export.hpp"

#include <sstream>

#include "json.hpp"

namespace cograph {

using json = nlohmann::json;

std::string graph_jsonl(const CoordinationGraph& g) {
    std::ostringstream out;
    for (const auto& [id, n] : g.nodes) {
        json j;
        j["id"] = id;
        j["title"] = n.title;
        j["description"] = n.description;
        j["deps"] = n.deps;
        j["agent"] = n.label.agent ? json(*n.label.agent) : json(nullptr);
        j["status"] = to_string(n.label.status);
        j["created_round"] = n.created_round;
        j["completed_round"] = n.completed_round ? json(*n.completed_round) : json(nullptr);
        j["is_verification"] = n.is_verification;
        j["verifies"] = n.verifies;
        out << j.dump() << '\n';
    }
    return out.str();
}

CoordinationGraph graph_from_jsonl(const std::string& text) {
    CoordinationGraph g;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        TaskNode n;
        n.id = j.at("id").get<std::string>();
        n.title = j.at("title").get<std::string>();
        n.description = j.at("description").get<std::string>();
        n.deps = j.at("deps").get<std::set<NodeId>>();
        if (!j.at("agent").is_null()) n.label.agent = j.at("agent").get<std::string>();
        n.label.status = status_from_string(j.at("status").get<std::string>());
        n.created_round = j.at("created_round").get<Round>();
        if (!j.at("completed_round").is_null()) n.completed_round = j.at("completed_round").get<Round>();
        n.is_verification = j.at("is_verification").get<bool>();
        n.verifies = j.at("verifies").get<std::string>();
        g.nodes.emplace(n.id, std::move(n));
    }
    return g;
}

namespace {

std::string escaped(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string quoted(const std::string& s) { return "\"" + escaped(s) + "\""; }

const char* fill(NodeStatus s) {
    switch (s) {
        case NodeStatus::pending: return "white";
        case NodeStatus::assigned: return "lightyellow";
        case NodeStatus::in_progress: return "gold";
        case NodeStatus::done: return "palegreen";
        case NodeStatus::verified: return "forestgreen";
    }
    return "white";
}

}  // namespace

std::string graph_dot(const CoordinationGraph& g, const std::string& name) {
    std::ostringstream out;
    out << "digraph " << quoted(name) << " {\n";
    out << "  rankdir=LR;\n  node [shape=box, style=filled];\n";
    for (const auto& [id, n] : g.nodes) {
        out << "  " << quoted(id) << " [status=" << quoted(to_string(n.label.status))
            << ", agent=" << quoted(n.label.agent.value_or("")) << ", fillcolor=" << fill(n.label.status);
        if (n.is_verification) out << ", shape=diamond";
        out << ", label=\"" << escaped(id) << "\\n" << to_string(n.label.status) << "\"];\n";
    }
    for (const auto& [u, v] : g.edges()) out << "  " << quoted(u) << " -> " << quoted(v) << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace cograph
