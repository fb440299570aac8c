#include "cograph/workspace.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace cograph {

void Workspace::register_artifact(const std::string& name, std::size_t target_length) {
    auto& a = artifacts_[name];
    a.name = name;
    a.target_length = target_length;
}

std::size_t Workspace::writer_index(const AgentName& agent) {
    auto it = std::find(writers_.begin(), writers_.end(), agent);
    if (it != writers_.end()) return static_cast<std::size_t>(it - writers_.begin());
    writers_.push_back(agent);
    return writers_.size() - 1;
}

WriteRecord Workspace::write(const std::string& artifact, const AgentName& agent, Round round,
                             std::size_t offset, std::size_t length) {
    auto it = artifacts_.find(artifact);
    if (it == artifacts_.end()) throw std::invalid_argument("unknown artifact: " + artifact);
    Artifact& a = it->second;
    if (offset > a.chars.size())
        throw std::invalid_argument("write to " + artifact + " skips past the content end");

    std::size_t end = std::min(offset + length, a.target_length);
    WriteRecord rec{round, agent, artifact, offset, end > offset ? end - offset : 0, 0};
    if (rec.length == 0) return rec;

    const std::size_t me = writer_index(agent);
    std::size_t overlap_end = std::min(end, a.chars.size());
    bool overwrite = false;
    for (std::size_t i = offset; i < overlap_end; ++i) {
        const Attribution& prev = a.chars[i];
        if (prev.writer != me && prev.round < round) overwrite = true;
    }
    rec.replaced = overlap_end > offset ? overlap_end - offset : 0;

    if (a.chars.size() < end) a.chars.resize(end);
    for (std::size_t i = offset; i < end; ++i) a.chars[i] = {me, round};

    if (!a.completed_round && a.chars.size() >= a.target_length) {
        a.completed_round = round;
        a.completed_by = agent;
    }

    if (overwrite) ++overwrites_;
    wasted_ += rec.replaced;
    auto& agents = round_writers_[{round, artifact}];
    if (std::find(agents.begin(), agents.end(), agent) == agents.end()) {
        agents.push_back(agent);
        if (agents.size() == 2) concurrent_.emplace_back(round, artifact);
    }

    log_.push_back(rec);
    return rec;
}

ArtifactView Workspace::view(const std::string& name) const {
    auto it = artifacts_.find(name);
    if (it == artifacts_.end()) throw std::invalid_argument("unknown artifact: " + name);
    const Artifact& a = it->second;
    return {a.name, a.target_length, a.chars.size(), a.chars.size() >= a.target_length};
}

bool Workspace::complete(const std::string& name) const { return view(name).complete; }

bool Workspace::all_complete() const {
    return std::all_of(artifacts_.begin(), artifacts_.end(), [](const auto& kv) {
        return kv.second.chars.size() >= kv.second.target_length;
    });
}

std::size_t Workspace::total_written() const {
    std::size_t n = 0;
    for (const auto& rec : log_) n += rec.length;
    return n;
}

std::size_t Workspace::surviving() const {
    std::size_t n = 0;
    for (const auto& [name, a] : artifacts_) n += a.chars.size();
    return n;
}

std::size_t overwrite_events(std::span<const WriteRecord> log) {
    struct Mark {
        AgentName agent;
        Round round;
    };
    std::map<std::string, std::vector<Mark>> content;
    std::size_t events = 0;
    for (const auto& rec : log) {
        auto& chars = content[rec.artifact];
        std::size_t end = rec.offset + rec.length;
        bool overwrite = false;
        for (std::size_t i = rec.offset; i < std::min(end, chars.size()); ++i)
            if (chars[i].agent != rec.agent && chars[i].round < rec.round) overwrite = true;
        if (chars.size() < end) chars.resize(end);
        for (std::size_t i = rec.offset; i < end; ++i) chars[i] = {rec.agent, rec.round};
        if (overwrite) ++events;
    }
    return events;
}

std::size_t concurrent_write_events(std::span<const WriteRecord> log) {
    std::map<std::pair<Round, std::string>, std::set<AgentName>> writers;
    for (const auto& rec : log)
        if (rec.length > 0) writers[{rec.round, rec.artifact}].insert(rec.agent);
    return static_cast<std::size_t>(std::count_if(
        writers.begin(), writers.end(), [](const auto& kv) { return kv.second.size() >= 2; }));
}

std::size_t wasted_characters(std::span<const WriteRecord> log, const Workspace& final_state) {
    std::size_t written = 0;
    for (const auto& rec : log) written += rec.length;
    return written - final_state.surviving();
}

Workspace replay_writes(const std::map<std::string, std::size_t>& targets,
                        std::span<const WriteRecord> log) {
    Workspace ws;
    for (const auto& [name, len] : targets) ws.register_artifact(name, len);
    for (const auto& rec : log) ws.write(rec.artifact, rec.agent, rec.round, rec.offset, rec.length);
    return ws;
}

}  // namespace cograph
