#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cograph/graph.hpp"

namespace cograph {

struct WriteRecord {
    Round round = 0;
    AgentName agent;
    std::string artifact;
    std::size_t offset = 0;
    std::size_t length = 0;
    // Previously attributed characters covered by this write, any author.
    std::size_t replaced = 0;

    bool operator==(const WriteRecord&) const = default;
};

struct ArtifactView {
    std::string name;
    std::size_t target_length = 0;
    std::size_t content_length = 0;
    bool complete = false;
};

/// Shared artifact store. Each character remembers who wrote it last and in
/// which round; the write log is append-only.
class Workspace {
public:
    struct Attribution {
        std::size_t writer;  // index into writers_
        Round round;
    };

    struct Artifact {
        std::string name;
        std::size_t target_length = 0;
        std::vector<Attribution> chars;  // size() is the content length
        std::optional<Round> completed_round;
        AgentName completed_by;
    };

    void register_artifact(const std::string& name, std::size_t target_length);

    /// Writes `length` characters starting at `offset`. The span is clipped to
    /// the artifact's target length; `offset` may not skip past the content end.
    /// Zero-length writes are returned but not logged.
    WriteRecord write(const std::string& artifact, const AgentName& agent, Round round,
                      std::size_t offset, std::size_t length);

    const std::vector<WriteRecord>& log() const { return log_; }
    const std::map<std::string, Artifact>& artifacts() const { return artifacts_; }

    bool contains(const std::string& name) const { return artifacts_.contains(name); }
    ArtifactView view(const std::string& name) const;
    bool complete(const std::string& name) const;
    bool all_complete() const;

    std::size_t total_written() const;
    std::size_t surviving() const;

    // Running tallies, kept in step with the log.
    std::size_t overwrites() const { return overwrites_; }
    std::size_t concurrent_writes() const { return concurrent_.size(); }
    std::size_t wasted() const { return wasted_; }

private:
    std::size_t writer_index(const AgentName& agent);

    std::map<std::string, Artifact> artifacts_;
    std::vector<AgentName> writers_;
    std::vector<WriteRecord> log_;

    std::size_t overwrites_ = 0;
    std::size_t wasted_ = 0;
    std::map<std::pair<Round, std::string>, std::vector<AgentName>> round_writers_;
    std::vector<std::pair<Round, std::string>> concurrent_;
};

/// Writes that replace characters last written by a different agent in an
/// earlier round. Rebuilds attribution from the log alone.
std::size_t overwrite_events(std::span<const WriteRecord> log);

/// (round, artifact) pairs written by two or more distinct agents.
std::size_t concurrent_write_events(std::span<const WriteRecord> log);

/// Characters written that are no longer attributed in `final_state`.
std::size_t wasted_characters(std::span<const WriteRecord> log, const Workspace& final_state);

/// Rebuilds a workspace by replaying `log` over the given artifact targets.
Workspace replay_writes(const std::map<std::string, std::size_t>& targets,
                        std::span<const WriteRecord> log);

}  // namespace cograph
