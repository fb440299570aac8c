#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cograph/graph.hpp"
#include "cograph/mutation.hpp"
#include "cograph/workspace.hpp"

namespace cograph {

struct RunHeaderRecord {
    std::string mode;
    std::uint64_t seed = 0;
    std::vector<AgentId> team;
    int max_rounds = 0;
    int heartbeat_threshold = 0;
    std::map<std::string, std::size_t> artifacts;  // name -> target length
};

struct PlanTurnRecord {
    int turn = 0;
    std::size_t ops = 0;
};

struct HeartbeatRecord {
    Round round = 0;
    AgentName worker;
    NodeId node;
};

enum class DispatchReason { lead, busy, offer, all };
const char* to_string(DispatchReason r);

struct DispatchRecord {
    Round round = 0;
    AgentName agent;
    DispatchReason reason = DispatchReason::all;
    NodeId offer;
};

struct OpRecord {
    Round round = 0;
    MutationOp op;
    OpOutcome outcome;
};

/// Static-mode start of an assigned node.
struct StartRecord {
    Round round = 0;
    AgentName worker;
    NodeId node;
    OpOutcome outcome;
};

struct PromoteRecord {
    Round round = 0;
    NodeId node;
    NodeId parent;
    PromoteStatus status = PromoteStatus::promoted;
    std::uint64_t graph_version = 0;
};

struct MessageRecord {
    Round round = 0;
    AgentName from;
    AgentName to;
    std::string text;
    bool system = false;
};

struct RoundRecord {
    Round round = 0;
    std::size_t frontier = 0;
    std::size_t idle_workers = 0;
    std::size_t offers = 0;
    std::vector<AgentName> dispatched;
    std::vector<AgentName> acted;
    std::size_t nodes = 0;
    std::uint64_t graph_hash = 0;
    bool terminated = false;
};

struct RunEndRecord {
    bool completed = false;
    int rounds_used = 0;
    std::uint64_t graph_hash = 0;
    std::string error;
};

using TraceRecord = std::variant<RunHeaderRecord, PlanTurnRecord, HeartbeatRecord, DispatchRecord,
                                 OpRecord, StartRecord, PromoteRecord, WriteRecord, MessageRecord,
                                 RoundRecord, RunEndRecord>;

/// Append-only event log of one run.
class Trace {
public:
    void append(TraceRecord r) { records_.push_back(std::move(r)); }
    const std::vector<TraceRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }

    template <typename T>
    std::vector<T> all() const {
        std::vector<T> out;
        for (const auto& r : records_)
            if (const T* p = std::get_if<T>(&r)) out.push_back(*p);
        return out;
    }

    const RunHeaderRecord* header() const;
    const RunEndRecord* end() const;
    std::vector<WriteRecord> writes() const { return all<WriteRecord>(); }
    /// Highest round recorded by a RoundRecord; 0 if none.
    Round last_round() const;

private:
    std::vector<TraceRecord> records_;
};

std::string to_jsonl(const TraceRecord& r);
TraceRecord record_from_jsonl(const std::string& line);

void write_trace(std::ostream& out, const Trace& trace);
Trace read_trace(std::istream& in);

/// Rebuilds the coordination graph from committed events (accepted ops,
/// starts and promotions) with round <= `upto`; all rounds if unset.
CoordinationGraph replay(const Trace& trace, std::optional<Round> upto = std::nullopt);

/// Characters an op carries as agent output (ids, titles, descriptions).
std::size_t op_chars(const MutationOp& op);

}  // namespace cograph
