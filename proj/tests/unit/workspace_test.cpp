#include "doctest.h"

#include "cograph/workspace.hpp"

using namespace cograph;

namespace {

WriteRecord rec(Round t, const AgentName& a, const std::string& f, std::size_t off, std::size_t len) {
    return {t, a, f, off, len, 0};
}

}  // namespace

TEST_CASE("write attribution") {
    Workspace ws;
    ws.register_artifact("f", 100);
    const auto first = ws.write("f", "w1", 1, 0, 100);
    CHECK(first.length == 100);
    CHECK(first.replaced == 0);
    CHECK(ws.view("f").content_length == 100);
    CHECK(ws.complete("f"));

    const auto second = ws.write("f", "w2", 2, 30, 40);
    CHECK(second.replaced == 40);
    const auto& chars = ws.artifacts().at("f").chars;
    std::size_t by_w2 = 0;
    for (const auto& c : chars) by_w2 += c.round == 2;
    CHECK(by_w2 == 40);
    CHECK(ws.total_written() == 140);
    CHECK(ws.surviving() == 100);
    CHECK(ws.wasted() == 40);
    CHECK(ws.overwrites() == 1);
}

TEST_CASE("zero-length writes are not logged") {
    Workspace ws;
    ws.register_artifact("f", 10);
    const auto r = ws.write("f", "w1", 1, 0, 0);
    CHECK(r.length == 0);
    CHECK(ws.log().empty());
    CHECK(ws.total_written() == 0);
}

TEST_CASE("writes clip to the target length") {
    Workspace ws;
    ws.register_artifact("f", 10);
    CHECK(ws.write("f", "w1", 1, 0, 25).length == 10);
    CHECK(ws.view("f").content_length == 10);
    CHECK(ws.all_complete());
}

TEST_CASE("overwrite events") {
    CHECK(overwrite_events(std::vector<WriteRecord>{}) == 0);
    const std::vector<WriteRecord> solo = {rec(1, "w1", "f", 0, 50), rec(2, "w1", "f", 0, 50)};
    CHECK(overwrite_events(solo) == 0);

    const std::vector<WriteRecord> rewrite = {rec(1, "w1", "f", 0, 100), rec(2, "w2", "f", 0, 100)};
    CHECK(overwrite_events(rewrite) == 1);

    // Same round: a collision, not an overwrite of earlier work.
    const std::vector<WriteRecord> same_round = {rec(3, "w1", "f", 0, 10), rec(3, "w2", "f", 0, 10)};
    CHECK(overwrite_events(same_round) == 0);
}

TEST_CASE("concurrent write events") {
    CHECK(concurrent_write_events(std::vector<WriteRecord>{rec(5, "w1", "f", 0, 1), rec(5, "w2", "f", 1, 1)}) == 1);
    CHECK(concurrent_write_events(std::vector<WriteRecord>{rec(5, "w1", "f", 0, 1), rec(6, "w2", "f", 1, 1)}) == 0);
    CHECK(concurrent_write_events(std::vector<WriteRecord>{rec(5, "w1", "f", 0, 1), rec(5, "w2", "f", 1, 1),
                                                           rec(5, "w3", "f", 2, 1)}) == 1);
    CHECK(concurrent_write_events(std::vector<WriteRecord>{rec(5, "w1", "f", 0, 1), rec(5, "w1", "f", 1, 1)}) == 0);
    CHECK(concurrent_write_events(std::vector<WriteRecord>{rec(5, "w1", "f", 0, 1), rec(5, "w2", "g", 0, 1)}) == 0);
}

TEST_CASE("wasted characters and conservation") {
    Workspace empty;
    CHECK(wasted_characters(empty.log(), empty) == 0);

    Workspace once;
    once.register_artifact("f", 100);
    once.write("f", "w1", 1, 0, 100);
    CHECK(wasted_characters(once.log(), once) == 0);

    Workspace twice;
    twice.register_artifact("f", 100);
    twice.write("f", "w1", 1, 0, 100);
    twice.write("f", "w2", 2, 0, 100);
    CHECK(wasted_characters(twice.log(), twice) == 100);
    CHECK(twice.total_written() == twice.surviving() + 100);
}

TEST_CASE("online tallies equal recomputation from the log") {
    Workspace ws;
    ws.register_artifact("f", 60);
    ws.register_artifact("g", 40);
    ws.write("f", "w1", 1, 0, 20);
    ws.write("f", "w2", 1, 10, 20);
    ws.write("g", "w1", 2, 0, 40);
    ws.write("f", "w3", 3, 0, 60);
    ws.write("g", "w3", 3, 5, 10);
    ws.write("g", "w3", 4, 5, 10);

    CHECK(ws.overwrites() == overwrite_events(ws.log()));
    CHECK(ws.concurrent_writes() == concurrent_write_events(ws.log()));
    CHECK(ws.wasted() == wasted_characters(ws.log(), ws));
    CHECK(ws.total_written() == ws.surviving() + ws.wasted());

    const auto rebuilt = replay_writes({{"f", 60}, {"g", 40}}, ws.log());
    CHECK(rebuilt.log() == ws.log());
    CHECK(rebuilt.surviving() == ws.surviving());
}
