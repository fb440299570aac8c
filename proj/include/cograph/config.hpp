#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cograph/baselines.hpp"
#include "cograph/scenario.hpp"

namespace cograph {

/// Configuration problem; `field()` is a dotted path such as "scenario.roots".
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& why)
        : std::runtime_error(field + ": " + why), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct RunConfig {
    ProtocolConfig protocol;
    ScenarioSpec scenario;
    std::vector<Mode> modes{Mode::latte};
    int repetitions = 10;
    std::vector<std::uint64_t> seeds;  // one per repetition; defaults to scenario.seed + i
    std::string output_dir;            // empty: take it from the environment or "out"
    bool export_graph_evolution = false;
    bool rebroadcast_hints = true;

    /// Seed of repetition `i`.
    std::uint64_t seed_at(int i) const;
    ScenarioSpec scenario_for(int i) const;
    ModeConfig mode_for(Mode m) const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace cograph
