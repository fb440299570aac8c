#pragma once

#include <string>

#include "cograph/graph.hpp"

namespace cograph {

/// One JSON record per node, canonical order, newline-terminated.
std::string graph_jsonl(const CoordinationGraph& g);
CoordinationGraph graph_from_jsonl(const std::string& text);

/// Graphviz document; statuses become node attributes and fill colours.
std::string graph_dot(const CoordinationGraph& g, const std::string& name = "G");

}  // namespace cograph
