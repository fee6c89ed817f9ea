#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "pottsforge/graph.hpp"

namespace pottsforge {

using Instance = std::variant<WeightedGraph, WeightedHypergraph, BipartiteGraph>;

/// Line-oriented instance format. `#` starts a comment.
///
///   graph <n> <m>            then m lines:  u v <gamma>
///   hypergraph <n> <m>       then m lines:  k v1 ... vk <gamma>
///   bipartite <nL> <nR> <m>  then m lines:  u v
///
/// Weights are written as p/q; parsing also accepts integers and decimals.
Instance parse_instance(std::istream& in);
Instance parse_instance(const std::string& text);
Instance read_instance_file(const std::string& path);

std::string serialize(const WeightedGraph& g);
std::string serialize(const WeightedHypergraph& h);
std::string serialize(const BipartiteGraph& b);
std::string serialize(const Instance& instance);

void write_instance_file(const std::string& path, const Instance& instance);

}  // namespace pottsforge
