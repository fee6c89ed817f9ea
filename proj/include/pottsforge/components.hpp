#pragma once

#include <vector>

#include "pottsforge/graph.hpp"
#include "pottsforge/partition.hpp"

namespace pottsforge {

struct Components {
  int count = 0;
  Partition partition;
};

/// kappa(V, A) and the induced vertex partition for edge subset A (edge ids).
Components connected_components(const WeightedGraph& g, const std::vector<int>& edge_subset);

/// Hyperedge connectivity: u ~ v if some chain of selected hyperedges links
/// them with consecutive hyperedges intersecting.
Components hyper_components(const WeightedHypergraph& h, const std::vector<int>& subset);

/// Component label (smallest vertex) per vertex, for an edge indicator.
std::vector<int> component_labels(int n, const std::vector<Edge>& edges, const std::vector<char>& present);

/// Sizes of all components, descending.
std::vector<int> component_sizes(int n, const std::vector<Edge>& edges, const std::vector<char>& present);

}  // namespace pottsforge
