#include "pottsforge/components.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pottsforge/union_find.hpp"

namespace pottsforge {

namespace {

Components from_union_find(int n, UnionFind& uf) {
  std::vector<int> ground(n);
  std::iota(ground.begin(), ground.end(), 0);
  std::vector<int> labels(n);
  for (int v = 0; v < n; ++v) labels[v] = uf.find(v);
  return {uf.blocks(), Partition::from_labels(ground, labels)};
}

}  // namespace

Components connected_components(const WeightedGraph& g, const std::vector<int>& edge_subset) {
  UnionFind uf(g.vertex_count());
  for (int id : edge_subset) {
    if (id < 0 || id >= g.edge_count()) throw std::out_of_range("edge id out of range: " + std::to_string(id));
    uf.unite(g.edge(id).u, g.edge(id).v);
  }
  return from_union_find(g.vertex_count(), uf);
}

Components hyper_components(const WeightedHypergraph& h, const std::vector<int>& subset) {
  UnionFind uf(h.vertex_count());
  for (int id : subset) {
    if (id < 0 || id >= h.edge_count()) throw std::out_of_range("hyperedge id out of range: " + std::to_string(id));
    const auto& f = h.hyperedge(id);
    for (std::size_t i = 1; i < f.size(); ++i) uf.unite(f[0], f[i]);
  }
  return from_union_find(h.vertex_count(), uf);
}

std::vector<int> component_labels(int n, const std::vector<Edge>& edges, const std::vector<char>& present) {
  UnionFind uf(n);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (present[i]) uf.unite(edges[i].u, edges[i].v);
  }
  std::vector<int> labels(n);
  for (int v = 0; v < n; ++v) labels[v] = uf.find(v);
  return labels;
}

std::vector<int> component_sizes(int n, const std::vector<Edge>& edges, const std::vector<char>& present) {
  std::vector<int> labels = component_labels(n, edges, present);
  std::vector<int> count(n, 0);
  for (int l : labels) ++count[l];
  std::vector<int> sizes;
  for (int c : count) {
    if (c > 0) sizes.push_back(c);
  }
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  return sizes;
}

}  // namespace pottsforge
