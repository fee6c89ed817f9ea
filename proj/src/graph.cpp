#include "pottsforge/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pottsforge {

namespace {

void check_weights(const std::vector<BigRational>& weights, std::size_t expected) {
  if (weights.size() != expected) {
    throw std::invalid_argument("weight count " + std::to_string(weights.size()) + " does not match edge count " +
                                std::to_string(expected));
  }
  for (const auto& w : weights) {
    if (w < 0) throw std::invalid_argument("negative edge weight " + to_fraction_string(w));
  }
}

}  // namespace

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges, std::vector<BigRational> weights)
    : n_(n), edges_(std::move(edges)), weights_(std::move(weights)) {
  if (n_ < 0) throw std::invalid_argument("negative vertex count");
  check_weights(weights_, edges_.size());
  for (const auto& e : edges_) {
    if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_) {
      throw std::invalid_argument("edge endpoint out of range: (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    }
    if (e.u == e.v) throw std::invalid_argument("loop at vertex " + std::to_string(e.u));
  }
}

WeightedGraph WeightedGraph::uniform(int n, std::vector<Edge> edges, const BigRational& weight) {
  std::vector<BigRational> w(edges.size(), weight);
  return WeightedGraph(n, std::move(edges), std::move(w));
}

WeightedGraph WeightedGraph::reweighted(std::vector<BigRational> weights) const {
  return WeightedGraph(n_, edges_, std::move(weights));
}

WeightedGraph WeightedGraph::induced(const std::vector<int>& vertices, std::vector<int>* edge_map) const {
  std::vector<int> index(n_, -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    int v = vertices[i];
    if (v < 0 || v >= n_) throw std::invalid_argument("induced: vertex out of range");
    if (index[v] >= 0) throw std::invalid_argument("induced: repeated vertex");
    index[v] = static_cast<int>(i);
  }
  std::vector<Edge> kept;
  std::vector<BigRational> w;
  if (edge_map) edge_map->clear();
  for (int id = 0; id < edge_count(); ++id) {
    const Edge& e = edges_[id];
    if (index[e.u] >= 0 && index[e.v] >= 0) {
      kept.push_back({index[e.u], index[e.v]});
      w.push_back(weights_[id]);
      if (edge_map) edge_map->push_back(id);
    }
  }
  return WeightedGraph(static_cast<int>(vertices.size()), std::move(kept), std::move(w));
}

WeightedHypergraph::WeightedHypergraph(int n, std::vector<std::vector<int>> hyperedges,
                                       std::vector<BigRational> weights)
    : n_(n), hyperedges_(std::move(hyperedges)), weights_(std::move(weights)) {
  if (n_ < 0) throw std::invalid_argument("negative vertex count");
  check_weights(weights_, hyperedges_.size());
  for (const auto& f : hyperedges_) {
    if (f.empty()) throw std::invalid_argument("empty hyperedge");
    for (int v : f) {
      if (v < 0 || v >= n_) throw std::invalid_argument("hyperedge vertex out of range: " + std::to_string(v));
    }
  }
}

WeightedHypergraph WeightedHypergraph::uniform(int n, std::vector<std::vector<int>> hyperedges,
                                               const BigRational& weight) {
  std::vector<BigRational> w(hyperedges.size(), weight);
  return WeightedHypergraph(n, std::move(hyperedges), std::move(w));
}

WeightedHypergraph WeightedHypergraph::from_graph(const WeightedGraph& g) {
  std::vector<std::vector<int>> f;
  f.reserve(g.edges().size());
  for (const auto& e : g.edges()) f.push_back({e.u, e.v});
  return WeightedHypergraph(g.vertex_count(), std::move(f), g.weights());
}

std::optional<int> WeightedHypergraph::uniform_arity() const {
  if (hyperedges_.empty()) return std::nullopt;
  std::size_t k = hyperedges_.front().size();
  for (const auto& f : hyperedges_) {
    if (f.size() != k) return std::nullopt;
  }
  return static_cast<int>(k);
}

BipartiteGraph::BipartiteGraph(int left, int right, std::vector<std::pair<int, int>> edges)
    : left_(left), right_(right), edges_(std::move(edges)) {
  if (left_ < 0 || right_ < 0) throw std::invalid_argument("negative side size");
  for (const auto& [u, v] : edges_) {
    if (u < 0 || u >= left_ || v < 0 || v >= right_) {
      throw std::invalid_argument("bipartite edge out of range: (" + std::to_string(u) + "," + std::to_string(v) + ")");
    }
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw std::invalid_argument("duplicate bipartite edge");
  }
}

std::vector<int> BipartiteGraph::right_neighbours(int v) const {
  std::vector<int> out;
  for (const auto& [a, b] : edges_) {
    if (b == v) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int BipartiteGraph::right_degree(int v) const {
  return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [v](const auto& e) { return e.second == v; }));
}

int BipartiteGraph::max_right_degree() const {
  std::vector<int> deg(right_, 0);
  for (const auto& e : edges_) ++deg[e.second];
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

}  // namespace pottsforge
