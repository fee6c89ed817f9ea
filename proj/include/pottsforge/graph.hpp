#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pottsforge/rational.hpp"

namespace pottsforge {

struct Edge {
  int u = 0;
  int v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Multigraph with one rational weight per edge. Edge ids are dense
/// 0..m-1, so parallel edges carry independent weights. Loops are rejected.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(int n, std::vector<Edge> edges, std::vector<BigRational> weights);

  static WeightedGraph uniform(int n, std::vector<Edge> edges, const BigRational& weight);

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int id) const { return edges_.at(id); }
  const std::vector<Edge>& edges() const { return edges_; }
  const BigRational& weight(int id) const { return weights_.at(id); }
  const std::vector<BigRational>& weights() const { return weights_; }

  /// Same edge structure, new weights.
  WeightedGraph reweighted(std::vector<BigRational> weights) const;

  /// Subgraph induced by `vertices`; vertex i of the result is vertices[i].
  /// `edge_map`, if given, receives the original id of each kept edge.
  WeightedGraph induced(const std::vector<int>& vertices, std::vector<int>* edge_map = nullptr) const;

  friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<BigRational> weights_;
};

/// Hypergraph whose hyperedges are non-empty vertex multisets.
class WeightedHypergraph {
 public:
  WeightedHypergraph() = default;
  WeightedHypergraph(int n, std::vector<std::vector<int>> hyperedges, std::vector<BigRational> weights);

  static WeightedHypergraph uniform(int n, std::vector<std::vector<int>> hyperedges, const BigRational& weight);
  static WeightedHypergraph from_graph(const WeightedGraph& g);

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(hyperedges_.size()); }
  const std::vector<int>& hyperedge(int id) const { return hyperedges_.at(id); }
  const std::vector<std::vector<int>>& hyperedges() const { return hyperedges_; }
  const BigRational& weight(int id) const { return weights_.at(id); }
  const std::vector<BigRational>& weights() const { return weights_; }

  /// Common hyperedge size if every hyperedge has the same size.
  std::optional<int> uniform_arity() const;

  friend bool operator==(const WeightedHypergraph&, const WeightedHypergraph&) = default;

 private:
  int n_ = 0;
  std::vector<std::vector<int>> hyperedges_;
  std::vector<BigRational> weights_;
};

/// Simple bipartite graph B = (U, V, E); edges are (u in U, v in V) pairs,
/// stored sorted and duplicate-free.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;
  BipartiteGraph(int left, int right, std::vector<std::pair<int, int>> edges);

  int left_count() const { return left_; }
  int right_count() const { return right_; }
  int vertex_count() const { return left_ + right_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  /// Neighbours in U of right vertex v, ascending.
  std::vector<int> right_neighbours(int v) const;
  int right_degree(int v) const;
  int max_right_degree() const;

  friend bool operator==(const BipartiteGraph&, const BipartiteGraph&) = default;

 private:
  int left_ = 0;
  int right_ = 0;
  std::vector<std::pair<int, int>> edges_;
};

}  // namespace pottsforge
