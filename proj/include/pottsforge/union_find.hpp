#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace pottsforge {

/// Union by size without path compression, so every union can be undone in
/// LIFO order. Tracks the current number of blocks.
class RollbackUnionFind {
 public:
  explicit RollbackUnionFind(int n = 0) { reset(n); }

  void reset(int n) {
    parent_.resize(n);
    std::iota(parent_.begin(), parent_.end(), 0);
    size_.assign(n, 1);
    history_.clear();
    blocks_ = n;
  }

  int size() const { return static_cast<int>(parent_.size()); }
  int blocks() const { return blocks_; }

  int find(int x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }

  bool same(int a, int b) const { return find(a) == find(b); }

  /// Always pushes one history record (possibly a no-op) so callers can pair
  /// every unite() with exactly one undo().
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) {
      history_.push_back({-1, -1});
      return false;
    }
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    history_.push_back({a, b});
    --blocks_;
    return true;
  }

  void undo() {
    auto [a, b] = history_.back();
    history_.pop_back();
    if (a < 0) return;
    parent_[b] = b;
    size_[a] -= size_[b];
    ++blocks_;
  }

  std::size_t checkpoint() const { return history_.size(); }
  void rollback(std::size_t mark) {
    while (history_.size() > mark) undo();
  }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
  std::vector<std::pair<int, int>> history_;
  int blocks_ = 0;
};

/// Plain union-find with path halving, for one-shot component labelling.
class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n), blocks_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    --blocks_;
    return true;
  }
  int blocks() const { return blocks_; }

 private:
  std::vector<int> parent_;
  int blocks_;
};

}  // namespace pottsforge
