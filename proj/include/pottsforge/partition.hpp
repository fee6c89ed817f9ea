#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace pottsforge {

/// Set partition of a finite vertex list, kept canonical: elements sorted
/// within blocks, blocks ordered by their minimum element. Two partitions of
/// the same ground set compare equal iff they have the same blocks.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<std::vector<int>> blocks);

  static Partition finest(std::vector<int> ground);
  static Partition coarsest(std::vector<int> ground);
  /// Block of ground[i] is identified by labels[i].
  static Partition from_labels(const std::vector<int>& ground, const std::vector<int>& labels);

  const std::vector<int>& ground() const { return ground_; }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }

  bool contains(int x) const;
  bool same_block(int a, int b) const;

  /// Adds every element of `ground` not already present as a singleton.
  Partition extended(const std::vector<int>& ground) const;

  /// True when every block of *this lies inside a block of `coarser`.
  bool refines(const Partition& coarser) const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend bool operator<(const Partition& a, const Partition& b) { return a.blocks_ < b.blocks_; }

 private:
  int block_of(int x) const;

  std::vector<int> ground_;
  std::vector<std::vector<int>> blocks_;
};

/// Finest common coarsening. Both partitions must have the same ground set;
/// use join_extended for partitions of different subsets.
Partition join(const Partition& a, const Partition& b);

/// Extends both operands with singletons to the union of their grounds, then
/// joins.
Partition join_extended(const Partition& a, const Partition& b);

/// Every partition of `ground`, in a deterministic order.
std::vector<Partition> all_partitions(const std::vector<int>& ground);

struct PartitionHash {
  std::size_t operator()(const Partition& p) const;
};

}  // namespace pottsforge
