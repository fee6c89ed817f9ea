#include "pottsforge/partition.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "pottsforge/union_find.hpp"

namespace pottsforge {

Partition::Partition(std::vector<std::vector<int>> blocks) : blocks_(std::move(blocks)) {
  for (auto& b : blocks_) {
    if (b.empty()) throw std::invalid_argument("partition block is empty");
    std::sort(b.begin(), b.end());
    ground_.insert(ground_.end(), b.begin(), b.end());
  }
  std::sort(ground_.begin(), ground_.end());
  if (std::adjacent_find(ground_.begin(), ground_.end()) != ground_.end()) {
    throw std::invalid_argument("partition blocks are not disjoint");
  }
  std::sort(blocks_.begin(), blocks_.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

Partition Partition::finest(std::vector<int> ground) {
  std::vector<std::vector<int>> blocks;
  blocks.reserve(ground.size());
  for (int x : ground) blocks.push_back({x});
  return Partition(std::move(blocks));
}

Partition Partition::coarsest(std::vector<int> ground) {
  if (ground.empty()) return Partition();
  return Partition(std::vector<std::vector<int>>{std::move(ground)});
}

Partition Partition::from_labels(const std::vector<int>& ground, const std::vector<int>& labels) {
  if (ground.size() != labels.size()) throw std::invalid_argument("label count mismatch");
  std::map<int, std::vector<int>> by_label;
  for (std::size_t i = 0; i < ground.size(); ++i) by_label[labels[i]].push_back(ground[i]);
  std::vector<std::vector<int>> blocks;
  blocks.reserve(by_label.size());
  for (auto& [label, block] : by_label) blocks.push_back(std::move(block));
  return Partition(std::move(blocks));
}

bool Partition::contains(int x) const { return std::binary_search(ground_.begin(), ground_.end(), x); }

int Partition::block_of(int x) const {
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (std::binary_search(blocks_[i].begin(), blocks_[i].end(), x)) return static_cast<int>(i);
  }
  return -1;
}

bool Partition::same_block(int a, int b) const {
  int ba = block_of(a);
  return ba >= 0 && ba == block_of(b);
}

Partition Partition::extended(const std::vector<int>& ground) const {
  std::vector<std::vector<int>> blocks = blocks_;
  std::vector<int> sorted = ground;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (int x : sorted) {
    if (!contains(x)) blocks.push_back({x});
  }
  return Partition(std::move(blocks));
}

bool Partition::refines(const Partition& coarser) const {
  if (ground_ != coarser.ground_) return false;
  for (const auto& b : blocks_) {
    int target = coarser.block_of(b.front());
    for (int x : b) {
      if (coarser.block_of(x) != target) return false;
    }
  }
  return true;
}

Partition join(const Partition& a, const Partition& b) {
  if (a.ground() != b.ground()) throw std::invalid_argument("join: partitions have different ground sets");
  const auto& ground = a.ground();
  auto index = [&](int x) {
    return static_cast<int>(std::lower_bound(ground.begin(), ground.end(), x) - ground.begin());
  };
  UnionFind uf(static_cast<int>(ground.size()));
  for (const auto* p : {&a, &b}) {
    for (const auto& block : p->blocks()) {
      for (std::size_t i = 1; i < block.size(); ++i) uf.unite(index(block[0]), index(block[i]));
    }
  }
  std::vector<int> labels(ground.size());
  for (std::size_t i = 0; i < ground.size(); ++i) labels[i] = uf.find(static_cast<int>(i));
  return Partition::from_labels(ground, labels);
}

Partition join_extended(const Partition& a, const Partition& b) {
  std::vector<int> ground = a.ground();
  ground.insert(ground.end(), b.ground().begin(), b.ground().end());
  return join(a.extended(ground), b.extended(ground));
}

namespace {

void restricted_growth(const std::vector<int>& ground, std::vector<int>& labels, std::size_t pos, int used,
                       std::vector<Partition>& out) {
  if (pos == ground.size()) {
    out.push_back(Partition::from_labels(ground, labels));
    return;
  }
  for (int label = 0; label <= used; ++label) {
    labels[pos] = label;
    restricted_growth(ground, labels, pos + 1, std::max(used, label + 1), out);
  }
}

}  // namespace

std::vector<Partition> all_partitions(const std::vector<int>& ground) {
  std::vector<Partition> out;
  if (ground.empty()) {
    out.emplace_back();
    return out;
  }
  std::vector<int> labels(ground.size(), 0);
  restricted_growth(ground, labels, 0, 0, out);
  return out;
}

std::size_t PartitionHash::operator()(const Partition& p) const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& b : p.blocks()) {
    for (int x : b) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ULL;
    h = (h ^ 0xffu) * 0x100000001b3ULL;
  }
  return h;
}

}  // namespace pottsforge
