#pragma once

// Global taxon indexing and cluster bit-string machinery: every cluster of
// every input tree becomes a bit-string over the shared label space, and the
// merged list is deduplicated by a byte-wise LSD radix sort followed by one
// linear scan.

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bitstring.hpp"
#include "tree.hpp"

namespace phylotag {

// Bijection between taxon names and indices 0..n-1. Indices follow the
// lexicographic order of the names.
class LabelSpace {
 public:
  LabelSpace() = default;

  explicit LabelSpace(std::vector<std::string> sorted_names)
      : backward_(std::move(sorted_names)) {
    for (int i = 0; i < int(backward_.size()); ++i) {
      forward_.emplace(backward_[i], i);
    }
    if (forward_.size() != backward_.size()) {
      throw std::invalid_argument("label space requires distinct names");
    }
  }

  int size() const { return int(backward_.size()); }

  int index_of(const std::string& name) const {
    auto it = forward_.find(name);
    if (it == forward_.end()) {
      throw std::invalid_argument("unknown taxon name: " + name);
    }
    return it->second;
  }

  bool contains(const std::string& name) const {
    return forward_.count(name) > 0;
  }

  const std::string& name_of(int index) const { return backward_.at(index); }
  const std::vector<std::string>& names() const { return backward_; }

  BitString encode(const std::set<std::string>& cluster) const {
    BitString bits(size());
    for (const auto& name : cluster) {
      bits.set(index_of(name));
    }
    return bits;
  }

  std::set<std::string> decode(const BitString& bits) const {
    std::set<std::string> cluster;
    for (int i = 0; i < bits.size(); ++i) {
      if (bits.test(i)) cluster.insert(backward_[i]);
    }
    return cluster;
  }

 private:
  std::unordered_map<std::string, int> forward_;
  std::vector<std::string> backward_;
};

inline LabelSpace build_label_space(const TreeCollection& collection) {
  if (collection.trees.empty()) {
    throw std::invalid_argument("empty tree collection");
  }
  std::set<std::string> union_names;
  for (const auto& tree : collection.trees) {
    for (int v = 0; v < tree.vertex_count(); ++v) {
      if (tree.is_leaf(v)) union_names.insert(tree.leaf_name(v));
    }
  }
  return LabelSpace(
      std::vector<std::string>(union_names.begin(), union_names.end()));
}

// One (vertex, bit-string) entry per vertex in post-order: a leaf gets the
// single bit of its taxon, an internal vertex the OR of its children.
inline std::vector<std::pair<int, BitString>> collect_bitstrings(
    const PhyloTree& tree, const LabelSpace& space) {
  std::vector<BitString> bits(tree.vertex_count());
  std::vector<std::pair<int, BitString>> out;
  out.reserve(tree.vertex_count());
  for (int v : tree.postorder()) {
    if (tree.is_leaf(v)) {
      bits[v] = BitString::singleton(space.size(), space.index_of(tree.leaf_name(v)));
    } else {
      BitString acc(space.size());
      for (int c : tree.children(v)) {
        acc |= bits[c];
      }
      bits[v] = std::move(acc);
    }
    out.emplace_back(v, bits[v]);
  }
  return out;
}

// Sorts ascending and drops duplicates. LSD radix over 8-bit digits; each
// pass is a stable counting sort, so after the last pass the permutation is
// fully ordered.
inline std::vector<BitString> sort_dedup(const std::vector<BitString>& all) {
  if (all.empty()) return {};
  const int width = all.front().size();
  for (const auto& b : all) {
    if (b.size() != width) {
      throw std::invalid_argument("sort_dedup requires uniform width");
    }
  }
  const size_t n = all.size();
  const int n_bytes = all.front().byte_width();
  std::vector<uint32_t> order(n), scratch(n);
  for (size_t i = 0; i < n; ++i) order[i] = uint32_t(i);
  for (int byte = 0; byte < n_bytes; ++byte) {
    uint32_t counts[257] = {0};
    for (size_t i = 0; i < n; ++i) {
      ++counts[all[order[i]].byte(byte) + 1];
    }
    for (int d = 0; d < 256; ++d) counts[d + 1] += counts[d];
    for (size_t i = 0; i < n; ++i) {
      scratch[counts[all[order[i]].byte(byte)]++] = order[i];
    }
    order.swap(scratch);
  }
  std::vector<BitString> unique;
  for (size_t i = 0; i < n; ++i) {
    const BitString& b = all[order[i]];
    if (unique.empty() || unique.back() != b) {
      unique.push_back(b);
    }
  }
  return unique;
}

}  // namespace phylotag
