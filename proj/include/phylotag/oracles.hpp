#pragma once

// Brute-force reference implementations used to cross-check the graph-based
// algorithms, plus a deterministic random tree generator. These work
// directly on trees and name sets and never touch the TAG machinery.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "compat.hpp"
#include "tree.hpp"

namespace phylotag {

namespace detail {

struct TopoNode {
  std::vector<TopoNode> kids;
  int leaf = -1;
};

inline void topo_to_scratch(const TopoNode& node,
                            const std::vector<std::string>& leaves,
                            std::vector<std::vector<int>>& children,
                            std::vector<std::string>& labels, int& id) {
  int self = id++;
  children.emplace_back();
  labels.emplace_back(node.leaf >= 0 ? leaves[node.leaf] : "");
  for (const auto& kid : node.kids) {
    children[self].push_back(id);
    topo_to_scratch(kid, leaves, children, labels, id);
  }
}

inline PhyloTree topo_to_tree(const TopoNode& node,
                              const std::vector<std::string>& leaves) {
  std::vector<std::vector<int>> children;
  std::vector<std::string> labels;
  int id = 0;
  topo_to_scratch(node, leaves, children, labels, id);
  return PhyloTree(std::move(children), std::move(labels), 0);
}

// Enumerates rooted trees on the index set `items`: every partition of the
// items into at least two blocks, combined with every choice of subtree per
// block. Returns false if the visitor stopped the walk.
inline bool enum_topologies(const std::vector<int>& items,
                            const std::function<bool(TopoNode&&)>& visit) {
  if (items.size() == 1) {
    TopoNode leaf;
    leaf.leaf = items.front();
    return visit(std::move(leaf));
  }
  const int m = int(items.size());
  // Restricted growth strings enumerate the set partitions once each.
  std::vector<int> assign(m, 0);
  while (true) {
    int n_blocks = *std::max_element(assign.begin(), assign.end()) + 1;
    if (n_blocks >= 2) {
      std::vector<std::vector<int>> blocks(n_blocks);
      for (int i = 0; i < m; ++i) blocks[assign[i]].push_back(items[i]);

      std::vector<TopoNode> chosen(n_blocks);
      std::function<bool(int)> product = [&](int b) -> bool {
        if (b == n_blocks) {
          TopoNode node;
          node.kids = chosen;
          return visit(std::move(node));
        }
        return enum_topologies(blocks[b], [&](TopoNode&& sub) {
          chosen[b] = std::move(sub);
          return product(b + 1);
        });
      };
      if (!product(0)) return false;
    }
    // Next restricted growth string.
    int i = m - 1;
    while (i > 0) {
      int cap = *std::max_element(assign.begin(), assign.begin() + i) + 1;
      if (assign[i] < cap) {
        ++assign[i];
        break;
      }
      assign[i] = 0;
      --i;
    }
    if (i == 0) break;
  }
  return true;
}

}  // namespace detail

// Walks every rooted phylogenetic tree (multifurcations included) on the
// given leaf names. The visitor returns false to stop early; the function
// returns false iff it was stopped.
inline bool for_each_topology(const std::vector<std::string>& leaves,
                              const std::function<bool(const PhyloTree&)>& visit) {
  if (leaves.empty() || leaves.size() > 8) {
    throw std::invalid_argument(
        "topology enumeration supports 1 to 8 leaves");
  }
  std::vector<int> items(leaves.size());
  std::iota(items.begin(), items.end(), 0);
  return detail::enum_topologies(items, [&](detail::TopoNode&& topo) {
    return visit(detail::topo_to_tree(topo, leaves));
  });
}

class TopologyEnumerator {
 public:
  explicit TopologyEnumerator(std::vector<std::string> leaves)
      : leaves_(std::move(leaves)) {}

  uint64_t count() const {
    uint64_t n = 0;
    for_each_topology(leaves_, [&](const PhyloTree&) {
      ++n;
      return true;
    });
    return n;
  }

  void for_each(const std::function<bool(const PhyloTree&)>& visit) const {
    for_each_topology(leaves_, visit);
  }

 private:
  std::vector<std::string> leaves_;
};

enum class ConsensusMode { strict, majority };

// Consensus by direct cluster counting: selects the clusters occurring in
// all trees (strict) or in more than half of them (majority) and assembles
// the laminar family top-down by cardinality.
inline PhyloTree naive_consensus(const TreeCollection& collection,
                                 ConsensusMode mode) {
  if (collection.trees.empty()) {
    throw std::invalid_argument("empty tree collection");
  }
  if (!common_leaf_set(collection)) {
    throw std::invalid_argument(
        "input trees do not share a common leaf set");
  }
  const int k = collection.size();
  std::map<std::set<std::string>, int> counts;
  for (const auto& tree : collection.trees) {
    for (const auto& cluster : clusters_of(tree)) {
      ++counts[cluster];
    }
  }
  std::vector<std::set<std::string>> selected;
  for (const auto& [cluster, count] : counts) {
    bool keep = mode == ConsensusMode::strict ? count == k : 2 * count > k;
    if (keep) selected.push_back(cluster);
  }
  std::sort(selected.begin(), selected.end(),
            [](const std::set<std::string>& a, const std::set<std::string>& b) {
              return a.size() > b.size();
            });

  // selected[0] is the full leaf set; every other cluster's parent is the
  // smallest selected cluster strictly containing it.
  std::vector<std::vector<int>> children(selected.size());
  std::vector<std::string> labels(selected.size());
  for (int i = 1; i < int(selected.size()); ++i) {
    int parent = -1;
    for (int j = i - 1; j >= 0; --j) {
      if (selected[j].size() > selected[i].size() &&
          std::includes(selected[j].begin(), selected[j].end(),
                        selected[i].begin(), selected[i].end())) {
        parent = j;
        break;
      }
    }
    children[parent].push_back(i);
  }
  for (int i = 0; i < int(selected.size()); ++i) {
    if (selected[i].size() == 1) labels[i] = *selected[i].begin();
  }
  // The single-taxon collection has one selected cluster, a labeled root.
  return PhyloTree(std::move(children), std::move(labels), 0);
}

// First enumerated topology on the union leaf set that displays every
// input; empty if none does.
inline std::optional<PhyloTree> brute_compat(const TreeCollection& collection) {
  std::set<std::string> union_names;
  for (const auto& tree : collection.trees) {
    for (const auto& name : tree.taxa()) union_names.insert(name);
  }
  if (union_names.size() > 6) {
    throw std::invalid_argument(
        "brute-force compatibility supports at most 6 taxa");
  }
  std::vector<std::string> leaves(union_names.begin(), union_names.end());
  std::optional<PhyloTree> found;
  for_each_topology(leaves, [&](const PhyloTree& candidate) {
    for (const auto& tree : collection.trees) {
      if (!displays(candidate, tree)) return true;
    }
    found = candidate;
    return false;
  });
  return found;
}

namespace detail {

inline std::vector<std::string> taxon_pool(int n) {
  int width = 1;
  for (int v = n; v >= 10; v /= 10) ++width;
  std::vector<std::string> names;
  names.reserve(n);
  for (int i = 1; i <= n; ++i) {
    std::string digits = std::to_string(i);
    names.push_back("t" + std::string(width - digits.size(), '0') + digits);
  }
  return names;
}

inline PhyloTree random_tree(const std::vector<std::string>& leaves,
                             bool resolved, std::mt19937_64& rng) {
  std::vector<std::vector<int>> children;
  std::vector<std::string> labels;
  std::vector<int> open;
  for (const auto& name : leaves) {
    children.emplace_back();
    labels.push_back(name);
    open.push_back(int(children.size()) - 1);
  }
  if (open.size() == 1) {
    return PhyloTree(std::move(children), std::move(labels), open.front());
  }
  while (open.size() > 1) {
    size_t arity = 2;
    if (!resolved && open.size() > 2) {
      std::uniform_int_distribution<size_t> extra(0, open.size() - 2);
      if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
        arity = 2 + extra(rng);
      }
    }
    std::vector<int> picked;
    for (size_t i = 0; i < arity; ++i) {
      std::uniform_int_distribution<size_t> pick(0, open.size() - 1);
      size_t at = pick(rng);
      picked.push_back(open[at]);
      open[at] = open.back();
      open.pop_back();
    }
    children.push_back(std::move(picked));
    labels.emplace_back();
    open.push_back(int(children.size()) - 1);
  }
  return PhyloTree(std::move(children), std::move(labels), open.front());
}

}  // namespace detail

// Deterministic random collection: k trees over a pool of n taxa. With
// partial_leaves each tree draws a subset of at least two taxa, otherwise
// all trees use the full pool.
inline TreeCollection random_collection(uint64_t seed, int n, int k,
                                        bool resolved,
                                        bool partial_leaves = false) {
  if (n < 2 || k < 1) {
    throw std::invalid_argument("random_collection requires n >= 2, k >= 1");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::string> pool = detail::taxon_pool(n);
  TreeCollection collection;
  for (int t = 0; t < k; ++t) {
    std::vector<std::string> leaves;
    if (partial_leaves) {
      std::uniform_int_distribution<int> coin(0, 3);
      for (const auto& name : pool) {
        if (coin(rng) != 0) leaves.push_back(name);  // keep with p = 3/4
      }
      while (leaves.size() < 2) {
        const std::string& name =
            pool[std::uniform_int_distribution<size_t>(0, pool.size() - 1)(rng)];
        if (std::find(leaves.begin(), leaves.end(), name) == leaves.end()) {
          leaves.push_back(name);
        }
      }
      std::sort(leaves.begin(), leaves.end());
    } else {
      leaves = pool;
    }
    collection.trees.push_back(detail::random_tree(leaves, resolved, rng));
  }
  return collection;
}

}  // namespace phylotag
