#pragma once

// Consensus trees computed from the TAG in a single pass. Nodes whose
// cluster occurs in at least `threshold` trees are kept; every kept node is
// hooked to its minimum-cardinality kept ancestor, found by propagating a
// (cardinality, ancestor) pair along a topological order of the simple view.
// Thresholds above k/2 guarantee the kept clusters form a laminar family, so
// the parent map is a tree.

#include <queue>
#include <string>
#include <vector>

#include "tag.hpp"
#include "tree.hpp"

namespace phylotag {

namespace detail {

// Best known ancestor per node: the smallest-cardinality kept node with a
// directed path to it, initialized to the TAG root.
struct AncestorState {
  std::vector<int> min_cardinality;
  std::vector<int> ancestor;
};

// Deterministic topological order of the simple view minus the root:
// repeatedly removes the smallest-id node with no unprocessed predecessor.
inline std::vector<int> topological_order_without(const SimpleView& view,
                                                  int excluded) {
  std::vector<int> in_degree(view.node_count, 0);
  for (const auto& [s, t] : view.edges) {
    if (s == excluded || t == excluded) continue;
    ++in_degree[t];
  }
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int v = 0; v < view.node_count; ++v) {
    if (v != excluded && in_degree[v] == 0) ready.push(v);
  }
  std::vector<int> order;
  order.reserve(view.node_count - 1);
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int t : view.successors[v]) {
      if (t != excluded && --in_degree[t] == 0) ready.push(t);
    }
  }
  return order;
}

}  // namespace detail

// Consensus by cluster count: keeps nodes with count(v) >= threshold.
// Requires threshold > k/2 (laminarity) and threshold <= k.
inline PhyloTree threshold_consensus(const Tag& tag, int k, int threshold) {
  if (k < 1) {
    throw std::invalid_argument("tree count must be at least 1");
  }
  if (2 * threshold <= k || threshold > k) {
    throw std::invalid_argument(
        "consensus threshold must satisfy k/2 < t <= k");
  }
  const int root = tag_root(tag);
  // The full leaf set is a cluster of a tree exactly when it is that tree's
  // own leaf set, so count(root) == k certifies a common leaf set.
  if (tag.count(root) != tag.k()) {
    throw std::invalid_argument(
        "input trees do not share a common leaf set: the full cluster occurs "
        "in only " +
        std::to_string(tag.count(root)) + " of " + std::to_string(tag.k()) +
        " trees");
  }
  const int n = tag.label_space().size();
  const SimpleView view = simple_view(tag);

  std::vector<char> kept(tag.node_count(), 0);
  for (int v = 0; v < tag.node_count(); ++v) {
    kept[v] = tag.count(v) >= threshold;
  }

  detail::AncestorState state;
  state.min_cardinality.assign(tag.node_count(), n);
  state.ancestor.assign(tag.node_count(), root);

  for (int u : detail::topological_order_without(view, root)) {
    int card;
    int via;
    if (kept[u]) {
      card = tag.cardinality(u);
      via = u;
    } else {
      card = state.min_cardinality[u];
      via = state.ancestor[u];
    }
    for (int v : view.successors[u]) {
      if (state.min_cardinality[v] > card) {
        state.min_cardinality[v] = card;
        state.ancestor[v] = via;
      }
    }
  }

  // Assemble the tree over the kept nodes.
  std::vector<int> local(tag.node_count(), -1);
  std::vector<int> members;
  for (int v = 0; v < tag.node_count(); ++v) {
    if (kept[v]) {
      local[v] = int(members.size());
      members.push_back(v);
    }
  }
  std::vector<std::vector<int>> children(members.size());
  std::vector<std::string> labels(members.size());
  for (int v : members) {
    if (v != root) {
      children[local[state.ancestor[v]]].push_back(local[v]);
    }
    if (tag.is_singleton(v)) {
      labels[local[v]] = tag.leaf_name(v);
    }
  }
  // A singleton root (n == 1) is itself the only leaf.
  return PhyloTree(std::move(children), std::move(labels), local[root]);
}

inline PhyloTree majority_rule_tree(const Tag& tag, int k) {
  return threshold_consensus(tag, k, k / 2 + 1);
}

inline PhyloTree majority_rule_tree(const Tag& tag) {
  return majority_rule_tree(tag, tag.k());
}

inline PhyloTree strict_consensus_tree(const Tag& tag, int k) {
  return threshold_consensus(tag, k, k);
}

inline PhyloTree strict_consensus_tree(const Tag& tag) {
  return strict_consensus_tree(tag, tag.k());
}

}  // namespace phylotag
