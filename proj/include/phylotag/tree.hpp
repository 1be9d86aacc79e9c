#pragma once

// Rooted phylogenetic tree with a bijective leaf labeling, and ordered
// collections of such trees.
//
// A PhyloTree is immutable once constructed. The constructor validates the
// shape requirements: a single root, every internal non-root vertex with at
// least two children, the root with at least two children (unless the tree
// is a single labeled vertex), and distinct leaf labels.

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace phylotag {

class PhyloTree {
 public:
  // children[v] lists v's child vertex ids; leaf_labels[v] is the taxon name
  // for leaves and empty for internal vertices.
  PhyloTree(std::vector<std::vector<int>> children,
            std::vector<std::string> leaf_labels, int root)
      : children_(std::move(children)),
        leaf_labels_(std::move(leaf_labels)),
        root_(root) {
    validate();
  }

  int vertex_count() const { return int(children_.size()); }
  int root() const { return root_; }
  const std::vector<int>& children(int v) const { return children_[v]; }
  int parent(int v) const { return parent_[v]; }
  bool is_leaf(int v) const { return children_[v].empty(); }
  bool is_internal(int v) const { return !children_[v].empty(); }
  const std::string& leaf_name(int v) const { return leaf_labels_[v]; }

  int leaf_count() const {
    int m = 0;
    for (int v = 0; v < vertex_count(); ++v) {
      if (is_leaf(v)) ++m;
    }
    return m;
  }

  // Vertices with every child listed before its parent.
  std::vector<int> postorder() const {
    std::vector<int> order;
    order.reserve(vertex_count());
    std::vector<std::pair<int, size_t>> stack{{root_, 0}};
    while (!stack.empty()) {
      auto& [v, next_child] = stack.back();
      if (next_child < children_[v].size()) {
        int c = children_[v][next_child++];
        stack.emplace_back(c, 0);
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
    return order;
  }

  // Sorted taxon names.
  std::vector<std::string> taxa() const {
    std::vector<std::string> names;
    for (int v = 0; v < vertex_count(); ++v) {
      if (is_leaf(v)) names.push_back(leaf_labels_[v]);
    }
    std::sort(names.begin(), names.end());
    return names;
  }

 private:
  void validate() {
    const int n = vertex_count();
    if (n == 0) {
      throw std::invalid_argument("tree has no vertices");
    }
    if (int(leaf_labels_.size()) != n) {
      throw std::invalid_argument("leaf label array size mismatch");
    }
    if (root_ < 0 || root_ >= n) {
      throw std::invalid_argument("root vertex out of range");
    }
    parent_.assign(n, -1);
    for (int v = 0; v < n; ++v) {
      for (int c : children_[v]) {
        if (c < 0 || c >= n) {
          throw std::invalid_argument("child vertex out of range");
        }
        if (c == root_ || parent_[c] != -1) {
          throw std::invalid_argument("vertex has more than one parent");
        }
        parent_[c] = v;
      }
    }
    int reached = 0;
    std::vector<int> stack{root_};
    std::vector<char> seen(n, 0);
    seen[root_] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      ++reached;
      for (int c : children_[v]) {
        if (seen[c]) {
          throw std::invalid_argument("cycle in tree");
        }
        seen[c] = 1;
        stack.push_back(c);
      }
    }
    if (reached != n) {
      throw std::invalid_argument("tree is not connected");
    }
    std::set<std::string> names;
    for (int v = 0; v < n; ++v) {
      if (is_leaf(v)) {
        if (leaf_labels_[v].empty()) {
          throw std::invalid_argument("leaf without a label");
        }
        if (!names.insert(leaf_labels_[v]).second) {
          throw std::invalid_argument("duplicate taxon name: " +
                                      leaf_labels_[v]);
        }
      } else {
        if (!leaf_labels_[v].empty()) {
          throw std::invalid_argument("internal vertex carries a leaf label");
        }
        if (children_[v].size() < 2) {
          throw std::invalid_argument(
              v == root_ ? "root with a single child"
                         : "internal vertex with a single child");
        }
      }
    }
  }

  std::vector<std::vector<int>> children_;
  std::vector<std::string> leaf_labels_;
  std::vector<int> parent_;
  int root_;
};

struct TreeCollection {
  std::vector<PhyloTree> trees;

  int size() const { return int(trees.size()); }
  const PhyloTree& operator[](int i) const { return trees[i]; }
};

// All clusters of the tree: the set of leaf names below each vertex,
// including singletons and the full leaf set.
inline std::set<std::set<std::string>> clusters_of(const PhyloTree& tree) {
  std::vector<std::set<std::string>> below(tree.vertex_count());
  std::set<std::set<std::string>> clusters;
  for (int v : tree.postorder()) {
    if (tree.is_leaf(v)) {
      below[v] = {tree.leaf_name(v)};
    } else {
      for (int c : tree.children(v)) {
        below[v].insert(below[c].begin(), below[c].end());
      }
    }
    clusters.insert(below[v]);
  }
  return clusters;
}

// Whether every tree has the same taxon set.
inline bool common_leaf_set(const TreeCollection& collection) {
  if (collection.trees.empty()) return true;
  auto first = collection.trees.front().taxa();
  for (const auto& t : collection.trees) {
    if (t.taxa() != first) return false;
  }
  return true;
}

}  // namespace phylotag
