#pragma once

// Compatibility testing on the extended TAG: the simple-edge view of the TAG
// plus an undirected edge between every two nodes whose clusters are sibling
// clusters in some input tree. The mixed graph is decomposed recursively:
// current roots are the nodes with in-degree zero and no incident undirected
// edge; the remainder splits into arc components (connectivity through
// directed edges only), which become the subtrees of the supertree under
// construction. An empty root set certifies incompatibility.

#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "newick.hpp"
#include "tag.hpp"
#include "tree.hpp"

namespace phylotag {

struct ExtendedTag {
  int node_count = 0;
  std::vector<std::pair<int, int>> directed;    // deduplicated
  std::vector<std::pair<int, int>> undirected;  // deduplicated, first < second
  std::vector<std::string> leaf_names;          // taxon for singletons, else ""
};

inline ExtendedTag build_extended_tag(const Tag& tag,
                                      const TreeCollection& collection) {
  ExtendedTag ext;
  ext.node_count = tag.node_count();
  ext.directed = simple_view(tag).edges;
  ext.leaf_names.resize(tag.node_count());
  for (int v = 0; v < tag.node_count(); ++v) {
    ext.leaf_names[v] = tag.leaf_name(v);
  }
  std::set<std::pair<int, int>> sibling_edges;
  for (int t = 0; t < collection.size(); ++t) {
    const PhyloTree& tree = collection[t];
    auto entries = collect_bitstrings(tree, tag.label_space());
    std::vector<int> node_at(tree.vertex_count());
    for (const auto& [v, bits] : entries) {
      node_at[v] = tag.node_of(bits);
    }
    for (int v = 0; v < tree.vertex_count(); ++v) {
      const auto& kids = tree.children(v);
      for (size_t i = 0; i < kids.size(); ++i) {
        for (size_t j = i + 1; j < kids.size(); ++j) {
          int a = node_at[kids[i]];
          int b = node_at[kids[j]];
          sibling_edges.emplace(std::min(a, b), std::max(a, b));
        }
      }
    }
  }
  ext.undirected.assign(sibling_edges.begin(), sibling_edges.end());
  return ext;
}

// Connected components of the given nodes under the directed edges with
// orientation ignored. Undirected sibling edges play no part. Components are
// ordered by smallest member; members are sorted.
inline std::vector<std::vector<int>> arc_components(
    const std::vector<int>& nodes,
    const std::vector<std::pair<int, int>>& directed) {
  std::vector<int> rep(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) rep[i] = int(i);
  std::vector<int> local(nodes.empty() ? 0 : nodes.back() + 1, -1);
  for (size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = int(i);

  auto find = [&](int x) {
    while (rep[x] != x) {
      rep[x] = rep[rep[x]];
      x = rep[x];
    }
    return x;
  };
  for (const auto& [s, t] : directed) {
    int a = find(local[s]);
    int b = find(local[t]);
    if (a != b) rep[a] = b;
  }
  std::vector<std::vector<int>> components;
  std::vector<int> comp_of(nodes.size(), -1);
  for (size_t i = 0; i < nodes.size(); ++i) {
    int r = find(int(i));
    if (comp_of[r] == -1) {
      comp_of[r] = int(components.size());
      components.emplace_back();
    }
    components[comp_of[r]].push_back(nodes[i]);
  }
  return components;
}

struct DescendantResult {
  std::optional<PhyloTree> supertree;
  // Node set of the first sub-mixed-graph whose root set came up empty.
  std::vector<int> stuck_nodes;

  bool compatible() const { return supertree.has_value(); }
};

namespace detail {

struct ScratchNode {
  std::vector<int> kids;
  std::string label;
};

struct MixedGraph {
  std::vector<int> nodes;  // sorted
  std::vector<std::pair<int, int>> directed;
  std::vector<std::pair<int, int>> undirected;
};

// Returns a scratch arena index, or -1 on incompatibility.
inline int descend(const MixedGraph& g, const std::vector<std::string>& names,
                   std::vector<ScratchNode>& arena, std::vector<int>& stuck) {
  std::vector<int> local(g.nodes.empty() ? 0 : g.nodes.back() + 1, -1);
  for (size_t i = 0; i < g.nodes.size(); ++i) local[g.nodes[i]] = int(i);
  std::vector<int> in_degree(g.nodes.size(), 0);
  std::vector<int> und_degree(g.nodes.size(), 0);
  for (const auto& [s, t] : g.directed) ++in_degree[local[t]];
  for (const auto& [a, b] : g.undirected) {
    ++und_degree[local[a]];
    ++und_degree[local[b]];
  }

  std::vector<int> roots;  // current root set
  std::vector<char> removed(g.nodes.size(), 0);
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    if (in_degree[i] == 0 && und_degree[i] == 0) {
      roots.push_back(g.nodes[i]);
      removed[i] = 1;
    }
  }
  if (roots.empty()) {
    stuck = g.nodes;
    return -1;
  }

  // Labeled roots are leaves of the tree under construction; cluster roots
  // stand for the union of everything below and dissolve into the new root.
  std::vector<int> leaf_kids;
  for (int v : roots) {
    if (!names[v].empty()) {
      arena.push_back({{}, names[v]});
      leaf_kids.push_back(int(arena.size()) - 1);
    }
  }

  std::vector<int> rest;
  for (int v : g.nodes) {
    if (!removed[local[v]]) rest.push_back(v);
  }
  if (rest.empty()) {
    if (leaf_kids.size() == 1) {
      return leaf_kids.front();
    }
    arena.push_back({std::move(leaf_kids), ""});
    return int(arena.size()) - 1;
  }

  std::vector<std::pair<int, int>> rest_directed;
  for (const auto& [s, t] : g.directed) {
    if (!removed[local[s]] && !removed[local[t]]) {
      rest_directed.emplace_back(s, t);
    }
  }
  auto components = arc_components(rest, rest_directed);
  std::vector<int> comp_of(local.size(), -1);
  for (size_t c = 0; c < components.size(); ++c) {
    for (int v : components[c]) comp_of[v] = int(c);
  }

  std::vector<MixedGraph> parts(components.size());
  for (size_t c = 0; c < components.size(); ++c) {
    parts[c].nodes = components[c];
  }
  for (const auto& [s, t] : rest_directed) {
    parts[comp_of[s]].directed.emplace_back(s, t);
  }
  // Undirected edges crossing components are deleted here.
  for (const auto& [a, b] : g.undirected) {
    if (removed[local[a]] || removed[local[b]]) continue;
    if (comp_of[a] == comp_of[b]) {
      parts[comp_of[a]].undirected.emplace_back(a, b);
    }
  }

  std::vector<int> kids;
  for (const auto& part : parts) {
    int sub = descend(part, names, arena, stuck);
    if (sub < 0) return -1;
    kids.push_back(sub);
  }
  kids.insert(kids.end(), leaf_kids.begin(), leaf_kids.end());
  arena.push_back({std::move(kids), ""});
  return int(arena.size()) - 1;
}

// Converts the scratch tree to a PhyloTree, suppressing vertices with a
// single child along the way.
inline PhyloTree scratch_to_tree(const std::vector<ScratchNode>& arena,
                                 int root) {
  auto effective = [&](int v) {
    while (arena[v].kids.size() == 1) v = arena[v].kids.front();
    return v;
  };
  std::vector<std::vector<int>> children;
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> stack;  // (scratch id, new id)
  auto make_vertex = [&](int v) {
    children.emplace_back();
    labels.push_back(arena[v].label);
    return int(children.size()) - 1;
  };
  int top = effective(root);
  int new_root = make_vertex(top);
  stack.emplace_back(top, new_root);
  while (!stack.empty()) {
    auto [v, id] = stack.back();
    stack.pop_back();
    for (int kid : arena[v].kids) {
      int e = effective(kid);
      int kid_id = make_vertex(e);
      children[id].push_back(kid_id);
      stack.emplace_back(e, kid_id);
    }
  }
  return PhyloTree(std::move(children), std::move(labels), new_root);
}

}  // namespace detail

inline DescendantResult descendant(const ExtendedTag& ext) {
  detail::MixedGraph whole;
  whole.nodes.resize(ext.node_count);
  std::iota(whole.nodes.begin(), whole.nodes.end(), 0);
  whole.directed = ext.directed;
  whole.undirected = ext.undirected;

  DescendantResult result;
  std::vector<detail::ScratchNode> arena;
  int root = detail::descend(whole, ext.leaf_names, arena, result.stuck_nodes);
  if (root >= 0) {
    result.supertree = detail::scratch_to_tree(arena, root);
  }
  return result;
}

// Whether `super` displays `t`: the restriction of `super` to the leaves of
// `t` (minimal spanning subtree, degree-two vertices suppressed) refines
// `t`. Refinement holds exactly when every cluster of `t` is a cluster of
// the restriction, and the restriction's cluster set is the set of nonempty
// intersections of super's clusters with the leaf set of `t`.
inline bool displays(const PhyloTree& super, const PhyloTree& t) {
  LabelSpace space(t.taxa());
  {
    std::set<std::string> have;
    for (int v = 0; v < super.vertex_count(); ++v) {
      if (super.is_leaf(v)) have.insert(super.leaf_name(v));
    }
    for (const auto& name : t.taxa()) {
      if (!have.count(name)) {
        throw std::invalid_argument(
            "displays: supertree is missing taxon " + name);
      }
    }
  }
  std::vector<BitString> restricted(super.vertex_count(), BitString(space.size()));
  std::set<BitString> restricted_clusters;
  for (int v : super.postorder()) {
    if (super.is_leaf(v)) {
      const std::string& name = super.leaf_name(v);
      if (space.contains(name)) {
        restricted[v].set(space.index_of(name));
      }
    } else {
      for (int c : super.children(v)) {
        restricted[v] |= restricted[c];
      }
    }
    if (restricted[v].any()) {
      restricted_clusters.insert(restricted[v]);
    }
  }
  for (const auto& [v, bits] : collect_bitstrings(t, space)) {
    if (!restricted_clusters.count(bits)) return false;
  }
  return true;
}

struct CompatibilityResult {
  std::optional<PhyloTree> supertree;
  std::vector<std::set<std::string>> stuck_clusters;

  bool compatible() const { return supertree.has_value(); }
};

// End-to-end pipeline: build the TAG, extend it, decompose. A returned tree
// is verified to display every input before being handed back.
inline CompatibilityResult check_compatibility(const TreeCollection& collection) {
  Tag tag = build_tag(collection);
  ExtendedTag ext = build_extended_tag(tag, collection);
  DescendantResult res = descendant(ext);
  CompatibilityResult out;
  if (res.compatible()) {
    for (const auto& tree : collection.trees) {
      if (!displays(*res.supertree, tree)) {
        throw std::logic_error(
            "descendant produced a tree that fails to display input tree " +
            serialize_newick(tree));
      }
    }
    out.supertree = std::move(res.supertree);
  } else {
    for (int v : res.stuck_nodes) {
      out.stuck_clusters.push_back(tag.cluster_of(v));
    }
  }
  return out;
}

}  // namespace phylotag
