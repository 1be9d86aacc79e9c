#pragma once

// The tree alignment graph: a directed multi-graph with one node per unique
// cluster across all input trees and one edge per input-tree edge, tagged
// with the tree it came from. Node ids are assigned in ascending bit-string
// order, which makes every exported artifact canonical: the same trees in
// any input order produce the same graph.

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "clusters.hpp"
#include "newick.hpp"
#include "tree.hpp"

namespace phylotag {

struct TagEdge {
  int source;         // TAG node of the parent cluster
  int target;         // TAG node of the child cluster
  int tree;           // input tree id
  int parent_vertex;  // vertex ids within that tree
  int child_vertex;
};

class Tag {
 public:
  Tag(LabelSpace space, std::vector<BitString> sorted_bits,
      std::vector<int> counts, std::vector<TagEdge> edges, int k,
      std::vector<std::string> tree_newicks)
      : space_(std::move(space)),
        node_bits_(std::move(sorted_bits)),
        counts_(std::move(counts)),
        edges_(std::move(edges)),
        k_(k),
        tree_newicks_(std::move(tree_newicks)) {
    leaf_names_.resize(node_bits_.size());
    cardinalities_.resize(node_bits_.size());
    for (int v = 0; v < node_count(); ++v) {
      lookup_.emplace(node_bits_[v], v);
      cardinalities_[v] = node_bits_[v].popcount();
      if (cardinalities_[v] == 1) {
        for (int i = 0; i < node_bits_[v].size(); ++i) {
          if (node_bits_[v].test(i)) {
            leaf_names_[v] = space_.name_of(i);
            break;
          }
        }
      }
    }
  }

  int node_count() const { return int(node_bits_.size()); }
  int edge_count() const { return int(edges_.size()); }
  int k() const { return k_; }
  const LabelSpace& label_space() const { return space_; }
  const BitString& bits(int v) const { return node_bits_[v]; }
  int count(int v) const { return counts_[v]; }
  int cardinality(int v) const { return cardinalities_[v]; }
  bool is_singleton(int v) const { return cardinalities_[v] == 1; }
  // Taxon name for singleton nodes, empty otherwise.
  const std::string& leaf_name(int v) const { return leaf_names_[v]; }
  const std::vector<TagEdge>& edges() const { return edges_; }
  const std::vector<std::string>& tree_newicks() const { return tree_newicks_; }

  int node_of(const BitString& bits) const {
    auto it = lookup_.find(bits);
    if (it == lookup_.end()) {
      throw std::invalid_argument("no TAG node for the given bit-string");
    }
    return it->second;
  }

  std::set<std::string> cluster_of(int v) const {
    return space_.decode(node_bits_[v]);
  }

 private:
  LabelSpace space_;
  std::vector<BitString> node_bits_;
  std::vector<int> counts_;
  std::vector<int> cardinalities_;
  std::vector<std::string> leaf_names_;
  std::vector<TagEdge> edges_;
  int k_;
  std::vector<std::string> tree_newicks_;
  std::unordered_map<BitString, int> lookup_;
};

inline Tag build_tag(const TreeCollection& collection) {
  LabelSpace space = build_label_space(collection);
  const int k = collection.size();

  std::vector<std::vector<std::pair<int, BitString>>> per_tree;
  per_tree.reserve(k);
  std::vector<BitString> merged;
  for (const auto& tree : collection.trees) {
    per_tree.push_back(collect_bitstrings(tree, space));
    for (const auto& [v, bits] : per_tree.back()) {
      merged.push_back(bits);
    }
  }

  std::vector<BitString> unique = sort_dedup(merged);
  std::unordered_map<BitString, int> node_of;
  for (int v = 0; v < int(unique.size()); ++v) {
    node_of.emplace(unique[v], v);
  }

  // Clusters are distinct within one tree, so per-tree membership and
  // per-occurrence tallies coincide.
  std::vector<int> counts(unique.size(), 0);
  for (int t = 0; t < k; ++t) {
    for (const auto& [v, bits] : per_tree[t]) {
      ++counts[node_of.at(bits)];
    }
  }

  std::vector<TagEdge> edges;
  std::vector<std::string> newicks;
  for (int t = 0; t < k; ++t) {
    const PhyloTree& tree = collection[t];
    std::vector<int> node_at(tree.vertex_count());
    for (const auto& [v, bits] : per_tree[t]) {
      node_at[v] = node_of.at(bits);
    }
    for (int v : tree.postorder()) {
      for (int c : tree.children(v)) {
        edges.push_back({node_at[v], node_at[c], t, v, c});
      }
    }
    newicks.push_back(serialize_newick(tree));
  }

  return Tag(std::move(space), std::move(unique), std::move(counts),
             std::move(edges), k, std::move(newicks));
}

// Multi-edges collapsed to their support; adjacency sorted ascending.
struct SimpleView {
  int node_count = 0;
  std::vector<std::vector<int>> successors;
  std::vector<std::vector<int>> predecessors;
  std::vector<std::pair<int, int>> edges;
};

inline SimpleView simple_view(const Tag& tag) {
  SimpleView view;
  view.node_count = tag.node_count();
  view.successors.resize(view.node_count);
  view.predecessors.resize(view.node_count);
  std::set<std::pair<int, int>> seen;
  for (const auto& e : tag.edges()) {
    seen.emplace(e.source, e.target);
  }
  view.edges.assign(seen.begin(), seen.end());
  for (const auto& [s, t] : view.edges) {
    view.successors[s].push_back(t);
    view.predecessors[t].push_back(s);
  }
  return view;
}

// Kahn's algorithm; true iff every node can be peeled off.
inline bool is_acyclic(int node_count,
                       const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> succ(node_count);
  std::vector<int> in_degree(node_count, 0);
  for (const auto& [s, t] : edges) {
    succ[s].push_back(t);
    ++in_degree[t];
  }
  std::vector<int> ready;
  for (int v = 0; v < node_count; ++v) {
    if (in_degree[v] == 0) ready.push_back(v);
  }
  int removed = 0;
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    ++removed;
    for (int t : succ[v]) {
      if (--in_degree[t] == 0) ready.push_back(t);
    }
  }
  return removed == node_count;
}

inline bool is_acyclic(const Tag& tag) {
  return is_acyclic(tag.node_count(), simple_view(tag).edges);
}

// The unique in-degree-zero node of the simple view. More than one source
// means the input trees did not share a leaf set.
inline int tag_root(const Tag& tag) {
  SimpleView view = simple_view(tag);
  std::vector<int> sources;
  for (int v = 0; v < view.node_count; ++v) {
    if (view.predecessors[v].empty()) sources.push_back(v);
  }
  if (sources.size() != 1) {
    std::ostringstream msg;
    msg << "input trees do not share a common leaf set: " << sources.size()
        << " TAG nodes have in-degree zero";
    throw std::invalid_argument(msg.str());
  }
  return sources.front();
}

namespace detail {

inline const char* tree_color(int tree) {
  static const char* palette[] = {"black",  "blue",  "red",   "green4",
                                  "orange", "purple", "brown", "cyan4",
                                  "magenta", "gray40"};
  return palette[tree % 10];
}

inline std::string dot_node_label(const Tag& tag, int v) {
  if (tag.is_singleton(v)) return tag.leaf_name(v);
  if (tag.label_space().size() > 32) return "n" + std::to_string(v);
  std::string label = "{";
  bool first = true;
  for (const auto& name : tag.cluster_of(v)) {
    if (!first) label += ",";
    label += name;
    first = false;
  }
  label += "}";
  return label;
}

}  // namespace detail

// Graphviz rendering with one edge color class per input tree.
inline std::string export_dot(const Tag& tag) {
  std::ostringstream out;
  out << "digraph tag {\n";
  out << "  node [shape=ellipse];\n";
  for (int v = 0; v < tag.node_count(); ++v) {
    out << "  n" << v << " [label=\"" << detail::dot_node_label(tag, v)
        << "\"";
    if (tag.is_singleton(v)) out << " shape=circle";
    out << "];\n";
  }
  std::vector<TagEdge> edges = tag.edges();
  std::sort(edges.begin(), edges.end(), [](const TagEdge& a, const TagEdge& b) {
    return std::tie(a.tree, a.source, a.target, a.parent_vertex, a.child_vertex) <
           std::tie(b.tree, b.source, b.target, b.parent_vertex, b.child_vertex);
  });
  for (const auto& e : edges) {
    out << "  n" << e.source << " -> n" << e.target << " [color="
        << detail::tree_color(e.tree) << "];\n";
  }
  out << "}\n";
  return out.str();
}

// Canonical JSON dump. Edges identify their tree by its rank in the sorted
// list of canonical Newick strings, not by input position, so the dump is
// byte-identical under any permutation of the input trees.
inline nlohmann::json tag_to_json(const Tag& tag) {
  std::vector<int> rank_of(tag.k());
  {
    std::vector<int> order(tag.k());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return tag.tree_newicks()[a] < tag.tree_newicks()[b];
    });
    for (int r = 0; r < tag.k(); ++r) rank_of[order[r]] = r;
  }

  nlohmann::json nodes = nlohmann::json::array();
  for (int v = 0; v < tag.node_count(); ++v) {
    nlohmann::json node{{"bits", tag.bits(v).to_hex()},
                        {"cardinality", tag.cardinality(v)},
                        {"count", tag.count(v)}};
    if (tag.is_singleton(v)) node["name"] = tag.leaf_name(v);
    nodes.push_back(std::move(node));
  }

  std::vector<std::array<int, 3>> triples;
  triples.reserve(tag.edges().size());
  for (const auto& e : tag.edges()) {
    triples.push_back({e.source, e.target, rank_of[e.tree]});
  }
  std::sort(triples.begin(), triples.end());
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& t : triples) {
    edges.push_back({t[0], t[1], t[2]});
  }

  return nlohmann::json{{"n", tag.label_space().size()},
                        {"k", tag.k()},
                        {"labels", tag.label_space().names()},
                        {"nodes", std::move(nodes)},
                        {"edges", std::move(edges)}};
}

inline std::string tag_to_json_string(const Tag& tag) {
  return tag_to_json(tag).dump(2) + "\n";
}

}  // namespace phylotag
