#pragma once

// The procedural TAG of the earlier literature, built by processing trees
// one at a time. The graph starts with a node for the full taxon set and one
// node per taxon; each internal vertex of each tree is then mapped onto
// every existing node whose cluster contains it and meets no other taxon of
// that tree, creating a node only when no match exists. Because matching
// depends on which nodes already exist, the result can change with the
// processing order; order_dependence_report quantifies that.

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "clusters.hpp"
#include "tag.hpp"
#include "tree.hpp"

namespace phylotag {

class ProcTag {
 public:
  ProcTag(LabelSpace space, int k)
      : space_(std::move(space)), mapping_(k) {
    // Node 0 is the full set; nodes 1..n are the singletons.
    BitString full = BitString::all_ones(space_.size());
    add_node(full);
    for (int i = 0; i < space_.size(); ++i) {
      add_node(BitString::singleton(space_.size(), i));
    }
  }

  const LabelSpace& label_space() const { return space_; }
  int node_count() const { return int(node_bits_.size()); }
  const BitString& bits(int v) const { return node_bits_[v]; }
  const std::vector<TagEdge>& edges() const { return edges_; }
  const std::vector<int>& insertion_order() const { return order_; }

  // TAG nodes an input-tree vertex is mapped to, ascending by node id.
  const std::vector<int>& mapping(int tree, int vertex) const {
    return mapping_[tree][vertex];
  }

  int find_node(const BitString& bits) const {
    for (int v = 0; v < node_count(); ++v) {
      if (node_bits_[v] == bits) return v;
    }
    return -1;
  }

  std::set<BitString> node_set() const {
    return std::set<BitString>(node_bits_.begin(), node_bits_.end());
  }

  std::set<std::pair<BitString, BitString>> simple_edge_set() const {
    std::set<std::pair<BitString, BitString>> out;
    for (const auto& e : edges_) {
      out.emplace(node_bits_[e.source], node_bits_[e.target]);
    }
    return out;
  }

  friend ProcTag build_smith_tag(const TreeCollection&, const std::vector<int>&);
  friend ProcTag post_process(const ProcTag&, const TreeCollection&);

 private:
  int add_node(const BitString& bits) {
    node_bits_.push_back(bits);
    return int(node_bits_.size()) - 1;
  }

  bool has_simple_edge(int s, int t) const {
    return simple_edges_.count({s, t}) > 0;
  }

  void add_edges(int tree, int parent_vertex, int child_vertex,
                 const std::vector<int>& parent_nodes,
                 const std::vector<int>& child_nodes) {
    for (int s : parent_nodes) {
      for (int t : child_nodes) {
        edges_.push_back({s, t, tree, parent_vertex, child_vertex});
        simple_edges_.emplace(s, t);
      }
    }
  }

  // All existing nodes an internal vertex with cluster `cluster` maps to,
  // given the leaf set of its tree: the node must contain the cluster, meet
  // it, and contain no other taxon of that tree.
  std::vector<int> match_nodes(const BitString& cluster,
                               const BitString& tree_leaves) const {
    BitString outside = tree_leaves.and_not(cluster);
    std::vector<int> matches;
    for (int u = 0; u < node_count(); ++u) {
      const BitString& f = node_bits_[u];
      if (cluster.intersects(f) && !outside.intersects(f) &&
          cluster.is_subset_of(f)) {
        matches.push_back(u);
      }
    }
    return matches;
  }

  // Chain pruning: among the mapped nodes, any group linked by existing
  // directed edges collapses to its final node (the one every other member
  // reaches). Groups with no such unique node are kept whole.
  std::vector<int> prune_chains(const std::vector<int>& mapped) const {
    const int m = int(mapped.size());
    if (m <= 1) return mapped;
    std::vector<std::vector<char>> direct(m, std::vector<char>(m, 0));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        if (i != j && has_simple_edge(mapped[i], mapped[j])) {
          direct[i][j] = 1;
        }
      }
    }
    // Weak components, then reachability within each.
    std::vector<int> comp(m, -1);
    int n_comp = 0;
    for (int i = 0; i < m; ++i) {
      if (comp[i] != -1) continue;
      std::vector<int> stack{i};
      comp[i] = n_comp;
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y = 0; y < m; ++y) {
          if (comp[y] == -1 && (direct[x][y] || direct[y][x])) {
            comp[y] = n_comp;
            stack.push_back(y);
          }
        }
      }
      ++n_comp;
    }
    std::vector<std::vector<char>> reach = direct;
    for (int k = 0; k < m; ++k) {
      for (int i = 0; i < m; ++i) {
        if (!reach[i][k]) continue;
        for (int j = 0; j < m; ++j) {
          if (reach[k][j]) reach[i][j] = 1;
        }
      }
    }
    std::vector<int> kept;
    for (int c = 0; c < n_comp; ++c) {
      std::vector<int> members;
      for (int i = 0; i < m; ++i) {
        if (comp[i] == c) members.push_back(i);
      }
      int sink = -1;
      int sink_count = 0;
      for (int i : members) {
        bool reached_by_all = true;
        for (int j : members) {
          if (j != i && !reach[j][i]) {
            reached_by_all = false;
            break;
          }
        }
        if (reached_by_all) {
          sink = i;
          ++sink_count;
        }
      }
      if (members.size() > 1 && sink_count == 1) {
        kept.push_back(mapped[sink]);
      } else {
        for (int i : members) kept.push_back(mapped[i]);
      }
    }
    std::sort(kept.begin(), kept.end());
    return kept;
  }

  LabelSpace space_;
  std::vector<BitString> node_bits_;
  std::vector<TagEdge> edges_;
  std::set<std::pair<int, int>> simple_edges_;
  std::vector<std::vector<std::vector<int>>> mapping_;  // [tree][vertex]
  std::vector<int> order_;
};

inline ProcTag build_smith_tag(const TreeCollection& collection,
                               const std::vector<int>& order) {
  {
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> identity(collection.size());
    std::iota(identity.begin(), identity.end(), 0);
    if (sorted != identity) {
      throw std::invalid_argument("order must be a permutation of tree ids");
    }
  }
  ProcTag proc(build_label_space(collection), collection.size());
  proc.order_ = order;

  for (int tree_id : order) {
    const PhyloTree& tree = collection[tree_id];
    auto entries = collect_bitstrings(tree, proc.space_);
    std::vector<BitString> bits(tree.vertex_count());
    BitString tree_leaves(proc.space_.size());
    for (const auto& [v, b] : entries) {
      bits[v] = b;
      if (tree.is_leaf(v)) tree_leaves |= b;
    }

    auto& mapping = proc.mapping_[tree_id];
    mapping.assign(tree.vertex_count(), {});
    for (int v : tree.postorder()) {
      if (tree.is_leaf(v)) {
        mapping[v] = {proc.find_node(bits[v])};
      } else {
        std::vector<int> matches = proc.match_nodes(bits[v], tree_leaves);
        if (matches.empty()) {
          matches = {proc.add_node(bits[v])};
        }
        mapping[v] = proc.prune_chains(matches);
      }
    }
    for (int v : tree.postorder()) {
      for (int c : tree.children(v)) {
        proc.add_edges(tree_id, v, c, mapping[v], mapping[c]);
      }
    }
  }
  return proc;
}

// One remapping pass against the final node set: each internal vertex's
// matches are recomputed, and each tree's edges are rebuilt from the new
// mappings. No nodes are added or removed.
inline ProcTag post_process(const ProcTag& p, const TreeCollection& collection) {
  ProcTag out = p;
  for (int tree_id = 0; tree_id < collection.size(); ++tree_id) {
    const PhyloTree& tree = collection[tree_id];
    auto entries = collect_bitstrings(tree, out.space_);
    std::vector<BitString> bits(tree.vertex_count());
    BitString tree_leaves(out.space_.size());
    for (const auto& [v, b] : entries) {
      bits[v] = b;
      if (tree.is_leaf(v)) tree_leaves |= b;
    }
    for (int v : tree.postorder()) {
      if (tree.is_internal(v)) {
        std::vector<int> matches = out.match_nodes(bits[v], tree_leaves);
        out.mapping_[tree_id][v] = matches;
      }
    }
  }
  out.edges_.clear();
  out.simple_edges_.clear();
  for (int tree_id = 0; tree_id < collection.size(); ++tree_id) {
    const PhyloTree& tree = collection[tree_id];
    for (int v : tree.postorder()) {
      for (int c : tree.children(v)) {
        out.add_edges(tree_id, v, c, out.mapping_[tree_id][v],
                      out.mapping_[tree_id][c]);
      }
    }
  }
  return out;
}

struct OrderClass {
  std::vector<int> example_order;
  int order_count = 0;
  int node_count = 0;
  int simple_edge_count = 0;
  bool matches_reference_nodes = false;
};

struct OrderDependenceReport {
  int k = 0;
  bool exhaustive = false;
  int orders_examined = 0;
  int distinct_graphs = 0;
  int distinct_node_sets = 0;
  int post_distinct_graphs = 0;
  int post_distinct_node_sets = 0;
  int reference_node_count = 0;
  std::vector<OrderClass> classes;
};

// Builds procedural TAGs over permutations of the input (all of them when
// k! <= sample, otherwise `sample` random ones), groups identical results,
// and compares each node set against the order-independent TAG's.
inline OrderDependenceReport order_dependence_report(
    const TreeCollection& collection, int sample, uint64_t seed = 20240601) {
  if (sample < 1) {
    throw std::invalid_argument("permutation sample must be at least 1");
  }
  const int k = collection.size();

  long long factorial = 1;
  bool exhaustive = true;
  for (int i = 2; i <= k; ++i) {
    factorial *= i;
    if (factorial > sample) {
      exhaustive = false;
      break;
    }
  }

  std::vector<std::vector<int>> orders;
  std::vector<int> identity(k);
  std::iota(identity.begin(), identity.end(), 0);
  if (exhaustive) {
    std::vector<int> perm = identity;
    do {
      orders.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < sample; ++i) {
      std::vector<int> perm = identity;
      std::shuffle(perm.begin(), perm.end(), rng);
      orders.push_back(perm);
    }
  }

  Tag reference = build_tag(collection);
  std::set<BitString> reference_nodes;
  for (int v = 0; v < reference.node_count(); ++v) {
    reference_nodes.insert(reference.bits(v));
  }

  using Signature = std::pair<std::set<BitString>,
                              std::set<std::pair<BitString, BitString>>>;
  std::map<Signature, OrderClass> classes;
  std::set<std::set<BitString>> node_sets;
  std::set<Signature> post_signatures;
  std::set<std::set<BitString>> post_node_sets;

  for (const auto& order : orders) {
    ProcTag proc = build_smith_tag(collection, order);
    Signature sig{proc.node_set(), proc.simple_edge_set()};
    auto [it, inserted] = classes.try_emplace(sig);
    OrderClass& cls = it->second;
    if (inserted) {
      cls.example_order = order;
      cls.node_count = proc.node_count();
      cls.simple_edge_count = int(sig.second.size());
      cls.matches_reference_nodes = sig.first == reference_nodes;
    }
    ++cls.order_count;
    node_sets.insert(sig.first);

    ProcTag post = post_process(proc, collection);
    Signature post_sig{post.node_set(), post.simple_edge_set()};
    post_signatures.insert(post_sig);
    post_node_sets.insert(post_sig.first);
  }

  OrderDependenceReport report;
  report.k = k;
  report.exhaustive = exhaustive;
  report.orders_examined = int(orders.size());
  report.distinct_graphs = int(classes.size());
  report.distinct_node_sets = int(node_sets.size());
  report.post_distinct_graphs = int(post_signatures.size());
  report.post_distinct_node_sets = int(post_node_sets.size());
  report.reference_node_count = reference.node_count();
  for (auto& [sig, cls] : classes) {
    report.classes.push_back(std::move(cls));
  }
  std::sort(report.classes.begin(), report.classes.end(),
            [](const OrderClass& a, const OrderClass& b) {
              return a.example_order < b.example_order;
            });
  return report;
}

inline nlohmann::json report_to_json(const OrderDependenceReport& report) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& cls : report.classes) {
    classes.push_back({{"example_order", cls.example_order},
                       {"orders", cls.order_count},
                       {"nodes", cls.node_count},
                       {"simple_edges", cls.simple_edge_count},
                       {"matches_reference_nodes", cls.matches_reference_nodes}});
  }
  return nlohmann::json{
      {"k", report.k},
      {"exhaustive", report.exhaustive},
      {"orders_examined", report.orders_examined},
      {"distinct_graphs", report.distinct_graphs},
      {"distinct_node_sets", report.distinct_node_sets},
      {"post_distinct_graphs", report.post_distinct_graphs},
      {"post_distinct_node_sets", report.post_distinct_node_sets},
      {"reference_node_count", report.reference_node_count},
      {"classes", std::move(classes)}};
}

inline std::string report_to_text(const OrderDependenceReport& report) {
  std::ostringstream out;
  out << "order-dependence report: " << report.orders_examined
      << (report.exhaustive ? " orders (exhaustive)" : " sampled orders")
      << " of " << report.k << " trees\n";
  out << "distinct graphs: " << report.distinct_graphs
      << ", distinct node sets: " << report.distinct_node_sets << "\n";
  out << "after post-processing: " << report.post_distinct_graphs
      << " graphs, " << report.post_distinct_node_sets << " node sets\n";
  out << "order-independent TAG has " << report.reference_node_count
      << " nodes\n";
  for (size_t i = 0; i < report.classes.size(); ++i) {
    const OrderClass& cls = report.classes[i];
    out << "class " << i << ": " << cls.order_count << " order(s), "
        << cls.node_count << " nodes, " << cls.simple_edge_count
        << " simple edges, node set "
        << (cls.matches_reference_nodes ? "matches" : "differs from")
        << " the order-independent TAG (example order";
    for (int t : cls.example_order) out << " " << t;
    out << ")\n";
  }
  return out.str();
}

}  // namespace phylotag
