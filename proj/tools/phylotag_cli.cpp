// Command-line front-end: builds tree alignment graphs from Newick files and
// runs the consensus, compatibility, and order-dependence analyses on them.
//
//   phylotag build     --format dot|json FILES...
//   phylotag consensus [--strict|--majority|--threshold T] FILES...
//   phylotag compat    [--status-compat] FILES...
//   phylotag smith     [--all-orders|--sample N] [--format text|json] FILES...
//
// Files hold one tree per line; multiple files concatenate in argument
// order. Exit status: 0 on success (including a NOT COMPATIBLE verdict),
// 2 on usage or input errors, 3 for NOT COMPATIBLE under --status-compat.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <phylotag/phylotag.hpp>

namespace {

phylotag::TreeCollection load_trees(const std::vector<std::string>& paths) {
  phylotag::TreeCollection all;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) {
      throw std::runtime_error("cannot open input file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    try {
      phylotag::TreeCollection one = phylotag::parse_newick(text);
      for (auto& tree : one.trees) {
        all.trees.push_back(std::move(tree));
      }
    } catch (const phylotag::ParseError& e) {
      // The offending tree is the next one after those already loaded plus
      // the non-blank lines of this file preceding the error.
      int before = 0;
      std::istringstream lines(text);
      std::string line;
      for (int no = 1; no < e.line && std::getline(lines, line); ++no) {
        if (line.find_first_not_of(" \t\r") != std::string::npos) ++before;
      }
      throw std::runtime_error(path + ": " + e.what() + " (tree " +
                               std::to_string(all.size() + before + 1) + ")");
    }
  }
  return all;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  out << content;
}

std::string format_certificate(
    const std::vector<std::set<std::string>>& clusters) {
  std::ostringstream out;
  out << "certificate (stuck node set):";
  for (const auto& cluster : clusters) {
    out << " {";
    bool first = true;
    for (const auto& name : cluster) {
      if (!first) out << ",";
      out << name;
      first = false;
    }
    out << "}";
  }
  out << "\n";
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree alignment graphs: construction, consensus, compatibility"};
  app.require_subcommand(1);

  std::vector<std::string> files;
  std::string output;
  std::string format = "dot";
  bool strict = false;
  bool majority = false;
  int threshold = 0;
  bool status_compat = false;
  bool all_orders = false;
  int sample = 120;
  uint64_t seed = 20240601;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("files", files, "Newick input files, one tree per line")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--output", output, "Output path (default stdout)");
  };

  CLI::App* build = app.add_subcommand("build", "Build the TAG and export it");
  add_common(build);
  build->add_option("--format", format, "Export format: dot or json")
      ->check(CLI::IsMember({"dot", "json"}));

  CLI::App* consensus =
      app.add_subcommand("consensus", "Consensus tree of same-leaf-set trees");
  add_common(consensus);
  auto* strict_opt = consensus->add_flag("--strict", strict,
                                         "Clusters present in every tree");
  auto* majority_opt = consensus->add_flag(
      "--majority", majority, "Clusters present in more than half (default)");
  consensus
      ->add_option("--threshold", threshold,
                   "Keep clusters occurring in at least this many trees")
      ->excludes(strict_opt)
      ->excludes(majority_opt);
  strict_opt->excludes(majority_opt);

  CLI::App* compat =
      app.add_subcommand("compat", "Test compatibility, print a supertree");
  add_common(compat);
  compat->add_flag("--status-compat", status_compat,
                   "Exit with status 3 when the trees are not compatible");

  CLI::App* smith =
      app.add_subcommand("smith", "Order-dependence report for the "
                                  "procedural TAG construction");
  add_common(smith);
  smith->add_flag("--all-orders", all_orders,
                  "Examine every permutation of the input trees");
  smith->add_option("--sample", sample,
                    "Number of permutations to sample (default 120)");
  smith->add_option("--seed", seed, "Seed for permutation sampling");
  std::string smith_format = "text";
  smith->add_option("--format", smith_format, "Report format: text or json")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* oracle = app.add_subcommand(
      "oracle", "Brute-force reference implementations (debugging)");
  oracle->group("");  // hidden
  CLI::App* oracle_consensus =
      oracle->add_subcommand("consensus", "Consensus by direct counting");
  add_common(oracle_consensus);
  oracle_consensus->add_flag("--strict", strict, "Strict instead of majority");
  CLI::App* oracle_compat =
      oracle->add_subcommand("compat", "Compatibility by enumeration");
  add_common(oracle_compat);
  CLI::App* oracle_random =
      oracle->add_subcommand("random", "Emit a deterministic random collection");
  int rand_n = 6;
  int rand_k = 3;
  bool rand_resolved = false;
  bool rand_partial = false;
  oracle_random->add_option("--seed", seed, "RNG seed");
  oracle_random->add_option("--taxa", rand_n, "Taxon pool size");
  oracle_random->add_option("--trees", rand_k, "Number of trees");
  oracle_random->add_flag("--resolved", rand_resolved, "Binary trees only");
  oracle_random->add_flag("--partial", rand_partial,
                          "Each tree draws a taxon subset");
  oracle_random->add_option("-o,--output", output, "Output path");
  CLI::App* oracle_topologies = oracle->add_subcommand(
      "topologies", "Count rooted phylogenetic topologies");
  int topo_n = 4;
  oracle_topologies->add_option("--taxa", topo_n, "Leaf count (at most 8)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (build->parsed()) {
      phylotag::Tag tag = phylotag::build_tag(load_trees(files));
      write_output(output, format == "json" ? phylotag::tag_to_json_string(tag)
                                            : phylotag::export_dot(tag));
    } else if (consensus->parsed()) {
      phylotag::TreeCollection trees = load_trees(files);
      phylotag::Tag tag = phylotag::build_tag(trees);
      phylotag::PhyloTree result =
          threshold > 0
              ? phylotag::threshold_consensus(tag, tag.k(), threshold)
          : strict ? phylotag::strict_consensus_tree(tag)
                   : phylotag::majority_rule_tree(tag);
      write_output(output, phylotag::serialize_newick(result) + "\n");
    } else if (compat->parsed()) {
      phylotag::CompatibilityResult result =
          phylotag::check_compatibility(load_trees(files));
      if (result.compatible()) {
        write_output(output,
                     phylotag::serialize_newick(*result.supertree) + "\n");
      } else {
        write_output(output, "NOT COMPATIBLE\n" +
                                 format_certificate(result.stuck_clusters));
        if (status_compat) return 3;
      }
    } else if (smith->parsed()) {
      phylotag::TreeCollection trees = load_trees(files);
      int budget = sample;
      if (all_orders) {
        budget = 1;
        for (int i = 2; i <= trees.size() && budget < (1 << 30); ++i) {
          budget *= i;
        }
      }
      phylotag::OrderDependenceReport report =
          phylotag::order_dependence_report(trees, budget, seed);
      write_output(output, smith_format == "json"
                               ? phylotag::report_to_json(report).dump(2) + "\n"
                               : phylotag::report_to_text(report));
    } else if (oracle_consensus->parsed()) {
      phylotag::PhyloTree result = phylotag::naive_consensus(
          load_trees(files), strict ? phylotag::ConsensusMode::strict
                                    : phylotag::ConsensusMode::majority);
      write_output(output, phylotag::serialize_newick(result) + "\n");
    } else if (oracle_compat->parsed()) {
      auto result = phylotag::brute_compat(load_trees(files));
      if (result) {
        write_output(output, phylotag::serialize_newick(*result) + "\n");
      } else {
        write_output(output, "NOT COMPATIBLE\n");
      }
    } else if (oracle_random->parsed()) {
      phylotag::TreeCollection trees = phylotag::random_collection(
          seed, rand_n, rand_k, rand_resolved, rand_partial);
      write_output(output, phylotag::serialize_newick(trees));
    } else if (oracle_topologies->parsed()) {
      phylotag::TopologyEnumerator counter(
          std::vector<std::string>(phylotag::detail::taxon_pool(topo_n)));
      std::cout << counter.count() << "\n";
    }
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
