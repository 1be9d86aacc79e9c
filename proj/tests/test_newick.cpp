#include <catch2/catch_amalgamated.hpp>

#include <phylotag/newick.hpp>
#include <phylotag/oracles.hpp>

using namespace phylotag;

namespace {

std::set<std::set<std::string>> clusters(const std::string& newick) {
  return clusters_of(parse_newick_tree(newick));
}

}  // namespace

TEST_CASE("parsing simple trees") {
  PhyloTree t = parse_newick_tree("((a,b),c);");
  CHECK(t.vertex_count() == 5);
  CHECK(t.leaf_count() == 3);
  CHECK(t.taxa() == std::vector<std::string>{"a", "b", "c"});
  CHECK(clusters_of(t) ==
        std::set<std::set<std::string>>{
            {"a"}, {"b"}, {"c"}, {"a", "b"}, {"a", "b", "c"}});
}

TEST_CASE("parsing a collection, one tree per line") {
  TreeCollection coll = parse_newick("((a,b,c),d);\n((a,b,d),c);\n((a,b),e);");
  REQUIRE(coll.size() == 3);
  CHECK(coll[0].taxa() == std::vector<std::string>{"a", "b", "c", "d"});
  CHECK(coll[2].taxa() == std::vector<std::string>{"a", "b", "e"});
  CHECK(clusters_of(coll[0]) ==
        std::set<std::set<std::string>>{{"a"},
                                        {"b"},
                                        {"c"},
                                        {"d"},
                                        {"a", "b", "c"},
                                        {"a", "b", "c", "d"}});
  CHECK(clusters_of(coll[2]) ==
        std::set<std::set<std::string>>{
            {"a"}, {"b"}, {"e"}, {"a", "b"}, {"a", "b", "e"}});
}

TEST_CASE("single-vertex tree") {
  PhyloTree t = parse_newick_tree("a;");
  CHECK(t.vertex_count() == 1);
  CHECK(t.is_leaf(t.root()));
  CHECK(clusters_of(t) == std::set<std::set<std::string>>{{"a"}});
  CHECK(serialize_newick(t) == "a;");
}

TEST_CASE("branch lengths, internal names and comments are discarded") {
  CHECK(serialize_newick(parse_newick_tree("((a:1.5,b:2e-3)x:3,c)root;")) ==
        "((a,b),c);");
  CHECK(serialize_newick(parse_newick_tree("[note] ((a,[mid]b),c); [post]")) ==
        "((a,b),c);");
  CHECK(serialize_newick(parse_newick_tree(" ( (a , b) , c ) ;")) ==
        "((a,b),c);");
}

TEST_CASE("parse errors carry positions") {
  SECTION("internal vertex with one child") {
    CHECK_THROWS_WITH(parse_newick("((a),b);"),
                      Catch::Matchers::ContainsSubstring("single child"));
  }
  SECTION("root with one child") {
    CHECK_THROWS_WITH(parse_newick("(a);"),
                      Catch::Matchers::ContainsSubstring("single child"));
  }
  SECTION("duplicate leaf name") {
    CHECK_THROWS_WITH(parse_newick("((a,b),a);"),
                      Catch::Matchers::ContainsSubstring("duplicate taxon"));
  }
  SECTION("empty input") {
    CHECK_THROWS_AS(parse_newick(""), ParseError);
    CHECK_THROWS_AS(parse_newick("  \n\t\n"), ParseError);
  }
  SECTION("missing semicolon") {
    CHECK_THROWS_WITH(parse_newick("((a,b),c)"),
                      Catch::Matchers::ContainsSubstring("expected ';'"));
  }
  SECTION("unbalanced parenthesis") {
    CHECK_THROWS_AS(parse_newick("((a,b,c);"), ParseError);
  }
  SECTION("trailing characters") {
    CHECK_THROWS_AS(parse_newick("(a,b); junk"), ParseError);
  }
  SECTION("unterminated comment") {
    CHECK_THROWS_AS(parse_newick("((a,b),c) [oops;"), ParseError);
  }
  SECTION("line numbers in multi-line input") {
    try {
      parse_newick("(a,b);\n((x),y);\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line == 2);
      CHECK(e.column >= 1);
    }
  }
}

TEST_CASE("canonical serialization orders children by smallest taxon") {
  CHECK(serialize_newick(parse_newick_tree("((c,b),a);")) == "(a,(b,c));");
  CHECK(serialize_newick(parse_newick_tree("(d,(c,(b,a)));")) ==
        "(((a,b),c),d);");
  CHECK(serialize_newick(parse_newick_tree("(zeb,(yak,ant));")) ==
        "((ant,yak),zeb);");
}

TEST_CASE("round-trip is a fixpoint and preserves clusters") {
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    TreeCollection coll =
        random_collection(seed, 2 + int(seed % 9), 1, seed % 2 == 0);
    const PhyloTree& t = coll[0];
    std::string first = serialize_newick(t);
    PhyloTree reparsed = parse_newick_tree(first);
    CHECK(serialize_newick(reparsed) == first);
    CHECK(clusters_of(reparsed) == clusters_of(t));
  }
}

TEST_CASE("tree invariants are enforced on construction") {
  SECTION("internal cluster is the union of its children") {
    PhyloTree t = parse_newick_tree("((a,b,c),(d,e));");
    auto all = clusters_of(t);
    CHECK(all.count({"a", "b", "c"}) == 1);
    CHECK(all.count({"d", "e"}) == 1);
    CHECK(all.count({"a", "b", "c", "d", "e"}) == 1);
    CHECK(int(all.size()) == t.vertex_count());
  }
  SECTION("constructor rejects malformed shapes") {
    CHECK_THROWS_AS(PhyloTree({{1}, {}}, {"", "a"}, 0), std::invalid_argument);
    CHECK_THROWS_AS(PhyloTree({{1, 2}, {}, {}}, {"", "a", ""}, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(PhyloTree({{1, 2}, {}, {}}, {"", "a", "a"}, 0),
                    std::invalid_argument);
  }
}
