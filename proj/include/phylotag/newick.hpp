#pragma once

// Newick reading and writing. Input is one tree per line with a trailing
// semicolon; square-bracket comments are skipped; branch lengths and
// internal vertex names are accepted and discarded. Output is canonical:
// children are emitted in lexicographic order of their smallest taxon name,
// so serialize(parse(serialize(t))) == serialize(t).

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tree.hpp"

namespace phylotag {

struct ParseError : std::runtime_error {
  ParseError(int line, int column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        line(line),
        column(column) {}

  int line;
  int column;
};

namespace detail {

inline bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '-';
}

class NewickLineParser {
 public:
  NewickLineParser(std::string_view line, int line_no)
      : line_(line), line_no_(line_no) {}

  PhyloTree parse() {
    skip_blanks();
    int root = parse_subtree();
    skip_blanks();
    expect(';');
    skip_blanks();
    if (pos_ < line_.size()) {
      fail("trailing characters after ';'");
    }
    return PhyloTree(std::move(children_), std::move(labels_), root);
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(line_no_, int(pos_) + 1, message);
  }

  char peek() const { return pos_ < line_.size() ? line_[pos_] : '\0'; }

  void expect(char c) {
    if (peek() != c) {
      fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  void skip_blanks() {
    while (pos_ < line_.size()) {
      char c = line_[pos_];
      if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_;
      } else if (c == '[') {
        size_t start = pos_;
        while (pos_ < line_.size() && line_[pos_] != ']') ++pos_;
        if (pos_ == line_.size()) {
          pos_ = start;
          fail("unterminated comment");
        }
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string parse_name() {
    size_t start = pos_;
    while (pos_ < line_.size() && is_name_char(line_[pos_])) ++pos_;
    return std::string(line_.substr(start, pos_ - start));
  }

  // Branch lengths are scanned and dropped.
  void skip_branch_length() {
    skip_blanks();
    if (peek() != ':') return;
    ++pos_;
    skip_blanks();
    size_t start = pos_;
    if (peek() == '+' || peek() == '-') ++pos_;
    while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
      ++pos_;
    }
    if (peek() == 'e' || peek() == 'E') {
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    if (pos_ == start) {
      fail("expected branch length after ':'");
    }
  }

  int new_vertex(std::vector<int> kids, std::string label) {
    children_.push_back(std::move(kids));
    labels_.push_back(std::move(label));
    return int(children_.size()) - 1;
  }

  int parse_subtree() {
    skip_blanks();
    if (peek() == '(') {
      size_t open_pos = pos_;
      ++pos_;
      std::vector<int> kids;
      kids.push_back(parse_subtree());
      skip_blanks();
      while (peek() == ',') {
        ++pos_;
        kids.push_back(parse_subtree());
        skip_blanks();
      }
      expect(')');
      if (kids.size() < 2) {
        pos_ = open_pos;
        fail("internal vertex with a single child");
      }
      skip_blanks();
      parse_name();  // internal vertex name, discarded
      skip_branch_length();
      return new_vertex(std::move(kids), "");
    }
    size_t name_pos = pos_;
    std::string name = parse_name();
    if (name.empty()) {
      pos_ = name_pos;
      fail("expected leaf name or '('");
    }
    skip_branch_length();
    return new_vertex({}, std::move(name));
  }

  std::string_view line_;
  int line_no_;
  size_t pos_ = 0;
  std::vector<std::vector<int>> children_;
  std::vector<std::string> labels_;
};

}  // namespace detail

// Parses a whole stream, one Newick expression per non-blank line.
inline TreeCollection parse_newick(std::string_view text) {
  TreeCollection collection;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++line_no;
    bool blank = true;
    for (char c : line) {
      if (c != ' ' && c != '\t' && c != '\r') {
        blank = false;
        break;
      }
    }
    if (!blank) {
      detail::NewickLineParser parser(line, line_no);
      collection.trees.push_back(parser.parse());
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  if (collection.trees.empty()) {
    throw ParseError(line_no, 1, "empty input: no trees found");
  }
  return collection;
}

inline PhyloTree parse_newick_tree(std::string_view text) {
  return parse_newick(text).trees.front();
}

// Canonical form: children ordered by their smallest taxon name.
inline std::string serialize_newick(const PhyloTree& tree) {
  std::vector<std::string> min_name(tree.vertex_count());
  for (int v : tree.postorder()) {
    if (tree.is_leaf(v)) {
      min_name[v] = tree.leaf_name(v);
    } else {
      const std::string* best = nullptr;
      for (int c : tree.children(v)) {
        if (!best || min_name[c] < *best) best = &min_name[c];
      }
      min_name[v] = *best;
    }
  }
  std::string out;
  // Iterative write with an explicit stack of (vertex, emitted-children).
  struct Frame {
    int v;
    std::vector<int> kids;
    size_t next = 0;
  };
  std::vector<Frame> stack;
  auto push = [&](int v) {
    if (tree.is_leaf(v)) {
      out += tree.leaf_name(v);
      return false;
    }
    Frame f;
    f.v = v;
    f.kids = tree.children(v);
    std::sort(f.kids.begin(), f.kids.end(), [&](int a, int b) {
      return min_name[a] < min_name[b];
    });
    stack.push_back(std::move(f));
    out += '(';
    return true;
  };
  if (push(tree.root())) {
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next == f.kids.size()) {
        out += ')';
        stack.pop_back();
        continue;
      }
      if (f.next > 0) out += ',';
      int c = f.kids[f.next++];
      push(c);
    }
  }
  out += ';';
  return out;
}

inline std::string serialize_newick(const TreeCollection& collection) {
  std::string out;
  for (const auto& t : collection.trees) {
    out += serialize_newick(t);
    out += '\n';
  }
  return out;
}

}  // namespace phylotag
