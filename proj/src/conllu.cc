#include "udirony/conllu.h"

#include <algorithm>
#include <charconv>

namespace udirony {
namespace {

constexpr std::size_t kColumns = 10;

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<int> parse_int(std::string_view s) {
  int value = 0;
  if (s.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::optional<std::string> optional_column(std::string_view s) {
  if (s == "_") return std::nullopt;
  return std::string(s);
}

std::string column_or_blank(const std::optional<std::string>& s) {
  return s ? *s : std::string("_");
}

std::optional<std::string> meta_value(std::string_view comment, std::string_view key) {
  std::size_t eq = comment.find('=');
  if (eq == std::string_view::npos) return std::nullopt;
  if (trim(comment.substr(0, eq)) != key) return std::nullopt;
  return std::string(trim(comment.substr(eq + 1)));
}

// One blank-line-delimited block of the input, before validation.
struct Block {
  std::size_t first_line = 0;
  Sentence sentence;
  std::vector<std::size_t> token_lines;
};

std::string block_sent_id(const Sentence& s) {
  auto id = s.meta("sent_id");
  return id ? *id : std::string("<no sent_id>");
}

[[noreturn]] void fail(const std::string& message, std::size_t line, const Sentence& s) {
  throw ConlluError(message, line, block_sent_id(s));
}

// Validates the tree structure; `lines[i]` is the file line of token i+1 (or
// empty when unknown).
void check_tree(const Sentence& s, const std::vector<std::size_t>& lines,
                std::size_t first_line) {
  auto line_of = [&](std::size_t index) {
    return index < lines.size() ? lines[index] : first_line;
  };
  const int n = static_cast<int>(s.tokens.size());
  if (n == 0) fail("sentence has no tokens", first_line, s);
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const Token& t = s.tokens[i];
    if (t.id >= 1 && t.id <= n && seen[static_cast<std::size_t>(t.id)]) {
      fail("duplicate token id " + std::to_string(t.id), line_of(i), s);
    }
    if (t.id != static_cast<int>(i) + 1) {
      fail("token id " + std::to_string(t.id) + " out of sequence (expected " +
               std::to_string(i + 1) + ")",
           line_of(i), s);
    }
    seen[static_cast<std::size_t>(t.id)] = true;
  }
  int root = 0;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const Token& t = s.tokens[i];
    if (t.head < 0 || t.head > n) {
      fail("head " + std::to_string(t.head) + " out of range 0.." + std::to_string(n),
           line_of(i), s);
    }
    if (t.head == t.id) fail("token " + std::to_string(t.id) + " is its own head", line_of(i), s);
    if (t.deprel.empty() || t.deprel == "_") fail("empty deprel", line_of(i), s);
    if ((t.head == 0) != (t.deprel == "root")) {
      fail("head 0 must coincide with deprel 'root' (token " + std::to_string(t.id) + ")",
           line_of(i), s);
    }
    if (t.head == 0) {
      if (root != 0) fail("multiple roots (tokens " + std::to_string(root) + " and " +
                              std::to_string(t.id) + ")",
                          line_of(i), s);
      root = t.id;
    }
  }
  if (root == 0) fail("no root token", first_line, s);
  // Every token must reach the virtual root by following heads.
  std::vector<int> state(static_cast<std::size_t>(n) + 1, 0);  // 0 new, 1 on path, 2 done
  state[0] = 2;
  for (int start = 1; start <= n; ++start) {
    std::vector<int> path;
    int cur = start;
    while (state[static_cast<std::size_t>(cur)] == 0) {
      state[static_cast<std::size_t>(cur)] = 1;
      path.push_back(cur);
      cur = s.token(cur).head;
    }
    if (state[static_cast<std::size_t>(cur)] == 1) {
      fail("cycle through token " + std::to_string(cur), line_of(static_cast<std::size_t>(cur - 1)), s);
    }
    for (int p : path) state[static_cast<std::size_t>(p)] = 2;
  }
}

Token parse_token_columns(const std::vector<std::string_view>& cols, int id,
                          std::size_t line, const Sentence& s) {
  Token t;
  t.id = id;
  t.form = std::string(cols[1]);
  t.lemma = std::string(cols[2]);
  t.upos = std::string(cols[3]);
  t.xpos = optional_column(cols[4]);
  if (cols[5] != "_") {
    for (std::string_view f : split(cols[5], '|')) {
      std::size_t eq = f.find('=');
      if (eq == std::string_view::npos || eq == 0) fail("malformed FEATS entry '" + std::string(f) + "'", line, s);
      t.feats.emplace_back(std::string(f.substr(0, eq)), std::string(f.substr(eq + 1)));
    }
  }
  auto head = parse_int(cols[6]);
  if (!head) fail("non-integer head '" + std::string(cols[6]) + "'", line, s);
  t.head = *head;
  t.deprel = std::string(cols[7]);
  t.deps = optional_column(cols[8]);
  t.misc = optional_column(cols[9]);
  return t;
}

void parse_line_into(Block& block, std::string_view line, std::size_t line_no) {
  Sentence& s = block.sentence;
  if (line.front() == '#') {
    if (!s.tokens.empty() || !s.mwt_spans.empty()) {
      fail("comment line inside token block", line_no, s);
    }
    s.comments.emplace_back(line.substr(1));
    return;
  }
  auto cols = split(line, '\t');
  if (cols.size() != kColumns) {
    fail("expected 10 tab-separated columns, found " + std::to_string(cols.size()), line_no, s);
  }
  std::string_view id_col = cols[0];
  if (std::size_t dash = id_col.find('-'); dash != std::string_view::npos) {
    auto a = parse_int(id_col.substr(0, dash));
    auto b = parse_int(id_col.substr(dash + 1));
    if (!a || !b || *a < 1 || *b <= *a) fail("malformed range id '" + std::string(id_col) + "'", line_no, s);
    s.mwt_spans.push_back({*a, *b, std::string(line)});
    return;
  }
  if (id_col.find('.') != std::string_view::npos) {
    ++s.empty_nodes;
    return;
  }
  auto id = parse_int(id_col);
  if (!id || *id < 1) fail("non-integer token id '" + std::string(id_col) + "'", line_no, s);
  s.tokens.push_back(parse_token_columns(cols, *id, line_no, s));
  block.token_lines.push_back(line_no);
}

}  // namespace

bool Token::has_feature(std::string_view key, std::string_view value) const {
  return std::any_of(feats.begin(), feats.end(),
                     [&](const auto& kv) { return kv.first == key && kv.second == value; });
}

std::optional<std::string> Sentence::meta(std::string_view key) const {
  for (const auto& c : comments) {
    if (auto v = meta_value(c, key)) return v;
  }
  return std::nullopt;
}

void Sentence::set_meta(std::string_view key, std::string_view value) {
  std::string line = " " + std::string(key) + " = " + std::string(value);
  for (auto& c : comments) {
    if (meta_value(c, key)) {
      c = line;
      return;
    }
  }
  comments.push_back(line);
}

DepTree::DepTree(const Sentence& sentence)
    : heads_(sentence.size() + 1, 0), children_(sentence.size() + 1) {
  for (const Token& t : sentence.tokens) {
    heads_[static_cast<std::size_t>(t.id)] = t.head;
    children_[static_cast<std::size_t>(t.head)].push_back(t.id);
    if (t.head == 0) root_ = t.id;
  }
}

std::vector<int> DepTree::neighbors(int id) const {
  std::vector<int> out = children(id);
  if (int h = head(id); h != 0) {
    out.insert(std::upper_bound(out.begin(), out.end(), h), h);
  }
  return out;
}

int DepTree::distance(int a, int b) const {
  // Depth-annotated walk to the lowest common ancestor.
  auto depth = [&](int x) {
    int d = 0;
    while (head(x) != 0) {
      x = head(x);
      ++d;
    }
    return d;
  };
  int da = depth(a), db = depth(b), steps = 0;
  while (da > db) { a = head(a); --da; ++steps; }
  while (db > da) { b = head(b); --db; ++steps; }
  while (a != b) {
    a = head(a);
    b = head(b);
    steps += 2;
  }
  return steps;
}

std::vector<std::pair<int, int>> DepTree::edges_preorder() const {
  std::vector<std::pair<int, int>> edges;
  if (root_ == 0) return edges;
  edges.reserve(edge_count());
  std::vector<int> stack{root_};
  while (!stack.empty()) {
    int h = stack.back();
    stack.pop_back();
    // All edges of a head are listed together, heads visited in pre-order.
    const auto& kids = children(h);
    for (int d : kids) edges.emplace_back(h, d);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return edges;
}

ConlluError::ConlluError(const std::string& message, std::size_t line, std::string sent_id)
    : DataError("line " + std::to_string(line) + " (sent_id " + sent_id + "): " + message),
      line_(line),
      sent_id_(std::move(sent_id)) {}

void validate_sentence(const Sentence& sentence) { check_tree(sentence, {}, 0); }

ParseResult parse_conllu(std::string_view text, const ParseOptions& options) {
  ParseResult result;
  Block block;
  bool in_block = false;
  bool block_failed = false;

  auto finish_block = [&]() {
    if (!in_block) return;
    if (!block_failed) {
      try {
        check_tree(block.sentence, block.token_lines, block.first_line);
        result.sentences.push_back(std::move(block.sentence));
      } catch (const ConlluError& e) {
        if (!options.lenient) throw;
        result.warnings.emplace_back(e.what());
        ++result.dropped;
      }
    }
    block = Block{};
    in_block = false;
    block_failed = false;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      finish_block();
      continue;
    }
    if (!in_block) {
      in_block = true;
      block.first_line = line_no;
    }
    if (block_failed) continue;
    try {
      parse_line_into(block, line, line_no);
    } catch (const ConlluError& e) {
      if (!options.lenient) throw;
      result.warnings.emplace_back(e.what());
      ++result.dropped;
      block_failed = true;
    }
  }
  finish_block();
  return result;
}

std::vector<Sentence> parse_conllu(std::string_view text) {
  return parse_conllu(text, ParseOptions{}).sentences;
}

std::string serialize_conllu(const std::vector<Sentence>& sentences) {
  std::string out;
  for (std::size_t si = 0; si < sentences.size(); ++si) {
    const Sentence& s = sentences[si];
    for (const auto& c : s.comments) {
      out += '#';
      out += c;
      out += '\n';
    }
    std::size_t span = 0;
    for (const Token& t : s.tokens) {
      while (span < s.mwt_spans.size() && s.mwt_spans[span].start <= t.id) {
        out += s.mwt_spans[span].line;
        out += '\n';
        ++span;
      }
      std::string feats;
      for (const auto& [k, v] : t.feats) {
        if (!feats.empty()) feats += '|';
        feats += k;
        feats += '=';
        feats += v;
      }
      if (feats.empty()) feats = "_";
      out += std::to_string(t.id) + '\t' + t.form + '\t' + t.lemma + '\t' + t.upos + '\t' +
             column_or_blank(t.xpos) + '\t' + feats + '\t' + std::to_string(t.head) + '\t' +
             t.deprel + '\t' + column_or_blank(t.deps) + '\t' + column_or_blank(t.misc) + '\n';
    }
    for (; span < s.mwt_spans.size(); ++span) {
      out += s.mwt_spans[span].line;
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

}  // namespace udirony
