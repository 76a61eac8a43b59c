#ifndef UDIRONY_CONLLU_H_
#define UDIRONY_CONLLU_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "udirony/error.h"

namespace udirony {

// One syntactic word (one CoNLL-U token row with an integer id).
struct Token {
  int id = 0;
  std::string form;
  std::string lemma;
  std::string upos;
  std::optional<std::string> xpos;
  // Morphological features in file order, e.g. {"Polarity", "Neg"}.
  std::vector<std::pair<std::string, std::string>> feats;
  int head = 0;
  std::string deprel;
  std::optional<std::string> deps;
  std::optional<std::string> misc;

  bool has_feature(std::string_view key, std::string_view value) const;

  friend bool operator==(const Token&, const Token&) = default;
};

// A multi-word token range line such as "1-2\tdel\t_\t...". The raw columns
// are kept so the sentence serializes losslessly.
struct MultiwordSpan {
  int start = 0;
  int end = 0;
  std::string line;

  friend bool operator==(const MultiwordSpan&, const MultiwordSpan&) = default;
};

class Sentence {
 public:
  std::vector<Token> tokens;
  // Comment lines without the leading "# " (or "#"), in file order.
  std::vector<std::string> comments;
  std::vector<MultiwordSpan> mwt_spans;
  std::size_t empty_nodes = 0;

  std::size_t size() const { return tokens.size(); }
  // 1-based access by token id.
  const Token& token(int id) const { return tokens[static_cast<std::size_t>(id - 1)]; }

  // Value of a "key = value" comment, if present.
  std::optional<std::string> meta(std::string_view key) const;
  // Replaces an existing "key = value" comment or appends a new one.
  void set_meta(std::string_view key, std::string_view value);

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

// Adjacency view of a validated sentence.
class DepTree {
 public:
  explicit DepTree(const Sentence& sentence);

  int root_id() const { return root_; }
  std::size_t size() const { return heads_.size() - 1; }
  int head(int id) const { return heads_[static_cast<std::size_t>(id)]; }
  // Dependents of `id` in linear order. id 0 is the virtual root.
  const std::vector<int>& children(int id) const {
    return children_[static_cast<std::size_t>(id)];
  }
  // dependents(id) plus head(id) when it is not the virtual root, ascending.
  std::vector<int> neighbors(int id) const;
  std::size_t edge_count() const { return size() == 0 ? 0 : size() - 1; }
  // Number of edges on the tree path between a and b.
  int distance(int a, int b) const;
  // (head, dependent) edges, pre-order from the root, children in linear
  // order. The virtual root edge is excluded.
  std::vector<std::pair<int, int>> edges_preorder() const;

 private:
  std::vector<int> heads_;
  std::vector<std::vector<int>> children_;
  int root_ = 0;
};

class ConlluError : public DataError {
 public:
  ConlluError(const std::string& message, std::size_t line, std::string sent_id);

  std::size_t line() const { return line_; }
  const std::string& sent_id() const { return sent_id_; }

 private:
  std::size_t line_;
  std::string sent_id_;
};

struct ParseOptions {
  // Drop invalid sentences and record a warning instead of throwing.
  bool lenient = false;
};

struct ParseResult {
  std::vector<Sentence> sentences;
  std::vector<std::string> warnings;
  std::size_t dropped = 0;
};

ParseResult parse_conllu(std::string_view text, const ParseOptions& options);
// Strict parse; throws ConlluError on the first invalid sentence.
std::vector<Sentence> parse_conllu(std::string_view text);

// Checks id contiguity, head range, single root and acyclicity. Throws
// ConlluError (line 0) on failure.
void validate_sentence(const Sentence& sentence);

std::string serialize_conllu(const std::vector<Sentence>& sentences);

}  // namespace udirony

#endif  // UDIRONY_CONLLU_H_
