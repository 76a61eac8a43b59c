#ifndef UDIRONY_VECTORIZER_H_
#define UDIRONY_VECTORIZER_H_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "udirony/features.h"

namespace udirony {

// (index, value) pairs with strictly increasing indices and positive values.
struct SparseVector {
  std::vector<std::pair<std::uint32_t, double>> entries;

  double l1() const;
  double squared_norm() const;
  bool empty() const { return entries.empty(); }
  // Value at `index`, 0 when absent. Binary search.
  double at(std::uint32_t index) const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

// A design matrix with binary labels.
struct Dataset {
  std::vector<SparseVector> rows;
  std::vector<int> labels;
  std::size_t dim = 0;

  std::size_t size() const { return rows.size(); }
};

class Vocabulary {
 public:
  Vocabulary() = default;
  // `keys` must already be in (namespace name, key) order.
  Vocabulary(FeatureSpec spec, std::vector<FeatureBag::Key> keys);

  std::size_t size() const { return keys_.size(); }
  const FeatureSpec& spec() const { return spec_; }
  const std::vector<FeatureBag::Key>& keys() const { return keys_; }
  const FeatureBag::Key& key(std::size_t index) const { return keys_[index]; }
  // Index of (ns, key), or -1.
  std::int64_t find(Namespace ns, std::string_view key) const;

  // "index<TAB>namespace<TAB>key" per line.
  std::string to_tsv() const;
  static Vocabulary from_tsv(std::string_view text, FeatureSpec spec);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.spec_ == b.spec_ && a.keys_ == b.keys_;
  }

 private:
  FeatureSpec spec_;
  std::vector<FeatureBag::Key> keys_;
  std::map<FeatureBag::Key, std::uint32_t> index_;
};

struct VectorizeOptions {
  bool binary = false;
  std::size_t min_df = 1;
};

// Throws DataError on an empty training split and UsageError on an empty spec.
Vocabulary build_vocab(const std::vector<FeatureBag>& train_bags, const FeatureSpec& spec,
                       std::size_t min_df = 1);

// Drops out-of-vocabulary features. Throws UsageError when `spec` enables a
// namespace the vocabulary was not built with.
SparseVector vectorize(const FeatureBag& bag, const Vocabulary& vocab, const FeatureSpec& spec,
                       bool binary = false);

// All non-empty subsets of `namespaces` in binary counting order: subset m
// (1-based) holds namespaces[i] iff bit i of m is set.
std::vector<FeatureSpec> enumerate_subsets(const std::vector<Namespace>& namespaces);

// svmlight-style rows: "label index:value ...".
std::string format_svmlight(const Dataset& data);
Dataset parse_svmlight(std::string_view text);

// Formats a double with the shortest representation that round-trips.
std::string format_double(double v);

// Feature bags of a fixed sentence list, interned once so that vocabularies
// and matrices for any feature subset and any row subset can be produced
// without re-extracting or re-sorting strings. Results are identical to
// build_vocab + vectorize on the same bags.
class BagTable {
 public:
  explicit BagTable(const std::vector<FeatureBag>& bags);

  std::size_t rows() const { return rows_.size(); }

  struct Projection {
    Vocabulary vocab;
    // For each namespace, local key id -> column, or -1.
    std::array<std::vector<std::int64_t>, kNumNamespaces> column;
  };

  // Vocabulary over `spec` restricted to features seen in `train_rows`.
  Projection project(const std::vector<std::size_t>& train_rows, const FeatureSpec& spec,
                     std::size_t min_df = 1) const;
  SparseVector vector(std::size_t row, const Projection& projection, bool binary = false) const;
  Dataset dataset(const std::vector<std::size_t>& row_ids, const std::vector<int>& labels,
                  const Projection& projection, bool binary = false) const;

 private:
  // Sorted distinct keys per namespace.
  std::array<std::vector<std::string>, kNumNamespaces> keys_;
  // rows_[r][ns] = (local key id, count), ascending ids.
  std::vector<std::array<std::vector<std::pair<std::uint32_t, std::uint32_t>>, kNumNamespaces>> rows_;
};

}  // namespace udirony

#endif  // UDIRONY_VECTORIZER_H_
