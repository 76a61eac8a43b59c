#ifndef UDIRONY_EMBEDDINGS_H_
#define UDIRONY_EMBEDDINGS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "udirony/conllu.h"

namespace udirony {

// Suffix marking a context seen from the dependent's side.
inline constexpr std::string_view kInverseMarker = "⁻¹";

struct ContextPair {
  std::string word;
  std::string context;

  friend bool operator==(const ContextPair&, const ContextPair&) = default;
};

// Two pairs per edge (h, d, r): (h, d/r) and (d, h/r⁻¹). The root's virtual
// edge is skipped.
std::vector<ContextPair> extract_contexts(const std::vector<Sentence>& treebank, bool lowercase_forms = true);

struct SgnsConfig {
  std::size_t dim = 300;
  std::size_t negatives = 5;
  int epochs = 5;
  std::size_t min_count = 2;
  double learning_rate = 0.025;
  std::uint64_t seed = 1;
};

struct EmbeddingTable {
  std::size_t dim = 0;
  // Ordered by descending count, then bytewise.
  std::vector<std::string> words;
  std::vector<std::string> contexts;
  std::vector<std::uint64_t> word_counts;
  std::vector<std::uint64_t> context_counts;
  // Row-major, dim values per entry.
  std::vector<double> word_vectors;
  std::vector<double> context_vectors;
  SgnsConfig config;

  const double* word_vector(std::size_t i) const { return &word_vectors[i * dim]; }
  const double* context_vector(std::size_t i) const { return &context_vectors[i * dim]; }
  std::optional<std::size_t> word_index(std::string_view w) const;
  std::optional<std::size_t> context_index(std::string_view c) const;
};

// Per-epoch hook: epoch number (1-based) and the table after that epoch.
using SgnsEpochHook = std::function<void(int, const EmbeddingTable&)>;

// Throws TrainingError when no word or context survives min_count.
EmbeddingTable train_sgns(const std::vector<ContextPair>& pairs, const SgnsConfig& config,
                          const SgnsEpochHook& on_epoch = {});

// log σ(w·c) + Σ_k log σ(−w·n_k) for one positive pair.
double sgns_objective(const double* w, const double* c, const std::vector<const double*>& negs, std::size_t dim);

// Gradient of sgns_objective. grad_w and grad_c hold dim values,
// grad_negs holds negs.size() * dim values.
void sgns_gradient(const double* w, const double* c, const std::vector<const double*>& negs, std::size_t dim,
                   double* grad_w, double* grad_c, double* grad_negs);

struct Neighbor {
  std::string word;
  double cosine = 0.0;
};

// Cosine-ranked words excluding the query; ties by word. Throws DataError for
// an out-of-vocabulary query.
std::vector<Neighbor> nearest_neighbors(const EmbeddingTable& table, std::string_view word, std::size_t k);

double cosine(const double* a, const double* b, std::size_t dim);

// "vocab_size dim" header, then "word v1 ... vd" per line.
std::string format_word_vectors(const EmbeddingTable& table);

}  // namespace udirony

#endif  // UDIRONY_EMBEDDINGS_H_
