#ifndef UDIRONY_SEARCH_H_
#define UDIRONY_SEARCH_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "udirony/corpus.h"
#include "udirony/metrics.h"
#include "udirony/model.h"

namespace udirony {

// kPaper selects on the test split (train on train, score on test); kCrossValidation
// scores by stratified k-fold on the training split only.
enum class Protocol { kCrossValidation, kPaper };

std::string_view protocol_name(Protocol p);  // "cv", "paper"

struct SearchOptions {
  std::vector<ModelKind> models = {kAllModelKinds.begin(), kAllModelKinds.end()};
  // Namespaces whose non-empty subsets are enumerated.
  std::vector<Namespace> namespaces = {kAllNamespaces.begin(), kAllNamespaces.end()};
  Protocol protocol = Protocol::kCrossValidation;
  std::size_t folds = 5;
  std::uint64_t seed = 1;
  // Worker threads; 0 means hardware concurrency.
  std::size_t jobs = 1;
  TrainConfig train;
  // The spec field is ignored; every other field applies to all cells.
  FeaturePipeline pipeline;
  // Called from worker threads after each finished subset.
  std::function<void(std::size_t done, std::size_t total)> progress;
};

struct SearchCell {
  ModelKind model = ModelKind::kSvm;
  FeatureSpec spec;
  bool ok = false;
  std::string error;
  EvalReport report;
  std::uint64_t seed = 0;
};

struct SearchResult {
  // Model-major: all subsets of models[0], then models[1], ...
  std::vector<SearchCell> cells;
  // Index of the best successful cell (highest macro-F1, first in table order
  // on ties), or cells.size() if every cell failed.
  std::size_t best = 0;

  const SearchCell* argmax() const { return best < cells.size() ? &cells[best] : nullptr; }
};

SearchResult search_best_features(const LabeledCorpus& corpus, const SearchOptions& options);

// Stratified fold id per row: each class is shuffled with `seed` and dealt
// round-robin over k folds.
std::vector<std::size_t> stratified_folds(const std::vector<int>& labels, std::size_t k, std::uint64_t seed);

// '#'-prefixed header lines, then the columns model, subset_bitmask,
// namespaces, macro_f1, f1_ironic, f1_not, seed. Failed cells carry "error"
// in the score columns and the message as an extra column.
std::string format_search_tsv(const SearchResult& result, const std::vector<std::string>& header = {});

// Linear SVM on the token unigram bag: train on train, score on test.
EvalReport run_baseline_svc_unigrams(const LabeledCorpus& corpus, const TrainConfig& config = {},
                                     std::uint64_t seed = 1, const ExtractOptions& extract = {});

}  // namespace udirony

#endif  // UDIRONY_SEARCH_H_
