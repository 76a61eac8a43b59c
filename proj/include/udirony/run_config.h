#ifndef UDIRONY_RUN_CONFIG_H_
#define UDIRONY_RUN_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "udirony/embeddings.h"
#include "udirony/model.h"
#include "udirony/search.h"

namespace udirony {

// Everything that determines a run. Defaults are the documented ones; the
// serialized form goes into the header of every output.
struct RunConfig {
  std::string command;
  std::string language;
  std::vector<std::string> train_paths;
  std::vector<std::string> test_paths;
  std::vector<std::string> label_paths;
  std::vector<std::string> treebank_paths;
  std::string output_path;
  std::string model_path;
  // Replaces the built-in negation cues when set.
  std::string negation_path;

  FeatureSpec features = FeatureSpec::all();
  ModelKind model = ModelKind::kSvm;
  std::vector<ModelKind> search_models = {kAllModelKinds.begin(), kAllModelKinds.end()};
  TrainConfig train;
  bool binary = false;
  bool normalize_rows = false;
  bool lowercase_forms = true;
  std::size_t min_df = 1;

  Protocol protocol = Protocol::kCrossValidation;
  std::size_t folds = 5;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  bool lenient = false;

  SgnsConfig sgns;

  // Compact JSON with sorted keys.
  std::string to_json() const;
  // "toolkit_version ..." and "run_config {...}" lines, without comment marks.
  std::vector<std::string> header_lines() const;

  NegationLexicon negation_lexicon() const;
  FeaturePipeline pipeline() const;
};

// Reads "key = value" lines ('#' comments, blank lines ignored). Throws
// UsageError on a line without '='.
std::vector<std::pair<std::string, std::string>> parse_config_file(std::string_view text);

}  // namespace udirony

#endif  // UDIRONY_RUN_CONFIG_H_
