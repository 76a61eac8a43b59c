#include "udirony/run_config.h"

#include "json.hpp"
#include "udirony/atomic_file.h"
#include "udirony/error.h"
#include "udirony/version.h"

namespace udirony {

using nlohmann::json;

std::string RunConfig::to_json() const {
  json models = json::array();
  for (ModelKind k : search_models) models.push_back(model_kind_name(k));
  json j{
      {"command", command},
      {"language", language},
      {"paths",
       {{"train", train_paths},
        {"test", test_paths},
        {"labels", label_paths},
        {"treebanks", treebank_paths},
        {"output", output_path},
        {"model", model_path},
        {"negation", negation_path}}},
      {"features", features.to_string()},
      {"model", model_kind_name(model)},
      {"search_models", std::move(models)},
      {"hyperparameters", json::parse(train_config_json(train))},
      {"binary", binary},
      {"normalize_rows", normalize_rows},
      {"lowercase_forms", lowercase_forms},
      {"min_df", min_df},
      {"protocol", protocol_name(protocol)},
      {"folds", folds},
      {"seed", seed},
      {"jobs", jobs},
      {"lenient", lenient},
      {"embedding",
       {{"dim", sgns.dim},
        {"negatives", sgns.negatives},
        {"epochs", sgns.epochs},
        {"min_count", sgns.min_count},
        {"learning_rate", sgns.learning_rate},
        {"seed", sgns.seed}}},
  };
  return j.dump();
}

std::vector<std::string> RunConfig::header_lines() const {
  return {"toolkit_version " + std::string(kVersion), "run_config " + to_json()};
}

NegationLexicon RunConfig::negation_lexicon() const {
  if (negation_path.empty()) return NegationLexicon::builtin(language);
  return NegationLexicon::parse(read_file(negation_path));
}

FeaturePipeline RunConfig::pipeline() const {
  FeaturePipeline p;
  p.spec = features;
  p.extract.lowercase_forms = lowercase_forms;
  p.extract.negation = negation_lexicon();
  p.binary = binary;
  p.normalize_rows = normalize_rows;
  p.min_df = min_df;
  return p;
}

std::vector<std::pair<std::string, std::string>> parse_config_file(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
  };
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string_view key = trim(line.substr(0, eq));
    if (key.empty()) throw UsageError("config line " + std::to_string(line_no) + ": empty key");
    out.emplace_back(std::string(key), std::string(trim(line.substr(eq + 1))));
  }
  return out;
}

}  // namespace udirony
