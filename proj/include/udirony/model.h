#ifndef UDIRONY_MODEL_H_
#define UDIRONY_MODEL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "udirony/corpus.h"
#include "udirony/features.h"
#include "udirony/forest.h"
#include "udirony/linear_model.h"
#include "udirony/mlp.h"
#include "udirony/vectorizer.h"

namespace udirony {

enum class ModelKind { kSvm, kLogReg, kForest, kMlp };

inline constexpr std::array<ModelKind, 4> kAllModelKinds = {ModelKind::kSvm, ModelKind::kLogReg, ModelKind::kForest,
                                                            ModelKind::kMlp};

std::string_view model_kind_name(ModelKind kind);  // svm, logreg, rf, mlp
std::optional<ModelKind> model_kind_from_name(std::string_view name);

// Hyperparameters of every learner. Seeds inside the per-learner blocks are
// overwritten from the master seed by train_model.
struct TrainConfig {
  SvmConfig svm;
  LogRegConfig logreg;
  ForestConfig forest;
  MlpConfig mlp;
};

// How sentences become rows.
struct FeaturePipeline {
  FeatureSpec spec = FeatureSpec::all();
  ExtractOptions extract;
  bool binary = false;
  // Scale each row to unit L2 norm after vectorizing.
  bool normalize_rows = false;
  std::size_t min_df = 1;
};

using AnyModel = std::variant<LinearModel, ForestModel, MlpModel>;

AnyModel train_model(ModelKind kind, const Dataset& data, const TrainConfig& config, std::uint64_t seed);

struct Prediction {
  std::vector<int> labels;
  // Margin (linear models) or ironic-class probability / vote share.
  std::vector<double> scores;
};

// label = 1 iff score > threshold (0 for margins, 0.5 otherwise).
Prediction predict(const AnyModel& model, const std::vector<SparseVector>& rows);
std::size_t model_dim(const AnyModel& model);

// Bags for each sentence under the pipeline's spec and options.
std::vector<FeatureBag> extract_bags(const std::vector<const LabeledItem*>& items, const FeaturePipeline& pipeline);
Dataset make_dataset(const std::vector<FeatureBag>& bags, const std::vector<int>& labels, const Vocabulary& vocab,
                     const FeaturePipeline& pipeline);
void normalize_l2(SparseVector& v);

struct ModelArtifact {
  ModelKind kind = ModelKind::kSvm;
  AnyModel model;
  Vocabulary vocab;
  FeaturePipeline pipeline;
  std::string language;
  TrainConfig config;
  std::uint64_t seed = 1;
  std::size_t training_rows = 0;
  double training_accuracy = 0.0;
  // Hash of the training-set predictions.
  std::string training_digest;
  // Serialized run configuration, embedded verbatim.
  std::string run_config_json = "{}";
};

// Builds vocabulary and rows from the training split, trains, and records the
// training-set digest.
ModelArtifact train_artifact(const LabeledCorpus& corpus, ModelKind kind, const FeaturePipeline& pipeline,
                             const TrainConfig& config, std::uint64_t seed);

Prediction predict_sentences(const ModelArtifact& artifact, const std::vector<const LabeledItem*>& items);

// Hex FNV-1a over labels and shortest-form scores.
std::string prediction_digest(const Prediction& p);

// JSON text; doubles use the shortest round-trip form, keys are sorted, so
// equal artifacts serialize to identical bytes.
std::string save_artifact(const ModelArtifact& artifact);
ModelArtifact load_artifact(std::string_view text);

// Hyperparameters as JSON text (used by run reports).
std::string train_config_json(const TrainConfig& config);

}  // namespace udirony

#endif  // UDIRONY_MODEL_H_
