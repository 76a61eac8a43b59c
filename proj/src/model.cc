#include "udirony/model.h"

#include <cmath>

#include "json.hpp"
#include "udirony/error.h"
#include "udirony/hash.h"
#include "udirony/version.h"

namespace udirony {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;
constexpr const char* kFormatName = "udirony-model";

json to_json(const TrainConfig& c) {
  return json{
      {"svm", {{"c", c.svm.c}, {"tolerance", c.svm.tolerance}, {"max_epochs", c.svm.max_epochs}}},
      {"logreg",
       {{"c", c.logreg.c},
        {"max_epochs", c.logreg.max_epochs},
        {"converge", c.logreg.converge},
        {"converge_max_epochs", c.logreg.converge_max_epochs},
        {"tolerance", c.logreg.tolerance},
        {"learning_rate", c.logreg.learning_rate}}},
      {"rf",
       {{"n_trees", c.forest.n_trees},
        {"max_features", c.forest.max_features},
        {"bootstrap", c.forest.bootstrap},
        {"max_depth", c.forest.max_depth},
        {"min_samples_leaf", c.forest.min_samples_leaf}}},
      {"mlp",
       {{"hidden", c.mlp.hidden},
        {"learning_rate", c.mlp.learning_rate},
        {"batch_size", c.mlp.batch_size},
        {"max_epochs", c.mlp.max_epochs},
        {"early_stopping", c.mlp.early_stopping},
        {"validation_fraction", c.mlp.validation_fraction},
        {"patience", c.mlp.patience},
        {"tolerance", c.mlp.tolerance},
        {"init_range", c.mlp.init_range}}},
  };
}

TrainConfig train_config_from_json(const json& j) {
  TrainConfig c;
  const auto& s = j.at("svm");
  c.svm.c = s.at("c");
  c.svm.tolerance = s.at("tolerance");
  c.svm.max_epochs = s.at("max_epochs");
  const auto& l = j.at("logreg");
  c.logreg.c = l.at("c");
  c.logreg.max_epochs = l.at("max_epochs");
  c.logreg.converge = l.at("converge");
  c.logreg.converge_max_epochs = l.at("converge_max_epochs");
  c.logreg.tolerance = l.at("tolerance");
  c.logreg.learning_rate = l.at("learning_rate");
  const auto& f = j.at("rf");
  c.forest.n_trees = f.at("n_trees");
  c.forest.max_features = f.at("max_features");
  c.forest.bootstrap = f.at("bootstrap");
  c.forest.max_depth = f.at("max_depth");
  c.forest.min_samples_leaf = f.at("min_samples_leaf");
  const auto& m = j.at("mlp");
  c.mlp.hidden = m.at("hidden");
  c.mlp.learning_rate = m.at("learning_rate");
  c.mlp.batch_size = m.at("batch_size");
  c.mlp.max_epochs = m.at("max_epochs");
  c.mlp.early_stopping = m.at("early_stopping");
  c.mlp.validation_fraction = m.at("validation_fraction");
  c.mlp.patience = m.at("patience");
  c.mlp.tolerance = m.at("tolerance");
  c.mlp.init_range = m.at("init_range");
  return c;
}

json to_json(const AnyModel& model) {
  if (const auto* lin = std::get_if<LinearModel>(&model)) {
    return json{{"type", "linear"},
                {"loss", lin->loss == LinearLoss::kHinge ? "hinge" : "logistic"},
                {"c", lin->c},
                {"bias", lin->bias},
                {"weights", lin->weights}};
  }
  if (const auto* forest = std::get_if<ForestModel>(&model)) {
    json trees = json::array();
    for (const auto& t : forest->trees) {
      json nodes = json::array();
      for (const auto& n : t.nodes) {
        nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.counts[0], n.counts[1]}));
      }
      trees.push_back(std::move(nodes));
    }
    return json{{"type", "forest"}, {"dim", forest->dim}, {"tree_seeds", forest->tree_seeds}, {"trees", std::move(trees)}};
  }
  const auto& mlp = std::get<MlpModel>(model);
  return json{{"type", "mlp"},
              {"input_dim", mlp.input_dim},
              {"hidden", mlp.hidden},
              {"hidden_weights", mlp.hidden_weights},
              {"hidden_bias", mlp.hidden_bias},
              {"output_weights", mlp.output_weights},
              {"output_bias", mlp.output_bias}};
}

AnyModel model_from_json(const json& j) {
  const std::string type = j.at("type");
  if (type == "linear") {
    LinearModel m;
    m.loss = j.at("loss") == "hinge" ? LinearLoss::kHinge : LinearLoss::kLogistic;
    m.c = j.at("c");
    m.bias = j.at("bias");
    m.weights = j.at("weights").get<std::vector<double>>();
    return m;
  }
  if (type == "forest") {
    ForestModel f;
    f.dim = j.at("dim");
    f.tree_seeds = j.at("tree_seeds").get<std::vector<std::uint64_t>>();
    for (const auto& jt : j.at("trees")) {
      DecisionTree t;
      for (const auto& jn : jt) {
        TreeNode n;
        n.feature = jn.at(0);
        n.threshold = jn.at(1);
        n.left = jn.at(2);
        n.right = jn.at(3);
        n.counts = {jn.at(4).get<std::uint32_t>(), jn.at(5).get<std::uint32_t>()};
        t.nodes.push_back(n);
      }
      f.trees.push_back(std::move(t));
    }
    return f;
  }
  if (type == "mlp") {
    MlpModel m;
    m.input_dim = j.at("input_dim");
    m.hidden = j.at("hidden");
    m.hidden_weights = j.at("hidden_weights").get<std::vector<double>>();
    m.hidden_bias = j.at("hidden_bias").get<std::vector<double>>();
    m.output_weights = j.at("output_weights").get<std::vector<double>>();
    m.output_bias = j.at("output_bias");
    if (m.hidden_weights.size() != m.input_dim * m.hidden) throw DataError("model artifact: hidden weight shape mismatch");
    return m;
  }
  throw DataError("model artifact: unknown model type '" + type + "'");
}

}  // namespace

std::string_view model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kSvm: return "svm";
    case ModelKind::kLogReg: return "logreg";
    case ModelKind::kForest: return "rf";
    case ModelKind::kMlp: return "mlp";
  }
  return "";
}

std::optional<ModelKind> model_kind_from_name(std::string_view name) {
  for (ModelKind k : kAllModelKinds) {
    if (model_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

AnyModel train_model(ModelKind kind, const Dataset& data, const TrainConfig& config, std::uint64_t seed) {
  switch (kind) {
    case ModelKind::kSvm: {
      SvmConfig c = config.svm;
      c.seed = seed;
      return train_svm(data, c);
    }
    case ModelKind::kLogReg: {
      LogRegConfig c = config.logreg;
      c.seed = seed;
      return train_logreg(data, c);
    }
    case ModelKind::kForest: {
      ForestConfig c = config.forest;
      c.seed = seed;
      return train_forest(data, c);
    }
    case ModelKind::kMlp: {
      MlpConfig c = config.mlp;
      c.seed = seed;
      return train_mlp(data, c);
    }
  }
  throw UsageError("unknown model kind");
}

std::size_t model_dim(const AnyModel& model) {
  if (const auto* lin = std::get_if<LinearModel>(&model)) return lin->weights.size();
  if (const auto* forest = std::get_if<ForestModel>(&model)) return forest->dim;
  return std::get<MlpModel>(model).input_dim;
}

Prediction predict(const AnyModel& model, const std::vector<SparseVector>& rows) {
  const std::size_t dim = model_dim(model);
  Prediction p;
  p.labels.reserve(rows.size());
  p.scores.reserve(rows.size());
  for (const auto& x : rows) {
    if (!x.entries.empty() && x.entries.back().first >= dim) {
      throw DataError("dimension mismatch: feature index " + std::to_string(x.entries.back().first) +
                      " but the model has " + std::to_string(dim) + " features");
    }
    double score;
    double threshold = 0.5;
    if (const auto* lin = std::get_if<LinearModel>(&model)) {
      score = lin->decision(x);
      threshold = 0.0;
    } else if (const auto* forest = std::get_if<ForestModel>(&model)) {
      score = forest->vote_fraction(x);
    } else {
      score = std::get<MlpModel>(model).predict_proba(x);
    }
    p.labels.push_back(score > threshold ? 1 : 0);
    p.scores.push_back(score);
  }
  return p;
}

void normalize_l2(SparseVector& v) {
  const double n = std::sqrt(v.squared_norm());
  if (n <= 0) return;
  for (auto& [i, value] : v.entries) value /= n;
}

std::vector<FeatureBag> extract_bags(const std::vector<const LabeledItem*>& items, const FeaturePipeline& pipeline) {
  std::vector<FeatureBag> bags;
  bags.reserve(items.size());
  for (const auto* item : items) bags.push_back(extract_features(item->sentence, pipeline.spec, pipeline.extract));
  return bags;
}

Dataset make_dataset(const std::vector<FeatureBag>& bags, const std::vector<int>& labels, const Vocabulary& vocab,
                     const FeaturePipeline& pipeline) {
  Dataset d;
  d.dim = vocab.size();
  d.labels = labels;
  d.rows.reserve(bags.size());
  for (const auto& bag : bags) {
    SparseVector v = vectorize(bag, vocab, pipeline.spec, pipeline.binary);
    if (pipeline.normalize_rows) normalize_l2(v);
    d.rows.push_back(std::move(v));
  }
  return d;
}

std::string prediction_digest(const Prediction& p) {
  std::uint64_t h = fnv1a64("");
  for (std::size_t i = 0; i < p.labels.size(); ++i) {
    h = fnv1a64(std::to_string(p.labels[i]) + ":" + format_double(p.scores[i]) + ";", h);
  }
  return hex64(h);
}

ModelArtifact train_artifact(const LabeledCorpus& corpus, ModelKind kind, const FeaturePipeline& pipeline,
                             const TrainConfig& config, std::uint64_t seed) {
  const auto items = corpus.of_split(Split::kTrain);
  const auto bags = extract_bags(items, pipeline);
  std::vector<int> labels;
  for (const auto* item : items) labels.push_back(item->label);
  ModelArtifact a;
  a.kind = kind;
  a.vocab = build_vocab(bags, pipeline.spec, pipeline.min_df);
  a.pipeline = pipeline;
  a.language = items.empty() ? std::string() : items.front()->language;
  a.config = config;
  a.seed = seed;
  const Dataset data = make_dataset(bags, labels, a.vocab, pipeline);
  a.model = train_model(kind, data, config, seed);
  const Prediction p = predict(a.model, data.rows);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < p.labels.size(); ++i) correct += p.labels[i] == labels[i];
  a.training_rows = data.size();
  a.training_accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
  a.training_digest = prediction_digest(p);
  return a;
}

Prediction predict_sentences(const ModelArtifact& artifact, const std::vector<const LabeledItem*>& items) {
  const auto bags = extract_bags(items, artifact.pipeline);
  std::vector<int> labels(items.size(), 0);
  const Dataset data = make_dataset(bags, labels, artifact.vocab, artifact.pipeline);
  return predict(artifact.model, data.rows);
}

std::string train_config_json(const TrainConfig& config) { return to_json(config).dump(); }

std::string save_artifact(const ModelArtifact& a) {
  json vocab = json::array();
  for (const auto& k : a.vocab.keys()) vocab.push_back(json::array({namespace_name(k.ns), k.key}));
  json j{
      {"format", kFormatName},
      {"format_version", kFormatVersion},
      {"toolkit_version", kVersion},
      {"model_kind", model_kind_name(a.kind)},
      {"seed", a.seed},
      {"language", a.language},
      {"pipeline",
       {{"features", a.pipeline.spec.to_string()},
        {"lowercase_forms", a.pipeline.extract.lowercase_forms},
        {"ngram_max", a.pipeline.extract.ngram_max},
        {"negation_cues", a.pipeline.extract.negation.cues()},
        {"binary", a.pipeline.binary},
        {"normalize_rows", a.pipeline.normalize_rows},
        {"min_df", a.pipeline.min_df}}},
      {"train_config", to_json(a.config)},
      {"run_config", json::parse(a.run_config_json)},
      {"vocabulary", std::move(vocab)},
      {"vocabulary_digest", hex64(fnv1a64(a.vocab.to_tsv()))},
      {"training", {{"rows", a.training_rows}, {"accuracy", a.training_accuracy}, {"digest", a.training_digest}}},
      {"parameters", to_json(a.model)},
  };
  return j.dump() + "\n";
}

ModelArtifact load_artifact(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("model artifact is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format") != kFormatName) throw DataError("not a model artifact");
    if (j.at("format_version") != kFormatVersion) {
      throw DataError("unsupported model artifact version " + j.at("format_version").dump());
    }
    ModelArtifact a;
    auto kind = model_kind_from_name(j.at("model_kind").get<std::string>());
    if (!kind) throw DataError("unknown model kind in artifact");
    a.kind = *kind;
    a.seed = j.at("seed");
    a.language = j.at("language");
    const auto& p = j.at("pipeline");
    a.pipeline.spec = FeatureSpec::parse(p.at("features").get<std::string>());
    a.pipeline.extract.lowercase_forms = p.at("lowercase_forms");
    a.pipeline.extract.ngram_max = p.at("ngram_max");
    a.pipeline.extract.negation = NegationLexicon(p.at("negation_cues").get<std::set<std::string>>());
    a.pipeline.binary = p.at("binary");
    a.pipeline.normalize_rows = p.at("normalize_rows");
    a.pipeline.min_df = p.at("min_df");
    a.config = train_config_from_json(j.at("train_config"));
    a.run_config_json = j.at("run_config").dump();
    std::vector<FeatureBag::Key> keys;
    for (const auto& e : j.at("vocabulary")) {
      auto ns = namespace_from_name(e.at(0).get<std::string>());
      if (!ns) throw DataError("unknown namespace in artifact vocabulary");
      keys.push_back({*ns, e.at(1).get<std::string>()});
    }
    a.vocab = Vocabulary(a.pipeline.spec, std::move(keys));
    if (hex64(fnv1a64(a.vocab.to_tsv())) != j.at("vocabulary_digest")) {
      throw DataError("model artifact vocabulary digest mismatch");
    }
    const auto& t = j.at("training");
    a.training_rows = t.at("rows");
    a.training_accuracy = t.at("accuracy");
    a.training_digest = t.at("digest");
    a.model = model_from_json(j.at("parameters"));
    return a;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model artifact: ") + e.what());
  }
}

}  // namespace udirony
