#include "udirony/search.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "udirony/error.h"
#include "udirony/random.h"

namespace udirony {
namespace {

struct FoldData {
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> eval_rows;
};

// Scores every model on one subset; fold predictions are pooled before
// computing the report.
void run_subset(const BagTable& table, const std::vector<int>& labels, const std::vector<FoldData>& folds,
                const FeatureSpec& spec, const SearchOptions& options, std::size_t subset_index,
                std::size_t n_subsets, std::vector<SearchCell>& cells) {
  const std::size_t n_models = options.models.size();
  std::vector<std::array<std::size_t, 4>> confusion(n_models, {0, 0, 0, 0});
  std::vector<std::string> errors(n_models);

  for (const FoldData& fold : folds) {
    const auto proj = table.project(fold.train_rows, spec, options.pipeline.min_df);
    Dataset train = table.dataset(fold.train_rows, labels, proj, options.pipeline.binary);
    Dataset eval = table.dataset(fold.eval_rows, labels, proj, options.pipeline.binary);
    if (options.pipeline.normalize_rows) {
      for (auto& r : train.rows) normalize_l2(r);
      for (auto& r : eval.rows) normalize_l2(r);
    }
    for (std::size_t m = 0; m < n_models; ++m) {
      if (!errors[m].empty()) continue;
      try {
        if (train.dim == 0) throw TrainingError("empty vocabulary for this subset");
        const AnyModel model = train_model(options.models[m], train, options.train, options.seed);
        const Prediction p = predict(model, eval.rows);
        for (std::size_t i = 0; i < p.labels.size(); ++i) {
          const int gold = eval.labels[i];
          const int pred = p.labels[i];
          ++confusion[m][pred == 1 ? (gold == 1 ? 0 : 1) : (gold == 1 ? 2 : 3)];
        }
      } catch (const std::exception& e) {
        errors[m] = e.what();
      }
    }
  }
  for (std::size_t m = 0; m < n_models; ++m) {
    SearchCell& cell = cells[m * n_subsets + subset_index];
    cell.model = options.models[m];
    cell.spec = spec;
    cell.seed = options.seed;
    if (errors[m].empty()) {
      cell.ok = true;
      cell.report = report_from_counts(confusion[m][0], confusion[m][1], confusion[m][2], confusion[m][3]);
    } else {
      cell.error = errors[m];
    }
  }
}

}  // namespace

std::string_view protocol_name(Protocol p) { return p == Protocol::kPaper ? "paper" : "cv"; }

std::vector<std::size_t> stratified_folds(const std::vector<int>& labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw UsageError("cross-validation needs at least 2 folds");
  std::vector<std::size_t> fold(labels.size(), 0);
  Rng rng(seed);
  std::size_t next = 0;
  for (int cls : {1, 0}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    shuffle(members, rng);
    for (std::size_t i : members) fold[i] = next++ % k;
  }
  return fold;
}

SearchResult search_best_features(const LabeledCorpus& corpus, const SearchOptions& options) {
  if (options.models.empty()) throw UsageError("search needs at least one model");
  if (options.namespaces.empty()) throw UsageError("search needs at least one namespace");
  const auto subsets = enumerate_subsets(options.namespaces);

  std::vector<const LabeledItem*> items;
  std::vector<FoldData> folds;
  const auto train_items = corpus.of_split(Split::kTrain);
  if (train_items.empty()) throw DataError("empty training split");
  FeatureSpec union_spec;
  for (const auto& s : subsets) union_spec = FeatureSpec(union_spec.mask() | s.mask());

  if (options.protocol == Protocol::kPaper) {
    const auto test_items = corpus.of_split(Split::kTest);
    if (test_items.empty()) throw DataError("the paper protocol needs a test split");
    items = train_items;
    items.insert(items.end(), test_items.begin(), test_items.end());
    FoldData f;
    for (std::size_t i = 0; i < train_items.size(); ++i) f.train_rows.push_back(i);
    for (std::size_t i = 0; i < test_items.size(); ++i) f.eval_rows.push_back(train_items.size() + i);
    folds.push_back(std::move(f));
  } else {
    items = train_items;
    std::vector<int> train_labels;
    for (const auto* it : items) train_labels.push_back(it->label);
    const auto fold_of = stratified_folds(train_labels, options.folds, mix_seed(options.seed, 0xF01D));
    folds.resize(options.folds);
    for (std::size_t i = 0; i < items.size(); ++i) {
      for (std::size_t f = 0; f < options.folds; ++f) {
        (fold_of[i] == f ? folds[f].eval_rows : folds[f].train_rows).push_back(i);
      }
    }
    folds.erase(std::remove_if(folds.begin(), folds.end(), [](const FoldData& f) { return f.eval_rows.empty(); }),
                folds.end());
  }

  FeaturePipeline pipeline = options.pipeline;
  pipeline.spec = union_spec;
  const BagTable table(extract_bags(items, pipeline));
  std::vector<int> labels;
  for (const auto* it : items) labels.push_back(it->label);

  SearchOptions inner = options;
  inner.train.forest.jobs = 1;

  SearchResult result;
  result.cells.resize(options.models.size() * subsets.size());
  std::size_t jobs = options.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.jobs;
  jobs = std::min(jobs, subsets.size());

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex fail_mu;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      const std::size_t s = next.fetch_add(1);
      if (s >= subsets.size()) return;
      try {
        run_subset(table, labels, folds, subsets[s], inner, s, subsets.size(), result.cells);
      } catch (...) {
        std::lock_guard<std::mutex> lock(fail_mu);
        if (!failure) failure = std::current_exception();
      }
      const std::size_t d = done.fetch_add(1) + 1;
      if (options.progress) options.progress(d, subsets.size());
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  result.best = result.cells.size();
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const SearchCell& c = result.cells[i];
    if (!c.ok) continue;
    if (result.best == result.cells.size() || c.report.macro_f1 > result.cells[result.best].report.macro_f1) {
      result.best = i;
    }
  }
  return result;
}

std::string format_search_tsv(const SearchResult& result, const std::vector<std::string>& header) {
  std::string out;
  for (const auto& line : header) out += "# " + line + "\n";
  out += "model\tsubset_bitmask\tnamespaces\tmacro_f1\tf1_ironic\tf1_not\tseed\n";
  for (const SearchCell& c : result.cells) {
    out += model_kind_name(c.model);
    out += '\t' + std::to_string(c.spec.mask()) + '\t' + c.spec.to_string() + '\t';
    if (c.ok) {
      out += format_double(c.report.macro_f1) + '\t' + format_double(c.report.ironic.f1) + '\t' +
             format_double(c.report.not_ironic.f1);
    } else {
      out += "error\terror\terror";
    }
    out += '\t' + std::to_string(c.seed);
    if (!c.ok) {
      std::string msg = c.error;
      std::replace(msg.begin(), msg.end(), '\t', ' ');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      out += '\t' + msg;
    }
    out += '\n';
  }
  if (const SearchCell* best = result.argmax()) {
    out += "# best\t" + std::string(model_kind_name(best->model)) + '\t' + std::to_string(best->spec.mask()) + '\t' +
           best->spec.to_string() + '\t' + format_double(best->report.macro_f1) + '\n';
  } else {
    out += "# best\tnone\n";
  }
  return out;
}

EvalReport run_baseline_svc_unigrams(const LabeledCorpus& corpus, const TrainConfig& config, std::uint64_t seed,
                                     const ExtractOptions& extract) {
  FeaturePipeline pipeline;
  pipeline.spec = FeatureSpec{Namespace::kNgrams};
  pipeline.extract = extract;
  pipeline.extract.ngram_max = 1;
  const ModelArtifact a = train_artifact(corpus, ModelKind::kSvm, pipeline, config, seed);
  const auto test = corpus.of_split(Split::kTest);
  if (test.empty()) throw DataError("empty test split");
  std::vector<int> gold;
  for (const auto* it : test) gold.push_back(it->label);
  return macro_f1(predict_sentences(a, test).labels, gold);
}

}  // namespace udirony
