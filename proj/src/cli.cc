#include "udirony/cli.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "udirony/atomic_file.h"
#include "udirony/conllu.h"
#include "udirony/corpus.h"
#include "udirony/embeddings.h"
#include "udirony/error.h"
#include "udirony/error_report.h"
#include "udirony/metrics.h"
#include "udirony/model.h"
#include "udirony/run_config.h"
#include "udirony/search.h"
#include "udirony/version.h"

namespace udirony {
namespace {

namespace fs = std::filesystem;

std::string header_block(const RunConfig& rc) {
  std::string out;
  for (const auto& line : rc.header_lines()) out += "# " + line + "\n";
  return out;
}

// Formats whose layout is fixed (svmlight, vocabulary, word vectors) get the
// run configuration in a "<path>.run.json" sidecar.
void write_sidecar(const std::string& path, const RunConfig& rc) {
  nlohmann::json j{{"toolkit_version", kVersion}, {"run_config", nlohmann::json::parse(rc.to_json())}};
  write_file_atomic(path + ".run.json", j.dump() + "\n");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    std::string item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// Prepends config-file entries as --key=value arguments, skipping keys that
// the command line already sets, so flags win over the file.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.empty()) return args;
  const auto entries = parse_config_file(read_file(path));
  auto on_command_line = [&](const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
  };
  std::vector<std::string> injected;
  for (const auto& [key, value] : entries) {
    if (key == "config" || on_command_line(key)) continue;
    std::istringstream words(value);
    std::string word;
    bool any = false;
    while (words >> word) {
      injected.push_back("--" + key + "=" + word);
      any = true;
    }
    if (!any) injected.push_back("--" + key + "=");
  }
  std::vector<std::string> out;
  out.push_back(args.front());
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), args.begin() + 1, args.end());
  return out;
}

std::vector<std::string> collect_treebanks(const std::vector<std::string>& paths) {
  std::vector<std::string> files;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      std::vector<std::string> found;
      for (const auto& e : fs::recursive_directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".conllu") found.push_back(e.path().string());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::exists(p)) {
      files.push_back(p);
    } else {
      throw DataError("treebank path does not exist: " + p);
    }
  }
  if (files.empty()) throw DataError("no .conllu files under the given treebank paths");
  return files;
}

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {
    if (const char* env = std::getenv("UDIRONY_JOBS")) {
      try {
        rc_.jobs = static_cast<std::size_t>(std::stoul(env));
      } catch (const std::exception&) {
        throw UsageError("UDIRONY_JOBS must be a non-negative integer");
      }
    }
  }

  int run(const std::vector<std::string>& raw_args);

 private:
  void add_common(CLI::App* cmd) {
    cmd->add_option("--config", config_path_, "Plain 'key = value' file; keys are long flag names, flags override it");
    cmd->add_option("--seed", rc_.seed, "Master seed")->capture_default_str();
    cmd->add_option("--jobs", rc_.jobs, "Worker threads (0 = all cores; default from UDIRONY_JOBS, else 1)")
        ->capture_default_str();
    cmd->add_flag("--lenient", rc_.lenient, "Drop malformed sentences with a warning instead of failing");
    cmd->add_option("--language", rc_.language, "Language tag (selects the built-in negation cues)");
  }
  void add_corpus(CLI::App* cmd) {
    cmd->add_option("--train", rc_.train_paths, "Training CoNLL-U file(s)");
    cmd->add_option("--test", rc_.test_paths, "Test CoNLL-U file(s)");
    cmd->add_option("--labels", rc_.label_paths, "sent_id<TAB>label sidecar(s)");
  }
  void add_pipeline(CLI::App* cmd) {
    cmd->add_option("--features", features_, "Comma-separated namespaces or 'all'")->capture_default_str();
    cmd->add_flag("--binary", rc_.binary, "Presence/absence values instead of counts");
    cmd->add_flag("--normalize", rc_.normalize_rows, "Scale rows to unit L2 norm");
    cmd->add_option("--min-df", rc_.min_df, "Minimum training document frequency")->capture_default_str();
    cmd->add_flag("--no-lowercase{false},--lowercase{true}", rc_.lowercase_forms, "Lowercase word forms (default on)");
    cmd->add_option("--negation", rc_.negation_path, "Negation cue list, one per line (replaces the built-in cues)");
  }
  void add_hyper(CLI::App* cmd) {
    cmd->add_option("--model", model_, "svm | logreg | rf | mlp")->capture_default_str();
    TrainConfig& t = rc_.train;
    cmd->add_option("--svm-c", t.svm.c, "SVM cost C")->capture_default_str();
    cmd->add_option("--svm-tolerance", t.svm.tolerance, "SVM projected-gradient tolerance")->capture_default_str();
    cmd->add_option("--svm-epochs", t.svm.max_epochs, "SVM maximum passes")->capture_default_str();
    cmd->add_option("--logreg-c", t.logreg.c, "Logistic regression C")->capture_default_str();
    cmd->add_option("--logreg-epochs", t.logreg.max_epochs, "Logistic regression SGD epochs")->capture_default_str();
    cmd->add_flag("--logreg-converge", t.logreg.converge, "Run logistic regression SGD until the loss settles");
    cmd->add_option("--rf-trees", t.forest.n_trees, "Random forest size")->capture_default_str();
    cmd->add_option("--rf-max-features", t.forest.max_features, "Features tried per split (0 = sqrt)")
        ->capture_default_str();
    cmd->add_option("--rf-max-depth", t.forest.max_depth, "Tree depth limit (0 = none)")->capture_default_str();
    cmd->add_option("--mlp-hidden", t.mlp.hidden, "Hidden units")->capture_default_str();
    cmd->add_option("--mlp-lr", t.mlp.learning_rate, "MLP learning rate")->capture_default_str();
    cmd->add_option("--mlp-batch", t.mlp.batch_size, "MLP mini-batch size")->capture_default_str();
    cmd->add_option("--mlp-max-epochs", t.mlp.max_epochs, "MLP epoch limit")->capture_default_str();
    cmd->add_flag("--mlp-no-early-stopping{false}", t.mlp.early_stopping, "Train all epochs without a validation split");
  }

  void finalize_options() {
    rc_.features = FeatureSpec::parse(features_);
    auto kind = model_kind_from_name(model_);
    if (!kind) throw UsageError("unknown model '" + model_ + "' (expected svm, logreg, rf or mlp)");
    rc_.model = *kind;
    rc_.search_models.clear();
    for (const auto& name : split_list(models_)) {
      auto k = model_kind_from_name(name);
      if (!k) throw UsageError("unknown model '" + name + "' in --models");
      rc_.search_models.push_back(*k);
    }
    if (paper_protocol_) protocol_ = "paper";
    if (protocol_ == "paper") {
      rc_.protocol = Protocol::kPaper;
    } else if (protocol_ == "cv") {
      rc_.protocol = Protocol::kCrossValidation;
    } else {
      throw UsageError("unknown protocol '" + protocol_ + "' (expected cv or paper)");
    }
    rc_.train.forest.jobs = rc_.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : rc_.jobs;
    rc_.sgns.seed = rc_.seed;
  }

  LabeledCorpus load(bool need_train, bool need_test) {
    if (need_train && rc_.train_paths.empty()) throw UsageError("missing input: --train is required");
    if (need_test && rc_.test_paths.empty()) throw UsageError("missing input: --test is required");
    auto result = load_corpus_files(rc_.train_paths, rc_.test_paths, rc_.label_paths, rc_.language, rc_.lenient);
    for (const auto& w : result.warnings) err_ << "warning: " << w << "\n";
    return std::move(result.corpus);
  }

  void check_contradictions(const LabeledCorpus& corpus, ModelKind kind) {
    const std::size_t n = corpus.of_split(Split::kTrain).size();
    if (kind == ModelKind::kMlp && rc_.train.mlp.early_stopping && n < 10) {
      throw UsageError("config contradiction: --model mlp with early stopping needs at least 10 training tweets, got " +
                       std::to_string(n));
    }
  }

  ModelArtifact obtain_model(const LabeledCorpus& corpus) {
    if (!rc_.model_path.empty()) return load_artifact(read_file(rc_.model_path));
    if (rc_.train_paths.empty()) throw UsageError("missing input: give --model-file or --train");
    check_contradictions(corpus, rc_.model);
    ModelArtifact a = train_artifact(corpus, rc_.model, rc_.pipeline(), rc_.train, rc_.seed);
    a.run_config_json = rc_.to_json();
    return a;
  }

  int cmd_validate();
  int cmd_extract();
  int cmd_train();
  int cmd_eval();
  int cmd_search();
  int cmd_embed();
  int cmd_analyze_errors();

  std::ostream& out_;
  std::ostream& err_;
  RunConfig rc_;
  std::string config_path_;
  std::string features_ = "all";
  std::string model_ = "svm";
  std::string models_ = "svm,logreg,rf,mlp";
  std::string protocol_ = "cv";
  bool paper_protocol_ = false;
  std::vector<std::string> validate_files_;
  std::string vocab_path_, dump_bags_path_, out_test_path_, report_path_, expect_counts_path_;
  std::string predictions_path_;
  bool baseline_ = false;
  std::string neighbors_query_;
  std::size_t topk_ = 10;
};

int Cli::cmd_validate() {
  std::size_t total = 0;
  for (const auto& path : validate_files_) {
    ParseOptions opts;
    opts.lenient = rc_.lenient;
    const ParseResult r = parse_conllu(read_file(path), opts);
    for (const auto& w : r.warnings) err_ << "warning: " << path << ": " << w << "\n";
    out_ << path << ": " << r.sentences.size() << " sentences OK";
    if (r.dropped > 0) out_ << " (" << r.dropped << " dropped)";
    out_ << "\n";
    total += r.sentences.size();
  }
  if (validate_files_.size() > 1) out_ << "total: " << total << " sentences\n";
  return kExitOk;
}

int Cli::cmd_extract() {
  const LabeledCorpus corpus = load(true, false);
  const CorpusCounts counts = count_corpus(corpus);
  if (!expect_counts_path_.empty()) check_manifest(counts, parse_manifest(read_file(expect_counts_path_)));
  const FeaturePipeline pipeline = rc_.pipeline();
  const auto train_items = corpus.of_split(Split::kTrain);
  const auto train_bags = extract_bags(train_items, pipeline);
  const Vocabulary vocab = build_vocab(train_bags, pipeline.spec, pipeline.min_df);
  std::vector<int> labels;
  for (const auto* it : train_items) labels.push_back(it->label);
  write_file_atomic(rc_.output_path, format_svmlight(make_dataset(train_bags, labels, vocab, pipeline)));
  write_sidecar(rc_.output_path, rc_);
  if (!out_test_path_.empty()) {
    const auto test_items = corpus.of_split(Split::kTest);
    std::vector<int> test_labels;
    for (const auto* it : test_items) test_labels.push_back(it->label);
    write_file_atomic(out_test_path_,
                      format_svmlight(make_dataset(extract_bags(test_items, pipeline), test_labels, vocab, pipeline)));
    write_sidecar(out_test_path_, rc_);
  }
  if (!vocab_path_.empty()) {
    write_file_atomic(vocab_path_, vocab.to_tsv());
    write_sidecar(vocab_path_, rc_);
  }
  if (!dump_bags_path_.empty()) {
    std::string dump;
    for (const auto& item : corpus.items) {
      dump += "# sent_id = " + item.sent_id + "\n";
      dump += format_bag_tsv(extract_features(item.sentence, pipeline.spec, pipeline.extract));
    }
    write_file_atomic(dump_bags_path_, dump);
    write_sidecar(dump_bags_path_, rc_);
  }
  if (!report_path_.empty()) write_file_atomic(report_path_, header_block(rc_) + format_counts_report(counts));
  out_ << format_counts_report(counts);
  out_ << "vocabulary: " << vocab.size() << " features over " << pipeline.spec.to_string() << "\n";
  return kExitOk;
}

int Cli::cmd_train() {
  const LabeledCorpus corpus = load(true, false);
  check_contradictions(corpus, rc_.model);
  ModelArtifact a = train_artifact(corpus, rc_.model, rc_.pipeline(), rc_.train, rc_.seed);
  a.run_config_json = rc_.to_json();
  write_file_atomic(rc_.output_path, save_artifact(a));
  out_ << "trained " << model_kind_name(a.kind) << " on " << a.training_rows << " tweets, " << a.vocab.size()
       << " features, training accuracy " << format_double(a.training_accuracy) << "\n";
  return kExitOk;
}

int Cli::cmd_eval() {
  const LabeledCorpus corpus = load(rc_.model_path.empty(), true);
  const auto test = corpus.of_split(Split::kTest);
  if (test.empty()) throw DataError("empty test split");
  std::vector<int> gold;
  for (const auto* it : test) gold.push_back(it->label);
  EvalReport report;
  if (baseline_) {
    if (rc_.train_paths.empty()) throw UsageError("missing input: --baseline needs --train");
    report = run_baseline_svc_unigrams(corpus, rc_.train, rc_.seed, rc_.pipeline().extract);
  } else {
    const ModelArtifact a = obtain_model(corpus);
    const Prediction p = predict_sentences(a, test);
    report = macro_f1(p.labels, gold);
    if (!predictions_path_.empty()) {
      std::string text = header_block(rc_) + "sent_id\tgold\tpred\tscore\n";
      for (std::size_t i = 0; i < test.size(); ++i) {
        text += test[i]->sent_id + '\t' + std::to_string(gold[i]) + '\t' + std::to_string(p.labels[i]) + '\t' +
                format_double(p.scores[i]) + '\n';
      }
      write_file_atomic(predictions_path_, text);
    }
  }
  if (!rc_.output_path.empty()) write_file_atomic(rc_.output_path, header_block(rc_) + format_report_tsv(report));
  out_ << format_report_text(report);
  return kExitOk;
}

int Cli::cmd_search() {
  const LabeledCorpus corpus = load(true, rc_.protocol == Protocol::kPaper);
  for (ModelKind k : rc_.search_models) check_contradictions(corpus, k);
  SearchOptions opts;
  opts.models = rc_.search_models;
  opts.namespaces = rc_.features.namespaces();
  opts.protocol = rc_.protocol;
  opts.folds = rc_.folds;
  opts.seed = rc_.seed;
  opts.jobs = rc_.jobs;
  opts.train = rc_.train;
  opts.pipeline = rc_.pipeline();
  const SearchResult result = search_best_features(corpus, opts);
  std::size_t failed = 0;
  for (const auto& c : result.cells) failed += c.ok ? 0 : 1;
  const std::string table = format_search_tsv(result, rc_.header_lines());
  if (!rc_.output_path.empty()) write_file_atomic(rc_.output_path, table);
  out_ << "search: " << result.cells.size() << " cells (" << failed << " failed), protocol "
       << protocol_name(rc_.protocol) << "\n";
  if (const SearchCell* best = result.argmax()) {
    out_ << "best: " << model_kind_name(best->model) << " {" << best->spec.to_string()
         << "} macro-F1 " << format_double(best->report.macro_f1) << "\n";
  } else {
    out_ << "best: none (every cell failed)\n";
  }
  return kExitOk;
}

int Cli::cmd_embed() {
  std::vector<Sentence> sentences;
  for (const auto& file : collect_treebanks(rc_.treebank_paths)) {
    ParseOptions opts;
    opts.lenient = rc_.lenient;
    ParseResult r = parse_conllu(read_file(file), opts);
    for (const auto& w : r.warnings) err_ << "warning: " << file << ": " << w << "\n";
    std::move(r.sentences.begin(), r.sentences.end(), std::back_inserter(sentences));
  }
  const auto pairs = extract_contexts(sentences, rc_.lowercase_forms);
  const EmbeddingTable table = train_sgns(pairs, rc_.sgns);
  write_file_atomic(rc_.output_path, format_word_vectors(table));
  write_sidecar(rc_.output_path, rc_);
  out_ << "embedded " << table.words.size() << " words (" << table.contexts.size() << " contexts, " << pairs.size()
       << " pairs) in " << table.dim << " dimensions\n";
  if (!neighbors_query_.empty()) {
    for (const auto& n : nearest_neighbors(table, neighbors_query_, topk_)) {
      out_ << n.word << '\t' << format_double(n.cosine) << '\n';
    }
  }
  return kExitOk;
}

int Cli::cmd_analyze_errors() {
  const LabeledCorpus corpus = load(rc_.model_path.empty(), true);
  const auto test = corpus.of_split(Split::kTest);
  if (test.empty()) throw DataError("empty test split");
  const ModelArtifact a = obtain_model(corpus);
  const Prediction p = predict_sentences(a, test);
  const ErrorReport report = error_distribution_report(test, p.labels);
  if (!rc_.output_path.empty()) write_file_atomic(rc_.output_path, format_error_report_tsv(report, rc_.header_lines()));
  out_ << format_error_report_text(report);
  return kExitOk;
}

int Cli::run(const std::vector<std::string>& raw_args) {
  CLI::App app{"Dependency-syntax irony detection toolkit", "udirony"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto* validate = app.add_subcommand("validate", "Check CoNLL-U files and report sentence counts");
  validate->add_option("files", validate_files_, "CoNLL-U files")->required();
  validate->add_flag("--lenient", rc_.lenient, "Drop malformed sentences with a warning instead of failing");

  auto* extract = app.add_subcommand("extract", "Write feature matrices, vocabulary and corpus counts");
  add_common(extract);
  add_corpus(extract);
  add_pipeline(extract);
  extract->add_option("--out", rc_.output_path, "svmlight matrix of the training split")->required();
  extract->add_option("--out-test", out_test_path_, "svmlight matrix of the test split");
  extract->add_option("--vocab", vocab_path_, "Vocabulary TSV");
  extract->add_option("--dump-bags", dump_bags_path_, "namespace<TAB>key<TAB>count per sentence");
  extract->add_option("--report", report_path_, "Corpus counts per split and class");
  extract->add_option("--expect-counts", expect_counts_path_, "Fail unless counts match this split<TAB>ironic<TAB>not file");

  auto* train = app.add_subcommand("train", "Train one model and write the artifact");
  add_common(train);
  add_corpus(train);
  add_pipeline(train);
  add_hyper(train);
  train->add_option("--out", rc_.output_path, "Model artifact path")->required();

  auto* eval = app.add_subcommand("eval", "Macro-F1 on the test split");
  add_common(eval);
  add_corpus(eval);
  add_pipeline(eval);
  add_hyper(eval);
  eval->add_option("--model-file", rc_.model_path, "Trained artifact (otherwise trains on --train)");
  eval->add_flag("--baseline", baseline_, "Linear SVM on token unigrams only");
  eval->add_option("--out", rc_.output_path, "Report TSV");
  eval->add_option("--predictions", predictions_path_, "Per-tweet predictions TSV");

  auto* search = app.add_subcommand("search", "Score every non-empty subset of the feature namespaces");
  add_common(search);
  add_corpus(search);
  add_pipeline(search);
  add_hyper(search);
  search->add_option("--models", models_, "Comma-separated models to search")->capture_default_str();
  search->add_option("--protocol", protocol_, "cv (k-fold on train) or paper (select on test)")->capture_default_str();
  search->add_flag("--paper-protocol", paper_protocol_, "Same as --protocol paper");
  search->add_option("--folds", rc_.folds, "Folds for the cv protocol")->capture_default_str();
  search->add_option("--out", rc_.output_path, "Search table TSV");

  auto* embed = app.add_subcommand("embed", "Train dependency-context word embeddings");
  add_common(embed);
  embed->add_option("--treebanks", rc_.treebank_paths, "CoNLL-U files or directories (searched for *.conllu)")
      ->required();
  embed->add_option("--dim", rc_.sgns.dim, "Vector dimension")->capture_default_str();
  embed->add_option("--negatives", rc_.sgns.negatives, "Negative samples per pair")->capture_default_str();
  embed->add_option("--epochs", rc_.sgns.epochs, "Passes over the pairs")->capture_default_str();
  embed->add_option("--min-count", rc_.sgns.min_count, "Drop words and contexts rarer than this")
      ->capture_default_str();
  embed->add_option("--lr", rc_.sgns.learning_rate, "Initial learning rate (decays linearly)")->capture_default_str();
  embed->add_flag("--no-lowercase{false},--lowercase{true}", rc_.lowercase_forms, "Lowercase word forms (default on)");
  embed->add_option("--out", rc_.output_path, "Word vectors in text format")->required();
  embed->add_option("--neighbors", neighbors_query_, "Print nearest neighbours of this word");
  embed->add_option("--topk", topk_, "Neighbours to print")->capture_default_str();

  auto* analyze = app.add_subcommand("analyze-errors", "UPOS and deprel distribution in misclassified tweets");
  add_common(analyze);
  add_corpus(analyze);
  add_pipeline(analyze);
  add_hyper(analyze);
  analyze->add_option("--model-file", rc_.model_path, "Trained artifact (otherwise trains on --train)");
  analyze->add_option("--out", rc_.output_path, "Report TSV");

  std::vector<std::string> args = expand_config(raw_args);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out_, err_);
    return code == 0 ? kExitOk : kExitUsage;
  }
  finalize_options();

  CLI::App* cmd = app.get_subcommands().front();
  rc_.command = cmd->get_name();
  if (cmd == validate) return cmd_validate();
  if (cmd == extract) return cmd_extract();
  if (cmd == train) return cmd_train();
  if (cmd == eval) return cmd_eval();
  if (cmd == search) return cmd_search();
  if (cmd == embed) return cmd_embed();
  return cmd_analyze_errors();
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    Cli cli(out, err);
    return cli.run(args);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TrainingError& e) {
    err << "training error: " << e.what() << "\n";
    return kExitTraining;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace udirony
