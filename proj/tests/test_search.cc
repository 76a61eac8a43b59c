#include <algorithm>
#include <set>

#include "doctest.h"
#include "support/fixtures.h"
#include "udirony/search.h"

using namespace udirony;

TEST_CASE("one model over three namespaces gives seven cells") {
  const LabeledCorpus corpus = fixtures::language_corpus("en", 40, 20, 1);
  SearchOptions opts;
  opts.models = {ModelKind::kLogReg};
  opts.namespaces = {Namespace::kNgrams, Namespace::kDeprel, Namespace::kSidorovDeprel};
  opts.protocol = Protocol::kPaper;
  const SearchResult r = search_best_features(corpus, opts);
  REQUIRE(r.cells.size() == 7);
  std::set<std::uint32_t> masks;
  for (const auto& c : r.cells) {
    CHECK(c.ok);
    CHECK(c.model == ModelKind::kLogReg);
    CHECK(c.seed == opts.seed);
    masks.insert(c.spec.mask());
  }
  CHECK(masks.size() == 7);
  REQUIRE(r.argmax() != nullptr);
  for (const auto& c : r.cells) CHECK(c.report.macro_f1 <= r.argmax()->report.macro_f1);
  // First in table order among equal scores.
  for (std::size_t i = 0; i < r.best; ++i) CHECK(r.cells[i].report.macro_f1 < r.argmax()->report.macro_f1);
}

TEST_CASE("the planted deprel signal is found by the search") {
  const LabeledCorpus corpus = fixtures::planted_deprel_corpus(300, 0.3, 4);
  SearchOptions opts;
  opts.models = {ModelKind::kLogReg};
  opts.protocol = Protocol::kPaper;
  const SearchResult r = search_best_features(corpus, opts);
  REQUIRE(r.cells.size() == 1023);
  REQUIRE(r.argmax() != nullptr);
  CHECK(r.argmax()->spec.enabled(Namespace::kSidorovDeprel));
  CHECK(r.argmax()->report.macro_f1 >= 0.95);
}

TEST_CASE("search tables are reproducible and independent of the worker count") {
  const LabeledCorpus corpus = fixtures::language_corpus("es", 40, 16, 3);
  SearchOptions opts;
  opts.models = {ModelKind::kSvm, ModelKind::kForest};
  opts.namespaces = {Namespace::kNgrams, Namespace::kChargrams, Namespace::kSidorovUpostag, Namespace::kDeprel};
  opts.train.forest.n_trees = 5;
  opts.folds = 3;
  const std::string a = format_search_tsv(search_best_features(corpus, opts));
  opts.jobs = 3;
  const std::string b = format_search_tsv(search_best_features(corpus, opts));
  CHECK(a == b);
  CHECK(std::count(a.begin(), a.end(), '\n') == 1 + 30 + 1);
}

TEST_CASE("trainer errors are recorded per cell") {
  const LabeledCorpus corpus = fixtures::language_corpus("fr", 8, 4, 2);
  SearchOptions opts;
  opts.models = {ModelKind::kMlp, ModelKind::kSvm};
  opts.namespaces = {Namespace::kNgrams, Namespace::kDeprel};
  opts.protocol = Protocol::kPaper;
  const SearchResult r = search_best_features(corpus, opts);
  REQUIRE(r.cells.size() == 6);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK_FALSE(r.cells[i].ok);
    CHECK_FALSE(r.cells[i].error.empty());
  }
  for (std::size_t i = 3; i < 6; ++i) CHECK(r.cells[i].ok);
  CHECK(r.best >= 3);
  const std::string tsv = format_search_tsv(r, {"run_config {}"});
  CHECK(tsv.rfind("# run_config {}\n", 0) == 0);
  CHECK(tsv.find("model\tsubset_bitmask\tnamespaces\tmacro_f1\tf1_ironic\tf1_not\tseed\n") != std::string::npos);
  CHECK(tsv.find("mlp\t1\tngrams\terror\terror\terror\t1\t") != std::string::npos);
}

TEST_CASE("stratified folds") {
  std::vector<int> labels;
  for (int i = 0; i < 53; ++i) labels.push_back(i % 3 == 0 ? 1 : 0);
  const auto folds = stratified_folds(labels, 5, 9);
  CHECK(folds == stratified_folds(labels, 5, 9));
  std::vector<int> pos(5), all(5);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    REQUIRE(folds[i] < 5);
    ++all[folds[i]];
    pos[folds[i]] += labels[i];
  }
  CHECK(*std::max_element(pos.begin(), pos.end()) - *std::min_element(pos.begin(), pos.end()) <= 1);
  CHECK(*std::max_element(all.begin(), all.end()) - *std::min_element(all.begin(), all.end()) <= 2);
}

TEST_CASE("unigram SVM baseline on a lexically separable corpus") {
  const LabeledCorpus corpus = fixtures::lexical_corpus(400, 0.25, 6);
  CHECK(run_baseline_svc_unigrams(corpus).macro_f1 >= 0.95);
}
