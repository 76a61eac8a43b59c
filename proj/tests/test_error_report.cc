#include <algorithm>

#include "doctest.h"
#include "support/fixtures.h"
#include "udirony/error.h"
#include "udirony/error_report.h"

using namespace udirony;

namespace {

std::vector<int> gold_of(const std::vector<const LabeledItem*>& items) {
  std::vector<int> g;
  for (const auto* it : items) g.push_back(it->label);
  return g;
}

}  // namespace

TEST_CASE("perfect predictions leave every delta not applicable") {
  const LabeledCorpus corpus = fixtures::sym_error_corpus();
  const auto test = corpus.of_split(Split::kTest);
  const ErrorReport r = error_distribution_report(test, gold_of(test));
  CHECK(r.misclassified == 0);
  CHECK(r.tokens_all == 17);
  for (const auto& c : r.upos) CHECK_FALSE(c.delta_pct.has_value());
  for (const auto& c : r.deprel) CHECK_FALSE(c.delta_pct.has_value());
  CHECK(format_error_report_tsv(r).find("n/a") != std::string::npos);
}

TEST_CASE("the only SYM token in the only misclassified tweet ranks first") {
  const LabeledCorpus corpus = fixtures::sym_error_corpus();
  const auto test = corpus.of_split(Split::kTest);
  std::vector<int> pred = gold_of(test);
  pred[0] = 1 - pred[0];
  const ErrorReport r = error_distribution_report(test, pred);
  CHECK(r.misclassified == 1);
  CHECK(r.tokens_misclassified == 5);
  REQUIRE_FALSE(r.upos.empty());
  const CategoryDelta& top = r.upos.front();
  CHECK(top.category == "SYM");
  CHECK(top.watchlisted);
  CHECK(top.count_all == 1);
  CHECK(top.freq_all == doctest::Approx(1.0 / 17.0));
  CHECK(top.freq_misclassified == doctest::Approx(1.0 / 5.0));
  // (1/5 - 1/17) / (1/17) = 12/5.
  CHECK(*top.delta_pct == doctest::Approx(240.0));
  for (std::size_t i = 1; i < r.upos.size(); ++i) CHECK(*r.upos[i].delta_pct < *top.delta_pct);

  double sum_all = 0, sum_mis = 0;
  for (const auto& c : r.upos) {
    sum_all += c.freq_all;
    sum_mis += c.freq_misclassified;
  }
  CHECK(sum_all == doctest::Approx(1.0));
  CHECK(sum_mis == doctest::Approx(1.0));

  const auto det = std::find_if(r.upos.begin(), r.upos.end(), [](const CategoryDelta& c) { return c.category == "DET"; });
  REQUIRE(det != r.upos.end());
  CHECK(*det->delta_pct == doctest::Approx(-100.0));
}

TEST_CASE("watchlist") {
  for (const char* c : {"SYM", "X", "parataxis", "flat", "expl"}) CHECK(is_watchlisted(c));
  CHECK_FALSE(is_watchlisted("NOUN"));
  CHECK_FALSE(is_watchlisted("sym"));
}

TEST_CASE("misaligned predictions are rejected") {
  const LabeledCorpus corpus = fixtures::sym_error_corpus();
  CHECK_THROWS_AS(error_distribution_report(corpus.of_split(Split::kTest), {1, 0}), DataError);
}
