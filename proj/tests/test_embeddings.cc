#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "support/fixtures.h"
#include "udirony/error.h"
#include "udirony/embeddings.h"

using namespace udirony;

namespace {

// Words a and b share one context multiset; every distractor has its own.
std::vector<ContextPair> twin_corpus() {
  std::vector<ContextPair> pairs;
  for (int rep = 0; rep < 30; ++rep) {
    for (int c = 0; c < 4; ++c) {
      pairs.push_back({"a", "shared" + std::to_string(c)});
      pairs.push_back({"b", "shared" + std::to_string(c)});
    }
    for (int w = 0; w < 8; ++w) {
      for (int c = 0; c < 4; ++c) {
        pairs.push_back({"d" + std::to_string(w), "own" + std::to_string(w) + "_" + std::to_string(c)});
      }
    }
  }
  return pairs;
}

SgnsConfig small(std::uint64_t seed) {
  SgnsConfig cfg;
  cfg.dim = 25;
  cfg.epochs = 15;
  cfg.min_count = 1;
  cfg.seed = seed;
  return cfg;
}

double word_cosine(const EmbeddingTable& t, const std::string& a, const std::string& b) {
  return cosine(t.word_vector(*t.word_index(a)), t.word_vector(*t.word_index(b)), t.dim);
}

}  // namespace

TEST_CASE("contexts of the cop edge") {
  const auto pairs = extract_contexts({fixtures::colite_tweet()});
  CHECK(pairs.size() == 18);
  CHECK(std::find(pairs.begin(), pairs.end(), ContextPair{"colite", "sia/cop"}) != pairs.end());
  CHECK(std::find(pairs.begin(), pairs.end(), ContextPair{"sia", "colite/cop⁻¹"}) != pairs.end());
  CHECK(extract_contexts({}).empty());
}

TEST_CASE("two context pairs per edge") {
  Rng rng(12);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 1 + uniform_index(rng, 30);
    const Sentence s = fixtures::random_tree(n, rng);
    const auto pairs = extract_contexts({s});
    REQUIRE(pairs.size() == 2 * (n - 1));
    std::size_t inverse = 0;
    for (const auto& p : pairs) inverse += p.context.ends_with(kInverseMarker);
    CHECK(inverse == n - 1);
  }
}

TEST_CASE("lowercasing of context forms follows the option") {
  const Sentence s = fixtures::make_sentence({"Yes", "Sure"}, {"INTJ", "ADV"}, {0, 1}, {"root", "advmod"});
  CHECK(extract_contexts({s})[0] == ContextPair{"yes", "sure/advmod"});
  CHECK(extract_contexts({s}, false)[0] == ContextPair{"Yes", "Sure/advmod"});
}

TEST_CASE("sgns gradient matches central differences") {
  Rng rng(31);
  const std::size_t dim = 6;
  for (int point = 0; point < 10; ++point) {
    std::vector<double> w(dim), c(dim), n(3 * dim);
    for (auto* v : {&w, &c, &n}) {
      for (double& x : *v) x = uniform(rng, -1, 1);
    }
    auto negs = [&] { return std::vector<const double*>{&n[0], &n[dim], &n[2 * dim]}; };
    std::vector<double> gw(dim), gc(dim), gn(3 * dim);
    sgns_gradient(w.data(), c.data(), negs(), dim, gw.data(), gc.data(), gn.data());
    double diff = 0, scale = 0;
    auto check = [&](std::vector<double>& param, const std::vector<double>& grad) {
      const double h = 1e-5;
      for (std::size_t i = 0; i < param.size(); ++i) {
        const double keep = param[i];
        param[i] = keep + h;
        const double up = sgns_objective(w.data(), c.data(), negs(), dim);
        param[i] = keep - h;
        const double down = sgns_objective(w.data(), c.data(), negs(), dim);
        param[i] = keep;
        const double numeric = (up - down) / (2 * h);
        diff = std::max(diff, std::abs(numeric - grad[i]));
        scale = std::max({scale, std::abs(numeric), std::abs(grad[i])});
      }
    };
    check(w, gw);
    check(c, gc);
    check(n, gn);
    CHECK(diff / scale < 1e-4);
  }
}

TEST_CASE("zero epochs keep the seeded initialization") {
  const auto pairs = twin_corpus();
  SgnsConfig zero = small(4);
  zero.epochs = 0;
  const EmbeddingTable a = train_sgns(pairs, zero);
  SgnsConfig frozen = small(4);
  frozen.epochs = 1;
  frozen.learning_rate = 0.0;
  const EmbeddingTable b = train_sgns(pairs, frozen);
  CHECK(a.word_vectors == b.word_vectors);
  for (double v : a.word_vectors) CHECK(std::abs(v) <= 0.5 / 25.0);
  for (double v : a.context_vectors) CHECK(v == 0.0);
}

TEST_CASE("vocabulary is ordered by count and filtered by min_count") {
  std::vector<ContextPair> pairs = {{"x", "c1"}, {"y", "c1"}, {"y", "c2"}, {"z", "c2"}, {"y", "c1"}, {"x", "c2"}};
  SgnsConfig cfg = small(1);
  cfg.min_count = 2;
  const EmbeddingTable t = train_sgns(pairs, cfg);
  CHECK(t.words == std::vector<std::string>{"y", "x"});
  CHECK(t.word_counts == std::vector<std::uint64_t>{3, 2});
  CHECK(t.contexts == std::vector<std::string>{"c1", "c2"});
  cfg.min_count = 10;
  CHECK_THROWS_AS(train_sgns(pairs, cfg), TrainingError);
  CHECK_THROWS_AS(train_sgns({}, small(1)), TrainingError);
}

TEST_CASE("words with identical contexts end up similar") {
  double twin = 0, random_pairs = 0;
  int b_first = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const EmbeddingTable t = train_sgns(twin_corpus(), small(seed));
    twin += word_cosine(t, "a", "b");
    double sum = 0;
    int count = 0;
    for (std::size_t i = 0; i < t.words.size(); ++i) {
      for (std::size_t j = i + 1; j < t.words.size(); ++j) {
        sum += cosine(t.word_vector(i), t.word_vector(j), t.dim);
        ++count;
      }
    }
    random_pairs += sum / count;
    b_first += nearest_neighbors(t, "a", 1)[0].word == "b";
  }
  CHECK(twin / 5 > random_pairs / 5);
  CHECK(b_first >= 4);
}

TEST_CASE("nearest neighbours") {
  SgnsConfig cfg = small(2);
  const EmbeddingTable two = train_sgns({{"p", "c"}, {"q", "c"}}, cfg);
  const auto nn = nearest_neighbors(two, "p", 5);
  REQUIRE(nn.size() == 1);
  CHECK(nn[0].word == "q");
  CHECK_THROWS_AS(nearest_neighbors(two, "missing", 1), DataError);

  const EmbeddingTable t = train_sgns(twin_corpus(), cfg);
  const auto all = nearest_neighbors(t, "d0", 100);
  CHECK(all.size() == t.words.size() - 1);
  for (std::size_t i = 1; i < all.size(); ++i) {
    CHECK(all[i - 1].cosine >= all[i].cosine);
    if (all[i - 1].cosine == all[i].cosine) CHECK(all[i - 1].word < all[i].word);
  }
  for (const auto& n : all) CHECK(n.word != "d0");
}

TEST_CASE("training objective does not fall across epochs") {
  const auto pairs = twin_corpus();
  SgnsConfig cfg = small(3);
  cfg.epochs = 10;
  cfg.learning_rate = 0.01;
  // Fixed negatives for the fixed evaluation sequence.
  Rng rng(99);
  std::vector<std::vector<std::string>> negatives;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    std::vector<std::string> ns;
    for (int k = 0; k < 5; ++k) ns.push_back(pairs[uniform_index(rng, pairs.size())].context);
    negatives.push_back(ns);
  }
  std::vector<double> objective;
  train_sgns(pairs, cfg, [&](int, const EmbeddingTable& t) {
    double sum = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      std::vector<const double*> negs;
      for (const auto& n : negatives[i]) {
        if (n != pairs[i].context) negs.push_back(t.context_vector(*t.context_index(n)));
      }
      sum += sgns_objective(t.word_vector(*t.word_index(pairs[i].word)),
                            t.context_vector(*t.context_index(pairs[i].context)), negs, t.dim);
    }
    objective.push_back(sum / static_cast<double>(pairs.size()));
  });
  REQUIRE(objective.size() == 10);
  for (std::size_t i = 1; i < objective.size(); ++i) CHECK(objective[i] >= objective[i - 1]);
}

TEST_CASE("same seed gives byte-identical vectors") {
  const auto pairs = extract_contexts({fixtures::colite_tweet(), fixtures::blind_tweet()});
  SgnsConfig cfg = small(8);
  const std::string a = format_word_vectors(train_sgns(pairs, cfg));
  CHECK(a == format_word_vectors(train_sgns(pairs, cfg)));
  cfg.seed = 9;
  CHECK(a != format_word_vectors(train_sgns(pairs, cfg)));
  const EmbeddingTable t = train_sgns(pairs, small(8));
  CHECK(a.substr(0, a.find('\n')) == std::to_string(t.words.size()) + " 25");
  for (double v : t.word_vectors) CHECK(std::isfinite(v));
}
