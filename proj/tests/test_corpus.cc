#include <string>

#include "doctest.h"
#include "support/fixtures.h"
#include "udirony/corpus.h"
#include "udirony/error.h"

using namespace udirony;

namespace {

std::string tweet(const std::string& id, const std::string& irony_line) {
  return "# sent_id = " + id + "\n" + irony_line + "1\tok\tok\tINTJ\t_\t_\t0\troot\t_\t_\n\n";
}

std::string message_of(const std::vector<CorpusDocument>& docs, const LoadOptions& opts = {}) {
  try {
    load_corpus(docs, opts);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("preprocess_text") {
  CHECK(preprocess_text("Just great when you're mobile bill arrives by text") ==
        "just great when you're mobile bill arrives by text");
  CHECK(preprocess_text("") == "");
  CHECK(preprocess_text("see https://t.co/qKLXgr6jJF now") == "see now");
  CHECK(preprocess_text("  WWW.example.org   Ciao\tCITTÀ http://x ") == "ciao città");
  CHECK(preprocess_text("#Hashtag @User") == "#hashtag @user");
  // "www." glued to a word is not a URL start.
  CHECK(preprocess_text("awww.so cute") == "awww.so cute");
}

TEST_CASE("preprocess_text is idempotent") {
  Rng rng(3);
  const std::vector<std::string> parts = {"A", "b", " ", "  ", "\t", "http://t.co/x", "www.y.z", "Ñ", "ÉCOLE", "é",
                                          "https://", "word", "#Tag", "Σ", "\n"};
  for (int i = 0; i < 500; ++i) {
    std::string raw;
    for (std::size_t k = uniform_index(rng, 12); k > 0; --k) raw += parts[uniform_index(rng, parts.size())];
    const std::string once = preprocess_text(raw);
    CHECK(preprocess_text(once) == once);
  }
}

TEST_CASE("labels from metadata and from a sidecar") {
  LoadOptions opts;
  opts.sidecar_labels = {{"b", 0}};
  opts.language = "en";
  const auto r = load_corpus({{"train.conllu", tweet("a", "# irony = 1\n") + tweet("b", ""), Split::kTrain},
                              {"test.conllu", tweet("c", "# irony = 0\n"), Split::kTest}},
                             opts);
  REQUIRE(r.corpus.items.size() == 3);
  CHECK(r.corpus.items[0].label == kIronic);
  CHECK(r.corpus.items[1].label == kNotIronic);
  CHECK(r.corpus.items[1].language == "en");
  CHECK(r.corpus.of_split(Split::kTest).size() == 1);
  CHECK(r.corpus.of_split(Split::kTest)[0]->sent_id == "c");
}

TEST_CASE("corpus errors") {
  CHECK(message_of({{"f", tweet("lonely", ""), Split::kTrain}}).find("missing label for sent_id lonely") !=
        std::string::npos);
  CHECK(message_of({{"f", tweet("a", "# irony = 2\n"), Split::kTrain}}).find("not 0 or 1") != std::string::npos);
  CHECK(message_of({{"f", tweet("a", "# irony = 1\n") + tweet("a", "# irony = 0\n"), Split::kTrain}})
            .find("duplicate sent_id a") != std::string::npos);
  LoadOptions opts;
  opts.sidecar_labels = {{"a", 0}};
  CHECK(message_of({{"f", tweet("a", "# irony = 1\n"), Split::kTrain}}, opts).find("conflicting") !=
        std::string::npos);
  CHECK_THROWS_AS(parse_label_tsv("a\t1\na\t0\n"), DataError);
  CHECK_THROWS_AS(parse_label_tsv("a 1\n"), DataError);
  CHECK(parse_label_tsv("a\t1\n\nb\t0\n").size() == 2);
}

TEST_CASE("class counts equal the sum over files and match a manifest") {
  const auto a = fixtures::language_corpus("en", 30, 10, 1);
  const auto b = fixtures::language_corpus("en", 20, 6, 2);
  std::vector<CorpusDocument> docs = {
      {"a-train", fixtures::to_conllu(a, Split::kTrain), Split::kTrain},
      {"a-test", fixtures::to_conllu(a, Split::kTest), Split::kTest},
  };
  // Ids must differ across files.
  std::string b_train = fixtures::to_conllu(b, Split::kTrain);
  for (std::size_t pos = 0; (pos = b_train.find("sent_id = en-", pos)) != std::string::npos;) {
    b_train.replace(pos, 13, "sent_id = en2-");
  }
  docs.push_back({"b-train", b_train, Split::kTrain});
  const auto merged = count_corpus(load_corpus(docs, {}).corpus);
  const auto ca = count_corpus(a);
  const auto cb = count_corpus(b);
  for (Split s : {Split::kTrain}) {
    for (int label : {0, 1}) CHECK(merged.at(s, label) == ca.at(s, label) + cb.at(s, label));
  }
  CHECK(merged.at(Split::kTest, 1) == ca.at(Split::kTest, 1));

  const std::string manifest = "train\t" + std::to_string(merged.at(Split::kTrain, 1)) + "\t" +
                               std::to_string(merged.at(Split::kTrain, 0)) + "\ntest\t" +
                               std::to_string(merged.at(Split::kTest, 1)) + "\t" +
                               std::to_string(merged.at(Split::kTest, 0)) + "\n";
  CHECK(parse_manifest(manifest) == merged);
  CHECK_NOTHROW(check_manifest(merged, parse_manifest(manifest)));
  CHECK_THROWS_AS(check_manifest(merged, parse_manifest("train\t1923\t1911\ntest\t311\t473\n")), DataError);
  CHECK(format_counts_report(merged).find("train") != std::string::npos);
}
