#include <algorithm>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "support/fixtures.h"
#include "udirony/atomic_file.h"
#include "udirony/cli.h"
#include "udirony/model.h"
#include "udirony/version.h"

using namespace udirony;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

struct Workspace {
  std::string dir;
  std::string train, test;

  explicit Workspace(const std::string& name, const std::string& language = "en", std::size_t n_train = 40,
                     std::size_t n_test = 16) {
    dir = fixtures::temp_dir(name);
    const LabeledCorpus corpus = fixtures::language_corpus(language, n_train, n_test, 3);
    train = dir + "/train.conllu";
    test = dir + "/test.conllu";
    write_file_atomic(train, fixtures::to_conllu(corpus, Split::kTrain));
    write_file_atomic(test, fixtures::to_conllu(corpus, Split::kTest));
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return dir + "/" + name; }
};

std::size_t data_rows(const std::string& table) {
  std::size_t rows = 0;
  std::istringstream in(table);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    ++rows;
  }
  return rows;
}

}  // namespace

TEST_CASE("validate reports the sentence count") {
  Workspace ws("cli_validate");
  const Outcome r = run({"validate", ws.train});
  CHECK(r.code == kExitOk);
  CHECK(r.out == ws.train + ": 40 sentences OK\n");

  write_file_atomic(ws.path("bad.conllu"), "1\ta\ta\tX\t_\t_\t2\tdep\t_\t_\n2\tb\tb\tX\t_\t_\t1\tdep\t_\t_\n\n");
  const Outcome bad = run({"validate", ws.path("bad.conllu")});
  CHECK(bad.code == kExitData);
  CHECK(bad.err.find("line") != std::string::npos);
  CHECK(std::count(bad.err.begin(), bad.err.end(), '\n') == 1);
  CHECK(run({"validate", "--lenient", ws.path("bad.conllu")}).code == kExitOk);
}

TEST_CASE("exit codes") {
  Workspace ws("cli_codes");
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"train", "--train", ws.train, "--out", ws.path("m.json"), "--bogus"}).code == kExitUsage);
  CHECK(run({"train", "--out", ws.path("m.json")}).code == kExitUsage);
  CHECK(run({"validate", ws.path("missing.conllu")}).code == kExitData);
  CHECK(run({"train", "--train", ws.train, "--out", ws.path("m.json"), "--features", "nonsense"}).code == kExitUsage);

  // Every tweet ironic: trainers refuse a single class.
  LabeledCorpus one;
  for (auto& item : fixtures::language_corpus("en", 12, 0, 1).items) {
    item.label = 1;
    one.items.push_back(item);
  }
  write_file_atomic(ws.path("one.conllu"), fixtures::to_conllu(one, Split::kTrain));
  CHECK(run({"train", "--train", ws.path("one.conllu"), "--out", ws.path("m.json")}).code == kExitTraining);

  Workspace tiny("cli_tiny", "en", 8, 4);
  const Outcome mlp = run({"train", "--train", tiny.train, "--model", "mlp", "--out", tiny.path("m.json")});
  CHECK(mlp.code == kExitUsage);
  CHECK(mlp.err.find("contradiction") != std::string::npos);
  CHECK_FALSE(fs::exists(tiny.path("m.json")));
}

TEST_CASE("help documents the flags") {
  const Outcome r = run({"search", "--help"});
  CHECK(r.code == kExitOk);
  for (const char* flag : {"--protocol", "--paper-protocol", "--jobs", "--seed", "--models", "--features"}) {
    CHECK(r.out.find(flag) != std::string::npos);
  }
}

TEST_CASE("train twice gives byte-identical artifacts embedding the run config") {
  Workspace ws("cli_train");
  for (const char* model : {"svm", "logreg", "rf", "mlp"}) {
    INFO(model);
    const std::vector<std::string> args = {"train", "--train", ws.train, "--model", model, "--seed", "11",
                                           "--rf-trees", "10", "--out", ws.path("a.json")};
    REQUIRE(run(args).code == kExitOk);
    const std::string text = read_file(ws.path("a.json"));
    REQUIRE(run(args).code == kExitOk);
    CHECK(text == read_file(ws.path("a.json")));
    const auto j = nlohmann::json::parse(text);
    CHECK(j.at("toolkit_version") == kVersion);
    CHECK(j.at("run_config").at("seed") == 11);
    const auto reval = run({"eval", "--model-file", ws.path("a.json"), "--test", ws.test});
    CHECK(reval.code == kExitOk);
    CHECK(reval.out.find("macro") != std::string::npos);
  }
}

TEST_CASE("config file values are overridden by flags") {
  Workspace ws("cli_config");
  write_file_atomic(ws.path("run.cfg"), "# experiment\nseed = 5\nmodel = logreg\nfeatures = ngrams,deprel\n");
  REQUIRE(run({"train", "--config", ws.path("run.cfg"), "--train", ws.train, "--out", ws.path("m.json"), "--seed",
               "6"})
              .code == kExitOk);
  const ModelArtifact a = load_artifact(read_file(ws.path("m.json")));
  CHECK(a.kind == ModelKind::kLogReg);
  CHECK(a.seed == 6);
  CHECK(a.pipeline.spec == (FeatureSpec{Namespace::kNgrams, Namespace::kDeprel}));

  write_file_atomic(ws.path("broken.cfg"), "seed 5\n");
  CHECK(run({"train", "--config", ws.path("broken.cfg"), "--train", ws.train, "--out", ws.path("m.json")}).code ==
        kExitUsage);
}

TEST_CASE("every output carries the run configuration") {
  Workspace ws("cli_outputs");
  REQUIRE(run({"extract", "--train", ws.train, "--test", ws.test, "--out", ws.path("train.svm"), "--out-test",
               ws.path("test.svm"), "--vocab", ws.path("vocab.tsv"), "--dump-bags", ws.path("bags.tsv"), "--report",
               ws.path("counts.tsv")})
              .code == kExitOk);
  for (const char* f : {"train.svm", "test.svm", "vocab.tsv", "bags.tsv"}) {
    INFO(f);
    const auto j = nlohmann::json::parse(read_file(ws.path(std::string(f) + ".run.json")));
    CHECK(j.at("toolkit_version") == kVersion);
    CHECK(j.at("run_config").at("command") == "extract");
  }
  CHECK(read_file(ws.path("counts.tsv")).rfind("# toolkit_version ", 0) == 0);
  CHECK(read_file(ws.path("bags.tsv")).rfind("# sent_id = en-0\n", 0) == 0);

  REQUIRE(run({"eval", "--train", ws.train, "--test", ws.test, "--out", ws.path("eval.tsv"), "--predictions",
               ws.path("pred.tsv")})
              .code == kExitOk);
  REQUIRE(run({"eval", "--baseline", "--train", ws.train, "--test", ws.test, "--out", ws.path("base.tsv")}).code ==
          kExitOk);
  REQUIRE(run({"analyze-errors", "--train", ws.train, "--test", ws.test, "--out", ws.path("errors.tsv")}).code ==
          kExitOk);
  for (const char* f : {"eval.tsv", "pred.tsv", "base.tsv", "errors.tsv"}) {
    INFO(f);
    const std::string text = read_file(ws.path(f));
    CHECK(text.rfind("# toolkit_version " + std::string(kVersion) + "\n# run_config {", 0) == 0);
  }

  write_file_atomic(ws.path("tb.conllu"), std::string(fixtures::kColiteTweet) + fixtures::kBlindTweet);
  const Outcome e = run({"embed", "--treebanks", ws.dir, "--dim", "8", "--min-count", "1", "--out",
                         ws.path("vec.txt"), "--neighbors", "sia", "--topk", "3"});
  REQUIRE(e.code == kExitOk);
  CHECK(nlohmann::json::parse(read_file(ws.path("vec.txt.run.json"))).at("run_config").at("embedding").at("dim") == 8);
  CHECK(std::count(e.out.begin(), e.out.end(), '\n') == 4);
}

TEST_CASE("a failed write leaves no partial file behind") {
  Workspace ws("cli_atomic");
  fs::create_directory(ws.path("blocked"));
  // The destination is a directory, so the final rename fails.
  const Outcome r = run({"train", "--train", ws.train, "--out", ws.path("blocked")});
  CHECK(r.code == kExitData);
  for (const auto& entry : fs::directory_iterator(ws.dir)) {
    CHECK(entry.path().filename().string().find(".tmp") == std::string::npos);
  }
  CHECK(fs::is_directory(ws.path("blocked")));
}

TEST_CASE("search over the four-language fixture suite") {
  for (const char* lang : {"en", "es", "fr", "it"}) {
    INFO(lang);
    Workspace ws(std::string("cli_search_") + lang, lang, 20, 10);
    const Outcome r = run({"search", "--train", ws.train, "--test", ws.test, "--language", lang, "--paper-protocol",
                           "--rf-trees", "5", "--mlp-max-epochs", "5", "--out", ws.path("table.tsv")});
    REQUIRE(r.code == kExitOk);
    const std::string table = read_file(ws.path("table.tsv"));
    CHECK(data_rows(table) == 1023 * 4);
    CHECK(table.find("\"protocol\":\"paper\"") != std::string::npos);
    CHECK(r.out.find("4092 cells (0 failed)") != std::string::npos);
  }
}
