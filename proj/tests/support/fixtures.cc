#include "fixtures.h"

#include <filesystem>
#include <map>
#include <unistd.h>

namespace fixtures {

using udirony::LabeledCorpus;
using udirony::LabeledItem;
using udirony::Rng;
using udirony::Sentence;
using udirony::Split;
using udirony::Token;

const char* const kBlindTweet =
    "# sent_id = blind\n"
    "# text = If you are reading this right now you are not blind ... lol\n"
    "1\tIf\tif\tSCONJ\t_\t_\t4\tmark\t_\t_\n"
    "2\tyou\tyou\tPRON\t_\tCase=Nom|Person=2|PronType=Prs\t4\tnsubj\t_\t_\n"
    "3\tare\tbe\tAUX\t_\tMood=Ind|Tense=Pres|VerbForm=Fin\t4\taux\t_\t_\n"
    "4\treading\tread\tVERB\t_\tTense=Pres|VerbForm=Part\t11\tadvcl\t_\t_\n"
    "5\tthis\tthis\tPRON\t_\tNumber=Sing|PronType=Dem\t4\tobj\t_\t_\n"
    "6\tright\tright\tADV\t_\t_\t7\tadvmod\t_\t_\n"
    "7\tnow\tnow\tADV\t_\t_\t4\tadvmod\t_\t_\n"
    "8\tyou\tyou\tPRON\t_\tCase=Nom|Person=2|PronType=Prs\t11\tnsubj\t_\t_\n"
    "9\tare\tbe\tAUX\t_\tMood=Ind|Tense=Pres|VerbForm=Fin\t11\tcop\t_\t_\n"
    "10\tnot\tnot\tPART\t_\tPolarity=Neg\t11\tadvmod\t_\t_\n"
    "11\tblind\tblind\tADJ\t_\tDegree=Pos\t0\troot\t_\t_\n"
    "12\t...\t...\tPUNCT\t_\t_\t11\tpunct\t_\t_\n"
    "13\tlol\tlol\tINTJ\t_\t_\t11\tdiscourse\t_\tSpaceAfter=No\n"
    "\n";

const char* const kColiteTweet =
    "# sent_id = colite\n"
    "# text = Spero sia colite. Ma ho paura sia amore.\n"
    "1\tSpero\tsperare\tVERB\t_\tMood=Ind|Number=Sing|Person=1|Tense=Pres\t0\troot\t_\t_\n"
    "2\tsia\tessere\tAUX\t_\tMood=Sub|Number=Sing|Person=3\t3\tcop\t_\t_\n"
    "3\tcolite\tcolite\tNOUN\t_\tGender=Fem|Number=Sing\t1\tccomp\t_\tSpaceAfter=No\n"
    "4\t.\t.\tPUNCT\t_\t_\t3\tpunct\t_\t_\n"
    "5\tMa\tma\tCCONJ\t_\t_\t6\tcc\t_\t_\n"
    "6\tho\tavere\tAUX\t_\tMood=Ind|Number=Sing|Person=1\t1\tconj\t_\t_\n"
    "7\tpaura\tpaura\tNOUN\t_\tGender=Fem|Number=Sing\t6\tobj\t_\t_\n"
    "8\tsia\tessere\tVERB\t_\tMood=Sub|Number=Sing|Person=3\t9\tcop\t_\t_\n"
    "9\tamore\tamore\tNOUN\t_\tGender=Masc|Number=Sing\t6\tccomp\t_\tSpaceAfter=No\n"
    "10\t.\t.\tPUNCT\t_\t_\t6\tpunct\t_\t_\n"
    "\n";

Sentence blind_tweet() { return udirony::parse_conllu(kBlindTweet).at(0); }
Sentence colite_tweet() { return udirony::parse_conllu(kColiteTweet).at(0); }

namespace {

const std::vector<std::string> kLexicon = {"the", "cat", "sat", "on", "mat", "big", "dog", "ran", "fast",
                                           "très", "ça", "niño", "città", "é", "a", "b", "cc", "x"};
const std::vector<std::string> kUpos = {"NOUN", "VERB", "ADJ", "ADV", "PRON", "DET", "ADP", "AUX", "PUNCT", "SYM"};
const std::vector<std::string> kDeprels = {"nsubj", "obj",  "advmod", "amod",  "det",   "case",  "nmod",
                                           "obl",   "conj", "cc",     "mark",  "aux",   "cop",   "punct",
                                           "compound", "xcomp", "ccomp", "advcl", "flat", "discourse"};

template <typename T>
const T& pick(const std::vector<T>& v, Rng& rng) {
  return v[udirony::uniform_index(rng, v.size())];
}

// Parent array over 1..n: a random recursive tree on a random node order.
std::vector<int> random_heads(std::size_t n, Rng& rng) {
  auto order = udirony::permutation(n, rng);
  std::vector<int> heads(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t parent = order[udirony::uniform_index(rng, i)];
    heads[order[i]] = static_cast<int>(parent) + 1;
  }
  return heads;
}

LabeledItem make_item(Sentence s, int label, Split split, const std::string& language, const std::string& id) {
  LabeledItem item;
  s.set_meta("sent_id", id);
  item.sentence = std::move(s);
  item.label = label;
  item.split = split;
  item.language = language;
  item.sent_id = id;
  return item;
}

}  // namespace

Sentence make_sentence(const std::vector<std::string>& forms, const std::vector<std::string>& upos,
                       const std::vector<int>& heads, const std::vector<std::string>& deprels) {
  Sentence s;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    Token t;
    t.id = static_cast<int>(i) + 1;
    t.form = forms[i];
    t.lemma = forms[i];
    t.upos = upos[i];
    t.head = heads[i];
    t.deprel = deprels[i];
    s.tokens.push_back(std::move(t));
  }
  return s;
}

Sentence random_tree(std::size_t n, Rng& rng) {
  const auto heads = random_heads(n, rng);
  std::vector<std::string> forms, upos, deprels;
  for (std::size_t i = 0; i < n; ++i) {
    forms.push_back(pick(kLexicon, rng));
    upos.push_back(pick(kUpos, rng));
    deprels.push_back(heads[i] == 0 ? "root" : pick(kDeprels, rng));
  }
  return make_sentence(forms, upos, heads, deprels);
}

LabeledCorpus planted_deprel_corpus(std::size_t n_tweets, double test_fraction, std::uint64_t seed) {
  Rng rng(seed);
  LabeledCorpus corpus;
  const auto n_test = static_cast<std::size_t>(static_cast<double>(n_tweets) * test_fraction);
  for (std::size_t t = 0; t < n_tweets; ++t) {
    const int label = static_cast<int>(t % 2);
    for (;;) {
      const std::size_t n = 8 + udirony::uniform_index(rng, 8);
      const auto heads = random_heads(n, rng);
      // Candidate (p, e): p is not the root, e is not the root, p != e.
      std::vector<std::pair<std::size_t, std::size_t>> candidates;
      for (std::size_t p = 0; p < n; ++p) {
        if (heads[p] == 0) continue;
        for (std::size_t e = 0; e < n; ++e) {
          if (e == p || heads[e] == 0) continue;
          const bool child = heads[e] == static_cast<int>(p) + 1;
          if (child == (label == 1)) candidates.emplace_back(p, e);
        }
      }
      if (candidates.empty()) continue;
      const auto [p, e] = pick(candidates, rng);
      std::vector<std::string> forms, upos, deprels;
      for (std::size_t i = 0; i < n; ++i) {
        forms.push_back(pick(kLexicon, rng));
        upos.push_back(pick(kUpos, rng));
        if (heads[i] == 0) {
          deprels.push_back("root");
        } else if (i == p) {
          deprels.push_back("parataxis");
        } else if (i == e) {
          deprels.push_back("expl");
        } else {
          deprels.push_back(pick(kDeprels, rng));
        }
      }
      const Split split = t < n_tweets - n_test ? Split::kTrain : Split::kTest;
      corpus.items.push_back(
          make_item(make_sentence(forms, upos, heads, deprels), label, split, "en", "planted-" + std::to_string(t)));
      break;
    }
  }
  return corpus;
}

LabeledCorpus lexical_corpus(std::size_t n_tweets, double test_fraction, std::uint64_t seed) {
  Rng rng(seed);
  LabeledCorpus corpus;
  const auto n_test = static_cast<std::size_t>(static_cast<double>(n_tweets) * test_fraction);
  for (std::size_t t = 0; t < n_tweets; ++t) {
    const int label = static_cast<int>(t % 2);
    Sentence s = random_tree(5 + udirony::uniform_index(rng, 6), rng);
    auto& marker = s.tokens[udirony::uniform_index(rng, s.size())];
    marker.form = label == 1 ? "yeahright" : "honestly";
    marker.lemma = marker.form;
    const Split split = t < n_tweets - n_test ? Split::kTrain : Split::kTest;
    corpus.items.push_back(make_item(std::move(s), label, split, "en", "lex-" + std::to_string(t)));
  }
  return corpus;
}

LabeledCorpus language_corpus(const std::string& language, std::size_t n_train, std::size_t n_test,
                              std::uint64_t seed) {
  static const std::map<std::string, std::vector<std::string>> kWords = {
      {"en", {"not", "great", "love", "monday", "again", "sure", "traffic", "rain", "wow", "just", "never"}},
      {"es", {"no", "genial", "encanta", "lunes", "otra", "vez", "claro", "lluvia", "nunca", "qué", "bien"}},
      {"fr", {"ne", "pas", "génial", "adore", "lundi", "encore", "bien", "sûr", "pluie", "jamais", "ça"}},
      {"it", {"non", "bello", "adoro", "lunedì", "ancora", "certo", "pioggia", "mai", "proprio", "città", "già"}},
  };
  const auto& words = kWords.at(language);
  Rng rng(seed);
  LabeledCorpus corpus;
  for (std::size_t t = 0; t < n_train + n_test; ++t) {
    const int label = static_cast<int>(t % 2);
    Sentence s = random_tree(4 + udirony::uniform_index(rng, 8), rng);
    for (auto& tok : s.tokens) {
      // Ironic tweets draw from the first half of the word list more often.
      const std::size_t half = words.size() / 2;
      const bool first_half = udirony::uniform01(rng) < (label == 1 ? 0.7 : 0.3);
      tok.form = first_half ? words[udirony::uniform_index(rng, half)]
                            : words[half + udirony::uniform_index(rng, words.size() - half)];
      tok.lemma = tok.form;
    }
    const Split split = t < n_train ? Split::kTrain : Split::kTest;
    corpus.items.push_back(make_item(std::move(s), label, split, language, language + "-" + std::to_string(t)));
  }
  return corpus;
}

std::string to_conllu(const LabeledCorpus& corpus, Split split) {
  std::vector<Sentence> sentences;
  for (const auto* item : corpus.of_split(split)) {
    Sentence s = item->sentence;
    s.set_meta("sent_id", item->sent_id);
    s.set_meta("irony", std::to_string(item->label));
    sentences.push_back(std::move(s));
  }
  return udirony::serialize_conllu(sentences);
}

LabeledCorpus sym_error_corpus() {
  LabeledCorpus corpus;
  auto add = [&](Sentence s, int label, const std::string& id) {
    corpus.items.push_back(make_item(std::move(s), label, Split::kTest, "en", id));
  };
  add(make_sentence({"price", "went", "up", "%", "great"}, {"NOUN", "VERB", "ADV", "SYM", "ADJ"}, {2, 0, 2, 2, 2},
                    {"nsubj", "root", "advmod", "obj", "advmod"}),
      1, "sym-0");
  add(make_sentence({"the", "dog", "ran", "home"}, {"DET", "NOUN", "VERB", "ADV"}, {2, 3, 0, 3},
                    {"det", "nsubj", "root", "advmod"}),
      0, "sym-1");
  add(make_sentence({"nice", "weather", "today", "again"}, {"ADJ", "NOUN", "NOUN", "ADV"}, {2, 0, 2, 2},
                    {"amod", "root", "obl", "advmod"}),
      1, "sym-2");
  add(make_sentence({"we", "went", "out", "late"}, {"PRON", "VERB", "ADV", "ADV"}, {2, 0, 2, 2},
                    {"nsubj", "root", "advmod", "advmod"}),
      0, "sym-3");
  return corpus;
}

std::string temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("udirony_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace fixtures
