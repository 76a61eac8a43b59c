#ifndef UDIRONY_TESTS_FIXTURES_H_
#define UDIRONY_TESTS_FIXTURES_H_

#include <cstdint>
#include <string>
#include <vector>

#include "udirony/conllu.h"
#include "udirony/corpus.h"
#include "udirony/random.h"

namespace fixtures {

// "If you are reading this right now you are not blind ... lol"
extern const char* const kBlindTweet;
// "Spero sia colite. Ma ho paura sia amore."
extern const char* const kColiteTweet;

udirony::Sentence blind_tweet();
udirony::Sentence colite_tweet();

// Random valid tree with n tokens. Forms come from a small lowercase lexicon,
// UPOS and deprels from fixed lists.
udirony::Sentence random_tree(std::size_t n, udirony::Rng& rng);

// Token rows from parallel arrays; ids are 1..n.
udirony::Sentence make_sentence(const std::vector<std::string>& forms, const std::vector<std::string>& upos,
                                const std::vector<int>& heads, const std::vector<std::string>& deprels);

// Every tweet holds exactly one "parataxis" and one "expl" token. In ironic
// tweets the expl token depends on the parataxis token; otherwise it never does.
udirony::LabeledCorpus planted_deprel_corpus(std::size_t n_tweets, double test_fraction, std::uint64_t seed);

// Ironic tweets contain the word "yeahright", the others "honestly"; all
// other words are shared noise.
udirony::LabeledCorpus lexical_corpus(std::size_t n_tweets, double test_fraction, std::uint64_t seed);

// Small mixed corpus for one of en, es, fr, it.
udirony::LabeledCorpus language_corpus(const std::string& language, std::size_t n_train, std::size_t n_test,
                                       std::uint64_t seed);

// Serializes items of one split with "# sent_id" and "# irony" comments.
std::string to_conllu(const udirony::LabeledCorpus& corpus, udirony::Split split);

// Test tweets for the error report: tweet 0 carries the only SYM token.
udirony::LabeledCorpus sym_error_corpus();

std::string temp_dir(const std::string& name);

}  // namespace fixtures

#endif  // UDIRONY_TESTS_FIXTURES_H_
