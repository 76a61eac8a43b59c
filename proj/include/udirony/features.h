#ifndef UDIRONY_FEATURES_H_
#define UDIRONY_FEATURES_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "udirony/conllu.h"

namespace udirony {

// The ten feature families. The enumerator order defines the bit position of
// each family in a subset bitmask.
enum class Namespace : std::uint8_t {
  kNgrams,
  kChargrams,
  kDeprelNeg,
  kDeprel,
  kRelformVerb,
  kRelformNoun,
  kRelformAdj,
  kSidorovForm,
  kSidorovUpostag,
  kSidorovDeprel,
};

inline constexpr std::size_t kNumNamespaces = 10;

inline constexpr std::array<Namespace, kNumNamespaces> kAllNamespaces = {
    Namespace::kNgrams,       Namespace::kChargrams,    Namespace::kDeprelNeg,   Namespace::kDeprel,
    Namespace::kRelformVerb,  Namespace::kRelformNoun,  Namespace::kRelformAdj,  Namespace::kSidorovForm,
    Namespace::kSidorovUpostag, Namespace::kSidorovDeprel,
};

std::string_view namespace_name(Namespace ns);
std::optional<Namespace> namespace_from_name(std::string_view name);

// Multiset of (namespace, key). Iteration is ordered by namespace name, then
// key, which is also the vocabulary order.
class FeatureBag {
 public:
  struct Key {
    Namespace ns;
    std::string key;

    friend bool operator<(const Key& a, const Key& b);
    friend bool operator==(const Key& a, const Key& b) = default;
  };
  using Map = std::map<Key, std::uint32_t>;

  void add(Namespace ns, std::string key, std::uint32_t count = 1);
  void merge(const FeatureBag& other);

  std::uint32_t count(Namespace ns, std::string_view key) const;
  bool contains(Namespace ns, std::string_view key) const { return count(ns, key) > 0; }
  // Sum of counts, optionally restricted to one namespace.
  std::uint64_t total() const;
  std::uint64_t total(Namespace ns) const;
  bool empty() const { return entries_.empty(); }
  std::size_t distinct() const { return entries_.size(); }
  const Map& entries() const { return entries_; }

  friend bool operator==(const FeatureBag&, const FeatureBag&) = default;

 private:
  Map entries_;
};

// Bitmask over Namespace, bit i = kAllNamespaces[i].
class FeatureSpec {
 public:
  FeatureSpec() = default;
  explicit FeatureSpec(std::uint32_t mask) : mask_(mask & ((1u << kNumNamespaces) - 1)) {}
  FeatureSpec(std::initializer_list<Namespace> namespaces);

  static FeatureSpec all() { return FeatureSpec((1u << kNumNamespaces) - 1); }
  // Comma-separated namespace names, or "all". Throws UsageError.
  static FeatureSpec parse(std::string_view list);

  bool enabled(Namespace ns) const { return (mask_ >> static_cast<unsigned>(ns)) & 1u; }
  bool empty() const { return mask_ == 0; }
  std::uint32_t mask() const { return mask_; }
  std::vector<Namespace> namespaces() const;
  // Comma-separated names in bit order.
  std::string to_string() const;
  bool contains(const FeatureSpec& other) const { return (other.mask_ & ~mask_) == 0; }

  friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;

 private:
  std::uint32_t mask_ = 0;
};

// Per-language negation cue forms (lowercase).
class NegationLexicon {
 public:
  NegationLexicon() = default;
  explicit NegationLexicon(std::set<std::string> cues) : cues_(std::move(cues)) {}

  // Built-in lists for "en", "es", "fr", "it"; any other tag (including "")
  // yields the union of all four.
  static NegationLexicon builtin(std::string_view language);
  // One cue per line; blank lines and '#' comments ignored.
  static NegationLexicon parse(std::string_view text);

  bool contains(std::string_view lowered_form) const { return cues_.count(std::string(lowered_form)) > 0; }
  const std::set<std::string>& cues() const { return cues_; }

 private:
  std::set<std::string> cues_;
};

struct ExtractOptions {
  bool lowercase_forms = true;
  // Longest token n-gram; 1 gives the unigram bag.
  std::size_t ngram_max = 3;
  NegationLexicon negation = NegationLexicon::builtin("");
};

enum class PosClass { kVerb, kNoun, kAdj };
enum class SidorovChannel { kForm, kUpos, kDeprel };

FeatureBag extract_token_ngrams(const Sentence& s, const ExtractOptions& options = {});
FeatureBag extract_chargrams(const Sentence& s, const ExtractOptions& options = {});
FeatureBag extract_neg_deprel(const Sentence& s, const ExtractOptions& options = {});
FeatureBag extract_deprel_ngrams(const Sentence& s);
FeatureBag extract_relation_tuples(const Sentence& s, PosClass pos_class, const ExtractOptions& options = {});
FeatureBag extract_sidorov_bigrams(const Sentence& s, SidorovChannel channel, const ExtractOptions& options = {});

// Union of the extractors enabled in `spec`.
FeatureBag extract_features(const Sentence& s, const FeatureSpec& spec, const ExtractOptions& options = {});

// "namespace<TAB>key<TAB>count" lines in bag order.
std::string format_bag_tsv(const FeatureBag& bag);

}  // namespace udirony

#endif  // UDIRONY_FEATURES_H_
