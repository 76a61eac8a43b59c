#include "udirony/features.h"

#include <algorithm>

#include "udirony/error.h"
#include "udirony/unicode.h"

namespace udirony {
namespace {

constexpr std::array<std::string_view, kNumNamespaces> kNames = {
    "ngrams",      "chargrams",   "deprelneg",  "deprel",         "relformVERB",
    "relformNOUN", "relformADJ",  "sidorovform", "sidorovupostag", "sidorovdeprel",
};

const std::map<std::string, std::set<std::string>, std::less<>>& builtin_cues() {
  static const std::map<std::string, std::set<std::string>, std::less<>> cues = {
      {"en", {"not", "n't", "no", "never", "none", "nobody", "nothing", "neither", "nor"}},
      {"es", {"no", "nunca", "jamás", "nada", "nadie", "ni"}},
      {"fr", {"ne", "n'", "pas", "jamais", "rien", "personne", "aucun"}},
      {"it", {"non", "mai", "niente", "nulla", "nessuno", "né"}},
  };
  return cues;
}

std::string form_of(const Token& t, const ExtractOptions& options) {
  return options.lowercase_forms ? to_lower_utf8(t.form) : t.form;
}

std::vector<std::string> forms_of(const Sentence& s, const ExtractOptions& options) {
  std::vector<std::string> forms;
  forms.reserve(s.size());
  for (const Token& t : s.tokens) forms.push_back(form_of(t, options));
  return forms;
}

// Contiguous windows of each length in [min_len, max_len], joined by `sep`.
void add_windows(FeatureBag& bag, Namespace ns, const std::vector<std::string>& items,
                 std::size_t min_len, std::size_t max_len) {
  for (std::size_t len = min_len; len <= max_len; ++len) {
    if (items.size() < len) break;
    for (std::size_t i = 0; i + len <= items.size(); ++i) {
      std::string key = items[i];
      for (std::size_t k = 1; k < len; ++k) {
        key += ' ';
        key += items[i + k];
      }
      bag.add(ns, std::move(key));
    }
  }
}

// Splits UTF-8 into code points so character windows never cut a sequence.
std::vector<std::string_view> code_points(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i + 1;
    while (j < s.size() && (static_cast<unsigned char>(s[j]) & 0xC0) == 0x80) ++j;
    out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view pos_class_name(PosClass p) {
  switch (p) {
    case PosClass::kVerb: return "VERB";
    case PosClass::kNoun: return "NOUN";
    case PosClass::kAdj: return "ADJ";
  }
  return "";
}

Namespace relform_namespace(PosClass p) {
  switch (p) {
    case PosClass::kVerb: return Namespace::kRelformVerb;
    case PosClass::kNoun: return Namespace::kRelformNoun;
    case PosClass::kAdj: return Namespace::kRelformAdj;
  }
  return Namespace::kRelformVerb;
}

}  // namespace

std::string_view namespace_name(Namespace ns) { return kNames[static_cast<std::size_t>(ns)]; }

std::optional<Namespace> namespace_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNumNamespaces; ++i) {
    if (kNames[i] == name) return kAllNamespaces[i];
  }
  return std::nullopt;
}

bool operator<(const FeatureBag::Key& a, const FeatureBag::Key& b) {
  if (a.ns != b.ns) return namespace_name(a.ns) < namespace_name(b.ns);
  return a.key < b.key;
}

void FeatureBag::add(Namespace ns, std::string key, std::uint32_t count) {
  if (count == 0) return;
  entries_[Key{ns, std::move(key)}] += count;
}

void FeatureBag::merge(const FeatureBag& other) {
  for (const auto& [k, c] : other.entries_) entries_[k] += c;
}

std::uint32_t FeatureBag::count(Namespace ns, std::string_view key) const {
  auto it = entries_.find(Key{ns, std::string(key)});
  return it == entries_.end() ? 0 : it->second;
}

std::uint64_t FeatureBag::total() const {
  std::uint64_t t = 0;
  for (const auto& [k, c] : entries_) t += c;
  return t;
}

std::uint64_t FeatureBag::total(Namespace ns) const {
  std::uint64_t t = 0;
  for (const auto& [k, c] : entries_) {
    if (k.ns == ns) t += c;
  }
  return t;
}

FeatureSpec::FeatureSpec(std::initializer_list<Namespace> namespaces) {
  for (Namespace ns : namespaces) mask_ |= 1u << static_cast<unsigned>(ns);
}

FeatureSpec FeatureSpec::parse(std::string_view list) {
  if (list == "all") return all();
  FeatureSpec spec;
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t comma = list.find(',', start);
    std::string_view name = list.substr(start, comma == std::string_view::npos ? comma : comma - start);
    if (!name.empty()) {
      auto ns = namespace_from_name(name);
      if (!ns) throw UsageError("unknown feature namespace '" + std::string(name) + "'");
      spec.mask_ |= 1u << static_cast<unsigned>(*ns);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return spec;
}

std::vector<Namespace> FeatureSpec::namespaces() const {
  std::vector<Namespace> out;
  for (Namespace ns : kAllNamespaces) {
    if (enabled(ns)) out.push_back(ns);
  }
  return out;
}

std::string FeatureSpec::to_string() const {
  std::string out;
  for (Namespace ns : namespaces()) {
    if (!out.empty()) out += ',';
    out += namespace_name(ns);
  }
  return out;
}

NegationLexicon NegationLexicon::builtin(std::string_view language) {
  const auto& all = builtin_cues();
  if (auto it = all.find(language); it != all.end()) return NegationLexicon(it->second);
  std::set<std::string> merged;
  for (const auto& [lang, cues] : all) merged.insert(cues.begin(), cues.end());
  return NegationLexicon(std::move(merged));
}

NegationLexicon NegationLexicon::parse(std::string_view text) {
  std::set<std::string> cues;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (line.empty() || line.front() == '#') continue;
    cues.insert(to_lower_utf8(line));
  }
  return NegationLexicon(std::move(cues));
}

FeatureBag extract_token_ngrams(const Sentence& s, const ExtractOptions& options) {
  FeatureBag bag;
  add_windows(bag, Namespace::kNgrams, forms_of(s, options), 1, options.ngram_max);
  return bag;
}

FeatureBag extract_chargrams(const Sentence& s, const ExtractOptions& options) {
  std::string joined;
  for (const auto& f : forms_of(s, options)) joined += f;
  auto chars = code_points(joined);
  FeatureBag bag;
  for (std::size_t len = 2; len <= 5; ++len) {
    if (chars.size() < len) break;
    for (std::size_t i = 0; i + len <= chars.size(); ++i) {
      const char* begin = chars[i].data();
      const char* end = chars[i + len - 1].data() + chars[i + len - 1].size();
      bag.add(Namespace::kChargrams, std::string(begin, end));
    }
  }
  return bag;
}

FeatureBag extract_neg_deprel(const Sentence& s, const ExtractOptions& options) {
  FeatureBag bag;
  for (const Token& t : s.tokens) {
    if (t.has_feature("Polarity", "Neg") || options.negation.contains(to_lower_utf8(t.form))) {
      bag.add(Namespace::kDeprelNeg, t.deprel);
    }
  }
  return bag;
}

FeatureBag extract_deprel_ngrams(const Sentence& s) {
  std::vector<std::string> deprels;
  deprels.reserve(s.size());
  for (const Token& t : s.tokens) deprels.push_back(t.deprel);
  FeatureBag bag;
  add_windows(bag, Namespace::kDeprel, deprels, 5, 7);
  return bag;
}

FeatureBag extract_relation_tuples(const Sentence& s, PosClass pos_class, const ExtractOptions& options) {
  const std::string_view tag = pos_class_name(pos_class);
  const Namespace ns = relform_namespace(pos_class);
  FeatureBag bag;
  if (s.size() == 0) return bag;
  const DepTree tree(s);
  const auto forms = forms_of(s, options);
  for (const Token& pivot : s.tokens) {
    if (pivot.upos != tag) continue;
    const auto nbrs = tree.neighbors(pivot.id);  // ascending = linear order
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
        bag.add(ns, forms[static_cast<std::size_t>(nbrs[i] - 1)] + std::string(tag) +
                        forms[static_cast<std::size_t>(nbrs[j] - 1)]);
      }
    }
  }
  return bag;
}

FeatureBag extract_sidorov_bigrams(const Sentence& s, SidorovChannel channel, const ExtractOptions& options) {
  FeatureBag bag;
  if (s.size() == 0) return bag;
  Namespace ns = Namespace::kSidorovForm;
  std::vector<std::string> attr;
  attr.reserve(s.size());
  switch (channel) {
    case SidorovChannel::kForm:
      attr = forms_of(s, options);
      break;
    case SidorovChannel::kUpos:
      ns = Namespace::kSidorovUpostag;
      for (const Token& t : s.tokens) attr.push_back(t.upos);
      break;
    case SidorovChannel::kDeprel:
      ns = Namespace::kSidorovDeprel;
      for (const Token& t : s.tokens) attr.push_back(t.deprel);
      break;
  }
  const DepTree tree(s);
  for (auto [h, d] : tree.edges_preorder()) {
    bag.add(ns, attr[static_cast<std::size_t>(h - 1)] + " " + attr[static_cast<std::size_t>(d - 1)]);
  }
  return bag;
}

FeatureBag extract_features(const Sentence& s, const FeatureSpec& spec, const ExtractOptions& options) {
  FeatureBag bag;
  for (Namespace ns : spec.namespaces()) {
    switch (ns) {
      case Namespace::kNgrams: bag.merge(extract_token_ngrams(s, options)); break;
      case Namespace::kChargrams: bag.merge(extract_chargrams(s, options)); break;
      case Namespace::kDeprelNeg: bag.merge(extract_neg_deprel(s, options)); break;
      case Namespace::kDeprel: bag.merge(extract_deprel_ngrams(s)); break;
      case Namespace::kRelformVerb: bag.merge(extract_relation_tuples(s, PosClass::kVerb, options)); break;
      case Namespace::kRelformNoun: bag.merge(extract_relation_tuples(s, PosClass::kNoun, options)); break;
      case Namespace::kRelformAdj: bag.merge(extract_relation_tuples(s, PosClass::kAdj, options)); break;
      case Namespace::kSidorovForm: bag.merge(extract_sidorov_bigrams(s, SidorovChannel::kForm, options)); break;
      case Namespace::kSidorovUpostag: bag.merge(extract_sidorov_bigrams(s, SidorovChannel::kUpos, options)); break;
      case Namespace::kSidorovDeprel: bag.merge(extract_sidorov_bigrams(s, SidorovChannel::kDeprel, options)); break;
    }
  }
  return bag;
}

std::string format_bag_tsv(const FeatureBag& bag) {
  std::string out;
  for (const auto& [k, c] : bag.entries()) {
    out += namespace_name(k.ns);
    out += '\t';
    out += k.key;
    out += '\t';
    out += std::to_string(c);
    out += '\n';
  }
  return out;
}

}  // namespace udirony
