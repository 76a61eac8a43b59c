#include "udirony/embeddings.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "udirony/error.h"
#include "udirony/linear_model.h"
#include "udirony/random.h"
#include "udirony/unicode.h"
#include "udirony/vectorizer.h"

namespace udirony {
namespace {

double dot(const double* a, const double* b, std::size_t dim) {
  double s = 0;
  for (std::size_t i = 0; i < dim; ++i) s += a[i] * b[i];
  return s;
}

double log_sigmoid(double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

// Frequency-ordered vocabulary of the entries with count >= min_count.
void build_vocab(const std::map<std::string, std::uint64_t>& counts, std::size_t min_count,
                 std::vector<std::string>& names, std::vector<std::uint64_t>& freqs) {
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (const auto& [name, n] : counts) {
    if (n >= min_count) kept.emplace_back(name, n);
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  for (auto& [name, n] : kept) {
    names.push_back(std::move(name));
    freqs.push_back(n);
  }
}

std::optional<std::size_t> find_in(const std::vector<std::string>& names, std::string_view key) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == key) return i;
  }
  return std::nullopt;
}

}  // namespace

std::vector<ContextPair> extract_contexts(const std::vector<Sentence>& treebank, bool lowercase_forms) {
  std::vector<ContextPair> pairs;
  for (const Sentence& s : treebank) {
    std::vector<std::string> forms;
    forms.reserve(s.size());
    for (const Token& t : s.tokens) forms.push_back(lowercase_forms ? to_lower_utf8(t.form) : t.form);
    for (const Token& t : s.tokens) {
      if (t.head == 0) continue;
      const std::string& head = forms[static_cast<std::size_t>(t.head - 1)];
      const std::string& dep = forms[static_cast<std::size_t>(t.id - 1)];
      pairs.push_back({head, dep + "/" + t.deprel});
      pairs.push_back({dep, head + "/" + t.deprel + std::string(kInverseMarker)});
    }
  }
  return pairs;
}

std::optional<std::size_t> EmbeddingTable::word_index(std::string_view w) const { return find_in(words, w); }
std::optional<std::size_t> EmbeddingTable::context_index(std::string_view c) const { return find_in(contexts, c); }

double sgns_objective(const double* w, const double* c, const std::vector<const double*>& negs, std::size_t dim) {
  double obj = log_sigmoid(dot(w, c, dim));
  for (const double* n : negs) obj += log_sigmoid(-dot(w, n, dim));
  return obj;
}

void sgns_gradient(const double* w, const double* c, const std::vector<const double*>& negs, std::size_t dim,
                   double* grad_w, double* grad_c, double* grad_negs) {
  const double gp = 1.0 - sigmoid(dot(w, c, dim));
  for (std::size_t i = 0; i < dim; ++i) {
    grad_w[i] = gp * c[i];
    grad_c[i] = gp * w[i];
  }
  for (std::size_t k = 0; k < negs.size(); ++k) {
    const double gn = -sigmoid(dot(w, negs[k], dim));
    double* gk = grad_negs + k * dim;
    for (std::size_t i = 0; i < dim; ++i) {
      grad_w[i] += gn * negs[k][i];
      gk[i] = gn * w[i];
    }
  }
}

EmbeddingTable train_sgns(const std::vector<ContextPair>& pairs, const SgnsConfig& config,
                          const SgnsEpochHook& on_epoch) {
  if (config.dim == 0) throw UsageError("embedding dimension must be positive");
  std::map<std::string, std::uint64_t> word_counts, context_counts;
  for (const auto& p : pairs) {
    ++word_counts[p.word];
    ++context_counts[p.context];
  }
  EmbeddingTable t;
  t.dim = config.dim;
  t.config = config;
  build_vocab(word_counts, config.min_count, t.words, t.word_counts);
  build_vocab(context_counts, config.min_count, t.contexts, t.context_counts);
  if (t.words.empty() || t.contexts.empty()) {
    throw TrainingError("empty embedding vocabulary after min_count filtering (min_count = " +
                        std::to_string(config.min_count) + ")");
  }

  std::unordered_map<std::string_view, std::uint32_t> wid, cid;
  for (std::size_t i = 0; i < t.words.size(); ++i) wid.emplace(t.words[i], static_cast<std::uint32_t>(i));
  for (std::size_t i = 0; i < t.contexts.size(); ++i) cid.emplace(t.contexts[i], static_cast<std::uint32_t>(i));
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ids;
  for (const auto& p : pairs) {
    auto w = wid.find(p.word);
    auto c = cid.find(p.context);
    if (w != wid.end() && c != cid.end()) ids.emplace_back(w->second, c->second);
  }
  if (ids.empty()) throw TrainingError("no (word, context) pair survives min_count filtering");

  const std::size_t d = config.dim;
  Rng rng(config.seed);
  t.word_vectors.resize(t.words.size() * d);
  for (double& v : t.word_vectors) v = uniform(rng, -0.5 / static_cast<double>(d), 0.5 / static_cast<double>(d));
  t.context_vectors.assign(t.contexts.size() * d, 0.0);

  // Cumulative unigram^0.75 weights for negative sampling.
  std::vector<double> cumulative(t.contexts.size());
  double acc = 0;
  for (std::size_t i = 0; i < t.contexts.size(); ++i) {
    acc += std::pow(static_cast<double>(t.context_counts[i]), 0.75);
    cumulative[i] = acc;
  }
  auto draw_negative = [&]() {
    const double u = uniform01(rng) * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return static_cast<std::uint32_t>(std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1));
  };

  const double total_steps = static_cast<double>(ids.size()) * std::max(config.epochs, 1);
  std::size_t step = 0;
  std::vector<std::uint32_t> neg_ids;
  std::vector<const double*> negs;
  std::vector<double> gw(d), gc(d), gn;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle(ids, rng);
    for (const auto& [w, c] : ids) {
      const double lr = config.learning_rate * std::max(1e-4, 1.0 - static_cast<double>(step++) / total_steps);
      neg_ids.clear();
      negs.clear();
      for (std::size_t k = 0; k < config.negatives; ++k) {
        const std::uint32_t n = draw_negative();
        if (n == c) continue;
        neg_ids.push_back(n);
        negs.push_back(&t.context_vectors[n * d]);
      }
      double* wv = &t.word_vectors[w * d];
      double* cv = &t.context_vectors[c * d];
      gn.resize(negs.size() * d);
      sgns_gradient(wv, cv, negs, d, gw.data(), gc.data(), gn.data());
      for (std::size_t i = 0; i < d; ++i) cv[i] += lr * gc[i];
      for (std::size_t k = 0; k < neg_ids.size(); ++k) {
        double* nv = &t.context_vectors[neg_ids[k] * d];
        for (std::size_t i = 0; i < d; ++i) nv[i] += lr * gn[k * d + i];
      }
      for (std::size_t i = 0; i < d; ++i) wv[i] += lr * gw[i];
    }
    if (on_epoch) on_epoch(epoch, t);
  }
  return t;
}

double cosine(const double* a, const double* b, std::size_t dim) {
  const double na = std::sqrt(dot(a, a, dim));
  const double nb = std::sqrt(dot(b, b, dim));
  if (na == 0 || nb == 0) return 0.0;
  return dot(a, b, dim) / (na * nb);
}

std::vector<Neighbor> nearest_neighbors(const EmbeddingTable& table, std::string_view word, std::size_t k) {
  const auto q = table.word_index(word);
  if (!q) throw DataError("'" + std::string(word) + "' is not in the embedding vocabulary");
  std::vector<Neighbor> out;
  for (std::size_t i = 0; i < table.words.size(); ++i) {
    if (i == *q) continue;
    out.push_back({table.words[i], cosine(table.word_vector(*q), table.word_vector(i), table.dim)});
  }
  std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.cosine != b.cosine) return a.cosine > b.cosine;
    return a.word < b.word;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

std::string format_word_vectors(const EmbeddingTable& table) {
  std::string out = std::to_string(table.words.size()) + " " + std::to_string(table.dim) + "\n";
  for (std::size_t i = 0; i < table.words.size(); ++i) {
    out += table.words[i];
    const double* v = table.word_vector(i);
    for (std::size_t j = 0; j < table.dim; ++j) {
      out += ' ';
      out += format_double(v[j]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace udirony
