#include "udirony/vectorizer.h"

#include <algorithm>
#include <charconv>
#include <set>

#include "udirony/error.h"

namespace udirony {
namespace {

// Namespaces ordered by name; the vocabulary column order.
const std::array<Namespace, kNumNamespaces>& namespaces_by_name() {
  static const auto order = [] {
    auto o = kAllNamespaces;
    std::sort(o.begin(), o.end(),
              [](Namespace a, Namespace b) { return namespace_name(a) < namespace_name(b); });
    return o;
  }();
  return order;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

template <class T>
T parse_number(std::string_view s, const std::string& what) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw DataError("malformed " + what + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

double SparseVector::l1() const {
  double s = 0;
  for (const auto& [i, v] : entries) s += v;
  return s;
}

double SparseVector::squared_norm() const {
  double s = 0;
  for (const auto& [i, v] : entries) s += v * v;
  return s;
}

double SparseVector::at(std::uint32_t index) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), index,
                             [](const auto& e, std::uint32_t i) { return e.first < i; });
  return (it != entries.end() && it->first == index) ? it->second : 0.0;
}

Vocabulary::Vocabulary(FeatureSpec spec, std::vector<FeatureBag::Key> keys)
    : spec_(spec), keys_(std::move(keys)) {
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    if (i > 0 && !(keys_[i - 1] < keys_[i])) throw DataError("vocabulary keys are not sorted and unique");
    index_.emplace(keys_[i], static_cast<std::uint32_t>(i));
  }
}

std::int64_t Vocabulary::find(Namespace ns, std::string_view key) const {
  auto it = index_.find(FeatureBag::Key{ns, std::string(key)});
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::string Vocabulary::to_tsv() const {
  std::string out;
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    out += std::to_string(i);
    out += '\t';
    out += namespace_name(keys_[i].ns);
    out += '\t';
    out += keys_[i].key;
    out += '\n';
  }
  return out;
}

Vocabulary Vocabulary::from_tsv(std::string_view text, FeatureSpec spec) {
  std::vector<FeatureBag::Key> keys;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    if (line.empty()) continue;
    std::size_t t1 = line.find('\t');
    std::size_t t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) throw DataError("malformed vocabulary line");
    auto index = parse_number<std::size_t>(line.substr(0, t1), "vocabulary index");
    if (index != keys.size()) throw DataError("vocabulary indices are not dense");
    auto ns = namespace_from_name(line.substr(t1 + 1, t2 - t1 - 1));
    if (!ns) throw DataError("unknown namespace in vocabulary");
    keys.push_back({*ns, std::string(line.substr(t2 + 1))});
  }
  return Vocabulary(spec, std::move(keys));
}

Vocabulary build_vocab(const std::vector<FeatureBag>& train_bags, const FeatureSpec& spec, std::size_t min_df) {
  if (train_bags.empty()) throw DataError("cannot build a vocabulary from an empty training split");
  if (spec.empty()) throw UsageError("feature spec enables no namespace");
  std::map<FeatureBag::Key, std::size_t> df;
  for (const auto& bag : train_bags) {
    for (const auto& [k, c] : bag.entries()) {
      if (spec.enabled(k.ns)) ++df[k];
    }
  }
  std::vector<FeatureBag::Key> keys;
  for (const auto& [k, n] : df) {
    if (n >= min_df) keys.push_back(k);
  }
  return Vocabulary(spec, std::move(keys));
}

SparseVector vectorize(const FeatureBag& bag, const Vocabulary& vocab, const FeatureSpec& spec, bool binary) {
  if (!vocab.spec().contains(spec)) {
    throw UsageError("feature spec '" + spec.to_string() + "' is not covered by the vocabulary spec '" +
                     vocab.spec().to_string() + "'");
  }
  SparseVector v;
  // Bag order equals vocabulary order, so indices come out ascending.
  for (const auto& [k, c] : bag.entries()) {
    if (!spec.enabled(k.ns)) continue;
    std::int64_t idx = vocab.find(k.ns, k.key);
    if (idx < 0) continue;
    v.entries.emplace_back(static_cast<std::uint32_t>(idx), binary ? 1.0 : static_cast<double>(c));
  }
  return v;
}

std::vector<FeatureSpec> enumerate_subsets(const std::vector<Namespace>& namespaces) {
  std::vector<FeatureSpec> out;
  const std::uint32_t n = static_cast<std::uint32_t>(namespaces.size());
  for (std::uint32_t m = 1; m < (1u << n); ++m) {
    std::uint32_t mask = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      if ((m >> i) & 1u) mask |= 1u << static_cast<unsigned>(namespaces[i]);
    }
    out.emplace_back(mask);
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string format_svmlight(const Dataset& data) {
  std::string out;
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    out += std::to_string(data.labels[r]);
    for (const auto& [i, v] : data.rows[r].entries) {
      out += ' ';
      out += std::to_string(i);
      out += ':';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

Dataset parse_svmlight(std::string_view text) {
  Dataset data;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (line.empty()) continue;
    auto fields = split(line, ' ');
    const std::string where = "svmlight line " + std::to_string(line_no) + ": ";
    int label = parse_number<int>(fields[0], where + "label");
    if (label != 0 && label != 1) throw DataError(where + "label must be 0 or 1");
    SparseVector v;
    for (std::size_t f = 1; f < fields.size(); ++f) {
      std::size_t colon = fields[f].find(':');
      if (colon == std::string_view::npos) throw DataError(where + "expected index:value");
      auto idx = parse_number<std::uint32_t>(fields[f].substr(0, colon), where + "index");
      auto val = parse_number<double>(fields[f].substr(colon + 1), where + "value");
      if (!v.entries.empty() && idx <= v.entries.back().first) throw DataError(where + "indices not ascending");
      if (!(val > 0)) throw DataError(where + "values must be positive");
      v.entries.emplace_back(idx, val);
      data.dim = std::max<std::size_t>(data.dim, idx + 1);
    }
    data.rows.push_back(std::move(v));
    data.labels.push_back(label);
  }
  return data;
}

BagTable::BagTable(const std::vector<FeatureBag>& bags) : rows_(bags.size()) {
  std::array<std::set<std::string>, kNumNamespaces> distinct;
  for (const auto& bag : bags) {
    for (const auto& [k, c] : bag.entries()) distinct[static_cast<std::size_t>(k.ns)].insert(k.key);
  }
  std::array<std::map<std::string_view, std::uint32_t>, kNumNamespaces> ids;
  for (std::size_t n = 0; n < kNumNamespaces; ++n) {
    keys_[n].assign(distinct[n].begin(), distinct[n].end());
    for (std::size_t i = 0; i < keys_[n].size(); ++i) ids[n].emplace(keys_[n][i], static_cast<std::uint32_t>(i));
  }
  for (std::size_t r = 0; r < bags.size(); ++r) {
    for (const auto& [k, c] : bags[r].entries()) {
      auto n = static_cast<std::size_t>(k.ns);
      rows_[r][n].emplace_back(ids[n].at(k.key), c);
    }
  }
}

BagTable::Projection BagTable::project(const std::vector<std::size_t>& train_rows, const FeatureSpec& spec,
                                       std::size_t min_df) const {
  if (train_rows.empty()) throw DataError("cannot build a vocabulary from an empty training split");
  if (spec.empty()) throw UsageError("feature spec enables no namespace");
  Projection p;
  std::vector<FeatureBag::Key> keys;
  std::int64_t next = 0;
  for (Namespace ns : namespaces_by_name()) {
    if (!spec.enabled(ns)) continue;
    auto n = static_cast<std::size_t>(ns);
    std::vector<std::size_t> df(keys_[n].size(), 0);
    for (std::size_t r : train_rows) {
      for (const auto& [id, c] : rows_[r][n]) ++df[id];
    }
    p.column[n].assign(keys_[n].size(), -1);
    for (std::size_t id = 0; id < keys_[n].size(); ++id) {
      if (df[id] >= min_df && df[id] > 0) {
        p.column[n][id] = next++;
        keys.push_back({ns, keys_[n][id]});
      }
    }
  }
  p.vocab = Vocabulary(spec, std::move(keys));
  return p;
}

SparseVector BagTable::vector(std::size_t row, const Projection& projection, bool binary) const {
  SparseVector v;
  for (Namespace ns : namespaces_by_name()) {
    auto n = static_cast<std::size_t>(ns);
    if (projection.column[n].empty()) continue;
    for (const auto& [id, c] : rows_[row][n]) {
      std::int64_t col = projection.column[n][id];
      if (col >= 0) v.entries.emplace_back(static_cast<std::uint32_t>(col), binary ? 1.0 : static_cast<double>(c));
    }
  }
  return v;
}

Dataset BagTable::dataset(const std::vector<std::size_t>& row_ids, const std::vector<int>& labels,
                          const Projection& projection, bool binary) const {
  Dataset d;
  d.dim = projection.vocab.size();
  d.rows.reserve(row_ids.size());
  for (std::size_t r : row_ids) {
    d.rows.push_back(vector(r, projection, binary));
    d.labels.push_back(labels[r]);
  }
  return d;
}

}  // namespace udirony
