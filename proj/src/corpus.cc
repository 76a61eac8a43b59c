#include "udirony/corpus.h"

#include <cctype>
#include <charconv>
#include <set>

#include "udirony/atomic_file.h"
#include "udirony/error.h"
#include "udirony/unicode.h"

namespace udirony {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool starts_with_ci(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (s.size() - pos < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[pos + i])) != prefix[i]) return false;
  }
  return true;
}

bool url_starts_at(std::string_view s, std::size_t pos) {
  if (pos > 0 && std::isalnum(static_cast<unsigned char>(s[pos - 1]))) return false;
  return starts_with_ci(s, pos, "http://") || starts_with_ci(s, pos, "https://") ||
         starts_with_ci(s, pos, "www.");
}

int parse_label(std::string_view v, const std::string& where) {
  if (v == "0") return kNotIronic;
  if (v == "1") return kIronic;
  throw DataError(where + ": label '" + std::string(v) + "' is not 0 or 1");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find('\t', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

template <class F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    f(line, line_no);
  }
}

std::size_t parse_count(std::string_view v, std::size_t line_no) {
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw DataError("manifest line " + std::to_string(line_no) + ": bad count '" + std::string(v) + "'");
  }
  return out;
}

}  // namespace

std::string_view split_name(Split split) { return split == Split::kTrain ? "train" : "test"; }

std::vector<const LabeledItem*> LabeledCorpus::of_split(Split split) const {
  std::vector<const LabeledItem*> out;
  for (const auto& item : items) {
    if (item.split == split) out.push_back(&item);
  }
  return out;
}

std::string preprocess_text(std::string_view raw) {
  std::string stripped;
  stripped.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    if (url_starts_at(raw, i)) {
      while (i < raw.size() && !is_space(raw[i])) ++i;
      continue;
    }
    stripped += raw[i++];
  }
  std::string lowered = to_lower_utf8(stripped);
  std::string out;
  out.reserve(lowered.size());
  bool pending_space = false;
  for (char c : lowered) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

std::map<std::string, int> parse_label_tsv(std::string_view text, const std::string& name) {
  std::map<std::string, int> labels;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    if (trim(line).empty()) return;
    auto cols = split_tabs(line);
    const std::string where = name + ":" + std::to_string(line_no);
    if (cols.size() != 2) throw DataError(where + ": expected 'sent_id<TAB>label'");
    std::string id(trim(cols[0]));
    int label = parse_label(trim(cols[1]), where);
    if (!labels.emplace(id, label).second) throw DataError(where + ": duplicate sent_id " + id);
  });
  return labels;
}

LoadResult load_corpus(const std::vector<CorpusDocument>& documents, const LoadOptions& options) {
  LoadResult result;
  std::set<std::string> seen_ids;
  for (const auto& doc : documents) {
    ParseResult parsed;
    try {
      parsed = parse_conllu(doc.text, ParseOptions{options.lenient});
    } catch (const ConlluError& e) {
      throw DataError(doc.name + ": " + e.what());
    }
    for (auto& w : parsed.warnings) result.warnings.push_back(doc.name + ": " + w);
    for (std::size_t i = 0; i < parsed.sentences.size(); ++i) {
      Sentence& s = parsed.sentences[i];
      auto sent_id = s.meta("sent_id");
      const std::string id = sent_id ? *sent_id : doc.name + "#" + std::to_string(i + 1);
      if (sent_id && !seen_ids.insert(*sent_id).second) {
        throw DataError(doc.name + ": duplicate sent_id " + *sent_id);
      }
      std::optional<int> label;
      if (auto irony = s.meta("irony")) label = parse_label(*irony, doc.name + " sent_id " + id);
      if (sent_id) {
        if (auto it = options.sidecar_labels.find(*sent_id); it != options.sidecar_labels.end()) {
          if (label && *label != it->second) {
            throw DataError(doc.name + ": conflicting labels for sent_id " + id);
          }
          label = it->second;
        }
      }
      if (!label) throw DataError(doc.name + ": missing label for sent_id " + id);
      result.corpus.items.push_back({std::move(s), *label, doc.split, options.language, id});
    }
  }
  return result;
}

LoadResult load_corpus_files(const std::vector<std::string>& train_paths,
                             const std::vector<std::string>& test_paths,
                             const std::vector<std::string>& label_paths,
                             const std::string& language, bool lenient) {
  LoadOptions options;
  options.language = language;
  options.lenient = lenient;
  for (const auto& path : label_paths) {
    for (auto& [id, label] : parse_label_tsv(read_file(path), path)) {
      if (!options.sidecar_labels.emplace(id, label).second) {
        throw DataError(path + ": duplicate sent_id " + id);
      }
    }
  }
  std::vector<CorpusDocument> docs;
  for (const auto& p : train_paths) docs.push_back({p, read_file(p), Split::kTrain});
  for (const auto& p : test_paths) docs.push_back({p, read_file(p), Split::kTest});
  return load_corpus(docs, options);
}

CorpusCounts count_corpus(const LabeledCorpus& corpus) {
  CorpusCounts c;
  for (const auto& item : corpus.items) {
    ++c.counts[static_cast<std::size_t>(item.split)][static_cast<std::size_t>(item.label)];
  }
  return c;
}

CorpusCounts parse_manifest(std::string_view text) {
  CorpusCounts c;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    if (trim(line).empty() || line.front() == '#') return;
    auto cols = split_tabs(line);
    if (cols.size() != 3) {
      throw DataError("manifest line " + std::to_string(line_no) + ": expected 'split<TAB>ironic<TAB>not'");
    }
    std::size_t split;
    if (cols[0] == "train") {
      split = 0;
    } else if (cols[0] == "test") {
      split = 1;
    } else {
      throw DataError("manifest line " + std::to_string(line_no) + ": unknown split '" + std::string(cols[0]) + "'");
    }
    c.counts[split][kIronic] = parse_count(cols[1], line_no);
    c.counts[split][kNotIronic] = parse_count(cols[2], line_no);
  });
  return c;
}

void check_manifest(const CorpusCounts& actual, const CorpusCounts& expected) {
  std::string problems;
  for (Split split : {Split::kTrain, Split::kTest}) {
    for (int label : {kIronic, kNotIronic}) {
      if (actual.at(split, label) != expected.at(split, label)) {
        if (!problems.empty()) problems += "; ";
        problems += std::string(split_name(split)) + (label == kIronic ? " ironic" : " not-ironic") +
                    ": expected " + std::to_string(expected.at(split, label)) + ", found " +
                    std::to_string(actual.at(split, label));
      }
    }
  }
  if (!problems.empty()) throw DataError("corpus does not match manifest: " + problems);
}

std::string format_counts_report(const CorpusCounts& counts) {
  std::string out = "split\tironic\tnot\ttotal\n";
  for (Split split : {Split::kTrain, Split::kTest}) {
    out += std::string(split_name(split)) + '\t' + std::to_string(counts.at(split, kIronic)) + '\t' +
           std::to_string(counts.at(split, kNotIronic)) + '\t' + std::to_string(counts.total(split)) + '\n';
  }
  return out;
}

}  // namespace udirony
