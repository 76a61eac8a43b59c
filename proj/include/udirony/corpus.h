#ifndef UDIRONY_CORPUS_H_
#define UDIRONY_CORPUS_H_

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "udirony/conllu.h"

namespace udirony {

enum class Split { kTrain, kTest };

std::string_view split_name(Split split);

// Ironic is the positive class.
inline constexpr int kIronic = 1;
inline constexpr int kNotIronic = 0;

struct LabeledItem {
  Sentence sentence;
  int label = 0;
  Split split = Split::kTrain;
  std::string language;
  std::string sent_id;
};

struct LabeledCorpus {
  std::vector<LabeledItem> items;

  std::vector<const LabeledItem*> of_split(Split split) const;
};

// Strips URLs (http://, https://, www. up to the next whitespace), lowercases
// and collapses whitespace runs. Idempotent.
std::string preprocess_text(std::string_view raw);

// One CoNLL-U document to ingest.
struct CorpusDocument {
  std::string name;  // used in diagnostics
  std::string text;
  Split split = Split::kTrain;
};

struct LoadOptions {
  // sent_id -> label, used for sentences without "# irony" metadata.
  std::map<std::string, int> sidecar_labels;
  std::string language;
  bool lenient = false;
};

struct LoadResult {
  LabeledCorpus corpus;
  std::vector<std::string> warnings;
};

LoadResult load_corpus(const std::vector<CorpusDocument>& documents, const LoadOptions& options);

// Reads files from disk, then behaves like load_corpus.
LoadResult load_corpus_files(const std::vector<std::string>& train_paths,
                             const std::vector<std::string>& test_paths,
                             const std::vector<std::string>& label_paths,
                             const std::string& language, bool lenient);

// Parses a "sent_id<TAB>label" sidecar. Blank lines are skipped.
std::map<std::string, int> parse_label_tsv(std::string_view text, const std::string& name = "labels");

// counts[split][label]
struct CorpusCounts {
  std::array<std::array<std::size_t, 2>, 2> counts{};

  std::size_t at(Split split, int label) const {
    return counts[static_cast<std::size_t>(split)][static_cast<std::size_t>(label)];
  }
  std::size_t total(Split split) const { return at(split, 0) + at(split, 1); }
  friend bool operator==(const CorpusCounts&, const CorpusCounts&) = default;
};

CorpusCounts count_corpus(const LabeledCorpus& corpus);

// "split<TAB>ironic<TAB>not" per line, e.g. "train\t1923\t1911".
CorpusCounts parse_manifest(std::string_view text);

// Throws DataError describing every mismatching cell.
void check_manifest(const CorpusCounts& actual, const CorpusCounts& expected);

// Tab-separated report with one row per split plus a header.
std::string format_counts_report(const CorpusCounts& counts);

}  // namespace udirony

#endif  // UDIRONY_CORPUS_H_
