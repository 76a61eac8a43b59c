#ifndef UDIRONY_ERROR_REPORT_H_
#define UDIRONY_ERROR_REPORT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "udirony/corpus.h"

namespace udirony {

struct CategoryDelta {
  std::string category;
  std::size_t count_all = 0;
  std::size_t count_misclassified = 0;
  double freq_all = 0.0;
  double freq_misclassified = 0.0;
  // Relative change in percent: (freq_mis - freq_all) / freq_all * 100.
  // Empty when nothing was misclassified.
  std::optional<double> delta_pct;
  bool watchlisted = false;
};

struct ErrorReport {
  std::size_t tweets = 0;
  std::size_t misclassified = 0;
  std::size_t tokens_all = 0;
  std::size_t tokens_misclassified = 0;
  // Sorted by delta descending, ties by category name.
  std::vector<CategoryDelta> upos;
  std::vector<CategoryDelta> deprel;
};

// Categories singled out in the error analysis: SYM, X, parataxis, flat, expl.
bool is_watchlisted(const std::string& category);

// Token-level frequencies: every token of a misclassified tweet counts.
// Throws DataError when `pred` and `test` differ in length.
ErrorReport error_distribution_report(const std::vector<const LabeledItem*>& test, const std::vector<int>& pred);

std::string format_error_report_tsv(const ErrorReport& report, const std::vector<std::string>& header = {});
std::string format_error_report_text(const ErrorReport& report);

}  // namespace udirony

#endif  // UDIRONY_ERROR_REPORT_H_
