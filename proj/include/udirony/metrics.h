#ifndef UDIRONY_METRICS_H_
#define UDIRONY_METRICS_H_

#include <cstddef>
#include <string>
#include <vector>

namespace udirony {

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Binary evaluation with ironic (1) as the positive class. Any 0/0 in
// precision, recall or F1 is taken as 0.
struct EvalReport {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  ClassScores ironic;
  ClassScores not_ironic;
  // Mean F1 over the classes occurring in gold or predictions. With both
  // classes present this is (F1_ironic + F1_not) / 2.
  double macro_f1 = 0.0;

  std::size_t total() const { return tp + fp + fn + tn; }
  double accuracy() const { return total() ? static_cast<double>(tp + tn) / static_cast<double>(total()) : 0.0; }
};

// Throws DataError on empty or unequal-length input, or labels outside {0,1}.
EvalReport macro_f1(const std::vector<int>& pred, const std::vector<int>& gold);

// Builds the report from confusion counts; same conventions as macro_f1.
EvalReport report_from_counts(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn);

std::string format_report_text(const EvalReport& r);
// "metric<TAB>value" rows.
std::string format_report_tsv(const EvalReport& r);

}  // namespace udirony

#endif  // UDIRONY_METRICS_H_
