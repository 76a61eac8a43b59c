#include "udirony/metrics.h"

#include <cstdio>

#include "udirony/error.h"
#include "udirony/vectorizer.h"

namespace udirony {
namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

ClassScores scores(std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassScores s;
  s.precision = ratio(tp, tp + fp);
  s.recall = ratio(tp, tp + fn);
  // 2TP / (2TP + FP + FN) equals the harmonic mean without the extra
  // rounding of P and R.
  s.f1 = ratio(2 * tp, 2 * tp + fp + fn);
  return s;
}

}  // namespace

EvalReport report_from_counts(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn) {
  EvalReport r;
  r.tp = tp;
  r.fp = fp;
  r.fn = fn;
  r.tn = tn;
  r.ironic = scores(tp, fp, fn);
  r.not_ironic = scores(tn, fn, fp);
  const bool ironic_present = tp + fp + fn > 0;
  const bool not_present = tn + fn + fp > 0;
  if (ironic_present && not_present) {
    r.macro_f1 = (r.ironic.f1 + r.not_ironic.f1) / 2.0;
  } else if (ironic_present) {
    r.macro_f1 = r.ironic.f1;
  } else if (not_present) {
    r.macro_f1 = r.not_ironic.f1;
  }
  return r;
}

EvalReport macro_f1(const std::vector<int>& pred, const std::vector<int>& gold) {
  if (pred.size() != gold.size()) {
    throw DataError("prediction/gold length mismatch: " + std::to_string(pred.size()) + " vs " +
                    std::to_string(gold.size()));
  }
  if (pred.empty()) throw DataError("cannot evaluate an empty prediction set");
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if ((pred[i] != 0 && pred[i] != 1) || (gold[i] != 0 && gold[i] != 1)) {
      throw DataError("labels must be 0 or 1");
    }
    if (pred[i] == 1) {
      ++(gold[i] == 1 ? tp : fp);
    } else {
      ++(gold[i] == 1 ? fn : tn);
    }
  }
  return report_from_counts(tp, fp, fn, tn);
}

std::string format_report_text(const EvalReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "confusion (ironic = positive): tp=%zu fp=%zu fn=%zu tn=%zu\n"
                "ironic      P=%.4f R=%.4f F1=%.4f\n"
                "not ironic  P=%.4f R=%.4f F1=%.4f\n"
                "macro-F1    %.4f\n",
                r.tp, r.fp, r.fn, r.tn, r.ironic.precision, r.ironic.recall, r.ironic.f1, r.not_ironic.precision,
                r.not_ironic.recall, r.not_ironic.f1, r.macro_f1);
  return buf;
}

std::string format_report_tsv(const EvalReport& r) {
  std::string out = "metric\tvalue\n";
  auto row = [&](const char* name, const std::string& v) {
    out += name;
    out += '\t';
    out += v;
    out += '\n';
  };
  row("tp", std::to_string(r.tp));
  row("fp", std::to_string(r.fp));
  row("fn", std::to_string(r.fn));
  row("tn", std::to_string(r.tn));
  row("precision_ironic", format_double(r.ironic.precision));
  row("recall_ironic", format_double(r.ironic.recall));
  row("f1_ironic", format_double(r.ironic.f1));
  row("precision_not", format_double(r.not_ironic.precision));
  row("recall_not", format_double(r.not_ironic.recall));
  row("f1_not", format_double(r.not_ironic.f1));
  row("macro_f1", format_double(r.macro_f1));
  return out;
}

}  // namespace udirony
