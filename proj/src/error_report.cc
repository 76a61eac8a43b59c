#include "udirony/error_report.h"

#include <algorithm>
#include <cstdio>
#include <map>

#include "udirony/error.h"
#include "udirony/vectorizer.h"

namespace udirony {
namespace {

struct Tally {
  std::map<std::string, std::size_t> all, mis;
};

std::vector<CategoryDelta> finish(const Tally& t, std::size_t tokens_all, std::size_t tokens_mis) {
  std::vector<CategoryDelta> out;
  for (const auto& [cat, n] : t.all) {
    CategoryDelta d;
    d.category = cat;
    d.count_all = n;
    auto it = t.mis.find(cat);
    d.count_misclassified = it == t.mis.end() ? 0 : it->second;
    d.freq_all = static_cast<double>(n) / static_cast<double>(tokens_all);
    if (tokens_mis > 0) {
      d.freq_misclassified = static_cast<double>(d.count_misclassified) / static_cast<double>(tokens_mis);
      d.delta_pct = (d.freq_misclassified - d.freq_all) / d.freq_all * 100.0;
    }
    d.watchlisted = is_watchlisted(cat);
    out.push_back(std::move(d));
  }
  std::stable_sort(out.begin(), out.end(), [](const CategoryDelta& a, const CategoryDelta& b) {
    const double da = a.delta_pct.value_or(0.0);
    const double db = b.delta_pct.value_or(0.0);
    if (da != db) return da > db;
    return a.category < b.category;
  });
  return out;
}

std::string delta_text(const CategoryDelta& d) {
  if (!d.delta_pct) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%+.1f%%", *d.delta_pct);
  return buf;
}

}  // namespace

bool is_watchlisted(const std::string& category) {
  return category == "SYM" || category == "X" || category == "parataxis" || category == "flat" ||
         category == "expl";
}

ErrorReport error_distribution_report(const std::vector<const LabeledItem*>& test, const std::vector<int>& pred) {
  if (test.size() != pred.size()) {
    throw DataError("predictions (" + std::to_string(pred.size()) + ") do not align with the test set (" +
                    std::to_string(test.size()) + ")");
  }
  ErrorReport r;
  r.tweets = test.size();
  Tally upos, deprel;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const bool wrong = pred[i] != test[i]->label;
    if (wrong) ++r.misclassified;
    for (const Token& t : test[i]->sentence.tokens) {
      ++r.tokens_all;
      ++upos.all[t.upos];
      ++deprel.all[t.deprel];
      if (wrong) {
        ++r.tokens_misclassified;
        ++upos.mis[t.upos];
        ++deprel.mis[t.deprel];
      }
    }
  }
  if (r.tokens_all == 0) return r;
  r.upos = finish(upos, r.tokens_all, r.tokens_misclassified);
  r.deprel = finish(deprel, r.tokens_all, r.tokens_misclassified);
  return r;
}

std::string format_error_report_tsv(const ErrorReport& report, const std::vector<std::string>& header) {
  std::string out;
  for (const auto& line : header) out += "# " + line + "\n";
  out += "# tweets=" + std::to_string(report.tweets) + " misclassified=" + std::to_string(report.misclassified) +
         " tokens=" + std::to_string(report.tokens_all) +
         " tokens_misclassified=" + std::to_string(report.tokens_misclassified) + "\n";
  out += "kind\tcategory\tcount_all\tcount_misclassified\tfreq_all\tfreq_misclassified\tdelta_pct\twatchlist\n";
  auto rows = [&](const char* kind, const std::vector<CategoryDelta>& v) {
    for (const auto& d : v) {
      out += std::string(kind) + '\t' + d.category + '\t' + std::to_string(d.count_all) + '\t' +
             std::to_string(d.count_misclassified) + '\t' + format_double(d.freq_all) + '\t' +
             (d.delta_pct ? format_double(d.freq_misclassified) : std::string("n/a")) + '\t' +
             (d.delta_pct ? format_double(*d.delta_pct) : std::string("n/a")) + '\t' +
             (d.watchlisted ? "yes" : "no") + '\n';
    }
  };
  rows("upos", report.upos);
  rows("deprel", report.deprel);
  return out;
}

std::string format_error_report_text(const ErrorReport& report) {
  std::string out = std::to_string(report.misclassified) + " of " + std::to_string(report.tweets) +
                    " tweets misclassified (" + std::to_string(report.tokens_misclassified) + " of " +
                    std::to_string(report.tokens_all) + " tokens)\n";
  auto section = [&](const char* title, const std::vector<CategoryDelta>& v) {
    out += title;
    out += '\n';
    for (const auto& d : v) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "  %-12s all=%.4f mis=%.4f delta=%s%s\n", d.category.c_str(), d.freq_all,
                    d.freq_misclassified, delta_text(d).c_str(), d.watchlisted ? "  [watch]" : "");
      out += buf;
    }
  };
  section("UPOS", report.upos);
  section("deprel", report.deprel);
  return out;
}

}  // namespace udirony
