#include <set>

#include "policy.hpp"
#include "vmfs/error.hpp"
#include "vmfs/selectors.hpp"

namespace vmfs {

double chi_square_stat(const Contingency& t) {
  if (t.a < 0 || t.b < 0 || t.c < 0 || t.d < 0)
    throw DomainError("chi_square_stat: negative count");
  const double a = static_cast<double>(t.a), b = static_cast<double>(t.b);
  const double c = static_cast<double>(t.c), d = static_cast<double>(t.d);
  const double n = a + b + c + d;
  if (n < 1.0) throw DomainError("chi_square_stat: empty table");
  const double denom = (a + b) * (c + d) * (a + c) * (b + d);
  if (denom == 0.0) return 0.0;
  const double det = a * d - b * c;
  return n * (det * det) / denom;
}

std::map<std::string, double> chi_square_scores(const LabeledDataset& ds) {
  ds.validate();
  const auto classes = class_codes(ds);
  std::set<int> distinct(classes.begin(), classes.end());
  std::map<std::string, double> out;
  for (const auto& col : ds.columns) {
    const auto present = median_binarize(col.values);
    double best = 0.0;
    for (int cls : distinct) {
      Contingency t;
      for (std::size_t r = 0; r < present.size(); ++r) {
        const bool in = classes[r] == cls;
        if (present[r]) (in ? t.a : t.b)++;
        else (in ? t.c : t.d)++;
      }
      best = std::max(best, chi_square_stat(t));
    }
    out[col.key()] = best;
  }
  return out;
}

FeatureSubset chi_select(const std::map<std::string, double>& scores, const SelectionPolicy& policy) {
  return detail::select_by_policy(SelectorKind::Chi2, scores, policy);
}

FeatureSubset chi_select(const LabeledDataset& ds, const SelectionPolicy& policy) {
  return chi_select(chi_square_scores(ds), policy);
}

}  // namespace vmfs
