#include "policy.hpp"

#include <algorithm>

#include "vmfs/error.hpp"

namespace vmfs::detail {

FeatureSubset select_by_policy(SelectorKind kind, const std::map<std::string, double>& scores,
                               const SelectionPolicy& policy) {
  if (scores.empty()) throw EmptyDatasetError("no scores to select from");
  std::vector<std::pair<std::string, double>> ranked(scores.begin(), scores.end());
  // map iteration is key-ascending; stable sort keeps that for equal scores
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  FeatureSubset out;
  out.selector = kind;
  if (const auto* t = std::get_if<Threshold>(&policy)) {
    for (const auto& [name, s] : ranked)
      if (s > t->value) out.features.push_back(name);
  } else {
    const std::size_t k = std::get<TopK>(policy).k;
    for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i)
      out.features.push_back(ranked[i].first);
  }
  if (out.features.empty()) {
    out.features.push_back(ranked.front().first);
    out.notes.push_back("fallback: no feature passed the policy; kept best-scoring " +
                        ranked.front().first);
    out.search_log.push_back(SearchLogEntry{{"fallback:" + ranked.front().first}, ranked.front().second});
  }
  for (const auto& name : out.features) out.scores[name] = scores.at(name);
  return out;
}

}  // namespace vmfs::detail
