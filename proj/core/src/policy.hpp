#pragma once

#include <map>
#include <string>

#include "vmfs/selectors.hpp"

namespace vmfs::detail {

/// Applies a threshold / top-k policy to per-feature scores. Ordered by
/// descending score, ties by key; an empty pick falls back to the best feature
/// and records the fallback in the log and notes.
FeatureSubset select_by_policy(SelectorKind kind, const std::map<std::string, double>& scores,
                               const SelectionPolicy& policy);

}  // namespace vmfs::detail
