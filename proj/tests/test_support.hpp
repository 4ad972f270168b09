#pragma once

// Small builders shared by the unit and acceptance suites.

#include <random>
#include <string>
#include <vector>

#include "vmfs/roughset.hpp"
#include "vmfs/telemetry.hpp"

namespace vmfs::testing {

inline LabeledDataset make_dataset(const std::vector<std::pair<std::string, std::vector<double>>>& cols,
                                   const std::vector<int>& labels = {}) {
  LabeledDataset ds;
  const std::size_t n = cols.empty() ? labels.size() : cols.front().second.size();
  for (std::size_t r = 0; r < n; ++r) ds.rows.push_back(RowId{"vm" + std::to_string(r), 0});
  for (const auto& [name, values] : cols) ds.columns.push_back(FeatureColumn{name, Resource::Cpu, values});
  if (!labels.empty()) {
    std::vector<Workload> w;
    for (int l : labels) w.push_back(static_cast<Workload>(l));
    ds.labels = std::move(w);
  }
  return ds;
}

inline DiscreteDataset make_discrete(const std::vector<std::pair<std::string, std::vector<int>>>& cols) {
  DiscreteDataset d;
  for (const auto& [name, codes] : cols) {
    d.names.push_back(name);
    d.codes.push_back(codes);
    int max = 0;
    for (int c : codes) max = std::max(max, c);
    std::vector<double> edges;
    for (int b = 0; b < max; ++b) edges.push_back(b + 0.5);
    d.bin_edges.push_back(std::move(edges));
  }
  return d;
}

/// Labeled dataset with `informative` columns that shift with the class and
/// `noise` columns that do not. Feature names are f00, f01, ...
inline LabeledDataset random_labeled(std::mt19937_64& rng, std::size_t rows, std::size_t informative,
                                     std::size_t noise, int classes, double shift) {
  std::uniform_int_distribution<int> cls(0, classes - 1);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<int> labels(rows);
  for (auto& l : labels) l = cls(rng);
  // Make sure every class appears at least twice.
  for (std::size_t r = 0; r < rows && r < static_cast<std::size_t>(2 * classes); ++r)
    labels[r] = static_cast<int>(r % static_cast<std::size_t>(classes));
  std::vector<std::pair<std::string, std::vector<double>>> cols;
  for (std::size_t f = 0; f < informative + noise; ++f) {
    std::vector<double> v(rows);
    const int hot = static_cast<int>(f % static_cast<std::size_t>(classes));
    for (std::size_t r = 0; r < rows; ++r)
      v[r] = unit(rng) + (f < informative && labels[r] == hot ? shift : 0.0);
    char name[8];
    std::snprintf(name, sizeof name, "f%02zu", f);
    cols.emplace_back(name, std::move(v));
  }
  return make_dataset(cols, labels);
}

inline DiscreteDataset random_discrete(std::mt19937_64& rng, std::size_t rows, std::size_t attrs, int max_bins) {
  std::uniform_int_distribution<int> bins(2, max_bins);
  std::vector<std::pair<std::string, std::vector<int>>> cols;
  for (std::size_t a = 0; a < attrs; ++a) {
    std::uniform_int_distribution<int> code(0, bins(rng) - 1);
    std::vector<int> v(rows);
    for (auto& c : v) c = code(rng);
    cols.emplace_back(std::string(1, static_cast<char>('a' + a)), std::move(v));
  }
  return make_discrete(cols);
}

}  // namespace vmfs::testing
