#include "vmfs/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <future>

#include "vmfs/error.hpp"
#include "vmfs/io.hpp"

namespace vmfs {

std::string_view to_string(RankingRule r) {
  return r == RankingRule::Standard ? "standard" : "paper";
}

std::optional<RankingRule> parse_ranking(std::string_view s) {
  if (s == "standard") return RankingRule::Standard;
  if (s == "paper") return RankingRule::Inverted;
  return std::nullopt;
}

void RunConfig::validate() const {
  if (k < 2) throw DomainError("k must be at least 2");
  if (selectors.empty()) throw DomainError("no selectors requested");
  auto sorted = selectors;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw DomainError("selector listed twice");
}

namespace {

class Fnv1a {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= b[i];
      h_ *= 0x100000001b3ull;
    }
  }
  void str(std::string_view s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
  void u64(std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(b, 8);
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
    return buf;
  }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ull;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4e", v);
  return buf;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool name_less(SelectorKind a, SelectorKind b) { return to_string(a) < to_string(b); }

LabeledDataset restrict(const LabeledDataset& ds, const RunConfig& cfg) {
  return cfg.resources.empty() ? ds : filter_by_resource(ds, cfg.resources);
}

FeatureSubset run_once(const LabeledDataset& ds, SelectorKind kind, const RunConfig& cfg) {
  switch (kind) {
    case SelectorKind::Cfs: return cfs_select(ds, cfg.cfs);
    case SelectorKind::Relief: return relief_select(ds, cfg.relief);
    case SelectorKind::Chi2: return chi_select(ds, cfg.chi);
    case SelectorKind::Wrapper: return wrapper_select(ds, cfg.wrapper);
    case SelectorKind::Usqr: return usqr_select(ds, cfg.usqr);
  }
  throw DomainError("unknown selector");
}

SelectorResult evaluate(const LabeledDataset& ds, SelectorKind kind, const RunConfig& cfg) {
  SelectorResult r;
  r.selector = kind;
  const auto start = std::chrono::steady_clock::now();
  try {
    r.features = run_selector(ds, kind, cfg).features;
    const auto x = vm_feature_matrix(ds, r.features);
    const auto a = kmeans(x, cfg.k, cfg.seed, cfg.kmeans);
    const auto v = validity(x, a.labels);
    r.db = v.davies_bouldin;
    r.dunn = v.dunn;
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  if (cfg.record_timing)
    r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

DatasetFingerprint fingerprint(const LabeledDataset& ds) {
  Fnv1a h;
  h.u64(ds.rows.size());
  for (const auto& r : ds.rows) {
    h.str(r.vm);
    h.u64(static_cast<std::uint64_t>(r.t));
  }
  h.u64(ds.labels ? ds.labels->size() + 1 : 0);
  if (ds.labels)
    for (auto w : *ds.labels) h.u64(static_cast<std::uint64_t>(w));
  h.u64(ds.columns.size());
  for (const auto& c : ds.columns) {
    h.str(c.key());
    for (double v : c.values) h.f64(v);
  }
  return DatasetFingerprint{ds.row_count(), ds.col_count(), h.hex()};
}

Ranking rank_selectors(const std::vector<SelectorScore>& scores, RankingRule rule) {
  Ranking out;
  std::vector<SelectorScore> ok;
  for (const auto& s : scores) {
    if (std::isfinite(s.db) && std::isfinite(s.dunn)) ok.push_back(s);
    else out.notes.push_back(std::string(to_string(s.selector)) + " excluded: non-finite score");
  }
  if (ok.empty()) throw PipelineError("no selector has finite validity scores");

  auto db_asc = ok;
  std::sort(db_asc.begin(), db_asc.end(), [](const auto& a, const auto& b) {
    if (a.db != b.db) return a.db < b.db;
    return name_less(a.selector, b.selector);
  });
  auto dunn_desc = ok;
  std::sort(dunn_desc.begin(), dunn_desc.end(), [](const auto& a, const auto& b) {
    if (a.dunn != b.dunn) return a.dunn > b.dunn;
    return name_less(a.selector, b.selector);
  });
  for (const auto& s : db_asc) out.by_db.push_back(s.selector);
  for (const auto& s : dunn_desc) out.by_dunn.push_back(s.selector);

  const bool standard = rule == RankingRule::Standard;
  auto best = std::min_element(ok.begin(), ok.end(), [&](const auto& a, const auto& b) {
    if (a.db != b.db) return standard ? a.db < b.db : a.db > b.db;
    if (a.dunn != b.dunn) return standard ? a.dunn > b.dunn : a.dunn < b.dunn;
    return name_less(a.selector, b.selector);
  });
  out.winner = best->selector;
  return out;
}

std::vector<SelectorScore> reference_scores() {
  return {
      {SelectorKind::Cfs, 9.9122e+004, 1.4196e-006},
      {SelectorKind::Relief, 2.2679e+00, 1.0874e-009},
      {SelectorKind::Chi2, 2.9018e+007, 2.442e-009},
      {SelectorKind::Wrapper, 2.1199e+007, 1.0862e-009},
      {SelectorKind::Usqr, 3.9079e+005, 4.9040e-006},
  };
}

std::vector<std::string> ranking_errata() {
  const auto ref = reference_scores();
  const auto standard = rank_selectors(ref, RankingRule::Standard).winner;
  const auto inverted = rank_selectors(ref, RankingRule::Inverted).winner;
  std::string table;
  for (const auto& s : ref) {
    if (!table.empty()) table += ", ";
    table += std::string(to_string(s.selector)) + " " + sci(s.db) + "/" + sci(s.dunn);
  }
  std::vector<std::string> out;
  out.push_back(
      "ranking rule 'paper' prefers the highest Davies-Bouldin and lowest Dunn values, the "
      "opposite of what both indices reward (low Davies-Bouldin and high Dunn mark compact, "
      "well-separated clusters)");
  std::string note = "reference DB/Dunn values (" + table + ") rank " +
                     std::string(to_string(standard)) + " first under rule 'standard' and " +
                     std::string(to_string(inverted)) + " first under rule 'paper'";
  if (standard != SelectorKind::Cfs && inverted != SelectorKind::Cfs)
    note += "; the winner reported alongside them, CFS, follows from neither rule";
  out.push_back(note);
  out.push_back("reference value RELIEF DB 2.2679e+00 is quoted as printed; it sits seven orders "
                "of magnitude below its peers and may be truncated");
  return out;
}

Matrix vm_feature_matrix(const LabeledDataset& ds, const std::vector<std::string>& features) {
  if (features.empty()) throw EmptyDatasetError("no features to cluster on");
  std::vector<std::size_t> cols;
  for (const auto& f : features) cols.push_back(ds.find(f));
  const auto vm = per_vm_means(ds, cols);
  Matrix x(vm.rows.size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    std::vector<double> column(vm.rows.size());
    for (std::size_t r = 0; r < vm.rows.size(); ++r) column[r] = vm.rows[r][c];
    const auto z = zscore(column);
    for (std::size_t r = 0; r < vm.rows.size(); ++r) x(r, c) = z[r];
  }
  return x;
}

FeatureSubset run_selector(const LabeledDataset& ds, SelectorKind kind, const RunConfig& cfg) {
  const auto working = restrict(ds, cfg);
  if (!cfg.per_resource) return run_once(working, kind, cfg);

  FeatureSubset out;
  out.selector = kind;
  for (Resource r : kAllResources) {
    const bool present = std::any_of(working.columns.begin(), working.columns.end(),
                                     [&](const FeatureColumn& c) { return c.resource == r; });
    if (!present) continue;
    auto part = run_once(filter_by_resource(working, {r}), kind, cfg);
    out.features.insert(out.features.end(), part.features.begin(), part.features.end());
    out.scores.insert(part.scores.begin(), part.scores.end());
    out.search_log.insert(out.search_log.end(), part.search_log.begin(), part.search_log.end());
    for (auto& n : part.notes) out.notes.push_back(std::string(to_string(r)) + ": " + n);
  }
  return out;
}

ComparisonReport run_comparison(const LabeledDataset& ds, const RunConfig& cfg, const Execution& exec) {
  cfg.validate();
  ds.validate();
  const auto working = restrict(ds, cfg);

  ComparisonReport report;
  report.config = cfg;
  report.dataset = fingerprint(ds);

  if (exec.parallel && cfg.selectors.size() > 1) {
    std::vector<std::future<SelectorResult>> tasks;
    for (auto kind : cfg.selectors)
      tasks.push_back(std::async(std::launch::async, [&, kind] { return evaluate(working, kind, cfg); }));
    for (auto& t : tasks) report.results.push_back(t.get());
  } else {
    for (auto kind : cfg.selectors) report.results.push_back(evaluate(working, kind, cfg));
  }

  std::vector<SelectorScore> scores;
  for (const auto& r : report.results)
    if (r.db && r.dunn) scores.push_back(SelectorScore{r.selector, *r.db, *r.dunn});
  if (scores.empty()) {
    std::string why;
    for (const auto& r : report.results)
      why += "\n  " + std::string(to_string(r.selector)) + ": " + r.error.value_or("no scores");
    throw PipelineError("every selector failed:" + why);
  }
  auto ranking = rank_selectors(scores, cfg.ranking);
  report.rank_db = ranking.by_db;
  report.rank_dunn = ranking.by_dunn;
  report.winner = ranking.winner;
  report.errata = ranking_errata();
  report.errata.insert(report.errata.end(), ranking.notes.begin(), ranking.notes.end());
  return report;
}

std::string render_report(const ComparisonReport& report, ReportFormat format) {
  if (format == ReportFormat::Json) return io::report_to_json(report);

  std::string md = "# Feature selector comparison\n\n";
  md += "Dataset: " + std::to_string(report.dataset.rows) + " rows x " +
        std::to_string(report.dataset.cols) + " columns (hash " + report.dataset.hash + "); k = " +
        std::to_string(report.config.k) + "; ranking: " + std::string(to_string(report.config.ranking)) +
        "\n\n";
  md += "| Selector | Davies-Bouldin | Dunn | Features |\n";
  md += "|---|---|---|---|\n";
  for (const auto& r : report.results) {
    md += "| " + std::string(to_string(r.selector)) + " | " + (r.db ? fixed(*r.db) : "n/a") + " | " +
          (r.dunn ? fixed(*r.dunn) : "n/a") + " | " +
          (r.error ? "error: " + *r.error : std::to_string(r.features.size())) + " |\n";
  }
  md += "\nWinner: **" + std::string(to_string(report.winner)) + "**\n\n";
  auto join = [](const std::vector<SelectorKind>& v) {
    std::string s;
    for (auto k : v) s += (s.empty() ? "" : ", ") + std::string(to_string(k));
    return s;
  };
  md += "Rank by Davies-Bouldin (ascending): " + join(report.rank_db) + "\n\n";
  md += "Rank by Dunn (descending): " + join(report.rank_dunn) + "\n\n";

  md += "## Selected features by resource\n\n| Resource |";
  for (const auto& r : report.results) md += " " + std::string(to_string(r.selector)) + " |";
  md += "\n|---|";
  for (std::size_t i = 0; i < report.results.size(); ++i) md += "---|";
  md += "\n";
  for (Resource res : kAllResources) {
    const std::string prefix = std::string(to_string(res)) + ":";
    std::string row = "| " + std::string(to_string(res)) + " |";
    bool any = false;
    for (const auto& r : report.results) {
      std::string cell;
      for (const auto& f : r.features)
        if (f.rfind(prefix, 0) == 0) {
          cell += (cell.empty() ? "" : ", ") + f.substr(prefix.size());
          any = true;
        }
      row += " " + (cell.empty() ? std::string("-") : cell) + " |";
    }
    if (any) md += row + "\n";
  }
  if (!report.errata.empty()) {
    md += "\n## Errata\n\n";
    for (const auto& e : report.errata) md += "- " + e + "\n";
  }
  return md;
}

}  // namespace vmfs
