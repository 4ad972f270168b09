#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "test_support.hpp"
#include "vmfs/error.hpp"
#include "vmfs/io.hpp"
#include "vmfs/pipeline.hpp"
#include "vmfs/synthgen.hpp"

using namespace vmfs;

namespace {

LabeledDataset small_synthetic() {
  auto cfg = default_composition();
  cfg.vm_counts = {{Workload::Cpu, 3}, {Workload::Mem, 3}, {Workload::Disk, 3}, {Workload::Net, 3}};
  cfg.samples_per_vm = 8;
  cfg.resources = {Resource::Cpu, Resource::Disk, Resource::Network};
  return generate(cfg);
}

std::vector<SelectorKind> names_sorted(std::vector<SelectorKind> v) {
  std::sort(v.begin(), v.end(), [](auto a, auto b) { return to_string(a) < to_string(b); });
  return v;
}

}  // namespace

TEST_SUITE("rank_selectors") {
  TEST_CASE("dominating selector wins; inverted rule flips") {
    const std::vector<SelectorScore> s{{SelectorKind::Cfs, 0.2, 5.0}, {SelectorKind::Relief, 1.0, 0.5}};
    CHECK(rank_selectors(s, RankingRule::Standard).winner == SelectorKind::Cfs);
    CHECK(rank_selectors(s, RankingRule::Inverted).winner == SelectorKind::Relief);
    const auto r = rank_selectors(s, RankingRule::Standard);
    CHECK(r.by_db == std::vector<SelectorKind>{SelectorKind::Cfs, SelectorKind::Relief});
    CHECK(r.by_dunn == std::vector<SelectorKind>{SelectorKind::Cfs, SelectorKind::Relief});
  }

  TEST_CASE("reference table: RELIEF under standard, CHI2 under the inverted rule") {
    CHECK(rank_selectors(reference_scores(), RankingRule::Standard).winner == SelectorKind::Relief);
    CHECK(rank_selectors(reference_scores(), RankingRule::Inverted).winner == SelectorKind::Chi2);
    const auto errata = ranking_errata();
    CHECK(errata.size() == 3);
    CHECK(errata[1].find("CFS") != std::string::npos);
  }

  TEST_CASE("ties by name; non-finite entries dropped and noted") {
    const std::vector<SelectorScore> tie{{SelectorKind::Wrapper, 1.0, 2.0}, {SelectorKind::Chi2, 1.0, 2.0}};
    CHECK(rank_selectors(tie, RankingRule::Standard).winner == SelectorKind::Chi2);
    CHECK(rank_selectors(tie, RankingRule::Inverted).winner == SelectorKind::Chi2);
    const std::vector<SelectorScore> bad{{SelectorKind::Cfs, NAN, 1.0}, {SelectorKind::Usqr, 3.0, 1.0}};
    const auto r = rank_selectors(bad, RankingRule::Standard);
    CHECK(r.winner == SelectorKind::Usqr);
    CHECK(r.by_db == std::vector<SelectorKind>{SelectorKind::Usqr});
    CHECK_FALSE(r.notes.empty());
    CHECK_THROWS_AS(rank_selectors({{SelectorKind::Cfs, INFINITY, 1.0}}, RankingRule::Standard), PipelineError);
    CHECK_THROWS_AS(rank_selectors({}, RankingRule::Standard), PipelineError);
  }

  TEST_CASE("invariant under increasing transforms of either index") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.01, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<SelectorScore> s;
      for (auto k : kAllSelectors) s.push_back({k, u(rng), u(rng)});
      if (trial % 3 == 0) s[1].db = s[0].db;
      auto t = s;
      for (auto& x : t) x.db = std::exp(x.db) + 4.0, x.dunn = std::pow(x.dunn, 3.0) * 2.0;
      for (auto rule : {RankingRule::Standard, RankingRule::Inverted}) {
        const auto a = rank_selectors(s, rule), b = rank_selectors(t, rule);
        CHECK(a.winner == b.winner);
        CHECK(a.by_db == b.by_db);
        CHECK(a.by_dunn == b.by_dunn);
        CHECK(names_sorted(a.by_db) == names_sorted({std::begin(kAllSelectors), std::end(kAllSelectors)}));
      }
    }
  }
}

TEST_SUITE("run_comparison") {
  TEST_CASE("all selectors on a small synthetic set") {
    const auto ds = small_synthetic();
    RunConfig cfg;
    const auto report = run_comparison(ds, cfg);
    REQUIRE(report.results.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
      const auto& r = report.results[i];
      CHECK(r.selector == kAllSelectors[i]);
      CHECK_FALSE(r.error.has_value());
      CHECK_FALSE(r.features.empty());
      REQUIRE(r.db.has_value());
      REQUIRE(r.dunn.has_value());
      CHECK(std::isfinite(*r.db));
      CHECK(std::isfinite(*r.dunn));
      CHECK(r.ms == 0.0);
    }
    CHECK(names_sorted(report.rank_db) == names_sorted(cfg.selectors));
    CHECK(names_sorted(report.rank_dunn) == names_sorted(cfg.selectors));
    CHECK(report.rank_db.front() == report.winner);
    CHECK(report.dataset == fingerprint(ds));
    CHECK(report.config == cfg);
    CHECK(report.errata.size() >= 3);

    CHECK(run_comparison(ds, cfg, Execution{false}) == report);
    CHECK(render_report(report, ReportFormat::Json) == render_report(run_comparison(ds, cfg), ReportFormat::Json));
  }

  TEST_CASE("single selector; ranking rule echoed") {
    const auto ds = small_synthetic();
    RunConfig cfg;
    cfg.selectors = {SelectorKind::Cfs};
    cfg.ranking = RankingRule::Inverted;
    const auto report = run_comparison(ds, cfg);
    CHECK(report.results.size() == 1);
    CHECK(report.winner == SelectorKind::Cfs);
    CHECK(render_report(report, ReportFormat::Json).find("\"ranking\": \"paper\"") != std::string::npos);
  }

  TEST_CASE("label-free data: supervised selectors fail per entry, USQR still ranks") {
    auto ds = small_synthetic();
    ds.labels.reset();
    RunConfig cfg;
    const auto report = run_comparison(ds, cfg);
    REQUIRE(report.results.size() == 5);
    for (const auto& r : report.results) {
      if (r.selector == SelectorKind::Usqr) {
        CHECK_FALSE(r.error.has_value());
      } else {
        CHECK(r.error.has_value());
        CHECK_FALSE(r.db.has_value());
      }
    }
    CHECK(report.winner == SelectorKind::Usqr);
    cfg.selectors = {SelectorKind::Cfs, SelectorKind::Chi2};
    CHECK_THROWS_AS(run_comparison(ds, cfg), PipelineError);
  }

  TEST_CASE("config validation") {
    RunConfig cfg;
    cfg.k = 1;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = RunConfig{};
    cfg.selectors.clear();
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.selectors = {SelectorKind::Cfs, SelectorKind::Cfs};
    CHECK_THROWS_AS(cfg.validate(), Error);
  }

  TEST_CASE("per-resource mode unions per-group picks") {
    const auto ds = small_synthetic();
    RunConfig cfg;
    cfg.per_resource = true;
    const auto s = run_selector(ds, SelectorKind::Chi2, cfg);
    std::set<Resource> groups;
    for (const auto& f : s.features) groups.insert(ds.columns[ds.find(f)].resource);
    CHECK(groups.size() == 3);
    cfg.resources = {Resource::Disk};
    for (const auto& f : run_selector(ds, SelectorKind::Chi2, cfg).features) CHECK(f.rfind("DISK:", 0) == 0);
  }

  TEST_CASE("vm feature matrix is z-scored per-VM means") {
    const auto ds = small_synthetic();
    const auto x = vm_feature_matrix(ds, {"CPU:%USED", "DISK:CMDS/s"});
    CHECK(x.rows() == 12);
    CHECK(x.cols() == 2);
    for (std::size_t c = 0; c < 2; ++c) {
      double m = 0;
      for (std::size_t r = 0; r < x.rows(); ++r) m += x(r, c);
      CHECK(std::abs(m) < 1e-9);
    }
    CHECK_THROWS_AS(vm_feature_matrix(ds, {}), EmptyDatasetError);
    CHECK_THROWS_AS(vm_feature_matrix(ds, {"CPU:nope"}), AttributeError);
  }
}

TEST_SUITE("render_report") {
  TEST_CASE("json round trip and markdown shape") {
    const auto ds = small_synthetic();
    RunConfig cfg;
    cfg.selectors = {SelectorKind::Chi2, SelectorKind::Usqr};
    cfg.record_timing = true;
    const auto report = run_comparison(ds, cfg);
    CHECK(io::report_from_json(render_report(report, ReportFormat::Json)) == report);

    const auto md = render_report(report, ReportFormat::Markdown);
    CHECK(md == render_report(report, ReportFormat::Markdown));
    std::size_t rows = 0, header = md.find("| Selector | Davies-Bouldin | Dunn | Features |");
    REQUIRE(header != std::string::npos);
    const auto table = md.substr(header, md.find("\n\n", header) - header);
    for (std::size_t p = 0; (p = table.find("\n| ", p)) != std::string::npos; ++p) ++rows;
    CHECK(rows == 2);
    CHECK(md.find("Errata") != std::string::npos);
  }

  TEST_CASE("fingerprint tracks content") {
    auto ds = small_synthetic();
    const auto a = fingerprint(ds);
    CHECK(a.rows == ds.row_count());
    CHECK(a.cols == ds.col_count());
    CHECK(a.hash.size() == 16);
    ds.columns[0].values[0] += 1.0;
    CHECK(fingerprint(ds).hash != a.hash);
  }
}
