// vmfs: batch front end for the feature-selection toolkit.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "vmfs/clustering.hpp"
#include "vmfs/error.hpp"
#include "vmfs/io.hpp"
#include "vmfs/pipeline.hpp"
#include "vmfs/selectors.hpp"
#include "vmfs/synthgen.hpp"
#include "vmfs/telemetry.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kData = 2;

/// Thrown for bad option values that CLI11 cannot check on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::set<vmfs::Resource> parse_resources(const std::string& list) {
  std::set<vmfs::Resource> out;
  for (const auto& item : split_list(list)) {
    if (item == "all") {
      out.insert(std::begin(vmfs::kAllResources), std::end(vmfs::kAllResources));
      continue;
    }
    auto r = vmfs::parse_resource(item);
    if (!r) throw UsageError("unknown resource '" + item + "'");
    out.insert(*r);
  }
  return out;
}

std::vector<vmfs::SelectorKind> parse_methods(const std::string& list) {
  std::vector<vmfs::SelectorKind> out;
  for (const auto& item : split_list(list)) {
    if (item == "all") {
      for (auto k : vmfs::kAllSelectors)
        if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
      continue;
    }
    auto k = vmfs::parse_selector(item);
    if (!k) throw UsageError("unknown method '" + item + "'");
    if (std::find(out.begin(), out.end(), *k) == out.end()) out.push_back(*k);
  }
  if (out.empty()) throw UsageError("no methods given");
  return out;
}

/// Accepts the JSON written by `synth`/`ingest`, or a raw esxtop CSV.
vmfs::LabeledDataset load_dataset(const std::string& path, const std::string& labels_path) {
  const auto text = vmfs::io::read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n\xEF\xBB\xBF");
  vmfs::LabeledDataset ds;
  if (first != std::string::npos && text[first] == '{') {
    ds = vmfs::io::dataset_from_json(text);
  } else {
    auto parsed = vmfs::parse_esxtop_csv(text);
    ds = std::move(parsed.dataset);
  }
  if (!labels_path.empty())
    ds = vmfs::attach_labels(std::move(ds), vmfs::io::labels_from_json(vmfs::io::read_file(labels_path)));
  return ds;
}

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-")
    std::cout << content;
  else
    vmfs::io::write_file(out, content);
}

vmfs::SynthConfig synth_config(const std::string& composition, std::optional<int> vms, double separation,
                               int samples, std::uint64_t seed, const std::string& resources) {
  vmfs::SynthConfig cfg = vmfs::default_composition();
  cfg.separation = separation;
  cfg.samples_per_vm = samples;
  cfg.seed = seed;
  if (!composition.empty()) {
    cfg.vm_counts.clear();
    for (const auto& item : split_list(composition)) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw UsageError("composition entry '" + item + "' is not name=count");
      auto w = vmfs::parse_workload(item.substr(0, eq));
      if (!w) throw UsageError("unknown workload '" + item.substr(0, eq) + "'");
      int n = 0;
      try {
        std::size_t used = 0;
        n = std::stoi(item.substr(eq + 1), &used);
        if (used != item.size() - eq - 1) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw UsageError("bad count in composition entry '" + item + "'");
      }
      cfg.vm_counts[*w] = n;
    }
  }
  if (!resources.empty()) cfg.resources = parse_resources(resources);
  if (vms && *vms != cfg.total_vms())
    throw UsageError("--vms " + std::to_string(*vms) + " does not match the composition total " +
                     std::to_string(cfg.total_vms()));
  try {
    cfg.validate();
  } catch (const vmfs::DomainError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feature-subset selection and clustering for hypervisor telemetry"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "vmfs 0.1.0");

  // ingest
  std::string in_path, labels_path, out_path;
  auto* ingest = app.add_subcommand("ingest", "Convert an esxtop batch CSV into dataset JSON");
  ingest->add_option("--input", in_path, "esxtop batch-mode CSV")->required();
  ingest->add_option("--labels", labels_path, "JSON object mapping VM name to cpu|mem|disk|net");
  ingest->add_option("--out", out_path, "Output dataset JSON (default stdout)");

  // synth
  std::optional<int> synth_vms;
  std::string composition = "cpu=7,mem=7,disk=7,net=5";
  double separation = 6.0;
  int samples = 60;
  std::uint64_t synth_seed = vmfs::kDefaultSynthSeed;
  std::string synth_format = "json", synth_labels_out, synth_resources;
  auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic dataset");
  synth->add_option("--vms", synth_vms, "Total VM count; must equal the composition total");
  synth->add_option("--composition", composition, "Per-archetype VM counts")->capture_default_str();
  synth->add_option("--separation", separation, "Hot-resource mean in noise units")->capture_default_str();
  synth->add_option("--samples", samples, "Samples per VM")->capture_default_str();
  synth->add_option("--seed", synth_seed, "Generator seed")->capture_default_str();
  synth->add_option("--resources", synth_resources, "Resource groups to emit (default all)");
  synth->add_option("--format", synth_format, "json or csv (esxtop dialect)")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  synth->add_option("--labels-out", synth_labels_out, "Write the VM label sidecar here");
  synth->add_option("--out", out_path, "Output file")->required();

  // select
  std::string method, dataset_path, resources_list, cfs_denominator = "standard", wrapper_mode = "greedy";
  std::optional<std::size_t> top_k;
  std::uint64_t select_seed = 0;
  std::optional<std::size_t> relief_samples;
  bool per_resource = false;
  auto* select = app.add_subcommand("select", "Run one feature selector");
  select->add_option("--method", method, "cfs, relief, chi2, wrapper or usqr")->required();
  select->add_option("--dataset", dataset_path, "Dataset JSON or esxtop CSV")->required();
  select->add_option("--labels", labels_path, "Label sidecar for CSV input");
  select->add_option("--resources", resources_list, "Comma-separated resource groups");
  select->add_flag("--per-resource", per_resource, "Select within each resource group and union");
  select->add_option("--cfs-denominator", cfs_denominator, "standard or paper")
      ->check(CLI::IsMember({"standard", "paper"}));
  select->add_option("--wrapper-mode", wrapper_mode, "greedy or exhaustive")
      ->check(CLI::IsMember({"greedy", "exhaustive"}));
  select->add_option("--top-k", top_k, "Keep the k best features (relief, chi2)");
  select->add_option("--relief-samples", relief_samples, "Sample this many instances instead of a full pass");
  select->add_option("--seed", select_seed, "Seed for sampled Relief");
  select->add_option("--out", out_path, "Output subset JSON (default stdout)");

  // cluster
  std::string features_list;
  int k = 4;
  std::uint64_t seed = 1;
  int restarts = 10;
  auto* cluster = app.add_subcommand("cluster", "K-means over per-VM means of chosen features");
  cluster->add_option("--dataset", dataset_path, "Dataset JSON or esxtop CSV")->required();
  cluster->add_option("--labels", labels_path, "Label sidecar for CSV input");
  cluster->add_option("--features", features_list, "Comma-separated feature keys, or 'all'")->required();
  cluster->add_option("--k", k, "Cluster count")->capture_default_str();
  cluster->add_option("--seed", seed, "K-means seed")->capture_default_str();
  cluster->add_option("--restarts", restarts, "K-means restarts")->capture_default_str();
  cluster->add_option("--out", out_path, "Output assignment JSON (default stdout)");

  // compare
  std::string methods = "all", ranking = "standard", format = "json";
  bool timing = false, sequential = false;
  auto* compare = app.add_subcommand("compare", "Compare selectors by cluster validity");
  compare->add_option("--dataset", dataset_path, "Dataset JSON or esxtop CSV")->required();
  compare->add_option("--labels", labels_path, "Label sidecar for CSV input");
  compare->add_option("--methods", methods, "'all' or a comma-separated list")->capture_default_str();
  compare->add_option("--ranking", ranking, "standard or paper")
      ->check(CLI::IsMember({"standard", "paper"}))
      ->capture_default_str();
  compare->add_option("--k", k, "Cluster count")->capture_default_str();
  compare->add_option("--seed", seed, "K-means seed")->capture_default_str();
  compare->add_option("--resources", resources_list, "Comma-separated resource groups");
  compare->add_flag("--per-resource", per_resource, "Select within each resource group and union");
  compare->add_option("--cfs-denominator", cfs_denominator, "standard or paper")
      ->check(CLI::IsMember({"standard", "paper"}));
  compare->add_option("--wrapper-mode", wrapper_mode, "greedy or exhaustive")
      ->check(CLI::IsMember({"greedy", "exhaustive"}));
  compare->add_flag("--timing", timing, "Record per-selector wall time");
  compare->add_flag("--sequential", sequential, "Run selectors one after another");
  compare->add_option("--format", format, "json or markdown")
      ->check(CLI::IsMember({"json", "markdown"}))
      ->capture_default_str();
  compare->add_option("--out", out_path, "Report file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*ingest) {
      auto parsed = vmfs::parse_esxtop_csv(vmfs::io::read_file(in_path));
      for (const auto& cell : parsed.diagnostics.skipped) std::cerr << "skipped counter: " << cell << "\n";
      auto ds = std::move(parsed.dataset);
      if (!labels_path.empty())
        ds = vmfs::attach_labels(std::move(ds), vmfs::io::labels_from_json(vmfs::io::read_file(labels_path)));
      emit(out_path, vmfs::io::dataset_to_json(ds));
      std::cerr << ds.row_count() << " rows, " << ds.col_count() << " columns\n";
    } else if (*synth) {
      const auto cfg = synth_config(composition, synth_vms, separation, samples, synth_seed, synth_resources);
      const auto ds = vmfs::generate(cfg);
      emit(out_path, synth_format == "csv" ? vmfs::write_esxtop_csv(ds) : vmfs::io::dataset_to_json(ds));
      if (!synth_labels_out.empty())
        vmfs::io::write_file(synth_labels_out, vmfs::io::labels_to_json(vmfs::label_map(ds)));
    } else if (*select) {
      vmfs::RunConfig cfg;
      auto kind = vmfs::parse_selector(method);
      if (!kind) throw UsageError("unknown method '" + method + "'");
      if (!resources_list.empty()) cfg.resources = parse_resources(resources_list);
      cfg.per_resource = per_resource;
      cfg.cfs.denominator =
          cfs_denominator == "paper" ? vmfs::CfsDenominator::KPlusOne : vmfs::CfsDenominator::Standard;
      cfg.wrapper = wrapper_mode == "exhaustive" ? vmfs::WrapperMode::Exhaustive : vmfs::WrapperMode::Greedy;
      cfg.relief.seed = select_seed;
      cfg.relief.samples = relief_samples;
      if (top_k) {
        if (*top_k == 0) throw UsageError("--top-k must be positive");
        cfg.relief.policy = vmfs::TopK{*top_k};
        cfg.chi = vmfs::TopK{*top_k};
      }
      const auto ds = load_dataset(dataset_path, labels_path);
      emit(out_path, vmfs::io::subset_to_json(vmfs::run_selector(ds, *kind, cfg)));
    } else if (*cluster) {
      if (k < 1) throw UsageError("--k must be positive");
      const auto ds = load_dataset(dataset_path, labels_path);
      auto features = split_list(features_list);
      if (features.size() == 1 && features[0] == "all") features = ds.keys();
      if (features.empty()) throw UsageError("--features is empty");
      const auto x = vmfs::vm_feature_matrix(ds, features);
      const auto a = vmfs::kmeans(x, k, seed, vmfs::KMeansOptions{300, 1e-6, restarts});
      emit(out_path, vmfs::io::assignment_to_json(a));
      try {
        const auto v = vmfs::validity(x, a.labels);
        std::fprintf(stderr, "davies-bouldin %.6g  dunn %.6g\n", v.davies_bouldin, v.dunn);
      } catch (const vmfs::DegenerateClusteringError& e) {
        std::cerr << "validity indices undefined: " << e.what() << "\n";
      }
    } else if (*compare) {
      vmfs::RunConfig cfg;
      cfg.selectors = parse_methods(methods);
      cfg.k = k;
      cfg.seed = seed;
      cfg.ranking = *vmfs::parse_ranking(ranking);
      if (!resources_list.empty()) cfg.resources = parse_resources(resources_list);
      cfg.per_resource = per_resource;
      cfg.cfs.denominator =
          cfs_denominator == "paper" ? vmfs::CfsDenominator::KPlusOne : vmfs::CfsDenominator::Standard;
      cfg.wrapper = wrapper_mode == "exhaustive" ? vmfs::WrapperMode::Exhaustive : vmfs::WrapperMode::Greedy;
      cfg.record_timing = timing;
      try {
        cfg.validate();
      } catch (const vmfs::Error& e) {
        throw UsageError(e.what());
      }
      const auto ds = load_dataset(dataset_path, labels_path);
      const auto report = vmfs::run_comparison(ds, cfg, vmfs::Execution{!sequential});
      emit(out_path, vmfs::render_report(report, format == "markdown" ? vmfs::ReportFormat::Markdown
                                                                       : vmfs::ReportFormat::Json));
      for (const auto& r : report.results)
        if (r.error) std::cerr << vmfs::to_string(r.selector) << " failed: " << *r.error << "\n";
      std::cerr << "winner: " << vmfs::to_string(report.winner) << "\n";
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const vmfs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
  return 0;
}
