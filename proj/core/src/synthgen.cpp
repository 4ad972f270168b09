#include "vmfs/synthgen.hpp"

#include <cstdio>
#include <numeric>
#include <random>

#include "vmfs/error.hpp"

namespace vmfs {

int SynthConfig::total_vms() const {
  int total = 0;
  for (const auto& [w, n] : vm_counts) total += n;
  return total;
}

void SynthConfig::validate() const {
  int distinct = 0;
  for (const auto& [w, n] : vm_counts) {
    if (n < 0) throw DomainError("negative VM count for " + std::string(to_string(w)));
    distinct += n > 0;
  }
  if (distinct == 0) throw DomainError("no VMs configured");
  if (total_vms() < distinct) throw DomainError("fewer VMs than workloads");
  if (samples_per_vm < 1) throw DomainError("samples_per_vm must be >= 1");
  if (!(separation >= 0.0)) throw DomainError("separation must be >= 0");
  if (resources.empty()) throw DomainError("no resource groups selected");
}

SynthConfig default_composition() {
  SynthConfig cfg;
  // Which load ran on the five-VM group is ambiguous in the source experiment;
  // network gets it here.
  cfg.vm_counts = {{Workload::Cpu, 7}, {Workload::Mem, 7}, {Workload::Disk, 7}, {Workload::Net, 5}};
  cfg.samples_per_vm = 60;
  cfg.seed = kDefaultSynthSeed;
  cfg.separation = 6.0;
  cfg.resources = {std::begin(kAllResources), std::end(kAllResources)};
  return cfg;
}

Resource hot_resource(Workload w) {
  switch (w) {
    case Workload::Cpu: return Resource::Cpu;
    case Workload::Mem: return Resource::Memory;
    case Workload::Disk: return Resource::Disk;
    case Workload::Net: return Resource::Network;
  }
  return Resource::Cpu;
}

ArchetypeProfile archetype_profile(Workload w, const SynthConfig& cfg) {
  ArchetypeProfile p{w, {}};
  for (Resource r : kAllResources) {
    if (!cfg.resources.count(r)) continue;
    const bool hot = r == hot_resource(w);
    for (auto name : table_metrics(r))
      p.features.push_back(FeatureProfile{std::string(name), r, hot ? cfg.separation : 0.0, 1.0, hot});
  }
  return p;
}

LabeledDataset generate(const SynthConfig& cfg) {
  cfg.validate();

  std::vector<Workload> vm_workloads;
  for (Workload w : kAllWorkloads) {
    auto it = cfg.vm_counts.find(w);
    if (it != cfg.vm_counts.end()) vm_workloads.insert(vm_workloads.end(), it->second, w);
  }
  std::vector<std::string> vm_names;
  const int width = vm_workloads.size() >= 100 ? 3 : 2;
  for (std::size_t i = 0; i < vm_workloads.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "vm%0*zu", width, i + 1);
    vm_names.emplace_back(buf);
  }
  std::map<Workload, ArchetypeProfile> profiles;
  for (Workload w : kAllWorkloads) profiles.emplace(w, archetype_profile(w, cfg));

  LabeledDataset ds;
  const auto& layout = profiles.at(Workload::Cpu).features;
  for (const auto& f : layout) ds.columns.push_back(FeatureColumn{f.name, f.resource, {}});
  const std::size_t n_rows = vm_workloads.size() * static_cast<std::size_t>(cfg.samples_per_vm);
  for (auto& c : ds.columns) c.values.reserve(n_rows);
  ds.rows.reserve(n_rows);
  std::vector<Workload> labels;
  labels.reserve(n_rows);

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < cfg.samples_per_vm; ++t) {
    for (std::size_t v = 0; v < vm_workloads.size(); ++v) {
      ds.rows.push_back(RowId{vm_names[v], t});
      labels.push_back(vm_workloads[v]);
      const auto& feats = profiles.at(vm_workloads[v]).features;
      for (std::size_t c = 0; c < feats.size(); ++c) {
        double x;
        do {
          x = feats[c].mean + feats[c].stddev * unit(rng);
        } while (x < 0.0);
        ds.columns[c].values.push_back(x);
      }
    }
  }
  ds.labels = std::move(labels);
  return ds;
}

std::map<std::string, Workload> label_map(const LabeledDataset& ds) {
  if (!ds.labels) throw LabelsRequiredError("dataset has no labels");
  std::map<std::string, Workload> out;
  for (std::size_t r = 0; r < ds.rows.size(); ++r) {
    auto [it, fresh] = out.emplace(ds.rows[r].vm, (*ds.labels)[r]);
    if (!fresh && it->second != (*ds.labels)[r])
      throw Error("VM '" + ds.rows[r].vm + "' carries more than one label");
  }
  return out;
}

}  // namespace vmfs
