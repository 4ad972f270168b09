#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "vmfs/telemetry.hpp"

namespace vmfs {

/// Seed used by default_composition(); any fixed value would do.
inline constexpr std::uint64_t kDefaultSynthSeed = 51;

struct FeatureProfile {
  std::string name;
  Resource resource = Resource::Cpu;
  double mean = 0.0;
  double stddev = 1.0;
  bool hot = false;
};

/// Per-feature sampling parameters for one workload archetype. The archetype's
/// own resource group runs hot (mean = separation), everything else cold.
struct ArchetypeProfile {
  Workload workload = Workload::Cpu;
  std::vector<FeatureProfile> features;
};

struct SynthConfig {
  std::map<Workload, int> vm_counts;
  int samples_per_vm = 60;
  std::uint64_t seed = kDefaultSynthSeed;
  double separation = 6.0;
  std::set<Resource> resources;

  int total_vms() const;
  /// Throws DomainError when the invariants do not hold.
  void validate() const;
};

/// 26 VMs split cpu:7 mem:7 disk:7 net:5, 60 samples each, separation 6,
/// every resource group.
SynthConfig default_composition();

Resource hot_resource(Workload w);
ArchetypeProfile archetype_profile(Workload w, const SynthConfig& cfg);

/// Draws a labeled dataset. Rows are timestamp-major over VMs named vm01,
/// vm02, ... (cpu VMs first, then mem, disk, net). Each value is an
/// independent Normal(mean, stddev) draw truncated below at zero by rejection.
/// Output is a pure function of cfg.
LabeledDataset generate(const SynthConfig& cfg);

/// vm -> workload for every VM of a labeled dataset.
std::map<std::string, Workload> label_map(const LabeledDataset& ds);

}  // namespace vmfs
