#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "vmfs/clustering.hpp"
#include "vmfs/pipeline.hpp"
#include "vmfs/selectors.hpp"
#include "vmfs/telemetry.hpp"

// JSON encodings of the library's artifacts. Parse failures throw vmfs::Error.
namespace vmfs::io {

/// { "rows": [{"vm", "t"}], "labels": [str] | null, "columns": [{"name", "resource", "values"}] }
std::string dataset_to_json(const LabeledDataset& ds);
LabeledDataset dataset_from_json(std::string_view text);

/// { vm_name: "cpu" | "mem" | "disk" | "net" }
std::string labels_to_json(const std::map<std::string, Workload>& labels);
std::map<std::string, Workload> labels_from_json(std::string_view text);

/// { "selector", "features", "scores", "log", "objective", "notes" }
std::string subset_to_json(const FeatureSubset& subset);
FeatureSubset subset_from_json(std::string_view text);

/// { "k", "labels", "centroids", "inertia", "iterations" }
std::string assignment_to_json(const ClusterAssignment& a);

std::string report_to_json(const ComparisonReport& report);
ComparisonReport report_from_json(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace vmfs::io
