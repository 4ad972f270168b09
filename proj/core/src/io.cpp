#include "vmfs/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "vmfs/error.hpp"

namespace vmfs::io {

using ojson = nlohmann::ordered_json;

namespace {

template <typename Fn>
auto guarded(std::string_view what, Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string(what) + ": " + e.what());
  }
}

Resource resource_from(const ojson& j) {
  auto r = parse_resource(j.get<std::string>());
  if (!r) throw Error("unknown resource '" + j.get<std::string>() + "'");
  return *r;
}

Workload workload_from(const ojson& j) {
  auto w = parse_workload(j.get<std::string>());
  if (!w) throw Error("unknown workload label '" + j.get<std::string>() + "'");
  return *w;
}

SelectorKind selector_from(const ojson& j) {
  auto s = parse_selector(j.get<std::string>());
  if (!s) throw Error("unknown selector '" + j.get<std::string>() + "'");
  return *s;
}

ojson policy_json(const SelectionPolicy& p) {
  if (const auto* t = std::get_if<Threshold>(&p)) return ojson{{"threshold", t->value}};
  return ojson{{"top_k", std::get<TopK>(p).k}};
}

SelectionPolicy policy_from(const ojson& j) {
  if (j.contains("top_k")) return TopK{j.at("top_k").get<std::size_t>()};
  return Threshold{j.at("threshold").get<double>()};
}

ojson optional_number(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

std::optional<double> optional_from(const ojson& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

ojson selectors_json(const std::vector<SelectorKind>& v) {
  ojson out = ojson::array();
  for (auto s : v) out.push_back(std::string(to_string(s)));
  return out;
}

std::vector<SelectorKind> selectors_from(const ojson& j) {
  std::vector<SelectorKind> out;
  for (const auto& s : j) out.push_back(selector_from(s));
  return out;
}

ojson config_json(const RunConfig& c) {
  ojson resources = ojson::array();
  for (auto r : c.resources) resources.push_back(std::string(to_string(r)));
  return ojson{
      {"selectors", selectors_json(c.selectors)},
      {"k", c.k},
      {"seed", c.seed},
      {"resources", resources},
      {"per_resource", c.per_resource},
      {"ranking", std::string(to_string(c.ranking))},
      {"cfs",
       {{"bins", c.cfs.bins},
        {"max_stale", c.cfs.max_stale},
        {"denominator", c.cfs.denominator == CfsDenominator::Standard ? "standard" : "paper"}}},
      {"relief",
       {{"samples", c.relief.samples ? ojson(*c.relief.samples) : ojson(nullptr)},
        {"seed", c.relief.seed},
        {"policy", policy_json(c.relief.policy)}}},
      {"chi2", {{"policy", policy_json(c.chi)}}},
      {"wrapper", {{"mode", c.wrapper == WrapperMode::Greedy ? "greedy" : "exhaustive"}}},
      {"usqr", {{"bins", c.usqr.bins}, {"stop_on_plateau", c.usqr.stop_on_plateau}}},
      {"kmeans",
       {{"max_iter", c.kmeans.max_iter}, {"tol", c.kmeans.tol}, {"restarts", c.kmeans.restarts}}},
      {"record_timing", c.record_timing},
  };
}

RunConfig config_from(const ojson& j) {
  RunConfig c;
  c.selectors = selectors_from(j.at("selectors"));
  c.k = j.at("k").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.resources.clear();
  for (const auto& r : j.at("resources")) c.resources.insert(resource_from(r));
  c.per_resource = j.at("per_resource").get<bool>();
  auto rule = parse_ranking(j.at("ranking").get<std::string>());
  if (!rule) throw Error("unknown ranking rule");
  c.ranking = *rule;
  const auto& cfs = j.at("cfs");
  c.cfs.bins = cfs.at("bins").get<int>();
  c.cfs.max_stale = cfs.at("max_stale").get<int>();
  c.cfs.denominator = cfs.at("denominator").get<std::string>() == "paper" ? CfsDenominator::KPlusOne
                                                                          : CfsDenominator::Standard;
  const auto& relief = j.at("relief");
  if (!relief.at("samples").is_null()) c.relief.samples = relief.at("samples").get<std::size_t>();
  c.relief.seed = relief.at("seed").get<std::uint64_t>();
  c.relief.policy = policy_from(relief.at("policy"));
  c.chi = policy_from(j.at("chi2").at("policy"));
  c.wrapper = j.at("wrapper").at("mode").get<std::string>() == "exhaustive" ? WrapperMode::Exhaustive
                                                                             : WrapperMode::Greedy;
  c.usqr.bins = j.at("usqr").at("bins").get<int>();
  c.usqr.stop_on_plateau = j.at("usqr").at("stop_on_plateau").get<bool>();
  const auto& km = j.at("kmeans");
  c.kmeans.max_iter = km.at("max_iter").get<int>();
  c.kmeans.tol = km.at("tol").get<double>();
  c.kmeans.restarts = km.at("restarts").get<int>();
  c.record_timing = j.at("record_timing").get<bool>();
  return c;
}

}  // namespace

std::string dataset_to_json(const LabeledDataset& ds) {
  ds.validate();
  ojson rows = ojson::array();
  for (const auto& r : ds.rows) rows.push_back({{"vm", r.vm}, {"t", r.t}});
  ojson labels = nullptr;
  if (ds.labels) {
    labels = ojson::array();
    for (auto w : *ds.labels) labels.push_back(std::string(to_string(w)));
  }
  ojson columns = ojson::array();
  for (const auto& c : ds.columns)
    columns.push_back({{"name", c.name}, {"resource", std::string(to_string(c.resource))}, {"values", c.values}});
  ojson j{{"rows", rows}, {"labels", labels}, {"columns", columns}};
  return j.dump() + "\n";
}

LabeledDataset dataset_from_json(std::string_view text) {
  return guarded("dataset JSON", [&] {
    const auto j = ojson::parse(text);
    LabeledDataset ds;
    for (const auto& r : j.at("rows"))
      ds.rows.push_back(RowId{r.at("vm").get<std::string>(), r.at("t").get<std::int64_t>()});
    if (j.contains("labels") && !j.at("labels").is_null()) {
      std::vector<Workload> labels;
      for (const auto& l : j.at("labels")) labels.push_back(workload_from(l));
      ds.labels = std::move(labels);
    }
    for (const auto& c : j.at("columns"))
      ds.columns.push_back(FeatureColumn{c.at("name").get<std::string>(), resource_from(c.at("resource")),
                                         c.at("values").get<std::vector<double>>()});
    ds.validate();
    if (ds.columns.empty()) throw EmptyDatasetError("dataset has no columns");
    return ds;
  });
}

std::string labels_to_json(const std::map<std::string, Workload>& labels) {
  ojson j = ojson::object();
  for (const auto& [vm, w] : labels) j[vm] = std::string(to_string(w));
  return j.dump(2) + "\n";
}

std::map<std::string, Workload> labels_from_json(std::string_view text) {
  return guarded("label sidecar", [&] {
    const auto j = ojson::parse(text);
    if (!j.is_object()) throw Error("label sidecar must be a JSON object");
    std::map<std::string, Workload> out;
    for (const auto& [vm, w] : j.items()) out[vm] = workload_from(w);
    return out;
  });
}

std::string subset_to_json(const FeatureSubset& s) {
  ojson scores = ojson::object();
  for (const auto& [k, v] : s.scores) scores[k] = v;
  ojson log = ojson::array();
  for (const auto& e : s.search_log) log.push_back({{"subset", e.subset}, {"score", e.score}});
  ojson j{{"selector", std::string(to_string(s.selector))},
          {"features", s.features},
          {"scores", scores},
          {"log", log},
          {"objective", optional_number(s.objective)},
          {"notes", s.notes}};
  return j.dump(2) + "\n";
}

FeatureSubset subset_from_json(std::string_view text) {
  return guarded("feature subset JSON", [&] {
    const auto j = ojson::parse(text);
    FeatureSubset s;
    s.selector = selector_from(j.at("selector"));
    s.features = j.at("features").get<std::vector<std::string>>();
    for (const auto& [k, v] : j.at("scores").items()) s.scores[k] = v.get<double>();
    for (const auto& e : j.at("log"))
      s.search_log.push_back(SearchLogEntry{e.at("subset").get<std::vector<std::string>>(), e.at("score").get<double>()});
    if (j.contains("objective")) s.objective = optional_from(j.at("objective"));
    if (j.contains("notes")) s.notes = j.at("notes").get<std::vector<std::string>>();
    return s;
  });
}

std::string assignment_to_json(const ClusterAssignment& a) {
  ojson j{{"k", a.k},
          {"labels", a.labels},
          {"centroids", a.centroids.to_rows()},
          {"inertia", a.inertia},
          {"iterations", a.iterations}};
  return j.dump(2) + "\n";
}

std::string report_to_json(const ComparisonReport& r) {
  ojson results = ojson::array();
  for (const auto& e : r.results) {
    ojson item{{"selector", std::string(to_string(e.selector))},
               {"features", e.features},
               {"db", optional_number(e.db)},
               {"dunn", optional_number(e.dunn)},
               {"ms", e.ms}};
    if (e.error) item["error"] = *e.error;
    results.push_back(std::move(item));
  }
  ojson j{{"config", config_json(r.config)},
          {"dataset", {{"rows", r.dataset.rows}, {"cols", r.dataset.cols}, {"hash", r.dataset.hash}}},
          {"results", results},
          {"rank_db", selectors_json(r.rank_db)},
          {"rank_dunn", selectors_json(r.rank_dunn)},
          {"winner", std::string(to_string(r.winner))},
          {"errata", r.errata}};
  return j.dump(2) + "\n";
}

ComparisonReport report_from_json(std::string_view text) {
  return guarded("report JSON", [&] {
    const auto j = ojson::parse(text);
    ComparisonReport r;
    r.config = config_from(j.at("config"));
    const auto& d = j.at("dataset");
    r.dataset = DatasetFingerprint{d.at("rows").get<std::size_t>(), d.at("cols").get<std::size_t>(),
                                   d.at("hash").get<std::string>()};
    for (const auto& e : j.at("results")) {
      SelectorResult s;
      s.selector = selector_from(e.at("selector"));
      s.features = e.at("features").get<std::vector<std::string>>();
      s.db = optional_from(e.at("db"));
      s.dunn = optional_from(e.at("dunn"));
      s.ms = e.at("ms").get<double>();
      if (e.contains("error")) s.error = e.at("error").get<std::string>();
      r.results.push_back(std::move(s));
    }
    r.rank_db = selectors_from(j.at("rank_db"));
    r.rank_dunn = selectors_from(j.at("rank_dunn"));
    r.winner = selector_from(j.at("winner"));
    r.errata = j.at("errata").get<std::vector<std::string>>();
    return r;
  });
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace vmfs::io
