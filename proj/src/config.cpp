#include "relspec/config.hpp"

#include <fstream>
#include <set>

#include "relspec/error.hpp"

namespace relspec {

using nlohmann::json;

const char* to_string(Dependence d) { return d == Dependence::kIid ? "iid" : "fma1"; }

const char* to_string(BreakKind b) {
  switch (b) {
    case BreakKind::kNone: return "none";
    case BreakKind::kEigenvalueShift: return "eigenvalue_shift";
    case BreakKind::kRotation: return "rotation";
  }
  return "none";
}

const char* to_string(TestMode m) {
  return m == TestMode::kRelevant ? "relevant" : "equivalence";
}

json to_json(const ExperimentConfig& c) {
  return json{{"name", c.name},
              {"order", c.order},
              {"theta0", c.theta0},
              {"dependence", to_string(c.dependence)},
              {"break", to_string(c.break_kind)},
              {"test", to_string(c.kind)},
              {"j", c.j},
              {"delta", c.delta},
              {"mode", to_string(c.mode)},
              {"alpha", c.alpha},
              {"epsilon", c.epsilon},
              {"nu_k", c.nu_k},
              {"center", c.center},
              {"magnitudes", c.magnitudes},
              {"sample_sizes", c.sample_sizes},
              {"replicates", c.replicates},
              {"seed", c.seed}};
}

namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& msg) {
  throw Error(ErrorCode::kConfig, "field '" + field + "': " + msg);
}

template <typename T>
T read_field(const json& doc, const std::string& key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(key, e.what());
  }
}

template <typename Enum>
Enum read_enum(const json& doc, const std::string& key, Enum fallback,
               std::initializer_list<std::pair<const char*, Enum>> choices) {
  if (!doc.contains(key)) return fallback;
  const auto value = read_field<std::string>(doc, key, "");
  std::string valid;
  for (const auto& [name, e] : choices) {
    if (value == name) return e;
    valid += valid.empty() ? name : std::string(", ") + name;
  }
  config_error(key, "unknown value '" + value + "' (valid: " + valid + ")");
}

void reject_unknown_keys(const json& doc, const std::set<std::string>& known) {
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) config_error(key, "unknown key");
  }
}

}  // namespace

ExperimentConfig experiment_from_json(const json& doc) {
  if (!doc.is_object()) config_error("<root>", "experiment must be an object");
  reject_unknown_keys(doc, {"name", "order", "theta0", "dependence", "break", "test", "j",
                            "delta", "mode", "alpha", "epsilon", "nu_k", "center",
                            "magnitudes", "sample_sizes", "replicates", "seed"});
  ExperimentConfig c;
  c.name = read_field<std::string>(doc, "name", c.name);
  c.order = read_field<int>(doc, "order", c.order);
  c.theta0 = read_field<double>(doc, "theta0", c.theta0);
  c.dependence = read_enum(doc, "dependence", c.dependence,
                           {{"iid", Dependence::kIid}, {"fma1", Dependence::kFma1}});
  c.kind = read_enum(doc, "test", c.kind,
                     {{"eigenvalue", PathKind::kEigenvalue},
                      {"eigenfunction", PathKind::kEigenfunction}});
  c.break_kind = c.kind == PathKind::kEigenvalue ? BreakKind::kEigenvalueShift
                                                 : BreakKind::kRotation;
  c.break_kind = read_enum(doc, "break", c.break_kind,
                           {{"none", BreakKind::kNone},
                            {"eigenvalue_shift", BreakKind::kEigenvalueShift},
                            {"rotation", BreakKind::kRotation}});
  c.j = read_field<int>(doc, "j", c.j);
  c.delta = read_field<double>(doc, "delta", c.delta);
  c.mode = read_enum(doc, "mode", c.mode,
                     {{"relevant", TestMode::kRelevant},
                      {"equivalence", TestMode::kEquivalence}});
  c.alpha = read_field<double>(doc, "alpha", c.alpha);
  c.epsilon = read_field<double>(doc, "epsilon", c.epsilon);
  c.nu_k = read_field<int>(doc, "nu_k", c.nu_k);
  c.center = read_field<bool>(doc, "center", c.center);
  c.sample_sizes = read_field<std::vector<int>>(doc, "sample_sizes", c.sample_sizes);
  c.replicates = read_field<int>(doc, "replicates", c.replicates);
  c.seed = read_field<std::uint64_t>(doc, "seed", c.seed);
  if (doc.contains("magnitudes")) {
    c.magnitudes = read_field<std::vector<double>>(doc, "magnitudes", {});
  } else if (c.break_kind != BreakKind::kNone) {
    try {
      c.magnitudes = default_magnitudes(c.break_kind, c.j, c.delta);
    } catch (const Error& e) {
      config_error("magnitudes", e.what());
    }
  } else {
    c.magnitudes = {0.0};
  }
  try {
    c.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
  return c;
}

SimulationJob simulation_job_from_json(const json& doc) {
  if (!doc.is_object()) config_error("<root>", "job must be an object");
  reject_unknown_keys(doc, {"experiment", "epsilons", "histogram_bins", "pivot_replicates",
                            "pivot_seed"});
  if (!doc.contains("experiment")) config_error("experiment", "missing");
  SimulationJob job;
  job.experiment = experiment_from_json(doc.at("experiment"));
  job.epsilons = read_field<std::vector<double>>(doc, "epsilons", {});
  job.histogram_bins = read_field<int>(doc, "histogram_bins", job.histogram_bins);
  job.pivot_replicates = read_field<std::int64_t>(doc, "pivot_replicates", job.pivot_replicates);
  job.pivot_seed = read_field<std::uint64_t>(doc, "pivot_seed", job.pivot_seed);
  for (double e : job.epsilons) {
    if (!(e >= 0.0 && e < 0.5)) config_error("epsilons", "each epsilon must lie in [0, 0.5)");
  }
  if (job.histogram_bins < 1) config_error("histogram_bins", "must be >= 1");
  if (job.pivot_replicates < 1) config_error("pivot_replicates", "must be >= 1");
  return job;
}

SimulationJob load_simulation_job(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  return simulation_job_from_json(doc);
}

}  // namespace relspec
