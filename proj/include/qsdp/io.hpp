#pragma once

// JSON encodings of instances, solver configuration, iteration records,
// results and resource reports. Floats are written in shortest round-trip
// form, so load(save(x)) reproduces x bit for bit.

#include "qsdp/estimator.hpp"
#include "qsdp/instance.hpp"
#include "qsdp/ipm.hpp"
#include "qsdp/oracle.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qsdp::io {

using nlohmann::json;

/// Instance document: {"n", "m", "b", "C", "A"} plus an optional "y0"
/// starting point.
struct InstanceFile {
  SdpInstance instance;
  std::optional<Vector> y0;
};

json instance_to_json(const SdpInstance& inst, const std::optional<Vector>& y0 = std::nullopt);
InstanceFile instance_from_json(const json& doc);

/// Solver configuration document:
///   {"eps", "eps_N", "max_iters", "verify_every", "noise": {...}}
/// every key optional. Unknown keys are rejected.
struct RunConfig {
  SolverParams params;
  NoiseModel noise;
};

json noise_to_json(const NoiseModel& noise);
NoiseModel noise_from_json(const json& doc);
json config_to_json(const RunConfig& config);
RunConfig config_from_json(const json& doc);

json record_to_json(const IterationRecord& rec);
IterationRecord record_from_json(const json& doc);

json result_to_json(const SolveResult& result, std::string_view oracle);
json report_to_json(const ResourceReport& report, Eigen::Index n, Eigen::Index m);

/// {"y": [...], "eta": x}; "y_final"/"eta_final" (a solve result) are
/// accepted as well.
struct DualPoint {
  Vector y;
  double eta = 0.0;
};
DualPoint point_from_json(const json& doc);

/// Reads and parses a JSON file. Syntax errors are reported with line and
/// column; all failures raise InvalidInput.
json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& doc);

InstanceFile load_instance(const std::filesystem::path& path);
void save_instance(const std::filesystem::path& path, const SdpInstance& inst,
                   const std::optional<Vector>& y0 = std::nullopt);
RunConfig load_config(const std::filesystem::path& path);

/// One record per line.
std::vector<IterationRecord> load_trace(const std::filesystem::path& path);

json vector_to_json(const Vector& v);
json matrix_to_json(const Matrix& m);

}  // namespace qsdp::io
