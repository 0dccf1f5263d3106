#include "qsdp/io.hpp"

#include "qsdp/error.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace qsdp::io {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::InvalidInput, "field '" + field + "': " + what);
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

const json& member(const json& doc, const std::string& key, const std::string& prefix = "") {
  const std::string field = prefix.empty() ? key : prefix + "." + key;
  if (!doc.is_object()) fail(prefix.empty() ? "<root>" : prefix, "expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) fail(field, "missing");
  return *it;
}

double as_number(const json& j, const std::string& field, bool allow_null = false) {
  if (allow_null && j.is_null()) return std::numeric_limits<double>::infinity();
  if (!j.is_number()) fail(field, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(field, "not finite");
  return x;
}

std::int64_t as_count(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<std::int64_t>();
}

bool as_bool(const json& j, const std::string& field) {
  if (!j.is_boolean()) fail(field, "expected true or false");
  return j.get<bool>();
}

Vector as_vector(const json& j, const std::string& field, std::optional<Eigen::Index> len = std::nullopt) {
  if (!j.is_array()) fail(field, "expected an array");
  if (len && static_cast<Eigen::Index>(j.size()) != *len) {
    fail(field, "expected " + std::to_string(*len) + " entries, found " + std::to_string(j.size()));
  }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = as_number(j[i], field + "[" + std::to_string(i) + "]");
  return v;
}

Matrix as_matrix(const json& j, const std::string& field, std::optional<Eigen::Index> rows = std::nullopt,
                 std::optional<Eigen::Index> cols = std::nullopt) {
  if (!j.is_array()) fail(field, "expected an array of rows");
  if (rows && static_cast<Eigen::Index>(j.size()) != *rows) {
    fail(field, "expected " + std::to_string(*rows) + " rows, found " + std::to_string(j.size()));
  }
  const Eigen::Index r = static_cast<Eigen::Index>(j.size());
  Eigen::Index c = cols.value_or(r == 0 ? 0 : static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0));
  Matrix out(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const std::string row_field = field + "[" + std::to_string(i) + "]";
    out.row(i) = as_vector(j[static_cast<std::size_t>(i)], row_field, c).transpose();
  }
  return out;
}

ConditionCheck check_from_json(const json& j, const std::string& field) {
  ConditionCheck c;
  c.measured = as_number(member(j, "measured", field), field + ".measured", true);
  c.bound = as_number(member(j, "bound", field), field + ".bound");
  c.pass = as_bool(member(j, "pass", field), field + ".pass");
  return c;
}

json check_to_json(const ConditionCheck& c) {
  return {{"measured", number(c.measured)}, {"bound", number(c.bound)}, {"pass", c.pass}};
}

void reject_unknown(const json& doc, const std::set<std::string>& known, const std::string& prefix) {
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!known.count(it.key())) fail(prefix.empty() ? it.key() : prefix + "." + it.key(), "unknown key");
  }
}

}  // namespace

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v[i]));
  return out;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_to_json(m.row(i).transpose()));
  return out;
}

// Instances ------------------------------------------------------------------

json instance_to_json(const SdpInstance& inst, const std::optional<Vector>& y0) {
  json a = json::array();
  for (const Matrix& ai : inst.constraints()) a.push_back(matrix_to_json(ai));
  json doc = {{"n", inst.n()}, {"m", inst.m()}, {"b", vector_to_json(inst.b())},
              {"C", matrix_to_json(inst.c())}, {"A", std::move(a)}};
  if (y0) doc["y0"] = vector_to_json(*y0);
  return doc;
}

InstanceFile instance_from_json(const json& doc) {
  if (!doc.is_object()) fail("<root>", "expected an object");
  reject_unknown(doc, {"n", "m", "b", "C", "A", "y0"}, "");
  const std::int64_t n = as_count(member(doc, "n"), "n");
  const std::int64_t m = as_count(member(doc, "m"), "m");
  if (n < 1) fail("n", "must be >= 1");
  if (m < 1) fail("m", "must be >= 1");
  Vector b = as_vector(member(doc, "b"), "b", m);
  Matrix c = as_matrix(member(doc, "C"), "C", n, n);
  const json& a_doc = member(doc, "A");
  if (!a_doc.is_array() || static_cast<std::int64_t>(a_doc.size()) != m) {
    fail("A", "expected an array of " + std::to_string(m) + " matrices");
  }
  std::vector<Matrix> a;
  for (std::size_t i = 0; i < a_doc.size(); ++i) {
    a.push_back(as_matrix(a_doc[i], "A[" + std::to_string(i) + "]", n, n));
  }
  // Field-specific symmetry messages before the constructor's generic check.
  auto symmetric = [](const Matrix& x) { return (x - x.transpose()).norm() <= 1e-10 * std::max(x.norm(), 1e-300); };
  if (!symmetric(c)) fail("C", "matrix is not symmetric");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!symmetric(a[i])) fail("A[" + std::to_string(i) + "]", "matrix is not symmetric");
  }
  std::optional<Vector> y0;
  if (doc.contains("y0")) y0 = as_vector(doc["y0"], "y0", m);
  return {SdpInstance(std::move(a), std::move(b), std::move(c)), std::move(y0)};
}

// Configuration ------------------------------------------------------------------

json noise_to_json(const NoiseModel& noise) {
  return {{"eps_S", noise.eps_S},
          {"eps_g", noise.eps_g},
          {"eps_g_norm", noise.eps_g_norm},
          {"eps_delta", noise.eps_delta},
          {"eps_n", noise.eps_n},
          {"eps_delta_norm", noise.eps_delta_norm},
          {"scale_by_kappa", noise.scale_by_kappa},
          {"c0", noise.c0},
          {"seed", noise.seed},
          {"eps_H", noise.eps_H},
          {"propagate_slack_error", noise.propagate_slack_error}};
}

NoiseModel noise_from_json(const json& doc) {
  if (!doc.is_object()) fail("noise", "expected an object");
  reject_unknown(doc,
                 {"eps_S", "eps_g", "eps_g_norm", "eps_delta", "eps_n", "eps_delta_norm", "scale_by_kappa", "c0",
                  "seed", "eps_H", "propagate_slack_error"},
                 "noise");
  NoiseModel noise;
  auto level = [&](const char* key, double& target) {
    if (doc.contains(key)) target = as_number(doc[key], std::string("noise.") + key);
  };
  level("eps_S", noise.eps_S);
  level("eps_g", noise.eps_g);
  level("eps_g_norm", noise.eps_g_norm);
  level("eps_delta", noise.eps_delta);
  level("eps_n", noise.eps_n);
  level("eps_delta_norm", noise.eps_delta_norm);
  level("eps_H", noise.eps_H);
  level("c0", noise.c0);
  if (doc.contains("scale_by_kappa")) noise.scale_by_kappa = as_bool(doc["scale_by_kappa"], "noise.scale_by_kappa");
  if (doc.contains("propagate_slack_error")) {
    noise.propagate_slack_error = as_bool(doc["propagate_slack_error"], "noise.propagate_slack_error");
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) fail("noise.seed", "expected a nonnegative integer");
    noise.seed = doc["seed"].get<std::uint64_t>();
  }
  try {
    noise.validate();
  } catch (const Error& e) {
    fail("noise", e.what());
  }
  return noise;
}

json config_to_json(const RunConfig& config) {
  json doc = {{"eps", config.params.eps},
              {"eps_N", config.params.eps_newton},
              {"verify_every", config.params.verify_every},
              {"early_exit", config.params.early_exit},
              {"noise", noise_to_json(config.noise)}};
  doc["max_iters"] = config.params.max_iters ? json(*config.params.max_iters) : json(nullptr);
  return doc;
}

RunConfig config_from_json(const json& doc) {
  if (!doc.is_object()) fail("<root>", "expected an object");
  reject_unknown(doc, {"eps", "eps_N", "max_iters", "verify_every", "early_exit", "noise"}, "");
  RunConfig config;
  if (doc.contains("eps")) config.params.eps = as_number(doc["eps"], "eps");
  if (doc.contains("eps_N")) config.params.eps_newton = as_number(doc["eps_N"], "eps_N");
  if (doc.contains("max_iters") && !doc["max_iters"].is_null()) {
    config.params.max_iters = as_count(doc["max_iters"], "max_iters");
  }
  if (doc.contains("verify_every")) config.params.verify_every = as_count(doc["verify_every"], "verify_every");
  if (doc.contains("early_exit")) config.params.early_exit = as_bool(doc["early_exit"], "early_exit");
  if (doc.contains("noise")) config.noise = noise_from_json(doc["noise"]);
  config.params.c0 = config.noise.c0;
  try {
    config.params.validate();
  } catch (const Error& e) {
    fail("<root>", e.what());
  }
  return config;
}

// Records and results ----------------------------------------------------------------

json record_to_json(const IterationRecord& rec) {
  return {
      {"index", rec.index},
      {"eta", rec.eta},
      {"eta_new", rec.eta_new},
      {"y", vector_to_json(rec.y)},
      {"slack_inv_tilde", matrix_to_json(rec.slack_inv_tilde)},
      {"hessian_tilde", matrix_to_json(rec.hessian_tilde)},
      {"g_tilde", vector_to_json(rec.g_tilde)},
      {"delta_tilde", vector_to_json(rec.delta_tilde)},
      {"audited", rec.audited},
      {"kappa_H", number(rec.kappa_hessian)},
      {"potential_before", number(rec.potential_before)},
      {"potential_after", check_to_json(rec.potential_after)},
      {"slack_invariant", check_to_json(rec.slack_step)},
      {"conditions",
       {{"slack", check_to_json(rec.conditions.slack)},
        {"hessian", check_to_json(rec.conditions.hessian)},
        {"gradient", check_to_json(rec.conditions.gradient)},
        {"delta", check_to_json(rec.conditions.delta)}}},
      {"objective", number(rec.objective)},
      {"levels",
       {{"slack", rec.levels.slack},
        {"gradient", rec.levels.gradient},
        {"delta", rec.levels.delta},
        {"hessian", rec.levels.hessian}}},
      {"injected",
       {{"slack_frobenius", number(rec.injected.slack_frobenius)},
        {"slack_spectral", number(rec.injected.slack_spectral)},
        {"hessian_spectral", number(rec.injected.hessian_spectral)},
        {"gradient", number(rec.injected.gradient)},
        {"delta", number(rec.injected.delta)}}},
  };
}

IterationRecord record_from_json(const json& doc) {
  IterationRecord rec;
  rec.index = as_count(member(doc, "index"), "index");
  const std::string p = "record[" + std::to_string(rec.index) + "]";
  rec.eta = as_number(member(doc, "eta", p), p + ".eta");
  rec.eta_new = as_number(member(doc, "eta_new", p), p + ".eta_new");
  rec.y = as_vector(member(doc, "y", p), p + ".y");
  const Eigen::Index m = rec.y.size();
  rec.slack_inv_tilde = as_matrix(member(doc, "slack_inv_tilde", p), p + ".slack_inv_tilde");
  rec.hessian_tilde = as_matrix(member(doc, "hessian_tilde", p), p + ".hessian_tilde", m, m);
  rec.g_tilde = as_vector(member(doc, "g_tilde", p), p + ".g_tilde", m);
  rec.delta_tilde = as_vector(member(doc, "delta_tilde", p), p + ".delta_tilde", m);
  rec.audited = as_bool(member(doc, "audited", p), p + ".audited");
  rec.kappa_hessian = as_number(member(doc, "kappa_H", p), p + ".kappa_H", true);
  rec.potential_before = as_number(member(doc, "potential_before", p), p + ".potential_before", true);
  rec.potential_after = check_from_json(member(doc, "potential_after", p), p + ".potential_after");
  rec.slack_step = check_from_json(member(doc, "slack_invariant", p), p + ".slack_invariant");
  const json& cond = member(doc, "conditions", p);
  rec.conditions.slack = check_from_json(member(cond, "slack", p + ".conditions"), p + ".conditions.slack");
  rec.conditions.hessian = check_from_json(member(cond, "hessian", p + ".conditions"), p + ".conditions.hessian");
  rec.conditions.gradient = check_from_json(member(cond, "gradient", p + ".conditions"), p + ".conditions.gradient");
  rec.conditions.delta = check_from_json(member(cond, "delta", p + ".conditions"), p + ".conditions.delta");
  rec.objective = as_number(member(doc, "objective", p), p + ".objective", true);
  if (doc.contains("levels")) {
    const json& lv = doc["levels"];
    rec.levels.slack = as_number(member(lv, "slack", p + ".levels"), p + ".levels.slack");
    rec.levels.gradient = as_number(member(lv, "gradient", p + ".levels"), p + ".levels.gradient");
    rec.levels.delta = as_number(member(lv, "delta", p + ".levels"), p + ".levels.delta");
    rec.levels.hessian = as_number(member(lv, "hessian", p + ".levels"), p + ".levels.hessian");
  }
  if (doc.contains("injected")) {
    const json& in = doc["injected"];
    const std::string q = p + ".injected";
    rec.injected.slack_frobenius = as_number(member(in, "slack_frobenius", q), q + ".slack_frobenius", true);
    rec.injected.slack_spectral = as_number(member(in, "slack_spectral", q), q + ".slack_spectral", true);
    rec.injected.hessian_spectral = as_number(member(in, "hessian_spectral", q), q + ".hessian_spectral", true);
    rec.injected.gradient = as_number(member(in, "gradient", q), q + ".gradient", true);
    rec.injected.delta = as_number(member(in, "delta", q), q + ".delta", true);
  }
  return rec;
}

json result_to_json(const SolveResult& result, std::string_view oracle) {
  return {{"status", std::string(to_string(result.status))},
          {"message", result.message},
          {"oracle", std::string(oracle)},
          {"iterations", result.iterations},
          {"planned_iterations", result.planned_iterations},
          {"y_final", vector_to_json(result.y_final)},
          {"eta_final", number(result.eta_final)},
          {"objective", number(result.objective)},
          {"gap_surrogate", number(result.gap_surrogate)},
          {"gap_bound", number(result.gap_bound)}};
}

json report_to_json(const ResourceReport& r, Eigen::Index n, Eigen::Index m) {
  return {{"units", "relative cost units (constants and polylog factors dropped)"},
          {"n", n},
          {"m", m},
          {"kappa_A", number(r.kappa_A)},
          {"kappa_S", number(r.kappa_S)},
          {"kappa_H", number(r.kappa_H)},
          {"mu_A", number(r.mu_A)},
          {"mu_S", number(r.mu_S)},
          {"mu_S_inv", number(r.mu_S_inv)},
          {"norm_H", number(r.norm_H)},
          {"eps_S", number(r.eps_S)},
          {"eps_g_norm", number(r.eps_g_norm)},
          {"t_slack", number(r.t_slack)},
          {"t_grad_state", number(r.t_grad_state)},
          {"t_grad_norm", number(r.t_grad_norm)},
          {"t_delta", number(r.t_delta)},
          {"t_delta_inv", number(r.t_delta_inv)},
          {"t_iter", number(r.t_iter)},
          {"t_total", number(r.t_total)},
          {"plugin_total", number(r.plugin_total)}};
}

DualPoint point_from_json(const json& doc) {
  if (!doc.is_object()) fail("<root>", "expected an object");
  DualPoint point;
  if (doc.contains("y")) {
    point.y = as_vector(doc["y"], "y");
    point.eta = as_number(member(doc, "eta"), "eta");
  } else {
    point.y = as_vector(member(doc, "y_final"), "y_final");
    point.eta = as_number(member(doc, "eta_final"), "eta_final");
  }
  if (!(point.eta > 0.0)) fail(doc.contains("eta") ? "eta" : "eta_final", "must be positive");
  return point;
}

// Files ------------------------------------------------------------------------

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorKind::InvalidInput, path.string() + ":" + std::to_string(line) + ":" + std::to_string(column) +
                                             ": malformed JSON");
  }
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

InstanceFile load_instance(const std::filesystem::path& path) {
  try {
    return instance_from_json(read_json(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void save_instance(const std::filesystem::path& path, const SdpInstance& inst, const std::optional<Vector>& y0) {
  write_json(path, instance_to_json(inst, y0));
}

RunConfig load_config(const std::filesystem::path& path) {
  try {
    return config_from_json(read_json(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::vector<IterationRecord> load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path.string());
  std::vector<IterationRecord> trace;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      trace.push_back(record_from_json(json::parse(line)));
    } catch (const json::parse_error&) {
      throw Error(ErrorKind::InvalidInput, path.string() + ":" + std::to_string(line_no) + ": malformed JSON");
    } catch (const Error& e) {
      throw Error(ErrorKind::InvalidInput, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return trace;
}

}  // namespace qsdp::io
