#include "qsdp/cli.hpp"

#include "qsdp/error.hpp"
#include "qsdp/estimator.hpp"
#include "qsdp/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

namespace qsdp::cli {

namespace {

struct Options {
  // generate
  std::string gen_case = "2";
  std::int64_t n = 3;
  std::int64_t m = 3;
  double kappa = 10.0;
  // shared
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string instance;
  std::string config;
  std::string out;
  std::string trace;
  std::string oracle = "exact";
  std::string at = "init";
  bool quiet = false;
};

void emit(const io::json& doc, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << doc.dump(2) << '\n';
  } else {
    io::write_json(path, doc);
  }
}

io::RunConfig config_for(const Options& opt) {
  io::RunConfig config = opt.config.empty() ? io::RunConfig{} : io::load_config(opt.config);
  if (opt.seed_given) config.noise.seed = opt.seed;
  return config;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
      return kMalformedInput;
    case ErrorKind::InitNotOnPath:
      return kInitNotOnPath;
    default:
      return kNumericalFailure;
  }
}

int exit_code(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
      return kOk;
    case SolveStatus::MaxIters:
      return kMaxIters;
    case SolveStatus::ConditionViolated:
      return kConditionViolated;
    case SolveStatus::NumericalFailure:
      return kNumericalFailure;
  }
  return kNumericalFailure;
}

int cmd_generate(const Options& opt, std::ostream& out) {
  SeededInstance seeded = [&] {
    if (opt.gen_case == "1") return seeded_case1(opt.m);
    if (opt.gen_case == "2") return seeded_case2();
    return gen_random_wellcond(opt.n, opt.m, opt.kappa, opt.seed);
  }();
  emit(io::instance_to_json(seeded.instance, seeded.y0), opt.out, out);
  return kOk;
}

int cmd_solve(const Options& opt, std::ostream& out, std::ostream& err) {
  const io::InstanceFile file = io::load_instance(opt.instance);
  const io::RunConfig config = config_for(opt);
  if (!file.y0) throw Error(ErrorKind::InitNotOnPath, opt.instance + ": no starting point (field 'y0')");

  std::unique_ptr<Oracle> oracle;
  if (opt.oracle == "noisy") {
    oracle = std::make_unique<NoisyOracle>(config.noise);
  } else {
    oracle = std::make_unique<ExactOracle>();
  }

  std::ofstream trace_out;
  if (!opt.trace.empty()) {
    trace_out.open(opt.trace);
    if (!trace_out) throw Error(ErrorKind::InvalidInput, "cannot write " + opt.trace);
  }
  SolveOptions options;
  options.keep_trace = false;
  options.on_record = [&](const IterationRecord& rec) {
    if (trace_out.is_open()) trace_out << io::record_to_json(rec).dump() << '\n';
    if (!opt.quiet && rec.index % 500 == 0) {
      err << "iter " << rec.index << "  eta " << rec.eta_new << "  b'y " << rec.objective << '\n';
    }
  };

  const SolveResult result = solve(file.instance, *file.y0, config.params, *oracle, options);
  emit(io::result_to_json(result, oracle->name()), opt.out, out);
  if (!opt.quiet) err << to_string(result.status) << " after " << result.iterations << " iterations\n";
  return exit_code(result.status);
}

int cmd_estimate(const Options& opt, std::ostream& out) {
  const io::InstanceFile file = io::load_instance(opt.instance);
  const io::RunConfig config = config_for(opt);
  io::DualPoint point;
  if (opt.at == "init") {
    if (!file.y0) throw Error(ErrorKind::InvalidInput, opt.instance + ": field 'y0': missing, required by --at init");
    point = {*file.y0, initial_eta(file.instance.n())};
  } else if (opt.at.rfind("file:", 0) == 0) {
    const std::string path = opt.at.substr(5);
    try {
      point = io::point_from_json(io::read_json(path));
    } catch (const Error& e) {
      throw Error(e.kind(), path + ": " + e.what());
    }
  } else {
    throw Error(ErrorKind::InvalidInput, "--at: expected 'init' or 'file:PATH'");
  }
  if (point.y.size() != file.instance.m()) {
    throw Error(ErrorKind::InvalidInput, "field 'y': expected " + std::to_string(file.instance.m()) + " entries");
  }
  const ResourceReport report = estimate(file.instance, point.y, point.eta, config.params.eps, config.noise);
  emit(io::report_to_json(report, file.instance.n(), file.instance.m()), opt.out, out);
  return kOk;
}

int cmd_verify(const Options& opt, std::ostream& out, std::ostream& err) {
  const io::InstanceFile file = io::load_instance(opt.instance);
  const io::RunConfig config = config_for(opt);
  const auto trace = io::load_trace(opt.trace);
  const TraceAudit audit = audit_trace(file.instance, trace, config.params);

  io::json failures = io::json::array();
  for (const TraceFailure& f : audit.failures) failures.push_back({{"index", f.index}, {"checks", f.checks}});
  const io::json summary = {{"records", audit.records},
                            {"passed", audit.passed()},
                            {"failed_records", audit.failures.size()},
                            {"failures", std::move(failures)}};
  emit(summary, opt.out, out);
  if (!opt.quiet) {
    if (audit.passed()) {
      err << "all " << audit.records << " records pass\n";
    } else {
      for (const TraceFailure& f : audit.failures) {
        err << "iteration " << f.index << " fails:";
        for (const auto& c : f.checks) err << ' ' << c;
        err << '\n';
      }
    }
  }
  return audit.passed() ? kOk : kConditionViolated;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust barrier-method SDP solver with simulated quantum oracles"};
  app.require_subcommand(1);
  Options opt;

  auto seed_flag = [&](CLI::App* sub) {
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& s) { opt.seed = s, opt.seed_given = true; }, "RNG seed");
  };

  CLI::App* gen = app.add_subcommand("generate", "Write a test instance with its starting point");
  gen->add_option("--case", opt.gen_case, "1, 2 or random")->check(CLI::IsMember({"1", "2", "random"}));
  gen->add_option("--n", opt.n, "Matrix size (random)")->check(CLI::PositiveNumber);
  gen->add_option("--m", opt.m, "Number of constraints")->check(CLI::PositiveNumber);
  gen->add_option("--kappa", opt.kappa, "Target κ(S) at the start (random)")->check(CLI::Range(1.0, 1e8));
  gen->add_option("--out", opt.out, "Output file (default stdout)");
  seed_flag(gen);

  CLI::App* solve_cmd = app.add_subcommand("solve", "Run the barrier method");
  solve_cmd->add_option("--instance", opt.instance)->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--config", opt.config)->check(CLI::ExistingFile);
  solve_cmd->add_option("--oracle", opt.oracle)->check(CLI::IsMember({"exact", "noisy"}));
  solve_cmd->add_option("--out", opt.out, "Result file (default stdout)");
  solve_cmd->add_option("--trace", opt.trace, "JSON Lines trace, one record per iteration");
  solve_cmd->add_flag("--quiet", opt.quiet);
  seed_flag(solve_cmd);

  CLI::App* est = app.add_subcommand("estimate", "Resource report at a dual point");
  est->add_option("--instance", opt.instance)->required()->check(CLI::ExistingFile);
  est->add_option("--at", opt.at, "init or file:STATE.json");
  est->add_option("--config", opt.config)->check(CLI::ExistingFile);
  est->add_option("--out", opt.out);
  seed_flag(est);

  CLI::App* ver = app.add_subcommand("verify", "Re-audit a trace offline");
  ver->add_option("--instance", opt.instance)->required()->check(CLI::ExistingFile);
  ver->add_option("--trace", opt.trace)->required()->check(CLI::ExistingFile);
  ver->add_option("--config", opt.config)->check(CLI::ExistingFile);
  ver->add_option("--out", opt.out);
  ver->add_flag("--quiet", opt.quiet);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kMalformedInput;
  }

  try {
    if (gen->parsed()) return cmd_generate(opt, out);
    if (solve_cmd->parsed()) return cmd_solve(opt, out, err);
    if (est->parsed()) return cmd_estimate(opt, out);
    return cmd_verify(opt, out, err);
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace qsdp::cli
