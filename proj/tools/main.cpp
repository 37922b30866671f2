// horolab command-line runner.
//
// Exit codes: 0 all checks pass, 1 some check failed, 2 configuration or
// calibration failure, 3 numerical failure, 4 schema violation.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "horolab/error.hpp"
#include "horolab/suites.hpp"

namespace {

using namespace horolab;
namespace fs = std::filesystem;

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::NotRegular:
    case ErrorKind::CalibrationFailure:
      return 2;
    case ErrorKind::SchemaViolation:
      return 4;
    default:
      return 3;
  }
}

RunConfig config_from(const std::string& path) {
  RunConfig cfg = path.empty() ? RunConfig{} : load_config(path);
  apply_env_overrides(cfg);
  return cfg;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int emit(const SuiteReport& rep, const RunConfig& cfg, const std::string& stem) {
  const fs::path dir(cfg.out_dir);
  write_file_atomic((dir / (stem + ".csv")).string(), to_csv(rep));
  write_file_atomic((dir / (stem + ".json")).string(), to_json(rep));
  for (const CheckRecord& c : rep.checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << rep.suite << "." << c.check_id << " measured=" << format_double(c.measured)
              << " bound=" << format_double(c.bound) << "\n";
    if (!c.pass)
      std::cerr << "horolab: " << rep.suite << ": property '" << c.check_id << "' failed (measured "
                << format_double(c.measured) << ", bound " << format_double(c.bound) << ")\n";
  }
  std::cout << rep.suite << ": " << (rep.checks.size() - rep.failures()) << "/" << rep.checks.size() << " checks pass\n";
  return rep.all_pass() ? 0 : 1;
}

int cmd_verify(const std::string& suite, const std::string& config, bool calibrate) {
  RunConfig cfg = config_from(config);
  const std::string lock = cfg.lockfile.empty() ? (fs::path(cfg.out_dir) / "horolab.lock").string() : cfg.lockfile;
  if (calibrate) {
    const auto constants = calibrate_suite(suite, cfg);
    std::map<std::string, double> merged = fs::exists(lock) ? read_lockfile(lock, cfg) : std::map<std::string, double>{};
    for (const auto& [k, v] : constants) merged[k] = v;
    write_lockfile(lock, cfg, merged);
    for (const auto& [k, v] : constants) std::cout << "calibrated " << k << " = " << format_double(v) << "\n";
    std::cout << "lockfile " << lock << "\n";
  }
  if (fs::exists(lock)) cfg.calibration.apply(read_lockfile(lock, cfg));
  return emit(run_suite(suite, cfg), cfg, suite);
}

int cmd_fill(const std::string& input, const std::string& output, const std::string& config) {
  const RunConfig cfg = config_from(config);
  const SphereFile sphere = parse_sphere(read_text(input));
  if (sphere.n != cfg.n && !config.empty())
    std::cerr << "horolab: note: sphere n = " << sphere.n << " overrides config n = " << cfg.n << "\n";
  const FillResult res = fill_sphere(sphere, cfg);
  write_file_atomic(output, res.disk.dump(2) + "\n");
  return emit(res.report, cfg, "fill");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"horolab: horosphere connectivity experiments in SL(n,R)/SO(n)"};
  app.require_subcommand(1);

  std::string config, suite, mode, input, output;
  bool calibrate = false;

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
  verify->add_option("--config", config, "key = value configuration file")->required();
  verify->add_flag("--calibrate", calibrate, "fit constants and write the lockfile first");

  auto* distort = app.add_subcommand("distort", "distortion experiment");
  distort->add_option("--mode", mode, "rank1 | rank2_paths")->required()->check(CLI::IsMember({"rank1", "rank2_paths"}));
  distort->add_option("--config", config, "configuration file");

  auto* diverge = app.add_subcommand("divergence", "flat cycles on Z at height r");
  diverge->add_option("--config", config, "configuration file");

  auto* fill = app.add_subcommand("fill", "fill a sphere of Z");
  fill->add_option("--input", input, "horolab.sphere/1 JSON")->required();
  fill->add_option("--output", output, "horolab.disk/1 JSON to write")->required();
  fill->add_option("--config", config, "configuration file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*verify) return cmd_verify(suite, config, calibrate);
    if (*distort) {
      const RunConfig cfg = config_from(config);
      return emit(run_distort(mode, cfg), cfg, "distort_" + mode);
    }
    if (*diverge) {
      const RunConfig cfg = config_from(config);
      return emit(divergence(cfg), cfg, "divergence");
    }
    if (*fill) return cmd_fill(input, output, config);
  } catch (const Error& e) {
    const std::string ctx = *verify ? suite : *distort ? "distort " + mode : *diverge ? "divergence" : "fill";
    std::cerr << "horolab: " << ctx << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "horolab: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
