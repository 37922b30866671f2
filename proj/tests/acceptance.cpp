// Acceptance gate: one PASS/FAIL line per criterion.
//
// Exit status is 0 when every failing criterion belongs to the documented
// known-failure set, 1 otherwise, 3 on an unexpected exception.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "horolab/error.hpp"
#include "horolab/suites.hpp"

using namespace horolab;

namespace {

// Tolerances pinned here; suite-internal bounds are pinned in the library.
constexpr double kIwasawaSeconds = 5.0;
constexpr double kFillSeconds = 60.0;
constexpr double kFillSlopeTol = 0.2;
constexpr std::uint64_t kCalibrationSeed = 1;
constexpr std::uint64_t kVerifySeed = 2;

const std::set<std::string> kKnownFailures = {"filling", "divergence"};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << (ok ? "" : "FAILED ") << what;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunConfig config(int n, std::uint64_t seed) {
  RunConfig cfg;
  cfg.n = n;
  cfg.seed = seed;
  return cfg;
}

/// Requires every check of the report and names the failing ones.
void require_report(Outcome& o, const SuiteReport& r) {
  std::string failed;
  for (const CheckRecord& c : r.checks)
    if (!c.pass) failed += (failed.empty() ? "" : ",") + c.check_id + "=" + format_double(c.measured);
  o.require(failed.empty(), r.suite + "[n=" + std::to_string(r.n) + "] " +
                                std::to_string(r.checks.size() - r.failures()) + "/" +
                                std::to_string(r.checks.size()) + (failed.empty() ? "" : " (" + failed + ")"));
}

/// Calibrates on one seed and verifies on a disjoint one.
SuiteReport calibrated(const std::string& suite, int n) {
  RunConfig cfg = config(n, kCalibrationSeed);
  const auto constants = calibrate_suite(suite, cfg);
  cfg.seed = kVerifySeed;
  cfg.calibration.apply(constants);
  return run_suite(suite, cfg);
}

Outcome crit_iwasawa() {
  Outcome o;
  for (int n : {3, 4}) {
    RunConfig cfg = config(n, kVerifySeed);
    cfg.samples["iwasawa"] = 1000;
    const auto t0 = std::chrono::steady_clock::now();
    const SuiteReport r = run_suite("iwasawa", cfg);
    const double dt = seconds_since(t0);
    require_report(o, r);
    o.require(dt < kIwasawaSeconds, "n=" + std::to_string(n) + " time " + format_double(dt) + " s");
  }
  return o;
}

Outcome crit_busemann() {
  Outcome o;
  for (int n : {3, 4}) require_report(o, run_suite("busemann", config(n, kVerifySeed)));
  return o;
}

Outcome crit_dil() {
  Outcome o;
  require_report(o, run_suite("dil", config(3, kVerifySeed)));
  return o;
}

Outcome crit_compare() {
  Outcome o;
  require_report(o, calibrated("compare", 3));
  return o;
}

Outcome crit_pushing() {
  Outcome o;
  for (int n : {3, 4}) require_report(o, calibrated("pushing", n));
  return o;
}

Outcome crit_opposition() {
  Outcome o;
  for (int n : {3, 4}) require_report(o, run_suite("opposition", config(n, kVerifySeed)));
  return o;
}

Outcome crit_omega_infty() {
  Outcome o;
  for (int n : {3, 4}) require_report(o, calibrated("omega_infty", n));
  return o;
}

Outcome crit_filling() {
  Outcome o;
  require_report(o, distort_rank2_paths(config(3, kVerifySeed)));

  const RunConfig cfg = config(4, kVerifySeed);
  const HorosphereContext ctx = cfg.context();
  std::vector<double> log_lip, log_c;
  for (double lip : {1.0, 2.0, 4.0}) {
    Rng rng(mix_seed(2024, 4));
    SphereFile in;
    in.n = 4;
    in.tau = ctx.cfg.tau.values();
    in.sphere = unipotent_loop(4, lip, 24, rng);
    const auto t0 = std::chrono::steady_clock::now();
    FillResult res = fill_sphere(in, cfg);
    const double dt = seconds_since(t0);
    res.report.suite = "fill_lip" + format_double(lip);
    require_report(o, res.report);
    o.require(dt < kFillSeconds, "fill lip " + format_double(lip) + " time " + format_double(dt) + " s");
    const double c = res.disk["records"]["c_fill"].get<double>();
    log_lip.push_back(std::log(lip));
    log_c.push_back(std::log(c));
  }
  const double slope = fit_line(log_lip, log_c).slope;
  o.require(std::abs(slope) <= kFillSlopeTol, "C_fill log-log slope " + format_double(slope));
  return o;
}

Outcome crit_rank1() {
  Outcome o;
  require_report(o, distort_rank1(config(2, kVerifySeed)));
  return o;
}

Outcome crit_divergence() {
  Outcome o;
  require_report(o, divergence(config(3, kVerifySeed)));
  return o;
}

Outcome crit_determinism() {
  Outcome o;
  RunConfig cfg = config(3, kVerifySeed);
  // Reduced counts; byte identity does not depend on sample size.
  for (const std::string& s : suite_names()) {
    cfg.samples[s] = 20;
    cfg.samples[s + ".pairs"] = 20;
  }
  cfg.samples["omega_infty.edges"] = 3;
  cfg.samples["compare.reverse"] = 40;
  cfg.samples["pushing.two_point"] = 40;
  cfg.samples["opposition.flats"] = 3;
  int identical = 0, total = 0;
  std::string differing;
  auto same = [&](const std::string& name, const std::function<SuiteReport()>& run) {
    const SuiteReport a = run(), b = run();
    ++total;
    if (to_csv(a) == to_csv(b) && to_json(a) == to_json(b))
      ++identical;
    else
      differing += " " + name;
  };
  for (const std::string& s : suite_names()) same(s, [&] { return run_suite(s, cfg); });
  same("distort_rank1", [&] {
    RunConfig c2 = cfg;
    c2.n = 2;
    return distort_rank1(c2);
  });
  o.require(identical == total, std::to_string(identical) + "/" + std::to_string(total) + " byte-identical" + differing);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    std::string id;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"iwasawa", crit_iwasawa},       {"busemann", crit_busemann},       {"dil", crit_dil},
      {"compare", crit_compare},       {"pushing", crit_pushing},         {"opposition", crit_opposition},
      {"omega_infty", crit_omega_infty}, {"filling", crit_filling},       {"rank1", crit_rank1},
      {"divergence", crit_divergence}, {"determinism", crit_determinism},
  };

  std::set<std::string> failed;
  try {
    for (const Criterion& c : criteria) {
      const auto t0 = std::chrono::steady_clock::now();
      Outcome o = c.run();
      const double dt = seconds_since(t0);
      if (!o.pass) failed.insert(c.id);
      std::cout << (o.pass ? "PASS " : "FAIL ") << c.id << " (" << format_double(std::round(dt * 10) / 10) << " s): "
                << o.detail.str() << std::endl;
    }
  } catch (const Error& e) {
    std::cout << "ERROR " << to_string(e.kind()) << ": " << e.what() << std::endl;
    return 3;
  }

  auto join = [](const std::set<std::string>& s) {
    std::string out;
    for (const auto& x : s) out += (out.empty() ? "" : ", ") + x;
    return out.empty() ? std::string("none") : out;
  };
  bool subset = true;
  for (const auto& f : failed) subset = subset && kKnownFailures.count(f) > 0;
  std::cout << "criteria: " << (criteria.size() - failed.size()) << "/" << criteria.size() << " pass\n"
            << "failed: " << join(failed) << "\n"
            << "known failures: " << join(kKnownFailures) << "\n"
            << (subset ? "all failures are documented known failures; exit 0"
                       : "undocumented failure present; exit 1")
            << std::endl;
  return subset ? 0 : 1;
}
