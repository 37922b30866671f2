#pragma once

// Run configuration: a key = value text file, plus environment overrides for
// the seed and the output directory, plus the calibration lockfile.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "horolab/horosphere.hpp"

namespace horolab {

/// Constants known only to exist. Defaults are conservative;
/// `verify --calibrate` refits them and writes a lockfile.
struct Calibration {
  double c_compare = 4.0;     // log rho <= c_compare * (r + 1) on samples with d(x, E_d) < r
  double c_enlarge = 4.0;     // enlarge time t = c_enlarge * (r + 1)
  double rho_star = 50.0;     // uniform rho bound in the D_x shadow check
  double c_push = 1.4142135623730951;  // T <= (h + c_push rho) / sin eps
  double lip_cap = 10.0;      // Lip(i_u) <= lip_cap * (rho + 1)^2 h(u)
  double two_point_cap = 10.0;
  double anchor_cap = 20.0;   // d(x_delta, V) <= anchor_cap * (diam V + 1)
  double c_fill_cap = 2000.0; // recorded disk Lipschitz <= c_fill_cap * (Lip alpha + 1)
  double path_cap = 10.0;     // in-Z path length <= path_cap * (ambient + 1)

  std::map<std::string, double> as_map() const;
  /// Unknown keys are ignored; returns the keys that were applied.
  std::vector<std::string> apply(const std::map<std::string, double>& values);
};

struct RunConfig {
  int n = 3;
  Vector tau;                       // empty: the chamber barycenter direction
  std::uint64_t seed = 1;
  std::map<std::string, int> samples;   // per-suite sample counts, key "<suite>.samples" in the file
  NumericPolicy policy;
  Calibration calibration;
  std::string out_dir = ".";
  std::string lockfile;             // consumed by verify, written by --calibrate

  /// Sample count for `key`, or `fallback` if unset.
  int samples_for(const std::string& key, int fallback) const;
  /// Validated tau as a Busemann configuration (NotRegular / InvalidArgument).
  BusemannConfig busemann() const;
  HorosphereContext context() const;
  /// Canonical text form (sorted keys); parse_config(to_text()) reproduces the config.
  std::string to_text() const;
};

/// Throws InvalidArgument on malformed lines or unknown keys, NotRegular on a bad tau.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// HOROLAB_SEED and HOROLAB_OUT.
void apply_env_overrides(RunConfig& cfg);

/// Lockfile: key = value lines of calibration constants, tagged with n and tau.
void write_lockfile(const std::string& path, const RunConfig& cfg, const std::map<std::string, double>& constants);
/// Throws CalibrationFailure if the lockfile was produced for a different (n, tau).
std::map<std::string, double> read_lockfile(const std::string& path, const RunConfig& cfg);

/// Round-trip decimal form used in every text artifact.
std::string format_double(double v);

}  // namespace horolab
