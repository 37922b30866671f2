#pragma once

// Verification suites and the experiments run by the CLI.
// Every suite is deterministic given (config, seed).

#include <functional>
#include <string>
#include <vector>

#include "horolab/config.hpp"
#include "horolab/report.hpp"
#include "horolab/serialize.hpp"

namespace horolab {

const std::vector<std::string>& suite_names();

/// Throws InvalidArgument for an unknown suite; library errors propagate
/// (CalibrationFailure, NumericalFailure, ...).
SuiteReport run_suite(const std::string& name, const RunConfig& cfg);

/// Bootstrap fit of the suite's existential constants (used by --calibrate).
/// Values include a safety factor over the worst sampled case.
std::map<std::string, double> calibrate_suite(const std::string& name, const RunConfig& cfg);

SuiteReport suite_iwasawa(const RunConfig& cfg);
SuiteReport suite_busemann(const RunConfig& cfg);
SuiteReport suite_compare(const RunConfig& cfg);
SuiteReport suite_dil(const RunConfig& cfg);
SuiteReport suite_dxshadows(const RunConfig& cfg);
SuiteReport suite_largeshadows(const RunConfig& cfg);
SuiteReport suite_pushing(const RunConfig& cfg);
SuiteReport suite_opposition(const RunConfig& cfg);
SuiteReport suite_omega_infty(const RunConfig& cfg);

// ---------------------------------------------------------------- experiments

/// SL(2): intrinsic horocycle length vs ambient distance (hyperbolic units).
SuiteReport distort_rank1(const RunConfig& cfg);
/// n >= 3: m = 0 Whitney paths between points of Z vs ambient distance.
SuiteReport distort_rank2_paths(const RunConfig& cfg);
SuiteReport run_distort(const std::string& mode, const RunConfig& cfg);

/// Flat cycles on Z through points at heights r.
SuiteReport divergence(const RunConfig& cfg);

struct FillResult {
  SuiteReport report;
  Json disk;
};
/// Fills the sphere of a horolab.sphere/1 document (tau from the file, seed and options from cfg).
FillResult fill_sphere(const SphereFile& input, const RunConfig& cfg);

/// Pair of points of Z at ambient distance `d` (z0 fixed by the rng, z1 along a unipotent direction).
std::pair<Point, Point> z_pair_at_distance(const HorosphereContext& ctx, double d, Rng& rng);

}  // namespace horolab
