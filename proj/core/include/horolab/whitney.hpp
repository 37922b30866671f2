#pragma once

// Lipschitz extension of spheres in Z over a Whitney decomposition of the disk,
// for sphere dimensions 0 and 1.

#include <cstdint>
#include <optional>
#include <vector>

#include "horolab/omega.hpp"

namespace horolab {

/// Sampled sphere in Z. m = 0: two points. m = 1: a loop sampled at angles 2 pi i / K,
/// extended between samples by geodesics retracted to Z.
struct ZSphere {
  int m = 0;
  std::vector<Point> points;

  /// Point at parameter t: m = 0 takes t in {0, 1}; m = 1 takes an angle.
  Point at(double t, const HorosphereContext& ctx) const;
  /// Sampled Lipschitz constant: d(p0, p1) / 2 for m = 0, max chord over angle step for m = 1.
  double lipschitz() const;
};

/// Loop theta -> [exp(s (cos theta X1 + sin theta X2))] with X1, X2 strictly upper triangular,
/// s chosen so that the sampled Lipschitz constant equals `lip`.
ZSphere unipotent_loop(int n, double lip, int samples, Rng& rng);

struct WhitneyOptions {
  int max_depth = 5;            // dyadic levels; cubes still touching the boundary are kept at this depth
  int cube_budget = 20000;
  int lip_grid = 3;             // barycentric sub-grid per simplex for the Lipschitz record
  double boundary_spacing = 1.0;// lattice spacing for the boundary labels of deep vertices
  double large_simplex = 0.0;   // diameter threshold for Omega simplices; <= 0 uses c^-2 / 2
  std::uint64_t seed = 1;
  OmegaOptions omega;
};

struct DiskVertex {
  Vector pos;                   // domain coordinates
  double depth;                 // distance to the domain boundary
  bool on_boundary;
  double boundary_param;        // nearest boundary point (m = 0: -L or L; m = 1: perimeter position)
  bool deep;
};

struct FilledDisk {
  int m = 0;
  double domain_radius = 0.0;   // L for m = 0, R for m = 1
  std::vector<DiskVertex> vertices;
  std::vector<std::vector<int>> simplices;  // edges (m = 0) or triangles (m = 1)
  std::vector<Point> images;    // image of each vertex
  int cubes = 0;
  int large_simplices = 0;
  double shape_constant = 0.0;  // c with diam ~ d(., boundary) up to c
  double lipschitz = 0.0;       // sampled, in domain units
  double lipschitz_unit = 0.0;  // rescaled to the unit disk
  double input_lipschitz = 0.0;
  double c_fill = 0.0;          // lipschitz_unit / (input_lipschitz + 1)
  double boundary_residual = 0.0;
  double max_abs_h = 0.0;
  double path_length = 0.0;     // m = 0 only
  int omega_faces = 0;
  std::vector<OmegaCheck> omega_checks;
};

/// Throws ResolutionExceeded when the Whitney cube count exceeds the budget.
FilledDisk whitney_fill(const ZSphere& alpha, const HorosphereContext& ctx, const WhitneyOptions& opts = {});

}  // namespace horolab
