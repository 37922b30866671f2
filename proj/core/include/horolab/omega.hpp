#pragma once

// Omega_infty on the simplex with vertex set in Z, the anchors x_delta, the
// coning map F on the barycentric subdivision and Omega = I o W.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "horolab/exploded.hpp"
#include "horolab/horosphere.hpp"

namespace horolab {

/// Sampled sphere in the shadow: m = 0 holds two points, m = 1 a cyclic loop.
struct ShadowSphere {
  int m = 0;
  std::vector<BoundaryPoint> points;
  double lipschitz() const;
};

struct OmegaOptions {
  double rho_Y = 50.0;          // shadow parameter for W(q) in Y(rho)
  int boundary_samples = 12;    // per edge when contracting a loop
  int shadow_samples = 24;      // chambers of S_{x_delta'} used when placing x0
  int grid = 6;                 // grid level for the Omega_infty(delta) membership check
  int retries = 6;
  double min_gap = 0.05;        // pi minus the largest cone-arc angle
  double anchor_cap = 20.0;     // cap for d(x_delta, V) / (diam V + 1)
  OppositeOptions opposite;
};

/// Cone point direction: sum_i i * omega_i, normalized (not self-opposite for n >= 3).
CartanVector cone_direction(int n);

/// Point at fraction s of the Tits geodesic from v to the point of d with chamber coordinates tau_g.
BoundaryPoint cone_point(const BoundaryPoint& v, const Chamber& d, const CartanVector& tau_g, double s,
                         double* angle = nullptr);

struct ShadowCone {
  OppositeResult opp;
  CartanVector tau_g;
  double min_gap;
  int attempts;
  SpecialLinear from_global;  // inverse of opp.to_global
  /// Cone tip (d, tau_g).
  BoundaryPoint u() const;
  /// Point at fraction s of the Tits geodesic from v to u; computed in coordinates centered at x.
  BoundaryPoint operator()(const BoundaryPoint& v, double s) const;
};

/// g applied to a boundary point.
BoundaryPoint translate(const BoundaryPoint& p, const SpecialLinear& g);

/// Null-homotopy of alpha inside the shadow of x' (x' in C_x). Throws CalibrationFailure.
ShadowCone contract_in_shadow(const ShadowSphere& alpha, const Point& x, const CartanVector& v, Rng& rng,
                              const OmegaOptions& opts = {});

/// Sampled Lipschitz constant (Tits angle over domain distance) of the cone disk.
double cone_lipschitz(const ShadowSphere& alpha, const ShadowCone& cone, int radial_steps);

struct OmegaCheck {
  std::string id;
  double measured;
  double bound;
  bool pass;
};

struct FaceData {
  std::vector<int> labels;
  Point x;                         // x_delta
  double h = 0.0;
  std::optional<BoundaryPoint> b;  // vertex direction b_z
  std::optional<ShadowCone> cone;  // faces of positive dimension
  std::optional<Point> x0;
  double t0 = 0.0;
  double anchor_ratio = 0.0;       // d(x_delta, V) / (diam V + 1)
  double max_rho = 0.0;            // max rho_{x_delta} over the image grid
};

class OmegaComplex {
 public:
  OmegaComplex(HorosphereContext ctx, std::uint64_t seed, OmegaOptions opts = {});

  /// Requires |h(z)| <= 1e-7.
  int add_vertex(const Point& z);
  int vertex_count() const noexcept { return static_cast<int>(z_.size()); }
  const Point& vertex(int i) const { return z_.at(i); }
  const HorosphereContext& context() const noexcept { return ctx_; }
  const OmegaOptions& options() const noexcept { return opts_; }
  const CartanVector& tau_g() const noexcept { return tau_g_; }

  /// Builds the face and all its subfaces on first use. Labels are sorted and distinct.
  const FaceData& face(const std::vector<int>& labels);
  const std::map<std::vector<int>, FaceData>& faces() const noexcept { return faces_; }

  /// Omega_infty at barycentric weights over `labels`.
  BoundaryPoint omega_infty(const std::vector<int>& labels, const Vector& weights);
  /// F at a point of the barycentric subdivision of the simplex on `labels`.
  Point F(const std::vector<int>& labels, const ExplodedPoint& ep);
  /// Omega(q) = i_{F(p2 q)}(Omega_infty(p1 q)); labels may repeat (weights are merged).
  Point omega(const std::vector<int>& labels, const Vector& weights);

  const std::vector<OmegaCheck>& checks() const noexcept { return checks_; }
  double max_rho_Y() const noexcept { return max_rho_y_; }
  const ExplodedComplex& exploded(int d);

 private:
  FaceData build_vertex(int label);
  FaceData build_face(const std::vector<int>& labels);
  std::vector<BoundaryPoint> boundary_samples(const std::vector<int>& labels);

  HorosphereContext ctx_;
  std::uint64_t seed_;
  OmegaOptions opts_;
  CartanVector tau_g_;
  std::vector<Point> z_;
  std::map<std::vector<int>, FaceData> faces_;
  std::map<int, ExplodedComplex> exploded_;
  std::vector<OmegaCheck> checks_;
  double max_rho_y_ = 0.0;
};

/// Builds the full simplex on the given points of Z.
OmegaComplex build_omega_infty(const std::vector<Point>& z, const HorosphereContext& ctx, std::uint64_t seed,
                               const OmegaOptions& opts = {});

/// Sampled Lipschitz ratio of Omega on the simplex spanned by all vertices, over grid neighbours.
double omega_lipschitz(OmegaComplex& oc, const std::vector<int>& labels, int grid);

}  // namespace horolab
