#pragma once

// Horosphere Z = {h = 0}, projection of shadow directions to Z, and the
// metrics used by the filling construction.

#include <optional>

#include "horolab/chambers.hpp"

namespace horolab {

struct HorosphereContext {
  BusemannConfig cfg;
  double epsilon;       // pi/2 - max angle between the closed standard chamber and tau
  double theta;         // angle between the chamber barycenter and tau
  CartanVector tau0;    // unit barycenter of the standard chamber
  double push_c = 1.4142135623730951;  // c in T <= (h + c rho) / sin(epsilon)

  int dim() const noexcept { return cfg.tau.dim(); }
  double height(const Point& x) const { return busemann(x, cfg); }
};

/// Throws InvalidArgument (degenerate chamber) if epsilon <= 1e-9.
HorosphereContext compute_margins(const BusemannConfig& cfg);

struct ZProjection {
  Point z;
  double T;
  double rho;    // rho_u of the chamber of sigma
  double bound;  // (h(u) + c rho) / sin(epsilon)
};

/// First point where the ray from u toward sigma meets Z.
ZProjection project_to_Z(const Point& u, const BoundaryPoint& sigma, const HorosphereContext& ctx);
/// i_u(sigma).
inline Point i_u(const Point& u, const BoundaryPoint& sigma, const HorosphereContext& ctx) {
  return project_to_Z(u, sigma, ctx).z;
}

struct LipProfile {
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  double scale = 0.0;  // (rho + 1)^2 h(u)
  int pairs = 0;
};

/// Ratios d(i_u(s1), i_u(s2)) / angle(s1, s2) over nearby pairs in one sampled shadow chamber.
LipProfile lipschitz_profile_i_u(const Point& u, const HorosphereContext& ctx, int pairs, double rho, double step,
                                 Rng& rng);

/// d(i_{u1}(s1), i_{u2}(s2)) / (d(u1, u2) + min h * angle); 0 for coincident inputs.
double two_point_profile(const Point& u1, const Point& u2, const BoundaryPoint& s1, const BoundaryPoint& s2,
                         const HorosphereContext& ctx);

/// Moves x along the line [n a exp(s tau)] to height zero.
Point retract_to_Z(const Point& x, const HorosphereContext& ctx);

struct ConePoint {
  BoundaryPoint sigma;
  double t;
};
double cone_distance(const ConePoint& a, const ConePoint& b);

class YPoint {
 public:
  /// Throws MembershipViolation unless h(x) >= 1 and the chamber of sigma is in S_x(rho).
  YPoint(BoundaryPoint sigma, Point x, const HorosphereContext& ctx, double rho,
         const std::optional<Chamber>& chamber = std::nullopt);
  const BoundaryPoint& sigma() const noexcept { return sigma_; }
  const Point& x() const noexcept { return x_; }
  double h() const noexcept { return h_; }
  double rho() const noexcept { return rho_; }

 private:
  BoundaryPoint sigma_;
  Point x_;
  double h_;
  double rho_;
};

double d_Y(const YPoint& p, const YPoint& q);
/// I(sigma, x) = i_x(sigma).
Point I_map(const YPoint& p, const HorosphereContext& ctx);

}  // namespace horolab
