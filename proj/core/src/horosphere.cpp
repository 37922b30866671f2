#include "horolab/horosphere.hpp"

#include <algorithm>
#include <cmath>

#include "horolab/error.hpp"

namespace horolab {

HorosphereContext compute_margins(const BusemannConfig& cfg) {
  const int n = cfg.tau.dim();
  double min_cos = 1.0;
  for (const CartanVector& w : chamber_extreme_rays(n)) min_cos = std::min(min_cos, w.dot(cfg.tau));
  const double epsilon = M_PI / 2 - std::acos(std::clamp(min_cos, -1.0, 1.0));
  if (epsilon <= 1e-9) fail(ErrorKind::InvalidArgument, "degenerate chamber: tau is orthogonal to a chamber wall ray");
  const CartanVector tau0 = chamber_barycenter(n);
  return HorosphereContext{cfg, epsilon, cartan_angle(tau0, cfg.tau), tau0};
}

ZProjection project_to_Z(const Point& u, const BoundaryPoint& sigma, const HorosphereContext& ctx) {
  const double h0 = ctx.height(u);
  const Chamber ch = chamber_of(sigma);
  const double r = ch.unipotent() ? rho_value(u, ch) : std::numeric_limits<double>::infinity();
  const double sin_e = std::sin(ctx.epsilon);
  const double bound = (h0 + ctx.push_c * r) / sin_e;
  if (std::abs(h0) <= 1e-12) return ZProjection{u, 0.0, r, bound};
  if (h0 < 0) fail(ErrorKind::InvalidArgument, "projection requires h(u) > 0");
  const Ray ray = ray_to_boundary(u, sigma);
  auto f = [&](double t) { return ctx.height(ray(t)); };
  const double t_max = 10.0 * (h0 + (std::isfinite(r) ? r : 0.0) + 1.0) / sin_e;
  double lo = 0.0;
  double hi = std::min(1.0, t_max);
  while (f(hi) > 0.0) {
    lo = hi;
    if (hi >= t_max) fail(ErrorKind::NoCrossing, "ray does not reach the horosphere before t_max");
    hi = std::min(2.0 * hi, t_max);
  }
  while (hi - lo > default_policy().crossing) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  const double T = 0.5 * (lo + hi);
  return ZProjection{ray(T), T, r, bound};
}

LipProfile lipschitz_profile_i_u(const Point& u, const HorosphereContext& ctx, int pairs, double rho, double step,
                                 Rng& rng) {
  const int n = u.dim();
  LipProfile prof;
  prof.scale = (rho + 1.0) * (rho + 1.0) * ctx.height(u);
  double sum = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const Chamber d = sample_shadow(u, rho, rng);
    // direction in the closed standard chamber and a nearby one
    Vector c = Vector::Zero(n);
    for (const CartanVector& w : chamber_extreme_rays(n)) c += rng.uniform() * w.values();
    const CartanVector w1 = CartanVector::projected(c).unit();
    Vector pert = rng.normal_vector(n);
    pert = pert.array() - pert.mean();
    pert -= pert.dot(w1.values()) * w1.values();
    Vector w2v = w1.values() + step * pert.normalized();
    std::sort(w2v.data(), w2v.data() + n, std::greater<double>());
    const CartanVector w2 = CartanVector::projected(w2v).unit();
    const double ang = cartan_angle(w1, w2);
    if (ang <= 0.0) continue;
    const Point z1 = i_u(u, d.point(w1), ctx);
    const Point z2 = i_u(u, d.point(w2), ctx);
    const double ratio = distance(z1, z2) / ang;
    prof.max_ratio = std::max(prof.max_ratio, ratio);
    sum += ratio;
    ++prof.pairs;
  }
  prof.mean_ratio = prof.pairs ? sum / prof.pairs : 0.0;
  return prof;
}

double two_point_profile(const Point& u1, const Point& u2, const BoundaryPoint& s1, const BoundaryPoint& s2,
                         const HorosphereContext& ctx) {
  const double h1 = ctx.height(u1);
  const double h2 = ctx.height(u2);
  if (h1 < 1.0 - 1e-9 || h2 < 1.0 - 1e-9) fail(ErrorKind::InvalidArgument, "two-point profile requires h >= 1");
  const double rhs = distance(u1, u2) + std::min(h1, h2) * tits_angle(s1, s2);
  const double lhs = distance(i_u(u1, s1, ctx), i_u(u2, s2, ctx));
  if (rhs <= 1e-14) return lhs <= 1e-10 ? 0.0 : std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

Point retract_to_Z(const Point& x, const HorosphereContext& ctx) { return push(x, ctx.cfg.tau, -ctx.height(x)); }

double cone_distance(const ConePoint& a, const ConePoint& b) {
  const double ang = std::min(tits_angle(a.sigma, b.sigma), M_PI);
  return std::sqrt(std::max(0.0, a.t * a.t + b.t * b.t - 2.0 * a.t * b.t * std::cos(ang)));
}

YPoint::YPoint(BoundaryPoint sigma, Point x, const HorosphereContext& ctx, double rho,
               const std::optional<Chamber>& chamber)
    : sigma_(std::move(sigma)), x_(std::move(x)), h_(ctx.height(x_)), rho_(0.0) {
  if (h_ < 1.0 - 1e-9) fail(ErrorKind::MembershipViolation, "Y point requires h(x) >= 1");
  const Chamber ch = chamber ? *chamber : chamber_of(sigma_);
  if (!ch.unipotent()) fail(ErrorKind::MembershipViolation, "Y point chamber is not opposite the standard chamber");
  rho_ = rho_value(x_, ch);
  if (!(rho_ < rho)) fail(ErrorKind::MembershipViolation, "Y point direction is outside the shadow");
}

double d_Y(const YPoint& p, const YPoint& q) {
  return distance(p.x(), q.x()) + std::min(p.h(), q.h()) * tits_angle(p.sigma(), q.sigma());
}

Point I_map(const YPoint& p, const HorosphereContext& ctx) { return i_u(p.x(), p.sigma(), ctx); }

}  // namespace horolab
