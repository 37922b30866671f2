#include <gtest/gtest.h>

#include <cmath>

#include "horolab/config.hpp"
#include "horolab/error.hpp"
#include "horolab/horosphere.hpp"

using namespace horolab;

namespace {

HorosphereContext context3() {
  Vector v(3);
  v << 1.0, 0.0, -1.0;
  return compute_margins(BusemannConfig::make(v / std::sqrt(2.0)));
}

}  // namespace

TEST(Margins, KnownValues) {
  const HorosphereContext c3 = context3();
  EXPECT_NEAR(c3.epsilon, M_PI / 3.0, 1e-12);
  const HorosphereContext bary = compute_margins(BusemannConfig::make(chamber_barycenter(4).values()));
  EXPECT_NEAR(bary.theta, 0.0, 1e-12);
  const HorosphereContext c2 = compute_margins(BusemannConfig::make(chamber_barycenter(2).values()));
  EXPECT_NEAR(c2.epsilon, M_PI / 2.0, 1e-12);
}

TEST(ProjectToZ, PointOnZStaysPut) {
  const HorosphereContext ctx = context3();
  Rng rng(1);
  const Point z = retract_to_Z(sample_ball(base_point(3), 2.0, rng), ctx);
  const ZProjection p = project_to_Z(z, sample_shadow(z, 1.0, rng).barycenter(), ctx);
  EXPECT_EQ(p.T, 0.0);
  EXPECT_LE(distance(p.z, z), 1e-12);
}

TEST(ProjectToZ, SL2ClosedForm) {
  // u = [n(x) a(y)] at height h = log(y)/sqrt2 ... ray to the boundary point of chamber d = [u(s)] c*
  const HorosphereContext ctx = compute_margins(BusemannConfig::make(chamber_barycenter(2).values()));
  Rng rng(2);
  for (int k = 0; k < 20; ++k) {
    const double h = rng.uniform(0.5, 4.0);
    const Point u = Point::from_rep(SpecialLinear(ctx.cfg.tau.exp_diag(h)));
    const Chamber d = sample_shadow(u, 3.0, rng);
    const ZProjection p = project_to_Z(u, d.barycenter(), ctx);
    // In the upper half-plane (metric scaled by 1/sqrt 2) u = i e^{sqrt2 h}, the ray runs along the
    // geodesic to the real point s; the horocycle Im = 1 is crossed where the circle through
    // i y0 with foot s meets it.
    const double y0 = std::exp(std::sqrt(2.0) * h);
    const double s = canonical_unipotent(d).matrix()(0, 1);
    // circle centred on the real axis at c through s and i y0: c = (s^2 - y0^2) / (2 s) ... radius |s - c|
    const double c = (s * s - y0 * y0) / (2.0 * s), rad = std::abs(s - c);
    const double xc = c + (s > c ? 1.0 : -1.0) * std::sqrt(rad * rad - 1.0);
    const double dh = std::acosh(1.0 + (xc * xc + (1.0 - y0) * (1.0 - y0)) / (2.0 * y0));
    EXPECT_NEAR(p.T * std::sqrt(2.0), dh, 1e-7) << "h=" << h << " s=" << s;
    EXPECT_NEAR(ctx.height(p.z), 0.0, 1e-8);
  }
}

TEST(ProjectToZ, TravelTimeBound) {
  const HorosphereContext ctx = context3();
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    const Point u = push(retract_to_Z(sample_ball(base_point(3), 1.5, rng), ctx), ctx.cfg.tau, rng.uniform(1.0, 6.0));
    const ZProjection p = project_to_Z(u, sample_shadow(u, 2.0, rng).barycenter(), ctx);
    const double b = (1.0 + ctx.push_c * p.rho) / std::sin(ctx.epsilon);
    EXPECT_LE(p.T, b * ctx.height(u) + 1e-9);
    EXPECT_NEAR(ctx.height(p.z), 0.0, 1e-8);
  }
}

TEST(TwoPoint, DegenerateIsZero) {
  const HorosphereContext ctx = context3();
  Rng rng(4);
  const Point u = push(base_point(3), ctx.cfg.tau, 2.0);
  const BoundaryPoint s = sample_shadow(u, 1.0, rng).barycenter();
  EXPECT_EQ(two_point_profile(u, u, s, s, ctx), 0.0);
}

TEST(LipProfile, FiniteAndScaled) {
  const HorosphereContext ctx = context3();
  Rng rng(5);
  const Point u = push(base_point(3), ctx.cfg.tau, 2.0);
  const LipProfile prof = lipschitz_profile_i_u(u, ctx, 20, 1.0, 0.05, rng);
  EXPECT_GT(prof.pairs, 0);
  EXPECT_TRUE(std::isfinite(prof.max_ratio));
  EXPECT_NEAR(prof.scale, 4.0 * 2.0, 1e-9);
}

TEST(Retract, FixesZAndCentralRay) {
  const HorosphereContext ctx = context3();
  Rng rng(6);
  const Point z = retract_to_Z(sample_ball(base_point(3), 2.0, rng), ctx);
  EXPECT_NEAR(ctx.height(z), 0.0, 1e-10);
  EXPECT_LE(distance(retract_to_Z(z, ctx), z), 1e-10);
  EXPECT_LE(distance(retract_to_Z(push(base_point(3), ctx.cfg.tau, 3.0), ctx), base_point(3)), 1e-10);
}

TEST(Retract, LipschitzNearZ) {
  const HorosphereContext ctx = context3();
  Rng rng(7);
  double worst = 0;
  for (int k = 0; k < 300; ++k) {
    const Point z = retract_to_Z(sample_ball(base_point(3), 2.0, rng), ctx);
    const Point a = sample_ball(z, 1.0, rng), b = sample_ball(a, 0.3, rng);
    const double d = distance(a, b);
    if (d > 1e-6) worst = std::max(worst, distance(retract_to_Z(a, ctx), retract_to_Z(b, ctx)) / d);
  }
  EXPECT_LT(worst, 10.0);
}

TEST(YSpace, MetricCases) {
  const HorosphereContext ctx = context3();
  Rng rng(8);
  const Point x = push(base_point(3), ctx.cfg.tau, 2.0);
  const Chamber d = sample_shadow(x, 1.0, rng);
  const BoundaryPoint s1 = d.barycenter();
  const BoundaryPoint s2 = d.point(CartanVector::projected(chamber_extreme_rays(3)[0].values()).unit());
  const YPoint p(s1, x, ctx, 2.0), q(s2, x, ctx, 2.0);
  EXPECT_NEAR(d_Y(p, p), 0.0, 1e-12);
  EXPECT_NEAR(d_Y(p, q), ctx.height(x) * tits_angle(s1, s2), 1e-10);
  const Point y = push(x, ctx.cfg.tau, 0.5);
  EXPECT_NEAR(d_Y(p, YPoint(s1, y, ctx, 2.0)), distance(x, y), 1e-10);
  try {
    YPoint(s1, base_point(3), ctx, 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MembershipViolation);
  }
}
