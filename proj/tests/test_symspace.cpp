#include <gtest/gtest.h>

#include <cmath>

#include "horolab/chambers.hpp"
#include "horolab/error.hpp"

using namespace horolab;

namespace {

Point unipotent_point2(double s) {
  Matrix u = Matrix::Identity(2, 2);
  u(0, 1) = s;
  return Point::from_rep(SpecialLinear(u));
}

// Upper half-plane model: [g] for g = [[1, x], [0, 1]] diag(sqrt y, 1/sqrt y) is x + i y.
double hyperbolic(double x1, double y1, double x2, double y2) {
  return std::acosh(1.0 + ((x1 - x2) * (x1 - x2) + (y1 - y2) * (y1 - y2)) / (2.0 * y1 * y2));
}

Point half_plane(double x, double y) {
  Matrix g(2, 2);
  g << std::sqrt(y), x / std::sqrt(y), 0.0, 1.0 / std::sqrt(y);
  return Point::from_rep(SpecialLinear(g));
}

}  // namespace

TEST(Distance, ZeroOnDiagonal) {
  Rng rng(1);
  const Point p = sample_ball(base_point(3), 2.0, rng);
  EXPECT_LE(distance(p, p), 1e-12);
}

TEST(Distance, FlatDiagonalCase) {
  Matrix q = Matrix::Zero(3, 3);
  q(0, 0) = std::exp(2.0);
  q(1, 1) = 1.0;
  q(2, 2) = std::exp(-2.0);
  EXPECT_NEAR(distance(base_point(3), Point::from_rep(SpecialLinear(q))), std::sqrt(8.0), 1e-14);
}

TEST(Distance, SL2IsHyperbolicOverRootTwo) {
  Rng rng(2);
  for (int s = 0; s < 200; ++s) {
    const double x1 = rng.uniform(-3, 3), y1 = std::exp(rng.uniform(-2, 2));
    const double x2 = rng.uniform(-3, 3), y2 = std::exp(rng.uniform(-2, 2));
    const double dh = hyperbolic(x1, y1, x2, y2);
    EXPECT_NEAR(std::sqrt(2.0) * distance(half_plane(x1, y1), half_plane(x2, y2)), dh, 1e-10 * (1.0 + dh));
  }
}

TEST(Distance, MetricAxiomsAndInvariance) {
  Rng rng(3);
  for (int s = 0; s < 500; ++s) {
    const int n = 3 + s % 2;
    const Point a = sample_ball(base_point(n), 3.0, rng);
    const Point b = sample_ball(base_point(n), 3.0, rng);
    const Point c = sample_ball(base_point(n), 3.0, rng);
    EXPECT_LE(distance(a, c), distance(a, b) + distance(b, c) + 1e-9);
    EXPECT_NEAR(distance(a, b), distance(b, a), 1e-10);
    const SpecialLinear g = random_special_linear(rng, n, 1.0);
    EXPECT_NEAR(distance(a.translated(g), b.translated(g)), distance(a, b), 1e-8 * (1.0 + distance(a, b)));
  }
}

TEST(Distance, GradedPairsFarOut) {
  // exact value along the central flat at large separation
  Vector v(3);
  v << 1.0, 0.0, -1.0;
  const CartanVector cv = CartanVector::projected(v).unit();
  for (double t : {50.0, 200.0, 400.0})
    EXPECT_NEAR(distance(base_point(3), Point::from_rep(SpecialLinear(cv.exp_diag(t)))), t, 1e-9 * t);
}

TEST(Geodesic, UnitSpeedAndBasePoint) {
  Vector v(3);
  v << 0.9, 0.1, -1.0;
  const CartanVector cv = CartanVector::projected(v).unit();
  Rng rng(4);
  const Point p = Point::from_rep(random_special_linear(rng, 3, 1.0));
  EXPECT_LE(distance(geodesic(p, cv, 0.0), p), 1e-12);
  for (double t : {1.0, 5.0, 10.0}) EXPECT_NEAR(distance(p, geodesic(p, cv, t)), t, 1e-9);
  const Matrix spd = geodesic(base_point(3), cv, 0.7).spd();
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(spd(i, i), std::exp(2 * 0.7 * cv.values()(i)), 1e-12);
}

TEST(Geodesic, BetweenSplitsDistance) {
  Rng rng(5);
  for (int s = 0; s < 50; ++s) {
    const Point a = sample_ball(base_point(4), 3.0, rng), b = sample_ball(base_point(4), 3.0, rng);
    const double d = distance(a, b);
    const Point m = geodesic_between(a, b, 0.3);
    EXPECT_NEAR(distance(a, m), 0.3 * d, 1e-8);
    EXPECT_NEAR(distance(m, b), 0.7 * d, 1e-8);
  }
}

TEST(Busemann, NormalizationAndCentralRay) {
  const BusemannConfig bc = BusemannConfig::make(chamber_barycenter(3).values());
  EXPECT_EQ(busemann(base_point(3), bc), 0.0);
  for (double t : {0.0, 1.0, 3.0, 12.0})
    EXPECT_NEAR(busemann(Point::from_rep(SpecialLinear(bc.tau.exp_diag(t))), bc), t, 1e-12);
}

TEST(Busemann, LimitDefinitionInSL2) {
  const BusemannConfig bc = BusemannConfig::make(chamber_barycenter(2).values());
  Rng rng(6);
  for (int s = 0; s < 20; ++s) {
    const Point x = sample_ball(base_point(2), 4.0, rng);
    const double t = 200.0;
    EXPECT_NEAR(t - distance(x, Point::from_rep(SpecialLinear(bc.tau.exp_diag(t)))), busemann(x, bc), 1e-8);
  }
}

TEST(Busemann, OneLipschitz) {
  const BusemannConfig bc = BusemannConfig::make(chamber_barycenter(4).values());
  Rng rng(7);
  for (int s = 0; s < 2000; ++s) {
    const Point x = sample_ball(base_point(4), 3.0, rng), y = sample_ball(x, 2.0, rng);
    EXPECT_LE(std::abs(busemann(x, bc) - busemann(y, bc)), distance(x, y) + 1e-8);
  }
}

TEST(Busemann, RejectsSingularTau) {
  Vector t(3);
  t << 1.0, 1.0, -2.0;
  try {
    BusemannConfig::make(t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotRegular);
  }
}

TEST(Rays, StartAtOriginAndConverge) {
  Rng rng(8);
  for (int s = 0; s < 100; ++s) {
    const Point u = sample_ball(base_point(3), 2.0, rng);
    const Point w = sample_ball(base_point(3), 2.0, rng);
    const BoundaryPoint sigma = random_chamber(rng, 3).barycenter();
    const Ray r1 = ray_to_boundary(u, sigma), r2 = ray_to_boundary(w, sigma);
    EXPECT_LE(distance(r1(0.0), u), 1e-9);
    // asymptotic rays: t -> d(r1(t), r2(t)) is non-increasing
    double prev = distance(r1(0.0), r2(0.0));
    for (int t = 1; t <= 20; ++t) {
      const double d = distance(r1(t), r2(t));
      EXPECT_LE(d, prev + 1e-7);
      prev = d;
    }
  }
}

TEST(Rays, FlatRayIsStraight) {
  const Flat e = Flat::standard(3);
  const CartanVector v = chamber_barycenter(3);
  const Ray r = ray_to_boundary(base_point(3), e.boundary_point(v));
  for (double t : {1.0, 4.0}) EXPECT_LE(distance(r(t), geodesic(base_point(3), v, t)), 1e-9);
}

TEST(TitsAngle, FlatCases) {
  const Flat e = Flat::standard(3);
  const CartanVector v = chamber_barycenter(3);
  const BoundaryPoint a = e.boundary_point(v);
  EXPECT_NEAR(tits_angle_in_flat(e, a, a), 0.0, 1e-12);
  EXPECT_NEAR(tits_angle_in_flat(e, a, e.boundary_point(CartanVector(-v.values()))), M_PI, 1e-9);
  // adjacent chamber: swap the last two entries
  Vector w = v.values();
  std::swap(w(1), w(2));
  const BoundaryPoint b = e.boundary_point(CartanVector(w));
  EXPECT_NEAR(tits_angle_in_flat(e, a, b), std::acos(v.values().dot(w)), 1e-12);
}

TEST(Horocycle, SL2DistanceClosedForm) {
  for (double s : {0.5, 2.0, 10.0, 100.0}) {
    const double dh = std::sqrt(2.0) * distance(base_point(2), unipotent_point2(s));
    EXPECT_NEAR(2.0 * std::sinh(dh / 2.0), s, 1e-9 * s);
  }
}
