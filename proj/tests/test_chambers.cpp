#include <gtest/gtest.h>

#include <cmath>

#include "horolab/chambers.hpp"
#include "horolab/error.hpp"

using namespace horolab;

namespace {

Point sl2_unipotent(double s) {
  Matrix u = Matrix::Identity(2, 2);
  u(0, 1) = s;
  return Point::from_rep(SpecialLinear(u));
}

CartanVector direction3() {
  Vector v(3);
  v << 1.0, 0.0, -1.0;
  return CartanVector(v / std::sqrt(2.0));
}

}  // namespace

TEST(CanonicalUnipotent, StandardOppositeIsIdentity) {
  EXPECT_LE((canonical_unipotent(Chamber::standard_opposite(3)).matrix() - Matrix::Identity(3, 3)).norm(), 1e-14);
}

TEST(CanonicalUnipotent, ConstructThenRecover) {
  Rng rng(1);
  for (int s = 0; s < 100; ++s) {
    const UnitUpper u = random_unipotent(rng, 4, rng.uniform(0.1, 5.0));
    const Chamber d(Matrix(u.matrix() * Chamber::standard_opposite(4).frame().matrix()));
    EXPECT_LE((canonical_unipotent(d).matrix() - u.matrix()).norm(), 1e-10 * (1.0 + u.matrix().norm()));
  }
}

TEST(CanonicalUnipotent, StandardChamberIsNotOpposite) {
  try {
    canonical_unipotent(Chamber::standard(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotOpposite);
  }
}

TEST(Rho, BasePointReadsDN) {
  Rng rng(2);
  for (int s = 0; s < 50; ++s) {
    const UnitUpper u = random_unipotent(rng, 3, rng.uniform(0.1, 4.0));
    EXPECT_NEAR(rho_value(base_point(3), Chamber::from_unipotent(u)), d_N(u), 1e-12 * (1 + d_N(u)));
  }
}

TEST(Rho, IndependentOfRotationInRepresentative) {
  Rng rng(3);
  const Point x = sample_ball(base_point(3), 2.0, rng);
  const Chamber d = sample_shadow(x, 2.0, rng);
  Matrix k = Eigen::HouseholderQR<Matrix>(rng.normal_matrix(3, 3)).householderQ();
  if (k.determinant() < 0) k.col(0) *= -1.0;
  const Point xr = Point::from_rep(SpecialLinear::normalized(x.any_rep().matrix() * k));
  EXPECT_NEAR(rho_value(x, d), rho_value(xr, d), 1e-10);
}

TEST(Compare, ForwardImplication) {
  Rng rng(4);
  for (int s = 0; s < 200; ++s) {
    const Point x = sample_ball(base_point(3), 2.0, rng);
    const double r = rng.uniform(0.2, 3.0);
    const Chamber d = sample_shadow(x, r, rng);
    if (rho_value(x, d) < r) EXPECT_LT(distance_to_flat(x, chamber_flat(d)), r + 1e-6);
  }
}

TEST(FlatDistance, ZeroOnFlatAndSL2ClosedForm) {
  const Flat e = Flat::standard(3);
  EXPECT_LE(distance_to_flat(e.point(direction3()), e), 1e-8);
  // [u(s)] is s + i in the half-plane; its distance to the imaginary axis is asinh(s), scaled by 1/sqrt 2
  for (double s : {0.3, 1.0, 4.0, 20.0})
    EXPECT_NEAR(distance_to_flat(sl2_unipotent(s), Flat::standard(2)), std::asinh(s) / std::sqrt(2.0), 1e-7);
}

TEST(FlatDistance, MonotoneAlongProjectionGeodesic) {
  Rng rng(5);
  const Flat e = Flat::standard(3);
  for (int s = 0; s < 20; ++s) {
    const Point x = sample_ball(base_point(3), 3.0, rng);
    const FlatProjection pr = project_to_flat(x, e);
    const Point foot = e.point(CartanVector::projected(pr.log_a));
    double prev = distance_to_flat(x, e);
    for (double t : {0.25, 0.5, 0.75}) {
      const double d = distance_to_flat(geodesic_between(x, foot, t), e);
      EXPECT_LE(d, prev + 1e-7);
      prev = d;
    }
  }
}

TEST(Contract, ZeroTimeAndSL2Exact) {
  Rng rng(6);
  Vector v(2);
  v << 1.0, -1.0;
  const CartanVector cv(v / std::sqrt(2.0));
  for (int s = 0; s < 50; ++s) {
    const Point x = sample_ball(base_point(2), 2.0, rng);
    const Chamber d = sample_shadow(x, 3.0, rng);
    const double r0 = rho_value(x, d);
    EXPECT_NEAR(contract(x, cv, 0.0, d), r0, 1e-12 * (1 + r0));
    for (double t = 0.5; t <= 10.0; t += 0.5) EXPECT_NEAR(contract(x, cv, t, d) / r0, std::exp(-std::sqrt(2.0) * t), 1e-10);
  }
}

TEST(Contract, SL3BoundByKappa) {
  Rng rng(7);
  const CartanVector v = direction3();
  const double kap = kappa(v);
  for (int s = 0; s < 50; ++s) {
    const Point x = sample_ball(base_point(3), 1.0, rng);
    const Chamber d = sample_shadow(x, 2.0, rng);
    for (double t : {0.5, 2.0, 5.0}) EXPECT_LE(contract(x, v, t, d), std::exp(-kap * t) * rho_value(x, d) * (1 + 1e-6));
  }
}

TEST(WeylChamber, TipAndCone) {
  Rng rng(8);
  const Point x = sample_ball(base_point(3), 1.0, rng);
  const WeylChamberRegion region(x);
  const CartanVector v = direction3();
  EXPECT_LE(distance_to_weyl_chamber(x, region), 1e-8);
  for (double t : {1.0, 3.0}) EXPECT_LE(distance_to_weyl_chamber(push(x, v, t), region), 1e-6);
  for (double t : {1.0, 2.0, 4.0}) EXPECT_NEAR(distance_to_weyl_chamber(push(x, v, -t), region), t, 1e-5);
}

TEST(DxShadows, SelfAndContraction) {
  Rng rng(9);
  const CartanVector v = direction3();
  for (int s = 0; s < 50; ++s) {
    const Point x = sample_ball(base_point(3), 1.5, rng);
    const Chamber d = sample_shadow(x, 1.0, rng);
    EXPECT_LT(rho_value(x, d), 1.0);
    EXPECT_LE(rho_value(push(x, v, rng.uniform(0, 4)), d), rho_value(x, d) * (1 + 1e-12));
  }
  EXPECT_GT(verify_dx_shadows(base_point(3), 100, 1.0, rng).max_rho, 0.0);
}

TEST(Enlarge, SL2ExplicitTime) {
  Rng rng(10);
  Vector v(2);
  v << 1.0, -1.0;
  const CartanVector cv(v / std::sqrt(2.0));
  const Point x = base_point(2);
  double rho_max = 0.0;
  std::vector<Chamber> ds;
  for (int s = 0; s < 100; ++s) {
    ds.push_back(sample_shadow(sample_ball(x, 1.0, rng), 1.0, rng));
    rho_max = std::max(rho_max, rho_value(x, ds.back()));
  }
  const Point xp = push(x, cv, std::log(rho_max) / std::sqrt(2.0) + 0.1);
  for (const Chamber& d : ds) EXPECT_LT(rho_value(xp, d), 1.0);
}

TEST(Enlarge, PostCheckAtGenerousConstant) {
  Rng rng(11);
  const Point x = base_point(3);
  const EnlargeCheck chk = check_enlarge(x, enlarge(x, direction3(), 2.0, 4.0), 2.0, 32, rng);
  EXPECT_TRUE(chk.ok()) << chk.max_rho << " " << chk.max_d_dist;
}

TEST(Opposition, BasicCases) {
  EXPECT_TRUE(are_opposite(Chamber::standard(3), Chamber::standard_opposite(3)));
  EXPECT_FALSE(are_opposite(Chamber::standard(3), Chamber::standard(3)));
  Rng rng(12);
  int opposite = 0;
  for (int s = 0; s < 2000; ++s) opposite += are_opposite(random_chamber(rng, 4), random_chamber(rng, 4)) ? 1 : 0;
  EXPECT_EQ(opposite, 2000);
}

TEST(Opposition, FlatSpannedRecoversFrames) {
  const Flat f = flat_spanned(Chamber::standard(3), Chamber::standard_opposite(3));
  for (const Chamber& c : boundary_chambers(f)) EXPECT_TRUE(c.dim() == 3);
  EXPECT_LE(distance_to_flat(Flat::standard(3).point(direction3()), f), 1e-7);

  Rng rng(13);
  const UnitUpper u = random_unipotent(rng, 3, 2.0);
  const Flat fu = flat_spanned(Chamber(u.matrix()), Chamber::from_unipotent(u));
  for (double t : {-2.0, 0.0, 3.0}) {
    const Point p = Point::from_rep(SpecialLinear::normalized(u.matrix() * direction3().exp_diag(t)));
    EXPECT_LE(distance_to_flat(p, fu), 1e-7);
  }
}

TEST(Opposition, FindOppositeFlatAllChambers) {
  Rng rng(14);
  for (int n : {2, 3, 4}) {
    const Chamber c = random_chamber(rng, n);
    const Flat e = find_opposite_flat(c, 100, rng);
    int count = 0;
    for (const Chamber& b : boundary_chambers(e)) {
      EXPECT_TRUE(are_opposite(b, c));
      ++count;
    }
    int fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    EXPECT_EQ(count, fact);
  }
}

TEST(Opposition, ShadowPostCondition) {
  Rng rng(15);
  const Point x = sample_ball(base_point(3), 1.0, rng);
  const OppositeResult res = opposite_chamber_for_shadow(x, direction3(), rng);
  for (int s = 0; s < 200; ++s) EXPECT_TRUE(are_opposite(sample_shadow(x, 1.0, rng), res.d));
}

TEST(Sampling, Deterministic) {
  Rng a(77), b(77);
  EXPECT_EQ((sample_ball(base_point(4), 2.0, a).spd() - sample_ball(base_point(4), 2.0, b).spd()).norm(), 0.0);
  EXPECT_NE(mix_seed(1, 2), mix_seed(1, 3));
}
