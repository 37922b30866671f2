#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "horolab/chambers.hpp"
#include "horolab/error.hpp"

using namespace horolab;

namespace {

Matrix diag3(double a, double b, double c) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

bool throws_kind(ErrorKind kind, const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

}  // namespace

TEST(Iwasawa, IdentityFactorsTrivially) {
  const IwasawaFactors f = iwasawa_nak(SpecialLinear::identity(3));
  EXPECT_LE((f.n.matrix() - Matrix::Identity(3, 3)).norm(), 1e-15);
  EXPECT_LE((f.a.diag().array() - 1.0).abs().maxCoeff(), 1e-15);
  EXPECT_LE((f.k.matrix() - Matrix::Identity(3, 3)).norm(), 1e-15);
}

TEST(Iwasawa, DiagonalIsAlreadyInA) {
  const IwasawaFactors f = iwasawa_nak(SpecialLinear(diag3(2.0, 1.0, 0.5)));
  EXPECT_LE((f.n.matrix() - Matrix::Identity(3, 3)).norm(), 1e-14);
  EXPECT_NEAR(f.a.diag()(0), 2.0, 1e-14);
  EXPECT_NEAR(f.a.diag()(1), 1.0, 1e-14);
  EXPECT_NEAR(f.a.diag()(2), 0.5, 1e-14);
  EXPECT_LE((f.k.matrix() - Matrix::Identity(3, 3)).norm(), 1e-14);
}

TEST(Iwasawa, MultiplyBackOnRandomSamples) {
  for (int n : {2, 3, 4, 6}) {
    Rng rng(mix_seed(7, n));
    for (int s = 0; s < 300; ++s) {
      const SpecialLinear g = random_special_linear(rng, n, 1.5);
      const IwasawaFactors f = iwasawa_nak(g);
      EXPECT_LE((f.product() - g.matrix()).norm() / g.matrix().norm(), 1e-10);
      EXPECT_LE((f.k.matrix() * f.k.matrix().transpose() - Matrix::Identity(n, n)).norm(), 1e-12);
      EXPECT_GT(f.k.matrix().determinant(), 0.0);
      EXPECT_NEAR(f.a.diag().prod(), 1.0, 1e-12);
    }
  }
}

TEST(Iwasawa, StronglyGradedInput) {
  // Row scales e^{+-30}: the small pivot must survive.
  Rng rng(11);
  const Matrix k = Eigen::HouseholderQR<Matrix>(rng.normal_matrix(3, 3)).householderQ();
  const Matrix g = diag3(std::exp(30.0), 1.0, std::exp(-30.0)) * (k.determinant() > 0 ? k : Matrix(-k));
  const IwasawaFactors f = iwasawa_nak(SpecialLinear::normalized(g));
  EXPECT_LE((f.product() - SpecialLinear::normalized(g).matrix()).norm() / g.norm(), 1e-10);
}

TEST(Nilpotent, LogOfIdentityIsZero) { EXPECT_EQ(nilpotent_log(UnitUpper::identity(4)).norm(), 0.0); }

TEST(Nilpotent, SingleTermInSL2) {
  Matrix u = Matrix::Identity(2, 2);
  u(0, 1) = 3.5;
  const Matrix l = nilpotent_log(UnitUpper(u));
  EXPECT_DOUBLE_EQ(l(0, 1), 3.5);
  EXPECT_EQ(l(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(d_N(UnitUpper(u)), 3.5);
}

TEST(Nilpotent, TwoTermSeriesInSL3) {
  const double x = 1.3, y = -0.7;
  Matrix u = Matrix::Identity(3, 3);
  u(0, 1) = x;
  u(1, 2) = y;
  const Matrix l = nilpotent_log(UnitUpper(u));
  EXPECT_NEAR(l(0, 1), x, 1e-15);
  EXPECT_NEAR(l(1, 2), y, 1e-15);
  EXPECT_NEAR(l(0, 2), -x * y / 2.0, 1e-15);
}

TEST(Nilpotent, ExpLogRoundTrip) {
  Rng rng(5);
  for (int s = 0; s < 100; ++s) {
    const UnitUpper u = random_unipotent(rng, 5, rng.uniform(0.0, 4.0));
    EXPECT_LE((nilpotent_exp(nilpotent_log(u)).matrix() - u.matrix()).norm(), 1e-11 * (1.0 + u.matrix().norm()));
  }
}

TEST(Nilpotent, DNInvariantUnderSignConjugation) {
  Rng rng(6);
  const Matrix m = diag3(1.0, -1.0, -1.0);
  for (int s = 0; s < 100; ++s) {
    const UnitUpper u = random_unipotent(rng, 3, rng.uniform(0.1, 5.0));
    EXPECT_NEAR(d_N(UnitUpper(m * u.matrix() * m.inverse())), d_N(u), 1e-12);
  }
}

TEST(Cartan, ConjugateByExpMatchesProduct) {
  Rng rng(8);
  Vector v(3);
  v << 1.0, 0.2, -1.2;
  const CartanVector cv = CartanVector::projected(v).unit();
  const UnitUpper u = random_unipotent(rng, 3, 2.0);
  for (double t = 0.0; t <= 10.0; t += 0.5) {
    const Matrix explicit_product = cv.exp_diag(-t) * u.matrix() * cv.exp_diag(t);
    const Matrix c = conjugate_by_exp(cv, t, u).matrix();
    EXPECT_LE((c - explicit_product).cwiseAbs().maxCoeff(), 1e-10) << "t=" << t;
  }
  EXPECT_EQ((conjugate_by_exp(cv, 0.0, u).matrix() - u.matrix()).norm(), 0.0);
}

TEST(Cartan, SL2SingleRootScaling) {
  Vector v(2);
  v << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  const CartanVector cv(v);
  Matrix u = Matrix::Identity(2, 2);
  u(0, 1) = 0.8;
  for (double t : {0.5, 2.0, 7.0})
    EXPECT_NEAR(conjugate_by_exp(cv, t, UnitUpper(u)).matrix()(0, 1), 0.8 * std::exp(-t * std::sqrt(2.0)), 1e-15);
}

TEST(Cartan, KappaValues) {
  Vector v3(3);
  v3 << 1.0, 0.0, -1.0;
  EXPECT_NEAR(kappa(CartanVector(v3 / std::sqrt(2.0))), 1.0 / std::sqrt(2.0), 1e-15);
  Vector v2(2);
  v2 << 1.0, -1.0;
  EXPECT_NEAR(kappa(CartanVector(v2 / std::sqrt(2.0))), std::sqrt(2.0), 1e-15);
  Vector bad(3);
  bad << 0.5, 0.5, -1.0;
  EXPECT_TRUE(throws_kind(ErrorKind::NotRegular, [&] { kappa(CartanVector(bad)); }));
}

TEST(Cartan, PositiveRootsAndExtremeRays) {
  for (int n = 2; n <= 6; ++n) {
    EXPECT_EQ(static_cast<int>(positive_roots(n).size()), n * (n - 1) / 2);
    const auto rays = chamber_extreme_rays(n);
    EXPECT_EQ(static_cast<int>(rays.size()), n - 1);
    for (const CartanVector& w : rays) {
      EXPECT_NEAR(w.norm(), 1.0, 1e-14);
      EXPECT_NEAR(w.values().sum(), 0.0, 1e-14);
      for (int i = 0; i + 1 < n; ++i) EXPECT_GE(w.values()(i), w.values()(i + 1) - 1e-15);
    }
    EXPECT_NEAR(longest_element(n).determinant(), 1.0, 1e-14);
  }
}

TEST(Validation, RejectsBadInputs) {
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidArgument, [] { SpecialLinear(diag3(2.0, 2.0, 2.0)); }));
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidArgument, [] { SpecialLinear(Matrix::Identity(1, 1)); }));
  Vector nz(3);
  nz << 1.0, 1.0, 1.0;
  EXPECT_ANY_THROW(CartanVector{nz});
}
