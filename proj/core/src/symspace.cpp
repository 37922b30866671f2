#include "horolab/symspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "horolab/error.hpp"

namespace horolab {

namespace {

Matrix reversal(int n) {
  Matrix r = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) r(n - 1 - i, i) = 1.0;
  return r;
}

// p = n a^2 n^T with n unit upper; LDL^T of the index-reversed matrix.
HoroCoords horo_from_spd(const Matrix& p) {
  const int n = static_cast<int>(p.rows());
  const Matrix r = reversal(n);
  const Matrix s = r * p * r;
  Matrix l = Matrix::Identity(n, n);
  Vector d(n);
  for (int j = 0; j < n; ++j) {
    double dj = s(j, j);
    for (int k = 0; k < j; ++k) dj -= l(j, k) * l(j, k) * d(k);
    if (!(dj > 0.0)) fail(ErrorKind::NumericalFailure, "matrix is not positive definite");
    d(j) = dj;
    for (int i = j + 1; i < n; ++i) {
      double v = s(i, j);
      for (int k = 0; k < j; ++k) v -= l(i, k) * l(j, k) * d(k);
      l(i, j) = v / dj;
    }
  }
  Matrix nmat = r * l * r;
  Vector a = (r * d).array().sqrt().matrix();
  a /= std::exp(a.array().log().mean());
  return HoroCoords{UnitUpper::from_upper_part(nmat), PositiveDiagonal(a)};
}

Matrix symmetric_exp(const Matrix& y) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (y + y.transpose()));
  return es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace

SpecialLinear HoroCoords::group() const {
  return SpecialLinear::normalized(n.matrix() * a.matrix());
}

// ---------------------------------------------------------------- Point

Point Point::from_rep(const SpecialLinear& g) {
  Matrix p = g.matrix() * g.matrix().transpose();
  p = 0.5 * (p + p.transpose()).eval();
  return Point(std::move(p), g);
}

Point Point::from_spd(Matrix p, const NumericPolicy& policy) {
  if (p.rows() != p.cols() || p.rows() < 2) fail(ErrorKind::InvalidArgument, "point needs a square SPD matrix");
  const double scale = std::max(1.0, p.norm());
  if ((p - p.transpose()).norm() > 1e-10 * scale) fail(ErrorKind::InvalidArgument, "point matrix is not symmetric");
  p = 0.5 * (p + p.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(p, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorKind::NumericalFailure, "eigensolver failed");
  if ((es.eigenvalues().array() <= 0.0).any()) fail(ErrorKind::InvalidArgument, "point matrix is not positive definite");
  if (std::abs(es.eigenvalues().array().log().sum()) > policy.construction)
    fail(ErrorKind::InvalidArgument, "point matrix must have determinant 1");
  return Point(std::move(p), std::nullopt);
}

const SpecialLinear& Point::rep() const {
  if (!rep_) fail(ErrorKind::MissingRepresentative, "point carries no group representative");
  return *rep_;
}

SpecialLinear Point::any_rep() const { return rep_ ? *rep_ : horo_coords().group(); }

HoroCoords Point::horo_coords() const {
  if (rep_) {
    IwasawaFactors f = iwasawa_nak(*rep_);
    return HoroCoords{std::move(f.n), std::move(f.a)};
  }
  return horo_from_spd(p_);
}

Point Point::translated(const SpecialLinear& g) const {
  if (rep_) return from_rep(g * *rep_);
  Matrix p = g.matrix() * p_ * g.matrix().transpose();
  return Point(0.5 * (p + p.transpose()), std::nullopt);
}

Point base_point(int n) { return Point::from_rep(SpecialLinear::identity(n)); }

namespace {

// One-sided Jacobi: keeps relative accuracy of every singular value when the
// input is a well-conditioned matrix times a badly scaled diagonal.
Vector graded_singular_values(Matrix a) {
  const int n = static_cast<int>(a.cols());
  for (int sweep = 0; sweep < 80; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double al = a.col(p).squaredNorm();
        const double be = a.col(q).squaredNorm();
        const double ga = a.col(p).dot(a.col(q));
        if (!(al > 0.0) || !(be > 0.0) || ga == 0.0) continue;
        const double c0 = std::abs(ga) / (std::sqrt(al) * std::sqrt(be));
        off = std::max(off, c0);
        if (c0 < 1e-17) continue;
        const double zeta = (be - al) / (2.0 * ga);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = c * t;
        const Vector cp = a.col(p);
        a.col(p) = c * cp - sn * a.col(q);
        a.col(q) = sn * cp + c * a.col(q);
      }
    if (off < 1e-16) break;
  }
  return a.colwise().norm().transpose();
}

}  // namespace

double distance(const Point& p, const Point& q) {
  const Matrix m = p.any_rep().matrix().partialPivLu().solve(q.any_rep().matrix());
  const Vector s = graded_singular_values(m);
  if (!(s.minCoeff() > 0.0) || !s.allFinite()) fail(ErrorKind::NumericalFailure, "degenerate singular values");
  return s.array().log().matrix().norm();
}

Point geodesic(const Point& p, const CartanVector& v, double t) {
  return Point::from_rep(SpecialLinear::normalized(p.rep().matrix() * v.exp_diag(t)));
}

Point geodesic_between(const Point& p, const Point& q, double s) {
  if (s == 0.0) return p;
  if (s == 1.0) return q;
  const Matrix g = p.any_rep().matrix();
  const Matrix m = g.partialPivLu().solve(q.any_rep().matrix());
  // [q] = [g U Sigma] for m = U Sigma V^T; the SVD avoids squaring the condition number.
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU);
  const Vector& sv = svd.singularValues();
  if (!(sv.minCoeff() > 0.0) || !sv.allFinite()) fail(ErrorKind::NumericalFailure, "degenerate singular values");
  Matrix u = svd.matrixU();
  if (u.determinant() < 0) u.col(0) *= -1.0;
  const Vector scaled = (s * sv.array().log()).exp().matrix();
  return Point::from_rep(SpecialLinear::normalized(g * u * scaled.asDiagonal()));
}

Point exp_offset(const Point& p, const Matrix& symmetric) {
  Matrix y = 0.5 * (symmetric + symmetric.transpose());
  y.diagonal().array() -= y.trace() / static_cast<double>(y.rows());
  return Point::from_rep(SpecialLinear::normalized(p.any_rep().matrix() * symmetric_exp(y)));
}

// ---------------------------------------------------------------- boundary

Matrix sorting_permutation(const Vector& v) {
  const int n = static_cast<int>(v.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return v(a) > v(b); });
  Matrix p = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) p(order[k], k) = 1.0;
  if (p.determinant() < 0) p.col(0) *= -1.0;
  return p;
}

BoundaryPoint::BoundaryPoint(SpecialLinear frame, CartanVector direction)
    : frame_(std::move(frame)), dir_(std::move(direction)) {
  if (frame_.dim() != dir_.dim()) fail(ErrorKind::InvalidArgument, "frame and direction dimensions differ");
  if (std::abs(dir_.norm() - 1.0) > 1e-9) fail(ErrorKind::InvalidDirection, "boundary direction must be a unit vector");
}

BoundaryPoint BoundaryPoint::sorted() const {
  const Matrix p = sorting_permutation(dir_.values());
  Vector s = p.cwiseAbs().transpose() * dir_.values();
  return BoundaryPoint(SpecialLinear::normalized(frame_.matrix() * p), CartanVector::projected(s));
}

Point BoundaryPoint::along(double t) const {
  return Point::from_rep(SpecialLinear::normalized(frame_.matrix() * dir_.exp_diag(t)));
}

Flat Flat::standard(int n) { return Flat(SpecialLinear::identity(n)); }

Point Flat::point(const CartanVector& log_a) const {
  return Point::from_rep(SpecialLinear::normalized(frame_.matrix() * log_a.exp_diag(1.0)));
}

BoundaryPoint Flat::boundary_point(const CartanVector& unit_direction) const {
  return BoundaryPoint(frame_, unit_direction);
}

Point Ray::operator()(double t) const {
  if (t == 0.0) return origin_;
  return Point::from_rep(SpecialLinear::normalized(base_.matrix() * dir_.exp_diag(t)));
}

Ray ray_to_boundary(const Point& u, const BoundaryPoint& sigma) {
  const BoundaryPoint s = sigma.sorted();
  const Matrix& f = s.frame().matrix();
  const SpecialLinear y = SpecialLinear::normalized(f.partialPivLu().solve(u.any_rep().matrix()));
  const IwasawaFactors iw = iwasawa_nak(y);
  SpecialLinear base = SpecialLinear::normalized(f * iw.n.matrix() * iw.a.matrix());
  return Ray(u, std::move(base), s.direction());
}

BusemannConfig BusemannConfig::make(const Vector& tau_entries, const NumericPolicy& policy) {
  const CartanVector raw = CartanVector::projected(tau_entries);
  if (std::abs(tau_entries.sum()) > 1e-9 * std::max(1.0, tau_entries.norm()))
    fail(ErrorKind::InvalidArgument, "tau must have trace zero");
  const CartanVector tau = raw.unit();
  if (!tau.is_regular_decreasing(policy.regularity))
    fail(ErrorKind::NotRegular, "tau must be strictly decreasing (interior of the standard chamber)");
  return BusemannConfig{tau};
}

double busemann(const Point& x, const BusemannConfig& cfg) {
  return x.horo_coords().a.log().dot(cfg.tau.values());
}

std::optional<CartanVector> flat_coordinates(const Flat& e, const BoundaryPoint& sigma, const NumericPolicy& policy) {
  const int n = e.dim();
  const BoundaryPoint s = sigma.sorted();
  const Vector& sv = s.direction().values();
  std::vector<int> block(n, 0);
  for (int i = 1; i < n; ++i) block[i] = block[i - 1] + ((sv(i - 1) - sv(i) > policy.regularity) ? 1 : 0);

  Matrix m = e.frame().matrix().partialPivLu().solve(s.frame().matrix());
  for (int j = 0; j < n; ++j) m.col(j).normalize();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    // b = P^T m where P e_k = e_{perm[k]}: row k of b is row perm[k] of m
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = 0; j < n && ok; ++j)
        if (block[i] > block[j] && std::abs(m(perm[i], j)) > policy.membership) ok = false;
    if (ok) {
      Vector w(n);
      for (int k = 0; k < n; ++k) w(perm[k]) = sv(k);
      return CartanVector::projected(w);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

double cartan_angle(const CartanVector& a, const CartanVector& b) {
  const double c = a.values().dot(b.values()) / (a.norm() * b.norm());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double tits_angle_in_flat(const Flat& e, const BoundaryPoint& a, const BoundaryPoint& b) {
  const auto wa = flat_coordinates(e, a);
  const auto wb = flat_coordinates(e, b);
  if (!wa || !wb) fail(ErrorKind::NotInFlat, "boundary point is not in the boundary of the flat");
  return cartan_angle(*wa, *wb);
}

}  // namespace horolab
