#include "horolab/liecore.hpp"

#include <cmath>
#include <vector>
#include <numeric>
#include <limits>
#include <sstream>

#include "horolab/error.hpp"

namespace horolab {

const NumericPolicy& default_policy() {
  static const NumericPolicy policy{};
  return policy;
}

// ---------------------------------------------------------------- SpecialLinear

SpecialLinear::SpecialLinear(Matrix entries, const NumericPolicy& policy) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols() || m_.rows() < 2)
    fail(ErrorKind::InvalidArgument, "SpecialLinear needs a square matrix of size >= 2");
  const double det = m_.determinant();
  if (!(std::abs(det - 1.0) <= policy.construction)) {
    std::ostringstream os;
    os << "determinant " << det << " is not 1";
    fail(ErrorKind::InvalidArgument, os.str());
  }
}

SpecialLinear SpecialLinear::identity(int n) {
  return SpecialLinear(Matrix::Identity(n, n), Unchecked{});
}

SpecialLinear SpecialLinear::normalized(Matrix entries) {
  if (entries.rows() != entries.cols() || entries.rows() < 2)
    fail(ErrorKind::InvalidArgument, "SpecialLinear needs a square matrix of size >= 2");
  double det = entries.determinant();
  if (!std::isfinite(det) || std::abs(det) < std::numeric_limits<double>::min())
    fail(ErrorKind::SingularInput, "cannot normalize a singular matrix");
  if (det < 0) {
    entries.col(0) *= -1.0;
    det = -det;
  }
  const double n = static_cast<double>(entries.rows());
  entries *= std::pow(det, -1.0 / n);
  return SpecialLinear(std::move(entries), Unchecked{});
}

SpecialLinear SpecialLinear::inverse() const {
  return SpecialLinear(m_.partialPivLu().inverse(), Unchecked{});
}

SpecialLinear operator*(const SpecialLinear& a, const SpecialLinear& b) {
  return SpecialLinear(a.m_ * b.m_, SpecialLinear::Unchecked{});
}

// ---------------------------------------------------------------- UnitUpper

UnitUpper::UnitUpper(Matrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1)
    fail(ErrorKind::InvalidArgument, "UnitUpper needs a square matrix");
  for (int i = 0; i < m_.rows(); ++i) {
    if (m_(i, i) != 1.0) fail(ErrorKind::InvalidArgument, "UnitUpper diagonal must be exactly 1");
    for (int j = 0; j < i; ++j)
      if (m_(i, j) != 0.0) fail(ErrorKind::InvalidArgument, "UnitUpper lower part must be exactly 0");
  }
}

UnitUpper UnitUpper::from_upper_part(const Matrix& m) {
  Matrix u = m.triangularView<Eigen::StrictlyUpper>();
  u.diagonal().setOnes();
  return UnitUpper(std::move(u));
}

UnitUpper UnitUpper::identity(int n) { return UnitUpper(Matrix::Identity(n, n)); }

UnitUpper UnitUpper::inverse() const {
  const int n = dim();
  Matrix inv = m_.triangularView<Eigen::UnitUpper>().solve(Matrix::Identity(n, n));
  return from_upper_part(inv);
}

UnitUpper operator*(const UnitUpper& a, const UnitUpper& b) {
  return UnitUpper::from_upper_part(a.m_ * b.m_);
}

// ---------------------------------------------------------------- A, K

PositiveDiagonal::PositiveDiagonal(Vector diag, const NumericPolicy& policy) : d_(std::move(diag)) {
  if ((d_.array() <= 0.0).any()) fail(ErrorKind::InvalidArgument, "diagonal entries must be positive");
  const double logprod = d_.array().log().sum();
  if (!(std::abs(logprod) <= policy.construction))
    fail(ErrorKind::InvalidArgument, "diagonal product must be 1");
}

Orthogonal::Orthogonal(Matrix entries, const NumericPolicy& policy) : m_(std::move(entries)) {
  const int n = static_cast<int>(m_.rows());
  if ((m_ * m_.transpose() - Matrix::Identity(n, n)).norm() > policy.construction)
    fail(ErrorKind::InvalidArgument, "matrix is not orthogonal");
  if (m_.determinant() < 0) fail(ErrorKind::InvalidArgument, "orthogonal factor must have det +1");
}

// ---------------------------------------------------------------- Cartan

CartanVector::CartanVector(Vector v, const NumericPolicy& policy) : v_(std::move(v)) {
  if (v_.size() < 2) fail(ErrorKind::InvalidArgument, "Cartan vector needs n >= 2");
  if (!(std::abs(v_.sum()) <= policy.cartan_trace * std::max(1.0, v_.norm())))
    fail(ErrorKind::InvalidArgument, "Cartan vector must have trace zero");
}

CartanVector CartanVector::projected(const Vector& v) {
  Vector w = v.array() - v.mean();
  return CartanVector(std::move(w));
}

CartanVector CartanVector::unit() const {
  const double nrm = v_.norm();
  if (nrm == 0.0) fail(ErrorKind::InvalidDirection, "zero Cartan vector has no direction");
  return CartanVector(v_ / nrm);
}

bool CartanVector::is_regular_decreasing(double gap) const {
  for (int i = 0; i + 1 < v_.size(); ++i)
    if (v_(i) - v_(i + 1) <= gap) return false;
  return true;
}

Matrix CartanVector::exp_diag(double t) const {
  return (t * v_).array().exp().matrix().asDiagonal();
}

std::vector<Root> positive_roots(int n) {
  std::vector<Root> roots;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) roots.push_back({i, j});
  return roots;
}

// ---------------------------------------------------------------- Iwasawa

IwasawaFactors iwasawa_nak(const SpecialLinear& g, const NumericPolicy& policy) {
  const int n = g.dim();
  const Matrix& m = g.matrix();
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  const double cond = sv(n - 1) > 0 ? sv(0) / sv(n - 1) : std::numeric_limits<double>::infinity();

  const Matrix ginv = m.partialPivLu().inverse();
  // Rows in decreasing norm keep Householder QR accurate on strongly row-scaled inputs;
  // the permutation is absorbed into the orthogonal factor.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const Vector row_norms = ginv.rowwise().norm();
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return row_norms(a) > row_norms(b); });
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(n);
  for (int i = 0; i < n; ++i) perm.indices()(i) = order[i];
  Eigen::HouseholderQR<Matrix> qr(perm.transpose() * ginv);
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  Matrix q = perm * Matrix(qr.householderQ());
  for (int i = 0; i < n; ++i) {
    if (!(std::abs(r(i, i)) > std::numeric_limits<double>::min() * 1e4) || !std::isfinite(r(i, i)))
      fail(ErrorKind::SingularInput, "Iwasawa pivot underflow");
    if (r(i, i) < 0) {
      r.row(i) *= -1.0;
      q.col(i) *= -1.0;
    }
  }
  Vector adiag = r.diagonal().cwiseInverse();
  // n = R^{-1} diag(R): solve R X = diag(R)
  Matrix nmat = r.triangularView<Eigen::Upper>().solve(Matrix(r.diagonal().asDiagonal()));
  // absorb rounding of det into a so the product is exactly representable as det 1
  adiag /= std::exp(adiag.array().log().mean());
  return IwasawaFactors{UnitUpper::from_upper_part(nmat), PositiveDiagonal(adiag, policy),
                        Orthogonal(q.transpose(), policy), cond};
}

// ---------------------------------------------------------------- nilpotent series

Matrix nilpotent_log(const UnitUpper& u) {
  const int n = u.dim();
  const Matrix x = u.matrix() - Matrix::Identity(n, n);
  Matrix result = Matrix::Zero(n, n);
  Matrix power = x;
  for (int k = 1; k < n; ++k) {
    result += ((k % 2 == 1) ? 1.0 : -1.0) / k * power;
    power = power * x;
  }
  return result.triangularView<Eigen::StrictlyUpper>();
}

UnitUpper nilpotent_exp(const Matrix& x) {
  const int n = static_cast<int>(x.rows());
  const Matrix strict = x.triangularView<Eigen::StrictlyUpper>();
  Matrix result = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k < n; ++k) {
    term = term * strict / static_cast<double>(k);
    result += term;
  }
  return UnitUpper::from_upper_part(result);
}

double d_N(const UnitUpper& u) { return nilpotent_log(u).norm(); }

UnitUpper conjugate_by_exp(const CartanVector& v, double t, const UnitUpper& u) {
  const int n = u.dim();
  Matrix m = u.matrix();
  const Vector& vals = v.values();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m(i, j) *= std::exp(-t * (vals(i) - vals(j)));
  return UnitUpper(std::move(m));
}

double kappa(const CartanVector& v, const NumericPolicy& policy) {
  if (!v.is_regular_decreasing(policy.regularity))
    fail(ErrorKind::NotRegular, "Cartan vector is not regular in the standard chamber");
  double best = std::numeric_limits<double>::infinity();
  for (const Root& r : positive_roots(v.dim())) best = std::min(best, r(v));
  return best;
}

std::vector<CartanVector> chamber_extreme_rays(int n) {
  std::vector<CartanVector> rays;
  for (int k = 1; k < n; ++k) {
    Vector w(n);
    for (int i = 0; i < n; ++i) w(i) = (i < k) ? static_cast<double>(n - k) : -static_cast<double>(k);
    rays.push_back(CartanVector(w / w.norm()));
  }
  return rays;
}

CartanVector chamber_barycenter(int n) {
  Vector sum = Vector::Zero(n);
  for (const auto& ray : chamber_extreme_rays(n)) sum += ray.values();
  return CartanVector::projected(sum).unit();
}

Matrix longest_element(int n) {
  Matrix j = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) j(n - 1 - i, i) = 1.0;
  if (j.determinant() < 0) j.col(0) *= -1.0;
  return j;
}

}  // namespace horolab
