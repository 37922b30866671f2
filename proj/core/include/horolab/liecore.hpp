#pragma once

// Matrix kernel for SL(n, R): Iwasawa factors, nilpotent logarithms, the
// diagonal Cartan subalgebra and its positive roots.
//
// Convention: the standard chamber corresponds to strictly decreasing Cartan
// vectors, N is the unit upper-triangular group, and g = n * a * k is obtained
// from the Householder QR factorization of g^{-1} = Q R as
// k = Q^T, a = diag(R)^{-1}, n = R^{-1} diag(R).

#include <vector>

#include <Eigen/Dense>

#include "horolab/policy.hpp"

namespace horolab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class SpecialLinear {
 public:
  /// Throws InvalidArgument unless square, n >= 2 and |det - 1| is within policy.
  explicit SpecialLinear(Matrix entries, const NumericPolicy& policy = default_policy());

  static SpecialLinear identity(int n);
  /// Rescales a nonsingular matrix to det 1, flipping the first column if det < 0.
  static SpecialLinear normalized(Matrix entries);

  const Matrix& matrix() const noexcept { return m_; }
  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  SpecialLinear inverse() const;
  friend SpecialLinear operator*(const SpecialLinear& a, const SpecialLinear& b);

 private:
  struct Unchecked {};
  SpecialLinear(Matrix entries, Unchecked) : m_(std::move(entries)) {}
  Matrix m_;
};

class UnitUpper {
 public:
  /// Requires exact unit diagonal and exact zeros below it.
  explicit UnitUpper(Matrix entries);
  /// Keeps the strictly upper part of `m` and writes 1 on the diagonal.
  static UnitUpper from_upper_part(const Matrix& m);
  static UnitUpper identity(int n);

  const Matrix& matrix() const noexcept { return m_; }
  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  UnitUpper inverse() const;
  friend UnitUpper operator*(const UnitUpper& a, const UnitUpper& b);

 private:
  Matrix m_;
};

class PositiveDiagonal {
 public:
  explicit PositiveDiagonal(Vector diag, const NumericPolicy& policy = default_policy());
  const Vector& diag() const noexcept { return d_; }
  Matrix matrix() const { return d_.asDiagonal(); }
  Vector log() const { return d_.array().log().matrix(); }

 private:
  Vector d_;
};

class Orthogonal {
 public:
  explicit Orthogonal(Matrix entries, const NumericPolicy& policy = default_policy());
  const Matrix& matrix() const noexcept { return m_; }

 private:
  Matrix m_;
};

struct IwasawaFactors {
  UnitUpper n;
  PositiveDiagonal a;
  Orthogonal k;
  double condition = 1.0;  // 2-norm condition estimate of the input

  Matrix product() const { return n.matrix() * a.matrix() * k.matrix(); }
};

/// Diagonal trace-zero element of the Cartan subalgebra.
class CartanVector {
 public:
  explicit CartanVector(Vector v, const NumericPolicy& policy = default_policy());
  /// Projects an arbitrary vector onto the trace-zero hyperplane.
  static CartanVector projected(const Vector& v);

  const Vector& values() const noexcept { return v_; }
  int dim() const noexcept { return static_cast<int>(v_.size()); }
  double norm() const { return v_.norm(); }
  CartanVector unit() const;
  double dot(const CartanVector& other) const { return v_.dot(other.v_); }
  /// True when entries are strictly decreasing by more than `gap`.
  bool is_regular_decreasing(double gap) const;
  /// exp of the diagonal matrix t * v.
  Matrix exp_diag(double t = 1.0) const;

 private:
  Vector v_;
};

struct Root {
  int i;
  int j;
  double operator()(const CartanVector& v) const { return v.values()(i) - v.values()(j); }
};

std::vector<Root> positive_roots(int n);

IwasawaFactors iwasawa_nak(const SpecialLinear& g, const NumericPolicy& policy = default_policy());

/// Finite series log(I + N) = N - N^2/2 + ... (at most n-1 terms).
Matrix nilpotent_log(const UnitUpper& u);
/// Finite series exp(X) for strictly upper-triangular X.
UnitUpper nilpotent_exp(const Matrix& x);

/// Frobenius norm of the logarithm; invariant under conjugation by M.
double d_N(const UnitUpper& u);

/// exp(-tV) u exp(tV): the (i, j) entry scales by exp(-t (v_i - v_j)).
UnitUpper conjugate_by_exp(const CartanVector& v, double t, const UnitUpper& u);

/// Minimum positive root value; throws NotRegular if v is not strictly decreasing.
double kappa(const CartanVector& v, const NumericPolicy& policy = default_policy());

/// Extreme rays (unit fundamental coweights) of the closed standard chamber.
std::vector<CartanVector> chamber_extreme_rays(int n);
/// Normalized sum of the unit extreme rays.
CartanVector chamber_barycenter(int n);

/// Antidiagonal permutation with sign fixed so that det = +1.
Matrix longest_element(int n);

}  // namespace horolab
