#pragma once

// X = SL(n, R) / SO(n) modeled by SPD matrices of determinant one.
//
// The metric is normalized so that t -> [g exp(tV)] has speed |V| (Frobenius),
// i.e. d([g], [h]) = sqrt(sum log^2 sigma_i(g^{-1} h))
//                  = 0.5 * sqrt(sum log^2 lambda_i(p^{-1} q)).

#include <optional>

#include "horolab/liecore.hpp"

namespace horolab {

/// Horospherical coordinates x = [n a] with respect to the standard chamber.
struct HoroCoords {
  UnitUpper n;
  PositiveDiagonal a;
  SpecialLinear group() const;  // n * a
};

class Point {
 public:
  static Point from_rep(const SpecialLinear& g);
  /// Validates symmetry, positivity and det 1.
  static Point from_spd(Matrix p, const NumericPolicy& policy = default_policy());

  const Matrix& spd() const noexcept { return p_; }
  int dim() const noexcept { return static_cast<int>(p_.rows()); }
  bool has_rep() const noexcept { return rep_.has_value(); }
  /// Throws MissingRepresentative.
  const SpecialLinear& rep() const;
  /// A representative: the stored one if present, else n*a from horo_coords.
  SpecialLinear any_rep() const;
  HoroCoords horo_coords() const;
  /// Left action g . x.
  Point translated(const SpecialLinear& g) const;

 private:
  Point(Matrix p, std::optional<SpecialLinear> rep) : p_(std::move(p)), rep_(std::move(rep)) {}
  Matrix p_;
  std::optional<SpecialLinear> rep_;
};

Point base_point(int n);

double distance(const Point& p, const Point& q);

/// [g exp(tV)] for the stored representative g.
Point geodesic(const Point& p, const CartanVector& v, double t);

/// Point at parameter s in [0, 1] on the geodesic segment from p to q.
Point geodesic_between(const Point& p, const Point& q, double s);

/// [g exp(Y)] for a trace-zero symmetric Y; lies at distance |Y| from p.
Point exp_offset(const Point& p, const Matrix& symmetric);

// ---------------------------------------------------------------- boundary

class BoundaryPoint {
 public:
  /// Direction must be a unit Cartan vector (InvalidDirection otherwise).
  BoundaryPoint(SpecialLinear frame, CartanVector direction);

  const SpecialLinear& frame() const noexcept { return frame_; }
  const CartanVector& direction() const noexcept { return dir_; }
  int dim() const noexcept { return frame_.dim(); }

  /// Equivalent pair (frame * s, sorted direction) with entries decreasing.
  BoundaryPoint sorted() const;
  /// Point [frame exp(t direction)].
  Point along(double t) const;

 private:
  SpecialLinear frame_;
  CartanVector dir_;
};

class Flat {
 public:
  explicit Flat(SpecialLinear frame) : frame_(std::move(frame)) {}
  static Flat standard(int n);

  const SpecialLinear& frame() const noexcept { return frame_; }
  int dim() const noexcept { return frame_.dim(); }
  /// [U exp(b)]
  Point point(const CartanVector& log_a) const;
  BoundaryPoint boundary_point(const CartanVector& unit_direction) const;

 private:
  SpecialLinear frame_;
};

class Ray {
 public:
  Ray(Point origin, SpecialLinear base, CartanVector direction)
      : origin_(std::move(origin)), base_(std::move(base)), dir_(std::move(direction)) {}
  Point operator()(double t) const;
  const Point& origin() const noexcept { return origin_; }
  const SpecialLinear& base() const noexcept { return base_; }
  const CartanVector& direction() const noexcept { return dir_; }

 private:
  Point origin_;
  SpecialLinear base_;
  CartanVector dir_;
};

/// Unit-speed ray from u asymptotic to sigma. Works for singular directions
/// too, since sigma carries the frame of a flat that contains it.
Ray ray_to_boundary(const Point& u, const BoundaryPoint& sigma);

struct BusemannConfig {
  CartanVector tau;  // unit, strictly decreasing

  /// Throws NotRegular / InvalidDirection.
  static BusemannConfig make(const Vector& tau_entries, const NumericPolicy& policy = default_policy());
};

/// h([n a k]) = <log a, V_tau>; h([e]) = 0 and h increases toward tau.
double busemann(const Point& x, const BusemannConfig& cfg);

/// Coordinates of sigma in the frame of E, or nullopt when sigma is not in E_infinity.
std::optional<CartanVector> flat_coordinates(const Flat& e, const BoundaryPoint& sigma,
                                             const NumericPolicy& policy = default_policy());

/// Angle between two points of the same flat boundary; NotInFlat otherwise.
double tits_angle_in_flat(const Flat& e, const BoundaryPoint& a, const BoundaryPoint& b);

/// Angle between unit Cartan vectors.
double cartan_angle(const CartanVector& a, const CartanVector& b);

/// Permutation matrix (det +1) sending the entries of v to decreasing order: v = P s P^T.
Matrix sorting_permutation(const Vector& v);

}  // namespace horolab
