#pragma once

// Chambers at infinity as complete flags, opposition, and the shadow calculus.
//
// A chamber is stored through a frame whose column prefixes span its flag.
// The standard chamber has frame I and its standard opposite has frame
// longest_element(n). Chambers opposite the standard one are exactly
// u * longest_element(n) for a unique unit upper-triangular u.

#include <optional>
#include <vector>

#include "horolab/random.hpp"
#include "horolab/symspace.hpp"

namespace horolab {

class Chamber {
 public:
  /// Any nonsingular frame (rescaled to det 1).
  explicit Chamber(const Matrix& frame);
  explicit Chamber(SpecialLinear frame);
  static Chamber standard(int n);
  static Chamber standard_opposite(int n);
  /// The chamber u * standard_opposite.
  static Chamber from_unipotent(const UnitUpper& u);

  const SpecialLinear& frame() const noexcept { return frame_; }
  int dim() const noexcept { return frame_.dim(); }
  /// Set when the chamber is opposite the standard chamber.
  const std::optional<UnitUpper>& unipotent() const noexcept { return u_; }
  /// Smallest normalized transversality minor against the standard chamber.
  double standard_margin() const noexcept { return margin_; }

  Chamber translated(const SpecialLinear& g) const;
  /// Boundary point of this chamber with decreasing direction `v`.
  BoundaryPoint point(const CartanVector& v) const;
  BoundaryPoint barycenter() const;

 private:
  SpecialLinear frame_;
  std::optional<UnitUpper> u_;
  double margin_ = 0.0;
};

/// Throws NotOpposite if the chamber is not opposite the standard one.
UnitUpper canonical_unipotent(const Chamber& d);

bool same_chamber(const Chamber& a, const Chamber& b, double tol = 1e-8);

// ---------------------------------------------------------------- shadows

struct ShadowQuery {
  double rho;
  UnitUpper q;  // a^{-1} n^{-1} n_d a
};

ShadowQuery rho(const Point& x, const Chamber& d);
double rho_value(const Point& x, const Chamber& d);
inline bool in_shadow(const Point& x, const Chamber& d, double r = 1.0) { return rho_value(x, d) < r; }

/// E_d = [n_d A].
Flat chamber_flat(const Chamber& d);

/// [n a exp(tV)] for x = [n a]: the ray from x into the cone C_x.
Point push(const Point& x, const CartanVector& v, double t);

/// rho of d seen from push(x, v, t); closed form via root scaling.
double contract(const Point& x, const CartanVector& v, double t, const Chamber& d);

struct FlatProjection {
  double distance;
  Vector log_a;  // closest point is [U exp(log_a)]
  int iterations;
};

FlatProjection project_to_flat(const Point& x, const Flat& e, const NumericPolicy& policy = default_policy());
double distance_to_flat(const Point& x, const Flat& e);

class WeylChamberRegion {
 public:
  explicit WeylChamberRegion(const Point& x);
  const Point& base() const noexcept { return base_; }
  /// NA representative p with C_x = [p A+].
  const SpecialLinear& na() const noexcept { return na_; }

 private:
  Point base_;
  SpecialLinear na_;
};

FlatProjection project_to_weyl_chamber(const Point& y, const WeylChamberRegion& region,
                                       const NumericPolicy& policy = default_policy());
double distance_to_weyl_chamber(const Point& y, const WeylChamberRegion& region);
inline bool in_D(const Point& y, const WeylChamberRegion& region) { return distance_to_weyl_chamber(y, region) < 1.0; }

// ---------------------------------------------------------------- sampling

/// Unipotent with log entries uniform in [-1, 1], rescaled to d_N = target.
UnitUpper random_unipotent(Rng& rng, int n, double target);
/// Chamber d with rho_x(d) = r.
Chamber shadow_chamber(const Point& x, double r, Rng& rng);
/// Chamber d with rho_x(d) uniform in [0, r).
Chamber sample_shadow(const Point& x, double r, Rng& rng);
Chamber random_chamber(Rng& rng, int n);
SpecialLinear random_special_linear(Rng& rng, int n, double scale = 1.0);
/// Point within distance r of x (distance uniform in [0, r)).
Point sample_ball(const Point& x, double r, Rng& rng);
/// Point of D_x: a point of C_x offset by less than 1.
Point sample_D(const WeylChamberRegion& region, double spread, Rng& rng);

struct DxShadowReport {
  double max_rho = 0.0;
  int samples = 0;
};

/// Max of rho_y(d) over sampled y in D_x and d in S_x.
DxShadowReport verify_dx_shadows(const Point& x, int samples, double spread, Rng& rng);

/// push(x, v, c1 * (r + 1)).
Point enlarge(const Point& x, const CartanVector& v, double r, double c1);

struct EnlargeCheck {
  double max_rho = 0.0;       // max rho_{x'}(d) over sampled d in S_y
  double max_d_dist = 0.0;    // max d(x', C_y)
  bool ok() const { return max_rho < 1.0 && max_d_dist < 1.0; }
};

EnlargeCheck check_enlarge(const Point& x, const Point& x_prime, double r, int samples, Rng& rng);

/// Smallest t (bisection) with check_enlarge passing on a fixed sample set.
double minimal_enlarge_time(const Point& x, const CartanVector& v, double r, int samples, std::uint64_t seed);

// ---------------------------------------------------------------- opposition

/// Normalized transversality minors det[D_1..i | E_1..n-i] for i = 1..n-1.
Vector transversality_minors(const Chamber& d, const Chamber& e);
bool are_opposite(const Chamber& d, const Chamber& e, const NumericPolicy& policy = default_policy());

/// Flat whose boundary contains both chambers (opposite pair required).
/// The identity ordering of the frame gives d, the reversed ordering gives e.
Flat flat_spanned(const Chamber& d, const Chamber& e, const NumericPolicy& policy = default_policy());

/// The n! chambers U * P for permutation matrices P (det fixed to +1).
std::vector<Chamber> boundary_chambers(const Flat& e);
/// Chamber of the flat opposite `c` inside it (c must be a chamber of e).
Chamber opposite_in_flat(const Flat& e, const Chamber& c);

/// Common apartment: U, w with d = U b1 and e = U P_w b2 (b1, b2 upper).
struct Apartment {
  Matrix frame;             // U, det 1
  std::vector<int> perm;    // w as a permutation: column k of P_w is e_{perm[k]}
};
Apartment common_apartment(const Matrix& d_frame, const Matrix& e_frame);

/// Angle between two arbitrary boundary points through a common apartment.
double tits_angle(const BoundaryPoint& a, const BoundaryPoint& b);

/// Chamber of the sorted frame of sigma (a chamber whose closure contains sigma).
Chamber chamber_of(const BoundaryPoint& sigma);

// ---------------------------------------------------------------- opposite flats

Flat find_opposite_flat(const Chamber& c, int max_tries, Rng& rng, const NumericPolicy& policy = default_policy());

struct OppositeOptions {
  int samples = 64;                 // e in S_x used for certificates
  double certificate_margin = 1e-6; // absolute floor for the neighborhood minors
  double relative_margin = 0.5;     // neighborhood minors relative to the center value
  double push_safety = 4.0;         // rho reduction factor beyond the sampled worst case
  double target_safety = 1.5;       // same factor when certifying a finite set of chambers
  int flat_candidates = 16;         // keep the best-conditioned opposite flat
  double contract_margin = 0.5;     // extra time added after the radius bound
  int flat_tries = 200;
};

struct OppositeResult {
  Point x_prime;
  Chamber d;
  Chamber d_local;        // d seen from x: to_global^{-1} d
  Point x_local;          // to_global^{-1} x'
  SpecialLinear to_global; // NA representative of x
  double radius = 0.0;        // certified neighborhood radius r_U
  double contract_time = 0.0; // t with a = exp(-tV)
  double push_time = 0.0;     // s with x' = push(x, V, s)
  double min_minor = 0.0;     // worst transversality minor over the certificates
  double max_rho = 0.0;       // worst rho_{x'} over boundary chambers of sampled flats
};

/// Throws CalibrationFailure naming the failed post-condition.
OppositeResult opposite_chamber_for_shadow(const Point& x, const CartanVector& v, Rng& rng,
                                           const OppositeOptions& opts = {});
/// Same construction, certified only on a finite set of chambers of S_x.
OppositeResult opposite_chamber_for_chambers(const Point& x, const CartanVector& v, const std::vector<Chamber>& targets,
                                             Rng& rng, const OppositeOptions& opts = {});

}  // namespace horolab
