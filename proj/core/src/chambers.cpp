#include "horolab/chambers.hpp"

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

// Orthonormal frame with the same flag (QR with positive diagonal).
Matrix flag_basis(const Matrix& f) {
  Eigen::HouseholderQR<Matrix> qr(f);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (int j = 0; j < f.cols(); ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  return q;
}

Matrix permutation_matrix(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  Matrix p = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) p(perm[k], k) = 1.0;
  return p;
}

struct LuResult {
  Matrix lower;
  double margin;
  bool ok;
  double pivot_ratio = 0.0;  // min |pivot| / norm of the eliminated column
};

// LU without pivoting; margin is the smallest |leading minor| of orders 1..n-1.
LuResult lu_no_pivot(Matrix a) {
  const int n = static_cast<int>(a.rows());
  Matrix l = Matrix::Identity(n, n);
  double minor = 1.0;
  double margin = std::numeric_limits<double>::infinity();
  double ratio = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n - 1; ++k) {
    const double piv = a(k, k);
    const double cn = a.col(k).tail(n - k).norm();
    ratio = std::min(ratio, cn > 0.0 ? std::abs(piv) / cn : 0.0);
    minor *= piv;
    margin = std::min(margin, std::abs(minor));
    if (std::abs(piv) < 1e-300) return {l, 0.0, false};
    for (int i = k + 1; i < n; ++i) {
      const double f = a(i, k) / piv;
      l(i, k) = f;
      a.row(i).tail(n - k) -= f * a.row(k).tail(n - k);
    }
  }
  return {l, margin, true, ratio};
}

// Euclidean projection onto {b decreasing, sum b = 0}.
Vector project_decreasing(const Vector& v) {
  Vector w = v.array() - v.mean();
  std::vector<double> sums;
  std::vector<int> counts;
  for (int i = 0; i < w.size(); ++i) {
    sums.push_back(w(i));
    counts.push_back(1);
    while (sums.size() > 1) {
      const std::size_t m = sums.size();
      if (sums[m - 2] / counts[m - 2] >= sums[m - 1] / counts[m - 1]) break;
      sums[m - 2] += sums[m - 1];
      counts[m - 2] += counts[m - 1];
      sums.pop_back();
      counts.pop_back();
    }
  }
  Vector out(w.size());
  int idx = 0;
  for (std::size_t b = 0; b < sums.size(); ++b)
    for (int c = 0; c < counts[b]; ++c) out(idx++) = sums[b] / counts[b];
  return out;
}

Vector project_trace_zero(const Vector& v) { return v.array() - v.mean(); }

// f(b) = d([exp b], [g])^2 and its gradient.
double objective(const Matrix& g, const Vector& b, Vector* grad) {
  const Matrix m = (-b).array().exp().matrix().asDiagonal() * g;
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU);
  const Vector ls = svd.singularValues().array().log().matrix();
  if (grad) {
    const Matrix& u = svd.matrixU();
    *grad = -2.0 * (u.array().square().matrix() * ls);
  }
  return ls.squaredNorm();
}

template <class Proj>
FlatProjection descend(const Matrix& g, Vector b, Proj proj, const NumericPolicy& policy) {
  b = proj(b);
  Vector grad;
  double f = objective(g, b, &grad);
  double step = 0.5;
  int it = 0;
  double pg = 0.0;
  Vector prev_b, prev_grad;
  for (; it < 4000; ++it) {
    pg = (b - proj(b - grad)).norm();
    if (pg < policy.flat_descent * std::max(1.0, std::sqrt(f))) break;
    double s = step;
    Vector nb;
    Vector ngrad;
    double nf = 0.0;
    for (int bt = 0; bt < 60; ++bt) {
      nb = proj(b - s * grad);
      nf = objective(g, nb, &ngrad);
      if (nf <= f - 1e-4 * grad.dot(b - nb) || (b - nb).norm() < 1e-16) break;
      s *= 0.5;
    }
    const Vector sb = nb - b;
    const Vector sy = ngrad - grad;
    const double sty = sb.dot(sy);
    step = (sty > 1e-300) ? std::clamp(sb.squaredNorm() / sty, 1e-6, 1e6) : 1.0;
    if (sb.norm() < 1e-16) {
      b = nb;
      f = nf;
      grad = ngrad;
      pg = (b - proj(b - grad)).norm();
      break;
    }
    b = nb;
    f = nf;
    grad = ngrad;
  }
  if (pg > 1e-6 * std::max(1.0, std::sqrt(f))) fail(ErrorKind::NonConvergence, "distance descent stalled");
  return FlatProjection{std::sqrt(std::max(f, 0.0)), b, it};
}

template <class Proj>
FlatProjection multistart(const Matrix& g, const Vector& guess, int starts, Proj proj, const NumericPolicy& policy) {
  Rng rng(0x5eedULL);
  FlatProjection best = descend(g, guess, proj, policy);
  for (int s = 1; s < starts; ++s) {
    const Vector b0 = guess + rng.normal_vector(static_cast<int>(guess.size()));
    FlatProjection r = descend(g, b0, proj, policy);
    if (r.distance < best.distance) best = r;
  }
  return best;
}

}  // namespace

// ---------------------------------------------------------------- Chamber

Chamber::Chamber(const Matrix& frame) : Chamber(SpecialLinear::normalized(frame)) {}

Chamber::Chamber(SpecialLinear frame) : frame_(std::move(frame)) {
  const int n = frame_.dim();
  const Matrix r = reversal(n);
  const Matrix q = flag_basis(frame_.matrix());
  const LuResult lu = lu_no_pivot(r * q);
  margin_ = lu.ok ? lu.margin : 0.0;
  // The unipotent comes from the raw frame: elimination on it is exact for u * w0 * b, so chambers
  // far from the base point keep their coordinates.
  const Matrix raw = r * frame_.matrix();
  const LuResult lr = lu_no_pivot(raw);
  if (lu.ok && lr.ok && lr.pivot_ratio > default_policy().pivot_margin) u_ = UnitUpper::from_upper_part(r * lr.lower * r);
}

Chamber Chamber::standard(int n) { return Chamber(SpecialLinear::identity(n)); }

Chamber Chamber::standard_opposite(int n) { return Chamber(SpecialLinear::normalized(longest_element(n))); }

Chamber Chamber::from_unipotent(const UnitUpper& u) {
  Chamber c(SpecialLinear::normalized(u.matrix() * longest_element(u.dim())));
  c.u_ = u;
  return c;
}

Chamber Chamber::translated(const SpecialLinear& g) const { return Chamber(SpecialLinear::normalized(g.matrix() * frame_.matrix())); }

BoundaryPoint Chamber::point(const CartanVector& v) const { return BoundaryPoint(frame_, v); }

BoundaryPoint Chamber::barycenter() const { return point(chamber_barycenter(dim())); }

UnitUpper canonical_unipotent(const Chamber& d) {
  if (!d.unipotent()) fail(ErrorKind::NotOpposite, "chamber is not opposite the standard chamber");
  return *d.unipotent();
}

bool same_chamber(const Chamber& a, const Chamber& b, double tol) {
  const int n = a.dim();
  const Matrix qa = flag_basis(a.frame().matrix());
  const Matrix qb = flag_basis(b.frame().matrix());
  for (int i = 1; i < n; ++i) {
    const Matrix pa = qa.leftCols(i);
    const Matrix pb = qb.leftCols(i);
    if ((pa - pb * (pb.transpose() * pa)).norm() > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------- shadows

ShadowQuery rho(const Point& x, const Chamber& d) {
  const UnitUpper nd = canonical_unipotent(d);
  const HoroCoords hc = x.horo_coords();
  Matrix m = hc.n.inverse().matrix() * nd.matrix();
  const Vector& a = hc.a.diag();
  const int n = static_cast<int>(a.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m(i, j) *= a(j) / a(i);
  UnitUpper q = UnitUpper::from_upper_part(m);
  const double r = d_N(q);
  return ShadowQuery{r, std::move(q)};
}

double rho_value(const Point& x, const Chamber& d) { return rho(x, d).rho; }

Flat chamber_flat(const Chamber& d) { return Flat(SpecialLinear(canonical_unipotent(d).matrix())); }

Point push(const Point& x, const CartanVector& v, double t) {
  const HoroCoords hc = x.horo_coords();
  return Point::from_rep(SpecialLinear::normalized(hc.n.matrix() * hc.a.matrix() * v.exp_diag(t)));
}

double contract(const Point& x, const CartanVector& v, double t, const Chamber& d) {
  kappa(v);
  return d_N(conjugate_by_exp(v, t, rho(x, d).q));
}

FlatProjection project_to_flat(const Point& x, const Flat& e, const NumericPolicy& policy) {
  const Matrix g = e.frame().matrix().partialPivLu().solve(x.any_rep().matrix());
  const Point y = Point::from_rep(SpecialLinear::normalized(g));
  const Vector guess = y.horo_coords().a.log();
  return multistart(g, guess, 8, project_trace_zero, policy);
}

double distance_to_flat(const Point& x, const Flat& e) { return project_to_flat(x, e).distance; }

WeylChamberRegion::WeylChamberRegion(const Point& x) : base_(x), na_(x.horo_coords().group()) {}

FlatProjection project_to_weyl_chamber(const Point& y, const WeylChamberRegion& region, const NumericPolicy& policy) {
  const Matrix g = region.na().matrix().partialPivLu().solve(y.any_rep().matrix());
  const Point z = Point::from_rep(SpecialLinear::normalized(g));
  const Vector guess = project_decreasing(z.horo_coords().a.log());
  return multistart(g, guess, 3, project_decreasing, policy);
}

double distance_to_weyl_chamber(const Point& y, const WeylChamberRegion& region) {
  return project_to_weyl_chamber(y, region).distance;
}

// ---------------------------------------------------------------- sampling

UnitUpper random_unipotent(Rng& rng, int n, double target) {
  Matrix x = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) x(i, j) = rng.uniform(-1.0, 1.0);
  const double norm = x.norm();
  if (target <= 0.0 || norm == 0.0) return UnitUpper::identity(n);
  return nilpotent_exp(x * (target / norm));
}

Chamber shadow_chamber(const Point& x, double r, Rng& rng) {
  const HoroCoords hc = x.horo_coords();
  const int n = x.dim();
  Matrix q = random_unipotent(rng, n, r).matrix();
  const Vector& a = hc.a.diag();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) q(i, j) *= a(i) / a(j);
  return Chamber::from_unipotent(UnitUpper::from_upper_part(hc.n.matrix() * q));
}

Chamber sample_shadow(const Point& x, double r, Rng& rng) { return shadow_chamber(x, r * rng.uniform(), rng); }

Chamber random_chamber(Rng& rng, int n) { return Chamber(random_special_linear(rng, n)); }

SpecialLinear random_special_linear(Rng& rng, int n, double scale) {
  for (;;) {
    Matrix m = Matrix::Identity(n, n) * (scale < 1.0 ? 1.0 - scale : 0.0) + scale * rng.normal_matrix(n, n);
    if (std::abs(m.determinant()) > 1e-2 * std::pow(scale, n)) return SpecialLinear::normalized(m);
  }
}

Point sample_ball(const Point& x, double r, Rng& rng) {
  const int n = x.dim();
  Matrix y = rng.normal_matrix(n, n);
  y = 0.5 * (y + y.transpose()).eval();
  y.diagonal().array() -= y.trace() / n;
  const double norm = y.norm();
  if (norm == 0.0) return x;
  return exp_offset(x, y * (r * rng.uniform() / norm));
}

Point sample_D(const WeylChamberRegion& region, double spread, Rng& rng) {
  const int n = region.na().dim();
  Vector b = rng.normal_vector(n) * spread;
  b = b.array() - b.mean();
  std::sort(b.data(), b.data() + n, std::greater<double>());
  const Point c = Point::from_rep(SpecialLinear::normalized(region.na().matrix() * b.array().exp().matrix().asDiagonal()));
  return sample_ball(c, 0.999, rng);
}

DxShadowReport verify_dx_shadows(const Point& x, int samples, double spread, Rng& rng) {
  DxShadowReport rep;
  const WeylChamberRegion region(x);
  for (int s = 0; s < samples; ++s) {
    const Point y = s == 0 ? x : sample_D(region, spread, rng);
    const Chamber d = sample_shadow(x, 1.0, rng);
    rep.max_rho = std::max(rep.max_rho, rho_value(y, d));
    ++rep.samples;
  }
  return rep;
}

Point enlarge(const Point& x, const CartanVector& v, double r, double c1) { return push(x, v, c1 * (r + 1.0)); }

EnlargeCheck check_enlarge(const Point& x, const Point& x_prime, double r, int samples, Rng& rng) {
  EnlargeCheck chk;
  // Flat directions through x first (the far side of the chamber is the worst case),
  // then random points, half of them on the sphere of radius r.
  std::vector<Point> fixed{x};
  if (r > 0.0)
    for (const CartanVector& w : chamber_extreme_rays(x.dim()))
      for (double sgn : {-1.0, 1.0}) fixed.push_back(push(x, w.unit(), sgn * r));
  auto on_sphere = [&] {
    const int n = x.dim();
    Matrix m = rng.normal_matrix(n, n);
    m = 0.5 * (m + m.transpose()).eval();
    m.diagonal().array() -= m.trace() / n;
    return exp_offset(x, m * (r / m.norm()));
  };
  for (int s = 0; s < samples; ++s) {
    const Point y = s < static_cast<int>(fixed.size()) ? fixed[s] : s % 2 ? sample_ball(x, r, rng) : on_sphere();
    const Chamber d = s % 2 == 0 ? shadow_chamber(y, 0.999, rng) : sample_shadow(y, 1.0, rng);
    chk.max_rho = std::max(chk.max_rho, rho_value(x_prime, d));
    chk.max_d_dist = std::max(chk.max_d_dist, distance_to_weyl_chamber(x_prime, WeylChamberRegion(y)));
  }
  return chk;
}

double minimal_enlarge_time(const Point& x, const CartanVector& v, double r, int samples, std::uint64_t seed) {
  auto passes = [&](double t) {
    Rng rng(seed);
    return check_enlarge(x, push(x, v, t), r, samples, rng).ok();
  };
  double hi = 1.0;
  while (!passes(hi)) {
    hi *= 2.0;
    if (hi > 1e4) fail(ErrorKind::CalibrationFailure, "no enlargement time found");
  }
  double lo = 0.0;
  if (passes(lo)) return 0.0;
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    (passes(mid) ? hi : lo) = mid;
  }
  return hi;
}

// ---------------------------------------------------------------- opposition

Vector transversality_minors(const Chamber& d, const Chamber& e) {
  const int n = d.dim();
  const Matrix qd = flag_basis(d.frame().matrix());
  const Matrix qe = flag_basis(e.frame().matrix());
  Vector out(n - 1);
  for (int i = 1; i < n; ++i) {
    Matrix m(n, n);
    m << qd.leftCols(i), qe.leftCols(n - i);
    out(i - 1) = m.determinant();
  }
  return out;
}

bool are_opposite(const Chamber& d, const Chamber& e, const NumericPolicy& policy) {
  return transversality_minors(d, e).cwiseAbs().minCoeff() > policy.transversality;
}

Flat flat_spanned(const Chamber& d, const Chamber& e, const NumericPolicy& policy) {
  if (!are_opposite(d, e, policy)) fail(ErrorKind::NotOpposite, "chambers are not opposite");
  const int n = d.dim();
  const Matrix qd = flag_basis(d.frame().matrix());
  const Matrix qe = flag_basis(e.frame().matrix());
  Matrix u(n, n);
  for (int i = 1; i <= n; ++i) {
    const int m = n - i + 1;
    Matrix a(n, i + m);
    a << qd.leftCols(i), -qe.leftCols(m);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const Vector c = svd.matrixV().col(i + m - 1);
    Vector w = qd.leftCols(i) * c.head(i);
    const double norm = w.norm();
    if (norm < 1e-12) fail(ErrorKind::NotOpposite, "degenerate flag intersection");
    u.col(i - 1) = w / norm;
  }
  return Flat(SpecialLinear::normalized(u));
}

std::vector<Chamber> boundary_chambers(const Flat& e) {
  const int n = e.dim();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Chamber> out;
  do {
    out.emplace_back(Matrix(e.frame().matrix() * permutation_matrix(perm)));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

Chamber opposite_in_flat(const Flat& e, const Chamber& c) {
  const int n = e.dim();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    const Matrix f = e.frame().matrix() * permutation_matrix(perm);
    if (same_chamber(Chamber(f), c, 1e-7)) return Chamber(Matrix(f * reversal(n)));
  } while (std::next_permutation(perm.begin(), perm.end()));
  fail(ErrorKind::NotInFlat, "chamber is not a boundary chamber of the flat");
}

Apartment common_apartment(const Matrix& d_frame, const Matrix& e_frame) {
  const int n = static_cast<int>(d_frame.rows());
  Matrix m = d_frame.partialPivLu().solve(e_frame);
  Matrix b1inv = Matrix::Identity(n, n);
  std::vector<bool> used(n, false);
  std::vector<int> perm(n, -1);
  for (int j = 0; j < n; ++j) {
    const double scale = m.col(j).cwiseAbs().maxCoeff();
    int piv = -1;
    for (int i = n - 1; i >= 0; --i)
      if (!used[i] && std::abs(m(i, j)) > 1e-9 * scale) {
        piv = i;
        break;
      }
    if (piv < 0) fail(ErrorKind::SingularInput, "singular frame in common apartment");
    for (int r = 0; r < piv; ++r) {
      if (used[r] || m(r, j) == 0.0) continue;
      const double f = m(r, j) / m(piv, j);
      m.row(r) -= f * m.row(piv);
      b1inv.row(r) -= f * b1inv.row(piv);
    }
    for (int c = j + 1; c < n; ++c) {
      const double f = m(piv, c) / m(piv, j);
      m.col(c) -= f * m.col(j);
    }
    used[piv] = true;
    perm[j] = piv;
  }
  const Matrix b1 = b1inv.triangularView<Eigen::Upper>().solve(Matrix::Identity(n, n));
  Matrix u = d_frame * b1;
  for (int j = 0; j < n; ++j) u.col(j).normalize();
  return Apartment{SpecialLinear::normalized(u).matrix(), perm};
}

double tits_angle(const BoundaryPoint& a, const BoundaryPoint& b) {
  const BoundaryPoint sa = a.sorted();
  const BoundaryPoint sb = b.sorted();
  const Apartment ap = common_apartment(sa.frame().matrix(), sb.frame().matrix());
  const Vector& v2 = sb.direction().values();
  Vector w(v2.size());
  for (int k = 0; k < v2.size(); ++k) w(ap.perm[k]) = v2(k);
  const double c = sa.direction().values().dot(w);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

Chamber chamber_of(const BoundaryPoint& sigma) { return Chamber(sigma.sorted().frame()); }

// ---------------------------------------------------------------- opposite flats

Flat find_opposite_flat(const Chamber& c, int max_tries, Rng& rng, const NumericPolicy& policy) {
  for (int t = 0; t < max_tries; ++t) {
    const Flat e(random_special_linear(rng, c.dim()));
    bool ok = true;
    for (const Chamber& ch : boundary_chambers(e))
      if (!are_opposite(ch, c, policy)) {
        ok = false;
        break;
      }
    if (ok) return e;
  }
  fail(ErrorKind::ExhaustedTries, "no flat opposite the chamber was found");
}

}  // namespace horolab
