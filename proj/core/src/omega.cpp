#include "horolab/omega.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "horolab/error.hpp"

namespace horolab {

namespace {

std::string label_string(const std::vector<int>& labels) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < labels.size(); ++i) os << (i ? "," : "") << labels[i];
  os << ']';
  return os.str();
}

std::vector<std::vector<int>> proper_subsets(const std::vector<int>& labels) {
  std::vector<std::vector<int>> out;
  const int k = static_cast<int>(labels.size());
  for (int mask = 1; mask < (1 << k) - 1; ++mask) {
    std::vector<int> s;
    for (int i = 0; i < k; ++i)
      if (mask & (1 << i)) s.push_back(labels[i]);
    out.push_back(s);
  }
  return out;
}

// Barycentric lattice points sum = level over k vertices.
void lattice(int k, int level, std::vector<Vector>& out, Vector cur = Vector(), int pos = 0, int left = -1) {
  if (pos == 0) {
    cur = Vector::Zero(k);
    left = level;
  }
  if (pos == k - 1) {
    cur(pos) = left;
    out.push_back(cur / static_cast<double>(level));
    return;
  }
  for (int i = 0; i <= left; ++i) {
    cur(pos) = i;
    lattice(k, level, out, cur, pos + 1, left - i);
  }
}

double domain_distance(const Vector& a, const Vector& b) { return (a - b).norm() / std::sqrt(2.0); }

}  // namespace

double ShadowSphere::lipschitz() const {
  if (points.size() < 2) return 0.0;
  if (m == 0) return tits_angle(points[0], points[1]) / 2.0;
  const std::size_t k = points.size();
  double lip = 0.0;
  for (std::size_t i = 0; i < k; ++i) lip = std::max(lip, tits_angle(points[i], points[(i + 1) % k]));
  return lip / (2.0 * M_PI / static_cast<double>(k));
}

CartanVector cone_direction(int n) {
  const auto rays = chamber_extreme_rays(n);
  Vector s = Vector::Zero(n);
  for (std::size_t k = 0; k < rays.size(); ++k) s += static_cast<double>(k + 1) * rays[k].values();
  return CartanVector::projected(s).unit();
}

BoundaryPoint cone_point(const BoundaryPoint& v, const Chamber& d, const CartanVector& tau_g, double s, double* angle) {
  const BoundaryPoint sv = v.sorted();
  const Vector wv = sv.direction().values();
  const Vector wu = tau_g.values().reverse();
  const double ang = std::acos(std::clamp(wv.dot(wu), -1.0, 1.0));
  if (angle) *angle = ang;
  if (s <= 0.0) return v;
  if (ang > M_PI - 1e-9) fail(ErrorKind::NumericalFailure, "cone arc endpoints are antipodal");
  const Flat e = flat_spanned(Chamber(sv.frame()), d);
  if (ang < 1e-14) return BoundaryPoint(e.frame(), CartanVector::projected(wv).unit());
  const Vector w = (std::sin((1.0 - s) * ang) * wv + std::sin(s * ang) * wu) / std::sin(ang);
  return BoundaryPoint(e.frame(), CartanVector::projected(w).unit());
}

BoundaryPoint translate(const BoundaryPoint& p, const SpecialLinear& g) {
  return BoundaryPoint(SpecialLinear::normalized(g.matrix() * p.frame().matrix()), p.direction());
}

BoundaryPoint ShadowCone::u() const { return translate(opp.d_local.point(tau_g), opp.to_global); }

BoundaryPoint ShadowCone::operator()(const BoundaryPoint& v, double s) const {
  if (s <= 0.0) return v;
  return translate(cone_point(translate(v, from_global), opp.d_local, tau_g, s), opp.to_global);
}

ShadowCone contract_in_shadow(const ShadowSphere& alpha, const Point& x, const CartanVector& v, Rng& rng,
                              const OmegaOptions& opts) {
  const CartanVector tau_g = cone_direction(x.dim());
  const Vector wu = tau_g.values().reverse();
  std::vector<Chamber> targets;
  double gap = M_PI;
  for (const BoundaryPoint& s : alpha.points) {
    const BoundaryPoint ss = s.sorted();
    targets.emplace_back(ss.frame());
    gap = std::min(gap, M_PI - std::acos(std::clamp(ss.direction().values().dot(wu), -1.0, 1.0)));
  }
  if (gap < opts.min_gap) fail(ErrorKind::CalibrationFailure, "connected shadows: cone arc too close to antipodal");
  std::string reason = "no attempt";
  for (int attempt = 0; attempt < opts.retries; ++attempt) {
    Rng r = rng.split(100 + static_cast<std::uint64_t>(attempt));
    try {
      OppositeResult opp = opposite_chamber_for_chambers(x, v, targets, r, opts.opposite);
      SpecialLinear inv = opp.to_global.inverse();
      return ShadowCone{std::move(opp), tau_g, gap, attempt + 1, std::move(inv)};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CalibrationFailure) throw;
      reason = e.detail();
    }
  }
  fail(ErrorKind::CalibrationFailure, reason);
}

double cone_lipschitz(const ShadowSphere& alpha, const ShadowCone& cone, int radial_steps) {
  double lip = 0.0;
  if (alpha.m == 0) {
    for (int side = 0; side < 2; ++side) {
      BoundaryPoint prev = alpha.points[side];
      for (int j = 1; j <= radial_steps; ++j) {
        const double s = static_cast<double>(j) / radial_steps;
        BoundaryPoint cur = cone(alpha.points[side], s);
        lip = std::max(lip, tits_angle(prev, cur) * radial_steps);
        prev = cur;
      }
    }
    return lip;
  }
  const int k = static_cast<int>(alpha.points.size());
  std::vector<std::vector<BoundaryPoint>> img;
  for (int i = 0; i < k; ++i) {
    std::vector<BoundaryPoint> row;
    for (int j = 0; j <= radial_steps; ++j) row.push_back(cone(alpha.points[i], static_cast<double>(j) / radial_steps));
    img.push_back(row);
  }
  auto pos = [&](int i, int j) {
    const double r = 1.0 - static_cast<double>(j) / radial_steps;
    const double th = 2.0 * M_PI * i / k;
    return Eigen::Vector2d(r * std::cos(th), r * std::sin(th));
  };
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < radial_steps; ++j) {
      const double dr = (pos(i, j) - pos(i, j + 1)).norm();
      lip = std::max(lip, tits_angle(img[i][j], img[i][j + 1]) / dr);
      const double dt = (pos(i, j) - pos((i + 1) % k, j)).norm();
      if (dt > 1e-12) lip = std::max(lip, tits_angle(img[i][j], img[(i + 1) % k][j]) / dt);
    }
  return lip;
}

// ---------------------------------------------------------------- OmegaComplex

OmegaComplex::OmegaComplex(HorosphereContext ctx, std::uint64_t seed, OmegaOptions opts)
    : ctx_(std::move(ctx)), seed_(seed), opts_(std::move(opts)), tau_g_(cone_direction(ctx_.dim())) {}

int OmegaComplex::add_vertex(const Point& z) {
  if (std::abs(ctx_.height(z)) > 1e-7) fail(ErrorKind::InvalidArgument, "Omega vertex must lie on the horosphere");
  z_.push_back(z);
  return static_cast<int>(z_.size()) - 1;
}

const ExplodedComplex& OmegaComplex::exploded(int d) {
  auto it = exploded_.find(d);
  if (it == exploded_.end()) it = exploded_.emplace(d, build_exploded(d)).first;
  return it->second;
}

const FaceData& OmegaComplex::face(const std::vector<int>& labels) {
  auto it = faces_.find(labels);
  if (it != faces_.end()) return it->second;
  if (labels.empty() || !std::is_sorted(labels.begin(), labels.end()) ||
      std::adjacent_find(labels.begin(), labels.end()) != labels.end())
    fail(ErrorKind::InvalidArgument, "face labels must be sorted and distinct");
  if (static_cast<int>(labels.size()) > ctx_.dim() - 1)
    fail(ErrorKind::InvalidArgument, "face dimension exceeds k - 1");
  if (labels.size() == 1) return faces_.emplace(labels, build_vertex(labels[0])).first->second;
  for (const auto& sub : proper_subsets(labels)) face(sub);
  FaceData fd = build_face(labels);
  return faces_.insert_or_assign(labels, std::move(fd)).first->second;
}

FaceData OmegaComplex::build_vertex(int label) {
  const Point& z = z_.at(label);
  const Chamber c = Chamber::from_unipotent(z.horo_coords().n);
  const Point x = push(z, ctx_.tau0, 1.0 / std::cos(ctx_.theta));
  FaceData fd{{label}, x, ctx_.height(x), c.point(ctx_.tau0), std::nullopt, std::nullopt, 0.0, 0.0, 0.0};
  fd.anchor_ratio = distance(x, z);
  fd.max_rho = rho_value(x, c);
  const std::string id = label_string({label});
  checks_.push_back({"omega_infty.p1" + id, fd.anchor_ratio, opts_.anchor_cap, fd.anchor_ratio <= opts_.anchor_cap});
  checks_.push_back({"omega_infty.p2" + id, fd.max_rho, 1.0, fd.max_rho < 1.0});
  checks_.push_back({"omega_infty.p4" + id, fd.h, 1.0, std::abs(fd.h - 1.0) <= 1e-9});
  return fd;
}

std::vector<BoundaryPoint> OmegaComplex::boundary_samples(const std::vector<int>& labels) {
  std::vector<BoundaryPoint> pts;
  if (labels.size() == 2) {
    pts.push_back(*face({labels[0]}).b);
    pts.push_back(*face({labels[1]}).b);
    return pts;
  }
  const int k = static_cast<int>(labels.size());
  const int ns = opts_.boundary_samples;
  for (int e = 0; e < k; ++e) {
    const int a = labels[e];
    const int b = labels[(e + 1) % k];
    const std::vector<int> pair = a < b ? std::vector<int>{a, b} : std::vector<int>{b, a};
    for (int i = 0; i < ns; ++i) {
      const double s = static_cast<double>(i) / ns;
      Vector w(2);
      if (a < b)
        w << 1.0 - s, s;
      else
        w << s, 1.0 - s;
      pts.push_back(omega_infty(pair, w));
    }
  }
  return pts;
}

FaceData OmegaComplex::build_face(const std::vector<int>& labels) {
  const std::string id = label_string(labels);
  const Point& z = z_.at(labels[0]);
  std::uint64_t fseed = seed_;
  for (int l : labels) fseed = mix_seed(fseed, static_cast<std::uint64_t>(l) + 1);
  Rng frng(fseed);

  const ShadowSphere alpha{static_cast<int>(labels.size()) - 2, boundary_samples(labels)};
  std::vector<Chamber> sphere_chambers;
  for (const BoundaryPoint& s : alpha.points) sphere_chambers.push_back(chamber_of(s));

  std::vector<const FaceData*> subs;
  for (const auto& sub : proper_subsets(labels)) subs.push_back(&faces_.at(sub));
  std::vector<Chamber> sub_shadows;
  std::vector<WeylChamberRegion> regions;
  double hmax = 0.0;
  for (const FaceData* s : subs) {
    regions.emplace_back(s->x);
    hmax = std::max(hmax, s->h);
    for (int i = 0; i < opts_.shadow_samples; ++i)
      sub_shadows.push_back(i % 2 == 0 ? shadow_chamber(s->x, 0.999, frng) : sample_shadow(s->x, 1.0, frng));
  }

  auto admissible = [&](const Point& base, double t) {
    const Point x0 = push(base, ctx_.tau0, t);
    if (ctx_.height(x0) < hmax) return false;
    for (const Chamber& c : sphere_chambers)
      if (!c.unipotent() || rho_value(x0, c) >= 1.0) return false;
    for (const Chamber& c : sub_shadows)
      if (rho_value(x0, c) >= 1.0) return false;
    for (const WeylChamberRegion& r : regions)
      if (distance_to_weyl_chamber(x0, r) >= 1.0) return false;
    return true;
  };
  // Base point x0 on a tau0 ray from the first vertex or from a subface point; lowest height wins.
  std::vector<const Point*> bases{&z};
  for (const FaceData* sf : subs) bases.push_back(&sf->x);
  std::optional<Point> best;
  double hi = 0.0;
  for (const Point* base : bases) {
    double th = 1.0;
    while (!admissible(*base, th) && th <= 1e3) th *= 2.0;
    if (th > 1e3) continue;
    double tl = 0.0;
    if (admissible(*base, 0.0)) th = 0.0;
    while (th - tl > 1e-2) {
      const double mid = 0.5 * (tl + th);
      (admissible(*base, mid) ? th : tl) = mid;
    }
    Point cand = push(*base, ctx_.tau0, th);
    if (!best || ctx_.height(cand) < ctx_.height(*best)) {
      best = cand;
      hi = th;
    }
  }
  if (!best) fail(ErrorKind::CalibrationFailure, "Omega_infty " + id + ": no admissible base point x0");
  const Point x0 = *best;

  std::vector<Vector> grid;
  lattice(static_cast<int>(labels.size()), opts_.grid, grid);

  std::string reason = "no attempt";
  for (int attempt = 0; attempt < opts_.retries; ++attempt) {
    Rng arng = frng.split(static_cast<std::uint64_t>(attempt) + 1);
    std::optional<ShadowCone> cone;
    try {
      cone = contract_in_shadow(alpha, x0, ctx_.tau0, arng, opts_);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CalibrationFailure) throw;
      reason = e.detail();
      continue;
    }
    const Point x = cone->opp.x_prime;
    FaceData fd{labels, x, ctx_.height(x), std::nullopt, cone, x0, hi, 0.0, 0.0};

    double worst_d = 0.0;
    double worst_h = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < subs.size(); ++i) {
      worst_d = std::max(worst_d, distance_to_weyl_chamber(x, regions[i]));
      worst_h = std::min(worst_h, fd.h - subs[i]->h);
    }
    if (worst_d >= 1.0 || worst_h < -1e-12) {
      reason = "Omega_infty " + id + ": property (3) failed";
      continue;
    }

    faces_.insert_or_assign(labels, fd);
    bool ok = true;
    try {
      for (const Vector& w : grid) {
        const Chamber c = chamber_of(omega_infty(labels, w));
        const double r = c.unipotent() ? rho_value(x, c) : std::numeric_limits<double>::infinity();
        fd.max_rho = std::max(fd.max_rho, r);
        if (!(r < 1.0)) {
          ok = false;
          break;
        }
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NumericalFailure && e.kind() != ErrorKind::NotOpposite) throw;
      ok = false;
    }
    faces_.erase(labels);
    if (!ok) {
      reason = "Omega_infty " + id + ": property (2) failed";
      continue;
    }

    double dmin = std::numeric_limits<double>::infinity();
    double diam = 0.0;
    for (int a : labels) {
      dmin = std::min(dmin, distance(x, z_[a]));
      for (int b : labels) diam = std::max(diam, distance(z_[a], z_[b]));
    }
    fd.anchor_ratio = dmin / (diam + 1.0);
    checks_.push_back({"omega_infty.p1" + id, fd.anchor_ratio, opts_.anchor_cap, fd.anchor_ratio <= opts_.anchor_cap});
    checks_.push_back({"omega_infty.p2" + id, fd.max_rho, 1.0, fd.max_rho < 1.0});
    checks_.push_back({"omega_infty.p3" + id, worst_d, 1.0, worst_d < 1.0 && worst_h >= -1e-12});
    checks_.push_back({"omega_infty.p4" + id, fd.h, 1.0, fd.h >= 1.0 - 1e-12});
    return fd;
  }
  fail(ErrorKind::CalibrationFailure, reason);
}

BoundaryPoint OmegaComplex::omega_infty(const std::vector<int>& labels, const Vector& weights) {
  std::vector<int> sub;
  std::vector<double> w;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (weights(i) > 1e-15) {
      sub.push_back(labels[i]);
      w.push_back(weights(i));
    }
  if (sub.empty()) fail(ErrorKind::InvalidArgument, "empty barycentric support");
  const FaceData& fd = face(sub);
  if (sub.size() == 1) return *fd.b;
  const int k = static_cast<int>(sub.size());
  Vector wv = Eigen::Map<Vector>(w.data(), k);
  wv /= wv.sum();
  const double wmin = wv.minCoeff();
  const double lambda = 1.0 - k * wmin;
  if (lambda <= 1e-15) return fd.cone->u();
  Vector bw = (wv.array() - wmin) / lambda;
  for (int i = 0; i < k; ++i)
    if (bw(i) <= 1e-14) bw(i) = 0.0;
  const BoundaryPoint edge = omega_infty(sub, bw);
  return (*fd.cone)(edge, 1.0 - lambda);
}

Point OmegaComplex::F(const std::vector<int>& labels, const ExplodedPoint& ep) {
  const ExplodedComplex& cx = exploded(static_cast<int>(labels.size()) - 1);
  auto anchor = [&](int face_id) -> const Point& {
    std::vector<int> sub;
    for (int v : cx.faces()[face_id]) sub.push_back(labels[v]);
    return face(sub).x;
  };
  Point p = anchor(ep.chain[0]);
  double acc = ep.weights(0);
  for (std::size_t i = 1; i < ep.chain.size(); ++i) {
    const double wi = ep.weights(static_cast<int>(i));
    if (wi <= 0.0) continue;
    acc += wi;
    p = geodesic_between(p, anchor(ep.chain[i]), wi / acc);
  }
  return p;
}

Point OmegaComplex::omega(const std::vector<int>& labels, const Vector& weights) {
  std::map<int, double> merged;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (weights(i) > 0.0) merged[labels[i]] += weights(i);
  std::vector<int> sub;
  Vector w(static_cast<int>(merged.size()));
  int k = 0;
  for (const auto& [l, v] : merged) {
    sub.push_back(l);
    w(k++) = v;
  }
  w /= w.sum();
  const ExplodedComplex& cx = exploded(static_cast<int>(sub.size()) - 1);
  const ExplodedPoint ep = cx.locate(w);
  const BoundaryPoint sigma = omega_infty(sub, ep.p);
  const Point x = F(sub, ep);
  const Chamber c = chamber_of(sigma);
  if (!c.unipotent()) fail(ErrorKind::MembershipViolation, "W(q): direction not opposite the standard chamber");
  const double r = rho_value(x, c);
  max_rho_y_ = std::max(max_rho_y_, r);
  if (!(r < opts_.rho_Y)) fail(ErrorKind::MembershipViolation, "W(q) is outside Y(rho)");
  if (ctx_.height(x) < 1.0 - 1e-9) fail(ErrorKind::MembershipViolation, "W(q): h(F(p2 q)) < 1");
  return i_u(x, sigma, ctx_);
}

OmegaComplex build_omega_infty(const std::vector<Point>& z, const HorosphereContext& ctx, std::uint64_t seed,
                               const OmegaOptions& opts) {
  OmegaComplex oc(ctx, seed, opts);
  std::vector<int> labels;
  for (const Point& p : z) labels.push_back(oc.add_vertex(p));
  oc.face(labels);
  return oc;
}

double omega_lipschitz(OmegaComplex& oc, const std::vector<int>& labels, int grid) {
  const int k = static_cast<int>(labels.size());
  std::vector<Vector> pts;
  lattice(k, grid, pts);
  std::vector<Point> img;
  for (const Vector& w : pts) img.push_back(oc.omega(labels, w));
  double lip = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      const double dd = domain_distance(pts[a], pts[b]);
      if (dd > 1.5 / grid) continue;  // lattice neighbours only
      lip = std::max(lip, distance(img[a], img[b]) / dd);
    }
  return lip;
}

}  // namespace horolab
