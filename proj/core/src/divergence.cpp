#include "horolab/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "horolab/chambers.hpp"
#include "horolab/error.hpp"

namespace horolab {

namespace {

// Orthonormal basis of the trace-zero diagonal subspace.
Matrix trace_zero_basis(int n) {
  Matrix m = Matrix::Zero(n, n - 1);
  for (int j = 0; j < n - 1; ++j) {
    m.block(0, j, j + 1, 1).setOnes();
    m(j + 1, j) = -(j + 1);
    m.col(j).normalize();
  }
  return m;
}

std::vector<CartanVector> sphere_directions(int n, int samples) {
  const Matrix basis = trace_zero_basis(n);
  std::vector<CartanVector> out;
  if (n == 2) {
    out.push_back(CartanVector::projected(basis.col(0)).unit());
    out.push_back(CartanVector::projected(-basis.col(0)).unit());
    return out;
  }
  if (n == 3) {
    for (int i = 0; i < samples; ++i) {
      const double th = 2.0 * M_PI * i / samples;
      out.push_back(CartanVector::projected(std::cos(th) * basis.col(0) + std::sin(th) * basis.col(1)).unit());
    }
    return out;
  }
  // Golden-angle spiral on S^2; for n > 4 the remaining coordinates are filled deterministically.
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < samples; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / samples;
    const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
    Vector c = Vector::Zero(n - 1);
    c(0) = rad * std::cos(golden * i);
    c(1) = rad * std::sin(golden * i);
    c(2) = z;
    for (int j = 3; j < n - 1; ++j) c(j) = std::sin(golden * i * (j + 1));
    out.push_back(CartanVector::projected(basis * c.normalized()).unit());
  }
  return out;
}

}  // namespace

Flat stored_opposite_flat(int n, int candidates) {
  Rng rng(0xf1a7ULL + static_cast<std::uint64_t>(n));
  std::optional<Flat> best;
  double best_margin = -1.0;
  for (int k = 0; k < candidates; ++k) {
    Eigen::HouseholderQR<Matrix> qr(rng.normal_matrix(n, n));
    Matrix q = qr.householderQ();
    if (q.determinant() < 0) q.col(0) *= -1.0;
    const Flat f{SpecialLinear(q)};
    double m = std::numeric_limits<double>::infinity();
    for (const Chamber& c : boundary_chambers(f)) m = std::min(m, c.standard_margin());
    if (m > best_margin) {
      best_margin = m;
      best = f;
    }
  }
  if (!best || best_margin <= default_policy().transversality)
    fail(ErrorKind::CalibrationFailure, "no flat through the base point is opposite the standard chamber");
  return *best;
}

Point point_at_height(const HorosphereContext& ctx, double r) {
  return Point::from_rep(SpecialLinear(ctx.cfg.tau.exp_diag(r)));
}

FlatSphere flat_sphere_on_Z(const Point& x, const HorosphereContext& ctx, int samples) {
  const int n = x.dim();
  const double r = ctx.height(x);
  if (!(r > 1.0)) fail(ErrorKind::InvalidArgument, "flat sphere needs h(x) > 1");
  if (samples < 4) fail(ErrorKind::InvalidArgument, "flat sphere needs at least 4 samples");
  const Flat f0 = stored_opposite_flat(n);
  const SpecialLinear p = x.horo_coords().group();
  const Flat flat(SpecialLinear::normalized(p.matrix() * f0.frame().matrix()));
  FlatSphere fs{x, r, flat, sphere_directions(n, samples), {}, {}, {}, 0.0, 0.0};
  // p lies in NA, so h(p y) = r + h(y): the crossing is found along the flat ray from the base point.
  const double sin_e = std::sin(ctx.epsilon);
  for (const CartanVector& d : fs.directions) {
    auto at = [&](double t) { return Point::from_rep(SpecialLinear(f0.frame().matrix() * d.exp_diag(t))); };
    auto f = [&](double t) { return r + ctx.height(at(t)); };
    const double t_max = 10.0 * (r + 1.0) / sin_e + 10.0;
    double lo = 0.0;
    double hi = 1.0;
    while (f(hi) > 0.0) {
      lo = hi;
      if (hi >= t_max) fail(ErrorKind::NoCrossing, "flat ray does not reach the horosphere");
      hi = std::min(2.0 * hi, t_max);
    }
    while (hi - lo > default_policy().crossing) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (f(mid) > 0.0 ? lo : hi) = mid;
    }
    const Point loc = at(0.5 * (lo + hi));
    fs.local_points.push_back(loc);
    fs.points.push_back(Point::from_rep(SpecialLinear::normalized(p.matrix() * loc.any_rep().matrix())));
    fs.max_abs_h = std::max(fs.max_abs_h, std::abs(r + ctx.height(loc)));
  }
  const int k = static_cast<int>(fs.points.size());
  if (n == 3) {
    for (int i = 0; i < k; ++i) fs.neighbours.push_back({i, (i + 1) % k});
  } else {
    // Four nearest directions by angle.
    for (int i = 0; i < k; ++i) {
      std::vector<std::pair<double, int>> near;
      for (int j = 0; j < k; ++j)
        if (j != i) near.push_back({-fs.directions[i].dot(fs.directions[j]), j});
      std::sort(near.begin(), near.end());
      for (int q = 0; q < std::min(4, k - 1); ++q)
        if (i < near[q].second) fs.neighbours.push_back({i, near[q].second});
    }
  }
  for (const auto& [i, j] : fs.neighbours) {
    const double ang = std::acos(std::clamp(fs.directions[i].dot(fs.directions[j]), -1.0, 1.0));
    if (ang > 1e-12) fs.lipschitz = std::max(fs.lipschitz, distance(fs.local_points[i], fs.local_points[j]) / ang);
  }
  return fs;
}

ZMeshDistance z_mesh_distance(const std::vector<Point>& nodes, int a, int b, const HorosphereContext& ctx,
                              int chord_samples, double level) {
  const int k = static_cast<int>(nodes.size());
  if (a < 0 || b < 0 || a >= k || b >= k) fail(ErrorKind::InvalidArgument, "mesh endpoints out of range");
  if (chord_samples < 1) fail(ErrorKind::InvalidArgument, "chord_samples must be positive");
  // Chord (i, j) contributes a path of retracted samples; only its length matters for the graph.
  auto retract = [&](const Point& y) { return push(y, ctx.cfg.tau, level - ctx.height(y)); };
  std::vector<std::vector<std::pair<int, double>>> adj(k);
  ZMeshDistance out;
  out.nodes = k;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      double len = 0.0;
      Point prev = nodes[i];
      for (int s = 1; s <= chord_samples; ++s) {
        const Point cur = s == chord_samples
                              ? nodes[j]
                              : retract(geodesic_between(nodes[i], nodes[j], static_cast<double>(s) / chord_samples));
        len += distance(prev, cur);
        prev = cur;
      }
      adj[i].push_back({j, len});
      adj[j].push_back({i, len});
      out.nodes += chord_samples - 1;
      out.edges += chord_samples;
    }
  std::vector<double> dist(k, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[a] = 0.0;
  pq.push({0.0, a});
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (const auto& [v, w] : adj[u])
      if (d + w < dist[v]) {
        dist[v] = d + w;
        pq.push({dist[v], v});
      }
  }
  out.distance = dist[b];
  return out;
}

}  // namespace horolab
