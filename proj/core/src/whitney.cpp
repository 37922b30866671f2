#include "horolab/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "horolab/error.hpp"

namespace horolab {

Point ZSphere::at(double t, const HorosphereContext& ctx) const {
  if (m == 0) return t < 0.5 ? points.at(0) : points.at(1);
  const int k = static_cast<int>(points.size());
  const double u = t / (2.0 * M_PI) * k;
  const double fl = std::floor(u);
  const double f = u - fl;
  const int i = ((static_cast<long long>(fl) % k) + k) % k;
  if (f < 1e-15) return points[i];
  return retract_to_Z(geodesic_between(points[i], points[(i + 1) % k], f), ctx);
}

double ZSphere::lipschitz() const {
  if (points.size() < 2) return 0.0;
  if (m == 0) return distance(points[0], points[1]) / 2.0;
  const std::size_t k = points.size();
  double lip = 0.0;
  for (std::size_t i = 0; i < k; ++i) lip = std::max(lip, distance(points[i], points[(i + 1) % k]));
  return lip / (2.0 * M_PI / static_cast<double>(k));
}

ZSphere unipotent_loop(int n, double lip, int samples, Rng& rng) {
  if (n < 2 || samples < 3) fail(ErrorKind::InvalidArgument, "unipotent loop needs n >= 2 and >= 3 samples");
  Matrix x1 = Matrix::Zero(n, n);
  Matrix x2 = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      x1(i, j) = rng.normal();
      x2(i, j) = rng.normal();
    }
  x1 /= x1.norm();
  x2 /= x2.norm();
  auto loop = [&](double s) {
    ZSphere z{1, {}};
    for (int i = 0; i < samples; ++i) {
      const double th = 2.0 * M_PI * i / samples;
      const UnitUpper u = nilpotent_exp(s * (std::cos(th) * x1 + std::sin(th) * x2));
      z.points.push_back(Point::from_rep(SpecialLinear(u.matrix())));
    }
    return z;
  };
  if (lip <= 0.0) return loop(0.0);
  double hi = 1.0;
  while (loop(hi).lipschitz() < lip) hi *= 2.0;
  double lo = 0.0;
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    (loop(mid).lipschitz() < lip ? lo : hi) = mid;
  }
  return loop(hi);
}

namespace {

enum class EdgeKind { Omega, Boundary, Geodesic };

struct Builder {
  const ZSphere& alpha;
  const HorosphereContext& ctx;
  const WhitneyOptions& opts;
  FilledDisk& out;
  OmegaComplex oc;
  int dim = 1;
  double R = 0.0;
  double unit = 0.0;       // side of a finest cube
  int cells = 0;           // finest cubes per side
  double lattice_step = 0.0;
  int lattice_count = 0;
  std::map<int, int> label_of_lattice;
  std::vector<int> label;  // Omega label per vertex, -1 until needed
  std::map<std::pair<int, int>, EdgeKind> edges;
  std::vector<bool> large;
  std::vector<std::optional<Point>> apex;

  Builder(const ZSphere& a, const HorosphereContext& c, const WhitneyOptions& o, FilledDisk& f)
      : alpha(a), ctx(c), opts(o), out(f), oc(c, o.seed, o.omega) {}

  // Perimeter position of a boundary point of [-R, R]^2, counterclockwise from (R, 0).
  double perimeter(double x, double y) const {
    const double e = 1e-9 * R;
    if (std::abs(x - R) <= e) return y >= 0.0 ? y : 8.0 * R + y;
    if (std::abs(y - R) <= e) return R + (R - x);
    if (std::abs(x + R) <= e) return 3.0 * R + (R - y);
    return 5.0 * R + (x + R);
  }
  double angle_of(double t) const { return M_PI * t / (4.0 * R); }

  Point alpha_at_param(double t) const {
    if (dim == 1) return alpha.at(t < 0.0 ? 0.0 : 1.0, ctx);
    return alpha.at(angle_of(t), ctx);
  }

  int vertex_label(int v) {
    if (label[v] >= 0) return label[v];
    int key = 0;
    Point z = alpha.points[0];
    if (dim == 1) {
      key = out.vertices[v].boundary_param < 0.0 ? 0 : 1;
      z = alpha.points[key];
    } else {
      key = static_cast<int>(std::lround(out.vertices[v].boundary_param / lattice_step)) % lattice_count;
      z = alpha.at(2.0 * M_PI * key / lattice_count, ctx);
    }
    auto it = label_of_lattice.find(key);
    if (it == label_of_lattice.end()) it = label_of_lattice.emplace(key, oc.add_vertex(z)).first;
    return label[v] = it->second;
  }

  Point vertex_image(int v) {
    const DiskVertex& dv = out.vertices[v];
    if (dv.on_boundary || !dv.deep) return alpha_at_param(dv.boundary_param);
    const int l = vertex_label(v);
    return oc.omega({l}, Vector::Ones(1));
  }

  Point edge_at(int a, int b, double s) {
    if (a > b) {
      std::swap(a, b);
      s = 1.0 - s;
    }
    if (s <= 0.0) return out.images[a];
    if (s >= 1.0) return out.images[b];
    switch (edges.at({a, b})) {
      case EdgeKind::Omega: {
        Vector w(2);
        w << 1.0 - s, s;
        return oc.omega({vertex_label(a), vertex_label(b)}, w);
      }
      case EdgeKind::Boundary: {
        const Vector p = (1.0 - s) * out.vertices[a].pos + s * out.vertices[b].pos;
        return alpha_at_param(perimeter(p(0), p(1)));
      }
      case EdgeKind::Geodesic:
        return retract_to_Z(geodesic_between(out.images[a], out.images[b], s), ctx);
    }
    return out.images[a];
  }

  // Point of simplex `k` at barycentric weights w.
  Point simplex_at(int k, const Vector& w) {
    const std::vector<int>& sv = out.simplices[k];
    if (dim == 1) return edge_at(sv[0], sv[1], w(1));
    for (int i = 0; i < 3; ++i)
      if (w(i) >= 1.0 - 1e-15) return out.images[sv[i]];
    if (large[k]) {
      std::vector<int> labs;
      for (int v : sv) labs.push_back(vertex_label(v));
      return oc.omega(labs, w);
    }
    for (int i = 0; i < 3; ++i)
      if (w(i) <= 1e-15) {
        const int a = sv[(i + 1) % 3];
        const int b = sv[(i + 2) % 3];
        const double wa = w((i + 1) % 3);
        const double wb = w((i + 2) % 3);
        return edge_at(a, b, wb / (wa + wb));
      }
    if (!apex[k]) {
      const Point mid = geodesic_between(out.images[sv[0]], out.images[sv[1]], 0.5);
      apex[k] = geodesic_between(mid, out.images[sv[2]], 1.0 / 3.0);
    }
    const double wmin = w.minCoeff();
    const double r = 1.0 - 3.0 * wmin;
    if (r <= 1e-15) return retract_to_Z(*apex[k], ctx);
    const Vector q = (w.array() - wmin) / r;
    int zero = 0;
    q.minCoeff(&zero);
    const int a = sv[(zero + 1) % 3];
    const int b = sv[(zero + 2) % 3];
    const double qa = q((zero + 1) % 3);
    const double qb = q((zero + 2) % 3);
    const Point edge = edge_at(a, b, qb / (qa + qb));
    return retract_to_Z(geodesic_between(*apex[k], edge, r), ctx);
  }
};

struct Cube {
  int x, y, k;  // lower corner and side in finest units
};

// Dyadic Whitney decomposition of [0, N]^dim; dist and side in finest units.
void decompose(const Cube& c, int dim, int n_cells, std::vector<Cube>& out, int budget) {
  int dist = std::min(c.x, n_cells - c.x - c.k);
  if (dim == 2) dist = std::min({dist, c.y, n_cells - c.y - c.k});
  if (c.k == 1 || std::sqrt(static_cast<double>(dim)) * c.k <= dist) {
    out.push_back(c);
    if (static_cast<int>(out.size()) > budget) fail(ErrorKind::ResolutionExceeded, "Whitney cube count exceeds the budget");
    return;
  }
  const int h = c.k / 2;
  if (dim == 1) {
    decompose({c.x, 0, h}, dim, n_cells, out, budget);
    decompose({c.x + h, 0, h}, dim, n_cells, out, budget);
    return;
  }
  for (int dy = 0; dy < 2; ++dy)
    for (int dx = 0; dx < 2; ++dx) decompose({c.x + dx * h, c.y + dy * h, h}, dim, n_cells, out, budget);
}

}  // namespace

FilledDisk whitney_fill(const ZSphere& alpha, const HorosphereContext& ctx, const WhitneyOptions& opts) {
  if (alpha.m != 0 && alpha.m != 1) fail(ErrorKind::InvalidArgument, "whitney_fill supports m = 0 and m = 1");
  if (alpha.m > ctx.dim() - 3) fail(ErrorKind::InvalidArgument, "sphere dimension must be at most rank - 2");
  if ((alpha.m == 0 && alpha.points.size() != 2) || (alpha.m == 1 && alpha.points.size() < 3))
    fail(ErrorKind::InvalidArgument, "sphere sample count does not match its dimension");
  for (const Point& p : alpha.points)
    if (std::abs(ctx.height(p)) > 1e-7) fail(ErrorKind::InvalidArgument, "sphere points must lie on Z");
  if (opts.max_depth < 1 || opts.max_depth > 14) fail(ErrorKind::InvalidArgument, "max_depth out of range");

  FilledDisk out;
  out.m = alpha.m;
  out.input_lipschitz = alpha.lipschitz();
  Builder b(alpha, ctx, opts, out);
  b.dim = alpha.m + 1;

  bool degenerate = true;
  for (const Point& p : alpha.points) degenerate = degenerate && distance(p, alpha.points[0]) < 1e-12;
  if (degenerate) {
    // Constant disk on a single cell.
    out.domain_radius = 1.0;
    const int nv = b.dim == 1 ? 2 : 3;
    for (int i = 0; i < nv; ++i) {
      Vector pos = Vector::Zero(b.dim);
      pos(0) = i == 0 ? -1.0 : 1.0;
      if (b.dim == 2 && i == 2) pos << 0.0, 1.0;
      out.vertices.push_back({pos, 0.0, true, 0.0, false});
      out.images.push_back(alpha.points[0]);
    }
    out.simplices.push_back(b.dim == 1 ? std::vector<int>{0, 1} : std::vector<int>{0, 1, 2});
    out.max_abs_h = std::abs(ctx.height(alpha.points[0]));
    return out;
  }

  b.R = alpha.m == 0 ? out.input_lipschitz : 2.0 * M_PI * out.input_lipschitz / 8.0;
  out.domain_radius = b.R;
  b.cells = 1 << opts.max_depth;
  b.unit = 2.0 * b.R / b.cells;
  if (b.dim == 2) {
    b.lattice_count = 8 * std::max(1, static_cast<int>(std::lround(b.R / opts.boundary_spacing)));
    b.lattice_step = 8.0 * b.R / b.lattice_count;
  }

  std::vector<Cube> cubes;
  decompose({0, 0, b.cells}, b.dim, b.cells, cubes, opts.cube_budget);
  out.cubes = static_cast<int>(cubes.size());

  // Vertices on a doubled integer lattice so that cube centers are integral.
  std::map<std::pair<int, int>, int> index;
  auto vertex = [&](int qx, int qy) {
    auto it = index.find({qx, qy});
    if (it != index.end()) return it->second;
    Vector pos(b.dim);
    pos(0) = -b.R + 0.5 * b.unit * qx;
    if (b.dim == 2) pos(1) = -b.R + 0.5 * b.unit * qy;
    double depth = b.R - pos.cwiseAbs().maxCoeff();
    if (depth < 1e-12 * b.R) depth = 0.0;
    DiskVertex dv{pos, depth, depth == 0.0, 0.0, false};
    if (b.dim == 1) {
      dv.boundary_param = pos(0) <= 0.0 ? -b.R : b.R;
    } else {
      const double x = pos(0), y = pos(1);
      const double dr = b.R - x, dt = b.R - y, dl = b.R + x, db = b.R + y;
      const double dmin = std::min({dr, dt, dl, db});
      if (dr == dmin)
        dv.boundary_param = b.perimeter(b.R, y);
      else if (dt == dmin)
        dv.boundary_param = b.perimeter(x, b.R);
      else if (dl == dmin)
        dv.boundary_param = b.perimeter(-b.R, y);
      else
        dv.boundary_param = b.perimeter(x, -b.R);
    }
    out.vertices.push_back(dv);
    const int id = static_cast<int>(out.vertices.size()) - 1;
    index.emplace(std::make_pair(qx, qy), id);
    return id;
  };

  if (b.dim == 1) {
    std::sort(cubes.begin(), cubes.end(), [](const Cube& a, const Cube& c) { return a.x < c.x; });
    for (const Cube& c : cubes) out.simplices.push_back({vertex(2 * c.x, 0), vertex(2 * (c.x + c.k), 0)});
  } else {
    std::set<std::pair<int, int>> corners;
    for (const Cube& c : cubes)
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx) corners.insert({c.x + dx * c.k, c.y + dy * c.k});
    for (const Cube& c : cubes) {
      std::vector<std::pair<int, int>> ring;
      for (int x = c.x; x < c.x + c.k; ++x)
        if (corners.count({x, c.y})) ring.push_back({x, c.y});
      for (int y = c.y; y < c.y + c.k; ++y)
        if (corners.count({c.x + c.k, y})) ring.push_back({c.x + c.k, y});
      for (int x = c.x + c.k; x > c.x; --x)
        if (corners.count({x, c.y + c.k})) ring.push_back({x, c.y + c.k});
      for (int y = c.y + c.k; y > c.y; --y)
        if (corners.count({c.x, y})) ring.push_back({c.x, y});
      const int center = vertex(2 * c.x + c.k, 2 * c.y + c.k);
      for (std::size_t i = 0; i < ring.size(); ++i) {
        const auto& p = ring[i];
        const auto& q = ring[(i + 1) % ring.size()];
        out.simplices.push_back({center, vertex(2 * p.first, 2 * p.second), vertex(2 * q.first, 2 * q.second)});
      }
    }
  }

  const int nv = static_cast<int>(out.vertices.size());
  const int ns = static_cast<int>(out.simplices.size());
  auto diam = [&](int k) {
    double d = 0.0;
    for (int i : out.simplices[k])
      for (int j : out.simplices[k]) d = std::max(d, (out.vertices[i].pos - out.vertices[j].pos).norm());
    return d;
  };

  // Shape constant from simplices away from the boundary.
  double c = 1.0;
  for (int k = 0; k < ns; ++k) {
    bool interior = true;
    for (int v : out.simplices[k]) interior = interior && !out.vertices[v].on_boundary;
    if (!interior) continue;
    const double dk = diam(k);
    for (int v : out.simplices[k]) {
      const double d = out.vertices[v].depth;
      c = std::max({c, dk / d, d / dk});
    }
  }
  out.shape_constant = c;
  for (DiskVertex& v : out.vertices) v.deep = !v.on_boundary && v.depth >= 1.0 / c;

  // Skeleton by skeleton: vertices, then edges, then triangles.
  b.label.assign(nv, -1);
  b.large.assign(ns, false);
  b.apex.assign(ns, std::nullopt);
  const double threshold = opts.large_simplex > 0.0 ? opts.large_simplex : 0.5 / (c * c);
  for (int k = 0; k < ns; ++k) {
    b.large[k] = diam(k) >= threshold;
    if (b.large[k]) {
      for (int v : out.simplices[k])
        if (!out.vertices[v].deep) b.large[k] = false;
    }
    if (b.large[k]) ++out.large_simplices;
  }
  for (int v = 0; v < nv; ++v) out.images.push_back(b.vertex_image(v));

  for (int k = 0; k < ns; ++k) {
    const std::vector<int>& sv = out.simplices[k];
    const int m = static_cast<int>(sv.size());
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        const std::pair<int, int> e{std::min(sv[i], sv[j]), std::max(sv[i], sv[j])};
        EdgeKind kind = EdgeKind::Geodesic;
        if (b.large[k]) {
          kind = EdgeKind::Omega;
        } else if (b.dim == 2 && out.vertices[e.first].on_boundary && out.vertices[e.second].on_boundary) {
          const Vector mid = 0.5 * (out.vertices[e.first].pos + out.vertices[e.second].pos);
          if (b.R - mid.cwiseAbs().maxCoeff() < 1e-12 * b.R) kind = EdgeKind::Boundary;
        }
        auto it = b.edges.find(e);
        if (it == b.edges.end())
          b.edges.emplace(e, kind);
        else if (kind == EdgeKind::Omega)
          it->second = kind;
      }
  }

  // Lipschitz record and heights on each simplex's sub-grid.
  const int g = std::max(1, opts.lip_grid);
  double lip = 0.0;
  double max_h = 0.0;
  double length = 0.0;
  for (int k = 0; k < ns; ++k) {
    const std::vector<int>& sv = out.simplices[k];
    std::vector<Eigen::VectorXi> lat;
    if (b.dim == 1) {
      for (int i = 0; i <= g; ++i) {
        Eigen::VectorXi q(2);
        q << g - i, i;
        lat.push_back(q);
      }
    } else {
      for (int i = 0; i <= g; ++i)
        for (int j = 0; i + j <= g; ++j) {
          Eigen::VectorXi q(3);
          q << i, j, g - i - j;
          lat.push_back(q);
        }
    }
    std::vector<Point> img;
    std::vector<Vector> pos;
    for (const Eigen::VectorXi& q : lat) {
      const Vector w = q.cast<double>() / g;
      img.push_back(b.simplex_at(k, w));
      max_h = std::max(max_h, std::abs(ctx.height(img.back())));
      Vector p = Vector::Zero(b.dim);
      for (std::size_t i = 0; i < sv.size(); ++i) p += w(i) * out.vertices[sv[i]].pos;
      pos.push_back(p);
    }
    for (std::size_t i = 0; i < lat.size(); ++i)
      for (std::size_t j = i + 1; j < lat.size(); ++j) {
        if ((lat[i] - lat[j]).cwiseAbs().sum() != 2) continue;
        const double dd = (pos[i] - pos[j]).norm();
        const double di = distance(img[i], img[j]);
        lip = std::max(lip, di / dd);
        if (b.dim == 1) length += di;
      }
  }
  out.lipschitz = lip;
  out.lipschitz_unit = lip * b.R;
  out.c_fill = out.lipschitz_unit / (out.input_lipschitz + 1.0);
  out.max_abs_h = max_h;
  out.path_length = b.dim == 1 ? length : 0.0;

  // Boundary agreement at boundary vertices and boundary-edge midpoints.
  double res = 0.0;
  for (int v = 0; v < nv; ++v)
    if (out.vertices[v].on_boundary) res = std::max(res, distance(out.images[v], b.alpha_at_param(out.vertices[v].boundary_param)));
  for (const auto& [e, kind] : b.edges) {
    if (kind != EdgeKind::Boundary) continue;
    const Vector mid = 0.5 * (out.vertices[e.first].pos + out.vertices[e.second].pos);
    res = std::max(res, distance(b.edge_at(e.first, e.second, 0.5), b.alpha_at_param(b.perimeter(mid(0), mid(1)))));
  }
  out.boundary_residual = res;
  out.omega_faces = static_cast<int>(b.oc.faces().size());
  out.omega_checks = b.oc.checks();
  return out;
}

}  // namespace horolab
