#include <algorithm>
#include <cmath>

#include "horolab/divergence.hpp"
#include "horolab/error.hpp"
#include "horolab/suites.hpp"

namespace horolab {

namespace {

SuiteReport start(const std::string& suite, const RunConfig& cfg) {
  SuiteReport r;
  r.suite = suite;
  r.n = cfg.n;
  r.seed = cfg.seed;
  return r;
}

std::string tag(double v) { return format_double(v); }

Point horocycle_point(double s) {
  Matrix u = Matrix::Identity(2, 2);
  u(0, 1) = s;
  return Point::from_rep(SpecialLinear(u));
}

// Sum of chord distances along s -> [u(s)] on a uniform grid of k pieces.
double chord_length(double s, long k) {
  double total = 0.0;
  Point prev = horocycle_point(0.0);
  for (long i = 1; i <= k; ++i) {
    Point next = horocycle_point(s * static_cast<double>(i) / static_cast<double>(k));
    total += distance(prev, next);
    prev = std::move(next);
  }
  return total;
}

}  // namespace

// ---------------------------------------------------------------- rank 1

SuiteReport distort_rank1(const RunConfig& cfg) {
  if (cfg.n != 2) fail(ErrorKind::InvalidArgument, "rank1 distortion needs n = 2");
  SuiteReport rep = start("distort_rank1", cfg);
  const double sq2 = std::sqrt(2.0);
  const Point o = base_point(2);
  std::vector<double> amb, log_len;
  double worst = 0.0;
  for (double target = 2.0; target <= 16.0; target += 2.0) {
    const double s = 2.0 * std::sinh(target / 2.0);
    const double ambient = sq2 * distance(o, horocycle_point(s));
    const long k = std::max(64L, static_cast<long>(std::ceil(s / 0.05)));
    const double lk = chord_length(s, k), l2k = chord_length(s, 2 * k);
    const double intrinsic = sq2 * (4.0 * l2k - lk) / 3.0;
    const double rel = std::abs(intrinsic / (2.0 * std::sinh(ambient / 2.0)) - 1.0);
    rep.add_le("closed_form_d" + tag(target), rel, 1e-6);
    worst = std::max(worst, rel);
    amb.push_back(ambient);
    log_len.push_back(std::log(intrinsic));
  }
  const double slope = fit_line(amb, log_len).slope;
  rep.add_le("log_length_slope_deviation", std::abs(slope - 0.5), 0.02);
  rep.fit("log_length_slope", slope, slope, slope);
  rep.fit("closed_form_worst", worst, 0.0, worst);
  return rep;
}

// ---------------------------------------------------------------- rank >= 2 paths

std::pair<Point, Point> z_pair_at_distance(const HorosphereContext& ctx, double d, Rng& rng) {
  const int n = ctx.dim();
  const Point za = retract_to_Z(sample_ball(base_point(n), 1.0, rng), ctx);
  Matrix x = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) x(i, j) = rng.normal();
  const Matrix g = za.horo_coords().group().matrix();
  // [n a exp(sX)] keeps the A-part, so the height is unchanged.
  auto along = [&](double s) { return Point::from_rep(SpecialLinear::normalized(g * nilpotent_exp(Matrix(s * x)).matrix())); };
  double lo = 0.0, hi = 1.0;
  while (distance(za, along(hi)) < d) hi *= 2.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (distance(za, along(mid)) < d ? lo : hi) = mid;
  }
  return {za, along(hi)};
}

SuiteReport distort_rank2_paths(const RunConfig& cfg) {
  if (cfg.n < 3) fail(ErrorKind::InvalidArgument, "rank2 path distortion needs n >= 3");
  SuiteReport rep = start("distort_rank2_paths", cfg);
  const HorosphereContext ctx = cfg.context();
  Rng rng(mix_seed(cfg.seed, 11));
  std::vector<double> la, ll;
  double worst_res = 0, worst_h = 0, worst_ratio = 0;
  const int pairs = cfg.samples_for("rank2_paths", 8);
  for (double d : {2.0, 3.0, 5.0, 8.0, 12.0, 20.0}) {
    double amb_sum = 0, len_sum = 0, worst_len = 0;
    for (int p = 0; p < pairs; ++p) {
      const auto [za, zb] = z_pair_at_distance(ctx, d, rng);
      WhitneyOptions opts;
      opts.seed = mix_seed(cfg.seed, 1100 + 10 * static_cast<std::uint64_t>(d) + p);
      opts.omega.anchor_cap = cfg.calibration.anchor_cap;
      const FilledDisk f = whitney_fill(ZSphere{0, {za, zb}}, ctx, opts);
      const double ambient = distance(za, zb);
      amb_sum += ambient;
      len_sum += f.path_length;
      worst_len = std::max(worst_len, f.path_length);
      worst_ratio = std::max(worst_ratio, f.path_length / (ambient + 1.0));
      worst_res = std::max(worst_res, f.boundary_residual);
      worst_h = std::max(worst_h, f.max_abs_h);
    }
    rep.add_le("length_cap_d" + tag(d), worst_len, cfg.calibration.path_cap * (d + 1.0));
    la.push_back(std::log(amb_sum / pairs));
    ll.push_back(std::log(len_sum / pairs));
  }
  const double slope = fit_line(la, ll).slope;
  rep.add_le("loglog_slope_deviation", std::abs(slope - 1.0), 0.2);
  rep.add_le("endpoint_residual", worst_res, 1e-9);
  rep.add_le("path_on_Z", worst_h, 1e-7);
  rep.fit("loglog_slope", slope, slope, slope);
  rep.fit("path_cap", worst_ratio, worst_ratio, worst_ratio);
  return rep;
}

SuiteReport run_distort(const std::string& mode, const RunConfig& cfg) {
  if (mode == "rank1") return distort_rank1(cfg);
  if (mode == "rank2_paths") return distort_rank2_paths(cfg);
  fail(ErrorKind::InvalidArgument, "unknown distortion mode '" + mode + "'");
}

// ---------------------------------------------------------------- divergence

SuiteReport divergence(const RunConfig& cfg) {
  if (cfg.n < 3) fail(ErrorKind::InvalidArgument, "divergence needs n >= 3");
  SuiteReport rep = start("divergence", cfg);
  const HorosphereContext ctx = cfg.context();
  const int samples = cfg.samples_for("divergence", cfg.n == 3 ? 32 : 48);
  std::vector<double> lip_ratio, lr, lz;
  double worst_h = 0;
  for (double r : {2.0, 4.0, 8.0, 16.0}) {
    const FlatSphere fs = flat_sphere_on_Z(point_at_height(ctx, r), ctx, samples);
    worst_h = std::max(worst_h, fs.max_abs_h);
    if (r <= 8.0) lip_ratio.push_back(fs.lipschitz / r);
    if (cfg.n == 3) {
      const int k = static_cast<int>(fs.local_points.size());
      const ZMeshDistance z = z_mesh_distance(fs.local_points, 0, k / 2, ctx, 24, -r);
      rep.add("antipodal_in_Z_r" + tag(r), z.distance, distance(fs.local_points[0], fs.local_points[k / 2]), true);
      lr.push_back(std::log(r));
      lz.push_back(std::log(z.distance));
    }
  }
  const auto [mn, mx] = std::minmax_element(lip_ratio.begin(), lip_ratio.end());
  rep.add_le("lip_over_r_spread", *mx / *mn, 2.0);
  rep.add_le("sphere_on_Z", worst_h, 1e-7);
  if (cfg.n == 3) {
    const LineFit f = fit_line(lr, lz);
    rep.add_ge("antipodal_exponent", f.slope, 1.2);
    rep.fit("antipodal_exponent", f.slope, f.slope_lo, f.slope_hi);
  }
  return rep;
}

// ---------------------------------------------------------------- fill

FillResult fill_sphere(const SphereFile& input, const RunConfig& cfg) {
  const HorosphereContext ctx = compute_margins(BusemannConfig::make(input.tau, cfg.policy));
  WhitneyOptions opts;
  opts.seed = cfg.seed;
  opts.omega.anchor_cap = cfg.calibration.anchor_cap;
  const FilledDisk d = whitney_fill(input.sphere, ctx, opts);

  SuiteReport rep;
  rep.suite = "fill";
  rep.n = input.n;
  rep.seed = cfg.seed;
  rep.add_le("boundary_residual", d.boundary_residual, 1e-9);
  rep.add_le("on_Z", d.max_abs_h, 1e-7);
  if (d.m == 0) {
    const double ambient = distance(input.sphere.points[0], input.sphere.points[1]);
    rep.add_le("path_length", d.path_length, cfg.calibration.path_cap * (ambient + 1.0));
  } else {
    rep.add_le("c_fill", d.c_fill, cfg.calibration.c_fill_cap);
  }
  int omega_fail = 0;
  for (const OmegaCheck& c : d.omega_checks) omega_fail += c.pass ? 0 : 1;
  rep.add_le("omega_check_failures", omega_fail, 0);
  rep.fit("lipschitz_unit", d.lipschitz_unit, d.lipschitz_unit, d.lipschitz_unit);
  return FillResult{rep, disk_to_json(d, ctx, cfg.seed)};
}

}  // namespace horolab
