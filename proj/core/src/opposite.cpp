#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "horolab/chambers.hpp"
#include "horolab/error.hpp"

namespace horolab {

namespace {

double min_abs(const Vector& v) { return v.cwiseAbs().minCoeff(); }

// Worst margin of (1) e against d and (2) the chambers of E_{e,d} against the standard chamber.
double pair_margin(const Chamber& e, const Chamber& d) {
  const double m1 = min_abs(transversality_minors(e, d));
  if (m1 <= default_policy().transversality) return m1;
  double m2 = std::numeric_limits<double>::infinity();
  const Chamber c = Chamber::standard(e.dim());
  for (const Chamber& ch : boundary_chambers(flat_spanned(e, d))) m2 = std::min(m2, min_abs(transversality_minors(ch, c)));
  return std::min(m1, m2);
}

// Smallest s with d_N(conj(v, s, u)) < 1.
double push_time_for(const UnitUpper& u, const CartanVector& v) {
  if (d_N(u) < 1.0) return 0.0;
  double hi = 1.0;
  while (d_N(conjugate_by_exp(v, hi, u)) >= 1.0) hi *= 2.0;
  double lo = 0.0;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (d_N(conjugate_by_exp(v, mid, u)) < 1.0 ? hi : lo) = mid;
  }
  return hi;
}

// Best-conditioned flat opposite the standard chamber, moved so that it contains the standard
// opposite chamber; returns the flat.
Flat base_flat(int n, Rng& rng, const OppositeOptions& opts) {
  const Chamber std_c = Chamber::standard(n);
  Flat e0 = find_opposite_flat(std_c, opts.flat_tries, rng);
  double best = -1.0;
  for (int k = 0; k < opts.flat_candidates; ++k) {
    Flat cand = find_opposite_flat(std_c, opts.flat_tries, rng);
    double m = std::numeric_limits<double>::infinity();
    for (const Chamber& ch : boundary_chambers(cand)) m = std::min(m, ch.standard_margin());
    if (m > best) {
      best = m;
      e0 = cand;
    }
  }
  const UnitUpper n0 = canonical_unipotent(boundary_chambers(e0).front());
  return Flat(SpecialLinear::normalized(n0.inverse().matrix() * e0.frame().matrix()));
}

[[noreturn]] void post_failure(int which, const char* what, double value) {
  std::ostringstream os;
  os << "opposite flats: post-condition (" << which << ") failed, " << what << ' ' << value;
  fail(ErrorKind::CalibrationFailure, os.str());
}

// Post-conditions for one chamber e of S_x in base coordinates.
void check_post(const Chamber& e, const Chamber& d_base, const Point& x_base, OppositeResult& res) {
  const double m1 = min_abs(transversality_minors(e, d_base));
  res.min_minor = std::min(res.min_minor, m1);
  if (m1 <= default_policy().transversality) post_failure(1, "minor", m1);
  for (const Chamber& ch : boundary_chambers(flat_spanned(e, d_base))) {
    const double m2 = ch.standard_margin();
    res.min_minor = std::min(res.min_minor, m2);
    if (!ch.unipotent()) post_failure(2, "minor", m2);
    const double r = rho_value(x_base, ch);
    res.max_rho = std::max(res.max_rho, r);
    if (r >= 1.0) post_failure(3, "rho", r);
  }
}

OppositeResult solve_shadow(const Point& x, const CartanVector& v, Rng& rng, const OppositeOptions& opts) {
  const int n = x.dim();
  const double kap = kappa(v);
  const Chamber std_opp = Chamber::standard_opposite(n);
  Rng flat_rng = rng.split(1);
  const Chamber d0 = opposite_in_flat(base_flat(n, flat_rng, opts), std_opp);

  // Certified radius of the neighborhood of the standard opposite chamber.
  Rng nb_rng = rng.split(2);
  const double required = std::max(opts.certificate_margin, opts.relative_margin * pair_margin(std_opp, d0));
  double radius = 0.0;
  for (double r = 1.0; r > 1e-9; r *= 0.5) {
    bool ok = true;
    for (int s = 0; s < opts.samples && ok; ++s) {
      const double rr = r * (s % 2 == 0 ? 1.0 : nb_rng.uniform());
      const Chamber e = Chamber::from_unipotent(random_unipotent(nb_rng, n, rr));
      ok = pair_margin(e, d0) >= required;
    }
    if (ok) {
      radius = r;
      break;
    }
  }
  if (radius == 0.0) fail(ErrorKind::CalibrationFailure, "opposite flats: no certified neighborhood of the opposite chamber");

  const double t = (radius >= 1.0 ? 0.0 : std::log(1.0 / radius) / kap) + opts.contract_margin;
  const Chamber d_base(SpecialLinear::normalized(v.exp_diag(t) * d0.frame().matrix()));

  // Push far enough that the boundary chambers of the sampled flats lie in the shadow.
  Rng push_rng = rng.split(3);
  double s_push = 0.0;
  for (int s = 0; s < 4 * opts.samples; ++s) {
    const double rr = s % 2 == 0 ? 0.999 : push_rng.uniform();
    const Chamber e = Chamber::from_unipotent(random_unipotent(push_rng, n, rr));
    for (const Chamber& ch : boundary_chambers(flat_spanned(e, d_base)))
      s_push = std::max(s_push, push_time_for(canonical_unipotent(ch), v));
  }
  s_push += std::log(opts.push_safety) / kap;

  // Translate back from the base point to x. The checks run in base coordinates, where they are
  // equivalent and better conditioned.
  const SpecialLinear p = x.horo_coords().group();
  const Point o = base_point(n);
  const Point x_base = push(o, v, s_push);
  OppositeResult res{push(x, v, s_push), d_base.translated(p), d_base, x_base, p, radius, t, s_push, 1.0, 0.0};
  Rng chk_rng = rng.split(4);
  for (int s = 0; s < opts.samples; ++s)
    check_post(s % 2 == 0 ? shadow_chamber(o, 0.999, chk_rng) : sample_shadow(o, 1.0, chk_rng), d_base, x_base, res);
  return res;
}

// Finite target set: try each candidate flat, take the smallest contraction time that makes the
// targets well opposite, and keep the candidate with the shortest resulting push.
OppositeResult solve_targets(const Point& x, const CartanVector& v, const std::vector<Chamber>& targets, Rng& rng,
                             const OppositeOptions& opts) {
  const int n = x.dim();
  const double kap = kappa(v);
  const Chamber std_opp = Chamber::standard_opposite(n);
  const SpecialLinear p = x.horo_coords().group();
  const SpecialLinear p_inv = p.inverse();
  std::vector<Chamber> local;
  for (const Chamber& c : targets) {
    local.push_back(c.translated(p_inv));
    if (!local.back().unipotent()) fail(ErrorKind::NotOpposite, "opposite flats: target chamber is not in the shadow");
  }

  Rng flat_rng = rng.split(1);
  OppositeOptions single = opts;
  single.flat_candidates = 0;
  std::optional<Chamber> best_d;
  double best_s = std::numeric_limits<double>::infinity();
  double best_t = 0.0;
  for (int k = 0; k < opts.flat_candidates; ++k) {
    const Flat e1 = base_flat(n, flat_rng, single);
    const Chamber d0 = opposite_in_flat(e1, std_opp);
    const double required = std::max(opts.certificate_margin, opts.relative_margin * pair_margin(std_opp, d0));
    for (double t = 0.0; t <= 40.0; t += 0.25) {
      const Chamber d_base(SpecialLinear::normalized(v.exp_diag(t) * d0.frame().matrix()));
      double s_push = 0.0;
      bool ok = true;
      for (const Chamber& e : local) {
        if (pair_margin(e, d_base) < required) {
          ok = false;
          break;
        }
        for (const Chamber& ch : boundary_chambers(flat_spanned(e, d_base)))
          s_push = std::max(s_push, push_time_for(canonical_unipotent(ch), v));
      }
      if (!ok) continue;
      if (s_push < best_s) {
        best_s = s_push;
        best_t = t;
        best_d = d_base;
      }
      break;
    }
  }
  if (!best_d) fail(ErrorKind::CalibrationFailure, "opposite flats: no candidate flat is opposite the targets");

  const double s_push = best_s + std::log(opts.target_safety) / kap;
  const Point x_base = push(base_point(n), v, s_push);
  OppositeResult res{push(x, v, s_push), best_d->translated(p), *best_d, x_base, p, 0.0, best_t, s_push, 1.0, 0.0};
  for (const Chamber& e : local) check_post(e, *best_d, x_base, res);
  return res;
}

}  // namespace

OppositeResult opposite_chamber_for_shadow(const Point& x, const CartanVector& v, Rng& rng, const OppositeOptions& opts) {
  return solve_shadow(x, v, rng, opts);
}

OppositeResult opposite_chamber_for_chambers(const Point& x, const CartanVector& v, const std::vector<Chamber>& targets,
                                             Rng& rng, const OppositeOptions& opts) {
  if (targets.empty()) fail(ErrorKind::InvalidArgument, "opposite flats: empty target set");
  return solve_targets(x, v, targets, rng, opts);
}

}  // namespace horolab
