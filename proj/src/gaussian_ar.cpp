#include "dmlimits/gaussian_ar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace dmlimits {

namespace {

// Left limits of the piecewise objective: just above D_k the floor equals k.
constexpr int kBreakpointCandidates = 256;

double tail_for_diameter(double D) { return two_sided_tail(D / (2.0 * std::numbers::sqrt3)); }

}  // namespace

GaussianArConfig::GaussianArConfig(int n_, double k_) : n(n_), k(k_) {
  if (n < 1) throw PreconditionError("dimension n must be >= 1");
  if (!(k > 0.0 && std::isfinite(k))) throw PreconditionError("k must be finite and > 0");
}

double min_level(const GaussianArConfig& cfg) { return 1.0 + cfg.n / cfg.k; }

DriftParams drift_params(const GaussianArConfig& cfg, double d) {
  if (!(d > min_level(cfg)))
    throw PreconditionError("drift requires d > 1 + n/k = " + std::to_string(min_level(cfg)));
  const double c = 0.75 + 0.75 * cfg.n / cfg.k;
  return {0.25 + c / d, d / 4.0 + c};
}

Probability minorization_eps(const GaussianArConfig& cfg, double d, double a) {
  if (!(a > 0.0)) throw PreconditionError("minorization requires a > 0");
  if (!(d > 1.0)) throw PreconditionError("minorization requires d > 1");
  const double log_eps = -0.5 * cfg.n * std::log1p(a) - cfg.k * (a + 1.0) * (d - 1.0) / (6.0 * a);
  return Probability::clamped(std::exp(log_eps));
}

BaxendaleOptimum optimize_baxendale(const GaussianArConfig& cfg, Exec exec) {
  const double d0 = min_level(cfg);
  const double la_lo = std::log(1e-3), la_hi = std::log(1e3);
  const double ld_lo = std::log(1e-6), ld_hi = std::log(1e3);
  // Minimizing -gap keeps the objective informative when the bound rounds to 1.
  auto objective = [&](double la, double ld) {
    const double a = std::exp(la), d = d0 + std::exp(ld);
    const auto dp = drift_params(cfg, d);
    const double eps = minorization_eps(cfg, d, a);
    if (!(eps > 0.0) || !std::isfinite(dp.K)) return 0.0;
    return -baxendale_bound(DmParamsA(dp.lambda, dp.K, eps, 1.0)).gap;
  };

  constexpr int G = kBaxendaleGrid;
  const double sa = (la_hi - la_lo) / (G - 1), sd = (ld_hi - ld_lo) / (G - 1);
  const auto values = kernels::tabulate(
      static_cast<std::size_t>(G) * G,
      [&](std::size_t idx) {
        const auto i = static_cast<int>(idx / G), j = static_cast<int>(idx % G);
        return objective(la_lo + sa * i, ld_lo + sd * j);
      },
      exec);
  const auto best = kernels::argmin(values);
  double la = la_lo + sa * static_cast<double>(best / G);
  double ld = ld_lo + sd * static_cast<double>(best % G);
  double fbest = values[best];

  // The bound is nonincreasing in eps, so for fixed d the best a maximizes
  // eps(a, d); that maximizer solves 3n a^2 = k(d-1)(1+a).
  auto best_a = [&](double ld) {
    const double c = cfg.k * (d0 + std::exp(ld) - 1.0);
    const double a = (c + std::sqrt(c * c + 12.0 * cfg.n * c)) / (6.0 * cfg.n);
    return std::clamp(std::log(a), la_lo, la_hi);
  };
  const auto profile =
      minimize_scalar([&](double x) { return objective(best_a(x), x); }, Interval(ld_lo, ld_hi), 1e-12, exec);
  if (profile.min < fbest) {
    ld = profile.argmin;
    la = best_a(ld);
    fbest = profile.min;
  }

  for (int sweep = 0; sweep < 20; ++sweep) {
    const double before = fbest;
    const auto ra = minimize_scalar([&](double x) { return objective(x, ld); },
                                    Interval(std::max(la_lo, la - sa), std::min(la_hi, la + sa)), 1e-12, exec);
    if (ra.min < fbest) {
      la = ra.argmin;
      fbest = ra.min;
    }
    const auto rd = minimize_scalar([&](double x) { return objective(la, x); },
                                    Interval(std::max(ld_lo, ld - sd), std::min(ld_hi, ld + sd)), 1e-12, exec);
    if (rd.min < fbest) {
      ld = rd.argmin;
      fbest = rd.min;
    }
    if (!(fbest < before)) break;
  }

  const double a = std::exp(la), d = d0 + std::exp(ld);
  const auto dp = drift_params(cfg, d);
  const double eps = std::max(minorization_eps(cfg, d, a).value(), std::numeric_limits<double>::min());
  return {baxendale_bound(DmParamsA(dp.lambda, dp.K, eps, 1.0)), a, d};
}

Probability eps_upper_from_diameter(double D) {
  if (!(D > 0.0)) throw PreconditionError("diameter D must be > 0");
  return two_sided_tail(D / (2.0 * std::numbers::sqrt3));
}

double alpha_n(double D, int n) {
  if (!(D > 0.0)) throw PreconditionError("diameter D must be > 0");
  const double cdf = chi_square_cdf(D * D / 4.0, n);
  if (!(cdf > 0.0)) return std::numeric_limits<double>::infinity();
  return 1.0 / cdf;
}

double gaussian_floor_gap(double D, int n) {
  const double alpha = alpha_n(D, n);
  if (!std::isfinite(alpha) || alpha >= 9.0e18) return 0.0;
  const auto k = floor_guarded(alpha);
  return power_gap(tail_for_diameter(D), 1.0 / static_cast<double>(k));
}

double rho_star_search_limit() {
  // Solve 2 Phi(-x) = 1e-12 by bisection, then D = 2 sqrt(3) x.
  double lo = 0.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (two_sided_tail(mid) > 1e-12 ? lo : hi) = mid;
  }
  return 2.0 * std::numbers::sqrt3 * hi;
}

RhoStar rho_star_lower(int n, Exec exec) {
  if (n < 1) throw PreconditionError("dimension n must be >= 1");
  const double dmax = rho_star_search_limit();
  const auto grid = minimize_scalar([&](double D) { return -gaussian_floor_gap(D, n); }, Interval(1e-6, dmax),
                                    1e-10, exec);
  double best_gap = -grid.min;
  double best_D = grid.argmin;
  const auto candidates = kernels::tabulate(
      kBreakpointCandidates,
      [&](std::size_t i) {
        const double k = static_cast<double>(i + 1);
        const double D = 2.0 * std::sqrt(chi_square_quantile(1.0 / (k + 1.0), n));
        return power_gap(tail_for_diameter(D), 1.0 / k);
      },
      exec);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i] > best_gap) {
      best_gap = candidates[i];
      best_D = 2.0 * std::sqrt(chi_square_quantile(1.0 / (static_cast<double>(i) + 2.0), n));
    }
  }
  return {Probability::clamped(1.0 - best_gap), best_gap, best_D};
}

Probability rosenthal_side_lower(int n) {
  const double m = chi_square_median(n);
  return Probability::clamped(1.0 - two_sided_tail(std::sqrt(m / 3.0)));
}

Probability true_rate_reference() { return Probability(0.5); }

std::vector<CurveRow> curve(std::span<const int> n_list, double k, Exec exec) {
  std::vector<CurveRow> rows;
  rows.reserve(n_list.size());
  for (int n : n_list) {
    const GaussianArConfig cfg(n, k);
    rows.push_back({n, rho_star_lower(n, exec).rho, rosenthal_side_lower(n), optimize_baxendale(cfg, exec).best.value});
  }
  return rows;
}

}  // namespace dmlimits
