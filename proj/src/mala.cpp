#include "dmlimits/mala.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace dmlimits {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

constexpr int kBreakpointCandidates = 256;
constexpr double kBoundarySlack = 1e-12;
constexpr double kInvSqrt2 = 0.70710678118654752440;

// h = n^-gamma, checked against h*M < 1 (strict) or h*M <= 1/sqrt 2.
double step_for(double n, double gamma, double M, bool strict_one, const char* who) {
  require(n >= 1.0 && std::isfinite(n), "n must be finite and >= 1");
  require(gamma > 0.0, "gamma must be > 0");
  require(M > 0.0, "M must be > 0");
  const double h = step_size(n, gamma);
  const bool ok = strict_one ? h * M < 1.0 : h * M <= kInvSqrt2 * (1.0 + kBoundarySlack);
  require(ok, std::string(who) + " requires h*M " + (strict_one ? "< 1" : "<= 1/sqrt(2)") +
                  " with h = n^-gamma; got h*M = " + fmt(h * M) + ", increase n");
  return h;
}

}  // namespace

MalaTarget MalaTarget::standard_normal(int n, double h) {
  MalaTarget t{[](double x) { return 0.5 * x * x; }, [](double x) { return x; }, 1.0,
               1.0 / std::sqrt(2.0 * std::numbers::pi), n, h};
  t.validate();
  return t;
}

void MalaTarget::validate() const {
  require(n >= 1, "target dimension must be >= 1");
  require(h > 0.0 && std::isfinite(h), "step h must be finite and > 0");
  require(M > 0.0 && G > 0.0, "M and G must be > 0");
  require(static_cast<bool>(neg_log_g) && static_cast<bool>(grad), "target needs -log g and its derivative");
}

double MalaTarget::f(const Eigen::VectorXd& x) const {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += neg_log_g(x(i));
  return s;
}

Eigen::VectorXd MalaTarget::gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) g(i) = grad(x(i));
  return g;
}

double log_proposal_density(const MalaTarget& target, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  require(x.size() == target.n && y.size() == target.n, "state dimension does not match the target");
  return -(y - x + target.h * target.gradient(x)).squaredNorm() / (4.0 * target.h);
}

double log_accept_ratio(const MalaTarget& target, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const double r = target.f(x) - target.f(y) + log_proposal_density(target, y, x) - log_proposal_density(target, x, y);
  return std::min(0.0, r);
}

Probability accept_prob(const MalaTarget& target, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return Probability::clamped(std::exp(log_accept_ratio(target, x, y)));
}

MalaStep step(const MalaTarget& target, const Eigen::VectorXd& x, std::mt19937_64& rng) {
  require(x.size() == target.n, "state dimension does not match the target");
  std::normal_distribution<double> normal;
  const double scale = std::sqrt(2.0 * target.h);
  Eigen::VectorXd y = x - target.h * target.gradient(x);
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += scale * normal(rng);
  std::uniform_real_distribution<double> unif;
  if (std::log(unif(rng)) < log_accept_ratio(target, x, y)) return {std::move(y), true};
  return {x, false};
}

MalaStep step(const MalaTarget& target, const Eigen::VectorXd& x, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return step(target, x, rng);
}

SimulationSummary simulate(const MalaTarget& target, std::uint64_t steps, std::uint64_t seed) {
  target.validate();
  require(steps > 0, "simulation needs at least one step");
  std::mt19937_64 rng(seed);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(target.n);
  const std::uint64_t thin = std::max<std::uint64_t>(1, steps / kKsSamples);
  std::vector<double> kept;
  kept.reserve(static_cast<std::size_t>(steps / thin + 1));
  std::uint64_t accepted = 0;
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t i = 1; i <= steps; ++i) {
    auto s = step(target, x, rng);
    accepted += s.accepted ? 1 : 0;
    x = std::move(s.state);
    const double v = x(0);
    const double delta = v - mean;
    mean += delta / static_cast<double>(i);
    m2 += delta * (v - mean);
    if (i % thin == 0) kept.push_back(v);
  }
  std::sort(kept.begin(), kept.end());
  const double N = static_cast<double>(kept.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const double F = std_normal_cdf(kept[i]);
    ks = std::max({ks, (static_cast<double>(i) + 1.0) / N - F, F - static_cast<double>(i) / N});
  }
  return {steps, static_cast<double>(accepted) / static_cast<double>(steps), mean,
          m2 / static_cast<double>(steps), ks};
}

double step_size(double n, double gamma) { return std::pow(n, -gamma); }

Probability eps_upper(double D, double h, double M) {
  require(D > 0.0, "diameter D must be > 0");
  require(h > 0.0 && M >= 0.0, "h must be > 0 and M >= 0");
  require(h * M < 1.0, "eps_upper requires h*M < 1, got " + fmt(h * M));
  return two_sided_tail((1.0 - h * M) * D / (2.0 * std::sqrt(2.0 * h)));
}

double floor_A_gap(double D, double n, double h, double G, double M) {
  const double q = eps_upper(D, h, M);
  const double GD = G * D;
  double e = 1.0;
  if (GD < 1.0) {
    const double t = -n * std::log(GD);
    // Past exp(40) the floor no longer changes 1/floor(exp(t)) at double precision.
    e = t > 40.0 ? std::exp(-t) : 1.0 / static_cast<double>(floor_guarded(std::exp(t)));
    e = std::min(e, 1.0);
  }
  return power_gap(q, e);
}

MalaFloor rho_opt_lower_A(double n, double gamma, double G, double M, Exec exec) {
  require(G > 0.0, "G must be > 0");
  const double h = step_for(n, gamma, M, true, "rho_opt_lower_A");
  auto objective = [&](double D) { return -floor_A_gap(D, n, h, G, M); };
  const double split = 0.5 / G;
  const auto inner = minimize_scalar(objective, Interval(1e-9 * split, split), 1e-12, exec);
  const auto outer = minimize_scalar(objective, Interval(split, 1.0 / G), 1e-12, exec);
  double best_gap = -inner.min, best_D = inner.argmin;
  if (-outer.min > best_gap) {
    best_gap = -outer.min;
    best_D = outer.argmin;
  }
  for (int k = 1; k <= kBreakpointCandidates; ++k) {
    const double D = std::pow(k + 1.0, -1.0 / n) / G;
    const double gap = power_gap(eps_upper(D, h, M), 1.0 / k);
    if (gap > best_gap) {
      best_gap = gap;
      best_D = D;
    }
  }
  return {Probability::clamped(1.0 - best_gap), best_gap, best_D};
}

Probability regional_floor(double n, double gamma, double G) {
  return Probability::clamped(1.0 - two_sided_tail(std::pow(n, 0.5 * gamma) / (8.0 * G)));
}

std::vector<FloorScanPoint> scan_floor_A(double n, double gamma, double G, double M, std::span<const double> Ds) {
  const double h = step_for(n, gamma, M, true, "scan_floor_A");
  std::vector<FloorScanPoint> out;
  out.reserve(Ds.size());
  for (double D : Ds) {
    const double gap = floor_A_gap(D, n, h, G, M);
    out.push_back({D, 1.0 - gap, gap});
  }
  return out;
}

MalaFloorB rho_opt_lower_B(double n, double gamma, double G, double M) {
  require(G > 0.0, "G must be > 0");
  const double h = step_for(n, gamma, M, false, "rho_opt_lower_B");
  const double gap = two_sided_tail((1.0 - h * M) / (4.0 * std::sqrt(2.0 * h) * G));
  const double simplified_gap = two_sided_tail(std::pow(n, 0.5 * gamma) / (8.0 * G));
  return {Probability::clamped(1.0 - gap), gap, Probability::clamped(1.0 - simplified_gap), simplified_gap,
          1.0 - h * M >= kInvSqrt2};
}

std::vector<AsymptoticRow> asymptotic_table(double gamma, double gamma_prime, double G, double M,
                                            std::span<const double> n_list, Exec exec) {
  for (double n : n_list) step_for(n, gamma, M, false, "asymptotic_table");
  // Rows run in parallel; each row's own search stays serial.
  const auto gaps_A = kernels::tabulate(
      n_list.size(), [&](std::size_t i) { return rho_opt_lower_A(n_list[i], gamma, G, M, Exec::serial).gap; }, exec);
  std::vector<AsymptoticRow> rows;
  rows.reserve(n_list.size());
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const double n = n_list[i];
    const auto B = rho_opt_lower_B(n, gamma, G, M);
    const double scale = std::pow(n, gamma_prime);
    rows.push_back({n, 1.0 - gaps_A[i], B.value, scale * gaps_A[i], scale * B.gap});
  }
  return rows;
}

}  // namespace dmlimits
