#include "dmlimits/dm_bounds.hpp"

#include <cmath>
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

// Shared tail of the A-condition bounds once the exponent alpha is known.
BoundReport finish_A(const DmParamsA& p, double alpha) {
  BoundReport r;
  const double log_term = std::log1p(-p.epsilon) / alpha;
  const double eps_part = std::exp(log_term);
  if (p.lambda >= eps_part) {
    r.value = Probability(p.lambda);
    r.gap = 1.0 - p.lambda;
  } else {
    r.value = Probability::clamped(eps_part);
    r.gap = -std::expm1(log_term);
  }
  r.branch = p.lambda == 0.0 ? Branch::lambda_zero : Branch::eps_lt_one;
  return r;
}

BoundReport eps_one_A(const DmParamsA& p) {
  BoundReport r;
  r.value = Probability(p.lambda);
  r.gap = 1.0 - p.lambda;
  r.branch = Branch::eps_eq_one;
  return r;
}

void require_b3(const DmParamsB& p) {
  require(p.b3(), "(B3) requires d > 2L/(1-eta) = " + fmt(p.b3_threshold()) + ", got d = " + fmt(p.d));
}

}  // namespace

DmParamsA::DmParamsA(double lambda_, double K_, double epsilon_, double beta_)
    : lambda(lambda_), K(K_), epsilon(epsilon_), beta(beta_) {
  require(lambda >= 0.0 && lambda < 1.0, "lambda must lie in [0, 1), got " + fmt(lambda));
  require(K >= 1.0 && std::isfinite(K), "K must be finite and >= 1, got " + fmt(K));
  require(epsilon > 0.0 && epsilon <= 1.0, "epsilon must lie in (0, 1], got " + fmt(epsilon));
  require(beta > 0.0 && beta <= 1.0, "beta must lie in (0, 1], got " + fmt(beta));
}

DmParamsB::DmParamsB(double eta_, double L_, double epsilon_, double d_)
    : eta(eta_), L(L_), epsilon(epsilon_), d(d_) {
  require(eta >= 0.0 && eta < 1.0, "eta must lie in [0, 1), got " + fmt(eta));
  require(L >= 0.0 && std::isfinite(L), "L must be finite and >= 0, got " + fmt(L));
  require(epsilon > 0.0 && epsilon <= 1.0, "epsilon must lie in (0, 1], got " + fmt(epsilon));
  require(d > 0.0 && std::isfinite(d), "d must be finite and > 0, got " + fmt(d));
}

double DmParamsB::b3_threshold() const noexcept { return 2.0 * L / (1.0 - eta); }

bool DmParamsB::b3() const noexcept { return d > b3_threshold(); }

std::string_view to_string(Branch branch) {
  switch (branch) {
    case Branch::eps_lt_one: return "eps_lt_one";
    case Branch::eps_eq_one: return "eps_eq_one";
    case Branch::lambda_zero: return "lambda_zero";
  }
  return "unknown";
}

double baxendale_alpha_star(const DmParamsA& p) {
  require(p.epsilon < 1.0, "alpha_* is undefined at epsilon = 1");
  if (p.lambda == 0.0) return 1.0;
  const double log_inv_lambda = -std::log(p.lambda);
  // log((K - eps)/(1 - eps)) = log1p((K - 1)/(1 - eps))
  return (std::log1p((p.K - 1.0) / (1.0 - p.epsilon)) + log_inv_lambda) / log_inv_lambda;
}

BoundReport baxendale_bound(const DmParamsA& p) {
  if (p.epsilon == 1.0) return eps_one_A(p);
  const double alpha_star = baxendale_alpha_star(p);
  BoundReport r = finish_A(p, alpha_star);
  r.alpha_star = alpha_star;
  r.alpha_floor = floor_guarded(alpha_star);
  return r;
}

BoundReport paraoptima_lower(const DmParamsA& p) {
  if (p.epsilon == 1.0) return eps_one_A(p);
  const double alpha_star = baxendale_alpha_star(p);
  const auto alpha = floor_guarded(alpha_star);
  BoundReport r = finish_A(p, static_cast<double>(alpha));
  r.alpha_star = alpha_star;
  r.alpha_floor = alpha;
  return r;
}

BoundReport rosenthal_bound(const DmParamsB& p) {
  require_b3(p);
  BoundReport r;
  const double lambda_tilde = (1.0 + 2.0 * p.L + p.eta * p.d) / (1.0 + p.d);
  const double K_tilde = 1.0 + 2.0 * p.eta * p.d + 2.0 * p.L;
  r.lambda_tilde = lambda_tilde;
  r.K_tilde = K_tilde;
  if (p.epsilon == 1.0) {
    r.value = Probability(lambda_tilde);
    r.gap = (p.d - 2.0 * p.L - p.eta * p.d) / (1.0 + p.d);
    r.branch = Branch::eps_eq_one;
    return r;
  }
  const double log_inv = -std::log(lambda_tilde);
  const double alpha = (std::log(K_tilde) - std::log1p(-p.epsilon) + log_inv) / log_inv;
  const double log_term = std::log1p(-p.epsilon) / alpha;
  r.alpha_double_star = alpha;
  r.value = Probability::clamped(std::exp(log_term));
  r.gap = -std::expm1(log_term);
  r.branch = Branch::eps_lt_one;
  return r;
}

Probability rosenthal_paraoptima_lower(const DmParamsB& p) {
  require_b3(p);
  return Probability::clamped(1.0 - p.epsilon);
}

Probability pic1_stationary_mass_lower(double lambda, double K) {
  require(lambda >= 0.0 && lambda < 1.0, "lambda must lie in [0, 1), got " + fmt(lambda));
  require(K >= 1.0 && std::isfinite(K), "K must be finite and >= 1, got " + fmt(K));
  if (lambda == 0.0) return Probability(1.0);
  const double log_inv = -std::log(lambda);
  return Probability::clamped(log_inv / (std::log(K) + log_inv));
}

Probability chain_specific_lower_A(Probability eps_C, Probability pi_C) {
  require(pi_C > 0.0, "chain_specific_lower_A requires pi(C) > 0");
  const auto m = floor_guarded(1.0 / pi_C);
  return Probability::clamped(std::pow(1.0 - eps_C, 1.0 / static_cast<double>(m)));
}

Probability chain_specific_lower_B(Probability eps_C) { return Probability::clamped(1.0 - eps_C); }

}  // namespace dmlimits
