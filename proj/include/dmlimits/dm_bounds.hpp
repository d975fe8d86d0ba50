#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "dmlimits/numerics.hpp"

namespace dmlimits {

// Parameters of the drift (A1), minorization (A2) and aperiodicity (A3) conditions.
struct DmParamsA {
  DmParamsA(double lambda, double K, double epsilon, double beta);
  double lambda;
  double K;
  double epsilon;
  double beta;
};

// Parameters of the (B1)-(B3) conditions. b3() is false when d is too small.
struct DmParamsB {
  DmParamsB(double eta, double L, double epsilon, double d);
  bool b3() const noexcept;
  double b3_threshold() const noexcept;  // 2L / (1 - eta)
  double eta;
  double L;
  double epsilon;
  double d;
};

enum class Branch { eps_lt_one, eps_eq_one, lambda_zero };

std::string_view to_string(Branch branch);

struct BoundReport {
  Probability value;
  double gap = 0.0;  // 1 - value, computed without cancellation
  std::optional<double> alpha_star;
  std::optional<std::int64_t> alpha_floor;
  std::optional<double> lambda_tilde;
  std::optional<double> K_tilde;
  std::optional<double> alpha_double_star;
  Branch branch = Branch::eps_lt_one;
};

double baxendale_alpha_star(const DmParamsA& p);

// max{lambda, (1-eps)^(1/alpha_*)}; lambda when eps = 1.
BoundReport baxendale_bound(const DmParamsA& p);

// Same as baxendale_bound with alpha_* replaced by its floor.
BoundReport paraoptima_lower(const DmParamsA& p);

BoundReport rosenthal_bound(const DmParamsB& p);
Probability rosenthal_paraoptima_lower(const DmParamsB& p);

Probability pic1_stationary_mass_lower(double lambda, double K);

Probability chain_specific_lower_A(Probability eps_C, Probability pi_C);
Probability chain_specific_lower_B(Probability eps_C);

}  // namespace dmlimits
