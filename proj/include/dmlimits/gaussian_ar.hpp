#pragma once

#include <span>
#include <vector>

#include "dmlimits/dm_bounds.hpp"
#include "dmlimits/numerics.hpp"

namespace dmlimits {

// Chain X' = X/2 + N(0, (3/4) I) on R^n with drift function V(x) = |x|^2/k + 1.
struct GaussianArConfig {
  explicit GaussianArConfig(int n, double k = 100.0);
  int n;
  double k;
};

struct DriftParams {
  double lambda;
  double K;
};

// Smallest d accepted by drift_params: 1 + n/k.
double min_level(const GaussianArConfig& cfg);

DriftParams drift_params(const GaussianArConfig& cfg, double d);
Probability minorization_eps(const GaussianArConfig& cfg, double d, double a);

struct BaxendaleOptimum {
  BoundReport best;
  double a;
  double d;
};

inline constexpr int kBaxendaleGrid = 200;

BaxendaleOptimum optimize_baxendale(const GaussianArConfig& cfg, Exec exec = Exec::parallel);

Probability eps_upper_from_diameter(double D);

// 1 / chi_square_cdf(D^2/4, n); +inf when the CDF underflows.
double alpha_n(double D, int n);

// 1 - [1 - 2 Phi(-D/(2 sqrt 3))]^(1/floor(alpha_n(D))).
double gaussian_floor_gap(double D, int n);

struct RhoStar {
  Probability rho;
  double gap;
  double argmin_D;
};

// Beyond this D the bracket exceeds 1 - 1e-12.
double rho_star_search_limit();

RhoStar rho_star_lower(int n, Exec exec = Exec::parallel);

Probability rosenthal_side_lower(int n);
Probability true_rate_reference();

struct CurveRow {
  int n;
  double rho_n_star;
  double rosenthal_side_lower;
  double baxendale_optimum;
};

std::vector<CurveRow> curve(std::span<const int> n_list, double k, Exec exec = Exec::parallel);

}  // namespace dmlimits
