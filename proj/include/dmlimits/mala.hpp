#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dmlimits/numerics.hpp"

namespace dmlimits {

// Product-form target g(x_1)...g(x_n) with f = -log of the density.
struct MalaTarget {
  std::function<double(double)> neg_log_g;  // -log g up to a constant
  std::function<double(double)> grad;       // derivative of -log g
  double M;                                 // Lipschitz constant of grad
  double G;                                 // sup g
  int n;
  double h;

  static MalaTarget standard_normal(int n, double h);
  void validate() const;

  double f(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
};

// log q(x, y) for the proposal N(x - h grad f(x), 2h I), up to a constant.
double log_proposal_density(const MalaTarget& target, const Eigen::VectorXd& x, const Eigen::VectorXd& y);
double log_accept_ratio(const MalaTarget& target, const Eigen::VectorXd& x, const Eigen::VectorXd& y);
Probability accept_prob(const MalaTarget& target, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

struct MalaStep {
  Eigen::VectorXd state;
  bool accepted;
};

MalaStep step(const MalaTarget& target, const Eigen::VectorXd& x, std::mt19937_64& rng);
MalaStep step(const MalaTarget& target, const Eigen::VectorXd& x, std::uint64_t seed);

struct SimulationSummary {
  std::uint64_t n_steps;
  double accept_rate;
  double mean;
  double variance;
  double ks_stat;
};

inline constexpr std::uint64_t kKsSamples = 100000;

// Runs from the origin on the standard normal target. Moments use the first
// coordinate of every state; the KS statistic uses a thinned subsample.
SimulationSummary simulate(const MalaTarget& target, std::uint64_t steps, std::uint64_t seed);

double step_size(double n, double gamma);

// 2 Phi(-(1 - hM) D / (2 sqrt(2h))).
Probability eps_upper(double D, double h, double M);

struct MalaFloor {
  Probability value;
  double gap;
  double argmin_D;
};

// 1 - [1 - eps_upper(D)]^(min(1, 1/floor((G D)^-n))).
double floor_A_gap(double D, double n, double h, double G, double M);

MalaFloor rho_opt_lower_A(double n, double gamma, double G, double M, Exec exec = Exec::parallel);

// 1 - 2 Phi(-n^(gamma/2) / (8G)).
Probability regional_floor(double n, double gamma, double G);

struct FloorScanPoint {
  double D;
  double value;
  double gap;
};

std::vector<FloorScanPoint> scan_floor_A(double n, double gamma, double G, double M, std::span<const double> Ds);

struct MalaFloorB {
  Probability value;
  double gap;
  Probability simplified;
  double simplified_gap;
  bool simplified_below;  // true when 1 - hM >= 1/sqrt 2, which orders the two
};

MalaFloorB rho_opt_lower_B(double n, double gamma, double G, double M);

struct AsymptoticRow {
  double n;
  double floor_A;
  double floor_B;
  double scaled_gap_A;
  double scaled_gap_B;
};

std::vector<AsymptoticRow> asymptotic_table(double gamma, double gamma_prime, double G, double M,
                                            std::span<const double> n_list, Exec exec = Exec::parallel);

}  // namespace dmlimits
