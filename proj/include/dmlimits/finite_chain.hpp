#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dmlimits/dm_bounds.hpp"
#include "dmlimits/numerics.hpp"
#include "dmlimits/parallel.hpp"

namespace dmlimits {

// Sorted, duplicate-free list of state indices.
using StateSet = std::vector<std::size_t>;

StateSet make_state_set(std::vector<std::size_t> states, std::size_t n_states);

inline constexpr double kRowSumTolerance = 1e-12;
inline constexpr double kChainTolerance = 1e-9;

// Row-stochastic transition matrix on {0, ..., n-1}. Immutable.
class FiniteChain {
 public:
  explicit FiniteChain(Eigen::MatrixXd P, std::vector<std::string> labels = {},
                       double row_tol = kRowSumTolerance);

  std::size_t size() const noexcept { return static_cast<std::size_t>(P_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return P_; }
  double operator()(std::size_t x, std::size_t y) const { return P_(x, y); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::string label(std::size_t x) const;

 private:
  Eigen::MatrixXd P_;
  std::vector<std::string> labels_;
};

class Distribution {
 public:
  explicit Distribution(std::vector<double> weights, double tol = kRowSumTolerance);
  static Distribution point_mass(std::size_t n, std::size_t at);

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t x) const { return w_[x]; }
  const std::vector<double>& weights() const noexcept { return w_; }
  double mass(const StateSet& set) const;
  StateSet support() const;

 private:
  std::vector<double> w_;
};

struct DriftSpecA {
  std::vector<double> V;
  StateSet C;
  std::optional<Distribution> nu;
};

struct DriftSpecB {
  std::vector<double> V;
  double d = 0.0;
  StateSet level_set() const;
};

struct BivariateDriftSpec {
  std::vector<double> V1;
  std::vector<double> V2;
  std::vector<std::pair<std::size_t, std::size_t>> C_tilde;
  double lambda_prime = 0.0;
  double K_prime = 1.0;

  static BivariateDriftSpec product(std::vector<double> V1, std::vector<double> V2, const StateSet& C1,
                                    const StateSet& C2, double lambda_prime, double K_prime);
  StateSet projection_first() const;
  StateSet projection_second() const;
};

struct Stationary {
  Distribution pi;
  bool unique;
  std::size_t closed_classes;
};

// Closed communicating classes, each sorted, ordered by smallest member.
std::vector<StateSet> closed_classes(const FiniteChain& chain);

Stationary stationary_distribution(const FiniteChain& chain);

bool is_reversible(const FiniteChain& chain, const Distribution& pi, double tol = kChainTolerance);
bool is_nonneg_definite(const FiniteChain& chain, const Distribution& pi, double tol = kChainTolerance);

// True when pi is a point mass, so the two checks above hold vacuously.
bool trivial_on_support(const Distribution& pi);

Probability tv_distance(const Distribution& mu, const Distribution& nu);

struct TrueRate {
  double rate;
  double power_estimate;  // NaN when the TV sequence gives nothing to fit
  bool cross_checked;
  bool agrees;
};

inline constexpr double kRateAgreement = 1e-3;

TrueRate true_rate(const FiniteChain& chain);

struct EpsilonC {
  Probability value;
  std::optional<Distribution> nu;
};

EpsilonC epsilon_C(const FiniteChain& chain, const StateSet& C);

struct Verification {
  bool holds = true;
  std::string condition;  // first violated condition, e.g. "A1"
  std::optional<std::size_t> state;
  std::string message;
  explicit operator bool() const noexcept { return holds; }
};

Verification verify_A(const FiniteChain& chain, const DriftSpecA& spec, const DmParamsA& p,
                      double tol = kChainTolerance);
Verification verify_B(const FiniteChain& chain, const DriftSpecB& spec, const DmParamsB& p,
                      double tol = kChainTolerance);

struct BivariateVerification {
  bool holds = true;
  double mass_sum = 0.0;
  std::optional<std::pair<std::size_t, std::size_t>> violating_pair;
};

BivariateVerification verify_bivariate(const FiniteChain& chain, const BivariateDriftSpec& spec,
                                       double tol = kChainTolerance);

struct Witness {
  FiniteChain chain;
  DriftSpecA spec;
};

inline constexpr std::int64_t kMaxWitnessStates = 2000;

Witness witness_figure1(const DmParamsA& p);
FiniteChain witness_two_state(double lambda, double delta);
// V(0) = 1, V(1) = (1 - lambda + delta)/delta, C = {0}, nu = point mass at 0.
DriftSpecA witness_two_state_spec(double lambda, double delta);
FiniteChain witness_rosenthal(double epsilon);

FiniteChain cycle_walk(int n);
// Hub is state 0, leaves are 1..n.
FiniteChain star_walk(int n, double theta);

std::size_t min_majority_cardinality(const Distribution& pi, double tol = kChainTolerance);

using Adjacency = std::vector<std::vector<bool>>;
Adjacency adjacency_of(const FiniteChain& chain);
std::size_t max_degree(const Adjacency& adjacency);

inline constexpr std::size_t kSubsetWarnStates = 16;
inline constexpr std::size_t kSubsetMaxStates = 20;

struct SubsetFloor {
  double value;
  StateSet best_set;
  double pi_C;
  double eps_C;
  std::uint64_t sets_scanned;
  std::vector<std::string> warnings;
};

// min over C with pi(C) > 0 of chain_specific_lower_A(eps_C, pi(C)).
SubsetFloor chain_floor_A(const FiniteChain& chain, Exec exec = Exec::parallel);
// min over C with pi(C) > 1/2 of 1 - eps_C.
SubsetFloor chain_floor_B(const FiniteChain& chain, Exec exec = Exec::parallel);

}  // namespace dmlimits
