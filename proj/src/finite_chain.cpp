#include "dmlimits/finite_chain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

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

bool le_tol(double lhs, double rhs, double tol) { return lhs <= rhs + tol * std::max(1.0, std::abs(rhs)); }

Eigen::MatrixXd block(const Eigen::MatrixXd& P, const StateSet& rows, const StateSet& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = P(rows[i], cols[j]);
  return out;
}

Eigen::VectorXd apply(const FiniteChain& chain, const std::vector<double>& V) {
  return chain.matrix() * Eigen::Map<const Eigen::VectorXd>(V.data(), static_cast<Eigen::Index>(V.size()));
}

std::vector<bool> membership(const StateSet& set, std::size_t n) {
  std::vector<bool> in(n, false);
  for (auto x : set) in[x] = true;
  return in;
}

double spectral_radius(const Eigen::MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Largest eigenvalue modulus of an irreducible stochastic block after
// removing the Perron eigenvalue 1.
double subdominant_modulus(const Eigen::MatrixXd& M) {
  if (M.rows() <= 1) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  const auto& ev = es.eigenvalues();
  Eigen::Index perron = 0;
  double nearest = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double dist = std::abs(ev[i] - std::complex<double>(1.0, 0.0));
    if (dist < nearest) {
      nearest = dist;
      perron = i;
    }
  }
  double worst = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (i != perron) worst = std::max(worst, std::abs(ev[i]));
  return worst;
}

double worst_tv(const Eigen::MatrixXd& Q, const Eigen::RowVectorXd& pi) {
  double worst = 0.0;
  for (Eigen::Index x = 0; x < Q.rows(); ++x) worst = std::max(worst, 0.5 * (Q.row(x) - pi).cwiseAbs().sum());
  return worst;
}

double fit_log_slope(const std::vector<std::pair<double, double>>& points) {
  double mx = 0.0, my = 0.0;
  for (const auto& [m, tv] : points) {
    mx += m;
    my += std::log(tv);
  }
  mx /= static_cast<double>(points.size());
  my /= static_cast<double>(points.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [m, tv] : points) {
    sxy += (m - mx) * (std::log(tv) - my);
    sxx += (m - mx) * (m - mx);
  }
  return std::min(1.0, std::exp(sxy / sxx));
}

constexpr double kUsableTv = 1e-11;

// Geometric decay rate fitted to max_x TV(delta_x P^m, pi), first over
// m = 50..200, then over small m for fast chains.
std::optional<double> power_rate(const Eigen::MatrixXd& P, const Eigen::RowVectorXd& pi) {
  const Eigen::MatrixXd P2 = P * P;
  const Eigen::MatrixXd P4 = P2 * P2;
  const Eigen::MatrixXd P8 = P4 * P4;
  const Eigen::MatrixXd P16 = P8 * P8;
  const Eigen::MatrixXd P10 = P8 * P2;
  Eigen::MatrixXd Q = P16 * P16 * P16 * P2;
  std::vector<std::pair<double, double>> points;
  for (int m = 50; m <= 200; m += 10) {
    const double tv = worst_tv(Q, pi);
    if (tv > kUsableTv) points.emplace_back(m, tv);
    Q = Q * P10;
  }
  if (points.size() >= 3) return fit_log_slope(points);

  points.clear();
  Q = P;
  for (int m = 1; m < 50; ++m) {
    const double tv = worst_tv(Q, pi);
    if (tv == 0.0) return 0.0;
    if (tv > kUsableTv) points.emplace_back(m, tv);
    Q = Q * P;
  }
  if (points.size() < 2) return std::nullopt;
  // Only the tail half, where faster modes have died out.
  std::vector<std::pair<double, double>> tail(points.begin() + static_cast<std::ptrdiff_t>(points.size() / 2),
                                              points.end());
  return fit_log_slope(tail);
}

}  // namespace

StateSet make_state_set(std::vector<std::size_t> states, std::size_t n_states) {
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  for (auto x : states) require(x < n_states, "state " + std::to_string(x) + " out of range");
  return states;
}

FiniteChain::FiniteChain(Eigen::MatrixXd P, std::vector<std::string> labels, double row_tol)
    : P_(std::move(P)), labels_(std::move(labels)) {
  require(P_.rows() > 0 && P_.rows() == P_.cols(), "transition matrix must be square and nonempty");
  require(labels_.empty() || labels_.size() == size(), "label count must match the number of states");
  for (Eigen::Index x = 0; x < P_.rows(); ++x) {
    for (Eigen::Index y = 0; y < P_.cols(); ++y)
      require(std::isfinite(P_(x, y)) && P_(x, y) >= 0.0,
              "row " + std::to_string(x) + " has a negative or non-finite entry");
    const double sum = P_.row(x).sum();
    require(std::abs(sum - 1.0) <= row_tol, "row " + std::to_string(x) + " sums to " + fmt(sum));
  }
}

std::string FiniteChain::label(std::size_t x) const {
  return labels_.empty() ? std::to_string(x) : labels_.at(x);
}

Distribution::Distribution(std::vector<double> weights, double tol) : w_(std::move(weights)) {
  require(!w_.empty(), "distribution must be nonempty");
  double sum = 0.0;
  for (double w : w_) {
    require(std::isfinite(w) && w >= 0.0, "distribution weights must be finite and >= 0");
    sum += w;
  }
  require(std::abs(sum - 1.0) <= tol, "distribution weights sum to " + fmt(sum));
}

Distribution Distribution::point_mass(std::size_t n, std::size_t at) {
  require(at < n, "point mass outside the state space");
  std::vector<double> w(n, 0.0);
  w[at] = 1.0;
  return Distribution(std::move(w));
}

double Distribution::mass(const StateSet& set) const {
  double m = 0.0;
  for (auto x : set) m += w_.at(x);
  return m;
}

StateSet Distribution::support() const {
  StateSet s;
  for (std::size_t x = 0; x < w_.size(); ++x)
    if (w_[x] > 0.0) s.push_back(x);
  return s;
}

StateSet DriftSpecB::level_set() const {
  StateSet C;
  for (std::size_t x = 0; x < V.size(); ++x)
    if (V[x] <= d) C.push_back(x);
  return C;
}

BivariateDriftSpec BivariateDriftSpec::product(std::vector<double> V1, std::vector<double> V2,
                                               const StateSet& C1, const StateSet& C2, double lambda_prime,
                                               double K_prime) {
  BivariateDriftSpec spec{std::move(V1), std::move(V2), {}, lambda_prime, K_prime};
  for (auto x : C1)
    for (auto y : C2) spec.C_tilde.emplace_back(x, y);
  return spec;
}

StateSet BivariateDriftSpec::projection_first() const {
  StateSet s;
  for (const auto& [x, y] : C_tilde) s.push_back(x);
  return make_state_set(std::move(s), V1.size());
}

StateSet BivariateDriftSpec::projection_second() const {
  StateSet s;
  for (const auto& [x, y] : C_tilde) s.push_back(y);
  return make_state_set(std::move(s), V2.size());
}

std::vector<StateSet> closed_classes(const FiniteChain& chain) {
  const std::size_t n = chain.size();
  const auto& P = chain.matrix();
  // Tarjan's strongly connected components.
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  int counter = 0, n_comp = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w = 0; w < n; ++w) {
      if (P(v, w) <= 0.0) continue;
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = n_comp;
      } while (w != v);
      ++n_comp;
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (index[v] < 0) visit(v);

  std::vector<bool> closed(static_cast<std::size_t>(n_comp), true);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (P(x, y) > 0.0 && comp[x] != comp[y]) closed[static_cast<std::size_t>(comp[x])] = false;

  std::vector<StateSet> classes;
  std::vector<int> seen;
  for (std::size_t x = 0; x < n; ++x) {
    const int c = comp[x];
    if (!closed[static_cast<std::size_t>(c)] || std::find(seen.begin(), seen.end(), c) != seen.end()) continue;
    seen.push_back(c);
    StateSet members;
    for (std::size_t y = 0; y < n; ++y)
      if (comp[y] == c) members.push_back(y);
    classes.push_back(std::move(members));
  }
  return classes;
}

Stationary stationary_distribution(const FiniteChain& chain) {
  const auto classes = closed_classes(chain);
  const StateSet& R = classes.front();
  const auto m = static_cast<Eigen::Index>(R.size());
  Eigen::MatrixXd A = block(chain.matrix(), R, R).transpose() - Eigen::MatrixXd::Identity(m, m);
  A.row(m - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  b(m - 1) = 1.0;
  Eigen::VectorXd piR = A.fullPivLu().solve(b);
  piR = piR.cwiseMax(0.0);
  piR /= piR.sum();
  std::vector<double> w(chain.size(), 0.0);
  for (Eigen::Index i = 0; i < m; ++i) w[R[static_cast<std::size_t>(i)]] = piR(i);
  return {Distribution(std::move(w), 1e-9), classes.size() == 1, classes.size()};
}

bool is_reversible(const FiniteChain& chain, const Distribution& pi, double tol) {
  require(pi.size() == chain.size(), "distribution size does not match the chain");
  const auto S = pi.support();
  for (auto x : S)
    for (auto y : S)
      if (std::abs(pi[x] * chain(x, y) - pi[y] * chain(y, x)) > tol) return false;
  return true;
}

bool is_nonneg_definite(const FiniteChain& chain, const Distribution& pi, double tol) {
  require(is_reversible(chain, pi, tol), "non-negative definiteness is defined for reversible chains only");
  const auto S = pi.support();
  const auto k = static_cast<Eigen::Index>(S.size());
  Eigen::MatrixXd M(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto x = S[static_cast<std::size_t>(i)], y = S[static_cast<std::size_t>(j)];
      M(i, j) = std::sqrt(pi[x]) * chain(x, y) / std::sqrt(pi[y]);
    }
  const Eigen::MatrixXd sym = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

bool trivial_on_support(const Distribution& pi) { return pi.support().size() == 1; }

Probability tv_distance(const Distribution& mu, const Distribution& nu) {
  require(mu.size() == nu.size(), "distributions have different lengths");
  double s = 0.0;
  for (std::size_t x = 0; x < mu.size(); ++x) s += std::abs(mu[x] - nu[x]);
  return Probability::clamped(0.5 * s);
}

TrueRate true_rate(const FiniteChain& chain) {
  const auto classes = closed_classes(chain);
  require(classes.size() == 1, "true_rate requires a unique stationary law; found " +
                                   std::to_string(classes.size()) + " closed classes");
  const StateSet& R = classes.front();
  const auto inR = membership(R, chain.size());
  StateSet T;
  for (std::size_t x = 0; x < chain.size(); ++x)
    if (!inR[x]) T.push_back(x);

  double rate = subdominant_modulus(block(chain.matrix(), R, R));
  if (!T.empty()) rate = std::max(rate, spectral_radius(block(chain.matrix(), T, T)));
  rate = std::min(rate, 1.0);

  const auto pi = stationary_distribution(chain).pi;
  const Eigen::RowVectorXd pi_row =
      Eigen::Map<const Eigen::RowVectorXd>(pi.weights().data(), static_cast<Eigen::Index>(pi.size()));
  const auto estimate = power_rate(chain.matrix(), pi_row);
  TrueRate out{rate, std::numeric_limits<double>::quiet_NaN(), false, false};
  if (estimate) {
    out.power_estimate = *estimate;
    out.cross_checked = true;
    out.agrees = std::abs(*estimate - rate) <= kRateAgreement;
  }
  return out;
}

EpsilonC epsilon_C(const FiniteChain& chain, const StateSet& C) {
  require(!C.empty(), "epsilon_C requires a nonempty set");
  const std::size_t n = chain.size();
  for (auto x : C) require(x < n, "state " + std::to_string(x) + " out of range");
  std::vector<double> colmin(n, std::numeric_limits<double>::infinity());
  for (auto x : C)
    for (std::size_t y = 0; y < n; ++y) colmin[y] = std::min(colmin[y], chain(x, y));
  const double sum = std::accumulate(colmin.begin(), colmin.end(), 0.0);
  EpsilonC out{Probability::clamped(sum), std::nullopt};
  if (sum > 0.0) {
    for (auto& c : colmin) c /= sum;
    out.nu = Distribution(std::move(colmin), 1e-9);
  }
  return out;
}

Verification verify_A(const FiniteChain& chain, const DriftSpecA& spec, const DmParamsA& p, double tol) {
  const std::size_t n = chain.size();
  require(spec.V.size() == n, "drift function length does not match the chain");
  for (double v : spec.V) require(std::isfinite(v) && v >= 1.0, "(A1) drift function must satisfy V >= 1");
  require(!spec.C.empty(), "small set C must be nonempty");
  const auto C = make_state_set(spec.C, n);
  if (spec.nu) require(spec.nu->size() == n, "minorization measure length does not match the chain");

  const auto inC = membership(C, n);
  const Eigen::VectorXd PV = apply(chain, spec.V);
  for (std::size_t x = 0; x < n; ++x) {
    const double bound = inC[x] ? p.K : p.lambda * spec.V[x];
    if (!le_tol(PV(static_cast<Eigen::Index>(x)), bound, tol))
      return {false, "A1", x, "PV(" + chain.label(x) + ") = " + fmt(PV(static_cast<Eigen::Index>(x))) +
                                  " exceeds " + fmt(bound)};
  }

  std::optional<Distribution> nu = spec.nu;
  if (nu) {
    for (auto x : C)
      for (std::size_t y = 0; y < n; ++y)
        if (chain(x, y) < p.epsilon * (*nu)[y] - tol)
          return {false, "A2", x, "P(" + chain.label(x) + ", " + chain.label(y) + ") < eps * nu"};
  } else {
    const auto best = epsilon_C(chain, C);
    if (!le_tol(p.epsilon, best.value, tol) || !best.nu)
      return {false, "A2", std::nullopt, "eps = " + fmt(p.epsilon) + " exceeds eps_C = " + fmt(best.value)};
    nu = best.nu;
  }

  const double nuC = nu->mass(C);
  if (nuC < p.beta - tol) return {false, "A3", std::nullopt, "nu(C) = " + fmt(nuC) + " < beta"};
  return {};
}

Verification verify_B(const FiniteChain& chain, const DriftSpecB& spec, const DmParamsB& p, double tol) {
  const std::size_t n = chain.size();
  require(spec.V.size() == n, "drift function length does not match the chain");
  for (double v : spec.V) require(std::isfinite(v) && v >= 0.0, "(B1) drift function must satisfy V >= 0");
  require(spec.d == p.d, "drift spec level d and parameter d differ");

  const Eigen::VectorXd PV = apply(chain, spec.V);
  for (std::size_t x = 0; x < n; ++x) {
    const double bound = p.eta * spec.V[x] + p.L;
    if (!le_tol(PV(static_cast<Eigen::Index>(x)), bound, tol))
      return {false, "B1", x, "PV(" + chain.label(x) + ") = " + fmt(PV(static_cast<Eigen::Index>(x))) +
                                  " exceeds " + fmt(bound)};
  }
  const auto C = spec.level_set();
  if (C.empty()) return {false, "B2", std::nullopt, "level set {V <= d} is empty"};
  const auto best = epsilon_C(chain, C);
  if (!le_tol(p.epsilon, best.value, tol))
    return {false, "B2", std::nullopt, "eps = " + fmt(p.epsilon) + " exceeds eps_C = " + fmt(best.value)};
  if (!p.b3())
    return {false, "B3", std::nullopt, "d must exceed 2L/(1-eta) = " + fmt(p.b3_threshold())};
  return {};
}

BivariateVerification verify_bivariate(const FiniteChain& chain, const BivariateDriftSpec& spec, double tol) {
  const std::size_t n = chain.size();
  require(spec.V1.size() == n && spec.V2.size() == n, "drift function length does not match the chain");
  for (double v : spec.V1) require(std::isfinite(v) && v >= 0.0, "V1 must be finite and >= 0");
  for (double v : spec.V2) require(std::isfinite(v) && v >= 0.0, "V2 must be finite and >= 0");
  require(spec.lambda_prime < 1.0, "lambda' must be < 1");
  require(spec.K_prime > 0.0 && std::isfinite(spec.K_prime), "K' must lie in (0, inf)");
  require(*std::min_element(spec.V1.begin(), spec.V1.end()) + *std::min_element(spec.V2.begin(), spec.V2.end()) >
              0.0,
          "inf V1(x) + V2(y) must be positive");

  std::vector<std::vector<bool>> in(n, std::vector<bool>(n, false));
  for (const auto& [x, y] : spec.C_tilde) {
    require(x < n && y < n, "pair in C~ out of range");
    in[x][y] = true;
  }
  const Eigen::VectorXd PV1 = apply(chain, spec.V1);
  const Eigen::VectorXd PV2 = apply(chain, spec.V2);

  BivariateVerification out;
  for (std::size_t x = 0; x < n && out.holds; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const double lhs = PV1(static_cast<Eigen::Index>(x)) + PV2(static_cast<Eigen::Index>(y));
      const double rhs = in[x][y] ? spec.K_prime : spec.lambda_prime * (spec.V1[x] + spec.V2[y]);
      if (!le_tol(lhs, rhs, tol)) {
        out.holds = false;
        out.violating_pair = std::make_pair(x, y);
        break;
      }
    }
  const auto pi = stationary_distribution(chain).pi;
  out.mass_sum = pi.mass(spec.projection_first()) + pi.mass(spec.projection_second());
  if (out.holds && !(out.mass_sum > 1.0))
    throw std::logic_error("bivariate drift holds but projected stationary mass is " + fmt(out.mass_sum));
  return out;
}

Witness witness_figure1(const DmParamsA& p) {
  require(p.epsilon < 1.0, "witness_figure1 requires epsilon < 1");
  const auto alpha = floor_guarded(baxendale_alpha_star(p));
  require(alpha <= kMaxWitnessStates, "alpha = " + std::to_string(alpha) + " gives too many states");
  const auto n = static_cast<std::size_t>(alpha) + 1;
  const auto a = static_cast<Eigen::Index>(alpha);
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(a + 1, a + 1);
  P(0, 0) = 1.0;
  P(1, 0) = p.epsilon;
  P(1, a) += 1.0 - p.epsilon;
  for (Eigen::Index x = 2; x <= a; ++x) P(x, x - 1) = 1.0;

  std::vector<double> V(n, 1.0);
  for (std::size_t x = 1; x + 1 < n; ++x) V[x] = std::pow(p.lambda, 1.0 - static_cast<double>(x));
  V[n - 1] = (p.K - p.epsilon) / (1.0 - p.epsilon);
  return {FiniteChain(std::move(P)), DriftSpecA{std::move(V), {0, 1}, Distribution::point_mass(n, 0)}};
}

FiniteChain witness_two_state(double lambda, double delta) {
  require(lambda > 0.0 && lambda < 1.0, "witness_two_state requires 0 < lambda < 1");
  require(delta > 0.0 && delta < lambda, "witness_two_state requires 0 < delta < lambda");
  Eigen::MatrixXd P(2, 2);
  P << 1.0, 0.0, 1.0 - lambda + delta, lambda - delta;
  return FiniteChain(std::move(P));
}

DriftSpecA witness_two_state_spec(double lambda, double delta) {
  require(delta > 0.0 && delta < lambda, "witness_two_state requires 0 < delta < lambda");
  return DriftSpecA{{1.0, (1.0 - lambda + delta) / delta}, {0}, Distribution::point_mass(2, 0)};
}

FiniteChain witness_rosenthal(double epsilon) {
  require(epsilon > 0.0 && epsilon <= 1.0, "witness_rosenthal requires 0 < epsilon <= 1");
  Eigen::MatrixXd P(2, 2);
  P << 1.0, 0.0, epsilon, 1.0 - epsilon;
  return FiniteChain(std::move(P));
}

FiniteChain cycle_walk(int n) {
  require(n >= 3 && n % 2 == 1, "cycle_walk requires odd n >= 3");
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    P(x, (x + 1) % n) += 0.5;
    P(x, (x + n - 1) % n) += 0.5;
  }
  return FiniteChain(std::move(P));
}

FiniteChain star_walk(int n, double theta) {
  require(n >= 1, "star_walk requires n >= 1");
  require(theta > 0.0 && theta < 1.0, "star_walk requires 0 < theta < 1");
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n + 1, n + 1);
  P(0, 0) = theta;
  for (int i = 1; i <= n; ++i) {
    P(0, i) = (1.0 - theta) / n;
    P(i, 0) = 1.0 - theta;
    P(i, i) = theta;
  }
  return FiniteChain(std::move(P));
}

std::size_t min_majority_cardinality(const Distribution& pi, double tol) {
  auto w = pi.weights();
  std::sort(w.begin(), w.end(), std::greater<>());
  double mass = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    mass += w[k];
    if (mass > 0.5 + tol) return k + 1;
  }
  return w.size();
}

Adjacency adjacency_of(const FiniteChain& chain) {
  const std::size_t n = chain.size();
  Adjacency adj(n, std::vector<bool>(n, false));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (x != y && (chain(x, y) > 0.0 || chain(y, x) > 0.0)) adj[x][y] = true;
  return adj;
}

std::size_t max_degree(const Adjacency& adjacency) {
  const std::size_t n = adjacency.size();
  std::size_t best = 0;
  for (std::size_t x = 0; x < n; ++x) {
    require(adjacency[x].size() == n, "adjacency must be square");
    require(!adjacency[x][x], "adjacency must not contain self-loops");
    std::size_t deg = 0;
    for (std::size_t y = 0; y < n; ++y) {
      require(adjacency[x][y] == adjacency[y][x], "adjacency must be symmetric");
      deg += adjacency[x][y] ? 1 : 0;
    }
    best = std::max(best, deg);
  }
  return best;
}

}  // namespace dmlimits
