#include <cmath>
#include <numbers>
#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "dmlimits/finite_chain.hpp"

using namespace dmlimits;

namespace {

FiniteChain rotation3() {
  Eigen::MatrixXd P(3, 3);
  P << 0, 1, 0, 0, 0, 1, 1, 0, 0;
  return FiniteChain(P);
}

double stationarity_residual(const FiniteChain& c, const Distribution& pi) {
  const Eigen::Map<const Eigen::RowVectorXd> row(pi.weights().data(), static_cast<Eigen::Index>(pi.size()));
  return (row * c.matrix() - row).cwiseAbs().sum();
}

}  // namespace

TEST_CASE("chain and distribution validation") {
  Eigen::MatrixXd bad(2, 2);
  bad << 0.5, 0.6, 0.5, 0.5;
  CHECK_THROWS_AS(FiniteChain{bad}, PreconditionError);
  bad << 1.1, -0.1, 0.5, 0.5;
  CHECK_THROWS_AS(FiniteChain{bad}, PreconditionError);
  CHECK_THROWS_AS(Distribution({0.5, 0.6}), PreconditionError);
  CHECK_THROWS_AS(Distribution({1.5, -0.5}), PreconditionError);
  CHECK_THROWS_AS(make_state_set({0, 3}, 3), PreconditionError);
  CHECK(make_state_set({2, 0, 2}, 3) == StateSet{0, 2});
  const Distribution d({0.2, 0.3, 0.5});
  CHECK(d.mass({0, 2}) == doctest::Approx(0.7));
  CHECK(Distribution::point_mass(4, 2).support() == StateSet{2});
}

TEST_CASE("stationary distribution") {
  const auto w = witness_figure1({0.5, 10, 0.19, 1});
  const auto s = stationary_distribution(w.chain);
  CHECK(s.unique);
  CHECK(s.pi[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(trivial_on_support(s.pi));

  for (int n : {1, 4, 10}) {
    const auto st = stationary_distribution(star_walk(n, 0.3));
    CHECK(st.unique);
    CHECK(st.pi[0] == doctest::Approx(0.5).epsilon(1e-12));
    for (int i = 1; i <= n; ++i) CHECK(st.pi[static_cast<std::size_t>(i)] == doctest::Approx(0.5 / n).epsilon(1e-12));
  }
  const auto cyc = stationary_distribution(cycle_walk(7));
  for (std::size_t i = 0; i < 7; ++i) CHECK(cyc.pi[i] == doctest::Approx(1.0 / 7).epsilon(1e-12));

  Eigen::MatrixXd two(3, 3);
  two << 1, 0, 0, 0, 1, 0, 0.5, 0.5, 0;
  const auto multi = stationary_distribution(FiniteChain(two));
  CHECK_FALSE(multi.unique);
  CHECK(multi.closed_classes == 2);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto c = corpus::random_case_B(rng, 8);
    CHECK(stationarity_residual(c.chain, stationary_distribution(c.chain).pi) <= 1e-10);
  }
}

TEST_CASE("reversibility and non-negative definiteness") {
  const auto cyc = cycle_walk(5);
  const auto pi_cyc = stationary_distribution(cyc).pi;
  CHECK(is_reversible(cyc, pi_cyc));
  CHECK_FALSE(is_nonneg_definite(cyc, pi_cyc));

  const auto w = witness_figure1({0.5, 10, 0.2, 1});
  const auto pi_w = stationary_distribution(w.chain).pi;
  CHECK(is_reversible(w.chain, pi_w));
  CHECK(is_nonneg_definite(w.chain, pi_w));

  const auto rot = rotation3();
  const auto pi_rot = stationary_distribution(rot).pi;
  CHECK_FALSE(is_reversible(rot, pi_rot));
  CHECK_THROWS_AS(is_nonneg_definite(rot, pi_rot), PreconditionError);

  const auto star = star_walk(4, 0.6);
  const auto pi_star = stationary_distribution(star).pi;
  CHECK(is_reversible(star, pi_star));
  CHECK(is_nonneg_definite(star, pi_star));

  const auto ts = witness_two_state(0.5, 0.1);
  const auto pi_ts = stationary_distribution(ts).pi;
  CHECK(is_reversible(ts, pi_ts));
  CHECK(is_nonneg_definite(ts, pi_ts));
  CHECK(trivial_on_support(pi_ts));
}

TEST_CASE("total variation") {
  const Distribution mu({0.7, 0.3}), nu({0.3, 0.7});
  CHECK(tv_distance(mu, mu).value() == 0.0);
  CHECK(tv_distance(Distribution::point_mass(2, 0), Distribution::point_mass(2, 1)).value() == 1.0);
  CHECK(tv_distance(mu, nu).value() == doctest::Approx(0.4).epsilon(1e-15));
  CHECK_THROWS_AS(tv_distance(mu, Distribution({1, 0, 0})), PreconditionError);
}

TEST_CASE("true rate") {
  for (int n : {2, 4, 9, 30}) {
    CHECK(true_rate(star_walk(n, 0.6)).rate == doctest::Approx(0.6).epsilon(1e-9));
    CHECK(true_rate(star_walk(n, 0.2)).rate == doctest::Approx(0.6).epsilon(1e-9));
    CHECK(true_rate(star_walk(n, 0.45)).rate == doctest::Approx(0.45).epsilon(1e-9));
  }
  const auto ts = true_rate(witness_two_state(0.5, 0.1));
  CHECK(ts.rate == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(ts.cross_checked);
  CHECK(ts.agrees);
  CHECK(std::abs(true_rate(witness_two_state(0.9, 0.899)).rate - 0.001) < 1e-9);
  CHECK(true_rate(witness_two_state(0.5, 0.5 - 1e-9)).rate < 1e-8);

  const auto fig = true_rate(witness_figure1({0.5, 10, 0.19, 1}).chain);
  CHECK(fig.rate == doctest::Approx(std::pow(0.81, 0.25)).epsilon(1e-9));

  CHECK(true_rate(witness_rosenthal(0.3)).rate == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(true_rate(witness_rosenthal(1.0)).rate == 0.0);
  CHECK(true_rate(witness_rosenthal(0.01)).rate == doctest::Approx(0.99).epsilon(1e-12));

  Eigen::MatrixXd two(3, 3);
  two << 1, 0, 0, 0, 1, 0, 0.5, 0.5, 0;
  CHECK_THROWS_AS(true_rate(FiniteChain(two)), PreconditionError);
}

TEST_CASE("true rate on the cycle scales as n^-2") {
  std::vector<double> scaled;
  for (int n : {51, 101, 201}) {
    const double rate = true_rate(cycle_walk(n)).rate;
    CHECK(rate == doctest::Approx(std::abs(std::cos(std::numbers::pi / n))).epsilon(1e-9));
    scaled.push_back((1.0 - rate) * n * n);
  }
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  CHECK(*hi / *lo < 2.0);
}

TEST_CASE("epsilon_C") {
  const auto star = star_walk(4, 0.6);
  CHECK(epsilon_C(star, {2}).value.value() == doctest::Approx(1.0).epsilon(1e-15));
  const auto e = epsilon_C(star, {0, 1});
  CHECK(e.value.value() == doctest::Approx(0.5).epsilon(1e-15));
  REQUIRE(e.nu.has_value());
  CHECK((*e.nu)[0] == doctest::Approx(0.8));
  CHECK((*e.nu)[1] == doctest::Approx(0.2));
  const auto cyc = epsilon_C(cycle_walk(5), {0, 1, 2});
  CHECK(cyc.value.value() == 0.0);
  CHECK_FALSE(cyc.nu.has_value());
  CHECK_THROWS_AS(epsilon_C(star, {}), PreconditionError);
}

TEST_CASE("epsilon_C is nonincreasing under set inclusion") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const int n = corpus::uniform_int(rng, 2, 7);
    Eigen::MatrixXd P(n, n);
    for (int x = 0; x < n; ++x) P.row(x) = corpus::random_row(rng, n, t % 2 == 0);
    const FiniteChain chain(P);
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    const std::uint64_t small = corpus::uniform_int(rng, 1, static_cast<int>(full));
    const std::uint64_t big = small | static_cast<std::uint64_t>(corpus::uniform_int(rng, 0, static_cast<int>(full)));
    StateSet A, B;
    for (int x = 0; x < n; ++x) {
      if (small >> x & 1U) A.push_back(static_cast<std::size_t>(x));
      if (big >> x & 1U) B.push_back(static_cast<std::size_t>(x));
    }
    CHECK(epsilon_C(chain, B).value <= epsilon_C(chain, A).value + 1e-15);
  }
}

TEST_CASE("verify_A") {
  const DmParamsA p(0.5, 10, 0.2, 1);
  const auto w = witness_figure1(p);
  CHECK(verify_A(w.chain, w.spec, p).holds);
  const auto low_K = verify_A(w.chain, w.spec, {0.5, 1, 0.2, 1});
  CHECK_FALSE(low_K.holds);
  CHECK(low_K.condition == "A1");
  REQUIRE(low_K.state.has_value());
  CHECK(*low_K.state == 1);

  const auto fig = witness_figure1({0.5, 10, 0.19, 1});
  CHECK(fig.chain.size() == 5);
  CHECK(fig.spec.V[4] == doctest::Approx(12.1111).epsilon(1e-5));
  CHECK_THROWS_AS(witness_figure1({0.5, 10, 1.0, 1}), PreconditionError);

  const auto star = star_walk(3, 0.4);
  const StateSet all{0, 1, 2, 3};
  const auto eps_X = epsilon_C(star, all);
  CHECK(eps_X.value > 0.0);
  const DriftSpecA flat{std::vector<double>(4, 1.0), all, std::nullopt};
  CHECK(verify_A(star, flat, {0.3, 1.0, eps_X.value, 1.0}).holds);
  const auto too_much = verify_A(star, flat, {0.3, 1.0, std::min(1.0, eps_X.value + 0.01), 1.0});
  CHECK_FALSE(too_much.holds);
  CHECK(too_much.condition == "A2");
}

TEST_CASE("verify_B") {
  for (int n : {1, 4, 10})
    for (double theta : {0.2, 0.6}) {
      const auto star = star_walk(n, theta);
      const DriftSpecB spec{std::vector<double>(star.size(), 0.0), 0.7};
      CHECK(verify_B(star, spec, {0, 0, std::min(theta, 1 - theta), 0.7}).holds);
    }
  const DriftSpecB zero{{0.0, 0.0}, 1.0};
  CHECK(verify_B(witness_rosenthal(0.4), zero, {0, 0, 0.4, 1.0}).holds);
  const DriftSpecB nonzero{{0.0, 1.0}, 1.0};
  const auto b3 = verify_B(witness_rosenthal(0.4), nonzero, {0.5, 1.0, 0.4, 1.0});
  CHECK_FALSE(b3.holds);
  CHECK(b3.condition == "B3");
  CHECK_THROWS_AS(verify_B(witness_rosenthal(0.4), zero, {0, 0, 0.4, 2.0}), PreconditionError);
}

TEST_CASE("verify_bivariate") {
  const auto star = star_walk(4, 0.6);
  StateSet all{0, 1, 2, 3, 4};
  const std::vector<double> half(5, 0.5);
  const auto spec = BivariateDriftSpec::product(half, half, all, all, 0.5, 1.0);
  const auto r = verify_bivariate(star, spec);
  CHECK(r.holds);
  CHECK(r.mass_sum == doctest::Approx(2.0).epsilon(1e-12));

  const auto ros = witness_rosenthal(0.5);
  const auto c1 = BivariateDriftSpec::product({0.5, 0.5}, {0.5, 0.5}, {0, 1}, {0, 1}, 0.5, 1.0);
  const auto rr = verify_bivariate(ros, c1);
  CHECK(rr.holds);
  CHECK(rr.mass_sum == doctest::Approx(2.0).epsilon(1e-12));

  const BivariateDriftSpec failing{half, half, {{0, 0}}, 0.5, 1.0};
  const auto f = verify_bivariate(star, failing);
  CHECK_FALSE(f.holds);
  CHECK(f.violating_pair.has_value());
}

TEST_CASE("graph constructors") {
  CHECK_THROWS_AS(cycle_walk(4), PreconditionError);
  CHECK_THROWS_AS(cycle_walk(1), PreconditionError);
  CHECK_THROWS_AS(star_walk(0, 0.5), PreconditionError);
  CHECK_THROWS_AS(star_walk(3, 1.0), PreconditionError);
  CHECK_THROWS_AS(witness_two_state(0.5, 0.5), PreconditionError);
  const auto c3 = cycle_walk(3);
  CHECK(c3(0, 1) == 0.5);
  CHECK(c3(0, 2) == 0.5);
  CHECK(c3(0, 0) == 0.0);

  CHECK(min_majority_cardinality(Distribution(std::vector<double>(7, 1.0 / 7))) == 4);
  for (int n : {1, 3, 10}) CHECK(min_majority_cardinality(stationary_distribution(star_walk(n, 0.3)).pi) == 2);
  CHECK(min_majority_cardinality(Distribution::point_mass(5, 3)) == 1);

  CHECK(max_degree(adjacency_of(cycle_walk(7))) == 2);
  CHECK(max_degree(adjacency_of(star_walk(4, 0.5))) == 4);
  CHECK(max_degree({{false, true}, {true, false}}) == 1);
  CHECK_THROWS_AS(max_degree({{false, true}, {false, false}}), PreconditionError);
}

TEST_CASE("stationary mass of C respects the pi(C) lower bound") {
  std::mt19937_64 rng(5);
  auto check = [](const corpus::CaseA& c) {
    REQUIRE(verify_A(c.chain, c.spec, c.params).holds);
    const auto st = stationary_distribution(c.chain);
    CHECK(st.pi.mass(c.spec.C) >= pic1_stationary_mass_lower(c.params.lambda, c.params.K) - 1e-9);
  };
  for (const auto& c : corpus::witness_cases_A()) check(c);
  for (int i = 0; i < 300; ++i) check(corpus::random_case_A(rng, 7));
}

TEST_CASE("level sets of a B-drift carry more than half the mass") {
  std::mt19937_64 rng(6);
  auto check = [](const corpus::CaseB& c) {
    REQUIRE(verify_B(c.chain, c.spec, c.params).holds);
    CHECK(stationary_distribution(c.chain).pi.mass(c.spec.level_set()) > 0.5);
  };
  for (const auto& c : corpus::witness_cases_B()) check(c);
  for (int i = 0; i < 300; ++i) check(corpus::random_case_B(rng, 7));
}

TEST_CASE("bivariate drift forces the projections to overlap in mass") {
  std::mt19937_64 rng(8);
  int held = 0;
  for (int i = 0; i < 300; ++i) {
    const auto c = corpus::random_case_bivariate(rng, 6);
    const auto r = verify_bivariate(c.chain, c.spec);
    if (!r.holds) continue;
    ++held;
    CHECK(r.mass_sum > 1.0);
  }
  CHECK(held > 100);
}

TEST_CASE("subset floor never exceeds a certified bound") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 150; ++i) {
    const auto c = corpus::random_case_A(rng, 8);
    if (!stationary_distribution(c.chain).unique) continue;
    REQUIRE(verify_A(c.chain, c.spec, c.params).holds);
    const auto floor = chain_floor_A(c.chain);
    CHECK(floor.value <= baxendale_bound(c.params).value + 1e-12);
    CHECK(floor.value <= paraoptima_lower(c.params).value + 1e-12);
  }
}

TEST_CASE("subset floors on known chains") {
  const auto star = chain_floor_B(star_walk(4, 0.6));
  CHECK(star.pi_C > 0.5);
  CHECK(star.value == doctest::Approx(1.0 - star.eps_C));
  const auto ros = chain_floor_A(witness_rosenthal(0.3), Exec::serial);
  CHECK(ros.value == 0.0);
  CHECK(ros.best_set == StateSet{0});
  CHECK(ros.eps_C == 1.0);
  CHECK(ros.sets_scanned == 2);
  Eigen::MatrixXd big = Eigen::MatrixXd::Constant(21, 21, 1.0 / 21);
  CHECK_THROWS_AS(chain_floor_A(FiniteChain(big)), PreconditionError);
  Eigen::MatrixXd warn = Eigen::MatrixXd::Constant(17, 17, 1.0 / 17);
  CHECK(chain_floor_B(FiniteChain(warn), Exec::serial).warnings.size() == 1);
}
