#include <cmath>
#include <random>

#include "doctest.h"
#include "dmlimits/dm_bounds.hpp"

using namespace dmlimits;

TEST_CASE("parameter types validate their ranges") {
  CHECK_THROWS_AS(DmParamsA(1.0, 2.0, 0.5, 1.0), PreconditionError);
  CHECK_THROWS_AS(DmParamsA(0.5, 0.9, 0.5, 1.0), PreconditionError);
  CHECK_THROWS_AS(DmParamsA(0.5, 2.0, 0.0, 1.0), PreconditionError);
  CHECK_THROWS_AS(DmParamsA(0.5, 2.0, 0.5, 0.0), PreconditionError);
  CHECK_THROWS_AS(DmParamsB(1.0, 0.0, 0.5, 1.0), PreconditionError);
  CHECK_THROWS_AS(DmParamsB(0.5, -1.0, 0.5, 1.0), PreconditionError);
  CHECK_THROWS_AS(DmParamsB(0.5, 1.0, 0.5, 0.0), PreconditionError);
  CHECK(DmParamsB(0.5, 1.0, 0.5, 5.0).b3());
  CHECK_FALSE(DmParamsB(0.5, 1.0, 0.5, 4.0).b3());
}

TEST_CASE("alpha_*") {
  CHECK(baxendale_alpha_star({0.5, 10, 0.1, 1}) == doctest::Approx(4.4594).epsilon(1e-5));
  CHECK(baxendale_alpha_star({0.0, 5, 0.3, 1}) == 1.0);
  CHECK(baxendale_alpha_star({0.5, 1, 1e-8, 1}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(baxendale_alpha_star({0.5, 10, 1.0, 1}), PreconditionError);
}

TEST_CASE("baxendale bound") {
  const auto r = baxendale_bound({0.5, 10, 0.1, 1});
  CHECK(r.value.value() == doctest::Approx(0.97665047434).epsilon(1e-10));
  CHECK(r.gap == doctest::Approx(1.0 - 0.97665047434).epsilon(1e-8));
  CHECK(r.branch == Branch::eps_lt_one);
  CHECK(*r.alpha_floor == 4);
  const auto one = baxendale_bound({0.3, 2, 1.0, 1});
  CHECK(one.value.value() == 0.3);
  CHECK(one.branch == Branch::eps_eq_one);
  CHECK_FALSE(one.alpha_star.has_value());
  CHECK(baxendale_bound({0.0, 3, 0.25, 1}).branch == Branch::lambda_zero);
}

TEST_CASE("paraoptima lower bound") {
  const auto r = paraoptima_lower({0.5, 10, 0.1, 1});
  CHECK(r.value.value() == doctest::Approx(std::pow(0.9, 0.25)).epsilon(1e-14));
  CHECK(std::abs(r.value - 0.97400) < 1e-4);
  CHECK(*r.alpha_floor == 4);
  CHECK(paraoptima_lower({0.6, 1, 1.0, 0.5}).value.value() == 0.6);
  const auto z = paraoptima_lower({0.0, 3, 0.25, 1});
  CHECK(z.value.value() == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(*z.alpha_floor == 1);
}

TEST_CASE("rosenthal bound") {
  const auto r = rosenthal_bound({0.5, 1, 0.5, 5});
  CHECK(*r.lambda_tilde == doctest::Approx(0.91666666667).epsilon(1e-10));
  CHECK(*r.K_tilde == 8.0);
  CHECK(*r.alpha_double_star == doctest::Approx(32.86).epsilon(1e-3));
  CHECK(std::abs(r.value - 0.97913) < 1e-4);
  const auto one = rosenthal_bound({0, 0, 1.0, 1});
  CHECK(one.value.value() == 0.5);
  CHECK(one.gap == 0.5);
  CHECK(one.branch == Branch::eps_eq_one);
}

TEST_CASE("rosenthal bound names the (B3) threshold") {
  try {
    rosenthal_bound({0.5, 1, 0.5, 3.9});
    FAIL("expected a precondition error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("= 4,") != std::string::npos);
  }
  CHECK_THROWS_AS(rosenthal_paraoptima_lower({0.5, 1, 0.5, 4.0}), PreconditionError);
}

TEST_CASE("rosenthal bound with eta = L = 0 decreases to 1 - eps as d grows") {
  double prev = 1.0;
  for (double d : {1.0, 10.0, 1e3, 1e6, 1e12, 1e100, 1e300}) {
    const double v = rosenthal_bound({0, 0, 0.4, d}).value;
    CHECK(v < prev);
    CHECK(v >= 0.6);
    prev = v;
  }
  CHECK(prev - 0.6 < 1e-3);
}

TEST_CASE("rosenthal paraoptima lower bound") {
  CHECK(rosenthal_paraoptima_lower({0, 0, 0.5, 1}).value() == 0.5);
  CHECK(rosenthal_paraoptima_lower({0, 0, 1.0, 1}).value() == 0.0);
  CHECK(rosenthal_paraoptima_lower({0, 0, 0.05, 1}).value() == doctest::Approx(0.95).epsilon(1e-15));
}

TEST_CASE("pic1") {
  CHECK(pic1_stationary_mass_lower(0.0, 7).value() == 1.0);
  CHECK(pic1_stationary_mass_lower(0.25, 4).value() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(pic1_stationary_mass_lower(0.5, 10) - 0.2314) < 1e-4);
  for (double lambda = 0.05; lambda < 1.0; lambda += 0.05) {
    double prev = 2.0;
    for (double K = 1.0; K < 1e4; K *= 1.7) {
      const double v = pic1_stationary_mass_lower(lambda, K);
      CHECK(v > 0.0);
      CHECK(v <= 1.0);
      CHECK(v <= prev);
      CHECK(pic1_stationary_mass_lower(std::min(lambda + 0.04, 0.999), K) <= v);
      prev = v;
    }
  }
}

TEST_CASE("chain-specific lower bounds") {
  CHECK(chain_specific_lower_A(Probability(0.5), Probability(0.4)).value() ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(chain_specific_lower_A(Probability(1.0), Probability(0.3)).value() == 0.0);
  CHECK(chain_specific_lower_A(Probability(0.0), Probability(0.9)).value() == 1.0);
  CHECK_THROWS_AS(chain_specific_lower_A(Probability(0.5), Probability(0.0)), PreconditionError);
  CHECK(chain_specific_lower_B(Probability(0.5)).value() == 0.5);
  for (double pi = 0.05; pi <= 1.0; pi += 0.05)
    for (double eps = 0.0; eps < 0.95; eps += 0.05) {
      const double v = chain_specific_lower_A(Probability(eps), Probability(pi));
      CHECK(chain_specific_lower_A(Probability(eps + 0.05), Probability(pi)) <= v);
      CHECK(chain_specific_lower_A(Probability(eps), Probability(std::min(pi + 0.05, 1.0))) <= v);
    }
}

TEST_CASE("chain-specific lower bound A steps down as pi(C) crosses 1/m") {
  const Probability eps(0.3);
  CHECK(chain_specific_lower_A(eps, Probability(0.49)).value() == doctest::Approx(std::pow(0.7, 0.5)).epsilon(1e-15));
  CHECK(chain_specific_lower_A(eps, Probability(0.5)).value() == doctest::Approx(std::pow(0.7, 0.5)).epsilon(1e-15));
  CHECK(chain_specific_lower_A(eps, Probability(0.51)).value() == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("paraoptima lower bound jumps up in eps where floor(alpha_*) steps") {
  const auto below = paraoptima_lower({0.5, 2, 0.66, 1});
  const auto above = paraoptima_lower({0.5, 2, 0.67, 1});
  CHECK(*below.alpha_floor == 2);
  CHECK(*above.alpha_floor == 3);
  CHECK(below.value.value() == doctest::Approx(std::sqrt(0.34)).epsilon(1e-14));
  CHECK(above.value.value() == doctest::Approx(std::cbrt(0.33)).epsilon(1e-14));
  CHECK(above.value > below.value);
  CHECK(baxendale_bound({0.5, 2, 0.67, 1}).value < baxendale_bound({0.5, 2, 0.66, 1}).value);
}

TEST_CASE("sandwich, monotonicity and beta-independence on random parameters") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double lambda = 0.99 * u(rng), K = 1.0 + 200.0 * u(rng) * u(rng), eps = 0.001 + 0.998 * u(rng);
    const DmParamsA p(lambda, K, eps, 1.0);
    const auto bax = baxendale_bound(p), para = paraoptima_lower(p);
    CHECK(para.value <= bax.value);
    CHECK(*bax.alpha_star >= 1.0);
    CHECK(*bax.alpha_floor == floor_guarded(*bax.alpha_star));

    const DmParamsA q(lambda, K, eps, 0.01 + 0.99 * u(rng));
    CHECK(baxendale_bound(q).value.value() == bax.value.value());
    CHECK(paraoptima_lower(q).value.value() == para.value.value());

    const DmParamsA more_eps(lambda, K, std::min(1.0, eps + 0.01), 1.0);
    const DmParamsA more_K(lambda, K * 1.1, eps, 1.0);
    const DmParamsA more_lambda(std::min(0.999, lambda + 0.01), K, eps, 1.0);
    CHECK(baxendale_bound(more_eps).value <= bax.value);
    CHECK(baxendale_bound(more_K).value >= bax.value);
    CHECK(baxendale_bound(more_lambda).value >= bax.value);
    const auto para_eps = paraoptima_lower(more_eps);
    if (para_eps.alpha_floor == para.alpha_floor) CHECK(para_eps.value <= para.value);
    CHECK(paraoptima_lower(more_K).value >= para.value);
    CHECK(paraoptima_lower(more_lambda).value >= para.value);

    const DmParamsA full(lambda, K, 1.0, 1.0);
    CHECK(baxendale_bound(full).value.value() == lambda);
    CHECK(paraoptima_lower(full).value.value() == lambda);
  }
}
