#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "fairpoly/bounds.hpp"
#include "fairpoly/polynomial.hpp"

using namespace fairpoly;
using namespace fairpoly::bounds;

namespace {

FairnessConfig config_of(double c, int n, int k, double p, Mode mode) {
  FairnessConfig cfg;
  cfg.c = c;
  cfg.degree = n;
  cfg.dimension = k;
  cfg.p = p;
  cfg.mode = mode;
  return cfg;
}

}  // namespace

TEST_CASE("univariate bounds match the closed form") {
  // n = 1: 6*1*c / (1*2*3) = c.
  const auto b1 = derive_bounds(config_of(1.0, 1, 1, 2.0, Mode::kDistance));
  CHECK(b1.upper[1] == doctest::Approx(1.0));
  CHECK(b1.theorem_variant == "univariate");

  // n = 2: 6i/30 -> 0.2 and 0.4.
  const auto b2 = derive_bounds(config_of(1.0, 2, 1, 2.0, Mode::kDistance));
  CHECK(b2.upper[1] == doctest::Approx(0.2));
  CHECK(b2.upper[2] == doctest::Approx(0.4));
  CHECK(b2.lower[1] == doctest::Approx(-0.2));
}

TEST_CASE("order-1 multivariate bounds match the closed forms") {
  const auto b22 = derive_bounds(config_of(1.0, 1, 2, 2.0, Mode::kZone));
  CHECK(b22.upper[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(b22.upper[2] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(b22.theorem_variant == "bivariate-euclidean");

  const auto b32 = derive_bounds(config_of(2.0, 1, 3, 2.0, Mode::kZone));
  CHECK(b32.upper[1] == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(b32.theorem_variant == "kvariate-euclidean");

  const auto b33 = derive_bounds(config_of(1.0, 1, 3, 3.0, Mode::kZone));
  CHECK(b33.upper[1] == doctest::Approx(1.0 / std::cbrt(9.0)).epsilon(1e-12));
  CHECK(b33.theorem_variant == "kvariate-pnorm");
}

TEST_CASE("the intercept column is unbounded") {
  for (const auto& cfg : {config_of(1.0, 4, 1, 2.0, Mode::kDistance),
                          config_of(5.0, 3, 2, 2.0, Mode::kZone)}) {
    const auto box = derive_bounds(cfg);
    CHECK(box.lower[0] == -std::numeric_limits<double>::infinity());
    CHECK(box.upper[0] == std::numeric_limits<double>::infinity());
    for (std::size_t j = 1; j < box.size(); ++j) {
      CHECK(box.upper[j] > 0.0);
      CHECK(box.lower[j] == -box.upper[j]);
    }
  }
}

TEST_CASE("the general separable formula reduces exactly to the univariate one at k = 1") {
  for (int n : {1, 2, 5, 9}) {
    for (double p : {1.0, 2.0, 3.5}) {
      for (double c : {1.0, 2.5, 100.0}) {
        for (int j = 1; j <= n; ++j) {
          CHECK(separable_bound(j, n, 1, p, c) == univariate_bound(j, n, c));  // bit-exact
        }
      }
    }
  }
}

TEST_CASE("the order-1 theorems agree with the n = 1 general formula") {
  for (int k : {2, 3, 7}) {
    for (double p : {1.0, 2.0, 4.0}) {
      for (double c : {1.0, 3.0}) {
        CHECK(separable_bound(1, 1, k, p, c) ==
              doctest::Approx(order1_bound(k, p, c)).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("bounds scale linearly in c") {
  const auto base = derive_bounds(config_of(2.0, 4, 3, 2.0, Mode::kZone));
  const auto doubled = derive_bounds(config_of(4.0, 4, 3, 2.0, Mode::kZone));
  for (std::size_t j = 1; j < base.size(); ++j) {
    CHECK(doubled.upper[j] == 2.0 * base.upper[j]);
  }
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(derive_bounds(config_of(0.5, 1, 1, 2.0, Mode::kDistance)),
                  std::invalid_argument);
  CHECK_THROWS_AS(derive_bounds(config_of(1.0, 0, 1, 2.0, Mode::kDistance)),
                  std::invalid_argument);
  CHECK_THROWS_AS(derive_bounds(config_of(1.0, 1, 2, 2.0, Mode::kDistance)),
                  std::invalid_argument);  // distance mode forces k = 1
  CHECK_THROWS_AS(derive_bounds(config_of(1.0, 1, 2, 0.9, Mode::kZone)), std::invalid_argument);
}

TEST_CASE("nonlinear condition on the weighted coefficient sum") {
  polynomial::UnivariatePolynomial slope_c{{0.7, 2.0, 0.0}};
  const auto at_cap = check_nonlinear_condition(slope_c, 2.0);
  CHECK(at_cap.satisfied);  // the intercept is excluded from the sum
  CHECK(at_cap.slack == doctest::Approx(0.0));

  polynomial::UnivariatePolynomial over{{0.0, 0.6, 0.3}};
  const auto failed = check_nonlinear_condition(over, 1.0);
  CHECK(!failed.satisfied);
  CHECK(failed.slack == doctest::Approx(-0.2));
}

TEST_CASE("coefficients at the linearized bounds meet the nonlinear cap with zero slack") {
  // sum_i i * (6ic/N) = c because sum i^2 = n(n+1)(2n+1)/6; for n = 3 the
  // bounds are i/14 and 1/14 + 4/14 + 9/14 = 1.
  for (int n : {1, 2, 3, 8, 15}) {
    for (double c : {1.0, 5.0, 25.0}) {
      polynomial::UnivariatePolynomial poly;
      poly.coefficients.assign(n + 1, 0.0);
      for (int i = 1; i <= n; ++i) poly.coefficients[i] = univariate_bound(i, n, c);
      const auto check = check_nonlinear_condition(poly, c);
      CHECK(check.satisfied);
      CHECK(std::fabs(check.slack) <= 1e-9);
    }
  }
}

TEST_CASE("separable condition is evaluated per variable") {
  FairnessConfig cfg = config_of(1.0, 1, 2, 2.0, Mode::kZone);

  polynomial::SeparablePolynomial zeros;
  zeros.intercept = 0.9;
  zeros.components = {{0.0}, {0.0}};
  const auto all_slack = check_separable_condition(zeros, cfg);
  CHECK(all_slack.satisfied);
  CHECK(all_slack.per_variable_slack[0] == doctest::Approx(1.0 / std::sqrt(2.0)));

  polynomial::SeparablePolynomial tight;
  tight.components = {{1.0 / std::sqrt(2.0)}, {1.0 / std::sqrt(2.0)}};
  const auto at_cap = check_separable_condition(tight, cfg);
  CHECK(at_cap.satisfied);
  CHECK(std::fabs(at_cap.per_variable_slack[0]) <= 1e-12);
  CHECK(std::fabs(at_cap.per_variable_slack[1]) <= 1e-12);

  polynomial::SeparablePolynomial over;
  over.components = {{1.0}, {0.0}};
  const auto failed = check_separable_condition(over, cfg);
  CHECK(!failed.satisfied);
  CHECK(failed.per_variable_slack[0] < 0.0);
  CHECK(failed.per_variable_slack[1] > 0.0);

  polynomial::SeparablePolynomial wrong_shape;
  wrong_shape.components = {{0.0}};
  CHECK_THROWS_AS(check_separable_condition(wrong_shape, cfg), std::invalid_argument);
}

TEST_CASE("random coefficients inside the boxes always satisfy the Lipschitz bound") {
  // Monte Carlo over every bound family: 10,000 coefficient draws checked
  // against a shared set of 1,000 point pairs per configuration.
  std::mt19937_64 rng(314159);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  constexpr int kDraws = 10000;
  constexpr int kPairs = 1000;

  struct Case {
    int k;
    double p;
    int n;
    double c;
    Mode mode;
  };
  const std::vector<Case> cases{
      {1, 2.0, 1, 1.0, Mode::kDistance}, {1, 2.0, 3, 1.0, Mode::kDistance},
      {1, 2.0, 7, 10.0, Mode::kDistance}, {2, 2.0, 1, 1.0, Mode::kZone},
      {2, 2.0, 3, 1.0, Mode::kZone},      {3, 1.0, 2, 5.0, Mode::kZone},
      {2, 3.0, 2, 1.0, Mode::kZone},
  };

  for (const auto& tc : cases) {
    CAPTURE(tc.k);
    CAPTURE(tc.p);
    CAPTURE(tc.n);
    const auto box = derive_bounds(config_of(tc.c, tc.n, tc.k, tc.p, tc.mode));

    std::vector<std::vector<double>> columns(tc.k, std::vector<double>(2 * kPairs));
    for (auto& col : columns) {
      for (auto& v : col) v = unit(rng);
    }
    std::vector<double> distances(kPairs);
    for (int t = 0; t < kPairs; ++t) {
      if (tc.mode == Mode::kDistance) {
        distances[t] = std::fabs(columns[0][2 * t] - columns[0][2 * t + 1]);
      } else {
        double sum = 0.0;
        for (int d = 0; d < tc.k; ++d) {
          sum += std::pow(std::fabs(columns[d][2 * t] - columns[d][2 * t + 1]), tc.p);
        }
        distances[t] = std::pow(sum, 1.0 / tc.p);
      }
    }

    std::vector<double> coeffs(box.size());
    std::uint64_t violations = 0;
    for (int draw = 0; draw < kDraws; ++draw) {
      coeffs[0] = unit(rng);  // unbounded intercept; any value is safe
      for (std::size_t j = 1; j < box.size(); ++j) {
        coeffs[j] = box.upper[j] * unit(rng);
      }
      std::vector<double> values;
      if (tc.k == 1) {
        values = polynomial::eval_univariate_many(polynomial::unpack_univariate(coeffs),
                                                  columns[0]);
      } else {
        values = polynomial::eval_separable_many(
            polynomial::unpack_separable(coeffs, tc.k, tc.n), columns);
      }
      for (int t = 0; t < kPairs; ++t) {
        const double lhs = std::fabs(values[2 * t] - values[2 * t + 1]);
        if (lhs > tc.c * distances[t] + 1e-9) ++violations;
      }
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("generalized Titu inequality holds on random instances") {
  std::mt19937_64 rng(271828);
  std::uniform_real_distribution<double> pos(1e-6, 10.0);
  std::uint64_t counterexamples = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int exponent = 2 + static_cast<int>(rng() % 3);  // m in {2,3,4}
    const std::size_t len = 2 + rng() % 9;                 // 2..10 terms
    double lhs_sum = 0.0;
    double a_sum = 0.0;
    double x_sum = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      const double a = pos(rng);
      const double x = pos(rng);
      lhs_sum += std::pow(a, double(exponent)) / x;
      a_sum += a;
      x_sum += x;
    }
    const double lhs = std::pow(double(len), double(exponent - 2)) * lhs_sum;
    const double rhs = std::pow(a_sum, double(exponent)) / x_sum;
    if (lhs < rhs * (1.0 - 1e-12)) ++counterexamples;
  }
  CHECK(counterexamples == 0);
}
