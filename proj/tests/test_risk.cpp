#include "spb/risk.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "spb/poisson.hpp"

using namespace spb;

namespace {

// Plain-sum reference for the squared-error risk, with the estimators
// recomputed from scratch.
double mse_reference(bool use_mle, double b, double theta, int n_max) {
  double sum = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    double est;
    if (use_mle) {
      est = double(n) <= b ? 1.0 : std::pow(b / double(n), double(n));
    } else {
      est = n == 0 ? 1.0 : oracle::opmf(b, n) / oracle::ocdf(b, n);
    }
    const double p = n == 0 ? 1.0 : std::pow(b / (b + theta), double(n));
    sum += (est - p) * (est - p) * oracle::opmf(b + theta, n);
  }
  return sum;
}

}  // namespace

TEST_CASE("mse against plain-sum reference") {
  for (double theta : {0.0, 0.5, 2.0}) {
    CHECK(mse(Estimator::pmle(), {1.0, theta}) ==
          doctest::Approx(mse_reference(true, 1.0, theta, 80)).epsilon(1e-9));
    CHECK(mse(Estimator::phat(), {1.0, theta}) ==
          doctest::Approx(mse_reference(false, 1.0, theta, 80)).epsilon(1e-9));
    CHECK(mse(Estimator::phat(), {5.0, theta}) ==
          doctest::Approx(mse_reference(false, 5.0, theta, 120)).epsilon(1e-9));
  }
}

TEST_CASE("the oracle estimator has zero risk") {
  for (double theta : {0.0, 1.0, 7.5}) {
    const ModelParams params{2.0, theta};
    const double r = mse([&](int n) { return p_true(params, n); }, params);
    CHECK(r == 0.0);
  }
}

TEST_CASE("p_hat_alpha risk interpolates toward p_hat risk") {
  const ModelParams params{2.0, 1.0};
  const double r0 = mse(Estimator::phat(), params);
  const double r = mse(Estimator::phat_alpha(1e-7), params);
  CHECK(r == doctest::Approx(r0).epsilon(1e-5));
}

TEST_CASE("conditional risk closed forms") {
  CHECK(conditional_risk_phat(3.0, 0) == 0.0);
  CHECK(conditional_risk_mle(3.0, 0) == 0.0);
  CHECK(conditional_risk_phat(1.0, 1) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(conditional_risk_mle(1.0, 1) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("conditional risk of p_hat equals p_hat(1 - p_hat)") {
  for (double b : {1.0, 2.0, 5.0, 15.8}) {
    for (int n = 0; n <= 60; ++n) {
      const double direct = conditional_risk_phat(b, n);
      const double ph = p_hat({b, 0.0}, n);
      CHECK(direct == doctest::Approx(ph * (1.0 - ph)).epsilon(1e-12));
    }
  }
  CHECK(std::abs(conditional_risk_phat(15.8, 15) - 0.206 * (1.0 - 0.206)) <
        1e-3);
  CHECK(std::abs(conditional_risk_mle(15.8, 15) - 0.794) < 1e-3);
}

TEST_CASE("MLE conditional risk dominates, strictly below the background") {
  for (int bi = 1; bi <= 10; ++bi) {
    const double b = double(bi);
    for (int n = 0; n <= 50; ++n) {
      const double r_hat = conditional_risk_phat(b, n);
      const double r_mle = conditional_risk_mle(b, n);
      CHECK(r_mle >= r_hat);
      if (n >= 1 && double(n) <= b) CHECK(r_mle > r_hat);
      CHECK(r_hat >= 0.0);
      CHECK(r_mle <= 1.0);
    }
  }
}

TEST_CASE("risk curves cross between the origin and moderate signal") {
  // At b = 5 the conditional estimator loses at theta = 0 and wins by
  // theta = 0.5 already; the crossover sits below 0.5.
  const double b = 5.0;
  CHECK(mse(Estimator::phat(), {b, 0.0}) > mse(Estimator::pmle(), {b, 0.0}));
  for (double theta : {0.5, 5.0, 10.0}) {
    CHECK(mse(Estimator::phat(), {b, theta}) <
          mse(Estimator::pmle(), {b, theta}));
  }
  double crossover = -1.0;
  for (double theta = 0.0; theta < 0.5; theta += 0.01) {
    if (mse(Estimator::phat(), {b, theta}) <=
        mse(Estimator::pmle(), {b, theta})) {
      crossover = theta;
      break;
    }
  }
  CHECK(crossover > 0.0);
  CHECK(crossover < 0.5);
}

TEST_CASE("integrated risk gap shrinks with the prior rate") {
  for (double b : {1.0, 5.0, 10.0}) {
    double prev = 1.0;
    for (double a : {1.0, 0.1, 0.01, 0.001}) {
      const double g = integrated_risk_gap(b, a);
      CHECK(g > 0.0);
      CHECK(g < prev);
      prev = g;
    }
    CHECK(prev < 1e-3);
  }
  CHECK(integrated_risk_gap(5.0, 0.001) < 1e-4);
  CHECK(integrated_risk_gap(2.0, 1e-12) < 1e-9);
}

TEST_CASE("integrated risk gap equals its quadrature route") {
  // Independent evaluation of integral over theta of
  // sum_n (d_alpha(n) - d(n))^2 f_{b+theta}(n) exp(-alpha theta).
  for (double b : {1.0, 5.0}) {
    for (double alpha : {1.0, 0.25}) {
      const auto d = [&](double mu, int n) {
        return oracle::opmf(mu, n) / oracle::ocdf(mu, n);
      };
      const int n_max = 80;
      std::vector<double> diff2(size_t(n_max) + 1);
      for (int n = 0; n <= n_max; ++n) {
        const double e = d((1.0 + alpha) * b, n) - d(b, n);
        diff2[size_t(n)] = e * e;
      }
      const auto integrand = [&](double theta) {
        const auto f = oracle::opmf_row(b + theta, n_max);
        double s = 0.0;
        for (int n = 0; n <= n_max; ++n) s += diff2[size_t(n)] * f[size_t(n)];
        return s * std::exp(-alpha * theta);
      };
      const double hi = 60.0 / alpha < 300.0 ? 60.0 / alpha : 300.0;
      const double quad = oracle::integrate(integrand, 0.0, hi, 1e-12);
      CHECK(integrated_risk_gap(b, alpha) ==
            doctest::Approx(quad).epsilon(1e-6));
    }
  }
}
