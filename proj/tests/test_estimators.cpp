#include "spb/estimators.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "spb/poisson.hpp"

using namespace spb;

TEST_CASE("p_true closed forms") {
  CHECK(p_true({3.7, 0.0}, 12) == 1.0);
  CHECK(p_true({3.7, 5.0}, 0) == 1.0);
  CHECK(p_true({1.0, 1.0}, 2) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(p_true({2.0, 3.0}, 4) == doctest::Approx(0.0256).epsilon(1e-13));
  // no overflow far beyond raw powers
  CHECK(p_true({1.0, 1.0}, 2000) ==
        doctest::Approx(std::exp(-2000.0 * std::log(2.0))).epsilon(1e-10));
}

TEST_CASE("mle_theta") {
  CHECK(mle_theta({15.8, 0.0}, 15) == 0.0);
  CHECK(mle_theta({2.0, 0.0}, 5) == 3.0);
  CHECK(mle_theta({3.0, 0.0}, 3) == 0.0);
}

TEST_CASE("p_mle") {
  CHECK(p_mle({15.8, 0.0}, 15) == 1.0);
  CHECK(p_mle({1.0, 0.0}, 0) == 1.0);
  CHECK(p_mle({1.0, 0.0}, 3) == doctest::Approx(1.0 / 27.0).epsilon(1e-13));
}

TEST_CASE("p_mle is one exactly up to b and below one past it") {
  for (double b : {1.0, 2.5, 10.0}) {
    for (int n = 0; n <= int(b); ++n) CHECK(p_mle({b, 0.0}, n) == 1.0);
    for (int n = int(b) + 1; n <= int(b) + 20; ++n) {
      if (double(n) <= b) continue;
      CHECK(p_mle({b, 0.0}, n) < 1.0);
    }
  }
}

TEST_CASE("p_hat worked example and closed forms") {
  CHECK(p_hat({15.8, 0.0}, 15) == doctest::Approx(0.206).epsilon(0.0025));
  CHECK(std::abs(p_hat({15.8, 0.0}, 15) - 0.206) < 0.0005);
  CHECK(p_hat({4.2, 0.0}, 0) == 1.0);
  CHECK(p_hat({1.0, 0.0}, 1) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("p_hat stays inside (0,1) and decreases in n") {
  for (double b : {1.0, 2.0, 5.0, 10.0, 15.8}) {
    double prev = p_hat({b, 0.0}, 0);
    CHECK(prev == 1.0);
    for (int n = 1; n <= 100; ++n) {
      const double v = p_hat({b, 0.0}, n);
      CHECK(v > 0.0);
      CHECK(v < 1.0);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("p_hat_alpha") {
  for (double b : {1.0, 5.0}) {
    for (int n : {0, 1, 4}) {
      CHECK(p_hat_alpha({b, 0.0}, n, {0.0}) ==
            doctest::Approx(p_hat({b, 0.0}, n)).epsilon(1e-15));
    }
  }
  CHECK(p_hat_alpha({1.0, 0.0}, 1, {1.0}) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(std::abs(p_hat_alpha({15.8, 0.0}, 15, {0.01}) - 0.206) < 0.01);
}

TEST_CASE("p_hat_alpha approaches p_hat as alpha drops") {
  for (double b : {1.0, 5.0, 15.8}) {
    for (int n : {1, 3, 15}) {
      double prev_gap = 2.0;
      for (double a : {1.0, 0.1, 0.01, 0.001}) {
        const double gap =
            std::abs(p_hat_alpha({b, 0.0}, n, {a}) - p_hat({b, 0.0}, n));
        CHECK(gap < prev_gap);
        prev_gap = gap;
      }
      CHECK(prev_gap < 1e-3);
    }
  }
}

TEST_CASE("signal indicator estimate") {
  CHECK(signal_indicator_estimate({2.0, 0.0}, 0, {0.0}) == 0.0);
  CHECK(signal_indicator_estimate({2.0, 0.0}, 0, {3.0}) == 0.0);
  CHECK(std::abs(signal_indicator_estimate({15.8, 0.0}, 15, {0.0}) - 0.794) <
        0.0005);
  CHECK(signal_indicator_estimate({1.0, 0.0}, 1, {0.0}) ==
        doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("indicator estimate complements p_hat_alpha") {
  for (double b : {1.0, 2.0, 5.0, 15.8}) {
    for (double a : {0.0, 0.5, 2.0}) {
      for (int n = 0; n <= 50; ++n) {
        const double sum = signal_indicator_estimate({b, 0.0}, n, {a}) +
                           p_hat_alpha({b, 0.0}, n, {a});
        CHECK(std::abs(sum - 1.0) < 1e-13);
      }
    }
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(p_hat({0.0, 0.0}, 1), std::domain_error);
  CHECK_THROWS_AS(p_true({1.0, -0.5}, 1), std::domain_error);
  CHECK_THROWS_AS(p_hat({1.0, 0.0}, -1), std::domain_error);
  CHECK_THROWS_AS(p_hat_alpha({1.0, 0.0}, 1, {-1.0}), std::domain_error);
}
