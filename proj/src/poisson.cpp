#include "spb/poisson.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spb {

namespace {

void check_mu(double mu) {
  if (!std::isfinite(mu) || mu <= 0.0) {
    throw std::domain_error("poisson: mu must be positive and finite, got " +
                            std::to_string(mu));
  }
}

}  // namespace

double log_pmf(double mu, int k) {
  check_mu(mu);
  if (k < 0) throw std::domain_error("poisson: k must be non-negative");
  return k * std::log(mu) - mu - std::lgamma(double(k) + 1.0);
}

double pmf(double mu, int k) { return std::exp(log_pmf(mu, k)); }

double cdf(double mu, int k) {
  check_mu(mu);
  if (k < 0) return 0.0;
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) sum += pmf(mu, j);
  return sum;
}

int tail_cutoff(double mu, double eps) {
  check_mu(mu);
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::domain_error("poisson: eps must be in (0,1)");
  }
  // Walk up past the mode until the geometric tail bound drops below eps.
  // For k+2 > mu, 1 - F(k) <= f(k+1) * (k+2) / (k+2 - mu).
  int hi = int(mu) + 1;
  double f_hi = pmf(mu, hi);
  while (true) {
    const double denom = double(hi) + 2.0 - mu;
    if (denom > 0.0) {
      const double bound = pmf(mu, hi + 1) * (double(hi) + 2.0) / denom;
      if (bound < eps) break;
    }
    ++hi;
    f_hi *= mu / double(hi);
  }
  // Exact tail at hi, accumulated upward (positive terms, no cancellation).
  double tail = 0.0;
  {
    int j = hi + 1;
    double f = pmf(mu, j);
    while (f > 0.0 && (tail == 0.0 || f > tail * 1e-18)) {
      tail += f;
      ++j;
      f *= mu / double(j);
    }
  }
  // Walk down: tail(N-1) = tail(N) + f(N). Return the smallest N that
  // still satisfies tail < eps.
  int n = hi;
  double f_n = f_hi;
  while (n > 0 && tail + f_n < eps) {
    tail += f_n;
    f_n *= double(n) / mu;
    --n;
  }
  return n;
}

std::vector<double> pmf_row(double mu, int k_max) {
  check_mu(mu);
  if (k_max < 0) throw std::domain_error("poisson: k_max must be >= 0");
  std::vector<double> row(size_t(k_max) + 1);
  if (mu < 700.0) {  // exp(-mu) representable
    double f = std::exp(-mu);
    row[0] = f;
    for (int k = 1; k <= k_max; ++k) {
      f *= mu / double(k);
      row[size_t(k)] = f;
    }
  } else {
    for (int k = 0; k <= k_max; ++k) row[size_t(k)] = pmf(mu, k);
  }
  return row;
}

}  // namespace spb
