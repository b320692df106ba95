#include "spb/hypothesis.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spb/poisson.hpp"

namespace spb {

namespace {

void check_n0(int n0) {
  if (n0 < 1) throw std::domain_error("hypothesis: n0 must be >= 1");
}

}  // namespace

double classical_type1(double b, int n0) {
  validate(ModelParams{b, 0.0});
  check_n0(n0);
  // P_b[X >= n0] summed as the upper tail; the 1 - F form cancels to
  // machine noise (or below zero) once the tail is tiny
  double sum = 0.0;
  double f = pmf(b, n0);
  for (int j = n0; f > 0.0 && (sum == 0.0 || f > sum * 1e-20); ) {
    sum += f;
    ++j;
    f *= b / double(j);
  }
  return sum;
}

double modified_type1_theta(const ModelParams& params, int n0,
                            const NumericConfig& cfg) {
  validate(params);
  check_n0(n0);
  const double mu = params.b + params.theta;
  // keep real terms above the threshold so the rate stays strictly
  // positive and decreasing even when n0 is past the tail window
  const int n_max = std::max(tail_cutoff(mu, cfg.series_eps), n0 + 20);
  const std::vector<double> f_mu = pmf_row(mu, n_max);
  const std::vector<double> f_b = pmf_row(params.b, n_max);
  // numerator and denominator share the truncation window
  double F_b = 0.0, den = 0.0, num = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    F_b += f_b[size_t(n)];
    const double w = (f_b[size_t(n)] / F_b) * f_mu[size_t(n)];
    den += w;
    if (n >= n0) num += w;
  }
  return num / den;
}

double modified_type1(double b, int n0, const NumericConfig& cfg) {
  return modified_type1_theta(ModelParams{b, 0.0}, n0, cfg);
}

int least_n0(double b, double level, ErrorRateKind kind,
             const NumericConfig& cfg) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::domain_error("hypothesis: level must be in (0,1)");
  }
  for (int n0 = 1;; ++n0) {
    const double rate = kind == ErrorRateKind::classical
                            ? classical_type1(b, n0)
                            : modified_type1(b, n0, cfg);
    if (rate <= level) return n0;
  }
}

}  // namespace spb
