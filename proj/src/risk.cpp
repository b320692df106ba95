#include "spb/risk.hpp"

#include <cmath>
#include <stdexcept>

#include "spb/poisson.hpp"

namespace spb {

double estimator_value(const Estimator& est, double b, int n) {
  const ModelParams params{b, 0.0};
  switch (est.kind) {
    case Estimator::Kind::p_hat:
      return p_hat(params, n);
    case Estimator::Kind::p_mle:
      return p_mle(params, n);
    case Estimator::Kind::p_hat_alpha:
      return p_hat_alpha(params, n, PriorRate{est.alpha});
  }
  throw std::logic_error("estimator_value: bad kind");
}

double mse(const std::function<double(int)>& estimate,
           const ModelParams& params, const NumericConfig& cfg) {
  validate(params);
  const double mu = params.b + params.theta;
  const int n_max = tail_cutoff(mu, cfg.mse_eps);
  const std::vector<double> f = pmf_row(mu, n_max);
  double sum = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const double e = estimate(n) - p_true(params, n);
    sum += e * e * f[size_t(n)];
  }
  return sum;
}

double mse(const Estimator& est, const ModelParams& params,
           const NumericConfig& cfg) {
  const double b = params.b;
  return mse([&](int n) { return estimator_value(est, b, n); }, params, cfg);
}

double conditional_risk_phat(double b, int n) {
  validate(ModelParams{b, 0.0});
  if (n < 0) throw std::domain_error("risk: n must be non-negative");
  if (n == 0) return 0.0;  // F_b(-1) = 0
  const double F_n = cdf(b, n);
  return pmf(b, n) * cdf(b, n - 1) / (F_n * F_n);
}

double conditional_risk_mle(double b, int n) {
  const ModelParams params{b, 0.0};
  const double d = p_hat(params, n) - p_mle(params, n);
  return conditional_risk_phat(b, n) + d * d;
}

double integrated_risk_gap(double b, double alpha, const NumericConfig& cfg) {
  validate(ModelParams{b, 0.0});
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::domain_error("risk: alpha must be positive");
  }
  const double mu_a = (1.0 + alpha) * b;
  const int n_max =
      std::max(tail_cutoff(b, cfg.series_eps), tail_cutoff(mu_a, cfg.series_eps));
  const std::vector<double> f0 = pmf_row(b, n_max);
  const std::vector<double> fa = pmf_row(mu_a, n_max);
  double F0 = 0.0, Fa = 0.0, sum = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    F0 += f0[size_t(n)];
    Fa += fa[size_t(n)];
    const double d = fa[size_t(n)] / Fa - f0[size_t(n)] / F0;
    // marginal weight of X = n under the exponential prior
    const double w =
        std::exp(alpha * b - double(n + 1) * std::log1p(alpha)) * Fa;
    sum += d * d * w;
  }
  return sum;
}

}  // namespace spb
