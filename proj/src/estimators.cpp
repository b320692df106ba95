#include "spb/estimators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "spb/poisson.hpp"

namespace spb {

void validate(const ModelParams& params) {
  if (!std::isfinite(params.b) || params.b <= 0.0) {
    throw std::domain_error("model: b must be positive and finite");
  }
  if (!std::isfinite(params.theta) || params.theta < 0.0) {
    throw std::domain_error("model: theta must be non-negative and finite");
  }
}

namespace {

void check_count(int n) {
  if (n < 0) throw std::domain_error("model: n must be non-negative");
}

void check_prior(PriorRate prior) {
  if (!std::isfinite(prior.alpha) || prior.alpha < 0.0) {
    throw std::domain_error("prior: alpha must be non-negative and finite");
  }
}

}  // namespace

double p_true(const ModelParams& params, int n) {
  validate(params);
  check_count(n);
  if (n == 0 || params.theta == 0.0) return 1.0;
  // log-difference form; raw powers overflow near n ~ 300
  return std::exp(double(n) *
                  (std::log(params.b) - std::log(params.b + params.theta)));
}

double mle_theta(const ModelParams& params, int n) {
  validate(params);
  check_count(n);
  return std::max(0.0, double(n) - params.b);
}

double p_mle(const ModelParams& params, int n) {
  validate(params);
  check_count(n);
  if (double(n) <= params.b) return 1.0;
  return std::exp(double(n) * (std::log(params.b) - std::log(double(n))));
}

double p_hat(const ModelParams& params, int n) {
  validate(params);
  check_count(n);
  if (n == 0) return 1.0;
  return pmf(params.b, n) / cdf(params.b, n);
}

double p_hat_alpha(const ModelParams& params, int n, PriorRate prior) {
  validate(params);
  check_count(n);
  check_prior(prior);
  if (n == 0) return 1.0;
  const double mu = (1.0 + prior.alpha) * params.b;
  return pmf(mu, n) / cdf(mu, n);
}

double signal_indicator_estimate(const ModelParams& params, int n,
                                 PriorRate prior) {
  validate(params);
  check_count(n);
  check_prior(prior);
  if (n == 0) return 0.0;  // X = 0 forces S = 0
  const double mu = (1.0 + prior.alpha) * params.b;
  return cdf(mu, n - 1) / cdf(mu, n);
}

}  // namespace spb
