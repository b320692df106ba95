#pragma once

#include <functional>

#include "spb/estimators.hpp"
#include "spb/numeric_config.hpp"

namespace spb {

// Point-estimator selector for risk sweeps.
struct Estimator {
  enum class Kind { p_hat, p_mle, p_hat_alpha };
  Kind kind = Kind::p_hat;
  double alpha = 0.0;  // only meaningful for p_hat_alpha

  static Estimator phat() { return {Kind::p_hat, 0.0}; }
  static Estimator pmle() { return {Kind::p_mle, 0.0}; }
  static Estimator phat_alpha(double a) { return {Kind::p_hat_alpha, a}; }
};

double estimator_value(const Estimator& est, double b, int n);

// Squared-error risk R(p~, theta) = E_theta[(p~ - p)^2], the series
// truncated at tail mass cfg.mse_eps. Every summand is <= 1, so the
// truncation under-estimates the series by less than cfg.mse_eps.
double mse(const Estimator& est, const ModelParams& params,
           const NumericConfig& cfg = {});

// Same risk for an arbitrary [0,1]-valued estimate of p as a function of
// the observed count.
double mse(const std::function<double(int)>& estimate,
           const ModelParams& params, const NumericConfig& cfg = {});

// Conditional risk of 1 - p_hat as an estimator of I_{S>0}:
// f_b(n) F_b(n-1) / F_b(n)^2. Does not depend on theta; 0 at n = 0.
double conditional_risk_phat(double b, int n);

// Conditional risk of the MLE: conditional_risk_phat plus
// (p_hat - p_mle)^2, so it always dominates the p_hat risk.
double conditional_risk_mle(double b, int n);

// Integrated-risk gap E^alpha (p_hat_alpha - p_hat)^2, computed with the
// closed-form marginal weights w_n = e^{alpha b} F_{(1+alpha)b}(n) /
// (1+alpha)^{n+1}. Decreases to 0 as alpha -> 0.
double integrated_risk_gap(double b, double alpha,
                           const NumericConfig& cfg = {});

}  // namespace spb
