#pragma once

namespace spb {

// The signal-plus-background model: X = B + S with B ~ Poisson(b), b known,
// and S ~ Poisson(theta), theta >= 0 unknown. The estimand throughout is
// p = P_theta[S = 0 | X = n] = (b/(b+theta))^n.
struct ModelParams {
  double b = 1.0;      // background mean, > 0
  double theta = 0.0;  // signal mean, >= 0 (evaluation/oracle role)
};

// Rate of the exponential prior exp(-alpha*theta) d theta on [0, inf);
// alpha = 0 is the improper uniform prior. Distinct from a significance
// level, which the source material denotes by the same letter.
struct PriorRate {
  double alpha = 0.0;
};

void validate(const ModelParams& params);

// True conditional no-signal probability p_theta(n) = (b/(b+theta))^n.
// Computed as exp(n*(ln b - ln(b+theta))); equals 1 at n = 0 or theta = 0.
double p_true(const ModelParams& params, int n);

// MLE of the signal mean: 0 v (n - b).
double mle_theta(const ModelParams& params, int n);

// Plug-in MLE of p: b^n / (b v n)^n. Equals 1 iff n <= b.
double p_mle(const ModelParams& params, int n);

// Conditional estimator p_hat(n) = P(B = n | B <= n) = f_b(n)/F_b(n).
// Equals 1 at n = 0 and lies strictly inside (0,1) for n >= 1.
double p_hat(const ModelParams& params, int n);

// Bayes estimator under the exponential prior:
// f_{(1+alpha)b}(n) / F_{(1+alpha)b}(n). Reduces to p_hat at alpha = 0.
double p_hat_alpha(const ModelParams& params, int n, PriorRate prior);

// Posterior expectation of the signal indicator I_{S>0}:
// F_{(1+alpha)b}(n-1) / F_{(1+alpha)b}(n) for n >= 1, 0 at n = 0.
// Complements p_hat_alpha.
double signal_indicator_estimate(const ModelParams& params, int n,
                                 PriorRate prior);

}  // namespace spb
