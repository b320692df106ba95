#pragma once

#include <vector>

namespace spb {

// Numerically stable Poisson kernels. Everything is evaluated through
// k*ln(mu) - mu - lgamma(k+1); factorials are never formed directly, so
// there is no overflow at k ~ 171 and the kernels stay accurate out to
// k = 1e4 and beyond.

// Log of the Poisson PMF f_mu(k). Throws std::domain_error unless mu is
// positive and finite and k >= 0.
double log_pmf(double mu, int k);

// f_mu(k) = exp(log_pmf(mu, k)), in (0, 1].
double pmf(double mu, int k);

// F_mu(k) = sum_{j<=k} f_mu(j), by forward summation of pmf terms.
// k < 0 yields 0 so expressions like F_b(n-1) work at n = 0.
double cdf(double mu, int k);

// Smallest N with 1 - F_mu(N) < eps, for 0 < eps < 1. The tail mass is
// accumulated upward from its far end, so there is no 1-F cancellation
// and the bound is exact even for eps near machine precision.
int tail_cutoff(double mu, double eps);

// f_mu(0..k_max) in one pass: ratio recurrence from f_mu(0) when exp(-mu)
// is representable, exp(log_pmf) per term otherwise.
std::vector<double> pmf_row(double mu, int k_max);

}  // namespace spb
