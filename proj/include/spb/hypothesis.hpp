#pragma once

#include "spb/estimators.hpp"
#include "spb/numeric_config.hpp"

namespace spb {

enum class ErrorRateKind { classical, modified };

// Classical type I error rate for rejecting H0: S = 0 when X >= n0:
// alpha(n0) = P_b[X >= n0] = 1 - F_b(n0 - 1). Strictly decreasing in n0.
double classical_type1(double b, int n0);

// p_hat-weighted rate at signal mean theta:
// sum_{n>=n0} p_hat(n) f_{b+theta}(n) / sum_{n>=0} p_hat(n) f_{b+theta}(n),
// numerator and denominator truncated on the same tail-mass window so the
// ratio error is second order.
double modified_type1_theta(const ModelParams& params, int n0,
                            const NumericConfig& cfg = {});

// The modified rate alpha*(n0), i.e. the theta = 0 case above.
double modified_type1(double b, int n0, const NumericConfig& cfg = {});

// Smallest n0 >= 1 whose selected error rate is <= level. Linear upward
// scan; both rates are strictly decreasing in n0.
int least_n0(double b, double level, ErrorRateKind kind,
             const NumericConfig& cfg = {});

}  // namespace spb
