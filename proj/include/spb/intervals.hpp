#pragma once

#include <vector>

#include "spb/estimators.hpp"
#include "spb/numeric_config.hpp"

namespace spb {

// Interval for the signal mean theta. upper may be +inf when the accepted
// region is censored at the top of the inversion grid (does not happen
// with the default NumericConfig).
struct ThetaInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool contiguous = true;  // inversion saw a gap-free accepted grid set
};

// Interval for p = (b/(b+theta))^n, endpoints in [0, 1].
struct ProbInterval {
  double lower = 0.0;
  double upper = 1.0;
};

enum class IntervalMethod { unified, conditional, bayes };

// ---- unified (likelihood-ratio ordered) construction --------------------

// Acceptance set at a fixed theta: counts admitted in decreasing order of
// f_{b+theta}(k) / f_{b v k}(k) until their f_{b+theta} mass reaches
// `level`. Ties admit the smaller k first. Returned sorted ascending.
// Throws config_error if the truncation window cannot reach `level`.
std::vector<int> unified_accept(double b, double theta, double level,
                                const NumericConfig& cfg = {});

// {theta : n in unified_accept(b, theta, level)} located on the inversion
// grid and polished by bisection on the membership boundary.
ThetaInterval unified_interval_theta(double b, int n, double level,
                                     const NumericConfig& cfg = {});

// ---- conditional (B <= n_obs) construction ------------------------------

// The conditional PMF q^n_{b,theta}(k) of X given B <= n_obs:
// f_{b+theta}(k)/F_b(n) for k <= n, and the background-signal convolution
// sum_{j=0..n} f_b(j) f_theta(k-j) / F_b(n) for k > n. The j=0 term is
// required for total mass one; cfg.strict_paper_qpmf drops it (see
// NumericConfig).
double modified_pmf(double b, double theta, int n_obs, int k,
                    const NumericConfig& cfg = {});

// Same inversion scheme as unified_interval_theta with q^n in place of
// the Poisson PMF; the per-k likelihood-ratio denominators sup_theta'
// q^n_{b,theta'}(k) are found by a coarse scan plus golden-section.
ThetaInterval conditional_interval_theta(double b, int n, double level,
                                         const NumericConfig& cfg = {});

// Endpoint swap through the strictly decreasing map theta -> p.
// n = 0 collapses to [1, 1].
ProbInterval theta_to_p_interval(double b, int n, const ThetaInterval& ti);

// ---- Bayesian highest-posterior-density construction --------------------

// Posterior density of p given X = n under the uniform prior on theta:
// g(p|n) = b^{n+1} / (n! n F_b(n)) p^{-(2n+1)/n} exp(-b p^{-1/n}),
// 0 < p <= 1, n >= 1. Unimodal with mode (b/(2n+1))^n ^ 1.
double posterior_density_p(double b, int n, double p);

// Posterior CDF G(p|n) = F_{b p^{-1/n}}(n) / F_b(n) (gamma-tail identity
// applied to the theta posterior).
double posterior_cdf_p(double b, int n, double p);

// Shortest interval of posterior mass `level`: root-find G(z)=1-level,
// return [z,1] when the density at z does not exceed the density at 1,
// otherwise bisect the density cutoff until the enclosed mass matches
// `level` within cfg.bisect_tol. n = 0 returns [1, 1].
ProbInterval hpd_credible_interval(double b, int n, double level,
                                   const NumericConfig& cfg = {});

// ---- dispatch and coverage ----------------------------------------------

// The p-scale interval of the chosen method at observed count n.
ProbInterval interval_p(IntervalMethod method, double b, int n, double level,
                        const NumericConfig& cfg = {});

// Caches the per-n intervals of one (method, b, level) so coverage can be
// swept over theta without rebuilding them. Not safe for concurrent use
// of a single instance; distinct instances are independent.
class CoverageEvaluator {
 public:
  CoverageEvaluator(IntervalMethod method, double b, double level,
                    NumericConfig cfg = {});

  // P[ interval(X) contains p_theta(X) ] at the given true theta, the
  // outcome sum truncated at tail mass cfg.k_max_eps.
  double at(double theta);

  const ProbInterval& interval_for(int n);

 private:
  void ensure(int n_max);
  void build_unified_belt(int n_max);

  IntervalMethod method_;
  double b_;
  double level_;
  NumericConfig cfg_;
  std::vector<ProbInterval> cache_;
};

// One-shot convenience wrapper around CoverageEvaluator.
double coverage_probability(IntervalMethod method, const ModelParams& params,
                            double level, const NumericConfig& cfg = {});

}  // namespace spb
