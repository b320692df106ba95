#include "spb/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "spb/errors.hpp"
#include "spb/poisson.hpp"

namespace spb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::domain_error("intervals: level must be in (0,1)");
  }
}

void check_theta(double theta) {
  if (!std::isfinite(theta) || theta < 0.0) {
    throw std::domain_error("intervals: theta must be non-negative");
  }
}

// Greedy likelihood-ratio ordering: admit counts by decreasing log_ratio
// (ties toward smaller k) until the admitted prob mass reaches level.
// Returns sorted members. The admitted set is the smallest ratio-downward-
// closed set reaching the mass target.
std::vector<int> greedy_accept(const std::vector<double>& prob,
                               const std::vector<double>& log_ratio,
                               double level) {
  std::vector<int> order(prob.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (log_ratio[size_t(a)] != log_ratio[size_t(b)])
      return log_ratio[size_t(a)] > log_ratio[size_t(b)];
    return a < b;
  });
  std::vector<int> members;
  double mass = 0.0;
  for (int k : order) {
    members.push_back(k);
    mass += prob[size_t(k)];
    if (mass >= level) {
      std::sort(members.begin(), members.end());
      return members;
    }
  }
  throw config_error(
      "acceptance set: truncation window mass cannot reach level " +
      std::to_string(level) + " (reached " + std::to_string(mass) + ")");
}

// Golden-section maximization on [lo, hi]; assumes the caller bracketed a
// maximum. Returns the midpoint of the final bracket and its value.
std::pair<double, double> golden_max(const std::function<double(double)>& f,
                                     double lo, double hi, double tol) {
  constexpr double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  int guard = 0;
  while (b - a > tol && ++guard < 500) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

// Coarse scan (64 points plus a seed) followed by golden-section in the
// best segment. The target need not be unimodal; the scan picks the basin.
double sup_over_theta(const std::function<double(double)>& f, double hi,
                      double seed, double tol) {
  constexpr int kScan = 64;
  const double h = hi / double(kScan - 1);
  double best_x = 0.0, best_v = f(0.0);
  for (int i = 1; i < kScan; ++i) {
    const double x = double(i) * h;
    const double v = f(x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  if (seed >= 0.0 && seed <= hi) {
    const double v = f(seed);
    if (v > best_v) {
      best_v = v;
      best_x = seed;
    }
  }
  const auto [x, v] =
      golden_max(f, std::max(0.0, best_x - h), std::min(hi, best_x + h), tol);
  return std::max(v, best_v);
}

// Result of inverting an acceptance-region membership over a theta grid.
struct Inversion {
  double lower = 0.0;
  double upper = 0.0;
  bool contiguous = true;
};

struct GridScan {
  int first = -1;
  int last = -1;
  int count = 0;

  void mark(int i) {
    if (first < 0) first = i;
    last = i;
    ++count;
  }
};

// Polishes the grid-located boundaries by bisecting the membership change
// between adjacent grid points. The returned endpoints are the accepted
// side of each bracket, so the interval is a subset of the true region
// with endpoint error below root_tol.
Inversion refine_region(const std::function<bool(double)>& member,
                        const GridScan& scan, double step, double theta_max,
                        int last_index, double root_tol) {
  if (scan.count == 0) {
    throw numeric_error(
        "interval inversion: acceptance region empty on the grid");
  }
  Inversion inv;
  inv.contiguous = scan.count == scan.last - scan.first + 1;

  if (scan.first == 0) {
    inv.lower = 0.0;
  } else {
    double out = double(scan.first - 1) * step;
    double in = double(scan.first) * step;
    while (in - out > root_tol) {
      const double mid = 0.5 * (out + in);
      (member(mid) ? in : out) = mid;
    }
    inv.lower = in;
  }

  if (scan.last == last_index) {
    // The region may continue past the last grid point; probe theta_max
    // itself before declaring it censored.
    if (member(theta_max)) {
      inv.upper = kInf;
      return inv;
    }
    double in = double(scan.last) * step;
    double out = theta_max;
    while (out - in > root_tol) {
      const double mid = 0.5 * (in + out);
      (member(mid) ? in : out) = mid;
    }
    inv.upper = in;
  } else {
    double in = double(scan.last) * step;
    double out = double(scan.last + 1) * step;
    while (out - in > root_tol) {
      const double mid = 0.5 * (in + out);
      (member(mid) ? in : out) = mid;
    }
    inv.upper = in;
  }
  return inv;
}

Inversion invert_region(const std::function<bool(double)>& member,
                        double theta_max, double step, double root_tol) {
  GridScan scan;
  int last_index = 0;
  for (int i = 0;; ++i) {
    const double t = double(i) * step;
    if (t > theta_max) {
      last_index = i - 1;
      break;
    }
    if (member(t)) scan.mark(i);
  }
  return refine_region(member, scan, step, theta_max, last_index, root_tol);
}

}  // namespace

// ---- unified construction -------------------------------------------------

std::vector<int> unified_accept(double b, double theta, double level,
                                const NumericConfig& cfg) {
  validate(ModelParams{b, theta});
  check_level(level);
  const double mu = b + theta;
  const int k_max = tail_cutoff(mu, cfg.k_max_eps);
  const std::vector<double> f = pmf_row(mu, k_max);
  const double log_mu = std::log(mu);
  std::vector<double> lr(size_t(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) {
    // restricted MLE per outcome: theta_hat(k) = 0 v (k-b), so the
    // denominator mean is b v k; the lgamma terms cancel in the ratio
    const double mu_hat = std::max(b, double(k));
    lr[size_t(k)] =
        double(k) * (log_mu - std::log(mu_hat)) - mu + mu_hat;
  }
  return greedy_accept(f, lr, level);
}

namespace {

bool unified_accepts(double b, double theta, int n, double level,
                     const NumericConfig& cfg) {
  const std::vector<int> acc = unified_accept(b, theta, level, cfg);
  return std::binary_search(acc.begin(), acc.end(), n);
}

}  // namespace

ThetaInterval unified_interval_theta(double b, int n, double level,
                                     const NumericConfig& cfg) {
  validate(ModelParams{b, 0.0});
  check_level(level);
  if (n < 0) throw std::domain_error("intervals: n must be non-negative");
  const auto member = [&](double t) {
    return unified_accepts(b, t, n, level, cfg);
  };
  const Inversion inv =
      invert_region(member, cfg.theta_max_for(b, n), cfg.theta_step_for(b),
                    cfg.root_tol);
  return ThetaInterval{inv.lower, inv.upper, inv.contiguous};
}

// ---- conditional construction ---------------------------------------------

namespace {

// Per-(b, n_obs) machinery for the conditional construction. The
// likelihood-ratio denominators sup_theta' q(k) depend on (n_obs, k) only,
// so they are built once and reused across the whole theta sweep.
class ConditionalCtx {
 public:
  ConditionalCtx(double b, int n, double level, const NumericConfig& cfg)
      : b_(b), n_(n), level_(level), cfg_(cfg) {
    theta_max_ = cfg.theta_max_for(b, n);
    k_max_ = std::max(tail_cutoff(b + theta_max_, cfg.k_max_eps), n);
    fb_ = pmf_row(b_, n_);
    fbn_ = std::accumulate(fb_.begin(), fb_.end(), 0.0);
    build_denominators();
  }

  double q_single(double theta, int k) const {
    if (theta == 0.0) {
      return k <= n_ ? fb_[size_t(k)] / fbn_ : 0.0;
    }
    if (k <= n_) return pmf(b_ + theta, k) / fbn_;
    double s = 0.0;
    for (int j = cfg_.strict_paper_qpmf ? 1 : 0; j <= n_; ++j) {
      s += fb_[size_t(j)] * pmf(theta, k - j);
    }
    return s / fbn_;
  }

  std::vector<double> q_row(double theta) const {
    std::vector<double> q(size_t(k_max_) + 1, 0.0);
    if (theta == 0.0) {
      for (int k = 0; k <= n_; ++k) q[size_t(k)] = fb_[size_t(k)] / fbn_;
      return q;
    }
    const std::vector<double> f_sum = pmf_row(b_ + theta, std::min(n_, k_max_));
    for (int k = 0; k <= std::min(n_, k_max_); ++k) {
      q[size_t(k)] = f_sum[size_t(k)] / fbn_;
    }
    if (k_max_ > n_) {
      const std::vector<double> f_sig = pmf_row(theta, k_max_);
      const int j0 = cfg_.strict_paper_qpmf ? 1 : 0;
      for (int k = n_ + 1; k <= k_max_; ++k) {
        double s = 0.0;
        for (int j = j0; j <= n_; ++j) {
          s += fb_[size_t(j)] * f_sig[size_t(k - j)];
        }
        q[size_t(k)] = s / fbn_;
      }
    }
    return q;
  }

  bool accepts(double theta) const {
    const std::vector<double> q = q_row(theta);
    std::vector<double> lr(q.size());
    for (size_t k = 0; k < q.size(); ++k) {
      lr[k] = q[k] > 0.0 ? std::log(q[k]) - std::log(sup_q_[k]) : -kInf;
    }
    const std::vector<int> acc = greedy_accept(q, lr, level_);
    return std::binary_search(acc.begin(), acc.end(), n_);
  }

  double theta_max() const { return theta_max_; }

 private:
  void build_denominators() {
    sup_q_.assign(size_t(k_max_) + 1, 0.0);
    // q can leak mass past theta_max for far-tail k, so the sup domain is
    // widened until it covers every per-k maximizer in the window
    const double hi = std::max(
        theta_max_, double(k_max_) + 10.0 * std::sqrt(double(k_max_)) + 10.0);
    for (int k = 0; k <= k_max_; ++k) {
      const auto f = [&](double t) { return q_single(t, k); };
      sup_q_[size_t(k)] =
          sup_over_theta(f, hi, std::max(0.0, double(k) - b_), cfg_.opt_tol);
    }
  }

  double b_;
  int n_;
  double level_;
  NumericConfig cfg_;
  double theta_max_ = 0.0;
  int k_max_ = 0;
  std::vector<double> fb_;  // f_b(0..n)
  double fbn_ = 0.0;        // F_b(n)
  std::vector<double> sup_q_;
};

}  // namespace

double modified_pmf(double b, double theta, int n_obs, int k,
                    const NumericConfig& cfg) {
  validate(ModelParams{b, theta});
  if (n_obs < 0 || k < 0) {
    throw std::domain_error("modified_pmf: counts must be non-negative");
  }
  const double fbn = cdf(b, n_obs);
  if (theta == 0.0) {
    return k <= n_obs ? pmf(b, k) / fbn : 0.0;
  }
  if (k <= n_obs) return pmf(b + theta, k) / fbn;
  double s = 0.0;
  for (int j = cfg.strict_paper_qpmf ? 1 : 0; j <= n_obs; ++j) {
    s += pmf(b, j) * pmf(theta, k - j);
  }
  return s / fbn;
}

ThetaInterval conditional_interval_theta(double b, int n, double level,
                                         const NumericConfig& cfg) {
  validate(ModelParams{b, 0.0});
  check_level(level);
  if (n < 0) throw std::domain_error("intervals: n must be non-negative");
  const ConditionalCtx ctx(b, n, level, cfg);
  const auto member = [&](double t) { return ctx.accepts(t); };
  const Inversion inv = invert_region(member, ctx.theta_max(),
                                      cfg.theta_step_for(b), cfg.root_tol);
  return ThetaInterval{inv.lower, inv.upper, inv.contiguous};
}

// ---- transformation to the p scale ----------------------------------------

ProbInterval theta_to_p_interval(double b, int n, const ThetaInterval& ti) {
  validate(ModelParams{b, 0.0});
  if (n < 0) throw std::domain_error("intervals: n must be non-negative");
  if (!(ti.lower >= 0.0) || !(ti.upper >= ti.lower)) {
    throw std::domain_error("intervals: malformed theta interval");
  }
  if (n == 0) return ProbInterval{1.0, 1.0};  // p == 1 whatever theta is
  ProbInterval out;
  out.lower =
      std::isinf(ti.upper) ? 0.0 : p_true(ModelParams{b, ti.upper}, n);
  out.upper = p_true(ModelParams{b, ti.lower}, n);
  return out;
}

// ---- Bayesian HPD construction --------------------------------------------

namespace {

void check_posterior_args(double b, int n) {
  validate(ModelParams{b, 0.0});
  if (n < 1) {
    throw std::domain_error(
        "posterior of p is degenerate at n = 0 (p == 1); density undefined");
  }
}

// log g(p|n) as a function of t = ln p. Working on the log scale keeps the
// tiny lower endpoints (down to ~1e-11 in the tables) fully resolved.
class LogPosterior {
 public:
  LogPosterior(double b, int n)
      : b_(b),
        n_(double(n)),
        constant_((n_ + 1.0) * std::log(b) - std::lgamma(n_ + 1.0) -
                  std::log(n_) - std::log(cdf(b, n))) {}

  double operator()(double t) const {
    return constant_ - (2.0 * n_ + 1.0) / n_ * t - b_ * std::exp(-t / n_);
  }

 private:
  double b_;
  double n_;
  double constant_;
};

}  // namespace

double posterior_density_p(double b, int n, double p) {
  check_posterior_args(b, n);
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::domain_error("posterior_density_p: p must be in (0,1]");
  }
  return std::exp(LogPosterior(b, n)(std::log(p)));
}

double posterior_cdf_p(double b, int n, double p) {
  check_posterior_args(b, n);
  if (!std::isfinite(p)) {
    throw std::domain_error("posterior_cdf_p: p must be finite");
  }
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  // gamma-tail identity: G(p|n) = F_{b p^(-1/n)}(n) / F_b(n)
  const double mu = b * std::pow(p, -1.0 / double(n));
  return cdf(mu, n) / cdf(b, n);
}

ProbInterval hpd_credible_interval(double b, int n, double level,
                                   const NumericConfig& cfg) {
  validate(ModelParams{b, 0.0});
  check_level(level);
  if (n < 0) throw std::domain_error("intervals: n must be non-negative");
  if (n == 0) return ProbInterval{1.0, 1.0};

  const double alpha = 1.0 - level;
  const LogPosterior log_g(b, n);
  const double t_mode =
      std::min(0.0, double(n) * (std::log(b) - std::log(2.0 * n + 1.0)));
  const auto G = [&](double t) { return posterior_cdf_p(b, n, std::exp(t)); };

  // (i) z with G(z) = alpha
  double t_lo = std::min(t_mode, 0.0) - 1.0;
  int guard = 0;
  while (G(t_lo) > alpha) {
    t_lo *= 2.0;
    if (++guard > 200) throw numeric_error("hpd: cannot bracket G(z)=alpha");
  }
  double t_hi = 0.0;
  while (t_hi - t_lo > cfg.root_tol) {
    const double mid = 0.5 * (t_lo + t_hi);
    (G(mid) > alpha ? t_hi : t_lo) = mid;
  }
  const double t_z = 0.5 * (t_lo + t_hi);

  // (ii) the enclosing density level never clears g(1): interval [z, 1]
  const double lg_z = log_g(t_z);
  const double lg_one = log_g(0.0);
  if (lg_z <= lg_one) return ProbInterval{std::exp(t_z), 1.0};

  // (iii) bisect the density cutoff between g(z) and g(1); at each trial
  // cutoff solve for the two sides of the mode and compare enclosed mass
  const auto solve_left = [&](double lc) {
    double out = t_mode - 1.0;
    int expand = 0;
    while (log_g(out) > lc) {
      out = t_mode - 2.0 * (t_mode - out);
      if (++expand > 200) throw numeric_error("hpd: left bracket failed");
    }
    double in = t_mode;
    while (in - out > cfg.root_tol) {
      const double mid = 0.5 * (out + in);
      (log_g(mid) > lc ? in : out) = mid;
    }
    return 0.5 * (out + in);
  };
  const auto solve_right = [&](double lc) {
    if (lc <= lg_one) return 0.0;
    double in = t_mode, out = 0.0;
    while (out - in > cfg.root_tol) {
      const double mid = 0.5 * (in + out);
      (log_g(mid) > lc ? in : out) = mid;
    }
    return 0.5 * (in + out);
  };

  double lc_hi = lg_z, lc_lo = lg_one;
  double t_l = t_z, t_u = 0.0;
  for (int iter = 0; iter < 300; ++iter) {
    const double lc = 0.5 * (lc_hi + lc_lo);
    t_l = solve_left(lc);
    t_u = solve_right(lc);
    const double mass = G(t_u) - G(t_l);
    if (std::abs(mass - level) < cfg.bisect_tol) {
      return ProbInterval{std::exp(t_l), std::exp(t_u)};
    }
    (mass > level ? lc_lo : lc_hi) = lc;
  }
  throw numeric_error("hpd: density-cutoff bisection did not converge");
}

// ---- dispatch and coverage ------------------------------------------------

ProbInterval interval_p(IntervalMethod method, double b, int n, double level,
                        const NumericConfig& cfg) {
  if (n == 0) return ProbInterval{1.0, 1.0};
  switch (method) {
    case IntervalMethod::unified:
      return theta_to_p_interval(b, n, unified_interval_theta(b, n, level, cfg));
    case IntervalMethod::conditional:
      return theta_to_p_interval(b, n,
                                 conditional_interval_theta(b, n, level, cfg));
    case IntervalMethod::bayes:
      return hpd_credible_interval(b, n, level, cfg);
  }
  throw std::logic_error("interval_p: bad method");
}

CoverageEvaluator::CoverageEvaluator(IntervalMethod method, double b,
                                     double level, NumericConfig cfg)
    : method_(method), b_(b), level_(level), cfg_(cfg) {
  validate(ModelParams{b, 0.0});
  check_level(level);
}

void CoverageEvaluator::ensure(int n_max) {
  if (int(cache_.size()) > n_max) return;
  if (method_ == IntervalMethod::unified) {
    // rebuild with headroom so repeated theta sweeps amortize
    build_unified_belt(std::max(n_max, int(cache_.size() * 3 / 2)));
    return;
  }
  for (int n = int(cache_.size()); n <= n_max; ++n) {
    cache_.push_back(interval_p(method_, b_, n, level_, cfg_));
  }
}

// One sweep over the theta grid evaluates the acceptance set once per grid
// point and serves every n at the same time; the per-n boundaries are then
// polished exactly as in unified_interval_theta.
void CoverageEvaluator::build_unified_belt(int n_max) {
  const double step = cfg_.theta_step_for(b_);
  const double theta_max = cfg_.theta_max_for(b_, n_max);
  std::vector<GridScan> scans(size_t(n_max) + 1);
  int last_index = 0;
  for (int i = 0;; ++i) {
    const double t = double(i) * step;
    if (t > theta_max) {
      last_index = i - 1;
      break;
    }
    for (int k : unified_accept(b_, t, level_, cfg_)) {
      if (k <= n_max) scans[size_t(k)].mark(i);
    }
  }
  cache_.clear();
  cache_.reserve(size_t(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    const auto member = [&](double t) {
      return unified_accepts(b_, t, n, level_, cfg_);
    };
    const Inversion inv = refine_region(member, scans[size_t(n)], step,
                                        theta_max, last_index, cfg_.root_tol);
    cache_.push_back(theta_to_p_interval(
        b_, n, ThetaInterval{inv.lower, inv.upper, inv.contiguous}));
  }
}

const ProbInterval& CoverageEvaluator::interval_for(int n) {
  if (n < 0) throw std::domain_error("coverage: n must be non-negative");
  ensure(n);
  return cache_[size_t(n)];
}

double CoverageEvaluator::at(double theta) {
  check_theta(theta);
  const double mu = b_ + theta;
  const int n_max = tail_cutoff(mu, cfg_.k_max_eps);
  ensure(n_max);
  const std::vector<double> f = pmf_row(mu, n_max);
  double covered = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const double p = p_true(ModelParams{b_, theta}, n);
    const ProbInterval& pi = cache_[size_t(n)];
    if (pi.lower <= p && p <= pi.upper) covered += f[size_t(n)];
  }
  return covered;
}

double coverage_probability(IntervalMethod method, const ModelParams& params,
                            double level, const NumericConfig& cfg) {
  validate(params);
  CoverageEvaluator eval(method, params.b, level, cfg);
  return eval.at(params.theta);
}

}  // namespace spb
