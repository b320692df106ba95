#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace spb {

// Truncation, grid and convergence controls. The defaults reproduce every
// table in this library at three significant figures; tighten them only if
// you need more.
struct NumericConfig {
  double series_eps = 1e-12;  // tail mass cut for type-I-error series
  double mse_eps = 1e-10;     // tail mass cut for squared-error risk sums
  double k_max_eps = 1e-12;   // tail mass cut for acceptance-set windows
  double bisect_tol = 1e-9;   // HPD mass convergence
  double opt_tol = 1e-8;      // golden-section tolerance (modified-likelihood sup)
  double root_tol = 1e-10;    // 1-D root/boundary bisection tolerance

  // Reproduce the misprinted j=1 lower limit in the k>n branch of the
  // conditional PMF. The resulting "PMF" loses the B=0 path and sums to
  // less than one; kept only for comparison against the printed formula.
  bool strict_paper_qpmf = false;

  // Grid controls for acceptance-region inversion. Unset means the b- and
  // n-dependent defaults below.
  std::optional<double> theta_step;
  std::optional<double> theta_max;

  double theta_step_for(double b) const;
  double theta_max_for(double b, int n) const;
};

// Parses "key = value" lines; '#' comments and blank lines are skipped.
// Unknown keys or unparsable values raise config_error.
NumericConfig parse_config(std::istream& in);
NumericConfig load_config_file(const std::string& path);

}  // namespace spb
