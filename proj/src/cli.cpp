#include "spb/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spb/errors.hpp"
#include "spb/estimators.hpp"
#include "spb/hypothesis.hpp"
#include "spb/intervals.hpp"
#include "spb/numeric_config.hpp"
#include "spb/risk.hpp"

namespace spb::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

// The 17 (b, n) pairs of the interval table.
const std::vector<std::pair<double, int>>& table1_pairs() {
  static const std::vector<std::pair<double, int>> pairs = {
      {1, 0}, {1, 1}, {1, 2},  {2, 1},   {2, 2},   {2, 3},   {2, 4},
      {5, 4}, {5, 5}, {5, 6},  {5, 7},   {10, 9},  {10, 10}, {10, 11},
      {10, 12}, {10, 13}, {10, 14}};
  return pairs;
}

std::string method_name(IntervalMethod m) {
  switch (m) {
    case IntervalMethod::unified:
      return "unified";
    case IntervalMethod::conditional:
      return "conditional";
    case IntervalMethod::bayes:
      return "bayes";
  }
  return "?";
}

IntervalMethod method_from(const std::string& name) {
  if (name == "unified") return IntervalMethod::unified;
  if (name == "conditional") return IntervalMethod::conditional;
  if (name == "bayes") return IntervalMethod::bayes;
  throw config_error("unknown method '" + name + "'");
}

struct GlobalOpts {
  std::string format = "text";
  std::string out_path;
  std::string config_path;
  bool strict_qpmf = false;
  double theta_step = 0.0;  // 0 means "use default"
  double theta_max = 0.0;
};

NumericConfig make_config(const GlobalOpts& g) {
  NumericConfig cfg;
  if (!g.config_path.empty()) cfg = load_config_file(g.config_path);
  // flags override the file
  if (g.strict_qpmf) cfg.strict_paper_qpmf = true;
  if (g.theta_step > 0.0) cfg.theta_step = g.theta_step;
  if (g.theta_max > 0.0) cfg.theta_max = g.theta_max;
  return cfg;
}

bool csv(const GlobalOpts& g) { return g.format == "csv"; }

}  // namespace

std::string format_sig3(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  if (std::abs(x) < 0.01) {
    std::snprintf(buf, sizeof buf, "%.2e", x);
    std::string s(buf);
    // trim exponent zero padding: 6.78e-03 -> 6.78e-3
    const auto e = s.find('e');
    auto digit = e + 1;
    if (digit < s.size() && (s[digit] == '-' || s[digit] == '+')) ++digit;
    auto nz = digit;
    while (nz + 1 < s.size() && s[nz] == '0') ++nz;
    s.erase(digit, nz - digit);
    return s;
  }
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string format_full(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

// ---- subcommand bodies ----------------------------------------------------

void run_estimate(std::ostream& out, const GlobalOpts& g, double b, int n,
                  std::optional<double> alpha) {
  const ModelParams params{b, 0.0};
  const double ph = p_hat(params, n);
  const double pm = p_mle(params, n);
  const double th = mle_theta(params, n);
  if (csv(g)) {
    out << "quantity,value\n";
    out << "p_hat," << format_full(ph) << "\n";
    out << "p_mle," << format_full(pm) << "\n";
    out << "theta_hat," << format_full(th) << "\n";
    if (alpha) {
      out << "p_hat_alpha,"
          << format_full(p_hat_alpha(params, n, PriorRate{*alpha})) << "\n";
      out << "signal_indicator,"
          << format_full(signal_indicator_estimate(params, n, PriorRate{*alpha}))
          << "\n";
    }
    return;
  }
  out << "p_hat     = " << format_sig3(ph) << "\n";
  out << "p_mle     = " << format_sig3(pm) << "\n";
  out << "theta_hat = " << format_sig3(th) << "\n";
  if (alpha) {
    out << "p_hat_alpha(" << format_sig3(*alpha)
        << ") = " << format_sig3(p_hat_alpha(params, n, PriorRate{*alpha}))
        << "\n";
    out << "signal_indicator = "
        << format_sig3(signal_indicator_estimate(params, n, PriorRate{*alpha}))
        << "\n";
  }
}

void run_interval(std::ostream& out, const GlobalOpts& g,
                  const NumericConfig& cfg, const std::string& method,
                  double b, int n, double level) {
  const IntervalMethod m = method_from(method);
  const ProbInterval pi = interval_p(m, b, n, level, cfg);
  if (csv(g)) {
    out << "b,n,method,level,lower,upper\n";
    out << format_full(b) << "," << n << "," << method << ","
        << format_full(level) << "," << format_full(pi.lower) << ","
        << format_full(pi.upper) << "\n";
    return;
  }
  out << format_sig3(pi.lower) << ", " << format_sig3(pi.upper) << "\n";
}

void run_coverage(std::ostream& out, const GlobalOpts& g,
                  const NumericConfig& cfg, const std::string& method,
                  double b, double theta, double level) {
  const double c =
      coverage_probability(method_from(method), ModelParams{b, theta}, level, cfg);
  if (csv(g)) {
    out << "method,b,theta,level,coverage\n";
    out << method << "," << format_full(b) << "," << format_full(theta) << ","
        << format_full(level) << "," << format_full(c) << "\n";
    return;
  }
  out << "coverage = " << format_full(c) << "\n";
}

Estimator estimator_from(const std::string& name, double alpha) {
  if (name == "p-hat") return Estimator::phat();
  if (name == "p-mle") return Estimator::pmle();
  if (name == "p-hat-alpha") return Estimator::phat_alpha(alpha);
  throw config_error("unknown estimator '" + name + "'");
}

void run_mse(std::ostream& out, const GlobalOpts& g, const NumericConfig& cfg,
             const std::string& estimator, double alpha, double b,
             double theta) {
  const double v = mse(estimator_from(estimator, alpha), ModelParams{b, theta}, cfg);
  if (csv(g)) {
    out << "estimator,b,theta,mse\n";
    out << estimator << "," << format_full(b) << "," << format_full(theta)
        << "," << format_full(v) << "\n";
    return;
  }
  out << "mse = " << format_full(v) << "\n";
}

void run_risk_cond(std::ostream& out, const GlobalOpts& g, double b, int n) {
  const double rp = conditional_risk_phat(b, n);
  const double rm = conditional_risk_mle(b, n);
  if (csv(g)) {
    out << "b,n,series,value\n";
    out << format_full(b) << "," << n << ",cond_p_hat," << format_full(rp)
        << "\n";
    out << format_full(b) << "," << n << ",cond_p_mle," << format_full(rm)
        << "\n";
    return;
  }
  out << "cond_risk(p_hat) = " << format_full(rp) << "\n";
  out << "cond_risk(p_mle) = " << format_full(rm) << "\n";
}

void run_type1(std::ostream& out, const GlobalOpts& g, const NumericConfig& cfg,
               const std::string& kind, double b, int n0, double theta) {
  double rate = 0.0;
  if (kind == "classical") {
    rate = classical_type1(b, n0);
  } else {
    rate = modified_type1_theta(ModelParams{b, theta}, n0, cfg);
  }
  if (csv(g)) {
    out << "kind,b,theta,n0,rate\n";
    out << kind << "," << format_full(b) << "," << format_full(theta) << ","
        << n0 << "," << format_full(rate) << "\n";
    return;
  }
  out << "type1(" << kind << ", n0=" << n0 << ") = " << format_full(rate)
      << "\n";
}

std::vector<std::pair<double, int>> parse_pairs(
    const std::vector<std::string>& specs) {
  if (specs.empty()) return table1_pairs();
  std::vector<std::pair<double, int>> rows;
  for (const std::string& s : specs) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) {
      throw std::domain_error("table1: --pair expects b,n; got '" + s + "'");
    }
    try {
      const double b = std::stod(s.substr(0, comma));
      const int n = std::stoi(s.substr(comma + 1));
      if (!(b > 0.0) || n < 0) throw std::domain_error("");
      rows.emplace_back(b, n);
    } catch (const std::exception&) {
      throw std::domain_error("table1: bad --pair '" + s + "'");
    }
  }
  return rows;
}

void run_table1(std::ostream& out, const GlobalOpts& g,
                const NumericConfig& cfg, double level,
                const std::vector<std::string>& pair_specs) {
  const auto rows = parse_pairs(pair_specs);
  const auto methods = {IntervalMethod::unified, IntervalMethod::conditional,
                        IntervalMethod::bayes};
  if (csv(g)) {
    out << "b,n,method,lower,upper\n";
    for (const auto& [b, n] : rows) {
      for (IntervalMethod m : methods) {
        const ProbInterval pi = interval_p(m, b, n, level, cfg);
        out << format_full(b) << "," << n << "," << method_name(m) << ","
            << format_sig3(pi.lower) << "," << format_sig3(pi.upper) << "\n";
      }
    }
    return;
  }
  out << std::left << std::setw(6) << "b" << std::setw(5) << "n"
      << std::setw(22) << "unified" << std::setw(22) << "conditional"
      << std::setw(22) << "bayes" << "\n";
  for (const auto& [b, n] : rows) {
    out << std::left << std::setw(6) << format_sig3(b) << std::setw(5) << n;
    for (IntervalMethod m : methods) {
      const ProbInterval pi = interval_p(m, b, n, level, cfg);
      out << std::setw(22)
          << ("[" + format_sig3(pi.lower) + ", " + format_sig3(pi.upper) + "]");
    }
    out << "\n";
  }
}

void run_table2(std::ostream& out, const GlobalOpts& g,
                const NumericConfig& cfg, double level, int b_max) {
  if (csv(g)) {
    out << "b,classical_n0,modified_n0\n";
    for (int b = 1; b <= b_max; ++b) {
      out << b << ","
          << least_n0(double(b), level, ErrorRateKind::classical, cfg) << ","
          << least_n0(double(b), level, ErrorRateKind::modified, cfg) << "\n";
    }
    return;
  }
  out << std::left << std::setw(6) << "b" << std::setw(12) << "classical"
      << std::setw(12) << "modified" << "\n";
  for (int b = 1; b <= b_max; ++b) {
    out << std::left << std::setw(6) << b << std::setw(12)
        << least_n0(double(b), level, ErrorRateKind::classical, cfg)
        << std::setw(12)
        << least_n0(double(b), level, ErrorRateKind::modified, cfg) << "\n";
  }
}

// Figure data is always long-format CSV; that is its one output shape.
void run_fig_data(std::ostream& out, const NumericConfig& cfg,
                  const std::string& which, double b, double level,
                  double grid_max, double grid_step,
                  const std::string& only_method) {
  if (grid_max <= 0.0) grid_max = 4.0 * b + 20.0;
  if (grid_step <= 0.0) grid_step = 0.05;
  out << "x,series,value\n";
  if (which == "mse") {
    for (int i = 0;; ++i) {
      const double theta = double(i) * grid_step;
      if (theta > grid_max) break;
      const ModelParams params{b, theta};
      out << format_full(theta) << ",p_hat,"
          << format_full(mse(Estimator::phat(), params, cfg)) << "\n";
      out << format_full(theta) << ",p_mle,"
          << format_full(mse(Estimator::pmle(), params, cfg)) << "\n";
    }
    return;
  }
  if (which == "cond-risk") {
    const int n_max = int(std::ceil(4.0 * b + 20.0));
    for (int n = 0; n <= n_max; ++n) {
      out << n << ",cond_p_hat," << format_full(conditional_risk_phat(b, n))
          << "\n";
      out << n << ",cond_p_mle," << format_full(conditional_risk_mle(b, n))
          << "\n";
    }
    return;
  }
  if (which == "coverage") {
    std::vector<IntervalMethod> methods;
    if (only_method.empty()) {
      methods = {IntervalMethod::unified, IntervalMethod::conditional,
                 IntervalMethod::bayes};
    } else {
      methods = {method_from(only_method)};
    }
    for (IntervalMethod m : methods) {
      CoverageEvaluator eval(m, b, level, cfg);
      for (int i = 0;; ++i) {
        const double theta = double(i) * grid_step;
        if (theta > grid_max) break;
        out << format_full(theta) << "," << method_name(m) << ","
            << format_full(eval.at(theta)) << "\n";
      }
    }
    return;
  }
  throw config_error("unknown fig-data kind '" + which + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out_stream,
        std::ostream& err) {
  CLI::App app{"Poisson signal-plus-background inference toolkit"};
  app.name("spb");
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"text", "csv"}));
  app.add_option("--out", g.out_path, "Write output to a file");
  app.add_option("--config", g.config_path,
                 "key=value file overriding numeric defaults");
  app.add_flag("--strict-paper-qpmf", g.strict_qpmf,
               "Use the printed j=1 variant of the conditional PMF");
  app.add_option("--theta-step", g.theta_step,
                 "Inversion grid step (default 0.005*(1+b))")
      ->check(CLI::PositiveNumber);
  app.add_option("--theta-max", g.theta_max,
                 "Inversion grid cap (default b+n+10*sqrt(b+n)+10)")
      ->check(CLI::PositiveNumber);

  // estimate
  auto* est = app.add_subcommand("estimate", "Point estimates at observed n");
  est->fallthrough();
  double est_b = 0.0;
  int est_n = 0;
  std::optional<double> est_alpha;
  est->add_option("--b", est_b, "Background mean")
      ->required()
      ->check(CLI::PositiveNumber);
  est->add_option("--n", est_n, "Observed count")
      ->required()
      ->check(CLI::NonNegativeNumber);
  est->add_option("--alpha", est_alpha, "Exponential prior rate")
      ->check(CLI::NonNegativeNumber);

  // interval
  auto* itv = app.add_subcommand("interval", "One interval for p");
  itv->fallthrough();
  std::string itv_method = "unified";
  double itv_b = 0.0, itv_level = 0.9;
  int itv_n = 0;
  itv->add_option("--method", itv_method, "unified|conditional|bayes")
      ->required()
      ->check(CLI::IsMember({"unified", "conditional", "bayes"}));
  itv->add_option("--b", itv_b)->required()->check(CLI::PositiveNumber);
  itv->add_option("--n", itv_n)->required()->check(CLI::NonNegativeNumber);
  itv->add_option("--level", itv_level, "Confidence/credible level")
      ->check(CLI::Range(1e-6, 1.0 - 1e-6));

  // coverage
  auto* cov = app.add_subcommand("coverage", "Frequentist coverage at theta");
  cov->fallthrough();
  std::string cov_method = "unified";
  double cov_b = 0.0, cov_theta = 0.0, cov_level = 0.9;
  cov->add_option("--method", cov_method)
      ->required()
      ->check(CLI::IsMember({"unified", "conditional", "bayes"}));
  cov->add_option("--b", cov_b)->required()->check(CLI::PositiveNumber);
  cov->add_option("--theta", cov_theta)->required()->check(CLI::NonNegativeNumber);
  cov->add_option("--level", cov_level)->check(CLI::Range(1e-6, 1.0 - 1e-6));

  // mse
  auto* msec = app.add_subcommand("mse", "Squared-error risk at theta");
  msec->fallthrough();
  std::string mse_est = "p-hat";
  double mse_b = 0.0, mse_theta = 0.0, mse_alpha = 0.0;
  msec->add_option("--estimator", mse_est, "p-hat|p-mle|p-hat-alpha")
      ->check(CLI::IsMember({"p-hat", "p-mle", "p-hat-alpha"}));
  msec->add_option("--b", mse_b)->required()->check(CLI::PositiveNumber);
  msec->add_option("--theta", mse_theta)->required()->check(CLI::NonNegativeNumber);
  msec->add_option("--alpha", mse_alpha)->check(CLI::NonNegativeNumber);

  // risk-cond
  auto* rc = app.add_subcommand("risk-cond", "Conditional risks at n");
  rc->fallthrough();
  double rc_b = 0.0;
  int rc_n = 0;
  rc->add_option("--b", rc_b)->required()->check(CLI::PositiveNumber);
  rc->add_option("--n", rc_n)->required()->check(CLI::NonNegativeNumber);

  // type1
  auto* t1 = app.add_subcommand("type1", "Type I error rate at n0");
  t1->fallthrough();
  std::string t1_kind = "classical";
  double t1_b = 0.0, t1_theta = 0.0;
  int t1_n0 = 1;
  t1->add_option("--kind", t1_kind)
      ->check(CLI::IsMember({"classical", "modified"}));
  t1->add_option("--b", t1_b)->required()->check(CLI::PositiveNumber);
  t1->add_option("--n0", t1_n0)->required()->check(CLI::Range(1, 1 << 20));
  t1->add_option("--theta", t1_theta, "Signal mean (modified kind only)")
      ->check(CLI::NonNegativeNumber);

  // table1
  auto* tb1 = app.add_subcommand("table1", "Interval table for the 17 pairs");
  tb1->fallthrough();
  double tb1_level = 0.9;
  std::vector<std::string> tb1_pairs;
  tb1->add_option("--level", tb1_level)->check(CLI::Range(1e-6, 1.0 - 1e-6));
  tb1->add_option("--pair", tb1_pairs,
                  "Replace the default rows; repeatable, format b,n");

  // table2
  auto* tb2 = app.add_subcommand("table2", "Least n0 table");
  tb2->fallthrough();
  double tb2_level = 0.1;
  int tb2_bmax = 10;
  tb2->add_option("--level", tb2_level)->check(CLI::Range(1e-6, 1.0 - 1e-6));
  tb2->add_option("--b-max", tb2_bmax)->check(CLI::Range(1, 1000));

  // fig-data
  auto* fig = app.add_subcommand("fig-data", "Long-format CSV curve data");
  fig->fallthrough();
  std::string fig_which, fig_method;
  double fig_b = 0.0, fig_level = 0.9, fig_gmax = 0.0, fig_gstep = 0.0;
  fig->add_option("--which", fig_which, "mse|coverage|cond-risk")
      ->required()
      ->check(CLI::IsMember({"mse", "coverage", "cond-risk"}));
  fig->add_option("--b", fig_b)->required()->check(CLI::PositiveNumber);
  fig->add_option("--level", fig_level)->check(CLI::Range(1e-6, 1.0 - 1e-6));
  fig->add_option("--grid-max", fig_gmax, "Curve grid cap (default 4b+20)")
      ->check(CLI::PositiveNumber);
  fig->add_option("--grid-step", fig_gstep, "Curve grid step (default 0.05)")
      ->check(CLI::PositiveNumber);
  fig->add_option("--method", fig_method, "Restrict coverage to one method")
      ->check(CLI::IsMember({"unified", "conditional", "bayes"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    out_stream << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::ofstream file_out;
  std::ostream* out = &out_stream;
  if (!g.out_path.empty()) {
    file_out.open(g.out_path);
    if (!file_out) {
      err << "usage error: cannot open output file '" << g.out_path << "'\n";
      return kExitUsage;
    }
    out = &file_out;
  }

  try {
    const NumericConfig cfg = make_config(g);
    if (est->parsed()) {
      run_estimate(*out, g, est_b, est_n, est_alpha);
    } else if (itv->parsed()) {
      run_interval(*out, g, cfg, itv_method, itv_b, itv_n, itv_level);
    } else if (cov->parsed()) {
      run_coverage(*out, g, cfg, cov_method, cov_b, cov_theta, cov_level);
    } else if (msec->parsed()) {
      run_mse(*out, g, cfg, mse_est, mse_alpha, mse_b, mse_theta);
    } else if (rc->parsed()) {
      run_risk_cond(*out, g, rc_b, rc_n);
    } else if (t1->parsed()) {
      run_type1(*out, g, cfg, t1_kind, t1_b, t1_n0, t1_theta);
    } else if (tb1->parsed()) {
      run_table1(*out, g, cfg, tb1_level, tb1_pairs);
    } else if (tb2->parsed()) {
      run_table2(*out, g, cfg, tb2_level, tb2_bmax);
    } else if (fig->parsed()) {
      run_fig_data(*out, cfg, fig_which, fig_b, fig_level, fig_gmax, fig_gstep,
                   fig_method);
    }
  } catch (const std::domain_error& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

}  // namespace spb::cli
