#pragma once

// Command-line front end. Everything except argv handling lives here so the
// test suite can drive the commands in-process; tools/cho.cpp is a thin main.
// Needs CLI11.hpp and json.hpp from vendor/ on the include path.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cho/errors.hpp"
#include "cho/model.hpp"
#include "cho/oracle.hpp"
#include "cho/purity.hpp"

namespace cho::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kCsvHeader = "eta,theta,route,n1,n2,purity,linear_entropy,error_estimate";

/// Bad flag combinations that CLI11 cannot see on its own.
class usage_error : public cho::error
{
 public:
  using cho::error::error;
};

/// One closed interval sampled at `steps` evenly spaced points.
struct AxisRange
{
  double min = 0.0;
  double max = 0.0;
  int steps = 0;

  void validate(const char* name) const
  {
    if (steps < 2) throw usage_error(std::string(name) + " range needs steps >= 2");
    if (!(min < max)) throw usage_error(std::string(name) + " range needs min < max");
  }

  std::vector<double> samples() const
  {
    std::vector<double> xs(static_cast<std::size_t>(steps));
    const double h = (max - min) / (steps - 1);
    for (int i = 0; i < steps; ++i) xs[static_cast<std::size_t>(i)] = (i == steps - 1) ? max : min + h * i;
    return xs;
  }
};

/// Everything a command may read. Populated from flags and the config file.
struct Settings
{
  std::string output;
  std::string format;  // empty: command default

  std::optional<double> eta;
  std::optional<double> theta;
  bool degrees = false;

  std::optional<int> n1;
  std::optional<int> n2;
  bool coherent = false;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<std::string> routes;

  // physical system; all five or none
  std::optional<double> m1, m2, C1, C2, C3;

  // run configuration
  double mass = 1.0;
  double stiffness = 1.0;
  double hbar = 1.0;
  int grid_points = 400;
  int cap = 4;
  std::optional<double> tolerance;
  std::optional<double> oracle_tolerance;
  double perturb_u = 0.0;

  // spectrum
  int n_max = 3;

  // sweep
  std::optional<double> eta_min, eta_max, theta_min, theta_max;
  std::optional<int> eta_steps, theta_steps;
};

/// What is being measured: a coherent state or a number state.
struct StateSpec
{
  bool coherent = true;
  QuantumNumbers n{};
  double alpha = 0.0;
  double beta = 0.0;
};

/// One output row. `error` is set when the point failed; the sweep keeps
/// going.
struct Row
{
  double eta = 0.0;
  double theta = 0.0;
  Route route = Route::closed_form;
  int n1 = 0;
  int n2 = 0;
  PurityResult result{};
  std::optional<std::string> error;
};

namespace detail {

inline std::string format_double(double x)
{
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double angle_in(const Settings& s, double value)
{
  return s.degrees ? value * std::numbers::pi / 180.0 : value;
}

inline StateSpec state_of(const Settings& s)
{
  StateSpec st;
  if (s.coherent) {
    if (s.n1 || s.n2) throw usage_error("--coherent cannot be combined with --n1/--n2");
    st.alpha = s.alpha;
    st.beta = s.beta;
    return st;
  }
  if (!s.n1 && !s.n2) {
    st.alpha = s.alpha;
    st.beta = s.beta;
    return st;
  }
  st.coherent = false;
  st.n = {s.n1.value_or(0), s.n2.value_or(0)};
  if (st.n.n1 < 0 || st.n.n2 < 0) throw cho::domain_error("quantum numbers must be non-negative");
  return st;
}

inline bool has_closed_form(const StateSpec& st)
{
  return st.coherent || (st.n.n1 <= 1 && st.n.n2 <= 1);
}

/// Closed form when the state has one, otherwise the coefficient sum.
inline Route default_route(const StateSpec& st)
{
  return has_closed_form(st) ? Route::closed_form : Route::appendix_a;
}

inline std::vector<Route> routes_of(const Settings& s, const StateSpec& st)
{
  if (s.routes.empty()) return {default_route(st)};
  std::vector<Route> out;
  for (const auto& name : s.routes) {
    const auto r = parse_route(name);
    if (!r) throw usage_error("unknown route '" + name + "'");
    if (std::find(out.begin(), out.end(), *r) == out.end()) out.push_back(*r);
  }
  return out;
}

/// Coherent closed form and the oracle are regular at theta = 0 and pi; the
/// number-state formulas divide by sin(theta).
inline bool needs_open_angle(Route r, const StateSpec& st)
{
  if (r == Route::oracle) return false;
  if (r == Route::closed_form) return !(st.coherent || (st.n.n1 == 0 && st.n.n2 == 0));
  return true;
}

inline bool physical_given(const Settings& s) { return s.m1 || s.m2 || s.C1 || s.C2 || s.C3; }

inline std::optional<CanonicalParams> physical_params(const Settings& s)
{
  if (!physical_given(s)) return std::nullopt;
  if (!(s.m1 && s.m2 && s.C1 && s.C2 && s.C3))
    throw usage_error("a physical system needs all of --m1 --m2 --C1 --C2 --C3");
  if (s.eta || s.theta) throw usage_error("--eta/--theta cannot be combined with a physical system");
  return rescale({*s.m1, *s.m2, *s.C1, *s.C2, *s.C3});
}

inline void check_run_config(const Settings& s)
{
  if (!(s.mass > 0.0)) throw usage_error("--mass must be positive");
  if (!(s.stiffness > 0.0)) throw usage_error("--stiffness must be positive");
  if (!(s.hbar > 0.0)) throw usage_error("--hbar must be positive");
  if (s.grid_points < kMinGridPoints)
    throw usage_error("--grid-points must be at least " + std::to_string(kMinGridPoints));
  if (s.tolerance && !(*s.tolerance > 0.0)) throw usage_error("--tolerance must be positive");
  if (s.oracle_tolerance && !(*s.oracle_tolerance > 0.0))
    throw usage_error("--oracle-tolerance must be positive");
}

inline RouteOptions route_options(const Settings& s, double mk_over_hbar2)
{
  RouteOptions o;
  o.cap = s.cap;
  o.mk_over_hbar2 = mk_over_hbar2;
  o.u_scale = 1.0 + s.perturb_u;
  return o;
}

/// Purity of `st` at canonical parameters `p` by one route.
inline PurityResult evaluate(Route route, const StateSpec& st, const CanonicalParams& p,
                             const Settings& s)
{
  const auto opts = route_options(s, p.mk_over_hbar2(s.hbar));
  const QuantumNumbers n = st.coherent ? QuantumNumbers{0, 0} : st.n;
  switch (route) {
    case Route::closed_form:
      return st.coherent ? purity_coherent(p.eta, p.theta) : purity_closed_form(n, p.eta, p.theta);
    case Route::appendix_a: return purity_number_appendix(n.n1, n.n2, p.eta, p.theta, opts);
    case Route::generating_function: return purity_number_gf(n.n1, n.n2, p.eta, p.theta, opts);
    case Route::oracle: {
      const auto os = st.coherent ? OracleState::coherent(st.alpha, st.beta)
                                  : OracleState::number(n.n1, n.n2);
      return oracle_purity(p, s.hbar, os, s.grid_points);
    }
  }
  throw usage_error("unknown route");
}

inline CanonicalParams synthetic(const Settings& s, double eta, double theta)
{
  return from_synthetic(eta, theta, s.mass, s.stiffness, false);
}

inline void write_rows_csv(std::ostream& os, const std::vector<Row>& rows)
{
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << format_double(r.eta) << ',' << format_double(r.theta) << ',' << to_string(r.route) << ','
       << r.n1 << ',' << r.n2 << ',';
    if (r.error) {
      os << "nan,nan,error:" << *r.error << '\n';
    } else {
      os << format_double(r.result.value) << ',' << format_double(linear_entropy(r.result)) << ','
         << format_double(r.result.error_estimate) << '\n';
    }
  }
}

inline nlohmann::ordered_json row_json(const Row& r)
{
  nlohmann::ordered_json j;
  j["eta"] = r.eta;
  j["theta"] = r.theta;
  j["route"] = std::string(to_string(r.route));
  j["n1"] = r.n1;
  j["n2"] = r.n2;
  if (r.error) {
    j["purity"] = nullptr;
    j["linear_entropy"] = nullptr;
    j["error_estimate"] = nullptr;
    j["error"] = *r.error;
  } else {
    j["purity"] = r.result.value;
    j["linear_entropy"] = linear_entropy(r.result);
    j["error_estimate"] = r.result.error_estimate;
  }
  return j;
}

inline void write_rows_json(std::ostream& os, const std::vector<Row>& rows)
{
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) arr.push_back(row_json(r));
  os << arr.dump(2) << '\n';
}

/// Short machine tag for an exception, used in failed sweep rows.
inline std::string error_kind(const std::exception& e)
{
  if (dynamic_cast<const cho::domain_error*>(&e)) return "domain";
  if (dynamic_cast<const cho::cap_exceeded*>(&e)) return "cap-exceeded";
  if (dynamic_cast<const cho::grid_too_narrow*>(&e)) return "grid-too-narrow";
  if (dynamic_cast<const cho::not_converged*>(&e)) return "not-converged";
  if (dynamic_cast<const cho::constraint_violation*>(&e)) return "constraint";
  return "failed";
}

/// Writes to --output when given, else to `out`. Files are opened in binary
/// mode so line endings stay LF everywhere.
template <class Writer>
void emit(const Settings& s, std::ostream& out, Writer&& write)
{
  if (s.output.empty()) {
    write(out);
    return;
  }
  std::ofstream file(s.output, std::ios::binary | std::ios::trunc);
  if (!file) throw usage_error("cannot open output file '" + s.output + "'");
  write(file);
}

inline void check_format(const std::string& f, std::initializer_list<const char*> allowed)
{
  for (const char* a : allowed)
    if (f == a) return;
  throw usage_error("unsupported --format '" + f + "'");
}

}  // namespace detail

/// E(n1, n2) / (hbar omega) for n1, n2 <= n_max.
inline int cmd_spectrum(const Settings& s, std::ostream& out)
{
  const std::string format = s.format.empty() ? "csv" : s.format;
  detail::check_format(format, {"csv", "json"});
  if (s.n_max < 0) throw usage_error("--n-max must be non-negative");
  CanonicalParams p;
  if (auto phys = detail::physical_params(s)) {
    p = *phys;
  } else {
    if (!s.eta) throw usage_error("spectrum needs --eta or a physical system");
    const double theta = s.theta ? detail::angle_in(s, *s.theta) : std::numbers::pi / 2;
    p = from_synthetic(*s.eta, theta, s.mass, s.stiffness, false);
  }
  const double unit = s.hbar * p.omega;

  detail::emit(s, out, [&](std::ostream& os) {
    if (format == "csv") {
      os << "n1,n2,energy_over_hbar_omega\n";
      for (int a = 0; a <= s.n_max; ++a)
        for (int b = 0; b <= s.n_max; ++b)
          os << a << ',' << b << ',' << detail::format_double(energy(p, {a, b}, s.hbar) / unit) << '\n';
    } else {
      auto arr = nlohmann::ordered_json::array();
      for (int a = 0; a <= s.n_max; ++a)
        for (int b = 0; b <= s.n_max; ++b)
          arr.push_back({{"n1", a}, {"n2", b}, {"energy_over_hbar_omega", energy(p, {a, b}, s.hbar) / unit}});
      os << arr.dump(2) << '\n';
    }
  });
  return kExitOk;
}

inline int cmd_purity(const Settings& s, std::ostream& out)
{
  const std::string format = s.format.empty() ? "text" : s.format;
  detail::check_format(format, {"text", "csv", "json"});
  detail::check_run_config(s);
  const auto st = detail::state_of(s);
  const auto routes = detail::routes_of(s, st);
  if (routes.size() != 1) throw usage_error("purity takes exactly one --route");
  const Route route = routes.front();

  CanonicalParams p;
  if (auto phys = detail::physical_params(s)) {
    p = *phys;
  } else {
    if (!s.eta || !s.theta) throw usage_error("purity needs --eta and --theta or a physical system");
    p = detail::synthetic(s, *s.eta, detail::angle_in(s, *s.theta));
  }

  Row row;
  row.eta = p.eta;
  row.theta = p.theta;
  row.route = route;
  row.n1 = st.coherent ? 0 : st.n.n1;
  row.n2 = st.coherent ? 0 : st.n.n2;
  row.result = detail::evaluate(route, st, p, s);

  detail::emit(s, out, [&](std::ostream& os) {
    if (format == "csv") {
      detail::write_rows_csv(os, {row});
    } else if (format == "json") {
      os << detail::row_json(row).dump(2) << '\n';
    } else {
      os << "route: " << to_string(route) << '\n'
         << "purity: " << detail::format_double(row.result.value) << '\n'
         << "linear_entropy: " << detail::format_double(linear_entropy(row.result)) << '\n';
      if (route == Route::oracle)
        os << "error_estimate: " << detail::format_double(row.result.error_estimate) << '\n';
    }
  });
  return kExitOk;
}

/// Sample grid for a sweep. An axis is either a range or a single fixed value.
struct SweepPlan
{
  std::vector<double> etas;
  std::optional<AxisRange> theta_range;
  std::optional<double> theta_fixed;

  /// Theta samples for a route. When the route cannot touch 0 or pi, an
  /// endpoint on the boundary moves inward by one step and the range is
  /// resampled with the same count.
  std::vector<double> thetas(bool open) const
  {
    if (theta_fixed) return {*theta_fixed};
    AxisRange r = *theta_range;
    if (open) {
      const double h = (r.max - r.min) / (r.steps - 1);
      if (r.min <= 0.0) r.min = h;
      if (r.max >= std::numbers::pi) r.max = std::numbers::pi - h;
      if (!(r.min < r.max)) throw usage_error("theta range collapses after clipping into (0, pi)");
    }
    return r.samples();
  }
};

inline SweepPlan sweep_plan(const Settings& s)
{
  SweepPlan plan;
  const bool eta_range = s.eta_min || s.eta_max || s.eta_steps;
  if (eta_range) {
    if (!(s.eta_min && s.eta_max && s.eta_steps))
      throw usage_error("an eta range needs --eta-min, --eta-max and --eta-steps");
    if (s.eta) throw usage_error("--eta conflicts with an eta range");
    AxisRange r{*s.eta_min, *s.eta_max, *s.eta_steps};
    r.validate("eta");
    plan.etas = r.samples();
  } else if (s.eta) {
    plan.etas = {*s.eta};
  } else {
    throw usage_error("sweep needs --eta or an eta range");
  }

  const bool theta_range = s.theta_min || s.theta_max || s.theta_steps;
  if (theta_range) {
    if (!(s.theta_min && s.theta_max && s.theta_steps))
      throw usage_error("a theta range needs --theta-min, --theta-max and --theta-steps");
    if (s.theta) throw usage_error("--theta conflicts with a theta range");
    AxisRange r{detail::angle_in(s, *s.theta_min), detail::angle_in(s, *s.theta_max), *s.theta_steps};
    r.validate("theta");
    if (r.min < 0.0 || r.max > std::numbers::pi) throw usage_error("theta range must lie in [0, pi]");
    plan.theta_range = r;
  } else if (s.theta) {
    plan.theta_fixed = detail::angle_in(s, *s.theta);
  } else {
    throw usage_error("sweep needs --theta or a theta range");
  }
  if (!eta_range && !theta_range) throw usage_error("sweep needs at least one range");
  return plan;
}

/// Rows are computed in parallel and written in request order: route, then
/// eta, then theta.
inline std::vector<Row> sweep_rows(const Settings& s)
{
  detail::check_run_config(s);
  if (detail::physical_given(s)) throw usage_error("sweep works on (eta, theta); drop the physical system");
  const auto st = detail::state_of(s);
  const auto routes = detail::routes_of(s, st);
  const auto plan = sweep_plan(s);

  std::vector<Row> rows;
  for (Route route : routes) {
    const auto thetas = plan.thetas(detail::needs_open_angle(route, st));
    for (double eta : plan.etas) {
      for (double theta : thetas) {
        Row r;
        r.eta = eta;
        r.theta = theta;
        r.route = route;
        r.n1 = st.coherent ? 0 : st.n.n1;
        r.n2 = st.coherent ? 0 : st.n.n2;
        rows.push_back(r);
      }
    }
  }

  cho::detail::parallel_rows(static_cast<int>(rows.size()), [&](int i) {
    Row& r = rows[static_cast<std::size_t>(i)];
    try {
      r.result = detail::evaluate(r.route, st, detail::synthetic(s, r.eta, r.theta), s);
    } catch (const std::exception& e) {
      r.error = detail::error_kind(e);
    }
  });
  return rows;
}

inline int cmd_sweep(const Settings& s, std::ostream& out)
{
  const std::string format = s.format.empty() ? "csv" : s.format;
  detail::check_format(format, {"csv", "json"});
  // Fail fast on states no route can handle at all.
  const auto st = detail::state_of(s);
  if (!st.coherent) cho::detail::check_quantum_numbers(st.n.n1, st.n.n2, s.cap);
  const auto rows = sweep_rows(s);
  detail::emit(s, out, [&](std::ostream& os) {
    if (format == "csv")
      detail::write_rows_csv(os, rows);
    else
      detail::write_rows_json(os, rows);
  });
  return kExitOk;
}

/// Result of one identity in the validation matrix.
struct CheckReport
{
  std::string name;
  double tolerance = 0.0;
  double max_error = 0.0;
  std::string worst_point;
  bool pass = true;

  CheckReport(std::string n, double tol) : name(std::move(n)), tolerance(tol) {}

  /// Keeps the largest error seen; a NaN counts as worst and sticks.
  void record(double err, const std::string& where)
  {
    if (std::isnan(max_error)) return;
    if (std::isnan(err) || err > max_error) {
      max_error = err;
      worst_point = where;
    }
  }

  void finish() { pass = !std::isnan(max_error) && max_error <= tolerance; }
};

namespace detail {

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline std::string point(const char* what, double eta, double theta, QuantumNumbers n)
{
  std::ostringstream os;
  os.precision(17);
  os << what << " eta=" << eta << " theta=" << theta << " n=(" << n.n1 << "," << n.n2 << ")";
  return os.str();
}

inline std::vector<double> linspace(double a, double b, int n)
{
  return AxisRange{a, b, n}.samples();
}

}  // namespace detail

/// Runs the cross-route matrix. Grids follow the acceptance criteria.
inline std::vector<CheckReport> validation_matrix(const Settings& s)
{
  const double analytic_tol = s.tolerance.value_or(1e-10);
  const double gf_tol = s.tolerance.value_or(1e-9);
  const double oracle_tol = s.oracle_tolerance.value_or(1e-5);
  const auto opts = detail::route_options(s, 1.0);
  std::vector<CheckReport> checks;

  {
    CheckReport c{"closed_vs_appendix", analytic_tol};
    for (double eta : detail::linspace(-2.0, 2.0, 21))
      for (double theta : detail::linspace(0.1, std::numbers::pi - 0.1, 19))
        for (QuantumNumbers n : {QuantumNumbers{0, 1}, QuantumNumbers{1, 0}, QuantumNumbers{1, 1}}) {
          const double a = purity_number_appendix(n.n1, n.n2, eta, theta, opts).value;
          c.record(detail::rel_err(a, purity_closed_form(n, eta, theta).value),
                   detail::point("closed-form vs appendix-a", eta, theta, n));
        }
    c.finish();
    checks.push_back(c);
  }

  {
    std::vector<QuantumNumbers> states;
    for (int total = 0; total <= 3; ++total)
      for (int a = 0; a <= total; ++a) states.push_back({a, total - a});
    if (s.n1 || s.n2) {
      const QuantumNumbers extra{s.n1.value_or(0), s.n2.value_or(0)};
      if (std::find(states.begin(), states.end(), extra) == states.end()) states.push_back(extra);
    }
    CheckReport c{"appendix_vs_gf", gf_tol};
    for (double eta : detail::linspace(-1.5, 1.5, 5))
      for (double theta : detail::linspace(0.3, std::numbers::pi - 0.3, 5))
        for (QuantumNumbers n : states) {
          const double a = purity_number_appendix(n.n1, n.n2, eta, theta, opts).value;
          const double g = purity_number_gf(n.n1, n.n2, eta, theta, opts).value;
          c.record(detail::rel_err(g, a), detail::point("appendix-a vs generating-function", eta, theta, n));
        }
    c.finish();
    checks.push_back(c);
  }

  const std::vector<std::pair<double, double>> oracle_points = {
      {0.5, std::numbers::pi / 3}, {1.0, std::numbers::pi / 2}, {2.0, 2.0 * std::numbers::pi / 5}};
  {
    CheckReport c{"analytic_vs_oracle", oracle_tol};
    for (auto [eta, theta] : oracle_points) {
      const auto p = detail::synthetic(s, eta, theta);
      const double mk = p.mk_over_hbar2(s.hbar);
      {
        const double o = oracle_purity(p, s.hbar, OracleState::coherent(0.0, 0.0), s.grid_points).value;
        c.record(std::abs(o - purity_coherent(eta, theta).value),
                 detail::point("coherent oracle", eta, theta, {0, 0}));
      }
      for (QuantumNumbers n : {QuantumNumbers{0, 1}, QuantumNumbers{1, 1}}) {
        const double o = oracle_purity(p, s.hbar, OracleState::number(n.n1, n.n2), s.grid_points).value;
        auto ro = detail::route_options(s, mk);
        c.record(std::abs(o - purity_number_appendix(n.n1, n.n2, eta, theta, ro).value),
                 detail::point("number oracle", eta, theta, n));
      }
    }
    c.finish();
    checks.push_back(c);
  }

  {
    CheckReport c{"symmetry_suite", analytic_tol};
    for (double eta : detail::linspace(0.2, 1.8, 5))
      for (double theta : detail::linspace(0.3, std::numbers::pi / 2, 4))
        for (QuantumNumbers n : {QuantumNumbers{0, 1}, QuantumNumbers{1, 1}, QuantumNumbers{2, 1}}) {
          const QuantumNumbers swapped{n.n2, n.n1};
          for (Route r : {Route::closed_form, Route::appendix_a, Route::generating_function}) {
            if (r == Route::closed_form && n.n1 > 1) continue;
            const auto f = [&](QuantumNumbers q, double e, double t) {
              return detail::evaluate(r, StateSpec{false, q, 0.0, 0.0}, from_synthetic(e, t), s).value;
            };
            const double base = f(n, eta, theta);
            c.record(detail::rel_err(f(n, -eta, theta), base),
                     detail::point("eta parity", eta, theta, n));
            c.record(detail::rel_err(f(n, eta, std::numbers::pi - theta), base),
                     detail::point("theta reflection", eta, theta, n));
            c.record(detail::rel_err(f(swapped, eta, theta), base),
                     detail::point("quantum-number swap", eta, theta, n));
          }
        }
    c.finish();
    checks.push_back(c);
  }
  return checks;
}

inline int cmd_validate(const Settings& s, std::ostream& out, std::ostream& err)
{
  const std::string format = s.format.empty() ? "json" : s.format;
  detail::check_format(format, {"json"});
  detail::check_run_config(s);
  if (s.n1 || s.n2) cho::detail::check_quantum_numbers(s.n1.value_or(0), s.n2.value_or(0), s.cap);

  const auto checks = validation_matrix(s);
  bool all = true;
  nlohmann::ordered_json report;
  report["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    all = all && c.pass;
    report["checks"].push_back({{"name", c.name},
                                {"tolerance", c.tolerance},
                                {"max_error", c.max_error},
                                {"worst_point", c.worst_point},
                                {"pass", c.pass}});
    if (!c.pass)
      err << "validate: " << c.name << " failed, max error " << detail::format_double(c.max_error)
          << " > " << detail::format_double(c.tolerance) << " at " << c.worst_point << '\n';
  }
  report["pass"] = all;
  detail::emit(s, out, [&](std::ostream& os) { os << report.dump(2) << '\n'; });
  return all ? kExitOk : kExitValidationFailed;
}

/// Parses `args` (without the program name) and runs the chosen command.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  Settings s;
  CLI::App app{"Purity of two coupled harmonic oscillators", "cho"};
  app.set_config("--config", "", "Flat key=value file; command-line flags win");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  app.add_option("--output", s.output, "Write results to this file instead of stdout");
  app.add_option("--format", s.format, "csv | json (purity also takes text)");
  app.add_option("--eta", s.eta, "Coupling parameter");
  app.add_option("--theta", s.theta, "Mixing angle (radians unless --degrees)");
  app.add_flag("--degrees", s.degrees, "Read angles in degrees");
  app.add_option("--n1", s.n1, "First quantum number");
  app.add_option("--n2", s.n2, "Second quantum number");
  app.add_flag("--coherent", s.coherent, "Coherent state instead of a number state");
  app.add_option("--alpha", s.alpha, "Real displacement of the first normal mode (oracle)");
  app.add_option("--beta", s.beta, "Real displacement of the second normal mode (oracle)");
  app.add_option("--route", s.routes, "closed-form | appendix-a | generating-function | oracle")
      ->delimiter(',');
  app.add_option("--grid-points", s.grid_points, "Oracle base grid points per axis");
  app.add_option("--cap", s.cap, "Largest n1 + n2 the analytic routes accept");
  app.add_option("--m1", s.m1, "Mass of particle 1");
  app.add_option("--m2", s.m2, "Mass of particle 2");
  app.add_option("--C1", s.C1, "Spring constant C1");
  app.add_option("--C2", s.C2, "Spring constant C2");
  app.add_option("--C3", s.C3, "Coupling constant C3");
  app.add_option("--mass", s.mass, "Reduced mass m for synthetic parameters");
  app.add_option("--stiffness", s.stiffness, "Effective stiffness k for synthetic parameters");
  app.add_option("--hbar", s.hbar, "Value of hbar");
  app.add_option("--tolerance", s.tolerance, "Relative tolerance of the analytic identities");
  app.add_option("--oracle-tolerance", s.oracle_tolerance, "Absolute tolerance against the oracle");
  // Negative control for validate: multiplies u by 1 + value.
  app.add_option("--perturb-u", s.perturb_u)->group("");

  // Command-specific settings stay on the top-level app so a flat config
  // file can carry them.
  app.add_option("--n-max", s.n_max, "spectrum: largest quantum number listed");
  app.add_option("--eta-min", s.eta_min, "sweep: eta range start");
  app.add_option("--eta-max", s.eta_max, "sweep: eta range end");
  app.add_option("--eta-steps", s.eta_steps, "sweep: eta samples (>= 2)");
  app.add_option("--theta-min", s.theta_min, "sweep: theta range start");
  app.add_option("--theta-max", s.theta_max, "sweep: theta range end");
  app.add_option("--theta-steps", s.theta_steps, "sweep: theta samples (>= 2)");

  auto* spectrum = app.add_subcommand("spectrum", "Energy levels E / (hbar omega)");
  auto* purity = app.add_subcommand("purity", "Purity of one state by one route");
  auto* sweep = app.add_subcommand("sweep", "Purity over an (eta, theta) grid");
  auto* validate = app.add_subcommand("validate", "Cross-check every route; JSON report");
  for (auto* sub : {spectrum, purity, sweep, validate}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (spectrum->parsed()) return cmd_spectrum(s, out);
    if (purity->parsed()) return cmd_purity(s, out);
    if (sweep->parsed()) return cmd_sweep(s, out);
    return cmd_validate(s, out, err);
  } catch (const cho::error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace cho::cli
