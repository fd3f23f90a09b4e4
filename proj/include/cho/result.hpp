#pragma once

#include <optional>
#include <string_view>

namespace cho {

enum class Route { closed_form, appendix_a, generating_function, oracle };

inline std::string_view to_string(Route r)
{
  switch (r) {
    case Route::closed_form: return "closed-form";
    case Route::appendix_a: return "appendix-a";
    case Route::generating_function: return "generating-function";
    case Route::oracle: return "oracle";
  }
  return "unknown";
}

inline std::optional<Route> parse_route(std::string_view s)
{
  for (Route r : {Route::closed_form, Route::appendix_a, Route::generating_function, Route::oracle})
    if (s == to_string(r)) return r;
  if (s == "closed") return Route::closed_form;
  if (s == "appendix") return Route::appendix_a;
  if (s == "gf") return Route::generating_function;
  return std::nullopt;
}

/// Purity Tr(rho_1^2) of the reduced single-particle state. error_estimate
/// is zero for the analytic routes.
struct PurityResult
{
  double value = 1.0;
  Route route = Route::closed_form;
  double error_estimate = 0.0;
};

/// L = 1 - P.
inline double linear_entropy(const PurityResult& p) { return 1.0 - p.value; }

}  // namespace cho
