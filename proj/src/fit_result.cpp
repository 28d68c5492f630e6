#include "flr/fit_result.hpp"

#include <limits>

#include "flr/error.hpp"
#include "flr/objective.hpp"

namespace flr {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::converged:
      return "converged";
    case Termination::max_iters:
      return "max_iters";
  }
  return "unknown";
}

Termination termination_from_string(std::string_view s) {
  if (s == "converged") return Termination::converged;
  if (s == "max_iters") return Termination::max_iters;
  throw ValidationError("unknown termination \"" + std::string(s) + "\"");
}

double FitResult::final_relative_error() const {
  if (objective_trace.size() < 2) return std::numeric_limits<double>::infinity();
  const size_t n = objective_trace.size();
  return relative_error(objective_trace[n - 1], objective_trace[n - 2]);
}

}  // namespace flr
