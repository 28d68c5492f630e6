#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <vector>

namespace flr {

enum class Termination { converged, max_iters };

std::string_view to_string(Termination t);
Termination termination_from_string(std::string_view s);

// One inner PCG solve inside an outer MM iteration.
struct InnerSolve {
  int iterations = 0;
  double relative_residual = 0.0;
};

// Output of every solver. objective_trace[0] is the objective at the starting
// point and objective_trace[r] the objective after r outer iterations, so
// objective_trace.size() == iterations + 1.
struct FitResult {
  Eigen::VectorXd beta;
  std::vector<double> objective_trace;
  int iterations = 0;
  Termination termination = Termination::max_iters;
  long long inner_iteration_total = 0;
  std::vector<InnerSolve> inner_solves;
  double wall_time_seconds = 0.0;

  double final_objective() const { return objective_trace.back(); }
  // Relative change between the last two trace entries; +inf when the trace
  // holds a single value.
  double final_relative_error() const;
};

}  // namespace flr
