#pragma once

#include <string>
#include <vector>

#include "flr/baselines.hpp"
#include "flr/fit_result.hpp"
#include "flr/objective.hpp"

namespace flr {

enum class SolverId { mm_dense, mm_pcg, sb, spg };

std::string to_string(SolverId id);
// "mm-dense", "mm-pcg", "sb", "spg". Throws ValidationError otherwise.
SolverId solver_from_string(const std::string& s);
const std::vector<SolverId>& all_solvers();

struct SolverOptions {
  SolverConfig config;
  SBOptions sb;
  SPGConfig spg;
};

FitResult fit(SolverId solver, const Problem& problem, const SolverOptions& options);

}  // namespace flr
