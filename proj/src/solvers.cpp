#include "flr/solvers.hpp"

#include "flr/error.hpp"
#include "flr/mm.hpp"
#include "flr/pcg.hpp"

namespace flr {

std::string to_string(SolverId id) {
  switch (id) {
    case SolverId::mm_dense:
      return "mm-dense";
    case SolverId::mm_pcg:
      return "mm-pcg";
    case SolverId::sb:
      return "sb";
    case SolverId::spg:
      return "spg";
  }
  return "unknown";
}

const std::vector<SolverId>& all_solvers() {
  static const std::vector<SolverId> ids{SolverId::mm_dense, SolverId::mm_pcg, SolverId::sb,
                                         SolverId::spg};
  return ids;
}

SolverId solver_from_string(const std::string& s) {
  for (SolverId id : all_solvers()) {
    if (to_string(id) == s) return id;
  }
  throw ValidationError("unknown solver '" + s + "' (expected mm-dense, mm-pcg, sb or spg)");
}

FitResult fit(SolverId solver, const Problem& problem, const SolverOptions& options) {
  switch (solver) {
    case SolverId::mm_dense:
      return mm_fit_dense(problem, options.config);
    case SolverId::mm_pcg:
      return mm_fit_pcg(problem, options.config);
    case SolverId::sb:
      return sb_fit(problem, options.config, options.sb);
    case SolverId::spg:
      return spg_fit(problem, options.config, options.spg);
  }
  throw ValidationError("unknown solver");
}

}  // namespace flr
