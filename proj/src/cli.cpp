#include "flr/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "flr/datagen.hpp"
#include "flr/denoise.hpp"
#include "flr/error.hpp"
#include "flr/io.hpp"
#include "flr/solvers.hpp"

namespace flr::cli {

namespace fs = std::filesystem;

namespace {

struct SolveFlags {
  double epsilon = 1e-8;
  double delta = 1e-5;
  int max_iters = 10000;
  std::optional<double> mu;
  std::optional<double> spg_accuracy;

  void attach(CLI::App* app) {
    app->add_option("--epsilon", epsilon, "Perturbation constant")->capture_default_str();
    app->add_option("--delta", delta, "Relative objective tolerance")->capture_default_str();
    app->add_option("--max-iters", max_iters, "Outer iteration cap")->capture_default_str();
    app->add_option("--mu", mu, "Split Bregman constant (default ||y||/n)");
    app->add_option("--spg-accuracy", spg_accuracy, "SPG smoothing accuracy");
  }

  SolverOptions options() const {
    SolverOptions o;
    o.config.epsilon = epsilon;
    o.config.delta = delta;
    o.config.max_outer_iters = max_iters;
    o.config.validate();
    o.sb.mu = mu;
    if (spg_accuracy) o.spg.accuracy = *spg_accuracy;
    return o;
  }

  RunConfigEcho echo() const { return {epsilon, delta, max_iters, mu, spg_accuracy}; }
};

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

struct GenFlags {
  std::string scenario;
  int n = 0;
  int p = 0;
  int q = 0;
  std::uint64_t seed = 0;
  double noise_sd = 0.3;
  std::string out;
};

int cmd_gen(const GenFlags& f, std::ostream& out) {
  Scenario s;
  s.kind = scenario_kind_from_string(f.scenario);
  s.n = f.n;
  s.p = f.p;
  s.q = f.q;
  s.seed = f.seed;
  s.noise_sd = f.noise_sd;
  const GeneratedProblem generated = gen_problem(s);
  write_problem(f.out, generated);
  out << "wrote " << f.out << ": scenario " << generated.info.scenario << ", n=" << generated.problem.n()
      << ", p=" << generated.problem.p() << ", seed " << f.seed << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

struct FitFlags {
  std::string in;
  std::string solver = "mm-dense";
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  SolveFlags solve;
  std::string out;
};

int cmd_fit(const FitFlags& f, std::ostream& out) {
  const SolverId solver = solver_from_string(f.solver);
  const SolverOptions options = f.solve.options();
  const Problem problem = read_problem(f.in, f.lambda1, f.lambda2);
  const FitResult result = fit(solver, problem, options);

  const fs::path record_path(f.out);
  const fs::path dir = record_path.parent_path();
  if (!dir.empty()) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  }
  RunRecord record;
  record.solver = to_string(solver);
  record.input = f.in;
  record.lambda1 = f.lambda1;
  record.lambda2 = f.lambda2;
  record.config = f.solve.echo();
  record.iterations = result.iterations;
  record.inner_iterations = result.inner_iteration_total;
  record.wall_time_seconds = result.wall_time_seconds;
  record.final_objective = result.final_objective();
  record.termination = result.termination;
  record.trace_path = (dir / "trace.csv").string();
  record.beta_path = (dir / "beta.csv").string();
  write_vector_csv(record.beta_path, result.beta);
  write_trace_csv(record.trace_path, result.objective_trace);
  write_run_record(record_path, record);

  out << record.solver << ": " << to_string(result.termination) << " after " << result.iterations
      << " iterations, objective " << format_double(record.final_objective) << '\n';
  return result.termination == Termination::converged ? kExitOk : kExitNonConvergence;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchFlags {
  std::string suite;
  std::vector<int> sizes;
  int n = 1000;
  std::vector<std::string> lambdas;
  int reps = 10;
  std::uint64_t seed = 1;
  std::vector<std::string> solvers;
  int jobs = 1;
  SolveFlags solve;
  std::string out;
};

std::vector<std::pair<double, double>> parse_lambdas(const std::vector<std::string>& specs,
                                                     ScenarioKind kind) {
  if (specs.empty()) {
    if (kind == ScenarioKind::c5) return {{0.0, 0.1}, {0.0, 1.0}};
    return {{0.1, 0.1}, {0.1, 1.0}, {1.0, 0.1}, {1.0, 1.0}};
  }
  std::vector<std::pair<double, double>> pairs;
  for (const std::string& s : specs) {
    const auto sep = s.find_first_of(",:");
    try {
      if (sep == std::string::npos) throw std::invalid_argument(s);
      size_t used1 = 0;
      size_t used2 = 0;
      const double l1 = std::stod(s.substr(0, sep), &used1);
      const double l2 = std::stod(s.substr(sep + 1), &used2);
      if (used1 != sep || used2 != s.size() - sep - 1) throw std::invalid_argument(s);
      pairs.emplace_back(l1, l2);
    } catch (const std::logic_error&) {
      throw ValidationError("bad lambda pair '" + s + "' (expected lambda1,lambda2)");
    }
  }
  return pairs;
}

struct BenchRow {
  std::string solver;
  int size = 0;
  int n = 0;
  int p = 0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  int rep = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  int iterations = 0;
  long long inner_iterations = 0;
  double wall_time = 0.0;
  double objective = 0.0;
  Termination termination = Termination::max_iters;
  std::string error;
};

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

int cmd_bench(const BenchFlags& f, std::ostream& out, std::ostream& err) {
  const ScenarioKind kind = scenario_kind_from_string(f.suite);
  const auto pairs = parse_lambdas(f.lambdas, kind);
  std::vector<SolverId> solvers;
  for (const std::string& s : f.solvers) solvers.push_back(solver_from_string(s));
  if (solvers.empty()) solvers = all_solvers();
  if (f.reps < 1) throw ValidationError("--reps must be >= 1");
  if (f.jobs < 1) throw ValidationError("--jobs must be >= 1");
  const SolverOptions options = f.solve.options();

  // Rows indexed by (solver, size, pair, rep) in output order.
  const size_t n_solvers = solvers.size();
  const size_t n_sizes = f.sizes.size();
  const size_t n_pairs = pairs.size();
  const size_t n_reps = static_cast<size_t>(f.reps);
  auto index = [&](size_t s, size_t z, size_t l, size_t r) {
    return ((s * n_sizes + z) * n_pairs + l) * n_reps + r;
  };
  std::vector<BenchRow> rows(n_solvers * n_sizes * n_pairs * n_reps);

  for (size_t z = 0; z < n_sizes; ++z) {
    for (size_t r = 0; r < n_reps; ++r) {
      Scenario scenario;
      scenario.kind = kind;
      scenario.n = f.n;
      scenario.p = f.sizes[z];
      scenario.q = f.sizes[z];
      scenario.seed = f.seed + r;
      const GeneratedProblem data = gen_problem(scenario);

      // Independent cells over (solver, lambda pair), each single-threaded.
      std::atomic<size_t> next{0};
      const size_t cells = n_solvers * n_pairs;
      auto worker = [&] {
        for (size_t c = next++; c < cells; c = next++) {
          const size_t s = c / n_pairs;
          const size_t l = c % n_pairs;
          BenchRow& row = rows[index(s, z, l, r)];
          row.solver = to_string(solvers[s]);
          row.size = f.sizes[z];
          row.n = data.problem.n();
          row.p = data.problem.p();
          row.lambda1 = pairs[l].first;
          row.lambda2 = pairs[l].second;
          row.rep = static_cast<int>(r);
          row.seed = scenario.seed;
          try {
            const FitResult result =
                fit(solvers[s], data.problem.with_lambdas(pairs[l].first, pairs[l].second), options);
            row.ok = true;
            row.iterations = result.iterations;
            row.inner_iterations = result.inner_iteration_total;
            row.wall_time = result.wall_time_seconds;
            row.objective = result.final_objective();
            row.termination = result.termination;
          } catch (const std::exception& e) {
            row.error = e.what();
          }
        }
      };
      const int threads = std::min<int>(f.jobs, static_cast<int>(cells));
      std::vector<std::thread> pool;
      for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
      worker();
      for (auto& t : pool) t.join();
    }
  }

  std::ofstream csv(f.out, std::ios::trunc);
  if (!csv) throw IoError("cannot open " + f.out + " for writing");
  csv << "suite,solver,size,n,p,lambda1,lambda2,rep,seed,iterations,inner_iterations,"
         "wall_time_seconds,objective,termination,error\n";
  const std::string suite = to_string(kind);
  int failures = 0;
  for (size_t s = 0; s < n_solvers; ++s) {
    for (size_t z = 0; z < n_sizes; ++z) {
      for (size_t l = 0; l < n_pairs; ++l) {
        double iters = 0.0, inner = 0.0, time = 0.0, objective = 0.0;
        int ok = 0, converged = 0;
        for (size_t r = 0; r < n_reps; ++r) {
          const BenchRow& row = rows[index(s, z, l, r)];
          csv << suite << ',' << row.solver << ',' << row.size << ',' << row.n << ',' << row.p << ','
              << format_double(row.lambda1) << ',' << format_double(row.lambda2) << ',' << row.rep
              << ',' << row.seed << ',';
          if (row.ok) {
            csv << row.iterations << ',' << row.inner_iterations << ',' << format_double(row.wall_time)
                << ',' << format_double(row.objective) << ',' << to_string(row.termination) << ",\n";
            ++ok;
            converged += row.termination == Termination::converged;
            iters += row.iterations;
            inner += static_cast<double>(row.inner_iterations);
            time += row.wall_time;
            objective += row.objective;
          } else {
            csv << ",,,,error," << csv_safe(row.error) << '\n';
            ++failures;
            err << "bench: " << row.solver << " size " << row.size << " rep " << row.rep
                << " failed: " << row.error << '\n';
          }
        }
        const BenchRow& first = rows[index(s, z, l, 0)];
        csv << suite << ',' << first.solver << ',' << first.size << ',' << first.n << ',' << first.p
            << ',' << format_double(first.lambda1) << ',' << format_double(first.lambda2) << ",mean,,";
        if (ok > 0) {
          csv << format_double(iters / ok) << ',' << format_double(inner / ok) << ','
              << format_double(time / ok) << ',' << format_double(objective / ok) << ",converged "
              << converged << '/' << n_reps << ',';
        } else {
          csv << ",,,,,";
        }
        if (ok < f.reps) csv << (f.reps - ok) << " failed";
        csv << '\n';
      }
    }
  }
  csv.flush();
  if (!csv) throw IoError("failed writing " + f.out);
  out << "wrote " << rows.size() << " runs to " << f.out;
  if (failures > 0) out << " (" << failures << " failed)";
  out << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// denoise
// ---------------------------------------------------------------------------

struct DenoiseFlags {
  std::string in;
  double lambda2 = 0.0;
  std::string solver = "mm-pcg";
  SolveFlags solve;
  std::string out;
};

int cmd_denoise(const DenoiseFlags& f, std::ostream& out) {
  const SolverId solver = solver_from_string(f.solver);
  const SolverOptions options = f.solve.options();
  const GrayImage image = read_pgm(fs::path(f.in));
  const DenoiseResult result = denoise(image, f.lambda2, solver, options);
  write_pgm(fs::path(f.out), result.image);
  out << to_string(solver) << ": " << to_string(result.fit.termination) << " after "
      << result.fit.iterations << " iterations, wrote " << f.out << '\n';
  return result.fit.termination == Termination::converged ? kExitOk : kExitNonConvergence;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fused lasso regression: data generation, solvers and benchmarks", "flr"};
  app.require_subcommand(1);

  GenFlags gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a simulation scenario");
  gen_cmd->add_option("--scenario", gen.scenario, "c1, c2, c3, c4 or c5")->required();
  gen_cmd->add_option("--n", gen.n, "Number of observations (c1-c4)");
  gen_cmd->add_option("--p", gen.p, "Number of coefficients (c1-c3)");
  gen_cmd->add_option("--q", gen.q, "Lattice side (c4, c5)");
  gen_cmd->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  gen_cmd->add_option("--noise-sd", gen.noise_sd, "Image noise (c5)")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  FitFlags fit_flags;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit a problem directory");
  fit_cmd->add_option("--in", fit_flags.in, "Problem directory")->required();
  fit_cmd->add_option("--solver", fit_flags.solver, "mm-dense, mm-pcg, sb or spg")->capture_default_str();
  fit_cmd->add_option("--lambda1", fit_flags.lambda1, "Sparsity penalty")->required();
  fit_cmd->add_option("--lambda2", fit_flags.lambda2, "Fusion penalty")->required();
  fit_flags.solve.attach(fit_cmd);
  fit_cmd->add_option("--out", fit_flags.out, "Run record JSON; beta.csv and trace.csv go next to it")
      ->required();

  BenchFlags bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run a benchmark suite");
  bench_cmd->add_option("--suite", bench.suite, "c1, c2, c3, c4 or c5")->required();
  bench_cmd->add_option("--sizes", bench.sizes, "p for c1-c3, q for c4-c5")->required()->delimiter(',');
  bench_cmd->add_option("--n", bench.n, "Observations (c1-c4)")->capture_default_str();
  bench_cmd->add_option("--lambdas", bench.lambdas, "Pairs lambda1,lambda2 (space separated)");
  bench_cmd->add_option("--reps", bench.reps, "Data sets per size")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Seed of the first data set")->capture_default_str();
  bench_cmd->add_option("--solvers", bench.solvers, "Subset of solvers")->delimiter(',');
  bench_cmd->add_option("--jobs", bench.jobs, "Worker threads")->capture_default_str();
  bench.solve.attach(bench_cmd);
  bench_cmd->add_option("--out", bench.out, "Summary CSV")->required();

  DenoiseFlags den;
  CLI::App* den_cmd = app.add_subcommand("denoise", "Denoise a square P5 greymap");
  den_cmd->add_option("--in", den.in, "Input PGM")->required();
  den_cmd->add_option("--lambda2", den.lambda2, "Fusion penalty")->required();
  den_cmd->add_option("--solver", den.solver, "mm-dense, mm-pcg, sb or spg")->capture_default_str();
  den.solve.attach(den_cmd);
  den_cmd->add_option("--out", den.out, "Output PGM")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*fit_cmd) return cmd_fit(fit_flags, out);
    if (*bench_cmd) return cmd_bench(bench, out, err);
    return cmd_denoise(den, out);
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"flr"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace flr::cli
