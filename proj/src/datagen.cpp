#include "flr/datagen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "flr/error.hpp"
#include "flr/random.hpp"

namespace flr {

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::c1:
      return "c1";
    case ScenarioKind::c2:
      return "c2";
    case ScenarioKind::c3:
      return "c3";
    case ScenarioKind::c4:
      return "c4";
    case ScenarioKind::c5:
      return "c5";
  }
  return "unknown";
}

ScenarioKind scenario_kind_from_string(const std::string& s) {
  std::string lower = s;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (ScenarioKind k : {ScenarioKind::c1, ScenarioKind::c2, ScenarioKind::c3, ScenarioKind::c4,
                         ScenarioKind::c5}) {
    if (to_string(k) == lower) return k;
  }
  throw ScenarioError("unknown scenario '" + s + "' (expected c1..c5)");
}

int Scenario::num_coefficients() const {
  return (kind == ScenarioKind::c4 || kind == ScenarioKind::c5) ? q * q : p;
}

void Scenario::validate() const {
  const std::string name = to_string(kind);
  switch (kind) {
    case ScenarioKind::c1:
      if (p < 126) throw ScenarioError("c1 needs p >= 126, got " + std::to_string(p));
      break;
    case ScenarioKind::c2:
    case ScenarioKind::c3:
      if (p <= 0 || p % 10 != 0) {
        throw ScenarioError(name + " needs p > 0 divisible by 10, got " + std::to_string(p));
      }
      break;
    case ScenarioKind::c4:
      if (q <= 0 || q % 4 != 0) {
        throw ScenarioError("c4 needs q > 0 divisible by 4, got " + std::to_string(q));
      }
      break;
    case ScenarioKind::c5:
      if (q < 8) throw ScenarioError("c5 needs q >= 8, got " + std::to_string(q));
      if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
        throw ScenarioError("c5 noise sd must be finite and >= 0");
      }
      return;
  }
  if (n <= 0) throw ScenarioError(name + " needs n > 0, got " + std::to_string(n));
}

Eigen::VectorXd synthetic_image(int q) {
  if (q < 8) throw ScenarioError("synthetic image needs q >= 8, got " + std::to_string(q));
  Eigen::VectorXd image(q * q);
  const int outer = q / 8;
  const int inner = 3 * q / 8;
  for (int r = 0; r < q; ++r) {
    for (int c = 0; c < q; ++c) {
      // Distance to the border, with rows weighted more than columns so the
      // rings are rectangles rather than squares.
      const int depth = std::min({r, q - 1 - r, (3 * std::min(c, q - 1 - c)) / 2});
      image[r * q + c] = depth < outer ? 0.0 : depth < inner ? 0.5 : 1.0;
    }
  }
  return image;
}

namespace {

Eigen::VectorXd standardized(const Eigen::VectorXd& v) {
  const double mean = v.mean();
  const Eigen::VectorXd centered = v.array() - mean;
  const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(v.size()));
  return sd > 0.0 ? Eigen::VectorXd(centered / sd) : centered;
}

}  // namespace

Eigen::VectorXd true_beta(const Scenario& scenario) {
  scenario.validate();
  const int p = scenario.num_coefficients();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  switch (scenario.kind) {
    case ScenarioKind::c1:
      beta.segment(0, 20).setConstant(2.0);
      beta[40] = 3.0;
      beta.segment(70, 15).setConstant(1.0);
      beta.segment(120, 5).setConstant(2.0);
      break;
    case ScenarioKind::c2:
      beta.segment(p / 10, p / 10).setConstant(1.0);
      beta.segment(2 * p / 10, 2 * p / 10).setConstant(2.0);
      break;
    case ScenarioKind::c3:
      beta.head(p / 2).setConstant(1.0);
      beta.tail(p - p / 2).setConstant(-1.0);
      break;
    case ScenarioKind::c4: {
      const int q = scenario.q;
      const int block = q / 4;
      for (int r = 0; r < q; ++r) {
        for (int c = 0; c < q; ++c) {
          const int br = r / block;
          const int bc = c / block;
          // The two cases are exclusive: br == bc and br + bc == 3 cannot
          // both hold for integers.
          if (br == bc) {
            beta[r * q + c] = 2.0;
          } else if (br + bc == 3) {
            beta[r * q + c] = -2.0;
          }
        }
      }
      break;
    }
    case ScenarioKind::c5:
      beta = standardized(synthetic_image(scenario.q));
      break;
  }
  return beta;
}

GeneratedProblem gen_image_problem(int q, double noise_sd, std::uint64_t seed) {
  Scenario s;
  s.kind = ScenarioKind::c5;
  s.q = q;
  s.seed = seed;
  s.noise_sd = noise_sd;
  s.validate();
  Eigen::VectorXd truth = true_beta(s);
  Eigen::VectorXd y = truth;
  NormalStream noise(seed, kStreamImage);
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += noise_sd * noise();
  GenerationInfo info{"c5", q * q, q * q, q, seed, noise_sd, kPrngId};
  return {Problem::signal_approximator(std::move(y), PenaltyGraph::lattice(q), 0.0, 0.0),
          std::move(truth), std::move(info)};
}

GeneratedProblem gen_problem(const Scenario& scenario) {
  scenario.validate();
  if (scenario.kind == ScenarioKind::c5) {
    return gen_image_problem(scenario.q, scenario.noise_sd, scenario.seed);
  }
  const int n = scenario.n;
  const int p = scenario.num_coefficients();
  Eigen::VectorXd beta = true_beta(scenario);

  Eigen::MatrixXd x(n, p);
  NormalStream design(scenario.seed, kStreamDesign);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) x(i, j) = design();
  }
  Eigen::VectorXd y = x * beta;
  NormalStream noise(scenario.seed, kStreamNoise);
  for (int i = 0; i < n; ++i) y[i] += noise();

  PenaltyGraph graph =
      scenario.kind == ScenarioKind::c4 ? PenaltyGraph::lattice(scenario.q) : PenaltyGraph::chain(p);
  GenerationInfo info{to_string(scenario.kind), n, p, scenario.q, scenario.seed, 1.0, kPrngId};
  return {Problem(std::move(y), std::move(x), std::move(graph), 0.0, 0.0), std::move(beta),
          std::move(info)};
}

}  // namespace flr
