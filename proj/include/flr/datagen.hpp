#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "flr/objective.hpp"

namespace flr {

enum class ScenarioKind { c1, c2, c3, c4, c5 };

std::string to_string(ScenarioKind kind);
// Accepts "c1".."c5" in either case. Throws ScenarioError otherwise.
ScenarioKind scenario_kind_from_string(const std::string& s);

struct Scenario {
  ScenarioKind kind = ScenarioKind::c1;
  int n = 0;  // rows of X; unused for c5
  int p = 0;  // coefficients for c1-c3
  int q = 0;  // side length for c4 (p = q*q) and c5
  std::uint64_t seed = 0;
  double noise_sd = 0.3;  // c5 only

  int num_coefficients() const;
  // Throws ScenarioError when the scenario's size constraints fail.
  void validate() const;
};

// Streams of the counter-based generator.
inline constexpr std::uint32_t kStreamDesign = 0;
inline constexpr std::uint32_t kStreamNoise = 1;
inline constexpr std::uint32_t kStreamImage = 2;

// Piecewise-constant coefficients of c1-c4 (0-based indices). For c5 the
// standardized synthetic image.
Eigen::VectorXd true_beta(const Scenario& scenario);

// Concentric rectangles with intensities 0, 0.5, 1; row-major, length q*q.
Eigen::VectorXd synthetic_image(int q);

struct GenerationInfo {
  std::string scenario;
  int n = 0;
  int p = 0;
  int q = 0;
  std::uint64_t seed = 0;
  double noise_sd = 1.0;
  std::string prng;
};

struct GeneratedProblem {
  Problem problem;
  Eigen::VectorXd truth;
  GenerationInfo info;
};

// X with iid N(0, 1) entries (row-major draw order), y = X beta* + N(0, 1).
// c1-c3 use chain(p), c4 lattice(q); c5 delegates to gen_image_problem.
// Lambdas are set to zero; use Problem::with_lambdas.
GeneratedProblem gen_problem(const Scenario& scenario);

// FLSA on lattice(q) with y = standardized synthetic_image(q) + N(0, sd^2).
GeneratedProblem gen_image_problem(int q, double noise_sd, std::uint64_t seed);

}  // namespace flr
