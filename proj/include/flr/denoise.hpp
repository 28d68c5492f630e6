#pragma once

#include <Eigen/Dense>

#include "flr/fit_result.hpp"
#include "flr/io.hpp"
#include "flr/solvers.hpp"

namespace flr {

// Pixel intensities as a row-major vector.
Eigen::VectorXd image_to_vector(const GrayImage& image);
// Rounds and clamps to [0, max_value].
GrayImage vector_to_image(const Eigen::VectorXd& values, int width, int height, int max_value = 255);

struct DenoiseResult {
  GrayImage image;
  FitResult fit;
};

// Standardizes the intensities, solves the signal approximator on the
// lattice with lambda1 = 0 and maps the fit back to intensities. Throws
// ValidationError for non-square images.
DenoiseResult denoise(const GrayImage& image, double lambda2, SolverId solver,
                      const SolverOptions& options);

}  // namespace flr
