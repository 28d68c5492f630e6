#include "flr/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "flr/error.hpp"

namespace flr {

Eigen::VectorXd image_to_vector(const GrayImage& image) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(image.pixels.size()));
  for (size_t i = 0; i < image.pixels.size(); ++i) v[static_cast<Eigen::Index>(i)] = image.pixels[i];
  return v;
}

GrayImage vector_to_image(const Eigen::VectorXd& values, int width, int height, int max_value) {
  if (values.size() != static_cast<Eigen::Index>(width) * height) {
    throw InvalidDimension("vector length does not match image size");
  }
  GrayImage image;
  image.width = width;
  image.height = height;
  image.max_value = max_value;
  image.pixels.resize(static_cast<size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = std::clamp(std::round(values[i]), 0.0, static_cast<double>(max_value));
    image.pixels[static_cast<size_t>(i)] = static_cast<std::uint8_t>(v);
  }
  return image;
}

DenoiseResult denoise(const GrayImage& image, double lambda2, SolverId solver,
                      const SolverOptions& options) {
  if (image.width != image.height) {
    throw ValidationError("denoise needs a square image, got " + std::to_string(image.width) + "x" +
                          std::to_string(image.height));
  }
  const int q = image.width;
  const Eigen::VectorXd pixels = image_to_vector(image);
  const double mean = pixels.mean();
  const double sd = std::sqrt((pixels.array() - mean).square().mean());
  const double scale = sd > 0.0 ? sd : 1.0;
  Eigen::VectorXd y = (pixels.array() - mean) / scale;

  const Problem problem =
      Problem::signal_approximator(std::move(y), PenaltyGraph::lattice(q), 0.0, lambda2);
  DenoiseResult out;
  out.fit = fit(solver, problem, options);
  const Eigen::VectorXd restored = (out.fit.beta.array() * scale + mean).matrix();
  out.image = vector_to_image(restored, q, q, image.max_value);
  return out;
}

}  // namespace flr
