#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flr/datagen.hpp"
#include "flr/fit_result.hpp"
#include "flr/objective.hpp"

namespace flr {

// Shortest representation that parses back to the same double.
std::string format_double(double v);

// One value per line.
void write_vector_csv(std::ostream& os, const Eigen::VectorXd& v);
Eigen::VectorXd read_vector_csv(std::istream& is);
void write_vector_csv(const std::filesystem::path& path, const Eigen::VectorXd& v);
Eigen::VectorXd read_vector_csv(const std::filesystem::path& path);

// One comma-separated row per line.
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(std::istream& is);
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

// iteration,objective,relative_error; the first row has an empty relative
// error.
void write_trace_csv(std::ostream& os, const std::vector<double>& trace);
void write_trace_csv(const std::filesystem::path& path, const std::vector<double>& trace);

// Problem directory layout.
inline constexpr const char* kResponseFile = "y.csv";
inline constexpr const char* kDesignFile = "X.csv";
inline constexpr const char* kIdentityMarker = "X.identity";
inline constexpr const char* kGraphFile = "graph.txt";
inline constexpr const char* kMetaFile = "meta.json";

nlohmann::json to_json(const GenerationInfo& info, bool identity_design);

// Writes y.csv, X.csv (or the X.identity marker), graph.txt and meta.json.
void write_problem(const std::filesystem::path& dir, const GeneratedProblem& generated);
// Reads a problem directory; lambdas are attached by the caller.
Problem read_problem(const std::filesystem::path& dir, double lambda1, double lambda2);

// 8-bit binary greymap.
struct GrayImage {
  int width = 0;
  int height = 0;
  int max_value = 255;
  std::vector<std::uint8_t> pixels;  // row-major
};

GrayImage read_pgm(std::istream& is);
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(std::ostream& os, const GrayImage& image);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

struct RunConfigEcho {
  double epsilon = 1e-8;
  double delta = 1e-5;
  int max_iters = 10000;
  std::optional<double> sb_mu;
  std::optional<double> spg_accuracy;

  bool operator==(const RunConfigEcho&) const = default;
};

struct RunRecord {
  std::string solver;
  std::string input;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  RunConfigEcho config;
  int iterations = 0;
  long long inner_iterations = 0;
  double wall_time_seconds = 0.0;
  double final_objective = 0.0;
  Termination termination = Termination::max_iters;
  std::string trace_path;
  std::string beta_path;

  bool operator==(const RunRecord&) const = default;
};

// Non-finite numbers are stored as the strings "inf", "-inf", "nan".
nlohmann::json to_json(const RunRecord& record);
RunRecord run_record_from_json(const nlohmann::json& j);
void write_run_record(const std::filesystem::path& path, const RunRecord& record);
RunRecord read_run_record(const std::filesystem::path& path);

}  // namespace flr
