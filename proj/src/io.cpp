#include "flr/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "flr/error.hpp"
#include "flr/penalty_graph.hpp"

namespace flr {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, result.ptr);
}

namespace {

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream is(path, mode);
  if (!is) throw IoError("cannot open " + path.string() + " for reading");
  return is;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream os(path, mode | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

void finish(std::ofstream& os, const fs::path& path) {
  os.flush();
  if (!os) throw IoError("failed writing " + path.string());
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view token, int line) {
  token = trim(token);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw IoError("line " + std::to_string(line) + ": cannot parse number '" + std::string(token) + "'");
  }
  return v;
}

}  // namespace

void write_vector_csv(std::ostream& os, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) os << format_double(v[i]) << '\n';
}

Eigen::VectorXd read_vector_csv(std::istream& is) {
  std::vector<double> values;
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    if (trim(line).empty()) continue;
    values.push_back(parse_double(line, number));
  }
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void write_vector_csv(const fs::path& path, const Eigen::VectorXd& v) {
  auto os = open_out(path);
  write_vector_csv(os, v);
  finish(os, path);
}

Eigen::VectorXd read_vector_csv(const fs::path& path) {
  auto is = open_in(path);
  try {
    return read_vector_csv(is);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) os << ',';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(std::istream& is) {
  std::vector<double> values;
  Eigen::Index cols = -1;
  Eigen::Index rows = 0;
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    Eigen::Index count = 0;
    size_t start = 0;
    for (;;) {
      const size_t comma = row.find(',', start);
      values.push_back(parse_double(row.substr(start, comma - start), number));
      ++count;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cols >= 0 && count != cols) {
      throw IoError("line " + std::to_string(number) + ": expected " + std::to_string(cols) +
                    " columns, found " + std::to_string(count));
    }
    cols = count;
    ++rows;
  }
  if (rows == 0) return Eigen::MatrixXd(0, 0);
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Eigen::Map<RowMajor>(values.data(), rows, cols);
}

void write_matrix_csv(const fs::path& path, const Eigen::MatrixXd& m) {
  auto os = open_out(path);
  write_matrix_csv(os, m);
  finish(os, path);
}

Eigen::MatrixXd read_matrix_csv(const fs::path& path) {
  auto is = open_in(path);
  try {
    return read_matrix_csv(is);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_trace_csv(std::ostream& os, const std::vector<double>& trace) {
  os << "iteration,objective,relative_error\n";
  for (size_t r = 0; r < trace.size(); ++r) {
    os << r << ',' << format_double(trace[r]) << ',';
    if (r > 0) os << format_double(relative_error(trace[r], trace[r - 1]));
    os << '\n';
  }
}

void write_trace_csv(const fs::path& path, const std::vector<double>& trace) {
  auto os = open_out(path);
  write_trace_csv(os, trace);
  finish(os, path);
}

nlohmann::json to_json(const GenerationInfo& info, bool identity_design) {
  nlohmann::json j;
  j["scenario"] = info.scenario;
  j["n"] = info.n;
  j["p"] = info.p;
  j["q"] = info.q;
  j["seed"] = info.seed;
  j["noise_sd"] = info.noise_sd;
  j["prng"] = info.prng;
  j["identity_design"] = identity_design;
  return j;
}

void write_problem(const fs::path& dir, const GeneratedProblem& generated) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  const Problem& problem = generated.problem;
  write_vector_csv(dir / kResponseFile, problem.y());
  if (problem.identity_design()) {
    fs::remove(dir / kDesignFile, ec);
    auto os = open_out(dir / kIdentityMarker);
    os << "identity " << problem.n() << '\n';
    finish(os, dir / kIdentityMarker);
  } else {
    fs::remove(dir / kIdentityMarker, ec);
    write_matrix_csv(dir / kDesignFile, problem.design());
  }
  {
    auto os = open_out(dir / kGraphFile);
    write_graph(os, problem.graph());
    finish(os, dir / kGraphFile);
  }
  auto os = open_out(dir / kMetaFile);
  os << to_json(generated.info, problem.identity_design()).dump(2) << '\n';
  finish(os, dir / kMetaFile);
}

Problem read_problem(const fs::path& dir, double lambda1, double lambda2) {
  if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  Eigen::VectorXd y = read_vector_csv(dir / kResponseFile);
  PenaltyGraph graph = [&] {
    auto is = open_in(dir / kGraphFile);
    try {
      return read_graph(is);
    } catch (const IoError& e) {
      throw IoError((dir / kGraphFile).string() + ": " + e.what());
    }
  }();
  if (fs::exists(dir / kIdentityMarker)) {
    if (y.size() != graph.p()) {
      throw IoError("identity design: y has " + std::to_string(y.size()) + " entries but graph has " +
                    std::to_string(graph.p()) + " nodes");
    }
    return Problem::signal_approximator(std::move(y), std::move(graph), lambda1, lambda2);
  }
  Eigen::MatrixXd x = read_matrix_csv(dir / kDesignFile);
  if (x.rows() != y.size() || x.cols() != graph.p()) {
    throw IoError("X.csv is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                  " but y has " + std::to_string(y.size()) + " entries and graph has " +
                  std::to_string(graph.p()) + " nodes");
  }
  return Problem(std::move(y), std::move(x), std::move(graph), lambda1, lambda2);
}

namespace {

// Header token, skipping whitespace and '#' comments.
std::string pgm_token(std::istream& is) {
  std::string token;
  for (;;) {
    const int c = is.get();
    if (c == EOF) break;
    if (c == '#') {
      if (!token.empty()) {
        is.unget();
        break;
      }
      std::string comment;
      std::getline(is, comment);
      continue;
    }
    if (std::isspace(c)) {
      if (token.empty()) continue;
      is.unget();
      break;
    }
    token.push_back(static_cast<char>(c));
  }
  return token;
}

int pgm_int(std::istream& is, const char* what) {
  const std::string token = pgm_token(is);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() || v <= 0) {
    throw IoError(std::string("PGM: bad ") + what + " '" + token + "'");
  }
  return v;
}

}  // namespace

GrayImage read_pgm(std::istream& is) {
  if (pgm_token(is) != "P5") throw IoError("PGM: expected binary greymap (P5)");
  GrayImage image;
  image.width = pgm_int(is, "width");
  image.height = pgm_int(is, "height");
  image.max_value = pgm_int(is, "maximum value");
  if (image.max_value > 255) throw IoError("PGM: only 8-bit images are supported");
  if (!std::isspace(is.get())) throw IoError("PGM: missing whitespace after header");
  const size_t count = static_cast<size_t>(image.width) * static_cast<size_t>(image.height);
  image.pixels.resize(count);
  is.read(reinterpret_cast<char*>(image.pixels.data()), static_cast<std::streamsize>(count));
  if (static_cast<size_t>(is.gcount()) != count) {
    throw IoError("PGM: expected " + std::to_string(count) + " pixels, found " +
                  std::to_string(is.gcount()));
  }
  for (std::uint8_t px : image.pixels) {
    if (px > image.max_value) throw IoError("PGM: pixel exceeds maximum value");
  }
  return image;
}

GrayImage read_pgm(const fs::path& path) {
  auto is = open_in(path, std::ios::in | std::ios::binary);
  try {
    return read_pgm(is);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_pgm(std::ostream& os, const GrayImage& image) {
  if (image.pixels.size() != static_cast<size_t>(image.width) * static_cast<size_t>(image.height)) {
    throw InvalidDimension("image pixel count does not match its size");
  }
  os << "P5\n" << image.width << ' ' << image.height << '\n' << image.max_value << '\n';
  os.write(reinterpret_cast<const char*>(image.pixels.data()),
           static_cast<std::streamsize>(image.pixels.size()));
}

void write_pgm(const fs::path& path, const GrayImage& image) {
  auto os = open_out(path, std::ios::out | std::ios::binary);
  write_pgm(os, image);
  finish(os, path);
}

namespace {

nlohmann::json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from(const nlohmann::json& j, const char* key) {
  const nlohmann::json& v = j.at(key);
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ValidationError(std::string("run record: bad number for '") + key + "': " + s);
  }
  return v.get<double>();
}

}  // namespace

nlohmann::json to_json(const RunRecord& r) {
  nlohmann::json config;
  config["epsilon"] = number(r.config.epsilon);
  config["delta"] = number(r.config.delta);
  config["max_iters"] = r.config.max_iters;
  if (r.config.sb_mu) config["sb_mu"] = number(*r.config.sb_mu);
  if (r.config.spg_accuracy) config["spg_accuracy"] = number(*r.config.spg_accuracy);

  nlohmann::json j;
  j["solver"] = r.solver;
  j["input"] = r.input;
  j["lambda1"] = number(r.lambda1);
  j["lambda2"] = number(r.lambda2);
  j["config"] = std::move(config);
  j["iterations"] = r.iterations;
  j["inner_iterations"] = r.inner_iterations;
  j["wall_time_seconds"] = number(r.wall_time_seconds);
  j["final_objective"] = number(r.final_objective);
  j["termination"] = to_string(r.termination);
  j["trace_path"] = r.trace_path;
  j["beta_path"] = r.beta_path;
  return j;
}

RunRecord run_record_from_json(const nlohmann::json& j) {
  try {
    RunRecord r;
    r.solver = j.at("solver").get<std::string>();
    r.input = j.at("input").get<std::string>();
    r.lambda1 = number_from(j, "lambda1");
    r.lambda2 = number_from(j, "lambda2");
    const nlohmann::json& c = j.at("config");
    r.config.epsilon = number_from(c, "epsilon");
    r.config.delta = number_from(c, "delta");
    r.config.max_iters = c.at("max_iters").get<int>();
    if (c.contains("sb_mu")) r.config.sb_mu = number_from(c, "sb_mu");
    if (c.contains("spg_accuracy")) r.config.spg_accuracy = number_from(c, "spg_accuracy");
    r.iterations = j.at("iterations").get<int>();
    r.inner_iterations = j.at("inner_iterations").get<long long>();
    r.wall_time_seconds = number_from(j, "wall_time_seconds");
    r.final_objective = number_from(j, "final_objective");
    r.termination = termination_from_string(j.at("termination").get<std::string>());
    r.trace_path = j.at("trace_path").get<std::string>();
    r.beta_path = j.at("beta_path").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("run record: ") + e.what());
  }
}

void write_run_record(const fs::path& path, const RunRecord& record) {
  auto os = open_out(path);
  os << to_json(record).dump(2) << '\n';
  finish(os, path);
}

RunRecord read_run_record(const fs::path& path) {
  auto is = open_in(path);
  try {
    return run_record_from_json(nlohmann::json::parse(is));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace flr
