#include <gtest/gtest.h>

#include <bit>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "flr/datagen.hpp"
#include "flr/error.hpp"
#include "flr/io.hpp"
#include "flr/random.hpp"
#include "test_support.hpp"

namespace {

namespace fs = std::filesystem;
using flr::testing::TempDir;

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string golden(const char* name) { return slurp(fs::path(FLR_GOLDEN_DIR) / name); }

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(flr::format_double(0.1), "0.1");
  EXPECT_EQ(flr::format_double(3.0), "3");
  EXPECT_EQ(flr::format_double(-2.5e-7), "-2.5e-07");
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int i = 0; i < 2000; ++i) {
    const double v = std::bit_cast<double>(bits(rng));
    if (!std::isfinite(v)) continue;
    EXPECT_EQ(std::strtod(flr::format_double(v).c_str(), nullptr), v);
  }
}

TEST(VectorCsv, GoldenBytes) {
  Eigen::VectorXd v(5);
  v << 1.5, -0.1, 1e-300, 3, 123456789.125;
  std::ostringstream os;
  flr::write_vector_csv(os, v);
  EXPECT_EQ(os.str(), golden("vector.csv"));
  std::istringstream is(os.str());
  EXPECT_EQ(flr::read_vector_csv(is), v);
}

TEST(VectorCsv, RoundTripIsExact) {
  std::mt19937_64 rng(2);
  const Eigen::VectorXd v = flr::testing::random_vector(rng, 500, 1e3);
  TempDir dir("vec");
  flr::write_vector_csv(dir.path() / "v.csv", v);
  EXPECT_EQ(flr::read_vector_csv(dir.path() / "v.csv"), v);
}

TEST(VectorCsv, Malformed) {
  std::istringstream bad("1\n2x\n");
  try {
    flr::read_vector_csv(bad);
    FAIL() << "accepted malformed number";
  } catch (const flr::IoError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(flr::read_vector_csv(fs::path("/nonexistent/y.csv")), flr::IoError);
}

TEST(MatrixCsv, GoldenBytes) {
  Eigen::MatrixXd m(2, 2);
  m << 1, -2.5, 0.1, 1e22;
  std::ostringstream os;
  flr::write_matrix_csv(os, m);
  EXPECT_EQ(os.str(), golden("matrix.csv"));
  std::istringstream is(os.str());
  EXPECT_EQ(flr::read_matrix_csv(is), m);
}

TEST(MatrixCsv, RaggedRowsRejected) {
  std::istringstream ragged("1,2\n3\n");
  EXPECT_THROW(flr::read_matrix_csv(ragged), flr::IoError);
}

TEST(TraceCsv, GoldenBytes) {
  std::ostringstream os;
  flr::write_trace_csv(os, {4.0, 2.0, 2.0});
  EXPECT_EQ(os.str(), golden("trace.csv"));
}

TEST(GraphText, GoldenBytes) {
  std::ostringstream os;
  flr::write_graph(os, flr::PenaltyGraph::lattice(2));
  EXPECT_EQ(os.str(), golden("graph.txt"));
}

TEST(MetaJson, GoldenBytes) {
  const flr::GenerationInfo info{"c1", 1000, 200, 0, 7, 1.0, flr::kPrngId};
  EXPECT_EQ(flr::to_json(info, false).dump(2) + "\n", golden("meta.json"));
}

TEST(ProblemDirectory, RoundTrip) {
  TempDir dir("problem");
  const auto g = flr::gen_problem({flr::ScenarioKind::c3, 20, 10, 0, 4});
  flr::write_problem(dir.path(), g);
  EXPECT_TRUE(fs::exists(dir.path() / "X.csv"));
  EXPECT_FALSE(fs::exists(dir.path() / "X.identity"));
  const flr::Problem back = flr::read_problem(dir.path(), 0.5, 0.25);
  EXPECT_EQ(back.y(), g.problem.y());
  EXPECT_EQ(back.design(), g.problem.design());
  EXPECT_EQ(back.graph(), g.problem.graph());
  EXPECT_EQ(back.lambda2(), 0.25);
  const auto meta = nlohmann::json::parse(slurp(dir.path() / "meta.json"));
  EXPECT_EQ(meta.at("seed"), 4);
  EXPECT_EQ(meta.at("scenario"), "c3");
}

TEST(ProblemDirectory, IdentityMarker) {
  TempDir dir("image");
  const auto g = flr::gen_image_problem(8, 0.3, 1);
  flr::write_problem(dir.path(), g);
  EXPECT_EQ(slurp(dir.path() / "X.identity"), "identity 64\n");
  EXPECT_FALSE(fs::exists(dir.path() / "X.csv"));
  const flr::Problem back = flr::read_problem(dir.path(), 0, 1);
  EXPECT_TRUE(back.identity_design());
  EXPECT_EQ(back.y(), g.problem.y());
}

TEST(ProblemDirectory, DimensionMismatch) {
  TempDir dir("mismatch");
  flr::write_problem(dir.path(), flr::gen_problem({flr::ScenarioKind::c3, 20, 10, 0, 4}));
  std::ofstream(dir.path() / "graph.txt") << "11 0\n";
  EXPECT_THROW(flr::read_problem(dir.path(), 0, 0), flr::IoError);
  EXPECT_THROW(flr::read_problem(dir.path() / "missing", 0, 0), flr::IoError);
}

TEST(Pgm, GoldenBytesAndRoundTrip) {
  const flr::GrayImage image{3, 2, 255, {0, 1, 2, 253, 254, 255}};
  std::ostringstream os;
  flr::write_pgm(os, image);
  EXPECT_EQ(os.str(), golden("tiny.pgm"));
  const flr::GrayImage back = flr::read_pgm(fs::path(FLR_GOLDEN_DIR) / "tiny.pgm");
  EXPECT_EQ(back.width, 3);
  EXPECT_EQ(back.height, 2);
  EXPECT_EQ(back.pixels, image.pixels);
}

TEST(Pgm, HeaderComments) {
  std::string text = "P5\n# made by hand\n2 # width\n1\n255\n";
  text += std::string("\x07\x08", 2);
  std::istringstream is(text);
  const flr::GrayImage image = flr::read_pgm(is);
  EXPECT_EQ(image.width, 2);
  EXPECT_EQ(image.pixels, (std::vector<std::uint8_t>{7, 8}));
}

TEST(Pgm, Malformed) {
  for (const std::string& text : {std::string("P2\n1 1\n255\n0"), std::string("P5\n2 2\n255\n\x01"),
                                 std::string("P5\nx 2\n255\n"), std::string("P5\n1 1\n65535\n\x01\x01"),
                                 std::string("P5\n1 1\n10\n\x0b")}) {
    std::istringstream is(text);
    EXPECT_THROW(flr::read_pgm(is), flr::IoError);
  }
}

flr::RunRecord sample_record() {
  flr::RunRecord r;
  r.solver = "mm-dense";
  r.input = "data/c1";
  r.lambda1 = 0.1;
  r.lambda2 = 0.1;
  r.config.sb_mu = 0.5;
  r.iterations = 3;
  r.inner_iterations = 0;
  r.wall_time_seconds = 0.25;
  r.final_objective = 407.6397;
  r.termination = flr::Termination::converged;
  r.trace_path = "out/trace.csv";
  r.beta_path = "out/beta.csv";
  return r;
}

TEST(RunRecordJson, GoldenBytes) {
  TempDir dir("record");
  flr::write_run_record(dir.path() / "r.json", sample_record());
  EXPECT_EQ(slurp(dir.path() / "r.json"), golden("run_record.json"));
  EXPECT_EQ(flr::read_run_record(fs::path(FLR_GOLDEN_DIR) / "run_record.json"), sample_record());
}

TEST(RunRecordJson, RandomRoundTrips) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> bits;
  std::uniform_int_distribution<int> small(0, 100000);
  auto any_double = [&] {
    double v;
    do {
      v = std::bit_cast<double>(bits(rng));
    } while (std::isnan(v));
    return v;
  };
  auto any_string = [&] {
    std::string s;
    const int len = small(rng) % 12;
    for (int i = 0; i < len; ++i) s.push_back(static_cast<char>(' ' + small(rng) % 95));
    if (small(rng) % 4 == 0) s += "\xc3\xa9\n\"\\";
    return s;
  };
  for (int trial = 0; trial < 300; ++trial) {
    flr::RunRecord r;
    r.solver = any_string();
    r.input = any_string();
    r.lambda1 = any_double();
    r.lambda2 = trial % 7 == 0 ? std::numeric_limits<double>::infinity() : any_double();
    r.config.epsilon = any_double();
    r.config.delta = trial % 5 == 0 ? -std::numeric_limits<double>::infinity() : any_double();
    r.config.max_iters = small(rng);
    if (trial % 2) r.config.sb_mu = any_double();
    if (trial % 3) r.config.spg_accuracy = any_double();
    r.iterations = small(rng);
    r.inner_iterations = static_cast<long long>(bits(rng) >> 2);
    r.wall_time_seconds = any_double();
    r.final_objective = any_double();
    r.termination = trial % 2 ? flr::Termination::converged : flr::Termination::max_iters;
    r.trace_path = any_string();
    r.beta_path = any_string();
    const std::string text = flr::to_json(r).dump();
    EXPECT_EQ(flr::run_record_from_json(nlohmann::json::parse(text)), r) << text;
  }
}

TEST(RunRecordJson, NanIsEncodedAsString) {
  flr::RunRecord r = sample_record();
  r.final_objective = std::numeric_limits<double>::quiet_NaN();
  const auto j = flr::to_json(r);
  EXPECT_EQ(j.at("final_objective"), "nan");
  EXPECT_TRUE(std::isnan(flr::run_record_from_json(j).final_objective));
}

TEST(RunRecordJson, RejectsBadInput) {
  auto j = flr::to_json(sample_record());
  j["termination"] = "done";
  EXPECT_THROW(flr::run_record_from_json(j), flr::ValidationError);
  j = flr::to_json(sample_record());
  j.erase("solver");
  EXPECT_THROW(flr::run_record_from_json(j), flr::ValidationError);
  j = flr::to_json(sample_record());
  j["lambda1"] = "big";
  EXPECT_THROW(flr::run_record_from_json(j), flr::ValidationError);
}

}  // namespace
