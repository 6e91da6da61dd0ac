#include "tpa/errors.hpp"
#include "tpa/sweep.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace tpa;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("tpa_cli_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream s(line);
  std::string cell;
  while (std::getline(s, cell, sep))
    out.push_back(cell);
  if (!line.empty() && line.back() == sep)
    out.emplace_back();
  return out;
}

} // namespace

TEST_CASE("CSV header depends on family and paths") {
  SweepSpec spec;
  CHECK(csv_header(spec) == "x,P1,P2,ratio,F_sq,envelope,flags");
  spec.family = SweepFamily::rectangular;
  spec.quadrature = true;
  CHECK(csv_header(spec) == "x,P1,P2,ratio,sinc_sq_half,envelope,P1_quad,P2_quad,ratio_quad,flags");
}

TEST_CASE("a quadrature-only sweep fills the plain columns") {
  SweepSpec spec;
  spec.closed_form = false;
  spec.quadrature = true;
  spec.range = {0.0, 1.0, 2, Spacing::linear};
  CHECK(csv_header(spec) == "x,P1,P2,ratio,F_sq,envelope,flags");
  const auto rows = evaluate_sweep(spec);
  const auto cells = split(csv_line(spec, rows[0]), ',');
  REQUIRE(cells.size() == 7);
  CHECK(std::stod(cells[2]) == doctest::Approx(2.0 * pi * 0.01).epsilon(1e-8));
}

TEST_CASE("two-point sweep reproduces the closed forms bit for bit") {
  SweepSpec spec;
  spec.range = {0.0, 2.0, 2, Spacing::linear};
  spec.workers = 1;
  const auto rows = evaluate_sweep(spec);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    const auto cf = closed_form_gaussian(spec.atom, spec.T, spec.tau, row.x / spec.tau);
    REQUIRE(row.closed.has_value());
    CHECK(row.closed->P1 == cf.P1);
    CHECK(row.closed->P2 == cf.P2);
    CHECK(row.closed->ratio == cf.ratio);
    CHECK(row.error.empty());
  }
}

TEST_CASE("row order and values do not depend on the worker count") {
  SweepSpec spec;
  spec.family = SweepFamily::rectangular;
  spec.range = {0.0, 4.0 * pi, 41, Spacing::linear};
  spec.workers = 1;
  const auto one = evaluate_sweep(spec);
  spec.workers = 4;
  const auto four = evaluate_sweep(spec);
  REQUIRE(one.size() == four.size());
  for (std::size_t i = 0; i < one.size(); ++i)
    CHECK(csv_line(spec, one[i]) == csv_line(spec, four[i]));
}

TEST_CASE("CSV round trip keeps full precision") {
  const auto dir = scratch_dir("roundtrip");
  SweepSpec spec;
  spec.range = {0.0, 3.0, 31, Spacing::linear};
  spec.output = dir / "g.csv";
  const auto out = run_sweep(spec);
  CHECK(out.summary == dir / "g.summary.json");
  std::ifstream f(out.csv);
  std::string line;
  std::getline(f, line);
  CHECK(line == csv_header(spec));
  std::size_t i = 0;
  while (std::getline(f, line)) {
    const auto cells = split(line, ',');
    REQUIRE(cells.size() == 7);
    const auto& row = out.rows.at(i++);
    CHECK(std::stod(cells[0]) == row.x);
    const double p2 = std::stod(cells[2]);
    CHECK(std::abs(p2 - row.closed->P2) <= 1e-12 * row.closed->P2);
    CHECK(std::stod(cells[4]) == row.shape_two);
  }
  CHECK(i == 31);
  fs::remove_all(dir);
}

TEST_CASE("rectangular sweep summary finds the zero at 2 pi") {
  const auto dir = scratch_dir("zeros");
  SweepSpec spec;
  spec.family = SweepFamily::rectangular;
  spec.range = {0.0, 4.0 * pi, 401, Spacing::linear};
  spec.output = dir / "r.csv";
  const auto out = run_sweep(spec);
  const auto summary = nlohmann::json::parse(slurp(out.summary));
  REQUIRE(summary["zeros"]["P2"].size() >= 1);
  CHECK(std::abs(summary["zeros"]["P2"][0].get<double>() - 2.0 * pi) < 1e-12);
  CHECK(std::abs(summary["zeros"]["P1"][0].get<double>() - pi) < 1e-12);
  CHECK(summary["failures"].empty());
  CHECK(summary["rows"].get<int>() == 401);
  fs::remove_all(dir);
}

TEST_CASE("ratio is undefined where P1 vanishes") {
  SweepSpec spec;
  spec.family = SweepFamily::rectangular;
  spec.range = {0.0, 2.0 * pi, 3, Spacing::linear};
  const auto rows = evaluate_sweep(spec);
  CHECK_FALSE(rows[1].closed->ratio.has_value());
  CHECK(rows[1].flags.has(Flag::ratio_undefined));
  const auto cells = split(csv_line(spec, rows[1]), ',');
  CHECK(cells[3] == "nan");
  CHECK(cells.back().find("one_photon_suppressed") != std::string::npos);
}

TEST_CASE("point records are reproducible and complete") {
  PointSpec spec;
  spec.family = SweepFamily::gaussian;
  spec.T = 1.0;
  spec.tau = 0.01;
  spec.delta_tau = 0.0;
  const auto a = run_point(spec).dump(2);
  const auto b = run_point(spec).dump(2);
  CHECK(a == b);
  const auto j = nlohmann::json::parse(a);
  CHECK(j["P2"].get<double>() == doctest::Approx(2.0 * pi * 0.01).epsilon(1e-15));
  CHECK(j["ratio"].get<double>() == doctest::Approx(std::sqrt(pi / 2.0)).epsilon(1e-12));

  spec.family = SweepFamily::rectangular;
  spec.delta_tau = pi;
  CHECK(run_point(spec)["ratio"].is_null());
}

TEST_CASE("missing point parameters are all named") {
  PointSpec spec;
  spec.family = SweepFamily::gaussian;
  try {
    spec.validate();
    FAIL("expected a usage error");
  } catch (const UsageError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("T tau delta_tau") != std::string::npos);
  }
}

TEST_CASE("configs overlay specs and reject unknown keys") {
  SweepSpec spec;
  apply_config(nlohmann::json::parse(R"({"family":"rectangular","T":2.0,
      "start":0.5,"stop":5.0,"count":10,"spacing":"log"})"),
               spec);
  CHECK(spec.family == SweepFamily::rectangular);
  CHECK(spec.T == 2.0);
  CHECK(spec.range.count == 10);
  CHECK(spec.range.spacing == Spacing::log);
  const auto v = spec.range.values();
  CHECK(v.front() == doctest::Approx(0.5));
  CHECK(v.back() == doctest::Approx(5.0));
  CHECK(v[1] / v[0] == doctest::Approx(v[2] / v[1]).epsilon(1e-12));

  CHECK_THROWS_AS(apply_config(nlohmann::json::parse(R"({"colour":"red"})"), spec), UsageError);
  CHECK_THROWS_AS(apply_config(nlohmann::json::parse(R"({"T":"long"})"), spec), UsageError);
  PointSpec point;
  CHECK_THROWS_AS(apply_config(nlohmann::json::parse(R"({"tua":0.1})"), point), UsageError);
}

TEST_CASE("sweep ranges are validated") {
  CHECK_THROWS_AS((SweepRange{0.0, 1.0, 1, Spacing::linear}.validate()), UsageError);
  CHECK_THROWS_AS((SweepRange{1.0, 0.0, 5, Spacing::linear}.validate()), UsageError);
  CHECK_THROWS_AS((SweepRange{0.0, 1.0, 5, Spacing::log}.validate()), UsageError);
  CHECK_THROWS_AS(parse_sweep_variable("omega"), UsageError);
  CHECK_THROWS_AS(parse_spacing("cubic"), UsageError);
}

TEST_CASE("output directory comes from the environment for relative paths") {
  const auto dir = scratch_dir("env");
  ::setenv("TPA_OUTPUT_DIR", dir.c_str(), 1);
  CHECK(resolve_output("a.csv") == dir / "a.csv");
  CHECK(resolve_output("/abs/a.csv") == fs::path("/abs/a.csv"));
  ::unsetenv("TPA_OUTPUT_DIR");
  CHECK(resolve_output("a.csv") == fs::path("a.csv"));
  fs::remove_all(dir);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(std::nan("")) == "nan");
}
