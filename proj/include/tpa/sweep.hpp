#pragma once

#include "tpa/transitions.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tpa {

enum class SweepFamily { gaussian, rectangular, sampled };
enum class SweepVariable { delta_tau, tau_over_T, T };
enum class Spacing { linear, log };

std::string to_string(SweepFamily f);
std::string to_string(SweepVariable v);
std::string to_string(Spacing s);
SweepFamily parse_sweep_family(const std::string& text);
SweepVariable parse_sweep_variable(const std::string& text);
Spacing parse_spacing(const std::string& text);

struct SweepRange {
  double start = 0.0;
  double stop = 3.0;
  int count = 301;
  Spacing spacing = Spacing::linear;

  /// Throws UsageError unless count >= 2, start < stop and (log) start > 0.
  void validate() const;
  std::vector<double> values() const;
};

struct SweepSpec {
  SweepFamily family = SweepFamily::gaussian;
  SweepVariable variable = SweepVariable::delta_tau;
  SweepRange range;

  double T = 1.0;
  double tau = 0.01;
  double delta_tau = 0.0;
  /// Fixed Delta for tau_over_T and T sweeps. Without it Delta tau is held
  /// at `delta_tau` instead.
  std::optional<double> delta;
  ThreeLevelAtom atom{1000.0, 1000.0, 1.0, 1.0};

  bool closed_form = true;
  bool quadrature = false;
  std::size_t sampled_points = 256; // per axis, sampled family only
  QuadratureSettings settings;

  int workers = 0; // 0: hardware concurrency
  std::filesystem::path output = "sweep.csv";

  void validate() const;
};

struct PathValues {
  double P1 = 0.0;
  double P2 = 0.0;
  std::optional<double> ratio;
};

struct SweepRow {
  double x = 0.0;
  double T = 0.0;
  double tau = 0.0;
  double delta = 0.0;
  std::optional<PathValues> closed;
  std::optional<PathValues> quad;
  double shape_two = 0.0; // |F(Delta tau)|^2 or sinc^2(Delta tau / 2)
  double shape_one = 0.0; // exp(-2 (Delta tau)^2) or sinc^2(Delta tau)
  Flags flags;
  std::string error; // set when the point failed; the sweep continues
};

/// (T, tau, Delta) of the sweep point at abscissa x.
SweepRow sweep_point_parameters(const SweepSpec& spec, double x);

/// Evaluates every point; rows come back in abscissa order whatever the
/// worker count.
std::vector<SweepRow> evaluate_sweep(const SweepSpec& spec);

std::string csv_header(const SweepSpec& spec);
std::string csv_line(const SweepSpec& spec, const SweepRow& row);
nlohmann::ordered_json sweep_summary(const SweepSpec& spec, const std::vector<SweepRow>& rows);

struct SweepOutputs {
  std::filesystem::path csv;
  std::filesystem::path summary;
  std::vector<SweepRow> rows;
};

/// Writes <output> (CSV) and <output stem>.summary.json, creating parent
/// directories. The path is used as given. Throws IoError when
/// either cannot be written.
SweepOutputs run_sweep(const SweepSpec& spec);

struct PointSpec {
  std::optional<SweepFamily> family;
  std::optional<double> T;
  std::optional<double> tau;
  std::optional<double> delta_tau;
  std::optional<double> delta;
  ThreeLevelAtom atom{1000.0, 1000.0, 1.0, 1.0};
  SpectralPath path = SpectralPath::closed_form;
  std::size_t sampled_points = 256;
  QuadratureSettings settings;

  /// Throws UsageError naming every missing field.
  void validate() const;
};

/// Evaluates one point; the record carries inputs, results, flags and the
/// settings used. Equal inputs give byte-identical dumps.
nlohmann::ordered_json run_point(const PointSpec& spec);

/// Overlays known keys of a JSON config onto a spec. Unknown keys or wrong
/// types raise UsageError.
void apply_config(const nlohmann::json& config, SweepSpec& spec);
void apply_config(const nlohmann::json& config, PointSpec& spec);
nlohmann::json load_config(const std::filesystem::path& path);

/// Resolves relative output paths against $TPA_OUTPUT_DIR when it is set.
std::filesystem::path resolve_output(const std::filesystem::path& path);

/// Writes the four canonical sweeps into `directory` and returns their paths:
/// Gaussian and rectangular Delta tau curves, and rectangular transparency
/// sweeps in Delta tau (with quadrature) and in tau at fixed Delta.
std::vector<std::filesystem::path> write_figures(const std::filesystem::path& directory,
                                                 int workers = 0);

/// "%.17g", with "nan" for missing values.
std::string format_number(double x);

} // namespace tpa
