// tpa: absorption probabilities of time-correlated photon pairs.
//
//   tpa point    --family gaussian --T 1 --tau 0.01 --delta-tau 0
//   tpa sweep    --family rectangular --start 0 --stop 12.566 --count 401 --out rect.csv
//   tpa figures  --out figures
//   tpa validate --level full

#include "tpa/errors.hpp"
#include "tpa/sweep.hpp"
#include "tpa/validation.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

struct Common {
  std::string family;
  double T = 0.0;
  double tau = 0.0;
  double delta_tau = 0.0;
  double delta = 0.0;
  double r1 = 1.0;
  double r2 = 1.0;
  double omega_a = 1000.0;
  double omega_b = 1000.0;
  std::size_t sampled_points = 256;
  std::string config;

  CLI::Option* o_family = nullptr;
  CLI::Option* o_T = nullptr;
  CLI::Option* o_tau = nullptr;
  CLI::Option* o_delta_tau = nullptr;
  CLI::Option* o_delta = nullptr;
  CLI::Option* o_r1 = nullptr;
  CLI::Option* o_r2 = nullptr;
  CLI::Option* o_omega_a = nullptr;
  CLI::Option* o_omega_b = nullptr;
  CLI::Option* o_sampled = nullptr;

  void add_to(CLI::App* app) {
    o_family = app->add_option("--family", family, "gaussian, rectangular or sampled");
    o_T = app->add_option("--T", T, "coherence time T");
    o_tau = app->add_option("--tau", tau, "correlation time tau");
    o_delta_tau = app->add_option("--delta-tau", delta_tau, "detuning times tau");
    o_delta = app->add_option("--delta", delta, "detuning Delta (rad/time)");
    o_r1 = app->add_option("--r1", r1, "lower coupling r1");
    o_r2 = app->add_option("--r2", r2, "upper coupling r2");
    o_omega_a = app->add_option("--omega-a", omega_a, "lower transition frequency");
    o_omega_b = app->add_option("--omega-b", omega_b, "upper transition frequency");
    o_sampled = app->add_option("--sampled-points", sampled_points,
                                "grid points per axis for the sampled family");
    app->add_option("--config", config, "JSON config; flags override its values");
  }

  void apply_atom(tpa::ThreeLevelAtom& atom) const {
    if (o_r1->count())
      atom.r1 = r1;
    if (o_r2->count())
      atom.r2 = r2;
    if (o_omega_a->count())
      atom.Omega_a = omega_a;
    if (o_omega_b->count())
      atom.Omega_b = omega_b;
  }
};

void write_or_print(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  const auto path = tpa::resolve_output(out);
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text))
    throw tpa::IoError("cannot write " + path.string());
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Absorption by time-correlated photon pairs"};
  app.require_subcommand(1);

  // point
  auto* point = app.add_subcommand("point", "evaluate P1, P2 and their ratio at one point");
  Common pc;
  pc.add_to(point);
  std::string point_path;
  std::string point_out;
  auto* o_point_path =
      point->add_option("--path", point_path, "closed-form, quadrature or kernel");
  point->add_option("--out", point_out, "write the JSON record here instead of stdout");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "evaluate a one-parameter sweep into CSV");
  Common sc;
  sc.add_to(sweep);
  std::string variable;
  double start = 0.0;
  double stop = 0.0;
  int count = 0;
  std::string spacing;
  std::vector<std::string> paths;
  int workers = 0;
  std::string sweep_out;
  auto* o_variable = sweep->add_option("--variable", variable, "delta_tau, tau_over_T or T");
  auto* o_start = sweep->add_option("--start", start, "first abscissa");
  auto* o_stop = sweep->add_option("--stop", stop, "last abscissa");
  auto* o_count = sweep->add_option("--count", count, "number of points (>= 2)");
  auto* o_spacing = sweep->add_option("--spacing", spacing, "linear or log");
  auto* o_paths = sweep->add_option("--path", paths, "closed-form and/or quadrature");
  auto* o_workers = sweep->add_option("--workers", workers, "worker threads (0: all cores)");
  auto* o_sweep_out = sweep->add_option("--out", sweep_out, "CSV path");

  // figures
  auto* figures = app.add_subcommand("figures", "write the four canonical sweep CSVs");
  std::string figures_dir = "figures";
  int figures_workers = 0;
  figures->add_option("--out", figures_dir, "output directory");
  figures->add_option("--workers", figures_workers, "worker threads (0: all cores)");

  // validate
  auto* validate = app.add_subcommand("validate", "run the validation suite");
  std::string level = "fast";
  std::string validate_out;
  validate->add_option("--level", level, "fast or full");
  validate->add_option("--out", validate_out, "write the JSON report here as well");

  CLI11_PARSE(app, argc, argv);

  try {
    if (point->parsed()) {
      tpa::PointSpec spec;
      if (!pc.config.empty())
        tpa::apply_config(tpa::load_config(pc.config), spec);
      if (pc.o_family->count())
        spec.family = tpa::parse_sweep_family(pc.family);
      if (pc.o_T->count())
        spec.T = pc.T;
      if (pc.o_tau->count())
        spec.tau = pc.tau;
      if (pc.o_delta_tau->count()) {
        spec.delta_tau = pc.delta_tau;
        spec.delta.reset();
      }
      if (pc.o_delta->count()) {
        spec.delta = pc.delta;
        spec.delta_tau.reset();
      }
      if (pc.o_sampled->count())
        spec.sampled_points = pc.sampled_points;
      pc.apply_atom(spec.atom);
      if (o_point_path->count())
        spec.path = tpa::parse_spectral_path(point_path);
      write_or_print(tpa::run_point(spec).dump(2) + "\n", point_out);
      return 0;
    }

    if (sweep->parsed()) {
      tpa::SweepSpec spec;
      if (!sc.config.empty())
        tpa::apply_config(tpa::load_config(sc.config), spec);
      if (sc.o_family->count())
        spec.family = tpa::parse_sweep_family(sc.family);
      if (spec.family == tpa::SweepFamily::sampled && !o_paths->count() && sc.config.empty()) {
        spec.closed_form = false;
        spec.quadrature = true;
      }
      if (o_variable->count())
        spec.variable = tpa::parse_sweep_variable(variable);
      if (o_start->count())
        spec.range.start = start;
      if (o_stop->count())
        spec.range.stop = stop;
      if (o_count->count())
        spec.range.count = count;
      if (o_spacing->count())
        spec.range.spacing = tpa::parse_spacing(spacing);
      if (sc.o_T->count())
        spec.T = sc.T;
      if (sc.o_tau->count())
        spec.tau = sc.tau;
      if (sc.o_delta_tau->count()) {
        spec.delta_tau = sc.delta_tau;
        spec.delta.reset();
      }
      if (sc.o_delta->count())
        spec.delta = sc.delta;
      if (sc.o_sampled->count())
        spec.sampled_points = sc.sampled_points;
      sc.apply_atom(spec.atom);
      if (o_paths->count()) {
        spec.closed_form = false;
        spec.quadrature = false;
        for (const auto& p : paths) {
          const auto path = tpa::parse_spectral_path(p);
          if (path == tpa::SpectralPath::closed_form)
            spec.closed_form = true;
          else if (path == tpa::SpectralPath::time_domain_quadrature)
            spec.quadrature = true;
          else
            throw tpa::UsageError("sweeps support the closed-form and quadrature paths only");
        }
      }
      if (o_workers->count())
        spec.workers = workers;
      if (o_sweep_out->count())
        spec.output = sweep_out;
      spec.output = tpa::resolve_output(spec.output);
      const auto result = tpa::run_sweep(spec);
      std::cout << result.csv.string() << "\n" << result.summary.string() << "\n";
      return 0;
    }

    if (figures->parsed()) {
      for (const auto& p : tpa::write_figures(tpa::resolve_output(figures_dir), figures_workers))
        std::cout << p.string() << "\n";
      return 0;
    }

    if (validate->parsed()) {
      const auto report = tpa::run_validate(tpa::parse_validation_level(level));
      const auto text = report.to_json().dump(2) + "\n";
      std::cout << text;
      if (!validate_out.empty())
        write_or_print(text, validate_out);
      return report.passed() ? 0 : 1;
    }
  } catch (const tpa::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
