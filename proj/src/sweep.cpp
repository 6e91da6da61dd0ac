#include "tpa/sweep.hpp"

#include "tpa/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <thread>

namespace tpa {

namespace {

constexpr double kPi = std::numbers::pi;

using ojson = nlohmann::ordered_json;

template <class Enum, std::size_t N>
Enum parse_named(const std::string& text, const std::pair<const char*, Enum> (&table)[N],
                 const char* what) {
  std::string allowed;
  for (const auto& [name, value] : table) {
    if (text == name)
      return value;
    allowed += allowed.empty() ? name : std::string(", ") + name;
  }
  throw UsageError("unknown " + std::string(what) + " '" + text + "' (expected " + allowed + ")");
}

Biphoton build_pair(SweepFamily family, double T, double tau, const ThreeLevelAtom& atom,
                    double delta, std::size_t sampled_points) {
  switch (family) {
  case SweepFamily::gaussian:
    return resonant_pair(PairFamily::gaussian, T, tau, atom, delta);
  case SweepFamily::rectangular:
    return resonant_pair(PairFamily::rectangular, T, tau, atom, delta);
  case SweepFamily::sampled: {
    SamplingSpec s;
    s.nu = sampled_points;
    s.nv = sampled_points;
    return make_sampled(resonant_pair(PairFamily::gaussian, T, tau, atom, delta), s);
  }
  }
  throw UsageError("unknown family");
}

void fill_shapes(SweepFamily family, double xi, SweepRow& row) {
  if (family == SweepFamily::rectangular) {
    row.shape_two = std::pow(sinc(0.5 * xi), 2);
    row.shape_one = std::pow(sinc(xi), 2);
  } else {
    row.shape_two = std::norm(plasma_dispersion(xi));
    row.shape_one = std::exp(-2.0 * xi * xi);
  }
}

PathValues to_values(const TransitionResult& r) { return {r.P1, r.P2, r.ratio}; }

void evaluate_row(const SweepSpec& spec, SweepRow& row) {
  try {
    fill_shapes(spec.family, row.delta * row.tau, row);
    if (spec.closed_form) {
      const auto family = spec.family == SweepFamily::rectangular ? PairFamily::rectangular
                                                                  : PairFamily::gaussian;
      const auto r = closed_form(family, spec.atom, row.T, row.tau, row.delta);
      row.closed = to_values(r);
      row.flags |= r.flags;
    }
    if (spec.quadrature) {
      const auto b = build_pair(spec.family, row.T, row.tau, spec.atom, row.delta,
                                spec.sampled_points);
      const auto r =
          evaluate_pair(b, spec.atom, SpectralPath::time_domain_quadrature, spec.settings);
      row.quad = to_values(r);
      row.flags |= r.flags;
    }
  } catch (const std::exception& e) {
    row.error = e.what();
    row.flags.set(Flag::evaluation_failed);
  }
}

double primary_p2(const SweepRow& row) {
  if (row.closed)
    return row.closed->P2;
  return row.quad ? row.quad->P2 : std::nan("");
}

double primary_p1(const SweepRow& row) {
  if (row.closed)
    return row.closed->P1;
  return row.quad ? row.quad->P1 : std::nan("");
}

std::optional<double> primary_ratio(const SweepRow& row) {
  if (row.closed)
    return row.closed->ratio;
  return row.quad ? row.quad->ratio : std::nullopt;
}

// Abscissae of local minima whose value is below 1e-6 of the column maximum.
std::vector<double> located_zeros(const std::vector<SweepRow>& rows,
                                  double (*column)(const SweepRow&)) {
  double peak = 0.0;
  for (const auto& r : rows)
    if (std::isfinite(column(r)))
      peak = std::max(peak, column(r));
  std::vector<double> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double y = column(rows[i]);
    if (!std::isfinite(y) || y > 1e-6 * peak)
      continue;
    const bool left = i == 0 || !(column(rows[i - 1]) < y);
    const bool right = i + 1 == rows.size() || !(column(rows[i + 1]) < y);
    if (left && right)
      out.push_back(rows[i].x);
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out)
    throw IoError("failed writing " + path.string());
}

template <class T> void read_key(const nlohmann::json& j, const char* key, T& dst) {
  if (!j.contains(key))
    return;
  try {
    dst = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw UsageError(std::string("config key '") + key + "' has the wrong type");
  }
}

template <class T> void read_key(const nlohmann::json& j, const char* key, std::optional<T>& dst) {
  if (!j.contains(key))
    return;
  T value{};
  read_key(j, key, value);
  dst = value;
}

std::string string_key(const nlohmann::json& j, const char* key) {
  std::string value;
  read_key(j, key, value);
  return value;
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known) {
  if (!j.is_object())
    throw UsageError("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
      throw UsageError("unknown config key '" + key + "'");
}

void read_atom(const nlohmann::json& j, ThreeLevelAtom& atom) {
  read_key(j, "r1", atom.r1);
  read_key(j, "r2", atom.r2);
  read_key(j, "omega_a", atom.Omega_a);
  read_key(j, "omega_b", atom.Omega_b);
}

void read_settings(const nlohmann::json& j, QuadratureSettings& s) {
  if (!j.contains("quadrature"))
    return;
  const auto& q = j.at("quadrature");
  reject_unknown(q, {"order", "abs_tol", "rel_tol", "max_refinements"});
  read_key(q, "order", s.order);
  read_key(q, "abs_tol", s.abs_tol);
  read_key(q, "rel_tol", s.rel_tol);
  read_key(q, "max_refinements", s.max_refinements);
}

ojson settings_json(const QuadratureSettings& s) {
  return {{"order", s.order},
          {"abs_tol", s.abs_tol},
          {"rel_tol", s.rel_tol},
          {"max_refinements", s.max_refinements}};
}

ojson optional_number(std::optional<double> v) { return v ? ojson(*v) : ojson(nullptr); }

} // namespace

std::string to_string(SweepFamily f) {
  switch (f) {
  case SweepFamily::gaussian:
    return "gaussian";
  case SweepFamily::rectangular:
    return "rectangular";
  case SweepFamily::sampled:
    return "sampled";
  }
  return "unknown";
}

std::string to_string(SweepVariable v) {
  switch (v) {
  case SweepVariable::delta_tau:
    return "delta_tau";
  case SweepVariable::tau_over_T:
    return "tau_over_T";
  case SweepVariable::T:
    return "T";
  }
  return "unknown";
}

std::string to_string(Spacing s) { return s == Spacing::linear ? "linear" : "log"; }

SweepFamily parse_sweep_family(const std::string& text) {
  static const std::pair<const char*, SweepFamily> table[] = {
      {"gaussian", SweepFamily::gaussian},
      {"rectangular", SweepFamily::rectangular},
      {"sampled", SweepFamily::sampled}};
  return parse_named(text, table, "family");
}

SweepVariable parse_sweep_variable(const std::string& text) {
  static const std::pair<const char*, SweepVariable> table[] = {
      {"delta_tau", SweepVariable::delta_tau},
      {"tau_over_T", SweepVariable::tau_over_T},
      {"T", SweepVariable::T}};
  return parse_named(text, table, "sweep variable");
}

Spacing parse_spacing(const std::string& text) {
  static const std::pair<const char*, Spacing> table[] = {{"linear", Spacing::linear},
                                                          {"log", Spacing::log}};
  return parse_named(text, table, "spacing");
}

std::string format_number(double x) {
  if (std::isnan(x))
    return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void SweepRange::validate() const {
  if (count < 2)
    throw UsageError("sweep count must be at least 2");
  if (!(start < stop) || !std::isfinite(start) || !std::isfinite(stop))
    throw UsageError("sweep range needs finite start < stop");
  if (spacing == Spacing::log && !(start > 0.0))
    throw UsageError("log spacing needs start > 0");
}

std::vector<double> SweepRange::values() const {
  validate();
  std::vector<double> out(static_cast<std::size_t>(count));
  const double last = count - 1;
  for (int i = 0; i < count; ++i) {
    const double t = i / last;
    out[i] = spacing == Spacing::linear
                 ? start + (stop - start) * t
                 : std::exp(std::log(start) + (std::log(stop) - std::log(start)) * t);
  }
  out.back() = stop;
  return out;
}

void SweepSpec::validate() const {
  range.validate();
  atom.validate();
  if (!(T > 0.0) || !(tau > 0.0))
    throw UsageError("T and tau must be positive");
  if (!closed_form && !quadrature)
    throw UsageError("select at least one path");
  if (family == SweepFamily::sampled && closed_form)
    throw UsageError("the sampled family has no closed form; use the quadrature path only");
  if (variable != SweepVariable::delta_tau && range.start <= 0.0)
    throw UsageError(to_string(variable) + " sweeps need positive values");
}

SweepRow sweep_point_parameters(const SweepSpec& spec, double x) {
  SweepRow row;
  row.x = x;
  row.T = spec.T;
  row.tau = spec.tau;
  switch (spec.variable) {
  case SweepVariable::delta_tau:
    break;
  case SweepVariable::tau_over_T:
    row.tau = x * spec.T;
    break;
  case SweepVariable::T:
    row.T = x;
    break;
  }
  if (spec.variable == SweepVariable::delta_tau)
    row.delta = x / row.tau;
  else
    row.delta = spec.delta ? *spec.delta : spec.delta_tau / row.tau;
  return row;
}

std::vector<SweepRow> evaluate_sweep(const SweepSpec& spec) {
  spec.validate();
  const auto xs = spec.range.values();
  std::vector<SweepRow> rows;
  rows.reserve(xs.size());
  for (double x : xs)
    rows.push_back(sweep_point_parameters(spec, x));

  int workers = spec.workers > 0 ? spec.workers
                                 : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min<int>(workers, static_cast<int>(rows.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++)
      evaluate_row(spec, rows[i]);
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w)
    pool.emplace_back(work);
  work();
  for (auto& t : pool)
    t.join();
  return rows;
}

std::string csv_header(const SweepSpec& spec) {
  std::string h = "x";
  h += ",P1,P2,ratio";
  h += spec.family == SweepFamily::rectangular ? ",sinc_sq_half" : ",F_sq";
  h += ",envelope";
  if (spec.closed_form && spec.quadrature)
    h += ",P1_quad,P2_quad,ratio_quad";
  h += ",flags";
  return h;
}

std::string csv_line(const SweepSpec& spec, const SweepRow& row) {
  auto values = [](const std::optional<PathValues>& v) {
    if (!v)
      return std::string("nan,nan,nan");
    return format_number(v->P1) + "," + format_number(v->P2) + "," +
           format_number(v->ratio ? *v->ratio : std::nan(""));
  };
  std::string line = format_number(row.x);
  // The plain columns hold the closed form when it ran, the quadrature otherwise.
  line += "," + values(spec.closed_form ? row.closed : row.quad);
  line += "," + format_number(row.shape_two) + "," + format_number(row.shape_one);
  if (spec.closed_form && spec.quadrature)
    line += "," + values(row.quad);
  line += "," + row.flags.joined();
  return line;
}

ojson sweep_summary(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  ojson s;
  s["family"] = to_string(spec.family);
  s["variable"] = to_string(spec.variable);
  s["range"] = {{"start", spec.range.start},
                {"stop", spec.range.stop},
                {"count", spec.range.count},
                {"spacing", to_string(spec.range.spacing)}};
  ojson paths = ojson::array();
  if (spec.closed_form)
    paths.push_back("closed-form");
  if (spec.quadrature)
    paths.push_back("time-domain-quadrature");
  s["paths"] = paths;
  ojson fixed = {{"T", spec.T}, {"tau", spec.tau}};
  if (spec.variable != SweepVariable::delta_tau) {
    if (spec.delta)
      fixed["delta"] = *spec.delta;
    else
      fixed["delta_tau"] = spec.delta_tau;
  }
  fixed["r1"] = spec.atom.r1;
  fixed["r2"] = spec.atom.r2;
  fixed["omega_a"] = spec.atom.Omega_a;
  fixed["omega_b"] = spec.atom.Omega_b;
  if (spec.family == SweepFamily::sampled)
    fixed["sampled_points"] = spec.sampled_points;
  s["fixed"] = fixed;
  if (spec.quadrature)
    s["quadrature"] = settings_json(spec.settings);
  s["rows"] = rows.size();

  s["zeros"] = {{"P2", located_zeros(rows, primary_p2)}, {"P1", located_zeros(rows, primary_p1)}};

  ojson best = nullptr;
  double best_ratio = -1.0;
  for (const auto& r : rows) {
    const auto ratio = primary_ratio(r);
    if (ratio && *ratio > best_ratio) {
      best_ratio = *ratio;
      best = {{"x", r.x}, {"ratio", *ratio}};
    }
  }
  s["max_ratio"] = best;

  ojson failures = ojson::array();
  for (const auto& r : rows)
    if (!r.error.empty())
      failures.push_back({{"x", r.x}, {"error", r.error}});
  s["failures"] = failures;
  return s;
}

std::filesystem::path resolve_output(const std::filesystem::path& path) {
  if (path.is_absolute())
    return path;
  if (const char* dir = std::getenv("TPA_OUTPUT_DIR"); dir != nullptr && *dir != '\0')
    return std::filesystem::path(dir) / path;
  return path;
}

SweepOutputs run_sweep(const SweepSpec& spec) {
  SweepOutputs out;
  out.rows = evaluate_sweep(spec);
  out.csv = spec.output;
  out.summary = out.csv;
  out.summary.replace_extension(".summary.json");

  std::string text = csv_header(spec) + "\n";
  for (const auto& row : out.rows)
    text += csv_line(spec, row) + "\n";
  write_text(out.csv, text);
  write_text(out.summary, sweep_summary(spec, out.rows).dump(2) + "\n");
  return out;
}

void PointSpec::validate() const {
  std::vector<std::string> missing;
  if (!family)
    missing.push_back("family");
  if (!T)
    missing.push_back("T");
  if (!tau)
    missing.push_back("tau");
  if (!delta_tau && !delta)
    missing.push_back("delta_tau (or delta)");
  if (!missing.empty()) {
    std::string msg = "incomplete point parameters; missing:";
    for (const auto& m : missing)
      msg += " " + m;
    throw UsageError(msg);
  }
  if (delta_tau && delta)
    throw UsageError("give delta_tau or delta, not both");
  atom.validate();
  if (*family == SweepFamily::sampled && path == SpectralPath::closed_form)
    throw UsageError("the sampled family has no closed form; use --path quadrature");
  if (*family == SweepFamily::sampled && path == SpectralPath::kernel_convolution)
    throw UsageError("the kernel path needs a closed-form joint spectrum");
}

ojson run_point(const PointSpec& spec) {
  spec.validate();
  const double T = *spec.T;
  const double tau = *spec.tau;
  const double delta = spec.delta ? *spec.delta : *spec.delta_tau / tau;
  const auto b = build_pair(*spec.family, T, tau, spec.atom, delta, spec.sampled_points);
  const auto r = evaluate_pair(b, spec.atom, spec.path, spec.settings);

  ojson j;
  j["family"] = to_string(*spec.family);
  ojson inputs = {{"T", T}, {"tau", tau}, {"delta", delta}, {"delta_tau", delta * tau}};
  inputs["r1"] = spec.atom.r1;
  inputs["r2"] = spec.atom.r2;
  inputs["omega_a"] = spec.atom.Omega_a;
  inputs["omega_b"] = spec.atom.Omega_b;
  inputs["omega1_bar"] = b.omega1_bar();
  inputs["omega2_bar"] = b.omega2_bar();
  if (*spec.family == SweepFamily::sampled)
    inputs["sampled_points"] = spec.sampled_points;
  j["inputs"] = inputs;
  j["P1"] = r.P1;
  j["P2"] = r.P2;
  j["ratio"] = optional_number(r.ratio);
  j["delta"] = r.delta;
  j["flags"] = r.flags.names();

  ojson prov;
  prov["p2_path"] = to_string(spec.path);
  prov["p1_method"] = spec.path == SpectralPath::closed_form ? "closed-form (T >> tau limit)"
                                                             : "quadrature";
  if (spec.path != SpectralPath::closed_form)
    prov["quadrature"] = settings_json(spec.settings);
  if (const auto* g = b.grid())
    prov["grid_truncation_error"] = g->truncation_error;
  j["provenance"] = prov;
  return j;
}

nlohmann::json load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw UsageError("cannot read config " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config " + path.string() + " is not valid JSON: " + e.what());
  }
}

void apply_config(const nlohmann::json& j, SweepSpec& spec) {
  reject_unknown(j, {"family", "variable", "start", "stop", "count", "spacing", "T", "tau",
                     "delta_tau", "delta", "r1", "r2", "omega_a", "omega_b", "paths",
                     "sampled_points", "quadrature", "workers", "out"});
  if (j.contains("family"))
    spec.family = parse_sweep_family(string_key(j, "family"));
  if (j.contains("variable"))
    spec.variable = parse_sweep_variable(string_key(j, "variable"));
  if (j.contains("spacing"))
    spec.range.spacing = parse_spacing(string_key(j, "spacing"));
  read_key(j, "start", spec.range.start);
  read_key(j, "stop", spec.range.stop);
  read_key(j, "count", spec.range.count);
  read_key(j, "T", spec.T);
  read_key(j, "tau", spec.tau);
  read_key(j, "delta_tau", spec.delta_tau);
  read_key(j, "delta", spec.delta);
  read_atom(j, spec.atom);
  read_key(j, "sampled_points", spec.sampled_points);
  read_key(j, "workers", spec.workers);
  read_settings(j, spec.settings);
  if (j.contains("out"))
    spec.output = string_key(j, "out");
  if (j.contains("paths")) {
    std::vector<std::string> paths;
    read_key(j, "paths", paths);
    spec.closed_form = false;
    spec.quadrature = false;
    for (const auto& p : paths) {
      const auto path = parse_spectral_path(p);
      if (path == SpectralPath::closed_form)
        spec.closed_form = true;
      else if (path == SpectralPath::time_domain_quadrature)
        spec.quadrature = true;
      else
        throw UsageError("sweeps support the closed-form and quadrature paths only");
    }
  }
}

void apply_config(const nlohmann::json& j, PointSpec& spec) {
  reject_unknown(j, {"family", "T", "tau", "delta_tau", "delta", "r1", "r2", "omega_a",
                     "omega_b", "path", "sampled_points", "quadrature"});
  if (j.contains("family"))
    spec.family = parse_sweep_family(string_key(j, "family"));
  read_key(j, "T", spec.T);
  read_key(j, "tau", spec.tau);
  read_key(j, "delta_tau", spec.delta_tau);
  read_key(j, "delta", spec.delta);
  read_atom(j, spec.atom);
  read_key(j, "sampled_points", spec.sampled_points);
  read_settings(j, spec.settings);
  if (j.contains("path"))
    spec.path = parse_spectral_path(string_key(j, "path"));
}

std::vector<std::filesystem::path> write_figures(const std::filesystem::path& directory,
                                                 int workers) {
  std::vector<std::filesystem::path> out;
  auto emit = [&](SweepSpec spec, const char* name) {
    spec.workers = workers;
    spec.output = directory / name;
    out.push_back(run_sweep(spec).csv);
  };

  SweepSpec a;
  a.family = SweepFamily::gaussian;
  a.range = {0.0, 3.0, 301, Spacing::linear};
  emit(a, "fig4a_gaussian.csv");

  SweepSpec b;
  b.family = SweepFamily::rectangular;
  b.range = {0.0, 4.0 * kPi, 401, Spacing::linear};
  emit(b, "fig4b_rectangular.csv");

  SweepSpec c;
  c.family = SweepFamily::rectangular;
  c.range = {0.0, 6.0 * kPi, 121, Spacing::linear};
  c.quadrature = true;
  emit(c, "transparency_delta_tau.csv");

  SweepSpec d;
  d.family = SweepFamily::rectangular;
  d.variable = SweepVariable::tau_over_T;
  d.range = {0.001, 0.05, 491, Spacing::linear};
  d.delta = 200.0 * kPi;
  emit(d, "transparency_tau.csv");
  return out;
}

} // namespace tpa
