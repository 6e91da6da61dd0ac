#include "tpa/errors.hpp"
#include "tpa/wavefunctions.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace tpa {

namespace {

constexpr const char* kFormat = "tpa-sampled-biphoton";
constexpr int kVersion = 1;

nlohmann::ordered_json axis_to_json(const GridAxis& a) {
  return {{"first", a.first}, {"step", a.step}, {"count", a.count}};
}

GridAxis axis_from_json(const nlohmann::json& j) {
  return GridAxis{j.at("first").get<double>(), j.at("step").get<double>(),
                  j.at("count").get<std::size_t>()};
}

} // namespace

void save_sampled(const Biphoton& b, const std::filesystem::path& path) {
  const auto* g = b.grid();
  if (g == nullptr)
    throw UsageError("save_sampled: biphoton is not a sampled grid");

  std::vector<double> interleaved;
  interleaved.reserve(2 * g->samples().size());
  for (const auto& s : g->samples()) {
    interleaved.push_back(s.real());
    interleaved.push_back(s.imag());
  }
  nlohmann::ordered_json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["coordinates"] = "u=t1+t2, v=t1-t2, cell-centred, v fastest";
  j["T"] = b.coherence_time();
  j["tau"] = b.correlation_time();
  j["omega1_bar"] = b.omega1_bar();
  j["omega2_bar"] = b.omega2_bar();
  j["truncation_error"] = g->truncation_error;
  j["u"] = axis_to_json(g->u_axis());
  j["v"] = axis_to_json(g->v_axis());
  j["samples"] = interleaved;

  std::ofstream out(path);
  if (!out)
    throw IoError("cannot open " + path.string() + " for writing");
  out << j.dump() << '\n';
  if (!out)
    throw IoError("failed writing " + path.string());
}

Biphoton load_sampled(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": malformed JSON: " + e.what());
  }

  try {
    if (j.at("format").get<std::string>() != kFormat)
      throw IoError(path.string() + ": not a " + std::string(kFormat) + " file");
    if (j.at("version").get<int>() != kVersion)
      throw IoError(path.string() + ": unsupported version");
    const auto u = axis_from_json(j.at("u"));
    const auto v = axis_from_json(j.at("v"));
    const auto raw = j.at("samples").get<std::vector<double>>();
    if (raw.size() != 2 * u.count * v.count)
      throw IoError(path.string() + ": expected " + std::to_string(2 * u.count * v.count) +
                    " interleaved values, found " + std::to_string(raw.size()));
    std::vector<cplx> samples(u.count * v.count);
    for (std::size_t i = 0; i < samples.size(); ++i)
      samples[i] = {raw[2 * i], raw[2 * i + 1]};

    SampledGrid grid(u, v, std::move(samples));
    grid.truncation_error = j.value("truncation_error", 0.0);
    const double residual = std::abs(grid.norm() - 1.0);
    if (residual > 1e-6) {
      std::ostringstream msg;
      msg << path.string() << ": grid norm is off by " << residual << " (limit 1e-6)";
      throw DomainError(msg.str());
    }
    return Biphoton::sampled(std::move(grid), j.at("T").get<double>(), j.at("tau").get<double>(),
                             j.at("omega1_bar").get<double>(), j.at("omega2_bar").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

} // namespace tpa
