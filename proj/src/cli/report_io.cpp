#include <string>

#include <fmt/format.h>

#include "holosep/cli.hpp"
#include "holosep/errors.hpp"

namespace holosep::cli {

using nlohmann::json;

json report_to_json(const DecompositionReport& r) {
  json j;
  j["overlap"] = matrix_to_json(r.overlap);
  j["w_final"] = matrix_to_json(r.w_final);
  j["w_direct"] = matrix_to_json(r.w_direct);
  j["holonomic_factor"] = matrix_to_json(r.holonomic_factor);
  j["dynamical_factor"] = matrix_to_json(r.dynamical_factor);
  j["g_factor"] = matrix_to_json(r.g_factor);
  j["d_factor"] = matrix_to_json(r.d_factor);
  j["max_commutator"] = r.max_commutator;
  j["separation_residual"] = r.separation_residual;
  j["product_residual"] = r.product_residual;
  j["classification"] = std::string(to_string(r.classification));
  j["time_evolution"] = matrix_to_json(r.time_evolution);
  j["in_phase_margin"] = r.in_phase_margin;
  j["grid"] = {{"tau", r.tau}, {"steps", r.steps}};
  return j;
}

DecompositionReport report_from_json(const json& j) {
  static constexpr std::string_view keys[] = {
      "overlap",          "w_final",        "w_direct",         "holonomic_factor",
      "dynamical_factor", "g_factor",       "d_factor",         "max_commutator",
      "separation_residual", "product_residual", "classification", "time_evolution",
      "in_phase_margin",  "grid"};
  if (!j.is_object()) throw ConfigError("report must be a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (auto k : keys) known = known || item.key() == k;
    if (!known) throw ConfigError(fmt::format("unknown report key '{}'", item.key()));
  }
  for (auto k : keys) {
    if (!j.contains(std::string(k))) throw ConfigError(fmt::format("report is missing '{}'", k));
  }
  auto real = [&](const char* key) {
    if (!j[key].is_number()) throw ConfigError(fmt::format("report '{}' must be a number", key));
    return j[key].get<double>();
  };
  DecompositionReport r;
  r.overlap = matrix_from_json(j["overlap"], "overlap");
  r.w_final = matrix_from_json(j["w_final"], "w_final");
  r.w_direct = matrix_from_json(j["w_direct"], "w_direct");
  r.holonomic_factor = matrix_from_json(j["holonomic_factor"], "holonomic_factor");
  r.dynamical_factor = matrix_from_json(j["dynamical_factor"], "dynamical_factor");
  r.g_factor = matrix_from_json(j["g_factor"], "g_factor");
  r.d_factor = matrix_from_json(j["d_factor"], "d_factor");
  r.max_commutator = real("max_commutator");
  r.separation_residual = real("separation_residual");
  r.product_residual = real("product_residual");
  if (!j["classification"].is_string()) throw ConfigError("report classification must be a string");
  try {
    r.classification = classification_from_string(j["classification"].get<std::string>());
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  r.time_evolution = matrix_from_json(j["time_evolution"], "time_evolution");
  r.in_phase_margin = real("in_phase_margin");
  const json& grid = j["grid"];
  if (!grid.is_object() || !grid.contains("tau") || !grid.contains("steps") || grid.size() != 2 ||
      !grid["tau"].is_number() || !grid["steps"].is_number_unsigned()) {
    throw ConfigError("report grid must be {\"tau\": number, \"steps\": integer}");
  }
  r.tau = grid["tau"].get<double>();
  r.steps = grid["steps"].get<std::size_t>();
  return r;
}

}  // namespace holosep::cli
