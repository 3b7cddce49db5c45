#include <cmath>
#include <fstream>
#include <initializer_list>
#include <string>

#include <fmt/format.h>

#include "holosep/cli.hpp"
#include "holosep/errors.hpp"
#include "holosep/random.hpp"

namespace holosep::cli {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const char* what) {
  if (!obj.is_object()) throw ConfigError(fmt::format("{} must be a JSON object", what));
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || item.key() == a;
    if (!known) throw ConfigError(fmt::format("unknown key '{}' in {}", item.key(), what));
  }
}

const json& require(const json& obj, const char* key, const char* what) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(fmt::format("{} is missing '{}'", what, key));
  return *it;
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError(fmt::format("{} must be a number", what));
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(fmt::format("{} must be finite", what));
  return v;
}

std::uint64_t unsigned_integer(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
    throw ConfigError(fmt::format("{} must be a non-negative integer", what));
  }
  return j.get<std::uint64_t>();
}

Complex complex_value(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(fmt::format("{} must be [re, im]", what));
  return {number(j[0], what), number(j[1], what)};
}

// Exactly one key of `obj` from `options`.
std::string pick_variant(const json& obj, std::initializer_list<std::string_view> options,
                         const char* what) {
  check_keys(obj, options, what);
  if (obj.size() != 1) {
    throw ConfigError(fmt::format("{} must contain exactly one descriptor", what));
  }
  return obj.begin().key();
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read '{}'", path.string()));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("'{}' is not valid JSON: {}", path.string(), e.what()));
  }
}

struct MatrixList {
  TimeGrid grid;
  std::vector<ComplexMatrix> matrices;
};

MatrixList read_matrix_list(const std::filesystem::path& path, bool square) {
  const json j = read_json_file(path);
  check_keys(j, {"dimension", "columns", "times", "matrices"}, "matrix list file");
  const auto n = static_cast<Index>(unsigned_integer(require(j, "dimension", "matrix list file"), "dimension"));
  Index m = n;
  if (j.contains("columns")) m = static_cast<Index>(unsigned_integer(j["columns"], "columns"));
  if (square && m != n) throw ConfigError("Hamiltonian samples must be square");
  const json& times_json = require(j, "times", "matrix list file");
  const json& mats_json = require(j, "matrices", "matrix list file");
  if (!times_json.is_array() || !mats_json.is_array()) {
    throw ConfigError("'times' and 'matrices' must be arrays");
  }
  std::vector<double> times;
  for (const auto& t : times_json) times.push_back(number(t, "time"));
  std::vector<ComplexMatrix> mats;
  for (const auto& mj : mats_json) mats.push_back(matrix_from_json(mj, "matrix list entry", n, m));
  if (mats.size() != times.size()) {
    throw ConfigError(fmt::format("{} matrices for {} times", mats.size(), times.size()));
  }
  try {
    return {TimeGrid(std::move(times)), std::move(mats)};
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
}

lambda::LambdaParams parse_lambda(const json& j, double tau) {
  check_keys(j, {"omega0", "delta", "omega1", "omega2", "eta"}, "lambda system");
  lambda::LambdaParams p;
  p.omega0 = number(require(j, "omega0", "lambda system"), "omega0");
  p.delta = number(require(j, "delta", "lambda system"), "delta");
  if (j.contains("omega1")) p.omega1 = complex_value(j["omega1"], "omega1");
  if (j.contains("omega2")) p.omega2 = complex_value(j["omega2"], "omega2");
  if (j.contains("eta")) p.eta = number(j["eta"], "eta");
  p.tau = tau;
  return p;
}

lambda::Case case_from_json(const json& j) {
  if (!j.is_string()) throw ConfigError("lambda_case must be one of \"i\", \"ii\", \"iii\"");
  return parse_case(j.get<std::string>());
}

}  // namespace

lambda::Case parse_case(std::string_view name) {
  if (name == "i") return lambda::Case::i;
  if (name == "ii") return lambda::Case::ii;
  if (name == "iii") return lambda::Case::iii;
  throw ConfigError(fmt::format("unknown case '{}' (expected i, ii or iii)", name));
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j, const char* what, Index rows, Index cols) {
  if (!j.is_array() || j.empty()) throw ConfigError(fmt::format("{} must be a non-empty array", what));
  const bool flat = j[0].is_array() && !j[0].empty() && j[0][0].is_number();
  ComplexMatrix m;
  if (flat) {
    if (rows < 0 || cols < 0) {
      throw ConfigError(fmt::format("{}: flat matrix layout needs known dimensions", what));
    }
    if (static_cast<Index>(j.size()) != rows * cols) {
      throw ConfigError(fmt::format("{}: expected {} entries, got {}", what, rows * cols, j.size()));
    }
    m.resize(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      for (Index c = 0; c < cols; ++c) {
        m(i, c) = complex_value(j[static_cast<std::size_t>(i * cols + c)], what);
      }
    }
  } else {
    const auto r = static_cast<Index>(j.size());
    if (!j[0].is_array()) throw ConfigError(fmt::format("{}: rows must be arrays", what));
    const auto c = static_cast<Index>(j[0].size());
    m.resize(r, c);
    for (Index i = 0; i < r; ++i) {
      const json& row = j[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Index>(row.size()) != c) {
        throw ConfigError(fmt::format("{}: ragged rows", what));
      }
      for (Index k = 0; k < c; ++k) m(i, k) = complex_value(row[static_cast<std::size_t>(k)], what);
    }
    if ((rows >= 0 && r != rows) || (cols >= 0 && c != cols)) {
      throw ConfigError(fmt::format("{}: expected {}x{}, got {}x{}", what, rows, cols, r, c));
    }
  }
  if (!matkit::all_finite(m)) throw ConfigError(fmt::format("{} has non-finite entries", what));
  return m;
}

HamiltonianSpec load_sampled_hamiltonian(const std::filesystem::path& path, const Tolerances& tol) {
  MatrixList list = read_matrix_list(path, true);
  try {
    return HamiltonianSpec::sampled(std::move(list.grid), std::move(list.matrices), tol);
  } catch (const PreconditionError& e) {
    throw ConfigError(fmt::format("'{}': {}", path.string(), e.what()));
  }
}

FramePath load_frame_path(const std::filesystem::path& path, const Tolerances& tol) {
  MatrixList list = read_matrix_list(path, false);
  try {
    return FramePath(std::move(list.grid), std::move(list.matrices), tol);
  } catch (const PreconditionError& e) {
    throw ConfigError(fmt::format("'{}': {}", path.string(), e.what()));
  }
}

RunConfig parse_config(const json& j, const std::filesystem::path& base_dir,
                       const Overrides& overrides) {
  check_keys(j, {"system", "subspace", "section", "grid", "tolerances", "seed"}, "config");

  Tolerances tol;
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    check_keys(t, {"structure_tol", "positivity_tol", "separation_tol"}, "tolerances");
    if (t.contains("structure_tol")) tol.structure_tol = number(t["structure_tol"], "structure_tol");
    if (t.contains("positivity_tol")) tol.positivity_tol = number(t["positivity_tol"], "positivity_tol");
    if (t.contains("separation_tol")) tol.separation_tol = number(t["separation_tol"], "separation_tol");
    try {
      tol.validate();
    } catch (const PreconditionError& e) {
      throw ConfigError(e.what());
    }
  }

  const json& grid_json = require(j, "grid", "config");
  check_keys(grid_json, {"tau", "steps"}, "grid");
  double tau = number(require(grid_json, "tau", "grid"), "grid.tau");
  std::size_t steps = kDefaultSteps;
  if (grid_json.contains("steps")) steps = unsigned_integer(grid_json["steps"], "grid.steps");
  if (overrides.tau) tau = *overrides.tau;
  if (overrides.steps) steps = *overrides.steps;
  if (!(tau > 0.0)) throw ConfigError("grid.tau must be positive");
  if (steps < 2) throw ConfigError("grid.steps must be at least 2");

  std::optional<std::uint64_t> seed;
  if (j.contains("seed")) seed = unsigned_integer(j["seed"], "seed");
  if (overrides.seed) seed = overrides.seed;
  random::Engine rng(seed.value_or(0));

  // System.
  const json& system_json = require(j, "system", "config");
  const std::string system_kind = pick_variant(
      system_json, {"lambda", "sampled", "constant", "driven", "random_driven"}, "system");
  const json& sj = system_json[system_kind];
  std::optional<lambda::LambdaParams> lambda_params;
  std::optional<HamiltonianSpec> spec;
  try {
    if (system_kind == "lambda") {
      lambda_params = parse_lambda(sj, tau);
      spec = lambda::lambda_spec(*lambda_params, tol);
    } else if (system_kind == "sampled") {
      if (!sj.is_string()) throw ConfigError("system.sampled must be a file path");
      spec = load_sampled_hamiltonian(base_dir / sj.get<std::string>(), tol);
    } else if (system_kind == "constant") {
      spec = HamiltonianSpec::constant(matrix_from_json(sj, "system.constant"), tol);
    } else if (system_kind == "driven") {
      check_keys(sj, {"h0", "h1", "frequency"}, "system.driven");
      const double freq = sj.contains("frequency") ? number(sj["frequency"], "frequency") : 1.0;
      spec = HamiltonianSpec::driven(matrix_from_json(require(sj, "h0", "system.driven"), "h0"),
                                     matrix_from_json(require(sj, "h1", "system.driven"), "h1"),
                                     freq, tol);
    } else {
      check_keys(sj, {"dimension", "scale0", "scale1", "frequency"}, "system.random_driven");
      const auto n = static_cast<Index>(
          unsigned_integer(require(sj, "dimension", "system.random_driven"), "dimension"));
      if (n < 2) throw ConfigError("system.random_driven.dimension must be at least 2");
      const double scale0 = sj.contains("scale0") ? number(sj["scale0"], "scale0") : 1.0;
      const double scale1 = sj.contains("scale1") ? number(sj["scale1"], "scale1") : 1.0;
      const double freq = sj.contains("frequency") ? number(sj["frequency"], "frequency") : 1.0;
      ComplexMatrix h0 = random::hermitian(n, rng, scale0);
      ComplexMatrix h1 = random::hermitian(n, rng, scale1);
      spec = HamiltonianSpec::driven(std::move(h0), std::move(h1), freq, tol);
    }
  } catch (const PreconditionError& e) {
    throw ConfigError(fmt::format("system: {}", e.what()));
  }
  const Index n = spec->dimension();

  // Initial frame.
  const json& subspace_json = require(j, "subspace", "config");
  const std::string subspace_kind =
      pick_variant(subspace_json, {"lambda_case", "matrix", "random"}, "subspace");
  ComplexMatrix psi0;
  std::optional<lambda::Case> lambda_case;
  std::optional<SectionRule> case_rule;
  if (subspace_kind == "lambda_case") {
    if (!lambda_params) throw ConfigError("subspace.lambda_case requires a lambda system");
    lambda_case = case_from_json(subspace_json["lambda_case"]);
    try {
      auto setup = lambda::case_setup(*lambda_case, *lambda_params, tol);
      psi0 = setup.psi0;
      case_rule = setup.rule;
    } catch (const PreconditionError& e) {
      throw ConfigError(fmt::format("subspace: {}", e.what()));
    }
  } else if (subspace_kind == "matrix") {
    psi0 = matrix_from_json(subspace_json["matrix"], "subspace.matrix");
  } else {
    const json& rj = subspace_json["random"];
    check_keys(rj, {"columns"}, "subspace.random");
    const auto m = static_cast<Index>(unsigned_integer(require(rj, "columns", "subspace.random"), "columns"));
    if (m < 1 || m > n) throw ConfigError("subspace.random.columns must lie in [1, dimension]");
    psi0 = random::frame(n, m, rng);
  }
  if (psi0.rows() != n) {
    throw ConfigError(fmt::format("initial frame has {} rows but the system dimension is {}",
                                  psi0.rows(), n));
  }
  if (!(matkit::isometry_defect(psi0) <= 10.0 * tol.structure_tol)) {
    throw ConfigError("initial frame columns are not orthonormal");
  }

  // Section rule.
  const json& section_json = require(j, "section", "config");
  SectionRule rule = PhaseAnchoredSection{};
  if (section_json.is_string()) {
    const std::string s = section_json.get<std::string>();
    if (s == "fixed") {
      rule = FixedSection{psi0};
    } else if (s == "phase_anchored") {
      rule = PhaseAnchoredSection{};
    } else if (s == "auto") {
      if (!case_rule) throw ConfigError("section \"auto\" requires subspace.lambda_case");
      rule = *case_rule;
    } else {
      throw ConfigError(fmt::format("unknown section rule '{}'", s));
    }
  } else {
    const std::string kind = pick_variant(section_json, {"fixed", "custom"}, "section");
    if (kind == "fixed") {
      rule = FixedSection{matrix_from_json(section_json["fixed"], "section.fixed", n, psi0.cols())};
    } else {
      if (!section_json["custom"].is_string()) throw ConfigError("section.custom must be a file path");
      rule = CustomSection{load_frame_path(base_dir / section_json["custom"].get<std::string>(), tol)};
    }
  }

  RunConfig config{std::move(*spec), std::move(psi0), std::move(rule), tau, steps, tol, seed,
                   lambda_params};
  return config;
}

RunConfig load_config(const std::filesystem::path& path, const Overrides& overrides) {
  const json j = read_json_file(path);
  return parse_config(j, path.parent_path(), overrides);
}

PipelineResult run_pipeline(const RunConfig& config) {
  const TimeGrid grid = config.grid();
  FramePath schrodinger = propagate_frame(config.system, config.initial_frame, grid, config.tolerances);
  SectionPath section = build_section(config.section, schrodinger, config.system, config.tolerances);
  return {std::move(schrodinger), std::move(section)};
}

}  // namespace holosep::cli
