#include "slabtest/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <span>
#include <sstream>

#include "json.hpp"
#include "slabtest/error.hpp"

namespace slabtest {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 10> kCellKeys{
    "n", "s", "mu", "scenario", "prior", "procedures", "reps", "seed", "w_policy", "w"};
constexpr std::array<std::string_view, 3> kProcedureKeys{"id", "t", "L"};

bool contains(std::span<const std::string_view> keys, std::string_view key) {
  for (auto k : keys) {
    if (k == key) return true;
  }
  return false;
}

[[noreturn]] void fail(ConfigErrorCode code, const std::string& field,
                       const std::string& msg) {
  throw ConfigError(code, field, field.empty() ? msg : field + ": " + msg);
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

double get_real(const json& v, const std::string& field) {
  if (!v.is_number()) fail(ConfigErrorCode::wrong_type, field, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(ConfigErrorCode::invalid_value, field, "must be finite");
  return d;
}

std::uint64_t get_count(const json& v, const std::string& field) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    fail(ConfigErrorCode::invalid_value, field, "must be nonnegative");
  }
  // Accept whole floating values such as 1e7.
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0.0 && d < 0x1.0p64 && std::floor(d) == d) {
      return static_cast<std::uint64_t>(d);
    }
    fail(ConfigErrorCode::invalid_value, field, "must be a nonnegative integer");
  }
  fail(ConfigErrorCode::wrong_type, field, "expected a nonnegative integer");
}

std::string get_string(const json& v, const std::string& field) {
  if (!v.is_string()) fail(ConfigErrorCode::wrong_type, field, "expected a string");
  return v.get<std::string>();
}

void check_keys(const json& obj, std::span<const std::string_view> allowed,
                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!contains(allowed, key)) {
      fail(ConfigErrorCode::unknown_key, where.empty() ? key : where + "." + key,
           "unknown key '" + key + "'");
    }
  }
}

ProcedureSpec parse_procedure(const json& v, const std::string& field) {
  if (!v.is_object()) fail(ConfigErrorCode::wrong_type, field, "expected an object");
  check_keys(v, kProcedureKeys, field);
  if (!v.contains("id")) fail(ConfigErrorCode::invalid_value, field + ".id", "missing");
  if (!v.contains("t")) fail(ConfigErrorCode::invalid_value, field + ".t", "missing");

  ProcedureSpec spec;
  const std::string id = get_string(v["id"], field + ".id");
  try {
    spec.id = parse_procedure_id(id);
  } catch (const DomainError&) {
    fail(ConfigErrorCode::unknown_procedure, field + ".id",
         "unknown procedure '" + id + "'; known procedures: " + join(known_procedures()));
  }
  spec.t = get_real(v["t"], field + ".t");
  const double t_max = spec.id == ProcedureId::mci ? 0.5 : 1.0;
  if (!(spec.t > 0.0 && spec.t < t_max)) {
    std::ostringstream msg;
    msg << "level " << spec.t << " outside (0, " << t_max << ")";
    fail(ConfigErrorCode::level_out_of_range, field + ".t", msg.str());
  }
  if (v.contains("L")) {
    const double L = get_real(v["L"], field + ".L");
    if (!(L > 0.0)) fail(ConfigErrorCode::invalid_value, field + ".L", "must be positive");
    spec.L = L;
  }
  return spec;
}

// Applies the cell keys present in obj on top of cell.
void apply_cell_keys(const json& obj, SimulationCell& cell, const std::string& where) {
  const auto field = [&](const char* key) {
    return where.empty() ? std::string(key) : where + "." + key;
  };
  if (obj.contains("n")) cell.n = get_count(obj["n"], field("n"));
  if (obj.contains("s")) cell.s = get_count(obj["s"], field("s"));
  if (obj.contains("mu")) cell.mu = get_real(obj["mu"], field("mu"));
  if (obj.contains("reps")) cell.reps = get_count(obj["reps"], field("reps"));
  if (obj.contains("seed")) cell.seed = get_count(obj["seed"], field("seed"));
  if (obj.contains("w")) cell.w = get_real(obj["w"], field("w"));
  if (obj.contains("scenario")) {
    const std::string name = get_string(obj["scenario"], field("scenario"));
    try {
      cell.scenario = parse_scenario(name);
    } catch (const DomainError& e) {
      fail(ConfigErrorCode::invalid_value, field("scenario"), e.what());
    }
  }
  if (obj.contains("w_policy")) {
    const std::string name = get_string(obj["w_policy"], field("w_policy"));
    try {
      cell.w_policy = parse_weight_policy(name);
    } catch (const DomainError& e) {
      fail(ConfigErrorCode::invalid_value, field("w_policy"), e.what());
    }
  }
  if (obj.contains("prior")) {
    cell.prior = get_string(obj["prior"], field("prior"));
    try {
      cell.prior = make_prior(cell.prior)->id();
    } catch (const DomainError&) {
      fail(ConfigErrorCode::unknown_prior, field("prior"),
           "unknown prior '" + cell.prior + "'; known priors: " + join(known_priors()));
    }
  }
  if (obj.contains("procedures")) {
    const json& list = obj["procedures"];
    if (!list.is_array()) {
      fail(ConfigErrorCode::wrong_type, field("procedures"), "expected an array");
    }
    cell.procedures.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      cell.procedures.push_back(
          parse_procedure(list[i], field("procedures") + "[" + std::to_string(i) + "]"));
    }
  }
}

void check_cell(const SimulationCell& cell, const std::string& where) {
  if (cell.s > cell.n) {
    fail(ConfigErrorCode::sparsity_exceeds_n, where.empty() ? "s" : where + ".s",
         "s=" + std::to_string(cell.s) + " exceeds n=" + std::to_string(cell.n));
  }
  try {
    validate(cell);
  } catch (const DomainError& e) {
    fail(ConfigErrorCode::invalid_value, where, e.what());
  }
}

}  // namespace

std::string_view to_string(ConfigErrorCode code) {
  switch (code) {
    case ConfigErrorCode::malformed_json: return "malformed-json";
    case ConfigErrorCode::unknown_key: return "unknown-key";
    case ConfigErrorCode::wrong_type: return "wrong-type";
    case ConfigErrorCode::unknown_procedure: return "unknown-procedure";
    case ConfigErrorCode::unknown_prior: return "unknown-prior";
    case ConfigErrorCode::level_out_of_range: return "level-out-of-range";
    case ConfigErrorCode::sparsity_exceeds_n: return "sparsity-exceeds-n";
    case ConfigErrorCode::invalid_value: return "invalid-value";
  }
  return "unknown";
}

SimulationConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail(ConfigErrorCode::malformed_json, "", std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) {
    fail(ConfigErrorCode::wrong_type, "", "configuration must be a JSON object");
  }
  for (const auto& [key, value] : root.items()) {
    if (key != "workers" && key != "cells" && !contains(kCellKeys, key)) {
      fail(ConfigErrorCode::unknown_key, key, "unknown key '" + key + "'");
    }
  }

  SimulationConfig config;
  if (root.contains("workers")) {
    config.workers = get_count(root["workers"], "workers");
    if (config.workers == 0) {
      fail(ConfigErrorCode::invalid_value, "workers", "must be at least 1");
    }
  }
  if (root.contains("seed")) config.seed = get_count(root["seed"], "seed");

  SimulationCell defaults;
  defaults.seed = config.seed;
  apply_cell_keys(root, defaults, "");

  if (!root.contains("cells")) {
    check_cell(defaults, "");
    config.cells.push_back(defaults);
    return config;
  }
  const json& cells = root["cells"];
  if (!cells.is_array()) fail(ConfigErrorCode::wrong_type, "cells", "expected an array");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string where = "cells[" + std::to_string(i) + "]";
    if (!cells[i].is_object()) {
      fail(ConfigErrorCode::wrong_type, where, "expected an object");
    }
    check_keys(cells[i], kCellKeys, where);
    SimulationCell cell = defaults;
    apply_cell_keys(cells[i], cell, where);
    check_cell(cell, where);
    config.cells.push_back(std::move(cell));
  }
  return config;
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open configuration file " + path.string(), path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read configuration file " + path.string(), path.string());
  return parse_config(buf.str());
}

}  // namespace slabtest
