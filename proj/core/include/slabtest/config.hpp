#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "slabtest/simulation.hpp"

namespace slabtest {

enum class ConfigErrorCode {
  malformed_json,
  unknown_key,
  wrong_type,
  unknown_procedure,
  unknown_prior,
  level_out_of_range,
  sparsity_exceeds_n,
  invalid_value,
};

std::string_view to_string(ConfigErrorCode code);

/// Rejected configuration; names the offending field, e.g. "cells[1].procedures[0].t".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(ConfigErrorCode code, std::string field, const std::string& what)
      : std::runtime_error(what), code_(code), field_(std::move(field)) {}

  ConfigErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ConfigErrorCode code_;
  std::string field_;
};

/// A validated simulate configuration.
struct SimulationConfig {
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  std::vector<SimulationCell> cells;
};

/// Parses a JSON simulate configuration.
///
/// The top-level object may hold "workers", "seed" and "cells". Any cell key
/// at top level ("n", "s", "mu", "scenario", "prior", "procedures", "reps",
/// "seed", "w_policy", "w") acts as a default for every entry of "cells";
/// without "cells" the top level describes a single cell. Procedures are
/// objects {"id": ..., "t": ..., "L": ...} with L optional.
SimulationConfig parse_config(std::string_view text);

/// Reads and parses a configuration file; IoError if it cannot be read.
SimulationConfig load_config(const std::filesystem::path& path);

}  // namespace slabtest
