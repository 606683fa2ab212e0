#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "entland/landscape.hpp"
#include "entland/sources.hpp"

namespace entland::cli {

/// A malformed or invalid model file. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parsed model file.
///
///   {
///     "description": "...",                      optional
///     "sources": [                               required, K >= 1
///       {"type": "gaussian"},
///       {"type": "uniform"},
///       {"type": "discrete-plus-noise", "values": [...], "probs": [...],
///        "sigma": 0.1, "kernel": "gaussian" | "uniform"}
///     ],
///     "equal_variance": true,                    rescale sources to unit variance
///     "scan": {"grid_size": 2048, "merge_tol": 1e-9,
///              "quadrature": {"half_width_sigmas": 10, "steps": 20001}},
///     "seed": 42,                                sample-based commands only
///     "samples": 1000
///   }
///
/// Unknown keys anywhere are rejected.
struct ModelConfig {
  std::string description;
  std::vector<SourceSpec> sources;
  bool equal_variance = true;
  ScanOptions scan;
  std::optional<std::uint64_t> seed;
  std::size_t samples = 1000;

  VarianceMode variance_mode() const;
  SourceModel model() const;
};

ModelConfig parse_config(const std::string& text, const std::string& origin = "<config>");
ModelConfig load_config(const std::filesystem::path& path);

}  // namespace entland::cli
