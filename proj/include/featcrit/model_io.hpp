// SPDX-License-Identifier: Apache-2.0
//
// Trained-model artifact:
//
//   "FCMODEL1" | u64 LE manifest length | JSON manifest | f64 LE payload
//
// The manifest lists every tensor (name, rows, cols) in payload order and
// carries the echoed run configuration, seed and target domain, so a model
// reloads bit-exactly and can rebuild its evaluation data.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "featcrit/autodiff.hpp"

namespace featcrit {

struct ModelArtifact {
  std::string config_text;
  std::uint64_t seed = 0;
  int target_domain = 0;
  ParamSet params;
};

void save_model(const std::filesystem::path& path, const ModelArtifact& model);
ModelArtifact load_model(const std::filesystem::path& path);

/// Entries whose name starts with `prefix`.
ParamSet select_params(const ParamSet& params, const std::string& prefix);

}  // namespace featcrit
