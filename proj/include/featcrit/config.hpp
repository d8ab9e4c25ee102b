// SPDX-License-Identifier: Apache-2.0
//
// Run configuration. The file format is line oriented:
//
//   # comment            (also ';')
//   [section]
//   key = value
//
// Keys are addressed as "section.key"; the full list with defaults is what
// to_text() prints for a default RunConfig. Lists are comma separated, bools
// are true/false, and trainer.alpha accepts "auto" (follow the learning rate).
// Later assignments win, so command-line overrides are appended as extra
// "section.key=value" lines.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "featcrit/data.hpp"
#include "featcrit/eval.hpp"
#include "featcrit/models.hpp"
#include "featcrit/trainer.hpp"

namespace featcrit {

enum class ExperimentKind { RotatedMnist, Synthetic, HeterogeneousSynthetic };
enum class MethodSpec { Agg, FcSet, FcCov };

std::string to_string(ExperimentKind kind);
std::string to_string(MethodSpec method);
ExperimentKind parse_experiment_kind(const std::string& s);
MethodSpec parse_method(const std::string& s);

struct RunConfig {
  ExperimentKind kind = ExperimentKind::RotatedMnist;
  MethodSpec method = MethodSpec::FcSet;
  /// Methods compared by a sweep.
  std::vector<MethodSpec> methods{MethodSpec::Agg, MethodSpec::FcSet};
  std::vector<std::uint64_t> seeds{0};
  int target_domain = 0;
  /// Directory holding images.idx3-ubyte and labels.idx1-ubyte.
  std::string data_root = "data/mnist";
  std::string out = "runs";

  int per_class = 100;
  std::vector<double> angles{0, 15, 30, 45, 60, 75};
  /// Share of each class tagged Train (the rest Test) in every domain.
  double train_fraction = 0.5;
  SynthConfig synth;
  std::vector<int> source_classes{0, 1, 2, 3, 4};
  std::vector<int> target_classes{5, 6, 7, 8, 9};

  ExtractorConfig extractor;
  CriticConfig critic;
  TrainerConfig trainer;

  int knn_k = 5;
  bool probe = false;
  ProbeConfig probe_config;
  std::vector<int> kshot;
  int kshot_trials = 10;
  /// Write a PCA scatter of the target features.
  bool pca = false;

  /// Copies `method` into trainer.method and critic.variant.
  void sync_method();
  void validate() const;
};

/// Parses `text`; `origin` prefixes error messages ("file:line: ...").
/// Unknown keys, malformed values and stray lines raise ConfigError.
RunConfig parse_config(const std::string& text, const std::string& origin = "config");
RunConfig load_config(const std::string& path);

/// Applies one "section.key=value" assignment.
void apply_override(RunConfig& config, const std::string& assignment);

/// Every key in registry order; parse_config(to_text(c)) reproduces c.
std::string to_text(const RunConfig& config);

/// Built-in presets: "rotated-mnist", "synthetic", "heterogeneous-synthetic",
/// "tiny" (seconds-scale smoke run on synthetic data).
RunConfig preset(const std::string& name);

}  // namespace featcrit
