// SPDX-License-Identifier: Apache-2.0
//
// One cell of an experiment: build the domains for (seed, target), train the
// configured method, evaluate on the held-out domain. The sweep runs every
// (seed, target, method) cell and aggregates.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "featcrit/config.hpp"
#include "featcrit/data.hpp"
#include "featcrit/eval.hpp"
#include "featcrit/model_io.hpp"
#include "featcrit/trainer.hpp"
#include "json.hpp"

namespace featcrit {

/// Number of candidate target domains. Heterogeneous runs always hold out the
/// last synthetic domain, so they have exactly one.
int target_count(const RunConfig& config);

/// Domain sampling depends only on the seed, so every target and method of a
/// seed sees the same images.
DomainSet build_domains(const RunConfig& config, std::uint64_t seed, int target);

/// Copy of `config.extractor` with the input geometry of `domains`.
ExtractorConfig resolve_extractor(const RunConfig& config, const DomainSet& domains);

struct TrainedModel {
  Networks nets;
  TrainerState state;
  LossLog log;
  double wall_seconds = 0.0;
};

/// On NonFiniteLoss the parameters from before the failing step are saved to
/// `dump_dir`/last_good.bin (when given) and the error is rethrown.
TrainedModel train_cell(const RunConfig& config, const DomainSet& domains, std::uint64_t seed,
                        const ProgressFn& progress = {},
                        const std::filesystem::path& dump_dir = {});

ModelArtifact to_artifact(const RunConfig& config, const TrainedModel& model, std::uint64_t seed,
                          int target);
/// Rebuilds networks and state (parameters only) from an artifact. Throws
/// ModelShapeMismatch when the parameters do not fit the configured
/// architectures.
TrainedModel from_artifact(const RunConfig& config, const DomainSet& domains,
                           const ModelArtifact& artifact);

struct EvalResult {
  std::string target_name;
  std::string fingerprint;
  /// Shared-head accuracy on the whole target (homogeneous only).
  std::optional<double> head_accuracy;
  /// KNN fitted on the target's Train rows, scored on its Test rows.
  double knn_accuracy = 0.0;
  std::optional<double> probe_accuracy;
  std::map<int, KShotResult> kshot;

  /// head_accuracy when present, else knn_accuracy.
  double primary() const { return head_accuracy.value_or(knn_accuracy); }
};

EvalResult evaluate_cell(const RunConfig& config, const DomainSet& domains,
                         const TrainedModel& model, std::uint64_t seed);

nlohmann::json to_json(const EvalResult& result);

/// Writes x,y,label rows of the target's 2-D PCA projection.
void write_pca_csv(const std::filesystem::path& path, const TrainedModel& model,
                   const DomainSet& domains);

/// model.bin, loss.csv and summary.json (config echo, final losses, wall
/// time, timestamp).
void write_training(const std::filesystem::path& dir, const RunConfig& config,
                    const TrainedModel& model, std::uint64_t seed, int target);
/// results.json; contains nothing time-dependent.
void write_results(const std::filesystem::path& dir, const RunConfig& config,
                   const TrainedModel& model, const EvalResult& result, std::uint64_t seed,
                   int target);

struct SweepCell {
  MethodSpec method = MethodSpec::Agg;
  std::uint64_t seed = 0;
  int target = 0;
  std::optional<double> metric;
  std::string error;
};

struct SweepSummary {
  std::vector<SweepCell> cells;
  std::vector<std::string> target_names;
};

/// Runs (or, when results.json already exists, reloads) every cell under
/// `out/<method>/seed<k>/target<t>`. A failing cell is recorded and the sweep
/// moves on.
SweepSummary run_sweep(const RunConfig& config, const std::filesystem::path& out,
                       bool verbose = true);

struct MethodStats {
  std::vector<double> mean;  ///< per target, over seeds
  std::vector<double> std;   ///< sample std; zero with one seed
  std::vector<int> count;
  double average = 0.0;      ///< mean of the per-target means
};

std::map<MethodSpec, MethodStats> aggregate(const SweepSummary& summary, int targets);

/// Table with one row per target plus an average row, mean +- std per method,
/// followed by the FC-minus-AGG delta and per-target win counts.
std::string format_table(const SweepSummary& summary, int targets);
nlohmann::json sweep_json(const SweepSummary& summary, int targets);

}  // namespace featcrit
