// SPDX-License-Identifier: Apache-2.0
//
// Episodic training. Each outer step draws a random partition of the source
// domains into meta-train and meta-test sets, then runs T meta-iterations on
// it. A meta-iteration updates the extractor with the supervised plus critic
// gradient, the meta-train heads with the supervised gradient alone, and the
// critic with the hypergradient of the meta-loss. The AGG baseline runs plain
// summed cross-entropy steps over every source domain.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "featcrit/data.hpp"
#include "featcrit/losses.hpp"
#include "featcrit/models.hpp"
#include "featcrit/optim.hpp"

namespace featcrit {

struct DomainSplit {
  std::vector<std::size_t> trn;
  std::vector<std::size_t> val;
};

/// Uniform random partition of `ids` with `n_val` meta-test domains. Both
/// halves are returned sorted.
DomainSplit split_domains(std::span<const std::size_t> ids, std::mt19937_64& rng,
                          std::size_t n_val);

enum class Method { Agg, FeatureCritic };

std::string to_string(Method method);

struct TrainerConfig {
  Method method = Method::FeatureCritic;
  OptimizerKind optimizer = OptimizerKind::Amsgrad;
  double lr = 1e-3;
  /// Virtual step size; unset follows the scheduled learning rate.
  std::optional<double> alpha;
  double weight_decay = 5e-5;
  double momentum = 0.9;
  int inner_steps = 1;
  long max_steps = 5000;
  int n_val = 1;
  /// Keep one random domain of the meta-train half per iteration.
  bool single_meta_train = false;
  int batch_trn = 64;
  int batch_val = 32;
  /// Milestones are expressed against `lr_reference_steps` (or the run length
  /// when zero) and rescaled to the actual run length.
  std::vector<long> lr_milestones;
  std::vector<double> lr_factors;
  long lr_reference_steps = 0;
  /// AGG-only steps over every source appended after the episodic phase.
  long finetune_steps = 0;
  /// Evaluate the critic gradient at theta_old instead of theta.
  bool aux_at_theta_old = false;
  /// Leave omega at its initial value.
  bool freeze_critic = false;
  std::uint64_t seed = 0;

  long total_steps() const { return max_steps + finetune_steps; }
  LrSchedule schedule() const;
  void validate() const;
};

/// The architectures plus the head assigned to each source domain. In
/// homogeneous mode every source shares the head "shared"; otherwise source j
/// owns head "d<j>".
struct Networks {
  FeatureExtractor extractor;
  std::optional<FeatureCritic> critic;
  std::vector<std::string> heads;
  std::map<std::string, int> head_classes;
};

Networks make_networks(const ExtractorConfig& extractor, const CriticConfig& critic,
                       const std::vector<Domain>& sources, bool heterogeneous, Method method);

struct TrainerState {
  ParamSet theta;
  ParamSet phi;
  ParamSet omega;
  Optimizer model_opt;
  Optimizer critic_opt;
  long step = 0;
  std::mt19937_64 rng;
  std::vector<BatchSampler> samplers;
};

/// Extractor and heads draw from one seeded stream and the critic from
/// another, so AGG and Feature-Critic runs with equal seeds start from the
/// same theta and phi.
TrainerState init_state(const Networks& nets, const TrainerConfig& config,
                        const std::vector<Domain>& sources);

struct LossRow {
  long iter = 0;
  double ce = 0.0;
  double aux = 0.0;
  double meta = 0.0;
};

struct WindowStat {
  long first_iter = 0;
  long last_iter = 0;
  double ce = 0.0;
  double aux = 0.0;
  double meta = 0.0;
};

struct LossLog {
  std::vector<LossRow> rows;

  void write_csv(std::ostream& os) const;
  /// Inverse of write_csv; malformed rows raise IoError.
  static LossLog read_csv(std::istream& is);
  /// Means over consecutive windows of `window` rows; the last may be shorter.
  std::vector<WindowStat> windowed_means(std::size_t window = 200) const;
};

/// Labels each window's mean meta-loss as "+" (above `tol`), "-" (below
/// -`tol`) or "0", collapsing runs. The expected shape of a healthy run is
/// "+ - 0" or a prefix of it.
std::string meta_sign_pattern(const std::vector<WindowStat>& windows, double tol);

struct MetaGradients {
  GradientMap theta;  ///< supervised plus critic gradient
  GradientMap phi;    ///< supervised gradient of the meta-train heads
  GradientMap omega;  ///< meta-loss hypergradient
  std::vector<std::string> phi_names;
  double ce = 0.0;
  double aux = 0.0;
  double meta = 0.0;
};

/// Everything a meta-iteration needs from fixed batches, without touching the
/// state.
MetaGradients meta_gradients(const Networks& nets, const TrainerState& state,
                             const TrainerConfig& config, std::span<const LabeledBatch> trn,
                             std::span<const LabeledBatch> val, double alpha);

struct AggGradients {
  GradientMap grads;
  std::vector<std::string> names;
  double ce = 0.0;
};

AggGradients agg_gradients(const Networks& nets, const TrainerState& state,
                           std::span<const LabeledBatch> batches);

/// Throw NonFiniteLoss before anything is applied, so a failed step leaves the
/// state at its last good value.
void apply_meta_gradients(TrainerState& state, const TrainerConfig& config,
                          const MetaGradients& grads, double lr);
void apply_agg_gradients(TrainerState& state, const TrainerConfig& config,
                         const AggGradients& grads, double lr);

std::vector<LabeledBatch> sample_batches(const Networks& nets, TrainerState& state,
                                         const std::vector<Domain>& sources,
                                         std::span<const std::size_t> ids, int batch_size);

LossRow meta_iteration(TrainerState& state, const Networks& nets, const TrainerConfig& config,
                       const std::vector<Domain>& sources, const DomainSplit& split);
LossRow agg_iteration(TrainerState& state, const Networks& nets, const TrainerConfig& config,
                      const std::vector<Domain>& sources);

using ProgressFn = std::function<void(const LossRow&)>;

/// Runs the configured method from `state` until config.total_steps().
void train(const Networks& nets, const TrainerConfig& config, const std::vector<Domain>& sources,
           TrainerState& state, LossLog& log, const ProgressFn& progress = {});

}  // namespace featcrit
