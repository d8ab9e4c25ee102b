// SPDX-License-Identifier: Apache-2.0
//
// The three networks: a shared feature extractor, per-domain linear
// classifier heads, and the feature-critic that scores a batch of features.
//
// Parameter naming: extractor entries start with "theta.", heads with
// "phi.<key>.", critic entries with "omega.". The prefixes keep all three on
// one tape without collisions.
#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "featcrit/autodiff.hpp"

namespace featcrit {

enum class ExtractorKind { Conv, Mlp };
enum class CriticVariant { Set, Cov };

std::string to_string(ExtractorKind kind);
std::string to_string(CriticVariant variant);
ExtractorKind parse_extractor_kind(const std::string& s);
CriticVariant parse_critic_variant(const std::string& s);

struct ExtractorConfig {
  ExtractorKind kind = ExtractorKind::Conv;
  int input_height = 28;
  int input_width = 28;
  int input_channels = 1;
  std::vector<int> conv_channels{8, 16};
  int conv_kernel = 5;
  int conv_stride = 2;
  std::vector<int> mlp_hidden{128};
  int feature_dim = 64;

  int input_dim() const { return input_height * input_width * input_channels; }
  bool operator==(const ExtractorConfig&) const = default;
};

/// f_theta: images (M x h*w*c, row-major HWC) -> features (M x H). Every layer,
/// including the last, is followed by relu.
class FeatureExtractor {
 public:
  explicit FeatureExtractor(ExtractorConfig config);

  const ExtractorConfig& config() const { return config_; }
  int feature_dim() const { return config_.feature_dim; }

  ParamSet init(std::mt19937_64& rng) const;
  /// Throws ModelShapeMismatch if `theta` does not match this architecture.
  void check(const ParamSet& theta) const;

  ad::Var forward(ad::Tape& tape, const ad::ParamVars& theta, ad::Var images) const;
  /// Tape-free convenience; processes the batch in chunks.
  Matrix extract(const ParamSet& theta, const Matrix& images) const;

 private:
  std::vector<std::pair<std::string, std::pair<int, int>>> shapes() const;

  ExtractorConfig config_;
  std::vector<std::shared_ptr<const ad::ConvGeometry>> geometry_;
  int flat_width_ = 0;
};

/// g_phi: an affine map H -> C. Entries are "phi.<key>.w" (H x C) and
/// "phi.<key>.b" (1 x C).
struct ClassifierHead {
  static std::string weight_name(const std::string& key) { return "phi." + key + ".w"; }
  static std::string bias_name(const std::string& key) { return "phi." + key + ".b"; }

  static ParamSet init(const std::string& key, int feature_dim, int classes,
                       std::mt19937_64& rng);
  static ad::Var forward(const ad::ParamVars& phi, const std::string& key, ad::Var features);
  static Matrix logits(const ParamSet& phi, const std::string& key, const Matrix& features);
};

struct CriticConfig {
  CriticVariant variant = CriticVariant::Set;
  std::vector<int> hidden{64, 32};
  /// Divide F^T F by the batch size before flattening.
  bool gram_normalize = false;

  bool operator==(const CriticConfig&) const = default;
};

/// h_omega: feature batch (M x H) -> positive scalar. Both variants end in a
/// scalar head followed by softplus and are invariant to row order.
class FeatureCritic {
 public:
  static constexpr int kMaxCovarianceDim = 128;

  FeatureCritic(CriticConfig config, int feature_dim);

  const CriticConfig& config() const { return config_; }
  int input_width() const;

  ParamSet init(std::mt19937_64& rng) const;
  void check(const ParamSet& omega) const;

  ad::Var forward(const ad::ParamVars& omega, ad::Var features) const;
  /// Mean of the per-row MLP outputs, then softplus.
  ad::Var forward_set(const ad::ParamVars& omega, ad::Var features) const;
  /// MLP over the row-major flattened Gram matrix, then softplus.
  ad::Var forward_cov(const ad::ParamVars& omega, ad::Var features) const;

  double evaluate(const ParamSet& omega, const Matrix& features) const;

 private:
  ad::Var mlp(const ad::ParamVars& omega, ad::Var input) const;

  CriticConfig config_;
  int feature_dim_;
};

/// He-normal initialised dense layer weights (fan_in x fan_out) and zero bias.
void init_dense(ParamSet& params, const std::string& prefix, int fan_in, int fan_out,
                std::mt19937_64& rng, double gain = 2.0);

}  // namespace featcrit
