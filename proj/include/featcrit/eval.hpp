// SPDX-License-Identifier: Apache-2.0
//
// Frozen-feature evaluation on a target domain: extract features with a fixed
// extractor, fit a shallow classifier on the target's training rows, score the
// rest. Also the VD-score aggregate, the K-shot protocol and a 2-D PCA view.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "featcrit/autodiff.hpp"
#include "featcrit/data.hpp"
#include "featcrit/models.hpp"

namespace featcrit {

struct FrozenFeatures {
  Matrix features;
  std::vector<int> labels;
  /// Hash of the extractor parameters that produced the rows.
  std::string fingerprint;

  std::size_t size() const { return labels.size(); }
};

/// FNV-1a over parameter names, shapes and raw bytes, as 16 hex digits.
std::string fingerprint(const ParamSet& params);

FrozenFeatures extract_frozen(const FeatureExtractor& extractor, const ParamSet& theta,
                              const Domain& domain);

/// Majority vote over the k nearest rows by Euclidean distance. Neighbours
/// with equal distance are ranked by row index. A tied vote goes to the label
/// whose voters have the smallest mean distance, then to the lowest label.
std::vector<int> knn_predict(const FrozenFeatures& train, int k, const Matrix& queries);

struct ProbeConfig {
  double lambda = 1e-4;
  double lr = 0.1;
  int epochs = 50;
  int batch = 16;
  std::uint64_t seed = 0;
};

/// One-vs-rest linear hinge classifier: weights (H x C), bias (1 x C).
struct LinearProbe {
  Matrix weights;
  Matrix bias;
  std::vector<int> classes;

  std::vector<int> predict(const Matrix& rows) const;
};

/// Mini-batch subgradient descent on lambda/2 |w|^2 + mean hinge, per class,
/// with step lr / (1 + lr * lambda * t).
LinearProbe linear_probe(const FrozenFeatures& train, const ProbeConfig& config);

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

/// Per-domain terms 1000 * max(0, cap - E)^2 / cap^2 with cap = min(1, 2 *
/// baseline). A zero cap earns 1000 for zero error and nothing otherwise.
std::vector<double> vd_terms(const std::vector<double>& errors,
                             const std::vector<double>& baseline_errors);
long vd_score(const std::vector<double>& errors, const std::vector<double>& baseline_errors);

struct KShotResult {
  double mean = 0.0;
  double std = 0.0;  ///< sample standard deviation; zero for a single trial
  std::vector<double> trials;
};

/// Each trial keeps `shots` random rows per class of `train` (all rows when
/// shots <= 0), in their original order, and scores KNN on `test`. k is
/// clamped to the number of kept rows.
KShotResult kshot_eval(const FrozenFeatures& train, const FrozenFeatures& test, int shots,
                       int k, int trials, std::mt19937_64& rng);

struct Pca2 {
  Matrix projection;  ///< n x 2
  Matrix components;  ///< H x 2, orthonormal columns
  double variance[2] = {0.0, 0.0};
  double total_variance = 0.0;
  /// Fewer than two directions with non-zero variance; the missing
  /// components are zero.
  bool degenerate = false;

  double explained_ratio() const {
    return total_variance > 0.0 ? (variance[0] + variance[1]) / total_variance : 0.0;
  }
};

/// Power iteration with deflation on the sample covariance, from a fixed start
/// vector. Throws DegenerateCovariance instead of flagging when `strict`.
Pca2 pca2(const Matrix& features, bool strict = false);

}  // namespace featcrit
