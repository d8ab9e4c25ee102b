// SPDX-License-Identifier: Apache-2.0
//
// Objectives of the episodic learner: supervised cross-entropy summed over
// domains, the critic's auxiliary loss, the virtual parameter updates with and
// without the auxiliary gradient, and the tanh-shaped meta-loss comparing them
// on held-out domains.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "featcrit/autodiff.hpp"
#include "featcrit/data.hpp"
#include "featcrit/models.hpp"

namespace featcrit {

/// A mini-batch paired with the classifier head that scores it.
struct LabeledBatch {
  std::string head;
  Batch batch;
};

/// Mean softmax cross-entropy over the rows of `logits`.
double ce_loss(const Matrix& logits, const std::vector<int>& labels);
ad::Var ce_loss(ad::Var logits, std::shared_ptr<const std::vector<int>> labels);

/// Sum over batches of ce_loss(g_phi(f_theta(x)), y).
ad::Var agg_objective(const FeatureExtractor& extractor, const ad::ParamVars& theta,
                      const ad::ParamVars& phi, std::span<const LabeledBatch> batches);
double agg_objective(const FeatureExtractor& extractor, const ParamSet& theta,
                     const ParamSet& phi, std::span<const LabeledBatch> batches);

/// Sum of critic outputs over the per-domain feature batches.
ad::Var aux_loss(const FeatureCritic& critic, const ad::ParamVars& omega,
                 std::span<const ad::Var> features);
double aux_loss(const FeatureCritic& critic, const ParamSet& omega,
                std::span<const Matrix> features);

struct VirtualUpdate {
  ParamSet theta_old;  ///< theta - alpha * grad_ce
  ParamSet theta_new;  ///< theta_old - alpha * grad_aux
};

VirtualUpdate virtual_updates(const ParamSet& theta, const GradientMap& grad_ce,
                              const GradientMap& grad_aux, double alpha);

/// Validation performance: the negated cross-entropy of the model on a batch.
double gamma(const FeatureExtractor& extractor, const ParamSet& theta, const ParamSet& phi,
             const LabeledBatch& batch);

/// tanh(CE(theta_new) - CE(theta_old)) for each validation batch.
std::vector<double> meta_loss_terms(const FeatureExtractor& extractor, const ParamSet& theta_old,
                                    const ParamSet& theta_new, const ParamSet& phi,
                                    std::span<const LabeledBatch> val);
double meta_loss(const FeatureExtractor& extractor, const ParamSet& theta_old,
                 const ParamSet& theta_new, const ParamSet& phi,
                 std::span<const LabeledBatch> val);

/// Differentiable meta-loss with the theta_old cross-entropies supplied as
/// constants (one per validation batch).
ad::Var meta_loss(const FeatureExtractor& extractor, const ad::ParamVars& theta_new,
                  const ad::ParamVars& phi, std::span<const LabeledBatch> val,
                  std::span<const double> ce_old);

}  // namespace featcrit
