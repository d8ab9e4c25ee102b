// SPDX-License-Identifier: Apache-2.0
//
// Finite-difference audits of the autodiff engine, used by the `gradcheck`
// command. Each primitive is wrapped as x -> sum(R * op(x)) with a fixed
// random R; the hypergradient audit perturbs every critic weight of a tiny
// meta-learning instance.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "featcrit/autodiff.hpp"
#include "featcrit/losses.hpp"
#include "featcrit/models.hpp"

namespace featcrit {

struct CheckResult {
  std::string name;
  double max_rel_error = 0.0;
  double tolerance = 0.0;
  int instances = 0;

  bool passed() const { return max_rel_error <= tolerance; }
};

/// |a - b|_2 / max(|a|_2, |b|_2), or 0 when both vanish.
double relative_error(const Vector& a, const Vector& b);

/// One entry per primitive, `instances` random draws each, eps = 1e-5.
std::vector<CheckResult> check_primitives(std::uint64_t seed, int instances = 20);

/// The tiny meta-learning instance: MLP extractor with feature dim 4, critic
/// hidden width 8, batches of 5, one meta-train and two meta-test domains.
struct TinyMetaProblem {
  FeatureExtractor extractor;
  FeatureCritic critic;
  ParamSet theta;
  ParamSet phi;
  ParamSet omega;
  std::vector<Matrix> trn_images;
  std::vector<std::shared_ptr<const std::vector<int>>> trn_labels;
  std::vector<Matrix> val_images;
  std::vector<std::shared_ptr<const std::vector<int>>> val_labels;
  double alpha = 0.1;

  static TinyMetaProblem make(CriticVariant variant, std::uint64_t seed);
  /// Meta-loss as a function of omega alone, evaluated without any tape-level
  /// second-order machinery.
  double meta_loss_at(const ParamSet& omega) const;
  GradientMap hypergradient() const;
  /// Virtual updates theta_old and theta_new for critic weights `omega`.
  VirtualUpdate updates_at(const ParamSet& omega) const;
  /// Smallest distance of any relu pre-activation on the check's path from
  /// zero: extractor at theta, theta_old and theta_new, critic hidden layer.
  double kink_margin() const;
};

/// Hypergradient against central differences (eps = 1e-4) over every omega
/// entry.
CheckResult check_hypergradient(CriticVariant variant, std::uint64_t seed);

/// Largest |d meta / d omega| with alpha = 0; exactly zero when correct.
double hypergradient_at_zero_step(std::uint64_t seed);

}  // namespace featcrit
