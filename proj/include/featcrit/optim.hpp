// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "featcrit/autodiff.hpp"

namespace featcrit {

enum class OptimizerKind { Amsgrad, MomentumSgd };

std::string to_string(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(const std::string& s);

struct AmsgradHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Per-parameter optimizer memory. AMSGrad uses m, v and v_hat; momentum SGD
/// uses velocity. Shapes mirror the parameter.
struct MomentState {
  Matrix m;
  Matrix v;
  Matrix v_hat;
  Matrix velocity;
};

/// AMSGrad without bias correction:
///   g += wd * p; m = b1 m + (1-b1) g; v = b2 v + (1-b2) g^2;
///   v_hat = max(v_hat, v); p -= lr * m / (sqrt(v_hat) + eps).
void amsgrad_step(MomentState& state, Matrix& param, const Matrix& grad, double lr,
                  double weight_decay, const AmsgradHyper& hyper = {});

/// velocity = momentum * velocity + (g + wd * p); p -= lr * velocity.
void momentum_sgd_step(MomentState& state, Matrix& param, const Matrix& grad, double lr,
                       double momentum, double weight_decay);

class Optimizer {
 public:
  explicit Optimizer(OptimizerKind kind = OptimizerKind::Amsgrad, double momentum = 0.9,
                     AmsgradHyper hyper = {});

  /// Updates every entry of `params`. Throws MissingGradient if a parameter
  /// lacks a gradient.
  void step(ParamSet& params, const GradientMap& grads, double lr, double weight_decay);
  /// Updates only the listed entries; the others and their moments are left
  /// untouched.
  void step(ParamSet& params, const GradientMap& grads, const std::vector<std::string>& names,
            double lr, double weight_decay);

  OptimizerKind kind() const { return kind_; }
  const std::map<std::string, MomentState>& state() const { return state_; }
  std::map<std::string, MomentState>& state() { return state_; }

 private:
  void update(const std::string& name, Matrix& param, const GradientMap& grads, double lr,
              double weight_decay);

  OptimizerKind kind_;
  double momentum_;
  AmsgradHyper hyper_;
  std::map<std::string, MomentState> state_;
};

/// Step decay: the base rate divided by the factor of the last milestone
/// reached. Milestones strictly increase and factors never decrease, so the
/// rate is piecewise constant and non-increasing.
struct LrSchedule {
  double base_lr = 1e-3;
  std::vector<long> milestones;
  std::vector<double> factors;

  void validate() const;
  double lr_at(long iter) const;
  /// Milestones multiplied by `ratio` (rounded), e.g. to shrink a schedule
  /// written for 30k iterations to a shorter run.
  LrSchedule scaled(double ratio) const;
};

}  // namespace featcrit
