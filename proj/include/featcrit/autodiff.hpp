// SPDX-License-Identifier: Apache-2.0
//
// Reverse-mode automatic differentiation over dense row-major matrices.
//
// Every primitive records its value eagerly. The backward rule of each
// primitive is itself expressed in terms of tape primitives, so a reverse pass
// run with `create_graph = true` leaves a differentiable record of the
// gradient computation on the same tape. Differentiating that record again
// yields exact second-order quantities (reverse-over-reverse), which is what
// hypergradients through a virtual parameter update need.
//
// Conventions:
//   * relu'(0) := 0 and relu'' := 0 everywhere.
//   * All arithmetic is double precision.
//   * A Tape has exactly one writer. Independent tapes may share read-only
//     parameter values across threads.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "featcrit/error.hpp"

namespace featcrit {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Named parameter matrices. Ordered by name so every traversal (flattening,
/// optimizer updates, serialization) is deterministic.
using ParamSet = std::map<std::string, Matrix>;
using GradientMap = std::map<std::string, Matrix>;

std::size_t count_scalars(const ParamSet& params);
/// Concatenates all entries in name order, each row-major.
Vector flatten(const ParamSet& params);
/// Inverse of flatten(); shapes are taken from `like`.
ParamSet unflatten(const ParamSet& like, const Vector& flat);

namespace ad {

enum class OpKind : std::uint8_t {
  Parameter,
  Constant,
  MatMul,
  Transpose,
  Add,
  Sub,
  Mul,
  Scale,
  Affine,
  ScaleBy,
  AddRow,
  SumRows,
  BroadcastRows,
  RowSum,
  BroadcastCols,
  MeanRows,
  Sum,
  BroadcastScalar,
  Relu,
  ReluMask,
  Tanh,
  TanhGrad,
  Sigmoid,
  SigmoidGrad,
  Softplus,
  Softmax,
  SoftmaxCE,
  Gram,
  Reshape,
  Im2Col,
  Col2Im,
};

const char* to_string(OpKind kind) noexcept;

/// Valid (unpadded) convolution patch geometry over rows laid out as
/// height x width x channels (channels fastest).
struct ConvGeometry {
  int height = 0;
  int width = 0;
  int channels = 0;
  int kernel = 0;
  int stride = 1;

  int out_height() const { return (height - kernel) / stride + 1; }
  int out_width() const { return (width - kernel) / stride + 1; }
  int input_width() const { return height * width * channels; }
  int patch_width() const { return kernel * kernel * channels; }
};

class Tape;

/// Handle to a node on a tape. Cheap to copy; only valid while its tape lives.
struct Var {
  Tape* tape = nullptr;
  int id = -1;

  bool valid() const { return tape != nullptr && id >= 0; }
  const Matrix& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  /// Value of a 1x1 node.
  double scalar() const;
};

struct Node {
  OpKind kind = OpKind::Constant;
  std::array<int, 2> inputs{-1, -1};
  Matrix value;
  bool requires_grad = false;
  // Op attributes; meaning depends on kind.
  double a = 0.0;
  double b = 0.0;
  bool flag_a = false;
  bool flag_b = false;
  std::shared_ptr<const std::vector<int>> labels;
  std::shared_ptr<const ConvGeometry> geometry;
  int name_index = -1;
};

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;
  Tape(Tape&&) = default;
  Tape& operator=(Tape&&) = default;

  /// A differentiable leaf addressed by `name` in backward() results.
  Var parameter(const std::string& name, Matrix value);
  Var constant(Matrix value);

  const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  const Matrix& value(Var v) const { return node(v.id).value; }
  bool requires_grad(Var v) const { return node(v.id).requires_grad; }
  std::size_t size() const { return nodes_.size(); }

  /// Gradients of the scalar `root` with respect to each entry of `wrt`.
  /// Unreachable entries receive zero constants. With `create_graph` the
  /// returned vars are themselves differentiable functions of the leaves.
  std::vector<Var> gradient(Var root, std::span<const Var> wrt, bool create_graph);

  /// First-order gradients for every parameter leaf on the tape, keyed by
  /// name. Parameters that do not influence `root` map to zero matrices.
  GradientMap backward(Var root);

  // Used by the op constructors.
  Var record(Node node);
  void check_owner(Var v) const;

 private:
  Var zeros_like(int id);

  std::vector<Node> nodes_;
  std::vector<std::string> names_;
  std::map<std::string, int> parameter_ids_;
  bool grad_recording_ = true;
};

// Linear algebra.
Var matmul(Var a, Var b, bool transpose_a = false, bool transpose_b = false);
Var transpose(Var a);
Var add(Var a, Var b);
Var sub(Var a, Var b);
/// Elementwise product.
Var mul(Var a, Var b);
Var scale(Var a, double factor);
/// factor * a + shift, elementwise.
Var affine(Var a, double factor, double shift);
/// s * a for a 1x1 node s.
Var scale_by(Var a, Var s);
/// a (M x N) plus the row vector b (1 x N) on every row.
Var add_row(Var a, Var b);
/// Column sums: M x N -> 1 x N.
Var sum_rows(Var a);
Var broadcast_rows(Var a, Eigen::Index rows);
/// Row sums: M x N -> M x 1.
Var row_sum(Var a);
Var broadcast_cols(Var a, Eigen::Index cols);
/// Column means: M x N -> 1 x N.
Var mean_rows(Var a);
Var sum(Var a);
Var broadcast_scalar(Var a, Eigen::Index rows, Eigen::Index cols);

// Nonlinearities.
Var relu(Var a);
/// g where x > 0, else 0. No gradient flows into x.
Var relu_mask(Var g, Var x);
Var tanh(Var a);
/// g * (1 - y^2).
Var tanh_grad(Var g, Var y);
Var sigmoid(Var a);
/// g * y * (1 - y).
Var sigmoid_grad(Var g, Var y);
Var softplus(Var a);
/// Row-wise softmax.
Var softmax(Var a);
/// Mean softmax cross-entropy of logits (M x C) against integer labels.
Var softmax_ce(Var logits, std::shared_ptr<const std::vector<int>> labels);

// Shape plumbing.
/// F^T F.
Var gram(Var f);
Var reshape(Var a, Eigen::Index rows, Eigen::Index cols);
/// Row-major flatten to a single row.
Var flatten(Var a);
Var im2col(Var images, std::shared_ptr<const ConvGeometry> geometry);
Var col2im(Var columns, std::shared_ptr<const ConvGeometry> geometry);

using ParamVars = std::map<std::string, Var>;

/// Registers every entry of `params` as a differentiable leaf.
ParamVars register_parameters(Tape& tape, const ParamSet& params);
/// Registers every entry as a constant (no gradient).
ParamVars register_constants(Tape& tape, const ParamSet& params);

/// Central differences (f(x + eps e_i) - f(x - eps e_i)) / (2 eps).
Vector finite_difference(const std::function<double(const Vector&)>& f, const Vector& x,
                         double eps);

using InnerLossFn =
    std::function<Var(Tape&, const ParamVars& theta, const ParamVars& omega)>;
using OuterLossFn = std::function<Var(Tape&, const ParamVars& theta_new)>;

struct HyperGradient {
  GradientMap omega;        ///< d outer / d omega
  GradientMap inner_theta;  ///< d inner / d theta at theta_point
  ParamSet theta_new;
  double inner_value = 0.0;
  double outer_value = 0.0;
};

/// Gradient with respect to omega of
///   outer(theta_base - alpha * grad_theta inner(theta_point, omega)),
/// obtained by recording the inner reverse pass and differentiating through it.
HyperGradient grad_through_update(const InnerLossFn& inner, const OuterLossFn& outer,
                                  const ParamSet& theta_point, const ParamSet& theta_base,
                                  const ParamSet& omega, double alpha);

}  // namespace ad
}  // namespace featcrit
