// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "samsde/dataset.hpp"
#include "samsde/models.hpp"

#include <memory>
#include <vector>

namespace samsde {

class RngStream;

enum class Activation { identity, sigmoid };
enum class LossHead { cross_entropy, logistic_l2, mse };

struct MlpArch {
  std::vector<Index> widths;  // input, hidden..., output
  Activation activation = Activation::identity;  // hidden layers only
  LossHead head = LossHead::mse;
  double l2 = 0.1;  // only used by logistic_l2: adds (l2 / 2) |theta|^2
  bool bias = true;

  Index num_parameters() const;
};

/// Fully connected network evaluated by reverse accumulation over a dataset.
/// Parameters are packed layer by layer: W_l (out x in, column-major), then b_l.
class MlpModel final : public LossModel {
 public:
  MlpModel(MlpArch arch, std::shared_ptr<const Dataset> data);

  Index dim() const override { return num_params_; }
  std::string name() const override { return "mlp"; }
  double value(const Vector& x) const override;
  void gradient(const Vector& x, Vector& out) const override;
  using LossModel::gradient;

  Index num_examples() const override { return data_->size(); }
  double batch_value(const Vector& x, std::span<const Index> batch) const override;
  void batch_gradient(const Vector& x, std::span<const Index> batch, Vector& out) const override;

  const MlpArch& arch() const noexcept { return arch_; }
  const Dataset& data() const noexcept { return *data_; }

  /// Network outputs (out_dim x B) for the given inputs (B x p).
  Matrix forward(const Vector& x, const Matrix& inputs) const;

 private:
  double evaluate(const Vector& x, const Matrix& inputs, const Vector& labels,
                  Vector* grad) const;

  MlpArch arch_;
  std::shared_ptr<const Dataset> data_;
  Index num_params_;
};

LossModelPtr mlp_model(MlpArch arch, std::shared_ptr<const Dataset> data);

/// W ~ N(0, scale^2 / fan_in), b = 0.
Vector mlp_init(const MlpArch& arch, RngStream& rng, double scale = 1.0);

/// Linear (identity-activation) teacher with `depth` hidden layers of `width`
/// units, mapping R^p to R; weights from mlp_init with unit scale.
struct TeacherNetwork {
  MlpArch arch;
  Vector params;
};
TeacherNetwork make_teacher_network(Index p, Index depth, Index width, RngStream& rng);

/// The "teacher" synthetic set together with the network that labelled it.
struct TeacherData {
  Dataset data;
  TeacherNetwork teacher;
};
TeacherData synth_teacher(Index n, Index p, std::uint64_t seed, const SynthOptions& options = {});

}  // namespace samsde
