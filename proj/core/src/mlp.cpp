// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#include "samsde/mlp.hpp"

#include "samsde/rng.hpp"

#include <cmath>
#include <vector>

namespace samsde {

namespace {

// log(1 + e^a) without overflow.
double softplus(double a) { return std::max(a, 0.0) + std::log1p(std::exp(-std::abs(a))); }

double sigmoid(double a) {
  if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
  const double e = std::exp(a);
  return e / (1.0 + e);
}

struct LayerView {
  Eigen::Map<const Matrix> w;
  Eigen::Map<const Vector> b;
};

std::vector<LayerView> unpack(const MlpArch& arch, const Vector& x) {
  std::vector<LayerView> layers;
  const double* p = x.data();
  static const double kNoBias = 0.0;
  for (std::size_t l = 1; l < arch.widths.size(); ++l) {
    const Index out = arch.widths[l];
    const Index in = arch.widths[l - 1];
    Eigen::Map<const Matrix> w(p, out, in);
    p += out * in;
    if (arch.bias) {
      layers.push_back({w, Eigen::Map<const Vector>(p, out)});
      p += out;
    } else {
      layers.push_back({w, Eigen::Map<const Vector>(&kNoBias, 0)});
    }
  }
  return layers;
}

void validate_arch(const MlpArch& arch, const Dataset& data) {
  if (arch.widths.size() < 2) throw PreconditionError("mlp: need input and output widths");
  for (Index w : arch.widths) {
    if (w < 1) throw PreconditionError("mlp: layer widths must be positive");
  }
  if (arch.widths.front() != data.feature_dim()) {
    throw PreconditionError("mlp: input width " + std::to_string(arch.widths.front()) +
                            " does not match dataset feature count " +
                            std::to_string(data.feature_dim()));
  }
  const Index out = arch.widths.back();
  switch (arch.head) {
    case LossHead::cross_entropy:
      if (!data.classification) throw PreconditionError("mlp: cross-entropy needs class labels");
      if (out != data.num_classes) {
        throw PreconditionError("mlp: output width must equal the number of classes");
      }
      break;
    case LossHead::logistic_l2:
      if (!data.classification || data.num_classes > 2) {
        throw PreconditionError("mlp: logistic head needs binary labels");
      }
      if (out != 1) throw PreconditionError("mlp: logistic head needs output width 1");
      break;
    case LossHead::mse:
      if (out != 1) throw PreconditionError("mlp: mse head needs output width 1");
      break;
  }
}

}  // namespace

Index MlpArch::num_parameters() const {
  Index n = 0;
  for (std::size_t l = 1; l < widths.size(); ++l) {
    n += widths[l] * widths[l - 1] + (bias ? widths[l] : 0);
  }
  return n;
}

MlpModel::MlpModel(MlpArch arch, std::shared_ptr<const Dataset> data)
    : arch_(std::move(arch)), data_(std::move(data)) {
  if (!data_) throw PreconditionError("mlp: dataset is null");
  validate_arch(arch_, *data_);
  num_params_ = arch_.num_parameters();
}

Matrix MlpModel::forward(const Vector& x, const Matrix& inputs) const {
  const auto layers = unpack(arch_, x);
  Matrix a = inputs.transpose();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    Matrix z = layers[l].w * a;
    if (arch_.bias) z.colwise() += layers[l].b;
    if (l + 1 < layers.size() && arch_.activation == Activation::sigmoid) {
      z = z.unaryExpr([](double v) { return sigmoid(v); });
    }
    a = std::move(z);
  }
  return a;
}

double MlpModel::evaluate(const Vector& x, const Matrix& inputs, const Vector& labels,
                          Vector* grad) const {
  const auto layers = unpack(arch_, x);
  const Index batch = inputs.rows();
  const auto inv_b = 1.0 / static_cast<double>(batch);
  const bool sig = arch_.activation == Activation::sigmoid;

  // acts[l] is the input of layer l (columns are examples).
  std::vector<Matrix> acts;
  acts.reserve(layers.size() + 1);
  acts.push_back(inputs.transpose());
  for (std::size_t l = 0; l < layers.size(); ++l) {
    Matrix z = layers[l].w * acts.back();
    if (arch_.bias) z.colwise() += layers[l].b;
    if (l + 1 < layers.size() && sig) z = z.unaryExpr([](double v) { return sigmoid(v); });
    acts.push_back(std::move(z));
  }

  const Matrix& out = acts.back();
  Matrix delta(out.rows(), batch);
  double loss = 0.0;
  switch (arch_.head) {
    case LossHead::cross_entropy:
      for (Index i = 0; i < batch; ++i) {
        const double m = out.col(i).maxCoeff();
        const Vector e = (out.col(i).array() - m).exp().matrix();
        const double s = e.sum();
        const auto y = static_cast<Index>(labels[i]);
        loss += m + std::log(s) - out(y, i);
        delta.col(i) = e / s;
        delta(y, i) -= 1.0;
      }
      break;
    case LossHead::logistic_l2:
      for (Index i = 0; i < batch; ++i) {
        const double t = labels[i] > 0.5 ? 1.0 : -1.0;
        loss += softplus(-t * out(0, i));
        delta(0, i) = -t * sigmoid(-t * out(0, i));
      }
      break;
    case LossHead::mse:
      for (Index i = 0; i < batch; ++i) {
        const double r = out(0, i) - labels[i];
        loss += r * r;
        delta(0, i) = 2.0 * r;
      }
      break;
  }
  loss *= inv_b;
  delta *= inv_b;
  if (arch_.head == LossHead::logistic_l2) loss += 0.5 * arch_.l2 * x.squaredNorm();

  if (grad != nullptr) {
    // Walk the packed layout backwards.
    Index offset = num_params_;
    for (std::size_t l = layers.size(); l-- > 0;) {
      const Index rows = layers[l].w.rows();
      const Index cols = layers[l].w.cols();
      if (arch_.bias) {
        offset -= rows;
        grad->segment(offset, rows) = delta.rowwise().sum();
      }
      offset -= rows * cols;
      Eigen::Map<Matrix> gw(grad->data() + offset, rows, cols);
      gw.noalias() = delta * acts[l].transpose();
      if (l > 0) {
        Matrix back = layers[l].w.transpose() * delta;
        if (sig) back.array() *= acts[l].array() * (1.0 - acts[l].array());
        delta = std::move(back);
      }
    }
    if (arch_.head == LossHead::logistic_l2) *grad += arch_.l2 * x;
  }
  return loss;
}

double MlpModel::value(const Vector& x) const {
  return evaluate(x, data_->features, data_->labels, nullptr);
}

void MlpModel::gradient(const Vector& x, Vector& out) const {
  evaluate(x, data_->features, data_->labels, &out);
}

double MlpModel::batch_value(const Vector& x, std::span<const Index> batch) const {
  const std::vector<Index> idx(batch.begin(), batch.end());
  return evaluate(x, data_->features(idx, Eigen::all), data_->labels(idx), nullptr);
}

void MlpModel::batch_gradient(const Vector& x, std::span<const Index> batch, Vector& out) const {
  const std::vector<Index> idx(batch.begin(), batch.end());
  evaluate(x, data_->features(idx, Eigen::all), data_->labels(idx), &out);
}

LossModelPtr mlp_model(MlpArch arch, std::shared_ptr<const Dataset> data) {
  return std::make_shared<MlpModel>(std::move(arch), std::move(data));
}

Vector mlp_init(const MlpArch& arch, RngStream& rng, double scale) {
  Vector x = Vector::Zero(arch.num_parameters());
  Index offset = 0;
  for (std::size_t l = 1; l < arch.widths.size(); ++l) {
    const Index out = arch.widths[l];
    const Index in = arch.widths[l - 1];
    const double sd = scale / std::sqrt(static_cast<double>(in));
    for (Index k = 0; k < out * in; ++k) x[offset + k] = sd * rng.normal();
    offset += out * in + (arch.bias ? out : 0);
  }
  return x;
}

TeacherNetwork make_teacher_network(Index p, Index depth, Index width, RngStream& rng) {
  if (depth < 0 || width < 1) throw PreconditionError("teacher: bad depth or width");
  TeacherNetwork t;
  t.arch.widths.push_back(p);
  for (Index i = 0; i < depth; ++i) t.arch.widths.push_back(width);
  t.arch.widths.push_back(1);
  t.arch.activation = Activation::identity;
  t.arch.head = LossHead::mse;
  t.params = mlp_init(t.arch, rng, 1.0);
  return t;
}

TeacherData synth_teacher(Index n, Index p, std::uint64_t seed, const SynthOptions& options) {
  if (n < 1 || p < 1) throw PreconditionError("synth_dataset: n and p must be positive");
  RngStream rng(seed, 0x7465616368657273ull);
  RngStream teacher_rng = rng.substream(1);
  TeacherData out;
  out.teacher =
      make_teacher_network(p, options.teacher_depth, options.teacher_width, teacher_rng);
  Dataset& data = out.data;
  data.features.resize(n, p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) data.features(i, j) = rng.normal();
  }
  data.classification = false;
  data.num_classes = 0;
  data.labels = Vector::Zero(n);
  const MlpModel net(out.teacher.arch, std::make_shared<const Dataset>(data));
  data.labels = net.forward(out.teacher.params, data.features).row(0).transpose();
  data.validate();
  return out;
}

}  // namespace samsde
