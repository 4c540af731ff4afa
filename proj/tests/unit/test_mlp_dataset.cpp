// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#include "samsde/dataset.hpp"
#include "samsde/mlp.hpp"
#include "samsde/optim.hpp"
#include "samsde/rng.hpp"

#include "fd_check.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace samsde {
namespace {

using testing::fd_gradient;
using testing::rel_error;

std::shared_ptr<const Dataset> share(Dataset d) { return std::make_shared<const Dataset>(std::move(d)); }

TEST(DatasetCsv, ParsesShapes) {
  std::istringstream in("a,b,label\n1,2,0\n3,4,1\n5,6.5,1\n");
  const Dataset d = parse_dataset_csv(in);
  EXPECT_EQ(d.size(), 3);
  EXPECT_EQ(d.feature_dim(), 2);
  EXPECT_TRUE(d.classification);
  EXPECT_EQ(d.num_classes, 2);
}

TEST(DatasetCsv, StandardizesColumns) {
  std::istringstream in("a,b,y\n1,10,0.5\n2,10,1.5\n3,10,2.25\n");
  const Dataset d = parse_dataset_csv(in);
  EXPECT_FALSE(d.classification);
  EXPECT_NEAR(d.features.col(0).mean(), 0.0, 1e-15);
  EXPECT_NEAR(d.features.col(0).squaredNorm() / 3.0, 1.0, 1e-14);
  // Constant column: centred only.
  EXPECT_EQ(d.features.col(1), Vector::Zero(3));
}

TEST(DatasetCsv, KeepsRawValuesWhenAsked) {
  std::istringstream in("a,y\n1,0\n2,1\n");
  const Dataset d = parse_dataset_csv(in, false);
  EXPECT_EQ(d.features(1, 0), 2.0);
}

TEST(DatasetCsv, RejectsMalformedRow) {
  std::istringstream in("a,b,label\n1,2,0\n3,1\n");
  try {
    parse_dataset_csv(in);
    FAIL() << "expected DatasetParseError";
  } catch (const DatasetParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(DatasetCsv, RejectsNonNumericFeature) {
  std::istringstream in("a,b,label\n1,x,0\n");
  EXPECT_THROW(parse_dataset_csv(in), DatasetParseError);
  std::istringstream nan_in("a,b,label\n1,nan,0\n");
  EXPECT_THROW(parse_dataset_csv(nan_in), DatasetParseError);
}

TEST(DatasetCsv, RejectsMissingRows) {
  std::istringstream in("a,b,label\n");
  EXPECT_THROW(parse_dataset_csv(in), DatasetParseError);
}

TEST(SynthDataset, BlobsAreSeedDeterministic) {
  const Dataset a = synth_dataset("blobs", 50, 4, 9);
  const Dataset b = synth_dataset("blobs", 50, 4, 9);
  const Dataset c = synth_dataset("blobs", 50, 4, 10);
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_NE(a.features, c.features);
}

TEST(SynthDataset, RejectsUnknownKind) {
  EXPECT_THROW(synth_dataset("spirals", 10, 2, 0), PreconditionError);
}

TEST(Mlp, ZeroWeightsGiveLogTwoOnBalancedBinaryCrossEntropy) {
  auto data = share(synth_dataset("blobs", 40, 3, 1));
  MlpArch arch{{3, 5, 2}, Activation::identity, LossHead::cross_entropy};
  const MlpModel m(arch, data);
  EXPECT_NEAR(m.value(Vector::Zero(m.dim())), std::log(2.0), 1e-15);
}

TEST(Mlp, TeacherFitsItsOwnTargetsExactly) {
  const TeacherData td = synth_teacher(64, 5, 3);
  const TeacherNetwork& t = td.teacher;
  const Dataset& data = td.data;
  EXPECT_EQ(synth_dataset("teacher", 64, 5, 3).labels, data.labels);
  const MlpModel student(t.arch, share(data));
  EXPECT_EQ(student.dim(), t.params.size());
  EXPECT_NEAR(student.value(t.params), 0.0, 1e-20);
  EXPECT_GT(data.labels.squaredNorm(), 0.0);
}

TEST(Mlp, GradientMatchesFiniteDifferencesForEveryHead) {
  RngStream rng(61, 0);
  auto blobs2 = share(synth_dataset("blobs", 24, 3, 2));
  SynthOptions three;
  three.classes = 3;
  auto blobs3 = share(synth_dataset("blobs", 30, 3, 4, three));
  auto teacher = share(synth_dataset("teacher", 20, 3, 5));

  const std::vector<std::pair<MlpArch, std::shared_ptr<const Dataset>>> cases = {
      {{{3, 4, 4, 3}, Activation::sigmoid, LossHead::cross_entropy}, blobs3},
      {{{3, 4, 4, 1}, Activation::sigmoid, LossHead::logistic_l2, 0.1}, blobs2},
      {{{3, 4, 4, 1}, Activation::sigmoid, LossHead::mse}, teacher},
      {{{3, 4, 4, 2}, Activation::identity, LossHead::cross_entropy}, blobs2},
  };
  for (const auto& [arch, data] : cases) {
    const MlpModel m(arch, data);
    for (int p = 0; p < 5; ++p) {
      const Vector x = mlp_init(arch, rng, 1.5);
      Vector noisy = x + 0.1 * rng.normal_vector(x.size());
      EXPECT_LT(rel_error(m.gradient(noisy), fd_gradient(m, noisy, 1e-6), 1e-3), 1e-4);
      EXPECT_TRUE(is_symmetric(m.hessian(noisy).matrix(), 1e-6));
    }
  }
}

TEST(Mlp, BatchGradientOfAllIndicesIsFullGradient) {
  auto data = share(synth_dataset("blobs", 16, 2, 7));
  MlpArch arch{{2, 3, 1}, Activation::sigmoid, LossHead::logistic_l2, 0.1};
  const MlpModel m(arch, data);
  RngStream rng(62, 0);
  const Vector x = mlp_init(arch, rng);
  std::vector<Index> all(16);
  for (Index i = 0; i < 16; ++i) all[static_cast<std::size_t>(i)] = i;
  Vector gb(m.dim());
  m.batch_gradient(x, all, gb);
  EXPECT_LT(rel_error(gb, m.gradient(x)), 1e-14);
  EXPECT_NEAR(m.batch_value(x, all), m.value(x), 1e-14);
}

TEST(Mlp, RejectsDimensionMismatch) {
  auto data = share(synth_dataset("blobs", 10, 3, 1));
  EXPECT_THROW(MlpModel(MlpArch{{4, 2}, Activation::identity, LossHead::cross_entropy}, data),
               PreconditionError);
  EXPECT_THROW(MlpModel(MlpArch{{3, 3}, Activation::identity, LossHead::cross_entropy}, data),
               PreconditionError);
  EXPECT_THROW(MlpModel(MlpArch{{3, 2}, Activation::identity, LossHead::logistic_l2}, data),
               PreconditionError);
}

TEST(Mlp, SgdOnSeparatedBlobsReachesSmallLoss) {
  // Two blobs 10 noise-std apart are linearly separable with a wide margin.
  auto data = share(synth_dataset("blobs", 200, 2, 8));
  MlpArch arch{{2, 2}, Activation::identity, LossHead::cross_entropy};
  const auto m = mlp_model(arch, data);
  const GradOracle oracle = GradOracle::minibatch(10);
  OptimizerSpec spec;
  spec.variant = Variant::sgd;
  spec.eta = 0.5;
  RngStream rng(63, 0);
  Vector x = Vector::Zero(m->dim());
  StepWorkspace ws;
  for (int k = 0; k < 3000; ++k) step_inplace(spec, *m, oracle, x, rng, ws);
  EXPECT_LT(m->value(x), 0.01);
}

}  // namespace
}  // namespace samsde
