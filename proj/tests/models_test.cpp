// Copyright 2026 The mmfd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "mmfd/error.hpp"
#include "mmfd/models.hpp"
#include "mmfd/rng.hpp"
#include "test_support.hpp"

namespace mmfd {
namespace {

const FusionDims kDims{2, 3, 17};

LabeledBundle bundle(const std::string& id, std::vector<double> text, std::vector<double> image,
                     std::vector<double> social, BinaryLabel label) {
  return {assemble_fusion(id, std::move(text), std::move(image), std::move(social), kDims), label};
}

// Two clusters split by the line x0 + x1 = 0 with a margin of at least 0.5.
std::vector<LabeledBundle> separable_set(std::uint64_t seed, std::size_t n = 40) {
  Rng rng(seed);
  std::vector<LabeledBundle> out;
  for (std::size_t i = 0; i < n; ++i) {
    const bool positive = i % 2 == 0;
    const double along = rng.uniform(-2, 2);
    const double across = rng.uniform(0.5, 2.0) * (positive ? 1 : -1);
    std::vector<double> social(17);
    for (auto& s : social) s = rng.uniform(0, 100);
    for (std::size_t c : {2, 6, 8, 9, 10, 12, 13, 16}) social[c] = rng.bernoulli(0.5) ? 1.0 : 0.0;
    out.push_back(bundle("r" + std::to_string(i), {across + along, across - along},
                         {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}, social,
                         positive ? BinaryLabel::Misinformation : BinaryLabel::Other));
  }
  return out;
}

ExperimentSpec spec_for(std::vector<Modality> m, std::vector<std::string> combo, std::uint64_t seed = 1) {
  ExperimentSpec spec;
  spec.name = "t";
  spec.modalities = std::move(m);
  spec.backend_combo = std::move(combo);
  spec.seed = seed;
  spec.hyperparams.epochs = 200;
  spec.hyperparams.early_stop_patience = std::nullopt;
  return spec;
}

TEST(Models, SeparableDataIsFitExactly) {
  const auto data = separable_set(3);
  // Independent check that the set is linearly separable: a plain perceptron
  // must converge on it.
  {
    double w0 = 0, w1 = 0, b = 0;
    bool converged = false;
    for (int pass = 0; pass < 1000 && !converged; ++pass) {
      converged = true;
      for (const auto& d : data) {
        const auto x = d.bundle.block(Modality::Text, kDims);
        const double y = d.label == BinaryLabel::Misinformation ? 1 : -1;
        if (y * (w0 * x[0] + w1 * x[1] + b) <= 0) {
          w0 += y * x[0];
          w1 += y * x[1];
          b += y;
          converged = false;
        }
      }
    }
    ASSERT_TRUE(converged);
  }
  const auto registry = BackendRegistry::with_defaults();
  for (const std::string backend : {"linear", "mlp"}) {
    const auto model = train(spec_for({Modality::Text}, {backend}), data, kDims, registry);
    std::size_t correct = 0;
    for (const auto& d : data) correct += predict(model, d.bundle).label == d.label;
    EXPECT_EQ(correct, data.size()) << backend;
    EXPECT_FALSE(model.training_history.empty());
    EXPECT_LT(model.training_history.back(), model.training_history.front());
  }
}

TEST(Models, DeterministicForSpecAndSeed) {
  const auto data = separable_set(5);
  const auto registry = BackendRegistry::with_defaults();
  const auto spec = spec_for({Modality::Text, Modality::Image, Modality::Social}, {"linear", "mlp"}, 77);
  const auto a = train(spec, data, kDims, registry);
  const auto b = train(spec, data, kDims, registry);
  EXPECT_EQ(a.parameters, b.parameters);
  EXPECT_EQ(a.member_histories, b.member_histories);
  const auto c = train(spec_for(spec.modalities, spec.backend_combo, 78), data, kDims, registry);
  EXPECT_NE(a.parameters, c.parameters);
}

TEST(Models, InputSeesOnlySelectedBlocks) {
  const auto data = separable_set(8);
  const auto registry = BackendRegistry::with_defaults();
  const auto model = train(spec_for({Modality::Text}, {"mlp"}), data, kDims, registry);
  // Changing or zeroing unselected blocks leaves predictions untouched.
  for (const auto& d : data) {
    const auto x = d.bundle.block(Modality::Text, kDims);
    const auto zeroed =
        assemble_fusion(d.bundle.tweet_id, std::vector<double>(x.begin(), x.end()), std::nullopt, std::nullopt, kDims);
    EXPECT_EQ(predict(model, d.bundle).probability, predict(model, zeroed).probability);
  }
  EXPECT_EQ(model_input(model, data[0].bundle).size(), kDims.text);

  const auto social = train(spec_for({Modality::Social}, {"linear"}), data, kDims, registry);
  for (double v : model_input(social, data[0].bundle)) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Models, ErrorCases) {
  auto data = separable_set(2);
  const auto registry = BackendRegistry::with_defaults();
  const auto spec = spec_for({Modality::Text}, {"linear"});
  std::vector<LabeledBundle> one_class;
  for (const auto& d : data)
    if (d.label == BinaryLabel::Misinformation) one_class.push_back(d);
  EXPECT_THROW(train(spec, one_class, kDims, registry), InsufficientData);
  EXPECT_THROW(train(spec_for({Modality::Text}, {"svm"}), data, kDims, registry), NotRegistered);
  EXPECT_THROW(train(spec, data, FusionDims{2, 3, 5}, registry), DimensionMismatch);
  EXPECT_THROW(train(spec_for({}, {"linear"}), data, kDims, registry), ConfigError);

  auto bad = spec;
  bad.hyperparams.optimizer = "lbfgs";
  EXPECT_THROW(train(bad, data, kDims, registry), ConfigError);

  const auto model = train(spec, data, kDims, registry);
  FeatureBundle wrong = data[0].bundle;
  wrong.fusion_vec.pop_back();
  EXPECT_THROW(predict(model, wrong), DimensionMismatch);
}

TEST(Models, DivergenceIsReported) {
  auto data = separable_set(4);
  for (auto& d : data)
    for (auto& v : d.bundle.fusion_vec) v *= 1e305;
  auto spec = spec_for({Modality::Text}, {"linear"});
  spec.hyperparams.optimizer = "sgd";
  spec.hyperparams.learning_rate = 1e10;
  EXPECT_THROW(train(spec, data, kDims, BackendRegistry::with_defaults()), NonFiniteLoss);
}

TEST(Models, Registry) {
  auto registry = BackendRegistry::with_defaults();
  EXPECT_EQ(registry.names(), (std::vector<std::string>{"linear", "mlp"}));
  EXPECT_THROW(registry.register_backend("linear", registry.resolve("mlp")), DuplicateName);
  EXPECT_THROW(registry.resolve("forest"), NotRegistered);
  registry.register_backend("linear2", registry.resolve("linear"));
  EXPECT_TRUE(registry.contains("linear2"));
}

TEST(Models, DecisionThreshold) {
  EXPECT_EQ(label_for_probability(0.5), BinaryLabel::Misinformation);
  EXPECT_EQ(label_for_probability(0.49), BinaryLabel::Other);
  EXPECT_EQ(label_for_probability(1.0), BinaryLabel::Misinformation);
  EXPECT_EQ(label_for_probability(0.0), BinaryLabel::Other);
}

TEST(Models, SaveLoadPreservesPredictions) {
  testing::TempDir dir;
  const auto data = separable_set(6);
  const auto registry = BackendRegistry::with_defaults();
  const auto model =
      train(spec_for({Modality::Text, Modality::Image, Modality::Social}, {"mlp", "linear"}), data, kDims, registry);
  save_model(model, dir / "m.json");
  const auto loaded = load_model(dir / "m.json", registry);
  EXPECT_EQ(loaded.spec, model.spec);
  EXPECT_EQ(loaded.dims, model.dims);
  EXPECT_EQ(loaded.normalizer, model.normalizer);
  EXPECT_EQ(loaded.parameters, model.parameters);
  EXPECT_EQ(loaded.fitted_at, model.fitted_at);
  for (const auto& d : separable_set(99, 100))
    EXPECT_EQ(predict(loaded, d.bundle).probability, predict(model, d.bundle).probability);
}

TEST(Models, SpecJson) {
  const auto spec = spec_for({Modality::Social, Modality::Text, Modality::Text}, {"linear", "mlp"}, 9);
  auto doc = to_json(spec);
  const auto back = experiment_spec_from_json(doc);
  EXPECT_EQ(back.modalities, (std::vector<Modality>{Modality::Text, Modality::Social}));
  EXPECT_EQ(back.modality_label(), "Text+Social");
  EXPECT_EQ(back.backend_label(), "linear+mlp");
  EXPECT_EQ(back.hyperparams, spec.hyperparams);
  EXPECT_EQ(modality_from_string("image"), Modality::Image);
  EXPECT_FALSE(modality_from_string("audio"));
}

}  // namespace
}  // namespace mmfd
