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

#include <benchmark/benchmark.h>

#include "mmfd/models.hpp"
#include "mmfd/rng.hpp"

namespace {

std::vector<mmfd::LabeledBundle> make_training(const mmfd::FusionDims& dims, std::size_t n) {
  mmfd::Rng rng(9);
  std::vector<mmfd::LabeledBundle> out;
  for (std::size_t i = 0; i < n; ++i) {
    const bool positive = rng.bernoulli(0.83);
    auto block = [&](std::size_t width) {
      std::vector<double> v(width);
      for (auto& x : v) x = rng.normal() + (positive ? 0.2 : -0.2);
      return v;
    };
    std::vector<double> social(dims.social);
    for (auto& x : social) x = rng.uniform(0, 1000);
    out.push_back({mmfd::assemble_fusion("r" + std::to_string(i), block(dims.text), block(dims.image), social, dims),
                   positive ? mmfd::BinaryLabel::Misinformation : mmfd::BinaryLabel::Other});
  }
  return out;
}

void BM_TrainTrimodal(benchmark::State& state, const char* backend) {
  const mmfd::FusionDims dims{64, 32, 17};
  const auto data = make_training(dims, 1223);
  const auto registry = mmfd::BackendRegistry::with_defaults();
  mmfd::ExperimentSpec spec;
  spec.name = "bench";
  spec.modalities = {mmfd::Modality::Text, mmfd::Modality::Image, mmfd::Modality::Social};
  spec.backend_combo = {backend};
  spec.hyperparams.epochs = 10;
  spec.hyperparams.early_stop_patience = std::nullopt;
  for (auto _ : state) benchmark::DoNotOptimize(mmfd::train(spec, data, dims, registry));
}
BENCHMARK_CAPTURE(BM_TrainTrimodal, linear, "linear")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TrainTrimodal, mlp, "mlp")->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State& state) {
  const mmfd::FusionDims dims{64, 32, 17};
  const auto data = make_training(dims, 200);
  mmfd::ExperimentSpec spec;
  spec.name = "bench";
  spec.modalities = {mmfd::Modality::Text, mmfd::Modality::Image, mmfd::Modality::Social};
  spec.backend_combo = {"linear", "mlp"};
  spec.hyperparams.epochs = 3;
  const auto model = mmfd::train(spec, data, dims, mmfd::BackendRegistry::with_defaults());
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(mmfd::predict(model, data[i++ % data.size()].bundle));
}
BENCHMARK(BM_Predict);

}  // namespace
