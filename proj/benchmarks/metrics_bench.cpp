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

#include "mmfd/evaluation.hpp"
#include "mmfd/rng.hpp"

namespace {

using mmfd::BinaryLabel;

void BM_ConfusionAndMetrics(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  mmfd::Rng rng(1);
  std::vector<BinaryLabel> y(n), p(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = rng.bernoulli(0.83) ? BinaryLabel::Misinformation : BinaryLabel::Other;
    p[i] = rng.bernoulli(0.5) ? BinaryLabel::Misinformation : BinaryLabel::Other;
  }
  for (auto _ : state) benchmark::DoNotOptimize(mmfd::metrics(mmfd::confusion(y, p)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_ConfusionAndMetrics)->Arg(306)->Arg(1 << 16);

void BM_FormatMetric(benchmark::State& state) {
  double v = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mmfd::format_metric(v));
    v += 0.001;
    if (v > 1.0) v = 0.0;
  }
}
BENCHMARK(BM_FormatMetric);

}  // namespace
