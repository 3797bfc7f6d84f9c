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

#include "classifiers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "mmfd/error.hpp"
#include "mmfd/rng.hpp"

namespace mmfd::detail {
namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEpsilon = 1e-8;

class DenseNetwork final : public Classifier {
 public:
  DenseNetwork(std::string backend, std::size_t input_dim, std::size_t hidden)
      : backend_(std::move(backend)), input_dim_(input_dim), hidden_(hidden) {
    if (input_dim_ == 0) throw ConfigError("classifier input dimension must be positive");
    params_.assign(parameter_count(), 0.0);
  }

  std::string backend() const override { return backend_; }
  std::size_t input_dim() const override { return input_dim_; }

  std::vector<double> fit(const TrainingData& data, const HyperParams& hyper, std::uint64_t seed) override {
    if (data.cols != input_dim_) throw DimensionMismatch("training data width does not match the classifier");
    Rng rng(seed);
    initialise(rng);

    std::vector<double> grad(params_.size());
    std::vector<double> m(params_.size(), 0.0);
    std::vector<double> v(params_.size(), 0.0);
    std::vector<std::size_t> order(data.rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Scratch scratch(hidden_);

    std::vector<double> history;
    std::vector<double> best = params_;
    double best_loss = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;
    std::uint64_t step = 0;
    const bool adam = hyper.optimizer == "adam";

    for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
      rng.shuffle(std::span<std::size_t>(order));
      for (std::size_t start = 0; start < data.rows; start += hyper.batch_size) {
        const std::size_t end = std::min(start + hyper.batch_size, data.rows);
        std::fill(grad.begin(), grad.end(), 0.0);
        double weight_sum = 0.0;
        for (std::size_t k = start; k < end; ++k) {
          const std::size_t i = order[k];
          accumulate_gradient(data.row(i), data.targets[i], data.weights[i], grad, scratch);
          weight_sum += data.weights[i];
        }
        if (weight_sum <= 0.0) continue;
        ++step;
        const double bias1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(step));
        const double bias2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(step));
        for (std::size_t p = 0; p < params_.size(); ++p) {
          const double g = grad[p] / weight_sum;
          if (adam) {
            m[p] = kAdamBeta1 * m[p] + (1.0 - kAdamBeta1) * g;
            v[p] = kAdamBeta2 * v[p] + (1.0 - kAdamBeta2) * g * g;
            params_[p] -= hyper.learning_rate * (m[p] / bias1) / (std::sqrt(v[p] / bias2) + kAdamEpsilon);
          } else {
            params_[p] -= hyper.learning_rate * g;
          }
        }
      }

      const double loss = dataset_loss(data, scratch);
      if (!std::isfinite(loss)) throw NonFiniteLoss(epoch + 1);
      history.push_back(loss);
      if (loss < best_loss) {
        best_loss = loss;
        best = params_;
        since_best = 0;
      } else if (hyper.early_stop_patience && ++since_best >= *hyper.early_stop_patience) {
        break;
      }
    }
    params_ = std::move(best);
    return history;
  }

  double decision_score(std::span<const double> x) const override {
    if (x.size() != input_dim_) throw DimensionMismatch("classifier input has the wrong length");
    Scratch scratch(hidden_);
    forward(x, scratch);
    return scratch.logits[1] - scratch.logits[0];
  }

  std::vector<std::uint8_t> parameters() const override {
    std::vector<std::uint8_t> blob(params_.size() * 8);
    for (std::size_t p = 0; p < params_.size(); ++p) {
      const auto bits = std::bit_cast<std::uint64_t>(params_[p]);
      for (int b = 0; b < 8; ++b) blob[p * 8 + static_cast<std::size_t>(b)] = static_cast<std::uint8_t>(bits >> (8 * b));
    }
    return blob;
  }

  void load_parameters(std::span<const std::uint8_t> blob) override {
    if (blob.size() != params_.size() * 8) throw Error("parameter blob size does not match backend '" + backend_ + "'");
    for (std::size_t p = 0; p < params_.size(); ++p) {
      std::uint64_t bits = 0;
      for (int b = 7; b >= 0; --b) bits = (bits << 8) | blob[p * 8 + static_cast<std::size_t>(b)];
      params_[p] = std::bit_cast<double>(bits);
    }
  }

 private:
  struct Scratch {
    explicit Scratch(std::size_t hidden) : h(hidden), dh(hidden) {}
    std::vector<double> h;
    std::vector<double> dh;
    double logits[2] = {0.0, 0.0};
  };

  // Layout: [W1 (H x d), b1 (H), W2 (2 x H), b2 (2)] or [W (2 x d), b (2)].
  std::size_t parameter_count() const {
    return hidden_ ? hidden_ * input_dim_ + hidden_ + 2 * hidden_ + 2 : 2 * input_dim_ + 2;
  }

  void initialise(Rng& rng) {
    std::fill(params_.begin(), params_.end(), 0.0);
    if (!hidden_) return;
    const double limit1 = std::sqrt(6.0 / static_cast<double>(input_dim_ + hidden_));
    for (std::size_t p = 0; p < hidden_ * input_dim_; ++p) params_[p] = rng.uniform(-limit1, limit1);
    const double limit2 = std::sqrt(6.0 / static_cast<double>(hidden_ + 2));
    const std::size_t w2 = hidden_ * input_dim_ + hidden_;
    for (std::size_t p = 0; p < 2 * hidden_; ++p) params_[w2 + p] = rng.uniform(-limit2, limit2);
  }

  void forward(std::span<const double> x, Scratch& s) const {
    const double* w = params_.data();
    if (!hidden_) {
      const double* b = w + 2 * input_dim_;
      for (std::size_t c = 0; c < 2; ++c) {
        double z = b[c];
        const double* wc = w + c * input_dim_;
        for (std::size_t j = 0; j < input_dim_; ++j) z += wc[j] * x[j];
        s.logits[c] = z;
      }
      return;
    }
    const double* b1 = w + hidden_ * input_dim_;
    const double* w2 = b1 + hidden_;
    const double* b2 = w2 + 2 * hidden_;
    for (std::size_t u = 0; u < hidden_; ++u) {
      double a = b1[u];
      const double* wu = w + u * input_dim_;
      for (std::size_t j = 0; j < input_dim_; ++j) a += wu[j] * x[j];
      s.h[u] = std::tanh(a);
    }
    for (std::size_t c = 0; c < 2; ++c) {
      double z = b2[c];
      for (std::size_t u = 0; u < hidden_; ++u) z += w2[c * hidden_ + u] * s.h[u];
      s.logits[c] = z;
    }
  }

  // Returns -log p(target) after a forward pass already stored in s.
  static double softmax_loss(const Scratch& s, int target, double p[2]) {
    const double mx = std::max(s.logits[0], s.logits[1]);
    const double e0 = std::exp(s.logits[0] - mx);
    const double e1 = std::exp(s.logits[1] - mx);
    const double total = e0 + e1;
    p[0] = e0 / total;
    p[1] = e1 / total;
    return -(s.logits[target] - mx - std::log(total));
  }

  void accumulate_gradient(std::span<const double> x, int target, double weight, std::vector<double>& grad,
                           Scratch& s) const {
    forward(x, s);
    double p[2];
    softmax_loss(s, target, p);
    const double dz[2] = {weight * (p[0] - (target == 0 ? 1.0 : 0.0)), weight * (p[1] - (target == 1 ? 1.0 : 0.0))};
    if (!hidden_) {
      double* gb = grad.data() + 2 * input_dim_;
      for (std::size_t c = 0; c < 2; ++c) {
        double* gw = grad.data() + c * input_dim_;
        for (std::size_t j = 0; j < input_dim_; ++j) gw[j] += dz[c] * x[j];
        gb[c] += dz[c];
      }
      return;
    }
    const double* w2 = params_.data() + hidden_ * input_dim_ + hidden_;
    double* gw1 = grad.data();
    double* gb1 = gw1 + hidden_ * input_dim_;
    double* gw2 = gb1 + hidden_;
    double* gb2 = gw2 + 2 * hidden_;
    for (std::size_t c = 0; c < 2; ++c) {
      for (std::size_t u = 0; u < hidden_; ++u) gw2[c * hidden_ + u] += dz[c] * s.h[u];
      gb2[c] += dz[c];
    }
    for (std::size_t u = 0; u < hidden_; ++u) {
      const double back = (w2[u] * dz[0] + w2[hidden_ + u] * dz[1]) * (1.0 - s.h[u] * s.h[u]);
      double* gu = gw1 + u * input_dim_;
      for (std::size_t j = 0; j < input_dim_; ++j) gu[j] += back * x[j];
      gb1[u] += back;
    }
  }

  double dataset_loss(const TrainingData& data, Scratch& s) const {
    double total = 0.0;
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < data.rows; ++i) {
      forward(data.row(i), s);
      double p[2];
      total += data.weights[i] * softmax_loss(s, data.targets[i], p);
      weight_sum += data.weights[i];
    }
    return weight_sum > 0.0 ? total / weight_sum : 0.0;
  }

  std::string backend_;
  std::size_t input_dim_;
  std::size_t hidden_;
  std::vector<double> params_;
};

}  // namespace

std::unique_ptr<Classifier> make_dense_network(std::string backend, std::size_t input_dim, std::size_t hidden_units) {
  return std::make_unique<DenseNetwork>(std::move(backend), input_dim, hidden_units);
}

}  // namespace mmfd::detail
