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

#pragma once

#include <memory>
#include <string>

#include "mmfd/models.hpp"

namespace mmfd::detail {

/// Softmax network with two output logits; hidden_units == 0 is plain
/// softmax regression.
std::unique_ptr<Classifier> make_dense_network(std::string backend, std::size_t input_dim, std::size_t hidden_units);

}  // namespace mmfd::detail
