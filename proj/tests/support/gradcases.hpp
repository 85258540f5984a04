// Copyright 2026 The SIDN Authors.
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

#ifndef SIDN_TESTS_SUPPORT_GRADCASES_HPP_
#define SIDN_TESTS_SUPPORT_GRADCASES_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "sidn/gradcheck.hpp"
#include "sidn/model.hpp"
#include "sidn/rng.hpp"

namespace sidn::testing {

Tensor random_tensor(std::vector<std::size_t> shape, Rng& rng, double scale = 1.0);

struct NamedCheck {
  std::string name;  // "<layer>.<tensor>"
  GradCheckResult result;
};

// Central-difference checks of every layer kernel on a random problem built
// from `seed`. Each layer is probed through a random linear projection of its
// outputs so that every output coordinate carries gradient.
std::vector<NamedCheck> layer_grad_checks(std::uint64_t seed);

// The tiny end-to-end configuration used for whole-model checks.
ModelConfig tiny_config(Variant variant);

// Checks every trainable tensor of a tiny model on a random batch (dropout
// disabled), loss = bce + L2.
std::vector<NamedCheck> model_grad_checks(std::uint64_t seed, Variant variant);

}  // namespace sidn::testing

#endif  // SIDN_TESTS_SUPPORT_GRADCASES_HPP_
