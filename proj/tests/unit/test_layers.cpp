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

#include <gtest/gtest.h>

#include <cmath>

#include "gradcases.hpp"
#include "sidn/error.hpp"
#include "sidn/layers.hpp"

namespace sidn {
namespace {

using testing::random_tensor;

TEST(GradCheck, EveryLayerMatchesFiniteDifferences) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (const auto& c : testing::layer_grad_checks(seed)) {
      EXPECT_LT(c.result.max_rel_error, 1e-5) << c.name << " seed " << seed;
      EXPECT_GT(c.result.checked, 0U) << c.name << " seed " << seed;
    }
  }
}

}  // namespace
}  // namespace sidn
