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

#ifndef SIDN_GRADCHECK_HPP_
#define SIDN_GRADCHECK_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "sidn/tensor.hpp"

namespace sidn {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // coordinates whose probe crossed a kink
};

// |a - n| / max(|a|, |n|, 1e-8)
double relative_error(double analytic, double numeric);

// Central differences on every coordinate of `param`, compared with
// `analytic`. `loss` re-evaluates the scalar objective from the current
// contents of `param`. When `signature` is set it must return a digest of
// the discrete branch state (relu masks, pooling winners) after the most
// recent `loss` call; a coordinate whose +step or -step probe changes the
// digest straddles a kink and is skipped.
GradCheckResult grad_check(const std::function<double()>& loss, Tensor& param,
                           const Tensor& analytic, double step = 1e-6,
                           const std::function<std::uint64_t()>& signature = {});

// Same check for a loss written as the sum of `terms()`. Differences are
// taken term by term before summing, so terms a probe leaves untouched
// cancel exactly and only the affected terms contribute roundoff.
GradCheckResult grad_check_terms(const std::function<std::vector<double>()>& terms,
                                 Tensor& param, const Tensor& analytic, double step = 1e-6,
                                 const std::function<std::uint64_t()>& signature = {});

// Incremental digest helper for signatures.
class BranchDigest {
 public:
  void add(bool bit) { mix(bit ? 0x9e3779b97f4a7c15ULL : 0x7f4a7c159e3779b9ULL); }
  void add(std::uint64_t v) { mix(v); }
  std::uint64_t value() const { return h_; }

 private:
  void mix(std::uint64_t v) {
    h_ ^= v + 0x9e3779b97f4a7c15ULL + (h_ << 6) + (h_ >> 2);
  }
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace sidn

#endif  // SIDN_GRADCHECK_HPP_
