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

#include "sidn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "sidn/error.hpp"

namespace sidn {

double relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / denom;
}

namespace {

template <typename Eval, typename Diff>
GradCheckResult check(const Eval& eval, const Diff& diff, Tensor& param, const Tensor& analytic,
                      double step, const std::function<std::uint64_t()>& signature) {
  if (!param.same_shape(analytic)) throw Error("analytic gradient shape mismatch");
  GradCheckResult result;
  std::uint64_t base_sig = 0;
  if (signature) {
    eval();
    base_sig = signature();
  }
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double saved = param[i];
    param[i] = saved + step;
    const auto up = eval();
    const bool up_kink = signature && signature() != base_sig;
    param[i] = saved - step;
    const auto down = eval();
    const bool down_kink = signature && signature() != base_sig;
    param[i] = saved;
    if (up_kink || down_kink) {
      ++result.skipped;
      continue;
    }
    const double numeric = diff(up, down) / (2.0 * step);
    result.max_rel_error = std::max(result.max_rel_error, relative_error(analytic[i], numeric));
    ++result.checked;
  }
  return result;
}

}  // namespace

GradCheckResult grad_check(const std::function<double()>& loss, Tensor& param,
                           const Tensor& analytic, double step,
                           const std::function<std::uint64_t()>& signature) {
  return check(loss, [](double up, double down) { return up - down; }, param, analytic, step,
               signature);
}

GradCheckResult grad_check_terms(const std::function<std::vector<double>()>& terms,
                                 Tensor& param, const Tensor& analytic, double step,
                                 const std::function<std::uint64_t()>& signature) {
  auto diff = [](const std::vector<double>& up, const std::vector<double>& down) {
    if (up.size() != down.size()) throw Error("term count changed between probes");
    double sum = 0.0;
    for (std::size_t j = 0; j < up.size(); ++j) sum += up[j] - down[j];
    return sum;
  };
  return check(terms, diff, param, analytic, step, signature);
}

}  // namespace sidn
