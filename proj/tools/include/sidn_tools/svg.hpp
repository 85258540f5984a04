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

#ifndef SIDN_TOOLS_SVG_HPP_
#define SIDN_TOOLS_SVG_HPP_

#include <cstddef>
#include <string>

#include "sidn/explain.hpp"
#include "sidn/metrics.hpp"

namespace sidn::tools {

std::string confusion_svg(const ConfusionMatrix& cm);
std::string roc_svg(const RocCurve& roc, double auc);
// Positive contributions extend right of the base value, negative ones left.
std::string force_svg(const ForceData& data);
std::string summary_svg(const GlobalSummary& summary, std::size_t top_k);

// Escapes &, <, >, " for text nodes and attributes.
std::string xml_escape(std::string_view text);

}  // namespace sidn::tools

#endif  // SIDN_TOOLS_SVG_HPP_
