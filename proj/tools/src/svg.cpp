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

#include "sidn_tools/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace sidn::tools {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string open_svg(double w, double h) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\" font-family=\"sans-serif\">\n";
}

std::string text(double x, double y, std::string_view s, std::string_view anchor = "start",
                 int size = 12) {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + std::to_string(size) +
         "\" text-anchor=\"" + std::string(anchor) + "\">" + xml_escape(s) + "</text>\n";
}

std::string rect(double x, double y, double w, double h, std::string_view fill) {
  return "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" +
         num(h) + "\" fill=\"" + std::string(fill) + "\"/>\n";
}

std::string line(double x1, double y1, double x2, double y2, std::string_view stroke,
                 std::string_view extra = "") {
  return "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" +
         num(y2) + "\" stroke=\"" + std::string(stroke) + "\"" + std::string(extra) + "/>\n";
}

constexpr const char* kRed = "#d62728";
constexpr const char* kBlue = "#1f77b4";

}  // namespace

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string confusion_svg(const ConfusionMatrix& cm) {
  const double cell = 120.0;
  const double ox = 140.0;
  const double oy = 60.0;
  const double counts[2][2] = {{static_cast<double>(cm.tn), static_cast<double>(cm.fp)},
                               {static_cast<double>(cm.fn), static_cast<double>(cm.tp)}};
  const double peak = std::max({counts[0][0], counts[0][1], counts[1][0], counts[1][1], 1.0});
  std::string s = open_svg(ox + 2 * cell + 40, oy + 2 * cell + 70);
  s += text(ox + cell, 30, "Confusion matrix", "middle", 16);
  const char* names[2] = {"non-suicidal", "suicidal"};
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const double shade = counts[r][c] / peak;
      const int level = static_cast<int>(std::lround(255.0 - 180.0 * shade));
      char fill[16];
      std::snprintf(fill, sizeof fill, "rgb(%d,%d,255)", level, level);
      s += rect(ox + c * cell, oy + r * cell, cell, cell, fill);
      s += text(ox + c * cell + cell / 2, oy + r * cell + cell / 2 + 6,
                std::to_string(static_cast<long long>(counts[r][c])), "middle", 18);
    }
    s += text(ox - 8, oy + r * cell + cell / 2 + 4, names[r], "end");
    s += text(ox + r * cell + cell / 2, oy + 2 * cell + 20, names[r], "middle");
  }
  s += text(ox + cell, oy + 2 * cell + 45, "predicted", "middle");
  s += text(20, oy - 10, "actual");
  s += "</svg>\n";
  return s;
}

std::string roc_svg(const RocCurve& roc, double auc) {
  const double size = 300.0;
  const double ox = 60.0;
  const double oy = 40.0;
  std::string s = open_svg(ox + size + 30, oy + size + 60);
  s += text(ox + size / 2, 25, "ROC curve (AUC " + fixed4(auc) + ")", "middle", 16);
  s += "<rect x=\"" + num(ox) + "\" y=\"" + num(oy) + "\" width=\"" + num(size) + "\" height=\"" +
       num(size) + "\" fill=\"none\" stroke=\"black\"/>\n";
  s += line(ox, oy + size, ox + size, oy, "gray", " stroke-dasharray=\"4 4\"");
  s += "<polyline fill=\"none\" stroke=\"" + std::string(kBlue) + "\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < roc.size(); ++i) {
    if (i) s += ' ';
    s += num(ox + roc[i].fpr * size) + "," + num(oy + (1.0 - roc[i].tpr) * size);
  }
  s += "\"/>\n";
  s += text(ox + size / 2, oy + size + 35, "false positive rate", "middle");
  s += "<text x=\"18\" y=\"" + num(oy + size / 2) +
       "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
       num(oy + size / 2) + ")\">true positive rate</text>\n";
  s += "</svg>\n";
  return s;
}

std::string force_svg(const ForceData& data) {
  const double width = 700.0;
  const double row = 22.0;
  const double top = 70.0;
  double span = std::abs(data.prediction - data.base_value);
  for (const auto& it : data.items) span = std::max(span, std::abs(it.phi));
  if (span == 0.0) span = 1.0;
  const double mid = width / 2;
  const double scale = (width / 2 - 120) / span;
  std::string s = open_svg(width, top + row * static_cast<double>(data.items.size()) + 40);
  s += text(mid, 22, "base " + fixed4(data.base_value) + "  prediction " + fixed4(data.prediction),
            "middle", 14);
  s += text(mid + 10, 45, "toward suicidal", "start", 11);
  s += text(mid - 10, 45, "toward non-suicidal", "end", 11);
  s += line(mid, top - 10, mid, top + row * static_cast<double>(data.items.size()), "black");
  for (std::size_t i = 0; i < data.items.size(); ++i) {
    const auto& it = data.items[i];
    const double y = top + row * static_cast<double>(i);
    const double len = std::abs(it.phi) * scale;
    if (it.positive) {
      s += rect(mid, y, len, row - 6, kRed);
      s += text(mid + len + 6, y + 12, it.word + " " + fixed4(it.phi));
    } else {
      s += rect(mid - len, y, len, row - 6, kBlue);
      s += text(mid - len - 6, y + 12, it.word + " " + fixed4(it.phi), "end");
    }
  }
  s += "</svg>\n";
  return s;
}

std::string summary_svg(const GlobalSummary& summary, std::size_t top_k) {
  const std::size_t n = std::min(top_k, summary.rows.size());
  const double width = 600.0;
  const double row = 22.0;
  const double left = 160.0;
  const double top = 50.0;
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) peak = std::max(peak, summary.rows[i].mean_abs_phi);
  if (peak == 0.0) peak = 1.0;
  const double scale = (width - left - 90) / peak;
  std::string s = open_svg(width, top + row * static_cast<double>(n) + 30);
  s += text(width / 2, 25, "Mean |SHAP value| by word", "middle", 16);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = summary.rows[i];
    const double y = top + row * static_cast<double>(i);
    s += text(left - 8, y + 12, r.word, "end");
    s += rect(left, y, r.mean_abs_phi * scale, row - 6, r.mean_phi >= 0.0 ? kRed : kBlue);
    s += text(left + r.mean_abs_phi * scale + 6, y + 12, fixed4(r.mean_abs_phi));
  }
  s += "</svg>\n";
  return s;
}

}  // namespace sidn::tools
