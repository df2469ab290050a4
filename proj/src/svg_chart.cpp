// Copyright 2026 The ScribeBench Authors.
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

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "scribebench/errors.hpp"
#include "scribebench/report.hpp"

namespace scribebench::report {
namespace {

constexpr double kBarWidth = 28;
constexpr double kGroupGap = 36;
constexpr double kLeft = 64;
constexpr double kRight = 24;
constexpr double kTop = 64;
constexpr double kPlotHeight = 240;
constexpr double kBottom = 96;
constexpr std::string_view kBaselineColor = "#8c9bab";
constexpr std::string_view kTreatmentColor = "#2b6cb0";

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

// Smallest 1/2/5 x 10^k at or above v.
double nice_ceiling(double v) {
  if (v <= 0) return 1;
  double mag = std::pow(10.0, std::floor(std::log10(v)));
  for (double step : {1.0, 2.0, 5.0, 10.0}) {
    if (step * mag >= v) return step * mag;
  }
  return 10 * mag;
}

double axis_max(ChartGroup group, double largest) {
  switch (group) {
    case ChartGroup::text_similarity: return std::max(1.0, nice_ceiling(largest));
    case ChartGroup::clinical_quality: return 5.0;
    default: return nice_ceiling(largest);
  }
}

std::string_view title(ChartGroup g) {
  switch (g) {
    case ChartGroup::text_similarity: return "Text similarity";
    case ChartGroup::clinical_quality: return "Clinical quality";
    case ChartGroup::hallucination: return "Hallucination severity";
    case ChartGroup::omission: return "Omission severity";
  }
  return "";
}

std::string_view y_label(ChartGroup g) {
  switch (g) {
    case ChartGroup::text_similarity: return "Score";
    case ChartGroup::clinical_quality: return "Mean rating (1-5)";
    default: return "Cases";
  }
}

}  // namespace

std::string_view to_string(ChartGroup g) {
  switch (g) {
    case ChartGroup::text_similarity: return "text_similarity";
    case ChartGroup::clinical_quality: return "clinical_quality";
    case ChartGroup::hallucination: return "hallucination";
    case ChartGroup::omission: return "omission";
  }
  return "";
}

std::vector<Field> chart_fields(ChartGroup g) {
  switch (g) {
    case ChartGroup::text_similarity:
      return {Field::rouge1, Field::rouge2, Field::rougeL, Field::rougeLsum, Field::bertscore_f1};
    case ChartGroup::clinical_quality:
      return {Field::factual_correctness,  Field::completeness, Field::clinical_relevance,
              Field::coherence_organization, Field::terminology_accuracy, Field::readability,
              Field::overall_quality, Field::composite};
    case ChartGroup::hallucination:
      return {Field::hallucination_no, Field::hallucination_minor, Field::hallucination_major};
    case ChartGroup::omission:
      return {Field::omission_no, Field::omission_minor, Field::omission_major};
  }
  return {};
}

std::string render_chart(const ComparisonReport& report, ChartGroup group) {
  struct Bar {
    Field field;
    std::optional<double> baseline;
    std::optional<double> treatment;
  };
  std::vector<Bar> bars;
  double largest = 0;
  for (Field f : chart_fields(group)) {
    auto b = report.baseline.get(f);
    auto t = report.treatment.get(f);
    if (!b && !t) continue;
    bars.push_back({f, b, t});
    largest = std::max({largest, b.value_or(0), t.value_or(0)});
  }
  if (bars.empty()) {
    throw ValidationError(fmt::format("chart group {} has no values to plot", to_string(group)));
  }

  double ymax = axis_max(group, largest);
  double group_width = 2 * kBarWidth + kGroupGap;
  double width = kLeft + bars.size() * group_width + kRight;
  double height = kTop + kPlotHeight + kBottom;
  double base_y = kTop + kPlotHeight;
  auto y_of = [&](double v) { return base_y - std::clamp(v / ymax, 0.0, 1.0) * kPlotHeight; };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" viewBox=\"0 0 {0:.0f} {1:.0f}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n",
      width, height);
  svg += fmt::format("<rect width=\"{:.0f}\" height=\"{:.0f}\" fill=\"#ffffff\"/>\n", width, height);
  svg += fmt::format("<text x=\"{:.1f}\" y=\"22\" font-size=\"14\" font-weight=\"bold\" text-anchor=\"middle\">{}: {}</text>\n",
                     width / 2, xml_escape(report.dataset), title(group));

  // Legend.
  svg += fmt::format("<rect x=\"{:.1f}\" y=\"34\" width=\"12\" height=\"12\" fill=\"{}\"/>\n", kLeft, kBaselineColor);
  svg += fmt::format("<text x=\"{:.1f}\" y=\"44\">{}</text>\n", kLeft + 16, xml_escape(report.baseline.model));
  svg += fmt::format("<rect x=\"{:.1f}\" y=\"34\" width=\"12\" height=\"12\" fill=\"{}\"/>\n", kLeft + 160,
                     kTreatmentColor);
  svg += fmt::format("<text x=\"{:.1f}\" y=\"44\">{}</text>\n", kLeft + 176, xml_escape(report.treatment.model));

  // Axes and ticks.
  svg += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"#333333\"/>\n", kLeft,
                     kTop, base_y);
  svg += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"#333333\"/>\n", kLeft,
                     base_y, width - kRight);
  for (int i = 0; i <= 5; ++i) {
    double v = ymax * i / 5;
    double y = y_of(v);
    svg += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#dddddd\"/>\n", kLeft, y,
                       width - kRight, y);
    std::string tick = group == ChartGroup::text_similarity ? fmt::format("{:.1f}", v)
                       : group == ChartGroup::clinical_quality ? fmt::format("{:.0f}", v)
                                                               : fmt::format("{}", std::llround(v));
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{}</text>\n", kLeft - 6, y + 4, tick);
  }
  svg += fmt::format(
      "<text x=\"16\" y=\"{0:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0:.1f})\">{1}</text>\n",
      kTop + kPlotHeight / 2, y_label(group));

  for (size_t i = 0; i < bars.size(); ++i) {
    double x0 = kLeft + kGroupGap / 2 + i * group_width;
    const Bar& bar = bars[i];
    int slot = 0;
    for (const auto& [value, color] : {std::pair{bar.baseline, kBaselineColor}, std::pair{bar.treatment, kTreatmentColor}}) {
      double x = x0 + slot++ * kBarWidth;
      if (!value) continue;
      double y = y_of(*value);
      svg += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"{}\"/>\n", x, y,
                         kBarWidth - 2, base_y - y, color);
      svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" font-size=\"9\">{}</text>\n",
                         x + (kBarWidth - 2) / 2, y - 3, format_value(bar.field, *value));
    }
    double cx = x0 + kBarWidth;
    svg += fmt::format(
        "<text x=\"{0:.1f}\" y=\"{1:.1f}\" text-anchor=\"end\" transform=\"rotate(-35 {0:.1f} {1:.1f})\">{2}</text>\n",
        cx, base_y + 14, xml_escape(field_label(bar.field)));
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace scribebench::report
