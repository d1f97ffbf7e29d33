/*
 * Copyright 2026 The sis Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "svg_chart.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sis::detail {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string grouped_bar_chart(const std::string& title, const std::string& header_comment,
                              const std::vector<std::string>& categories,
                              const std::vector<BarSeries>& series) {
  constexpr double kWidth = 720, kHeight = 400;
  constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 70;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  double vmax = 0.0;
  for (const auto& s : series) {
    for (double v : s.values) {
      if (std::isfinite(v)) vmax = std::max(vmax, v);
    }
  }
  if (vmax <= 0.0) vmax = 1.0;

  std::ostringstream os;
  os.precision(6);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<!-- " << escape(header_comment) << " -->\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"16\">"
     << escape(title) << "</text>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
     << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
     << kTop + plot_h << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = vmax * tick / 4.0;
    const double y = kTop + plot_h - plot_h * tick / 4.0;
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << v << "</text>\n";
  }

  const double group_w = plot_w / static_cast<double>(std::max<std::size_t>(categories.size(), 1));
  const double bar_w = group_w * 0.8 / static_cast<double>(std::max<std::size_t>(series.size(), 1));
  for (std::size_t c = 0; c < categories.size(); ++c) {
    const double gx = kLeft + group_w * static_cast<double>(c) + group_w * 0.1;
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double v = c < series[s].values.size() ? series[s].values[c] : 0.0;
      const double h = std::isfinite(v) ? plot_h * std::max(v, 0.0) / vmax : 0.0;
      os << "<rect x=\"" << gx + bar_w * static_cast<double>(s) << "\" y=\"" << kTop + plot_h - h
         << "\" width=\"" << bar_w << "\" height=\"" << h << "\" fill=\"" << series[s].color
         << "\"><title>" << escape(series[s].name) << ' ' << escape(categories[c]) << ": " << v
         << "</title></rect>\n";
    }
    os << "<text x=\"" << gx + group_w * 0.4 << "\" y=\"" << kTop + plot_h + 16
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
       << escape(categories[c]) << "</text>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double lx = kLeft + 150.0 * static_cast<double>(s);
    const double ly = kHeight - 22;
    os << "<rect x=\"" << lx << "\" y=\"" << ly - 10 << "\" width=\"12\" height=\"12\" fill=\""
       << series[s].color << "\"/>\n";
    os << "<text x=\"" << lx + 18 << "\" y=\"" << ly
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(series[s].name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace sis::detail
