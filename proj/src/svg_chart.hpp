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

#pragma once

#include <string>
#include <vector>

namespace sis::detail {

struct BarSeries {
  std::string name;
  std::string color;
  std::vector<double> values;
};

/// Grouped bar chart, one group per category. Plain SVG 1.1, no scripts.
std::string grouped_bar_chart(const std::string& title, const std::string& header_comment,
                              const std::vector<std::string>& categories,
                              const std::vector<BarSeries>& series);

}  // namespace sis::detail
