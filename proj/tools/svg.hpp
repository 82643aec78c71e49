// Copyright 2026 The antisym Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef ANTISYM_TOOLS_SVG_HPP
#define ANTISYM_TOOLS_SVG_HPP

// Minimal line charts: axes, tick labels, one polyline per series, legend.

#include <iosfwd>
#include <string>
#include <vector>

namespace antisym::cli {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;  // one or two
};

void write_svg(std::ostream& out, const Chart& chart);

}  // namespace antisym::cli

#endif  // ANTISYM_TOOLS_SVG_HPP
