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


#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "antisym/error.hpp"
#include "antisym/quantum1d.hpp"

namespace antisym {

void System1D::validate() const {
  if (n_electrons < 1) fail(ErrorKind::InvalidArgument, "system needs at least one electron");
  for (const Nucleus& n : nuclei) {
    if (!(n.charge > 0.0) || !std::isfinite(n.charge))
      fail(ErrorKind::InvalidArgument, "nuclear charges must be positive");
    if (!std::isfinite(n.position)) fail(ErrorKind::InvalidArgument, "nuclear position must be finite");
  }
}

System1D lithium_system(int electrons) {
  System1D s{electrons, {{0.0, 3.0}}};
  s.validate();
  return s;
}

System1D heh_cation_system() { return System1D{2, {{0.0, 2.0}, {1.463, 1.0}}}; }

double one_body_potential(const System1D& system, double r) noexcept {
  double v = 0.0;
  for (const Nucleus& n : system.nuclei) {
    const double d = r - n.position;
    v -= n.charge / std::sqrt(1.0 + d * d);
  }
  return v;
}

void write_system(std::ostream& out, const System1D& system) {
  out.precision(17);
  for (const Nucleus& n : system.nuclei) out << "nucleus " << n.position << ' ' << n.charge << '\n';
  out << "electrons " << system.n_electrons << '\n';
}

System1D read_system(std::istream& in) {
  System1D s;
  bool have_electrons = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream row(line);
    std::string key, extra;
    if (!(row >> key)) continue;
    const std::string where = "system file line " + std::to_string(lineno) + ": ";
    if (key == "nucleus") {
      Nucleus n;
      if (!(row >> n.position >> n.charge)) fail(ErrorKind::Parse, where + "expected 'nucleus <position> <charge>'");
      s.nuclei.push_back(n);
    } else if (key == "electrons") {
      if (have_electrons) fail(ErrorKind::Parse, where + "duplicate 'electrons'");
      if (!(row >> s.n_electrons)) fail(ErrorKind::Parse, where + "expected 'electrons <N>'");
      have_electrons = true;
    } else {
      fail(ErrorKind::Parse, where + "unknown directive '" + key + "'");
    }
    if (row >> extra) fail(ErrorKind::Parse, where + "trailing data");
  }
  if (!have_electrons) fail(ErrorKind::Parse, "system file: missing 'electrons <N>'");
  try {
    s.validate();
  } catch (const Error& e) {
    fail(ErrorKind::Parse, std::string("system file: ") + e.what());
  }
  return s;
}

}  // namespace antisym
