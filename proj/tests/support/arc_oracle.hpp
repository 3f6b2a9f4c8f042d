// Copyright 2026 The fairscore Authors
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

#pragma once

// Exact two-dimensional reference computations. Directions are parameterized
// by the angle a from the x1 axis, w = (cos a, sin a). Everything here is
// computed from first principles and shares no code with the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

struct Row {
  std::string id;
  double x1;
  double x2;
  std::string group;
};

struct Arc {
  double lo;
  double hi;
  std::vector<std::string> order;  // ids, best first

  double length() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

inline double angle_of(double w1, double w2) { return std::atan2(w2, w1); }

// Descending score at direction a, ties by ascending id.
inline std::vector<std::string> order_at(const std::vector<Row>& rows, double a) {
  const double c = std::cos(a);
  const double s = std::sin(a);
  std::vector<std::size_t> idx(rows.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    const double si = rows[i].x1 * c + rows[i].x2 * s;
    const double sj = rows[j].x1 * c + rows[j].x2 * s;
    if (si != sj) return si > sj;
    return rows[i].id < rows[j].id;
  });
  std::vector<std::string> out;
  for (std::size_t i : idx) out.push_back(rows[i].id);
  return out;
}

// Angles in (lo, hi) where the line c1 x1 + c2 x2 = 0 meets the arc.
inline void crossings(double c1, double c2, double lo, double hi, std::vector<double>& out) {
  if (c1 == 0.0 && c2 == 0.0) return;
  const double base = std::atan2(-c1, c2);
  for (int k = -4; k <= 4; ++k) {
    const double a = base + k * kPi;
    if (a > lo && a < hi) out.push_back(a);
  }
}

inline std::vector<double> breakpoints(const std::vector<std::pair<double, double>>& lines,
                                       double lo, double hi) {
  std::vector<double> cuts{lo, hi};
  for (const auto& [c1, c2] : lines) crossings(c1, c2, lo, hi, cuts);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

// Sub-arcs of [center - theta, center + theta] on which the ranking is constant.
inline std::vector<Arc> ranking_arcs(const std::vector<Row>& rows, double center, double theta) {
  std::vector<std::pair<double, double>> lines;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      lines.emplace_back(rows[i].x1 - rows[j].x1, rows[i].x2 - rows[j].x2);
    }
  }
  const auto cuts = breakpoints(lines, center - theta, center + theta);
  std::vector<Arc> arcs;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    Arc arc{cuts[p], cuts[p + 1], {}};
    arc.order = order_at(rows, arc.mid());
    arcs.push_back(std::move(arc));
  }
  return arcs;
}

// Share of the arc set on which pred(order) holds.
inline double fraction(const std::vector<Arc>& arcs,
                       const std::function<bool(const std::vector<std::string>&)>& pred) {
  double total = 0.0;
  double hit = 0.0;
  for (const Arc& a : arcs) {
    total += a.length();
    if (pred(a.order)) hit += a.length();
  }
  return hit / total;
}

// Arc share per distinct ranking (arcs with equal orders are merged).
inline std::map<std::vector<std::string>, double> ranking_fractions(const std::vector<Arc>& arcs) {
  double total = 0.0;
  for (const Arc& a : arcs) total += a.length();
  std::map<std::vector<std::string>, double> out;
  for (const Arc& a : arcs) out[a.order] += a.length() / total;
  return out;
}

// Top-k group-count predicate: count of `group` among the first k in [lo, hi].
struct Quota {
  std::string group;
  std::size_t k;
  std::size_t lo;
  std::size_t hi;
};

inline bool satisfies(const std::vector<Row>& rows, const std::vector<std::string>& order,
                      const std::vector<Quota>& quotas) {
  std::map<std::string, std::string> group_of;
  for (const Row& r : rows) group_of[r.id] = r.group;
  for (const Quota& q : quotas) {
    std::size_t count = 0;
    for (std::size_t p = 0; p < std::min(q.k, order.size()); ++p) {
      if (group_of[order[p]] == q.group) ++count;
    }
    if (count < q.lo || count > q.hi) return false;
  }
  return true;
}

// Arrangement of origin lines on an arc: each cell with its sign vector
// (true where c . w >= 0) and its angular extent.
struct Cell {
  double lo;
  double hi;
  std::vector<bool> signs;
};

inline std::vector<Cell> line_cells(const std::vector<std::pair<double, double>>& lines,
                                    double center, double theta) {
  const auto cuts = breakpoints(lines, center - theta, center + theta);
  std::vector<Cell> cells;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double m = 0.5 * (cuts[p] + cuts[p + 1]);
    Cell cell{cuts[p], cuts[p + 1], {}};
    for (const auto& [c1, c2] : lines) cell.signs.push_back(c1 * std::cos(m) + c2 * std::sin(m) >= 0.0);
    cells.push_back(std::move(cell));
  }
  return cells;
}

// The six agents of the promotion example.
inline std::vector<Row> example1() {
  return {{"t1", 0.63, 0.71, "Detroit"}, {"t2", 0.72, 0.65, "Chicago"},
          {"t3", 0.58, 0.78, "Detroit"}, {"t4", 0.70, 0.68, "Chicago"},
          {"t5", 0.53, 0.82, "Detroit"}, {"t6", 0.61, 0.79, "Chicago"}};
}

}  // namespace oracle
