#pragma once

// Brute-force reference implementations shared by the unit and acceptance
// tests. They follow the textbook definitions and avoid the engine's code paths.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

struct Box {
  double x0, y0, x1, y1;
};

inline double iou(const Box& a, const Box& b) {
  const double w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (w <= 0 || h <= 0) return 0.0;
  const double inter = w * h;
  return inter / ((a.x1 - a.x0) * (a.y1 - a.y0) + (b.x1 - b.x0) * (b.y1 - b.y0) - inter);
}

// "x1 < x2 and |x1 - x2| > |y1 - y2|", rotated for the other relations.
inline bool relation_holds(const std::string& rel, const Box& a, const Box& b) {
  const double x1 = (a.x0 + a.x1) / 2, y1 = (a.y0 + a.y1) / 2;
  const double x2 = (b.x0 + b.x1) / 2, y2 = (b.y0 + b.y1) / 2;
  if (rel == "left") return x1 < x2 && std::fabs(x1 - x2) > std::fabs(y1 - y2);
  if (rel == "right") return x1 > x2 && std::fabs(x1 - x2) > std::fabs(y1 - y2);
  if (rel == "above") return y1 < y2 && std::fabs(y1 - y2) > std::fabs(x1 - x2);
  return y1 > y2 && std::fabs(y1 - y2) > std::fabs(x1 - x2);  // below
}

// Single-pair frame: 1 - IoU when the relation holds, otherwise 0.
inline double single_pair_score(const std::string& rel, const Box& a, const Box& b) {
  return relation_holds(rel, a, b) ? 1.0 - iou(a, b) : 0.0;
}

// tau-b from explicit pair classification.
inline double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  long long c = 0, d = 0, tx = 0, ty = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double sx = x[i] - x[j], sy = y[i] - y[j];
      if (sx == 0 && sy == 0) continue;
      if (sx == 0) ++tx;
      else if (sy == 0) ++ty;
      else if ((sx > 0) == (sy > 0)) ++c;
      else ++d;
    }
  return static_cast<double>(c - d) / std::sqrt(static_cast<double>(c + d + tx) * static_cast<double>(c + d + ty));
}

// Rank = 1 + #smaller + (#equal - 1) / 2, computed pairwise.
inline std::vector<double> mid_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (double w : v) {
      if (w < v[i]) ++less;
      else if (w == v[i]) ++equal;
    }
    r[i] = 1 + less + (equal - 1) / 2;
  }
  return r;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

inline double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(mid_ranks(x), mid_ranks(y));
}

// Best monotone split: try every m, count label 2 before and label 1 after.
inline double best_split(const std::vector<int>& labels) {
  std::size_t best = 0;
  for (std::size_t m = 0; m <= labels.size(); ++m) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) hits += i < m ? labels[i] == 2 : labels[i] == 1;
    best = std::max(best, hits);
  }
  return static_cast<double>(best) / static_cast<double>(labels.size());
}

// Sign/dominance rule with the x axis winning exact ties; "" below eps.
inline std::string direction(double dx, double dy, double eps) {
  if (std::fabs(dx) < eps && std::fabs(dy) < eps) return "";
  if (std::fabs(dx) >= std::fabs(dy)) return dx < 0 ? "left" : "right";
  return dy < 0 ? "up" : "down";
}

}  // namespace oracle
