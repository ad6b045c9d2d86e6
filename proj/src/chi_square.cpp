// Copyright 2026 The chaidlogit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chaidlogit/chi_square.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "chaidlogit/error.hpp"

namespace chaidlogit {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 10000;

// Lower series, valid for x < a + 1; returns P(a, x).
double gamma_p_series(double a, double x) {
  double sum = 1.0 / a;
  double term = sum;
  double ap = a;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction (modified Lentz), valid for x >= a + 1; returns Q(a, x).
double gamma_q_continued_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || std::isnan(x)) throw Error("chaid", "invalid incomplete gamma arguments");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_continued_fraction(a, x);
}

double chi_square_upper_tail(double x, double df) {
  if (!(df > 0.0)) throw Error("chaid", "chi-square degrees of freedom must be positive");
  if (x <= 0.0) return 1.0;
  return regularized_gamma_q(df / 2.0, x / 2.0);
}

ChiSquareResult chi_square_test(std::span<const ClassCounts> table) {
  if (table.size() < 2) throw Error("chaid", "chi-square test needs at least 2 categories");
  ClassCounts row_totals;
  for (const auto& cell : table) {
    if (cell.total() == 0) throw Error("chaid", "chi-square test: empty category (merge it first)");
    row_totals += cell;
  }
  if (row_totals.n0 == 0 || row_totals.n1 == 0) throw Error("chaid", "chi-square test: a target class is empty");

  const double total = static_cast<double>(row_totals.total());
  const double share0 = static_cast<double>(row_totals.n0) / total;
  const double share1 = static_cast<double>(row_totals.n1) / total;
  double statistic = 0.0;
  for (const auto& cell : table) {
    const double col = static_cast<double>(cell.total());
    const double e0 = col * share0;
    const double e1 = col * share1;
    const double d0 = static_cast<double>(cell.n0) - e0;
    const double d1 = static_cast<double>(cell.n1) - e1;
    statistic += d0 * d0 / e0 + d1 * d1 / e1;
  }
  ChiSquareResult r;
  r.statistic = statistic;
  r.df = table.size() - 1;
  r.p_value = chi_square_upper_tail(statistic, static_cast<double>(r.df));
  return r;
}

}  // namespace chaidlogit
