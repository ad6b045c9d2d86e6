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

#ifndef CHAIDLOGIT_CHI_SQUARE_HPP_
#define CHAIDLOGIT_CHI_SQUARE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>

namespace chaidlogit {

// Target-class counts for one category of a 2 x k table.
struct ClassCounts {
  std::uint64_t n0 = 0;
  std::uint64_t n1 = 0;

  std::uint64_t total() const { return n0 + n1; }
  ClassCounts& operator+=(const ClassCounts& o) {
    n0 += o.n0;
    n1 += o.n1;
    return *this;
  }
  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

struct ChiSquareResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t df = 0;
};

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double regularized_gamma_q(double a, double x);

// P(X >= x) for X ~ chi-square(df).
double chi_square_upper_tail(double x, double df);

// Pearson test of independence on a 2 x k table given as one ClassCounts per
// category. Requires k >= 2 and every row and column margin positive.
ChiSquareResult chi_square_test(std::span<const ClassCounts> table);

}  // namespace chaidlogit

#endif  // CHAIDLOGIT_CHI_SQUARE_HPP_
