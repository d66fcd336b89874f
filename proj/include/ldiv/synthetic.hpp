//
// Copyright 2026 The ldiv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Synthetic microdata with uniform QI columns and a Zipf-skewed sensitive
// attribute, repaired to be globally l-eligible.

#ifndef LDIV_SYNTHETIC_HPP_
#define LDIV_SYNTHETIC_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ldiv/error.hpp"
#include "ldiv/model.hpp"

namespace ldiversity {

struct SyntheticSpec {
  std::size_t n = 1000;
  std::vector<std::size_t> domain_sizes = {4, 4, 4, 4};  // one per QI column
  std::size_t m = 8;
  double skew = 1.0;  // Zipf exponent; 0 is uniform
  int l = 2;
  std::uint64_t seed = 1;
};

inline MicrodataTable generate_synthetic(const SyntheticSpec& spec) {
  const std::size_t n = spec.n;
  const std::size_t d = spec.domain_sizes.size();
  if (n == 0 || d == 0 || spec.m == 0 || spec.l < 1) {
    throw InvalidArgument("synthetic generator needs positive n, d, m and l");
  }
  for (std::size_t s : spec.domain_sizes) {
    if (s == 0) throw InvalidArgument("synthetic domain sizes must be positive");
  }
  if (spec.skew < 0.0) throw InvalidArgument("skew must be nonnegative");
  const auto l = static_cast<std::size_t>(spec.l);
  if (spec.m < l) {
    throw InvalidArgument("need m >= l, got m = " + std::to_string(spec.m) +
                          " and l = " + std::to_string(spec.l));
  }
  // The most balanced assignment has ceil(n / m) rows on some value.
  if (n < l || l * ((n + spec.m - 1) / spec.m) > n) {
    throw InvalidArgument("no " + std::to_string(spec.l) + "-eligible table with n = " +
                          std::to_string(n) + " and m = " + std::to_string(spec.m));
  }

  std::mt19937_64 rng(spec.seed);
  std::vector<Attribute> qi;
  for (std::size_t a = 0; a < d; ++a) {
    std::vector<std::string> domain;
    for (std::size_t k = 0; k < spec.domain_sizes[a]; ++k) domain.push_back("v" + std::to_string(k));
    qi.emplace_back("q" + std::to_string(a + 1), std::move(domain));
  }
  std::vector<std::string> sa_domain;
  for (std::size_t k = 1; k <= spec.m; ++k) sa_domain.push_back("s" + std::to_string(k));
  Schema schema(std::move(qi), Attribute("sa", std::move(sa_domain)));

  std::vector<ValueId> cells(n * d);
  std::vector<std::uniform_int_distribution<ValueId>> columns;
  for (std::size_t s : spec.domain_sizes) {
    columns.emplace_back(0, static_cast<ValueId>(s - 1));
  }
  std::vector<double> weights(spec.m);
  for (std::size_t k = 0; k < spec.m; ++k) {
    weights[k] = 1.0 / std::pow(static_cast<double>(k + 1), spec.skew);
  }
  std::discrete_distribution<std::size_t> sa_dist(weights.begin(), weights.end());

  std::vector<SaValue> sa(n);
  std::vector<std::vector<RowId>> rows_of(spec.m + 1);
  for (RowId r = 0; r < n; ++r) {
    for (std::size_t a = 0; a < d; ++a) cells[r * d + a] = columns[a](rng);
    sa[r] = static_cast<SaValue>(sa_dist(rng) + 1);
    rows_of[sa[r]].push_back(r);
  }

  // Repair: move rows off the most frequent value, round-robin over the
  // values that are at least two below it.
  std::size_t cursor = 1;
  for (;;) {
    std::size_t top = 1;
    for (std::size_t v = 2; v <= spec.m; ++v) {
      if (rows_of[v].size() > rows_of[top].size()) top = v;
    }
    if (l * rows_of[top].size() <= n) break;
    std::size_t target = 0;
    for (std::size_t step = 0; step < spec.m; ++step) {
      const std::size_t w = cursor;
      cursor = cursor % spec.m + 1;
      if (rows_of[w].size() + 1 < rows_of[top].size()) {
        target = w;
        break;
      }
    }
    if (target == 0) throw InvariantViolation("synthetic repair made no progress");
    const RowId r = rows_of[top].back();
    rows_of[top].pop_back();
    rows_of[target].push_back(r);
    sa[r] = static_cast<SaValue>(target);
  }
  return MicrodataTable(std::move(schema), std::move(cells), std::move(sa));
}

}  // namespace ldiversity

#endif  // LDIV_SYNTHETIC_HPP_
