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

#ifndef LDIV_COUNT_BUCKETS_HPP_
#define LDIV_COUNT_BUCKETS_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "ldiv/error.hpp"

namespace ldiversity {

// Inverted array over a multiset with small integer keys: slot j lists the
// keys whose count is exactly j, and a pointer tracks the highest nonempty
// slot (the pillar height). Every update is O(1); the pointer moves
// amortized O(1) as long as the counts move monotonically.
class CountBuckets {
 public:
  CountBuckets() = default;
  CountBuckets(std::size_t keys, std::size_t max_count)
      : count_(keys, 0), pos_(keys, kNone), slots_(max_count + 1) {}

  std::size_t keys() const { return count_.size(); }
  std::int64_t count(std::size_t key) const { return count_[key]; }
  std::int64_t total() const { return total_; }
  std::int64_t height() const { return static_cast<std::int64_t>(pillar_); }

  // Keys at the pillar height, in no particular order. Empty if total is 0.
  std::span<const std::size_t> pillars() const {
    if (pillar_ == 0) return {};
    return slots_[pillar_];
  }
  std::span<const std::size_t> slot(std::size_t j) const { return slots_[j]; }
  bool is_pillar(std::size_t key) const {
    return pillar_ > 0 && static_cast<std::size_t>(count_[key]) == pillar_;
  }

  void increment(std::size_t key) {
    const auto c = static_cast<std::size_t>(count_[key]);
    if (c > 0) Unlink(key, c);
    if (c + 1 >= slots_.size()) slots_.resize(2 * (c + 1));
    Link(key, c + 1);
    ++count_[key];
    ++total_;
    if (c + 1 > pillar_) pillar_ = c + 1;
  }

  void decrement(std::size_t key) {
    const auto c = static_cast<std::size_t>(count_[key]);
    if (c == 0) throw InvalidArgument("decrement of a zero count");
    Unlink(key, c);
    if (c > 1) Link(key, c - 1);
    --count_[key];
    --total_;
    while (pillar_ > 0 && slots_[pillar_].empty()) --pillar_;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  void Link(std::size_t key, std::size_t j) {
    pos_[key] = slots_[j].size();
    slots_[j].push_back(key);
  }
  void Unlink(std::size_t key, std::size_t j) {
    auto& s = slots_[j];
    const std::size_t p = pos_[key];
    s[p] = s.back();
    pos_[s[p]] = p;
    s.pop_back();
    pos_[key] = kNone;
  }

  std::vector<std::int64_t> count_;
  std::vector<std::size_t> pos_;
  std::vector<std::vector<std::size_t>> slots_;
  std::size_t pillar_ = 0;
  std::int64_t total_ = 0;
};

}  // namespace ldiversity

#endif  // LDIV_COUNT_BUCKETS_HPP_
