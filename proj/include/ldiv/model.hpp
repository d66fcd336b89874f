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

// Core data model: schemas, microdata tables, SA histograms and QI-grouping.
//
// A table has d categorical quasi-identifier (QI) attributes and a single
// sensitive attribute (SA). QI cells are stored as indices into their
// attribute's domain; SA cells are dense ids in [1, m].

#ifndef LDIV_MODEL_HPP_
#define LDIV_MODEL_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ldiv/error.hpp"

namespace ldiversity {

using SaValue = std::int32_t;   // dense sensitive value id, 1-based
using ValueId = std::uint32_t;  // index into a QI attribute's domain
using RowId = std::size_t;      // input order, 0-based

class Attribute {
 public:
  Attribute() = default;
  Attribute(std::string name, std::vector<std::string> domain)
      : name_(std::move(name)), domain_(std::move(domain)) {
    if (domain_.empty()) {
      throw InvalidArgument("attribute '" + name_ + "' has an empty domain");
    }
    index_.reserve(domain_.size());
    for (std::size_t i = 0; i < domain_.size(); ++i) {
      if (!index_.emplace(domain_[i], static_cast<ValueId>(i)).second) {
        throw InvalidArgument("attribute '" + name_ +
                              "' lists value '" + domain_[i] + "' twice");
      }
    }
  }

  const std::string& name() const { return name_; }
  const std::vector<std::string>& domain() const { return domain_; }
  std::size_t domain_size() const { return domain_.size(); }
  const std::string& label(ValueId id) const { return domain_.at(id); }

  std::optional<ValueId> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::string name_;
  std::vector<std::string> domain_;
  std::unordered_map<std::string, ValueId> index_;
};

// QI attributes plus the sensitive attribute. The SA domain is ordered so
// that domain()[v - 1] is the label of SA id v.
class Schema {
 public:
  Schema() = default;
  Schema(std::vector<Attribute> qi, Attribute sa)
      : qi_(std::move(qi)), sa_(std::move(sa)) {
    if (qi_.empty()) throw InvalidArgument("schema needs at least one QI");
    std::unordered_set<std::string> names;
    for (const auto& a : qi_) {
      if (!names.insert(a.name()).second) {
        throw InvalidArgument("duplicate attribute name '" + a.name() + "'");
      }
    }
    if (!names.insert(sa_.name()).second) {
      throw InvalidArgument("duplicate attribute name '" + sa_.name() + "'");
    }
    if (sa_.domain_size() == 0) throw InvalidArgument("empty SA domain");
  }

  std::size_t d() const { return qi_.size(); }
  std::size_t m() const { return sa_.domain_size(); }
  const std::vector<Attribute>& qi() const { return qi_; }
  const Attribute& qi(std::size_t i) const { return qi_.at(i); }
  const Attribute& sa() const { return sa_; }
  const std::string& sa_label(SaValue v) const {
    return sa_.label(static_cast<ValueId>(v - 1));
  }

 private:
  std::vector<Attribute> qi_;
  Attribute sa_;
};

// Multiset of SA values. Only nonzero counts are stored.
class SaHistogram {
 public:
  SaHistogram() = default;

  // counts[k] is the multiplicity of SA value k + 1.
  static SaHistogram FromCounts(std::span<const std::int64_t> counts) {
    SaHistogram h;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (counts[k] < 0) throw InvalidArgument("negative histogram count");
      if (counts[k] > 0) h.add(static_cast<SaValue>(k + 1), counts[k]);
    }
    return h;
  }
  static SaHistogram FromCounts(std::initializer_list<std::int64_t> counts) {
    std::vector<std::int64_t> v(counts);
    return FromCounts(std::span<const std::int64_t>(v));
  }

  void add(SaValue v, std::int64_t k = 1) {
    if (k < 0) throw InvalidArgument("negative histogram increment");
    if (k == 0) return;
    counts_[v] += k;
    total_ += k;
  }

  void remove(SaValue v, std::int64_t k = 1) {
    auto it = counts_.find(v);
    if (k < 0 || it == counts_.end() || it->second < k) {
      throw InvalidArgument("histogram has fewer than " + std::to_string(k) +
                            " tuples of SA value " + std::to_string(v));
    }
    it->second -= k;
    total_ -= k;
    if (it->second == 0) counts_.erase(it);
  }

  std::int64_t count(SaValue v) const {
    auto it = counts_.find(v);
    return it == counts_.end() ? 0 : it->second;
  }
  std::int64_t total() const { return total_; }
  bool empty() const { return total_ == 0; }
  std::size_t distinct() const { return counts_.size(); }

  // Pillar height h(.) = max_v h(., v); 0 for the empty multiset.
  std::int64_t height() const {
    std::int64_t h = 0;
    for (const auto& [v, c] : counts_) h = std::max(h, c);
    return h;
  }

  const std::map<SaValue, std::int64_t>& counts() const { return counts_; }

  // Dense vector of length m; entry k is the count of value k + 1.
  std::vector<std::int64_t> dense(std::size_t m) const {
    std::vector<std::int64_t> out(m, 0);
    for (const auto& [v, c] : counts_) {
      if (v < 1 || static_cast<std::size_t>(v) > m) {
        throw InvalidArgument("SA value " + std::to_string(v) +
                              " outside [1, " + std::to_string(m) + "]");
      }
      out[v - 1] = c;
    }
    return out;
  }

  SaHistogram& operator+=(const SaHistogram& other) {
    for (const auto& [v, c] : other.counts_) add(v, c);
    return *this;
  }
  friend SaHistogram operator+(SaHistogram a, const SaHistogram& b) {
    a += b;
    return a;
  }
  friend bool operator==(const SaHistogram& a, const SaHistogram& b) {
    return a.counts_ == b.counts_;
  }

 private:
  std::map<SaValue, std::int64_t> counts_;
  std::int64_t total_ = 0;
};

inline void CheckDiversity(int l) {
  if (l < 1) throw InvalidArgument("l must be at least 1, got " + std::to_string(l));
}

// A multiset is l-eligible when no SA value covers more than 1/l of it.
inline bool is_l_eligible(const SaHistogram& hist, int l) {
  CheckDiversity(l);
  return hist.total() >= static_cast<std::int64_t>(l) * hist.height();
}

// Distance to eligibility, l * h - |S|. Non-positive iff eligible.
inline std::int64_t gap(const SaHistogram& hist, int l) {
  CheckDiversity(l);
  return static_cast<std::int64_t>(l) * hist.height() - hist.total();
}

// SA values attaining the pillar height, ascending.
inline std::vector<SaValue> pillars(const SaHistogram& hist) {
  if (hist.empty()) throw InvalidArgument("pillars of an empty histogram");
  const std::int64_t h = hist.height();
  std::vector<SaValue> out;
  for (const auto& [v, c] : hist.counts()) {
    if (c == h) out.push_back(v);
  }
  return out;
}

class MicrodataTable {
 public:
  MicrodataTable() = default;

  // qi_cells is row-major with schema.d() cells per row.
  MicrodataTable(Schema schema, std::vector<ValueId> qi_cells,
                 std::vector<SaValue> sa)
      : schema_(std::move(schema)),
        qi_(std::move(qi_cells)),
        sa_(std::move(sa)) {
    const std::size_t d = schema_.d();
    if (qi_.size() != sa_.size() * d) {
      throw InvalidArgument("QI cell count does not match row count");
    }
    for (std::size_t r = 0; r < sa_.size(); ++r) {
      for (std::size_t a = 0; a < d; ++a) {
        if (qi_[r * d + a] >= schema_.qi(a).domain_size()) {
          throw InvalidArgument("row " + std::to_string(r) +
                                ": value outside domain of '" +
                                schema_.qi(a).name() + "'");
        }
      }
      if (sa_[r] < 1 || static_cast<std::size_t>(sa_[r]) > schema_.m()) {
        throw InvalidArgument("row " + std::to_string(r) +
                              ": SA value outside [1, m]");
      }
    }
  }

  const Schema& schema() const { return schema_; }
  std::size_t size() const { return sa_.size(); }
  std::size_t d() const { return schema_.d(); }
  std::size_t m() const { return schema_.m(); }

  std::span<const ValueId> qi(RowId row) const {
    return std::span<const ValueId>(qi_).subspan(row * d(), d());
  }
  ValueId qi(RowId row, std::size_t attr) const { return qi_[row * d() + attr]; }
  SaValue sa(RowId row) const { return sa_[row]; }
  std::span<const SaValue> sa_column() const { return sa_; }

  SaHistogram sa_histogram() const {
    SaHistogram h;
    for (SaValue v : sa_) h.add(v);
    return h;
  }

 private:
  Schema schema_;
  std::vector<ValueId> qi_;
  std::vector<SaValue> sa_;
};

// Builds a table from string cells. Domains and SA ids are assigned in
// first-appearance order. Each row holds the d QI labels followed by the SA
// label.
inline MicrodataTable MakeTable(const std::vector<std::string>& qi_names,
                                const std::string& sa_name,
                                const std::vector<std::vector<std::string>>& rows) {
  const std::size_t d = qi_names.size();
  std::vector<std::vector<std::string>> domains(d + 1);
  std::vector<std::unordered_map<std::string, ValueId>> seen(d + 1);
  std::vector<ValueId> ids;
  ids.reserve(rows.size() * (d + 1));
  for (const auto& row : rows) {
    if (row.size() != d + 1) throw InvalidArgument("row has wrong arity");
    for (std::size_t a = 0; a <= d; ++a) {
      auto [it, inserted] =
          seen[a].emplace(row[a], static_cast<ValueId>(domains[a].size()));
      if (inserted) domains[a].push_back(row[a]);
      ids.push_back(it->second);
    }
  }
  std::vector<Attribute> qi;
  for (std::size_t a = 0; a < d; ++a) {
    if (domains[a].empty()) domains[a].push_back("");
    qi.emplace_back(qi_names[a], std::move(domains[a]));
  }
  if (domains[d].empty()) domains[d].push_back("");
  Schema schema(std::move(qi), Attribute(sa_name, std::move(domains[d])));
  std::vector<ValueId> cells;
  std::vector<SaValue> sa;
  cells.reserve(rows.size() * d);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t a = 0; a < d; ++a) cells.push_back(ids[r * (d + 1) + a]);
    sa.push_back(static_cast<SaValue>(ids[r * (d + 1) + d]) + 1);
  }
  return MicrodataTable(std::move(schema), std::move(cells), std::move(sa));
}

// Throws kIneligible naming the most frequent SA value when the table as a
// whole cannot be made l-diverse.
inline void RequireEligible(const MicrodataTable& table, int l) {
  CheckDiversity(l);
  const SaHistogram hist = table.sa_histogram();
  if (is_l_eligible(hist, l)) return;
  const SaValue worst = pillars(hist).front();
  throw Ineligible("table is not " + std::to_string(l) + "-eligible: SA value '" +
                   table.schema().sa_label(worst) + "' occurs " +
                   std::to_string(hist.count(worst)) + " times in " +
                   std::to_string(hist.total()) + " rows (limit " +
                   std::to_string(hist.total() / l) + ")");
}

struct QiGroup {
  std::vector<ValueId> key;
  SaHistogram histogram;
  std::vector<RowId> rows;  // ascending
};

struct GroupedTable {
  std::vector<QiGroup> groups;

  std::size_t size() const { return groups.size(); }
  std::size_t rows() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.rows.size();
    return n;
  }
  SaHistogram total_histogram() const {
    SaHistogram h;
    for (const auto& g : groups) h += g.histogram;
    return h;
  }
};

namespace internal {
struct KeyHash {
  std::size_t operator()(std::span<const ValueId> key) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (ValueId v : key) {
      h ^= std::hash<ValueId>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
  std::size_t operator()(const std::vector<ValueId>& key) const noexcept {
    return (*this)(std::span<const ValueId>(key));
  }
};
}  // namespace internal

// Partitions rows into maximal classes of identical QI vectors. Groups are
// ordered by their first row.
inline GroupedTable group_by_qi(const MicrodataTable& table) {
  GroupedTable out;
  std::unordered_map<std::vector<ValueId>, std::size_t, internal::KeyHash> index;
  index.reserve(table.size());
  for (RowId r = 0; r < table.size(); ++r) {
    auto q = table.qi(r);
    std::vector<ValueId> key(q.begin(), q.end());
    auto [it, inserted] = index.try_emplace(std::move(key), out.groups.size());
    if (inserted) {
      out.groups.push_back(QiGroup{it->first, {}, {}});
    }
    QiGroup& g = out.groups[it->second];
    g.histogram.add(table.sa(r));
    g.rows.push_back(r);
  }
  return out;
}

}  // namespace ldiversity

#endif  // LDIV_MODEL_HPP_
