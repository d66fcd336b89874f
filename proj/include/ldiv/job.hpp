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

// Batch jobs: CSV ingestion, algorithm dispatch, publication and reports.
//
// Report fields (JSON object, one key per line):
//   n, d, m, s, l            table shape, QI-group count and diversity
//   algorithm                tp | tp_plus | hilbert | matching
//   terminal_phase           1-3 for tp and tp_plus, null otherwise
//   stars                    starred QI cells in the published table
//   suppressed_tuples        rows with at least one star
//   residue_size             |R| for tp and tp_plus, null otherwise
//   groups                   QI-groups in the published table
//   kl_divergence            KL(f, f*) of the published table
//   wall_time_ms             algorithm time, excluding I/O
//   tie_break_policy         identifier of the deterministic tie-breaks

#ifndef LDIV_JOB_HPP_
#define LDIV_JOB_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "ldiv/baseline.hpp"
#include "ldiv/csv.hpp"
#include "ldiv/error.hpp"
#include "ldiv/metrics.hpp"
#include "ldiv/model.hpp"
#include "ldiv/optimal.hpp"
#include "ldiv/tp.hpp"

namespace ldiversity {

enum class Algorithm { kTp, kTpPlus, kHilbert, kMatching };

inline std::string AlgorithmName(Algorithm a) {
  switch (a) {
    case Algorithm::kTp: return "tp";
    case Algorithm::kTpPlus: return "tp_plus";
    case Algorithm::kHilbert: return "hilbert";
    case Algorithm::kMatching: return "matching";
  }
  return "?";
}

inline Algorithm ParseAlgorithm(const std::string& name) {
  if (name == "tp") return Algorithm::kTp;
  if (name == "tp_plus") return Algorithm::kTpPlus;
  if (name == "hilbert") return Algorithm::kHilbert;
  if (name == "matching") return Algorithm::kMatching;
  throw InvalidArgument("unknown algorithm '" + name + "'");
}

inline constexpr const char* kTieBreakPolicy = "smallest-sa-id-then-group-index";
inline constexpr const char* kStarCell = "*";

struct JobConfig {
  std::string input;
  std::string output;  // published CSV
  std::string report;  // JSON report; optional
  std::vector<std::string> qi_columns;
  std::string sa_column;
  int l = 2;
  Algorithm algorithm = Algorithm::kTp;
  // Declared domains override the observed values of a column.
  std::map<std::string, std::vector<std::string>> domains;
  std::uint64_t seed = 1;
  OracleCaps caps;

  void Validate() const {
    if (l < 2) throw InvalidArgument("l must be at least 2, got " + std::to_string(l));
    if (qi_columns.empty()) throw InvalidArgument("no QI columns given");
    if (sa_column.empty()) throw InvalidArgument("no SA column given");
    std::set<std::string> seen;
    for (const auto& c : qi_columns) {
      if (c == sa_column) throw InvalidArgument("column '" + c + "' is both QI and SA");
      if (!seen.insert(c).second) throw InvalidArgument("QI column '" + c + "' listed twice");
    }
  }
};

struct Report {
  std::size_t n = 0, d = 0, m = 0, s = 0;
  int l = 0;
  std::string algorithm;
  std::optional<int> terminal_phase;
  std::int64_t stars = 0;
  std::int64_t suppressed_tuples = 0;
  std::optional<std::int64_t> residue_size;
  std::size_t groups = 0;
  double kl_divergence = 0.0;
  double wall_time_ms = 0.0;
  std::string tie_break_policy = kTieBreakPolicy;
};

inline nlohmann::ordered_json ToJson(const Report& r) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["d"] = r.d;
  j["m"] = r.m;
  j["s"] = r.s;
  j["l"] = r.l;
  j["algorithm"] = r.algorithm;
  j["terminal_phase"] = r.terminal_phase ? nlohmann::ordered_json(*r.terminal_phase) : nullptr;
  j["stars"] = r.stars;
  j["suppressed_tuples"] = r.suppressed_tuples;
  j["residue_size"] = r.residue_size ? nlohmann::ordered_json(*r.residue_size) : nullptr;
  j["groups"] = r.groups;
  j["kl_divergence"] = r.kl_divergence;
  j["wall_time_ms"] = r.wall_time_ms;
  j["tie_break_policy"] = r.tie_break_policy;
  return j;
}

inline Report ReportFromJson(const nlohmann::json& j) {
  Report r;
  r.n = j.at("n").get<std::size_t>();
  r.d = j.at("d").get<std::size_t>();
  r.m = j.at("m").get<std::size_t>();
  r.s = j.at("s").get<std::size_t>();
  r.l = j.at("l").get<int>();
  r.algorithm = j.at("algorithm").get<std::string>();
  if (!j.at("terminal_phase").is_null()) r.terminal_phase = j["terminal_phase"].get<int>();
  r.stars = j.at("stars").get<std::int64_t>();
  r.suppressed_tuples = j.at("suppressed_tuples").get<std::int64_t>();
  if (!j.at("residue_size").is_null()) r.residue_size = j["residue_size"].get<std::int64_t>();
  r.groups = j.at("groups").get<std::size_t>();
  r.kl_divergence = j.at("kl_divergence").get<double>();
  r.wall_time_ms = j.at("wall_time_ms").get<double>();
  r.tie_break_policy = j.at("tie_break_policy").get<std::string>();
  return r;
}

// Reads a CSV with a header row. SA labels are re-encoded to dense ids in
// first-appearance order (or declared order); QI domains are the declared
// ones when given, else the observed values in first-appearance order.
inline MicrodataTable load_csv(const std::string& path, const JobConfig& config) {
  config.Validate();
  const auto records = csv::ReadFile(path);
  if (records.empty()) throw InvalidArgument("'" + path + "' is empty");
  const csv::Record& header = records.front();
  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column.emplace(header[i], i);
  auto locate = [&](const std::string& name) {
    auto it = column.find(name);
    if (it == column.end()) throw InvalidArgument("'" + path + "' has no column '" + name + "'");
    return it->second;
  };
  std::vector<std::size_t> qi_idx;
  for (const auto& c : config.qi_columns) qi_idx.push_back(locate(c));
  const std::size_t sa_idx = locate(config.sa_column);
  for (const auto& [name, dom] : config.domains) {
    if (name != config.sa_column &&
        std::find(config.qi_columns.begin(), config.qi_columns.end(), name) ==
            config.qi_columns.end()) {
      throw InvalidArgument("domain declared for unused column '" + name + "'");
    }
  }

  const std::size_t d = qi_idx.size();
  std::vector<std::vector<std::string>> domains(d + 1);
  std::vector<std::unordered_map<std::string, ValueId>> ids(d + 1);
  std::vector<bool> declared(d + 1, false);
  std::vector<std::string> names = config.qi_columns;
  names.push_back(config.sa_column);
  for (std::size_t a = 0; a <= d; ++a) {
    auto it = config.domains.find(names[a]);
    if (it == config.domains.end()) continue;
    declared[a] = true;
    for (const auto& v : it->second) {
      if (ids[a].emplace(v, static_cast<ValueId>(domains[a].size())).second) {
        domains[a].push_back(v);
      }
    }
  }

  std::vector<std::size_t> source = qi_idx;
  source.push_back(sa_idx);
  std::vector<ValueId> cells;
  std::vector<SaValue> sa;
  std::vector<std::set<std::string>> undeclared(d + 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size()) {
      throw InvalidArgument("'" + path + "' line " + std::to_string(r + 1) + " has " +
                            std::to_string(rec.size()) + " fields, header has " +
                            std::to_string(header.size()));
    }
    for (std::size_t a = 0; a <= d; ++a) {
      const std::string& v = rec[source[a]];
      if (a < d && v == kStarCell) {
        throw InvalidArgument("'" + path + "' line " + std::to_string(r + 1) +
                              ": QI value '*' is reserved for suppressed cells");
      }
      auto it = ids[a].find(v);
      ValueId id = 0;
      if (it != ids[a].end()) {
        id = it->second;
      } else if (declared[a]) {
        undeclared[a].insert(v);
      } else {
        id = static_cast<ValueId>(domains[a].size());
        ids[a].emplace(v, id);
        domains[a].push_back(v);
      }
      if (a < d) {
        cells.push_back(id);
      } else {
        sa.push_back(static_cast<SaValue>(id) + 1);
      }
    }
  }
  for (std::size_t a = 0; a <= d; ++a) {
    if (undeclared[a].empty()) continue;
    std::string list;
    for (const auto& v : undeclared[a]) list += (list.empty() ? "'" : ", '") + v + "'";
    throw InvalidArgument("column '" + names[a] + "' has values outside its declared domain: " +
                          list);
  }
  if (sa.empty()) throw InvalidArgument("'" + path + "' has no data rows");

  std::vector<Attribute> qi;
  for (std::size_t a = 0; a < d; ++a) qi.emplace_back(names[a], std::move(domains[a]));
  Schema schema(std::move(qi), Attribute(names[d], std::move(domains[d])));
  MicrodataTable table(std::move(schema), std::move(cells), std::move(sa));
  RequireEligible(table, config.l);
  return table;
}

inline void write_csv(const MicrodataTable& table, std::ostream& out) {
  csv::Record header;
  for (const auto& a : table.schema().qi()) header.push_back(a.name());
  header.push_back(table.schema().sa().name());
  csv::WriteRecord(out, header);
  for (RowId r = 0; r < table.size(); ++r) {
    csv::Record rec;
    for (std::size_t a = 0; a < table.d(); ++a) {
      rec.push_back(table.schema().qi(a).label(table.qi(r, a)));
    }
    rec.push_back(table.schema().sa_label(table.sa(r)));
    csv::WriteRecord(out, rec);
  }
}

inline void write_csv(const MicrodataTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  write_csv(table, out);
}

// Published table in input row order with a trailing group column.
inline void write_suppressed_csv(const SuppressedTable& st, std::ostream& out) {
  csv::Record header;
  for (const auto& a : st.schema().qi()) header.push_back(a.name());
  header.push_back(st.schema().sa().name());
  header.push_back("group");
  csv::WriteRecord(out, header);
  for (RowId r = 0; r < st.size(); ++r) {
    csv::Record rec;
    for (std::size_t a = 0; a < st.d(); ++a) {
      rec.push_back(st.is_star(r, a)
                        ? std::string(kStarCell)
                        : st.schema().qi(a).label(static_cast<ValueId>(st.cell(r, a))));
    }
    rec.push_back(st.schema().sa_label(st.sa(r)));
    rec.push_back(std::to_string(st.group(r)));
    csv::WriteRecord(out, rec);
  }
}

struct JobResult {
  Report report;
  Partition partition;
  SuppressedTable published;
};

// Runs the configured algorithm on an in-memory table.
inline JobResult Anonymize(const MicrodataTable& table, const JobConfig& config) {
  config.Validate();
  RequireEligible(table, config.l);
  JobResult out;
  Report& rep = out.report;
  rep.n = table.size();
  rep.d = table.d();
  rep.m = table.m();
  rep.s = group_by_qi(table).size();
  rep.l = config.l;
  rep.algorithm = AlgorithmName(config.algorithm);

  const auto start = std::chrono::steady_clock::now();
  switch (config.algorithm) {
    case Algorithm::kTp: {
      const TpResult tp = run_tp(table, config.l);
      out.partition = ToPartition(tp);
      rep.terminal_phase = tp.report.terminal_phase;
      rep.residue_size = tp.report.residue_size;
      break;
    }
    case Algorithm::kTpPlus: {
      TpPlusResult plus = tp_plus(table, config.l);
      out.partition = std::move(plus.partition);
      rep.terminal_phase = plus.tp.report.terminal_phase;
      rep.residue_size = plus.tp.report.residue_size;
      break;
    }
    case Algorithm::kHilbert:
      out.partition = hilbert_partition(table, config.l);
      break;
    case Algorithm::kMatching:
      if (config.l != 2 || table.sa_histogram().distinct() != 2) {
        throw InvalidArgument("algorithm 'matching' needs l = 2 and exactly 2 SA values");
      }
      out.partition = optimal_two_diverse(table).pairs;
      break;
  }
  out.published = materialize(table, out.partition);
  rep.wall_time_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  if (!IsLDiverse(table, out.partition, config.l)) {
    throw InvariantViolation("published partition is not " + std::to_string(config.l) +
                             "-diverse");
  }
  rep.stars = count_stars(out.published);
  rep.suppressed_tuples = count_suppressed(out.published);
  rep.groups = out.partition.groups.size();
  rep.kl_divergence = kl_divergence(table, out.published);
  return out;
}

inline Report run_job(const JobConfig& config) {
  const MicrodataTable table = load_csv(config.input, config);
  JobResult result = Anonymize(table, config);
  if (!config.output.empty()) {
    std::ofstream out(config.output, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write '" + config.output + "'");
    write_suppressed_csv(result.published, out);
  }
  if (!config.report.empty()) {
    std::ofstream out(config.report, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write '" + config.report + "'");
    out << ToJson(result.report).dump(2) << '\n';
  }
  return result.report;
}

struct BatchOutcome {
  std::string input;
  std::optional<Report> report;
  std::optional<ErrorKind> error;
  std::string message;
};

// Runs one job per *.csv file in config.input (a directory), writing
// <output>/<name>.csv and <report>/<name>.json. Jobs are independent and
// spread over `workers` threads; results come back in file-name order.
inline std::vector<BatchOutcome> run_batch(const JobConfig& config, unsigned workers = 1) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(config.input)) {
    throw InvalidArgument("'" + config.input + "' is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(config.input)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (!config.output.empty()) fs::create_directories(config.output);
  if (!config.report.empty()) fs::create_directories(config.report);

  std::vector<BatchOutcome> outcomes(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      JobConfig job = config;
      job.input = files[i].string();
      const std::string stem = files[i].stem().string();
      job.output = config.output.empty() ? "" : (fs::path(config.output) / (stem + ".csv")).string();
      job.report = config.report.empty() ? "" : (fs::path(config.report) / (stem + ".json")).string();
      outcomes[i].input = job.input;
      try {
        outcomes[i].report = run_job(job);
      } catch (const Error& e) {
        outcomes[i].error = e.kind();
        outcomes[i].message = e.what();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(files.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return outcomes;
}

}  // namespace ldiversity

#endif  // LDIV_JOB_HPP_
