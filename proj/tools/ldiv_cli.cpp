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

// Command-line front end.
//
//   ldiv --input t.csv --output out.csv --report r.json --qi age,sex --sa disease
//        --l 3 --algo tp_plus
//   ldiv gen --n 100000 --domains 8,8,8,8 --m 12 --skew 0.8 --l 4 --output t.csv
//   ldiv gadget --output gadget.csv
//
// Exit codes: 0 success, 2 configuration error, 3 table not l-eligible,
// 4 internal invariant violation.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ldiv/ldiv.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIneligible = 3;
constexpr int kExitInvariant = 4;

int ExitCode(ldiversity::ErrorKind kind) {
  switch (kind) {
    case ldiversity::ErrorKind::kInvalidArgument: return kExitConfig;
    case ldiversity::ErrorKind::kIneligible: return kExitIneligible;
    case ldiversity::ErrorKind::kInvariant: return kExitInvariant;
  }
  return kExitInvariant;
}

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

// "col=v1|v2|v3"
void AddDomain(ldiversity::JobConfig& config, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ldiversity::InvalidArgument("--domain expects col=v1|v2|..., got '" + spec + "'");
  }
  config.domains[spec.substr(0, eq)] = Split(spec.substr(eq + 1), '|');
}

// "1,1,1;1,2,2;..." with 1-based coordinates.
std::vector<std::array<std::size_t, 3>> ParsePoints(const std::string& text) {
  std::vector<std::array<std::size_t, 3>> points;
  for (const auto& p : Split(text, ';')) {
    const auto parts = Split(p, ',');
    if (parts.size() != 3) throw ldiversity::InvalidArgument("point '" + p + "' needs 3 coordinates");
    std::array<std::size_t, 3> pt{};
    for (std::size_t k = 0; k < 3; ++k) {
      const long v = std::stol(parts[k]);
      if (v < 1) throw ldiversity::InvalidArgument("coordinates are 1-based: '" + p + "'");
      pt[k] = static_cast<std::size_t>(v - 1);
    }
    points.push_back(pt);
  }
  return points;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"l-diverse suppression of categorical microdata"};
  app.require_subcommand(0, 1);

  ldiversity::JobConfig config;
  std::string qi_list, algo = "tp";
  std::vector<std::string> domain_specs;
  unsigned jobs = 1;
  app.add_option("--input", config.input, "input CSV file, or a directory of CSVs");
  app.add_option("--output", config.output, "published CSV (directory in batch mode)");
  app.add_option("--report", config.report, "JSON report (directory in batch mode)");
  app.add_option("--qi", qi_list, "comma-separated QI columns");
  app.add_option("--sa", config.sa_column, "sensitive column");
  app.add_option("--l", config.l, "diversity parameter (>= 2)");
  app.add_option("--algo", algo, "tp | tp_plus | hilbert | matching");
  app.add_option("--domain", domain_specs, "declared domain, col=v1|v2|...");
  app.add_option("--seed", config.seed, "seed");
  app.add_option("--jobs", jobs, "parallel jobs in batch mode");

  auto* gen = app.add_subcommand("gen", "write a synthetic l-eligible table");
  ldiversity::SyntheticSpec spec;
  std::string gen_domains = "4,4,4,4", gen_output;
  gen->add_option("--n", spec.n, "rows");
  gen->add_option("--domains", gen_domains, "comma-separated QI domain sizes");
  gen->add_option("--m", spec.m, "SA domain size");
  gen->add_option("--skew", spec.skew, "Zipf exponent of the SA distribution");
  gen->add_option("--l", spec.l, "target diversity");
  gen->add_option("--seed", spec.seed, "seed");
  gen->add_option("--output", gen_output, "output CSV (stdout if omitted)");

  auto* gadget = app.add_subcommand("gadget", "write a 3DM reduction table");
  std::size_t gadget_n = 0, gadget_m = 0;
  std::string gadget_points, gadget_output;
  gadget->add_option("--n", gadget_n, "values per dimension (default: built-in example)");
  gadget->add_option("--m", gadget_m, "distinct SA values, in [3, 3n]");
  gadget->add_option("--points", gadget_points, "points as 'x,y,z;...' (1-based)");
  gadget->add_option("--output", gadget_output, "output CSV (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*gen) {
      spec.domain_sizes.clear();
      for (const auto& s : Split(gen_domains, ',')) spec.domain_sizes.push_back(std::stoul(s));
      const auto table = ldiversity::generate_synthetic(spec);
      if (gen_output.empty()) {
        ldiversity::write_csv(table, std::cout);
      } else {
        ldiversity::write_csv(table, gen_output);
      }
      return 0;
    }
    if (*gadget) {
      ldiversity::ReductionInstance inst = ldiversity::ExampleReductionInstance();
      if (gadget_n != 0 || !gadget_points.empty()) {
        inst.n = gadget_n;
        inst.points = ParsePoints(gadget_points);
      }
      if (gadget_m != 0) inst.m = gadget_m;
      const auto table = ldiversity::build_reduction(inst);
      if (gadget_output.empty()) {
        ldiversity::write_csv(table, std::cout);
      } else {
        ldiversity::write_csv(table, gadget_output);
      }
      return 0;
    }

    if (config.input.empty()) throw ldiversity::InvalidArgument("--input is required");
    config.qi_columns = Split(qi_list, ',');
    config.algorithm = ldiversity::ParseAlgorithm(algo);
    for (const auto& d : domain_specs) AddDomain(config, d);
    config.Validate();

    if (std::filesystem::is_directory(config.input)) {
      int status = 0;
      for (const auto& o : ldiversity::run_batch(config, jobs)) {
        if (o.error) {
          std::cerr << o.input << ": " << o.message << '\n';
          status = std::max(status, ExitCode(*o.error));
        } else {
          std::cerr << o.input << ": " << o.report->stars << " stars\n";
        }
      }
      return status;
    }
    const ldiversity::Report report = ldiversity::run_job(config);
    if (config.report.empty()) std::cout << ldiversity::ToJson(report).dump(2) << '\n';
    return 0;
  } catch (const ldiversity::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitCode(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
