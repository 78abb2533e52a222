#pragma once

// Named experiments over the library, each producing a CSV data table and a
// JSON summary. Reports depend only on the configuration: the worker count
// and wall time are kept out of them.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace romanoff {

struct ExperimentConfig {
  std::string experiment;
  std::string x;                 // one cutoff or a comma list
  std::string spec_a = "kind=Primes";
  std::string spec_b = "kind=PowerPoly";
  std::string curve = "a1b1";    // curated id, "A,B", or "all"
  std::string poly = "1,0";      // default f, coefficients high to low
  std::uint64_t base = 2;
  std::string s = "1-4";         // "1-4" or "1,3,5"
  std::string c1_grid;           // empty: 2^-6 .. 2^2
  std::optional<double> alpha;
  std::optional<std::uint64_t> limit;
  std::int64_t residue = 1;
  double epsilon = 0.5;
  std::string c = "0.5,1,2,5";
  unsigned workers = 1;
};

struct ExperimentResult {
  std::string csv;
  std::string json;
  bool checks_passed = true;
  std::vector<std::string> failures;
};

const std::vector<std::string>& experiment_names();

// Config entries recorded in report headers, in fixed order.
std::vector<std::pair<std::string, std::string>> recorded_config(const ExperimentConfig& config);

// Throws InvalidArgument for an unknown experiment or malformed inputs and
// SieveExhausted when a table limit is too small.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Shortest round-trip decimal form.
std::string format_double(double v);

std::vector<std::uint64_t> parse_u64_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);
// "1-4" or "1,2,5".
std::vector<unsigned> parse_exponent_range(const std::string& text);

}  // namespace romanoff
