// Command-line runner for the romanoff experiments.
//
//   romanoff --experiment romanoff-density --x 100000 \
//            --spec-a kind=Primes --spec-b "kind=PowerPoly;a=2;poly=1,0" --out run1
//
// writes run1.csv and run1.json. Without --out the report selected by
// --format goes to stdout. A flat key=value file passed with --config
// supplies defaults; flags given on the command line win.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "romanoff/errors.hpp"
#include "romanoff/experiment.hpp"

namespace {

constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  romanoff::ExperimentConfig config;
  std::string out;
  std::string format = "both";
  double alpha = 0.0;
  std::uint64_t limit = 0;

  CLI::App app{"Romanoff-type representation experiments"};
  app.set_config("--config", "", "flat key=value file with defaults for any flag");
  app.add_option("--experiment", config.experiment, "experiment name")
      ->required()
      ->check(CLI::IsMember(romanoff::experiment_names()));
  app.add_option("--x", config.x, "cutoff or comma list of cutoffs");
  app.add_option("--spec-a", config.spec_a, "A-side sequence record, e.g. kind=Primes");
  app.add_option("--spec-b", config.spec_b, "B-side sequence record, e.g. kind=PowerPoly;a=2;poly=1,0")
      ->capture_default_str();
  app.add_option("--curve", config.curve, "curated curve id, A,B, or all")->capture_default_str();
  app.add_option("--poly", config.poly, "default polynomial, coefficients high to low")
      ->capture_default_str();
  app.add_option("--base", config.base, "default base a")->capture_default_str();
  app.add_option("--s", config.s, "moment exponents, e.g. 1-4 or 1,3")->capture_default_str();
  app.add_option("--c1-grid", config.c1_grid, "comma list of c1 values");
  auto* alpha_opt = app.add_option("--alpha", alpha, "prime-range exponent");
  auto* limit_opt = app.add_option("--limit", limit, "table limit, r_max, q_max, n_max or k_max");
  app.add_option("--residue", config.residue, "residue l for s2s-progression")->capture_default_str();
  app.add_option("--epsilon", config.epsilon, "order-sum exponent")->capture_default_str();
  app.add_option("--c", config.c, "comma list of c for the y log y - cy floor")->capture_default_str();
  app.add_option("--workers", config.workers, "worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--out", out, "output path prefix; writes <out>.csv and <out>.json");
  app.add_option("--format", format, "report written to stdout or to --out")
      ->check(CLI::IsMember({"csv", "json", "both"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  if (alpha_opt->count() > 0) config.alpha = alpha;
  if (limit_opt->count() > 0) config.limit = limit;

  const auto start = std::chrono::steady_clock::now();
  romanoff::ExperimentResult result;
  try {
    result = romanoff::run_experiment(config);
  } catch (const romanoff::SieveExhausted& e) {
    std::cerr << "resource error: " << e.what() << "; rerun with a table limit of at least "
              << e.required_limit() << "\n";
    return kExitResource;
  } catch (const romanoff::OverflowError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const romanoff::InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const romanoff::ConsistencyError& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return kExitInvariant;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  try {
    if (out.empty()) {
      if (format != "json") std::cout << result.csv;
      if (format != "csv") std::cout << result.json;
    } else {
      if (format != "json") write_file(out + ".csv", result.csv);
      if (format != "csv") write_file(out + ".json", result.json);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  }
  std::cerr << config.experiment << ": wall time " << seconds << " s, workers " << config.workers
            << "\n";
  for (const auto& f : result.failures) std::cerr << "invariant failure: " << f << "\n";
  return result.checks_passed ? 0 : kExitInvariant;
}
