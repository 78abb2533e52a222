#include <doctest.h>

#include <algorithm>
#include <nlohmann/json.hpp>
#include <sstream>

#include "romanoff/errors.hpp"
#include "romanoff/experiment.hpp"

using namespace romanoff;

namespace {

ExperimentConfig named(const std::string& name) {
  ExperimentConfig c;
  c.experiment = name;
  return c;
}

}  // namespace

TEST_CASE("every experiment runs at its defaults with checks passing") {
  REQUIRE(experiment_names().size() == 12);
  for (const auto& name : experiment_names()) {
    CAPTURE(name);
    const auto result = run_experiment(named(name));
    CHECK(result.checks_passed);
    CHECK(result.failures.empty());
    CHECK(result.csv.rfind("# romanoff " ROMANOFF_VERSION "\n# experiment=" + name + "\n", 0) == 0);
    const auto doc = nlohmann::json::parse(result.json);
    CHECK(doc["version"] == ROMANOFF_VERSION);
    CHECK(doc["config"]["experiment"] == name);
    CHECK(doc["checks_passed"] == true);
    CHECK(doc["summary"].is_object());
    CHECK_FALSE(doc["config"].contains("workers"));

    std::istringstream lines(result.csv);
    std::string line;
    std::size_t width = 0;
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto cells = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
      if (width == 0) width = cells;
      CHECK(cells == width);
      ++rows;
    }
    CHECK(rows >= 2);
  }
}

TEST_CASE("reports are identical across worker counts and reruns") {
  for (const auto& name : experiment_names()) {
    CAPTURE(name);
    auto one = named(name);
    auto eight = named(name);
    eight.workers = 8;
    const auto a = run_experiment(one);
    const auto b = run_experiment(eight);
    CHECK(a.csv == b.csv);
    CHECK(a.json == b.json);
    CHECK(run_experiment(one).csv == a.csv);
  }
}

TEST_CASE("experiment-specific summaries") {
  auto hasse = named("hasse-scan");
  hasse.curve = "all";
  hasse.limit = 2000;
  const auto doc = nlohmann::json::parse(run_experiment(hasse).json);
  CHECK(doc["summary"]["curves"].size() == 3);
  for (const auto& c : doc["summary"]["curves"]) CHECK(c["violations"] == 0);

  auto lam = named("lambda-sum");
  lam.spec_b = "kind=PowerPoly;a=2;poly=1,0,1";
  lam.x = "1e4";
  const auto lam_doc = nlohmann::json::parse(run_experiment(lam).json);
  CHECK(lam_doc["summary"]["alpha"] == 0.25);
  lam.spec_b = "kind=Primes";
  CHECK_THROWS_AS(run_experiment(lam), InvalidArgument);
  lam.alpha = 0.5;
  CHECK(run_experiment(lam).checks_passed);
}

TEST_CASE("input errors") {
  CHECK_THROWS_AS(run_experiment(named("no-such-experiment")), InvalidArgument);
  auto bad_poly = named("romanoff-density");
  bad_poly.spec_b = "kind=PowerPoly;a=2;poly=-1,0,1";
  CHECK_THROWS_AS(run_experiment(bad_poly), InvalidArgument);
  auto bad_x = named("romanoff-density");
  bad_x.x = "1e4,ten";
  CHECK_THROWS_AS(run_experiment(bad_x), InvalidArgument);
  auto tiny = named("romanoff-density");
  tiny.x = "2";
  CHECK_THROWS_AS(run_experiment(tiny), InvalidArgument);
  auto bad_key = named("romanoff-density");
  bad_key.spec_a = "kind=Primes;colour=red";
  CHECK_THROWS_AS(run_experiment(bad_key), InvalidArgument);
  auto b_only = named("romanoff-density");
  b_only.spec_a = "kind=PowerPoly";
  CHECK_THROWS_AS(run_experiment(b_only), InvalidArgument);
  auto base1 = named("romanoff-density");
  base1.base = 1;
  CHECK_THROWS_AS(run_experiment(base1), InvalidArgument);
}

TEST_CASE("list parsing") {
  CHECK(parse_u64_list("10,1e6,200") == std::vector<std::uint64_t>{10, 1000000, 200});
  CHECK(parse_u64_list("1e18") == std::vector<std::uint64_t>{1000000000000000000ull});
  CHECK_THROWS_AS(parse_u64_list(""), InvalidArgument);
  CHECK_THROWS_AS(parse_u64_list("-3"), InvalidArgument);
  CHECK_THROWS_AS(parse_u64_list("1e30"), InvalidArgument);
  CHECK(parse_double_list("0.5,1,2e0") == std::vector<double>{0.5, 1.0, 2.0});
  CHECK_THROWS_AS(parse_double_list("0.5,x"), InvalidArgument);
  CHECK(parse_exponent_range("1-4") == std::vector<unsigned>{1, 2, 3, 4});
  CHECK(parse_exponent_range("2,5") == std::vector<unsigned>{2, 5});
  CHECK_THROWS_AS(parse_exponent_range("4-1"), InvalidArgument);
  CHECK_THROWS_AS(parse_exponent_range("0-3"), InvalidArgument);
  CHECK_THROWS_AS(parse_exponent_range("0"), InvalidArgument);
}

TEST_CASE("double formatting round-trips") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(1e-300) == "1e-300");
  for (const double v : {1.0 / 3.0, 0.8165768702442621, 6.02214076e23, -2.5e-9}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("recorded config") {
  auto c = named("order-sum");
  c.workers = 8;
  const auto rec = recorded_config(c);
  REQUIRE_FALSE(rec.empty());
  CHECK(rec.front().first == "experiment");
  for (const auto& [k, v] : rec) CHECK(k != "workers");
}
