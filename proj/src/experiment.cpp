#include "romanoff/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "romanoff/arith.hpp"
#include "romanoff/elliptic.hpp"
#include "romanoff/engine.hpp"
#include "romanoff/errors.hpp"
#include "romanoff/moments.hpp"
#include "romanoff/sequences.hpp"

#ifndef ROMANOFF_VERSION
#define ROMANOFF_VERSION "dev"
#endif

namespace romanoff {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::uint64_t parse_u64(const std::string& s) {
  // Accepts plain integers and exact powers written as 1e6.
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec == std::errc() && res.ptr == s.data() + s.size()) return v;
  const auto e = s.find_first_of("eE");
  if (e != std::string::npos) {
    const std::uint64_t mant = parse_u64(s.substr(0, e));
    const std::uint64_t exp = parse_u64(s.substr(e + 1));
    std::uint64_t out = mant;
    for (std::uint64_t i = 0; i < exp; ++i) {
      if (__builtin_mul_overflow(out, 10, &out)) throw InvalidArgument("integer too large: " + s);
    }
    return out;
  }
  throw InvalidArgument("not a non-negative integer: '" + s + "'");
}

std::string str(std::uint64_t v) { return std::to_string(v); }
std::string flag(bool b) { return b ? "1" : "0"; }

class Report {
 public:
  Report(const ExperimentConfig& config, std::vector<std::string> columns)
      : config_(config), columns_(std::move(columns)) {}

  void row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size()) throw std::logic_error("report row width mismatch");
    rows_.push_back(std::move(cells));
  }

  void check(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }

  json summary = json::object();

  ExperimentResult finish() {
    ExperimentResult out;
    std::ostringstream csv;
    csv << "# romanoff " << ROMANOFF_VERSION << "\n";
    json cfg = json::object();
    for (const auto& [k, v] : recorded_config(config_)) {
      csv << "# " << k << "=" << v << "\n";
      cfg[k] = v;
    }
    for (std::size_t i = 0; i < columns_.size(); ++i) csv << (i ? "," : "") << columns_[i];
    csv << "\n";
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) csv << (i ? "," : "") << r[i];
      csv << "\n";
    }
    json doc = json::object();
    doc["version"] = ROMANOFF_VERSION;
    doc["config"] = cfg;
    doc["checks_passed"] = failures_.empty();
    doc["failures"] = failures_;
    doc["summary"] = summary;
    out.csv = csv.str();
    out.json = doc.dump(2) + "\n";
    out.checks_passed = failures_.empty();
    out.failures = failures_;
    return out;
  }

 private:
  const ExperimentConfig& config_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::string> failures_;
};

struct Inputs {
  const ExperimentConfig& config;
  std::vector<std::uint64_t> xs;
  SpecDefaults defaults;

  std::uint64_t first_x() const { return xs.front(); }
  std::uint64_t max_x() const { return *std::max_element(xs.begin(), xs.end()); }
  SequenceSpec spec_a() const { return parse_sequence_spec(config.spec_a, defaults); }
  SequenceSpec spec_b() const { return parse_sequence_spec(config.spec_b, defaults); }
  Polynomial poly() const { return Polynomial::parse_coefficient_list(config.poly); }
  std::vector<CurveParams> curves() const {
    if (config.curve == "all") {
      const auto all = curated_curves();
      return {all.begin(), all.end()};
    }
    return {find_curve(config.curve)};
  }
  std::optional<std::filesystem::path> cache() const { return order_cache_dir_from_env(); }
};

json moments_json(const MomentReport& m) {
  json j = json::object();
  j["x"] = m.x;
  j["S1"] = m.s1;
  j["S2"] = m.s2;
  j["S3"] = m.s3;
  j["sum_r"] = m.sum_r;
  j["sum_r2"] = m.sum_r2;
  j["identity_holds"] = m.identity_holds;
  j["S2_equals_S3"] = m.s2_equals_s3;
  j["sum_r_identity_holds"] = m.sum_r_identity_holds;
  j["S2_surrogate"] = m.s2_surrogate ? json(*m.s2_surrogate) : json(nullptr);
  j["surrogate_holds"] = m.surrogate_holds;
  j["A_half"] = m.a_half;
  j["B_half"] = m.b_half;
  j["lower_bound_step_holds"] = m.lower_bound_step_holds;
  j["B_count"] = m.b_count;
  j["rho_B"] = m.rho_b;
  j["max_r"] = m.max_r;
  j["support"] = m.support;
  return j;
}

void check_moments(Report& rep, const MomentReport& m) {
  const std::string at = " at x=" + str(m.x);
  rep.check(m.identity_holds, "sum r^2 != S1 + S2 + S3" + at);
  rep.check(m.s2_equals_s3, "S2 != S3" + at);
  rep.check(m.sum_r_identity_holds, "sum r(n) != sum_i B(x - a_i)" + at);
  rep.check(m.surrogate_holds, "S2 exceeds its shifted-count surrogate" + at);
  rep.check(m.lower_bound_step_holds, "sum r(n) < A(x/2) B(x/2)" + at);
}

std::vector<double> c1_grid(const ExperimentConfig& config) {
  if (!config.c1_grid.empty()) return parse_double_list(config.c1_grid);
  std::vector<double> grid;
  for (int k = -6; k <= 2; ++k) grid.push_back(std::ldexp(1.0, k));
  return grid;
}

ExperimentResult romanoff_density(const Inputs& in) {
  Report rep(in.config, {"x", "c1", "threshold", "count_above", "sum_r_above", "lower_bound_shape",
                         "empirical_c2", "cauchy_schwarz"});
  const auto a = in.spec_a();
  const auto b = in.spec_b();
  if (!a.has_eta()) throw InvalidArgument(a.describe() + " carries no eta(x); use it as spec-b");
  const auto grid = c1_grid(in.config);
  const auto ctx = engine_context(a, b, in.max_x(), in.config.workers, in.cache());
  json per_x = json::array();
  for (const auto x : in.xs) {
    const auto profile = representation_counts(a, b, x, ctx, in.config.workers);
    const auto m = moment_decomposition(profile, in.config.workers, &ctx);
    check_moments(rep, m);
    std::uint64_t previous = std::numeric_limits<std::uint64_t>::max();
    auto sorted = grid;
    std::sort(sorted.begin(), sorted.end());
    for (const double c1 : sorted) {
      const auto t = threshold_count(profile, m, c1);
      rep.check(t.cauchy_schwarz_holds, "Cauchy-Schwarz fails at c1=" + format_double(c1));
      rep.check(t.count_above <= previous, "count_above increases with c1");
      previous = t.count_above;
      rep.row({str(x), format_double(c1), format_double(t.threshold), str(t.count_above),
               str(t.sum_r_above), format_double(t.lower_bound_shape), format_double(t.empirical_c2),
               flag(t.cauchy_schwarz_holds)});
    }
    auto j = moments_json(m);
    j["eta"] = a.eta(static_cast<double>(x));
    per_x.push_back(j);
  }
  rep.summary["spec_a"] = a.serialize();
  rep.summary["spec_b"] = b.serialize();
  rep.summary["moments"] = per_x;
  return rep.finish();
}

ExperimentResult moment_experiment(const Inputs& in) {
  Report rep(in.config, {"x", "S1", "S2", "S3", "sum_r", "sum_r2", "identity", "S2_eq_S3",
                         "S2_surrogate", "A_half", "B_half", "lower_bound_step"});
  const auto a = in.spec_a();
  const auto b = in.spec_b();
  const auto ctx = engine_context(a, b, in.max_x(), in.config.workers, in.cache());
  json per_x = json::array();
  for (const auto x : in.xs) {
    const auto profile = representation_counts(a, b, x, ctx, in.config.workers);
    const auto m = moment_decomposition(profile, in.config.workers, &ctx);
    check_moments(rep, m);
    rep.row({str(x), str(m.s1), str(m.s2), str(m.s3), str(m.sum_r), str(m.sum_r2),
             flag(m.identity_holds), flag(m.s2_equals_s3),
             m.s2_surrogate ? str(*m.s2_surrogate) : "", str(m.a_half), str(m.b_half),
             flag(m.lower_bound_step_holds)});
    per_x.push_back(moments_json(m));
  }
  rep.summary["spec_a"] = a.serialize();
  rep.summary["spec_b"] = b.serialize();
  rep.summary["moments"] = per_x;
  return rep.finish();
}

ExperimentResult shifted_bound(const Inputs& in) {
  Report rep(in.config, {"r", "count", "ratio"});
  const auto a = in.spec_a();
  const auto x = in.first_x();
  const std::uint64_t r_max = in.config.limit.value_or(std::min<std::uint64_t>(1000, x));
  TableRequirements req = required_tables(a, x + r_max);
  const auto ctx = SequenceContext::from_requirements(req, in.config.workers);
  const auto out = shifted_bound_ratio(a, x, r_max, ctx);
  for (const auto& r : out.rows) rep.row({str(r.r), str(r.count), format_double(r.ratio)});
  rep.summary["spec_a"] = a.serialize();
  rep.summary["x"] = x;
  rep.summary["r_max"] = r_max;
  rep.summary["sup_ratio"] = out.sup_ratio;
  rep.summary["argmax_r"] = out.argmax_r;
  return rep.finish();
}

ExperimentResult lambda_sum(const Inputs& in) {
  Report rep(in.config, {"x", "terms", "prime_cutoff", "primes_used", "sum", "ratio", "degenerate"});
  const auto b = in.spec_b();
  const auto alpha = in.config.alpha ? in.config.alpha : b.default_lambda_alpha();
  if (!alpha) throw InvalidArgument("lambda-sum needs --alpha for " + b.describe());
  const auto ctx = SequenceContext::covering(std::span(&b, 1), in.max_x(), in.config.workers, in.cache());
  json rows = json::array();
  for (const auto x : in.xs) {
    const auto s = lambda_weighted_sum(b, x, *alpha, ctx);
    rep.row({str(x), str(s.terms), format_double(s.prime_cutoff), str(s.primes_used),
             format_double(s.sum), format_double(s.ratio), flag(s.degenerate)});
  }
  rep.summary["spec_b"] = b.serialize();
  rep.summary["alpha"] = *alpha;
  return rep.finish();
}

ExperimentResult hasse_scan(const Inputs& in) {
  Report rep(in.config, {"curve", "p", "order", "bad", "in_hasse"});
  const std::uint64_t limit = in.config.limit.value_or(10000);
  json per_curve = json::array();
  for (const auto& curve : in.curves()) {
    const auto table = load_or_build_order_table(curve, limit, in.config.workers, in.cache());
    std::uint64_t violations = 0;
    std::uint64_t good = 0;
    for (const auto& e : table.entries()) {
      const bool inside = in_hasse_interval(e.prime, e.order);
      if (!e.bad) {
        ++good;
        if (!inside) ++violations;
      }
      rep.row({curve.id, str(e.prime), str(e.order), flag(e.bad), flag(inside)});
    }
    rep.check(violations == 0, "Hasse violations for " + curve.id);
    per_curve.push_back({{"curve", curve.id}, {"A", curve.a}, {"B", curve.b},
                         {"good_primes", good}, {"violations", violations}});
  }
  rep.summary["limit"] = limit;
  rep.summary["curves"] = per_curve;
  return rep.finish();
}

ExperimentResult order_multiplicity_scan(const Inputs& in) {
  Report rep(in.config, {"curve", "q", "order", "multiplicity", "bound", "ratio"});
  const std::uint64_t q_max = in.config.limit.value_or(10000);
  const std::uint64_t table_limit = q_max + 4 * isqrt(q_max) + 16;
  json per_curve = json::array();
  for (const auto& curve : in.curves()) {
    const auto table = load_or_build_order_table(curve, table_limit, in.config.workers, in.cache());
    std::uint64_t worst_q = 0;
    double worst = 0.0;
    std::uint64_t max_mult = 0;
    for (const auto& e : table.entries_up_to(q_max)) {
      if (e.bad) continue;
      const std::uint64_t m = order_multiplicity(table, e.prime);
      const double bound = 9.0 * std::sqrt(static_cast<double>(e.prime));
      rep.check(m * m <= 81 * static_cast<std::uint64_t>(e.prime),
                "multiplicity above 9 sqrt(q) at q=" + str(e.prime));
      const double ratio = static_cast<double>(m) / bound;
      if (ratio > worst) {
        worst = ratio;
        worst_q = e.prime;
      }
      max_mult = std::max(max_mult, m);
      rep.row({curve.id, str(e.prime), str(e.order), str(m), format_double(bound), format_double(ratio)});
    }
    per_curve.push_back({{"curve", curve.id}, {"max_multiplicity", max_mult},
                         {"max_ratio", worst}, {"argmax_q", worst_q}});
  }
  rep.summary["q_max"] = q_max;
  rep.summary["curves"] = per_curve;
  return rep.finish();
}

ExperimentResult david_wu(const Inputs& in) {
  Report rep(in.config, {"curve", "n", "alpha", "count_all", "count_good", "ratio", "ratio_good"});
  const auto x = in.first_x();
  const std::uint64_t n_max = in.config.limit.value_or(8);
  for (const auto& curve : in.curves()) {
    const auto table = load_or_build_order_table(curve, x, in.config.workers, in.cache());
    for (std::uint64_t n = 1; n <= n_max; ++n) {
      std::uint64_t total = 0;
      for (std::uint64_t alpha = 0; alpha < n; ++alpha) {
        const auto c = order_congruence_count(table, x, n, static_cast<std::int64_t>(alpha));
        total += c.count_all;
        rep.row({curve.id, str(n), str(alpha), str(c.count_all), str(c.count_good),
                 format_double(c.ratio), format_double(c.ratio_good)});
      }
      rep.check(total == table.entries_up_to(x).size(),
                "residue classes do not partition the primes 3 <= q <= x for n=" + str(n));
    }
  }
  rep.summary["x"] = x;
  rep.summary["n_max"] = n_max;
  return rep.finish();
}

ExperimentResult euler_moment(const Inputs& in) {
  Report rep(in.config, {"s", "N", "lhs", "prime_term", "rhs", "ratio", "fitted_constant"});
  const auto b = in.spec_b();
  const auto x = in.first_x();
  const double alpha = in.config.alpha.value_or(0.5);
  const auto ctx = SequenceContext::covering(std::span(&b, 1), x, in.config.workers, in.cache());
  const auto terms = enumerate(b, x, ctx);
  std::vector<std::uint64_t> values;
  for (const auto& t : terms.terms()) values.insert(values.end(), t.multiplicity, t.value);
  if (values.empty()) throw InvalidArgument("no terms of " + b.describe() + " up to x");
  auto sieve = std::make_shared<const PrimeSieve>(std::max<std::uint64_t>(isqrt(x) + 1, 1000));
  const Factorizer factorizer(sieve, std::min<std::uint64_t>(x, 4000000));
  for (const auto s : parse_exponent_range(in.config.s)) {
    const auto r = euler_lemma_ratio(values, x, alpha, s, factorizer);
    rep.check(r.lhs >= static_cast<double>(r.n_terms), "lhs < N at s=" + str(s));
    rep.row({str(s), str(r.n_terms), format_double(r.lhs), format_double(r.prime_term),
             format_double(r.rhs), format_double(r.ratio), format_double(r.fitted_constant)});
  }
  rep.summary["spec_b"] = b.serialize();
  rep.summary["M"] = x;
  rep.summary["alpha"] = alpha;
  return rep.finish();
}

ExperimentResult elliptic_moment(const Inputs& in) {
  Report rep(in.config, {"curve", "x", "s", "terms", "pi_x", "lhs", "fitted_constant"});
  const auto f = in.poly();
  const auto x_max = in.max_x();
  const auto top = f.try_eval(static_cast<std::int64_t>(x_max + 2 * isqrt(x_max) + 3));
  if (!top || *top > static_cast<__int128>(1) << 62) throw InvalidArgument("f(#E) too large to factor");
  const auto f_max = static_cast<std::uint64_t>(*top);
  auto sieve = std::make_shared<const PrimeSieve>(std::max<std::uint64_t>({isqrt(f_max) + 1, x_max, 1000}));
  const Factorizer factorizer(sieve, std::min<std::uint64_t>(f_max, 4000000));
  json fitted = json::array();
  for (const auto& curve : in.curves()) {
    const auto table = load_or_build_order_table(curve, x_max, in.config.workers, in.cache());
    for (const auto x : in.xs) {
      for (const auto s : parse_exponent_range(in.config.s)) {
        const auto m = elliptic_totient_moment(table, f, x, s, factorizer);
        rep.check(m.lhs >= static_cast<double>(m.n_terms), "lhs below term count");
        rep.check(std::isfinite(m.fitted_constant), "fitted constant not finite");
        rep.row({curve.id, str(x), str(s), str(m.n_terms), str(m.pi_x), format_double(m.lhs),
                 format_double(m.fitted_constant)});
        fitted.push_back({{"curve", curve.id}, {"x", x}, {"s", s}, {"C", m.fitted_constant}});
      }
    }
  }
  rep.summary["f"] = f.to_string();
  rep.summary["fitted"] = fitted;
  return rep.finish();
}

ExperimentResult order_sum(const Inputs& in) {
  Report rep(in.config, {"point", "partial_sum", "G", "G_over_log"});
  const auto x_max = in.max_x();
  const OrderTable table(in.config.base, std::max<std::uint64_t>(x_max, 3), in.config.workers);
  double previous_sum = 0.0;
  double previous_g = 0.0;
  json increments = json::array();
  auto xs = in.xs;
  std::sort(xs.begin(), xs.end());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto point = xs[i];
    const double partial = table.order_sum_partial(in.config.epsilon, point);
    const double g = table.growth(point);
    rep.check(partial >= previous_sum && g >= previous_g, "order sums decrease");
    if (i > 0) increments.push_back({{"from", xs[i - 1]}, {"to", point}, {"increment", partial - previous_sum}});
    previous_sum = partial;
    previous_g = g;
    rep.row({str(point), format_double(partial), format_double(g),
             format_double(g / std::log(static_cast<double>(point)))});
  }
  rep.summary["a"] = in.config.base;
  rep.summary["epsilon"] = in.config.epsilon;
  rep.summary["increments"] = increments;
  return rep.finish();
}

ExperimentResult s2s_progression(const Inputs& in) {
  Report rep(in.config, {"k", "l", "count", "ratio", "mertens_product", "mertens_ratio", "regime_violation"});
  const auto x = in.first_x();
  const std::uint64_t k_max = in.config.limit.value_or(isqrt(x));
  const SquareSumTable squares(x);
  double worst = 0.0;
  double worst_mertens = 0.0;
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    const auto r = s2s_progression_ratio(x, k, in.config.residue, squares);
    if (!r.regime_violation) worst = std::max(worst, r.ratio);
    worst_mertens = std::max(worst_mertens, r.mertens_ratio);
    rep.row({str(k), std::to_string(in.config.residue), str(r.count), format_double(r.ratio),
             format_double(r.mertens_product), format_double(r.mertens_ratio), flag(r.regime_violation)});
  }
  rep.summary["x"] = x;
  rep.summary["max_ratio_in_regime"] = worst;
  rep.summary["max_mertens_ratio"] = worst_mertens;
  return rep.finish();
}

ExperimentResult inequalities(const Inputs& in) {
  Report rep(in.config, {"kind", "parameter", "value", "bound", "holds"});
  for (const auto s : parse_exponent_range(in.config.s)) {
    const std::vector<double> none;
    const auto r = analytic_inequalities(s, 1.0, none);
    rep.check(r.tail_holds, "tail inequality fails at s=" + str(s));
    rep.row({"tail", str(s), format_double(r.tail_sum), format_double(r.tail_bound), flag(r.tail_holds)});
  }
  for (const double c : parse_double_list(in.config.c)) {
    const auto grid = log_grid(1e-3, 1e3, 999, c);
    const auto r = analytic_inequalities(1, c, grid, 1);
    rep.check(r.floor_holds, "y log y - cy floor fails at c=" + format_double(c));
    rep.check(r.equality_gap <= kInequalitySlack, "no equality at exp(c-1) for c=" + format_double(c));
    rep.row({"floor", format_double(c), format_double(r.min_slack), format_double(r.equality_gap),
             flag(r.floor_holds && r.equality_gap <= kInequalitySlack)});
  }
  return rep.finish();
}

using Runner = std::function<ExperimentResult(const Inputs&)>;

const std::map<std::string, std::pair<Runner, std::string>>& registry() {
  static const std::map<std::string, std::pair<Runner, std::string>> r = {
      {"romanoff-density", {romanoff_density, "100000"}},
      {"moment-decomposition", {moment_experiment, "10000"}},
      {"shifted-bound", {shifted_bound, "1000000"}},
      {"lambda-sum", {lambda_sum, "10000,100000,1000000"}},
      {"hasse-scan", {hasse_scan, "10000"}},
      {"order-multiplicity", {order_multiplicity_scan, "10000"}},
      {"david-wu", {david_wu, "100000"}},
      {"euler-moment", {euler_moment, "100000"}},
      {"elliptic-moment", {elliptic_moment, "10000"}},
      {"order-sum", {order_sum, "1000,10000,100000,1000000"}},
      {"s2s-progression", {s2s_progression, "1000000"}},
      {"analytic-inequalities", {inequalities, "1000000"}},
  };
  return r;
}

}  // namespace

std::vector<std::uint64_t> parse_u64_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_u64(item));
  if (out.empty()) throw InvalidArgument("empty integer list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw InvalidArgument("not a number: '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument("empty number list");
  return out;
}

std::vector<unsigned> parse_exponent_range(const std::string& text) {
  std::vector<unsigned> out;
  const auto dash = text.find('-');
  if (dash != std::string::npos) {
    const auto lo = parse_u64(text.substr(0, dash));
    const auto hi = parse_u64(text.substr(dash + 1));
    if (lo == 0 || hi < lo) throw InvalidArgument("bad exponent range '" + text + "'");
    for (auto s = lo; s <= hi; ++s) out.push_back(static_cast<unsigned>(s));
    return out;
  }
  for (const auto v : parse_u64_list(text)) {
    if (v == 0) throw InvalidArgument("exponents must be >= 1");
    out.push_back(static_cast<unsigned>(v));
  }
  return out;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, entry] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

std::vector<std::pair<std::string, std::string>> recorded_config(const ExperimentConfig& c) {
  std::vector<std::pair<std::string, std::string>> out = {
      {"experiment", c.experiment}, {"x", c.x},       {"spec_a", c.spec_a},
      {"spec_b", c.spec_b},         {"curve", c.curve}, {"poly", c.poly},
      {"base", str(c.base)},        {"s", c.s},       {"c1_grid", c.c1_grid},
      {"alpha", c.alpha ? format_double(*c.alpha) : ""},
      {"limit", c.limit ? str(*c.limit) : ""},
      {"residue", std::to_string(c.residue)},
      {"epsilon", format_double(c.epsilon)},
      {"c", c.c},
  };
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const auto it = registry().find(config.experiment);
  if (it == registry().end()) throw InvalidArgument("unknown experiment '" + config.experiment + "'");
  ExperimentConfig resolved = config;
  if (resolved.x.empty()) resolved.x = it->second.second;
  Inputs in{resolved, parse_u64_list(resolved.x), {}};
  for (const auto x : in.xs) {
    if (x < 3) throw InvalidArgument("cutoffs must be >= 3");
  }
  if (resolved.base < 2) throw InvalidArgument("base a must be >= 2");
  in.defaults.base = resolved.base;
  in.defaults.poly = Polynomial::parse_coefficient_list(resolved.poly);
  if (resolved.curve != "all") in.defaults.curve = find_curve(resolved.curve);
  return it->second.first(in);
}

}  // namespace romanoff
