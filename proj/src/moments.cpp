#include "romanoff/moments.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "romanoff/errors.hpp"
#include "romanoff/numeric.hpp"

namespace romanoff {

namespace {

constexpr std::size_t kPrimeBlock = 4096;

double ipow(double v, unsigned s) {
  double out = 1.0;
  for (unsigned i = 0; i < s; ++i) out *= v;
  return out;
}

void require_exponent(unsigned s) {
  if (s == 0) throw InvalidArgument("moment exponent s must be >= 1");
}

}  // namespace

double totient_ratio_power(const Factorization& factorization, unsigned s) {
  double ratio = 1.0;
  for (const auto& pp : factorization.factors()) {
    const double p = static_cast<double>(pp.prime);
    ratio *= p / (p - 1.0);
  }
  return ipow(ratio, s);
}

double euler_lemma_lhs_direct(std::span<const std::uint64_t> values, unsigned s,
                              const Factorizer& factorizer) {
  require_exponent(s);
  std::vector<std::uint64_t> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  CompensatedSum lhs;
  for (const auto v : sorted) {
    if (v == 0) throw InvalidArgument("values must be positive");
    const double phi = static_cast<double>(euler_phi(v, factorizer.factor(v)));
    lhs.add(ipow(static_cast<double>(v) / phi, s));
  }
  return lhs.value();
}

MomentSumRecord euler_lemma_ratio(std::span<const std::uint64_t> values, std::uint64_t m,
                                  double alpha, unsigned s, const Factorizer& factorizer) {
  require_exponent(s);
  if (values.empty()) throw InvalidArgument("euler_lemma_ratio needs at least one value");
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  std::vector<std::uint64_t> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == 0) throw InvalidArgument("values must be positive");
  if (sorted.back() > m) throw InvalidArgument("every value must be <= M");

  MomentSumRecord rec;
  rec.s = s;
  rec.n_terms = sorted.size();
  rec.prime_cutoff = m >= 2 ? std::pow(std::log(static_cast<double>(m)), alpha) : 0.0;
  const auto cutoff = rec.prime_cutoff >= 2.0 ? static_cast<std::uint64_t>(rec.prime_cutoff) : 0;

  CompensatedSum lhs;
  std::map<std::uint64_t, std::uint64_t> omega;  // p -> #{n : p | a_n}
  for (const auto v : sorted) {
    const auto fac = factorizer.factor(v);
    lhs.add(totient_ratio_power(fac, s));
    for (const auto& pp : fac.factors()) {
      if (pp.prime <= cutoff) ++omega[pp.prime];
    }
  }
  rec.lhs = lhs.value();

  CompensatedSum prime_term;
  for (const auto& [p, w] : omega) {
    const double lp = std::log(static_cast<double>(p));
    prime_term.add(static_cast<double>(w) * ipow(lp, s) / static_cast<double>(p));
  }
  rec.prime_term = prime_term.value();
  rec.rhs = static_cast<double>(rec.n_terms) + rec.prime_term;
  rec.ratio = rec.lhs / rec.rhs;
  rec.fitted_constant = std::pow(rec.ratio, 1.0 / s);
  return rec;
}

EllipticMoment elliptic_totient_moment(const CurveOrderTable& table, const Polynomial& f,
                                       std::uint64_t x, unsigned s, const Factorizer& factorizer,
                                       bool include_bad_primes) {
  require_exponent(s);
  if (x < 3) throw InvalidArgument("elliptic moment needs x >= 3");
  EllipticMoment out;
  out.s = s;
  CompensatedSum lhs;
  for (const auto& e : table.entries_up_to(x)) {
    if (e.bad && !include_bad_primes) continue;
    const auto v = f.try_eval(static_cast<std::int64_t>(e.order));
    if (!v || *v > static_cast<__int128>(std::numeric_limits<std::uint64_t>::max())) {
      throw OverflowError("f(#E) leaves 64 bits");
    }
    if (*v < 1) throw InvalidArgument("polynomial " + f.to_string() + " does not map N to N");
    const auto value = static_cast<std::uint64_t>(*v);
    lhs.add(value == 1 ? 1.0 : totient_ratio_power(factorizer.factor(value), s));
    ++out.n_terms;
  }
  out.lhs = lhs.value();
  out.pi_x = factorizer.sieve().pi(x);
  const double sd = static_cast<double>(s);
  out.fitted_constant = (std::log(out.lhs / static_cast<double>(out.pi_x)) - sd * std::log(sd)) / sd;
  return out;
}

OrderTable::OrderTable(std::uint64_t a, std::uint64_t cap, unsigned workers) : a_(a), cap_(cap) {
  if (a < 2) throw InvalidArgument("order table needs a >= 2");
  if (cap < 3) throw InvalidArgument("order table needs cap >= 3");
  sieve_ = std::make_shared<const PrimeSieve>(cap);
  const Factorizer factorizer(sieve_, cap);
  const auto primes = sieve_->primes();
  orders_.assign(primes.size(), 0);
  const std::size_t n_blocks = (primes.size() + kPrimeBlock - 1) / kPrimeBlock;
  parallel_blocks(n_blocks, workers, [&](std::size_t blk) {
    const std::size_t end = std::min(primes.size(), (blk + 1) * kPrimeBlock);
    for (std::size_t i = blk * kPrimeBlock; i < end; ++i) {
      const std::uint64_t p = primes[i];
      if (a % p == 0) continue;
      orders_[i] = p == 2 ? 1 : multiplicative_order(a, p, factorizer.factor(p - 1));
    }
  });
}

std::uint64_t OrderTable::order(std::uint64_t p) const {
  const auto primes = sieve_->primes();
  const auto it = std::lower_bound(primes.begin(), primes.end(), p);
  if (it == primes.end() || *it != p) {
    if (p > cap_) throw SieveExhausted("order table too small", p);
    throw InvalidArgument(std::to_string(p) + " is not prime");
  }
  return orders_[static_cast<std::size_t>(it - primes.begin())];
}

double OrderTable::order_sum_partial(double epsilon, std::uint64_t x) const {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (x > cap_) throw SieveExhausted("order table too small", x);
  const auto primes = sieve_->primes_up_to(x);
  CompensatedSum sum;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (orders_[i] == 0) continue;
    const double p = primes[i];
    sum.add(std::log(p) / (p * std::pow(static_cast<double>(orders_[i]), epsilon)));
  }
  return sum.value();
}

double OrderTable::growth(std::uint64_t t) const {
  const auto primes = sieve_->primes();
  CompensatedSum sum;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (orders_[i] == 0 || orders_[i] > t) continue;
    const double p = primes[i];
    sum.add(std::log(p) / p);
  }
  return sum.value();
}

ProgressionReport s2s_progression_ratio(std::uint64_t x, std::uint64_t k, std::int64_t l,
                                        const SquareSumTable& squares) {
  if (k == 0) throw InvalidArgument("modulus k must be >= 1");
  if (x < 3) throw InvalidArgument("progression count needs x >= 3");
  if (x > squares.limit()) throw SieveExhausted("sum-of-two-squares table too small", x);
  ProgressionReport out;
  const auto ks = static_cast<std::int64_t>(k);
  const auto residue = static_cast<std::uint64_t>(((l % ks) + ks) % ks);
  for (std::uint64_t n = residue == 0 ? k : residue; n <= x; n += k) {
    if (squares.in_s_prime(n)) ++out.count;
  }
  const double loglog = std::log(std::log(static_cast<double>(k) + 2.0));
  const double xd = static_cast<double>(x);
  out.ratio = static_cast<double>(out.count) * static_cast<double>(k) * std::sqrt(std::log(xd)) /
              (xd * loglog);
  const auto k_factors = factor_trial(k);
  for (const auto& pp : k_factors.factors()) {
    if (pp.prime % 4 == 3) out.mertens_product *= 1.0 + 1.0 / static_cast<double>(pp.prime);
  }
  out.mertens_ratio = out.mertens_product / loglog;
  out.regime_violation = k > isqrt(x);
  return out;
}

InequalityReport analytic_inequalities(unsigned s, double c, std::span<const double> grid,
                                       std::uint64_t tail_terms) {
  require_exponent(s);
  if (!(c > 0.0)) throw InvalidArgument("c must be positive");
  if (tail_terms == 0) throw InvalidArgument("tail needs at least one term");
  InequalityReport out;
  out.s = s;
  out.tail_terms = tail_terms;
  CompensatedSum tail;
  for (std::uint64_t n = 2; n <= tail_terms; ++n) {
    const double nd = static_cast<double>(n);
    tail.add(ipow(std::log(nd), s) / (nd * nd));
  }
  out.tail_sum = tail.value();
  const double sd = static_cast<double>(s);
  out.tail_bound = 2.0 * std::exp(sd * std::log(sd));
  out.tail_holds = out.tail_sum <= out.tail_bound;

  out.c = c;
  out.minimizer = std::exp(c - 1.0);
  out.floor_value = -out.minimizer;
  auto h = [c](double y) { return y * std::log(y) - c * y; };
  out.min_slack = std::numeric_limits<double>::infinity();
  for (const double y : grid) {
    if (!(y > 0.0)) throw InvalidArgument("grid points must be positive");
    out.min_slack = std::min(out.min_slack, h(y) - out.floor_value);
  }
  out.grid_points = grid.size();
  out.equality_gap = std::abs(h(out.minimizer) - out.floor_value) / out.minimizer;
  out.floor_holds = grid.empty() || out.min_slack >= -kInequalitySlack * out.minimizer;
  return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n, double c) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw InvalidArgument("bad grid range");
  std::vector<double> grid;
  grid.reserve(n + 1);
  const double step = std::log(hi / lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) grid.push_back(lo * std::exp(step * static_cast<double>(i)));
  grid.push_back(std::exp(c - 1.0));
  std::sort(grid.begin(), grid.end());
  return grid;
}

}  // namespace romanoff
