#pragma once

// Totient moment sums, multiplicative-order sums, sums of two squares in
// progressions, and two elementary analytic inequalities.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "romanoff/arith.hpp"
#include "romanoff/elliptic.hpp"
#include "romanoff/sequences.hpp"

namespace romanoff {

struct MomentSumRecord {
  unsigned s = 1;
  double lhs = 0.0;            // sum (a_n / phi(a_n))^s
  std::uint64_t n_terms = 0;   // N
  double prime_term = 0.0;     // sum_{p <= (log M)^alpha} omega(p) (log p)^s / p
  double prime_cutoff = 0.0;
  double rhs = 0.0;            // N + prime_term
  double ratio = 0.0;          // lhs / rhs
  double fitted_constant = 0.0;
};

// (n / phi(n))^s from a factorization, as prod (p / (p - 1))^s.
double totient_ratio_power(const Factorization& factorization, unsigned s);

// Terms are summed in ascending value order, so the result does not depend
// on the order of `values`. The factorizer must cover max(values).
MomentSumRecord euler_lemma_ratio(std::span<const std::uint64_t> values, std::uint64_t m,
                                  double alpha, unsigned s, const Factorizer& factorizer);

// Same lhs via phi(n) from the totient itself: sum (n / phi(n))^s.
double euler_lemma_lhs_direct(std::span<const std::uint64_t> values, unsigned s,
                              const Factorizer& factorizer);

struct EllipticMoment {
  unsigned s = 1;
  double lhs = 0.0;             // sum_{3 <= p <= x} (f(#E)/phi(f(#E)))^s
  std::uint64_t n_terms = 0;
  std::uint64_t pi_x = 0;
  double fitted_constant = 0.0;  // (log(lhs / pi(x)) - s log s) / s
};

// The factorizer must cover f(x + 2 sqrt(x) + 1).
EllipticMoment elliptic_totient_moment(const CurveOrderTable& table, const Polynomial& f,
                                       std::uint64_t x, unsigned s, const Factorizer& factorizer,
                                       bool include_bad_primes = true);

// Multiplicative orders h_a(p) for all primes p <= cap.
class OrderTable {
 public:
  OrderTable(std::uint64_t a, std::uint64_t cap, unsigned workers = 1);

  std::uint64_t base() const { return a_; }
  std::uint64_t cap() const { return cap_; }
  // 0 when p | a.
  std::uint64_t order(std::uint64_t p) const;

  // sum_{p <= x, p coprime to a} log p / (p h_a(p)^epsilon)
  double order_sum_partial(double epsilon, std::uint64_t x) const;
  // G(t) = sum over tabulated p with h_a(p) <= t of log p / p.
  double growth(std::uint64_t t) const;

 private:
  std::uint64_t a_;
  std::uint64_t cap_;
  std::shared_ptr<const PrimeSieve> sieve_;
  std::vector<std::uint64_t> orders_;  // aligned with sieve primes
};

struct ProgressionReport {
  std::uint64_t count = 0;      // #{n <= x : n = l mod k, n in S'}
  double ratio = 0.0;           // count k sqrt(log x) / (x loglog(k + 2))
  double mertens_product = 1.0; // prod_{p | k, p = 3 mod 4} (1 + 1/p)
  double mertens_ratio = 0.0;   // mertens_product / loglog(k + 2)
  bool regime_violation = false;  // k > sqrt(x)
};

ProgressionReport s2s_progression_ratio(std::uint64_t x, std::uint64_t k, std::int64_t l,
                                        const SquareSumTable& squares);

struct InequalityReport {
  unsigned s = 1;
  std::uint64_t tail_terms = 0;
  double tail_sum = 0.0;   // sum_{n <= N} (log n)^s / n^2
  double tail_bound = 0.0; // 2 exp(s log s)
  bool tail_holds = false;

  double c = 0.0;
  double minimizer = 0.0;       // exp(c - 1)
  double floor_value = 0.0;     // -exp(c - 1)
  double min_slack = 0.0;       // min over grid of h(y) + exp(c - 1)
  double equality_gap = 0.0;    // |h(minimizer) + exp(c - 1)| / exp(c - 1)
  std::uint64_t grid_points = 0;
  bool floor_holds = false;
};

inline constexpr std::uint64_t kTailTerms = 1000000;
inline constexpr double kInequalitySlack = 1e-12;

InequalityReport analytic_inequalities(unsigned s, double c, std::span<const double> grid,
                                       std::uint64_t tail_terms = kTailTerms);

// n points log-spaced over [lo, hi], plus exp(c - 1), sorted.
std::vector<double> log_grid(double lo, double hi, std::size_t n, double c);

}  // namespace romanoff
