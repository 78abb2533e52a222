#pragma once

// Exact integer primitives: sieve, factorization, totient, quadratic
// character, multiplicative order, polynomial congruences and prime counts
// in progressions. All counters are 64-bit; modular products go through
// 128-bit intermediates.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace romanoff {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
std::uint64_t gcd(std::uint64_t a, std::uint64_t b);
std::uint64_t isqrt(std::uint64_t n);

// Trial-division primality, for validating single moduli.
bool is_prime_trial(std::uint64_t n);

// Bit-packed odd-only sieve of Eratosthenes over [0, limit].
class PrimeSieve {
 public:
  explicit PrimeSieve(std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  bool is_prime(std::uint64_t n) const;
  std::span<const std::uint32_t> primes() const { return primes_; }
  // Primes p <= x. Throws SieveExhausted when x > limit().
  std::span<const std::uint32_t> primes_up_to(std::uint64_t x) const;
  std::uint64_t pi(std::uint64_t x) const { return primes_up_to(x).size(); }

 private:
  std::uint64_t limit_;
  std::vector<std::uint64_t> composite_odd_;  // bit i set <=> 2i+1 composite
  std::vector<std::uint32_t> primes_;
};

struct PrimePower {
  std::uint64_t prime;
  std::uint32_t exponent;

  bool operator==(const PrimePower&) const = default;
};

class Factorization {
 public:
  Factorization() = default;
  // Factors must be sorted by strictly increasing prime with exponent >= 1.
  explicit Factorization(std::vector<PrimePower> factors);

  std::span<const PrimePower> factors() const { return factors_; }
  // Number of distinct prime divisors, nu(n).
  std::size_t distinct_primes() const { return factors_.size(); }
  std::uint64_t value() const;

  bool operator==(const Factorization&) const = default;

 private:
  std::vector<PrimePower> factors_;
};

Factorization factor_trial(std::uint64_t n);

// Factorization backed by a smallest-prime-factor table up to spf_limit and
// trial division by sieve primes above it.
class Factorizer {
 public:
  Factorizer(std::shared_ptr<const PrimeSieve> sieve, std::uint64_t spf_limit);

  Factorization factor(std::uint64_t n) const;
  const PrimeSieve& sieve() const { return *sieve_; }
  std::uint64_t spf_limit() const { return spf_.empty() ? 0 : spf_.size() - 1; }

 private:
  std::shared_ptr<const PrimeSieve> sieve_;
  std::vector<std::uint32_t> spf_;
};

std::uint64_t euler_phi(const Factorization& factorization);
// Validates that `factorization` factors n.
std::uint64_t euler_phi(std::uint64_t n, const Factorization& factorization);
std::uint64_t euler_phi(std::uint64_t n);

// (a/p) by Euler's criterion. Validates p once at construction.
class QuadraticCharacter {
 public:
  explicit QuadraticCharacter(std::uint64_t p);
  int operator()(std::int64_t a) const;
  std::uint64_t modulus() const { return p_; }

 private:
  std::uint64_t p_;
};

int legendre_symbol(std::int64_t a, std::uint64_t p);

// h_a(p): least h >= 1 with a^h = 1 (mod p). p_minus_one must factor p - 1.
std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t p,
                                   const Factorization& p_minus_one);
std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t p);

// Integer polynomial gamma_d n^d + ... + gamma_0 with gamma_d > 0, d >= 1.
class Polynomial {
 public:
  // Coefficients from the constant term upward.
  explicit Polynomial(std::vector<std::int64_t> ascending);
  // Coefficients from the leading term downward, as the polynomial is written.
  static Polynomial from_descending(std::vector<std::int64_t> descending);
  static Polynomial identity() { return Polynomial({0, 1}); }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::int64_t leading() const { return coeffs_.back(); }
  std::int64_t coefficient(int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }
  std::span<const std::int64_t> ascending() const { return coeffs_; }
  std::vector<std::int64_t> descending() const;

  std::uint64_t content() const;
  bool is_primitive() const { return content() == 1; }

  // Exact value; nullopt when it leaves the 128-bit range.
  std::optional<__int128> try_eval(std::int64_t n) const;
  std::uint64_t eval_mod(std::uint64_t n, std::uint64_t m) const;

  // N such that f(n) > y for every integer n > N (and N >= 0).
  std::uint64_t preimage_bound(std::uint64_t y) const;

  // "n^2+1" style rendering; also the serialization used by configs.
  std::string to_string() const;
  std::string to_coefficient_list() const;  // "1,0,1" (descending)
  static Polynomial parse_coefficient_list(const std::string& text);

  bool operator==(const Polynomial&) const = default;

 private:
  std::vector<std::int64_t> coeffs_;
};

std::vector<std::uint64_t> poly_congruence_roots(const Polynomial& f, std::uint64_t m);

struct KonyaginReport {
  std::uint64_t root_count;  // rho(f, m)
  double bound_shape;        // d * m^(1 - 1/d)
  double ratio;              // root_count / bound_shape
};

// Requires gcd(content(f), m) = 1.
KonyaginReport konyagin_ratio(const Polynomial& f, std::uint64_t m);

struct ProgressionCount {
  std::uint64_t count;   // pi(x; k, l)
  double bt_ratio;       // count * phi(k) * log x / x, 0 when x < 2
};

ProgressionCount prime_count_progression(std::uint64_t x, std::uint64_t k, std::int64_t l,
                                         const PrimeSieve& sieve);

}  // namespace romanoff
