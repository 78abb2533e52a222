#pragma once

// Declarative descriptions of the integer sequences studied by the
// workbench, and the counting queries over them: C(x), C(x, r), ord/rho,
// and the congruence profile lambda(x; b_j, p).
//
// Sequences are index multisets. C(x) and lambda count indices; membership
// tests count values. Power sequences a^{f(m)} are handled in the exponent
// domain: the cutoff a^{f(m)} <= x is decided by comparing f(m) with
// floor(log_a x), and congruences use exponents reduced mod h_a(p).

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "romanoff/arith.hpp"
#include "romanoff/elliptic.hpp"

namespace romanoff {

enum class SequenceKind {
  Primes,
  SumsTwoSquares,              // S
  PrimitiveOddSumsTwoSquares,  // S' = <P_1>
  PowerPoly,                   // a^{f(m)}, m >= 1
  PolyOfPrimes,                // f(p)
  PolyOfSPrime,                // f(s), s in S'
  PowerPolyOfPrimes,           // a^{f(p)}
  PowerPolyOfSPrime,           // a^{f(s)}, s in S'
  PolyOfCurveOrders,           // f(#E(F_p)), p >= 3
};

std::string_view kind_name(SequenceKind kind);
SequenceKind parse_kind(std::string_view name);

// Density normalizer eta(x) carried by sequences usable on the A side.
enum class Normalizer { None, Log, SqrtLog };

class SequenceSpec {
 public:
  static SequenceSpec primes();
  static SequenceSpec sums_two_squares();
  static SequenceSpec primitive_odd_sums_two_squares();
  static SequenceSpec power_poly(std::uint64_t base, Polynomial f);
  static SequenceSpec poly_of_primes(Polynomial f);
  static SequenceSpec poly_of_s_prime(Polynomial f);
  static SequenceSpec power_poly_of_primes(std::uint64_t base, Polynomial f);
  static SequenceSpec power_poly_of_s_prime(std::uint64_t base, Polynomial f);
  static SequenceSpec poly_of_curve_orders(CurveParams curve, Polynomial f,
                                           bool include_bad_primes = false);

  SequenceKind kind() const { return kind_; }
  std::uint64_t base() const { return base_; }
  const Polynomial& poly() const;
  const CurveParams& curve() const;
  bool has_poly() const { return poly_.has_value(); }
  bool has_curve() const { return curve_.has_value(); }
  bool include_bad_primes() const { return include_bad_primes_; }

  bool is_power_kind() const;
  // Polynomial image of some argument set (every kind carrying f).
  bool is_polynomial_kind() const { return has_poly(); }
  int degree() const { return poly().degree(); }

  Normalizer normalizer() const { return normalizer_; }
  bool has_eta() const { return normalizer_ != Normalizer::None; }
  // eta(x); throws InvalidArgument for B-only kinds.
  double eta(double x) const;

  // The prime-range exponent alpha used for this family's lambda-sum bound
  // (1/(2d), 1/2, 1/(3d), 1/15). nullopt for the three base sets.
  std::optional<double> default_lambda_alpha() const;

  // "kind=PowerPoly;a=2;poly=1,0,1" record; parse() inverts it.
  std::string serialize() const;
  std::string describe() const;

  bool operator==(const SequenceSpec& other) const;

 private:
  SequenceSpec(SequenceKind kind, Normalizer normalizer) : kind_(kind), normalizer_(normalizer) {}

  SequenceKind kind_;
  Normalizer normalizer_;
  std::uint64_t base_ = 0;
  std::optional<Polynomial> poly_;
  std::optional<CurveParams> curve_;
  bool include_bad_primes_ = false;
};

// Values for keys a record leaves out (taken from CLI --base/--poly/--curve).
struct SpecDefaults {
  std::optional<std::uint64_t> base;
  std::optional<Polynomial> poly;
  std::optional<CurveParams> curve;
};

SequenceSpec parse_sequence_spec(std::string_view record, const SpecDefaults& defaults = {});

struct Term {
  std::uint64_t value;
  std::uint32_t multiplicity;

  bool operator==(const Term&) const = default;
};

// Terms <= cutoff with multiplicities; values strictly increasing. For power
// kinds `exponents()[i]` is the exponent e with terms()[i].value = a^e (the
// value itself is only materialized when it fits in 64 bits).
class TermMultiset {
 public:
  TermMultiset() = default;
  TermMultiset(std::uint64_t cutoff, std::vector<Term> terms,
               std::vector<std::uint64_t> exponents = {});

  std::uint64_t cutoff() const { return cutoff_; }
  std::span<const Term> terms() const { return terms_; }
  std::span<const std::uint64_t> exponents() const { return exponents_; }
  bool has_exponents() const { return !exponents_.empty() || terms_.empty(); }

  std::uint64_t count() const { return total_; }  // C(cutoff)
  std::uint64_t count_up_to(std::uint64_t y) const;
  std::uint32_t multiplicity(std::uint64_t value) const;  // ord(v)
  bool contains(std::uint64_t value) const { return multiplicity(value) > 0; }
  std::uint32_t max_multiplicity() const;
  TermMultiset restrict_to(std::uint64_t y) const;

  bool operator==(const TermMultiset&) const = default;

 private:
  std::uint64_t cutoff_ = 0;
  std::vector<Term> terms_;
  std::vector<std::uint64_t> exponents_;
  std::uint64_t total_ = 0;
};

// Membership bitmaps for S and S' over [0, limit].
class SquareSumTable {
 public:
  explicit SquareSumTable(std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  bool in_s(std::uint64_t n) const;
  bool in_s_prime(std::uint64_t n) const;

 private:
  std::uint64_t limit_;
  std::vector<bool> s_;
  std::vector<bool> s_prime_;
};

// Tables a set of queries needs, by limit.
struct TableRequirements {
  std::uint64_t prime_limit = 2;
  std::uint64_t square_limit = 0;
  std::vector<std::pair<CurveParams, std::uint64_t>> curve_limits;

  void merge(const TableRequirements& other);
};

TableRequirements required_tables(const SequenceSpec& spec, std::uint64_t x);

// Shared read-only tables backing enumeration.
class SequenceContext {
 public:
  SequenceContext() = default;

  static SequenceContext covering(std::span<const SequenceSpec> specs, std::uint64_t x,
                                  unsigned workers = 1,
                                  const std::optional<std::filesystem::path>& cache_dir = {});
  static SequenceContext from_requirements(const TableRequirements& req, unsigned workers = 1,
                                           const std::optional<std::filesystem::path>& cache_dir = {});

  void set_sieve(std::shared_ptr<const PrimeSieve> sieve) { sieve_ = std::move(sieve); }
  void set_squares(std::shared_ptr<const SquareSumTable> t) { squares_ = std::move(t); }
  void add_curve_table(std::shared_ptr<const CurveOrderTable> t);

  // Each accessor throws SieveExhausted when its table is absent or smaller
  // than `need`.
  const PrimeSieve& sieve(std::uint64_t need) const;
  std::shared_ptr<const PrimeSieve> sieve_ptr() const { return sieve_; }
  const SquareSumTable& squares(std::uint64_t need) const;
  const CurveOrderTable& curve_table(const CurveParams& curve, std::uint64_t need) const;

 private:
  std::shared_ptr<const PrimeSieve> sieve_;
  std::shared_ptr<const SquareSumTable> squares_;
  std::vector<std::shared_ptr<const CurveOrderTable>> curves_;
};

// Largest e with base^e <= x, by repeated multiplication.
std::uint64_t floor_log(std::uint64_t base, std::uint64_t x);

TermMultiset enumerate(const SequenceSpec& spec, std::uint64_t x, const SequenceContext& ctx);

// Power kinds only: the multiset of exponents f(m) <= max_exponent, i.e. the
// terms of the sequence up to a^max_exponent (which may exceed 64 bits).
TermMultiset enumerate_exponents(const SequenceSpec& spec, std::uint64_t max_exponent,
                                 const SequenceContext& ctx);

// C(x, r): indices with c_n <= x and c_n + r a member.
std::uint64_t count_shifted(const SequenceSpec& spec, std::uint64_t x, std::uint64_t r,
                            const SequenceContext& ctx);

// rho(x) = max ord(v) over v <= x. For polynomial images of distinct
// arguments, asserts rho <= d.
std::uint32_t rho(const SequenceSpec& spec, std::uint64_t x, const SequenceContext& ctx);
std::uint32_t rho_exponent(const SequenceSpec& spec, std::uint64_t max_exponent,
                           const SequenceContext& ctx);

std::uint64_t lambda(const SequenceSpec& spec, const TermMultiset& terms, std::uint64_t j_term,
                     std::uint64_t p);
std::uint64_t lambda(const SequenceSpec& spec, std::uint64_t x, std::uint64_t j_term,
                     std::uint64_t p, const SequenceContext& ctx);

struct LambdaSum {
  double sum = 0.0;           // sum_j sum_{p <= (log x)^alpha} lambda log p / p
  double ratio = 0.0;         // sum / C(x)^2
  double prime_cutoff = 0.0;  // (log x)^alpha
  std::uint64_t primes_used = 0;
  std::uint64_t terms = 0;    // C(x)
  bool degenerate = false;    // (log x)^alpha < 2
};

LambdaSum lambda_weighted_sum(const SequenceSpec& spec, const TermMultiset& terms, double log_x,
                              double alpha, const PrimeSieve& sieve);
LambdaSum lambda_weighted_sum(const SequenceSpec& spec, std::uint64_t x, double alpha,
                              const SequenceContext& ctx);

}  // namespace romanoff
