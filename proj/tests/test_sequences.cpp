#include <doctest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "romanoff/errors.hpp"
#include "romanoff/sequences.hpp"

using namespace romanoff;

namespace {

Polynomial poly(std::vector<std::int64_t> desc) { return Polynomial::from_descending(std::move(desc)); }

std::vector<std::uint64_t> expand(const TermMultiset& t) {
  std::vector<std::uint64_t> out;
  for (const auto& term : t.terms()) out.insert(out.end(), term.multiplicity, term.value);
  return out;
}

SequenceContext ctx_for(const SequenceSpec& s, std::uint64_t x) {
  return SequenceContext::covering(std::span(&s, 1), x);
}

TermMultiset run(const SequenceSpec& s, std::uint64_t x) { return enumerate(s, x, ctx_for(s, x)); }

std::vector<std::int64_t> asc(const Polynomial& f) { return {f.ascending().begin(), f.ascending().end()}; }

// Brute-force index multiset of a spec up to x.
std::vector<std::uint64_t> oracle_terms(const SequenceSpec& s, std::uint64_t x) {
  using namespace oracle;
  const std::uint64_t arg_cap = 200000;
  switch (s.kind()) {
    case SequenceKind::Primes: return primes(x);
    case SequenceKind::SumsTwoSquares: return members(sums_of_two_squares(x));
    case SequenceKind::PrimitiveOddSumsTwoSquares: return members(primitive_odd_sums(x));
    case SequenceKind::PowerPoly:
    case SequenceKind::PowerPolyOfPrimes:
    case SequenceKind::PowerPolyOfSPrime: {
      std::uint64_t e_max = 0;
      for (unsigned __int128 v = s.base(); v <= x; v *= s.base()) ++e_max;
      std::vector<std::uint64_t> args = s.kind() == SequenceKind::PowerPoly ? naturals(e_max + 5)
                                        : s.kind() == SequenceKind::PowerPolyOfPrimes
                                            ? primes(e_max + 5)
                                            : members(primitive_odd_sums(e_max + 5));
      return powers(s.base(), poly_image(asc(s.poly()), args, e_max), x);
    }
    case SequenceKind::PolyOfPrimes: return poly_image(asc(s.poly()), primes(std::min(x, arg_cap)), x);
    case SequenceKind::PolyOfSPrime:
      return poly_image(asc(s.poly()), members(primitive_odd_sums(std::min(x, arg_cap))), x);
    case SequenceKind::PolyOfCurveOrders: {
      std::vector<std::uint64_t> out;
      const auto& e = s.curve();
      const auto disc = 4 * e.a * e.a * e.a + 27 * e.b * e.b;
      for (std::uint64_t p = 3; p <= x + 2 * static_cast<std::uint64_t>(std::sqrt(double(x))) + 3; ++p) {
        if (!is_prime(p)) continue;
        if (!s.include_bad_primes() && disc % static_cast<std::int64_t>(p) == 0) continue;
        const auto v = eval(asc(s.poly()), static_cast<std::int64_t>(curve_order_euler(e.a, e.b, p)));
        if (v <= static_cast<__int128>(x)) out.push_back(static_cast<std::uint64_t>(v));
      }
      std::sort(out.begin(), out.end());
      return out;
    }
  }
  return {};
}

std::vector<SequenceSpec> all_specs() {
  const auto sq = poly({1, 0, 1});
  return {SequenceSpec::primes(),
          SequenceSpec::sums_two_squares(),
          SequenceSpec::primitive_odd_sums_two_squares(),
          SequenceSpec::power_poly(2, Polynomial::identity()),
          SequenceSpec::power_poly(2, sq),
          SequenceSpec::power_poly(3, poly({2, 1})),
          SequenceSpec::poly_of_primes(sq),
          SequenceSpec::poly_of_primes(poly({1, -3, 5})),
          SequenceSpec::poly_of_s_prime(sq),
          SequenceSpec::poly_of_s_prime(poly({2, 0})),
          SequenceSpec::power_poly_of_primes(2, Polynomial::identity()),
          SequenceSpec::power_poly_of_s_prime(2, Polynomial::identity()),
          SequenceSpec::poly_of_curve_orders(find_curve("a1b1"), Polynomial::identity()),
          SequenceSpec::poly_of_curve_orders(find_curve("a2b3"), Polynomial::identity(), true),
          SequenceSpec::poly_of_curve_orders(find_curve("am1b1"), poly({1, 0, 1}))};
}

}  // namespace

TEST_CASE("enumeration examples") {
  CHECK(expand(run(SequenceSpec::primes(), 10)) == std::vector<std::uint64_t>{2, 3, 5, 7});
  const auto pow2 = run(SequenceSpec::power_poly(2, Polynomial::identity()), 10);
  CHECK(expand(pow2) == std::vector<std::uint64_t>{2, 4, 8});
  CHECK(pow2.count() == 3);
  const auto sq = run(SequenceSpec::poly_of_primes(poly({1, 0, 0})), 50);
  CHECK(expand(sq) == std::vector<std::uint64_t>{4, 9, 25, 49});
  CHECK(expand(run(SequenceSpec::primitive_odd_sums_two_squares(), 10)) == std::vector<std::uint64_t>{1, 5});
  CHECK(expand(run(SequenceSpec::sums_two_squares(), 10)) == std::vector<std::uint64_t>{1, 2, 4, 5, 8, 9, 10});
}

TEST_CASE("every spec matches its brute-force oracle at x = 10^4") {
  for (const auto& s : all_specs()) {
    CAPTURE(s.serialize());
    const auto terms = run(s, 10000);
    const auto expected = oracle_terms(s, 10000);
    REQUIRE(expand(terms) == expected);
    CHECK(terms.count() == expected.size());
  }
}

TEST_CASE("membership of S and S' agrees with two-squares search") {
  const SquareSumTable table(10000);
  const auto s = oracle::sums_of_two_squares(10000);
  const auto sp = oracle::primitive_odd_sums(10000);
  for (std::uint64_t n = 1; n <= 10000; ++n) {
    REQUIRE(table.in_s(n) == s[n]);
    REQUIRE(table.in_s_prime(n) == sp[n]);
  }
  CHECK(table.in_s_prime(1));
  CHECK_FALSE(table.in_s_prime(9));
  CHECK(table.in_s_prime(25));
  CHECK_THROWS_AS(table.in_s(10001), SieveExhausted);
}

TEST_CASE("prefix property") {
  for (const auto& s : all_specs()) {
    CAPTURE(s.serialize());
    const auto big = run(s, 20000);
    for (std::uint64_t y : {1, 17, 1000, 12345}) {
      REQUIRE(big.restrict_to(y).terms().size() == run(s, y).terms().size());
      REQUIRE(expand(big.restrict_to(y)) == expand(run(s, y)));
      REQUIRE(big.count_up_to(y) == run(s, y).count());
    }
  }
}

TEST_CASE("power kinds count exponents exactly") {
  const auto f = poly({1, 0, 1});
  const auto s = SequenceSpec::power_poly(2, f);
  for (std::uint64_t x : {1ull, 2ull, 3ull, 4ull, 1000ull, 1ull << 40, (1ull << 50) - 1, ~0ull}) {
    const auto e = floor_log(2, x);
    std::uint64_t expected = 0;
    for (std::int64_t m = 1; *f.try_eval(m) <= static_cast<__int128>(e); ++m) ++expected;
    CHECK(run(s, x).count() == expected);
  }
  CHECK(floor_log(2, 1) == 0);
  CHECK(floor_log(2, 1024) == 10);
  CHECK(floor_log(2, 1023) == 9);
  CHECK(floor_log(3, ~0ull) == 40);
  CHECK(floor_log(10, 10000000000000000000ull) == 19);
  // Exponent domain beyond 64-bit values.
  const SequenceContext ctx;
  const auto ex = enumerate_exponents(SequenceSpec::power_poly(3, poly({2, 1})), 41, ctx);
  CHECK(ex.count() == 20);
  CHECK(ex.terms().back().value == 41);
}

TEST_CASE("content and degree requirements") {
  CHECK_THROWS_AS(SequenceSpec::power_poly(2, poly({2, 2})), InvalidArgument);
  CHECK_THROWS_AS(SequenceSpec::power_poly(1, Polynomial::identity()), InvalidArgument);
  CHECK_NOTHROW(SequenceSpec::poly_of_primes(poly({2, 2})));
  // f(1) = -1 does not map N to N.
  const auto bad = SequenceSpec::poly_of_primes(poly({1, 0, -5}));
  CHECK_THROWS_AS(run(bad, 100), InvalidArgument);
}

TEST_CASE("shifted counts") {
  const auto p = SequenceSpec::primes();
  const auto ctx = ctx_for(p, 100);
  CHECK(count_shifted(p, 10, 2, ctx) == 2);
  CHECK(count_shifted(p, 10, 1, ctx) == 1);
  CHECK_THROWS_AS(count_shifted(p, 10, 0, ctx), InvalidArgument);
  const auto pow2 = SequenceSpec::power_poly(2, Polynomial::identity());
  // 2^k + 3 is odd and never a power of two.
  CHECK(count_shifted(pow2, 1000, 3, ctx) == 0);
  CHECK(count_shifted(pow2, 1000, 2, ctx) == 1);  // 2 + 2 = 4
  std::uint64_t twins = 0;
  const auto ps = oracle::primes(10002);
  for (const auto q : ps) twins += q <= 10000 && oracle::is_prime(q + 2);
  CHECK(count_shifted(p, 10000, 2, ctx_for(p, 10002)) == twins);
}

TEST_CASE("rho") {
  const auto p = SequenceSpec::primes();
  CHECK(rho(p, 100, ctx_for(p, 100)) == 1);
  const auto sq = SequenceSpec::poly_of_primes(poly({1, 0, 0}));
  CHECK(rho(sq, 100, ctx_for(sq, 100)) == 1);
  // (n - 3)^2 + 1 takes each value twice around n = 3.
  const auto sym = SequenceSpec::power_poly(2, poly({1, -6, 10}));
  const auto ctx = ctx_for(sym, 1ull << 40);
  CHECK(rho(sym, 1ull << 40, ctx) == 2);
  const auto curve = SequenceSpec::poly_of_curve_orders(find_curve("a1b1"), Polynomial::identity());
  const auto cctx = ctx_for(curve, 20000);
  const auto r = rho(curve, 20000, cctx);
  CHECK(r >= 2);
  CHECK(r * r <= 81 * 20000);
}

TEST_CASE("lambda") {
  const auto p = SequenceSpec::primes();
  const auto ctx = ctx_for(p, 100);
  CHECK(lambda(p, 20, 3, 5, ctx) == 2);
  CHECK_THROWS_AS(lambda(p, 20, 4, 5, ctx), InvalidArgument);
  CHECK_THROWS_AS(lambda(p, 20, 3, 6, ctx), InvalidArgument);
  const auto pow2 = SequenceSpec::power_poly(2, Polynomial::identity());
  CHECK(lambda(pow2, 16, 2, 7, ctx) == 2);
  CHECK(lambda(pow2, 16, 2, 2, ctx) == 4);  // p | a: everything is 0 mod 2

  // Exponent reduction agrees with direct residues, and classes partition C(x).
  for (const auto& s : all_specs()) {
    CAPTURE(s.serialize());
    const auto terms = run(s, 5000);
    for (const std::uint64_t q : {2, 3, 5, 7, 11, 13}) {
      std::map<std::uint64_t, std::uint64_t> direct;
      for (const auto& t : terms.terms()) direct[t.value % q] += t.multiplicity;
      std::map<std::uint64_t, std::uint64_t> class_lambda;
      for (const auto& t : terms.terms()) {
        const auto l = lambda(s, terms, t.value, q);
        REQUIRE(l == direct[t.value % q]);
        REQUIRE(l >= t.multiplicity);
        REQUIRE(l <= terms.count());
        class_lambda[t.value % q] = l;
      }
      std::uint64_t total = 0;
      for (const auto& [r, l] : class_lambda) total += l;
      REQUIRE(total == terms.count());
    }
  }
}

TEST_CASE("lambda weighted sum") {
  const auto p = SequenceSpec::primes();
  const auto ctx = ctx_for(p, 100);
  // (log 100)^(1/2) = 2.146, so only p = 2 enters.
  const auto s = lambda_weighted_sum(p, 100, 0.5, ctx);
  CHECK(s.primes_used == 1);
  CHECK_FALSE(s.degenerate);
  const auto ps = oracle::primes(100);
  double expected = 0.0;
  for (const auto pj : ps) {
    for (const std::uint64_t q : oracle::primes(static_cast<std::uint64_t>(std::pow(std::log(100.0), 0.5)))) {
      std::uint64_t l = 0;
      for (const auto pk : ps) l += pk % q == pj % q;
      expected += static_cast<double>(l) * std::log(double(q)) / double(q);
    }
  }
  CHECK(s.sum == doctest::Approx(expected).epsilon(1e-12));
  CHECK(s.ratio == doctest::Approx(expected / (25.0 * 25.0)).epsilon(1e-12));
  // (log 100)^0.9 = 3.95: p = 2 and 3.
  const auto wide = lambda_weighted_sum(p, 100, 0.9, ctx);
  CHECK(wide.primes_used == 2);

  const auto degenerate = lambda_weighted_sum(p, 100, 0.1, ctx);
  CHECK(degenerate.degenerate);
  CHECK(degenerate.sum == 0.0);
  CHECK_THROWS_AS(lambda_weighted_sum(p, 100, 1.5, ctx), InvalidArgument);

  // Power kinds: exponent-domain sum equals the value-domain sum.
  const auto b = SequenceSpec::power_poly(2, poly({1, 0, 1}));
  const auto bctx = ctx_for(b, 1ull << 62);
  const auto by_value = lambda_weighted_sum(b, 1ull << 62, 0.5, bctx);
  const auto ex = enumerate_exponents(b, 62, bctx);
  const auto by_exp = lambda_weighted_sum(b, ex, 62 * std::log(2.0), 0.5, bctx.sieve(2));
  CHECK(by_value.sum == by_exp.sum);
  CHECK(by_value.terms == by_exp.terms);
}

TEST_CASE("default lambda exponents") {
  CHECK(*SequenceSpec::power_poly(2, poly({1, 0, 1})).default_lambda_alpha() == 0.25);
  CHECK(*SequenceSpec::poly_of_primes(poly({1, 0, 1})).default_lambda_alpha() == 0.5);
  CHECK(*SequenceSpec::poly_of_s_prime(poly({1, 0, 1})).default_lambda_alpha() == 0.5);
  CHECK(*SequenceSpec::power_poly_of_primes(2, poly({1, 0, 1})).default_lambda_alpha() == doctest::Approx(1.0 / 6));
  CHECK(*SequenceSpec::poly_of_curve_orders(find_curve("a1b1"), Polynomial::identity()).default_lambda_alpha() ==
        doctest::Approx(1.0 / 15));
  CHECK_FALSE(SequenceSpec::primes().default_lambda_alpha().has_value());
}

TEST_CASE("eta normalizers") {
  CHECK(SequenceSpec::primes().eta(100.0) == doctest::Approx(std::log(100.0)));
  CHECK(SequenceSpec::primitive_odd_sums_two_squares().eta(100.0) == doctest::Approx(std::sqrt(std::log(100.0))));
  CHECK_THROWS_AS(SequenceSpec::power_poly(2, Polynomial::identity()).eta(100.0), InvalidArgument);
}

TEST_CASE("spec records round trip") {
  for (const auto& s : all_specs()) {
    CAPTURE(s.serialize());
    CHECK(parse_sequence_spec(s.serialize()) == s);
  }
  SpecDefaults d;
  d.base = 3;
  d.poly = poly({2, 1});
  CHECK(parse_sequence_spec("kind=PowerPoly", d) == SequenceSpec::power_poly(3, poly({2, 1})));
  CHECK(parse_sequence_spec("Primes") == SequenceSpec::primes());
  CHECK_THROWS_AS(parse_sequence_spec("kind=Nope"), InvalidArgument);
  CHECK_THROWS_AS(parse_sequence_spec("kind=PowerPoly;a=2"), InvalidArgument);
  CHECK_THROWS_AS(parse_sequence_spec("kind=PowerPoly;a=2;poly=-1,0"), InvalidArgument);
  CHECK_THROWS_AS(parse_sequence_spec("kind=Primes;colour=red"), InvalidArgument);
}

TEST_CASE("table requirements and context errors") {
  const auto s = SequenceSpec::poly_of_primes(poly({1, 0, 1}));
  const auto req = required_tables(s, 10000);
  CHECK(req.prime_limit >= 100);
  const SequenceContext empty;
  CHECK_THROWS_AS(enumerate(SequenceSpec::primes(), 10, empty), SieveExhausted);
  const auto small = ctx_for(SequenceSpec::primes(), 2000);
  try {
    enumerate(SequenceSpec::primes(), 5000, small);
    FAIL("expected exhaustion");
  } catch (const SieveExhausted& e) {
    CHECK(e.required_limit() == 5000);
  }
}

TEST_CASE("term multiset invariants") {
  CHECK_THROWS_AS(TermMultiset(10, {{3, 1}, {2, 1}}), InvalidArgument);
  CHECK_THROWS_AS(TermMultiset(10, {{3, 0}}), InvalidArgument);
  const TermMultiset t(10, {{2, 1}, {5, 3}});
  CHECK(t.count() == 4);
  CHECK(t.multiplicity(5) == 3);
  CHECK(t.multiplicity(4) == 0);
  CHECK(t.max_multiplicity() == 3);
  CHECK(t.count_up_to(4) == 1);
}
