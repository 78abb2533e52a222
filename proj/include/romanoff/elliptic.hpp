#pragma once

// Group orders #E(F_p) of y^2 = x^3 + Ax + B by the quadratic character
// sum, tabulated over all primes 3 <= p <= limit, plus the order statistics
// built on those tables (multiplicity of an order value, order counts in
// residue classes).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace romanoff {

struct CurveParams {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::string id;

  // Throws InvalidArgument when 4A^3 + 27B^2 = 0.
  static CurveParams make(std::int64_t a, std::int64_t b, std::string id = {});

  __int128 discriminant() const;  // 4A^3 + 27B^2
  // p | 2*discriminant.
  bool is_bad_prime(std::uint64_t p) const;
  bool same_curve(const CurveParams& other) const { return a == other.a && b == other.b; }
};

// Curves shipped with the workbench. All have non-integral j-invariant,
// which rules out complex multiplication.
std::span<const CurveParams> curated_curves();
// Looks up a curated id, or parses "A,B".
CurveParams find_curve(std::string_view id_or_coefficients);

// 1 + #{(x, y) in F_p^2 : y^2 = x^3 + Ax + B}. p must be an odd prime.
std::uint64_t curve_order(const CurveParams& curve, std::uint64_t p);

struct OrderEntry {
  std::uint32_t prime;
  std::uint32_t order;
  bool bad;
};

class CurveOrderTable {
 public:
  CurveOrderTable(CurveParams curve, std::uint64_t limit, std::vector<OrderEntry> entries);

  const CurveParams& curve() const { return curve_; }
  std::uint64_t limit() const { return limit_; }
  std::span<const OrderEntry> entries() const { return entries_; }
  // Entries with prime <= x. Throws SieveExhausted when x > limit().
  std::span<const OrderEntry> entries_up_to(std::uint64_t x) const;
  // #E(F_p) for a tabulated prime, nullopt for non-primes inside the range.
  std::optional<std::uint64_t> order(std::uint64_t p) const;

  bool operator==(const CurveOrderTable& other) const;

 private:
  CurveParams curve_;
  std::uint64_t limit_;
  std::vector<OrderEntry> entries_;
};

// Throws ConsistencyError if some good prime leaves the Hasse interval.
CurveOrderTable build_order_table(const CurveParams& curve, std::uint64_t limit,
                                  unsigned workers = 1);

// Strict Hasse check (sqrt(p)-1)^2 < n < (sqrt(p)+1)^2, in integers.
bool in_hasse_interval(std::uint64_t p, std::uint64_t n);

// Cache file: "# romanoff order table" line, "A,B,limit,version" header,
// then one "p,order" row per prime in ascending order.
void write_order_table(const CurveOrderTable& table, std::ostream& out);
CurveOrderTable read_order_table(std::istream& in);

// Cache lookup keyed by (A, B, limit) inside `cache_dir`; builds and stores
// the table on a miss. A null cache_dir disables caching.
CurveOrderTable load_or_build_order_table(const CurveParams& curve, std::uint64_t limit,
                                          unsigned workers,
                                          const std::optional<std::filesystem::path>& cache_dir);
// Directory named by ROMANOFF_ORDER_CACHE, if set.
std::optional<std::filesystem::path> order_cache_dir_from_env();

// #{p >= 3 good : #E(F_p) = #E(F_q)}, scanning only the Hasse window
// around q. Throws when the window leaves the table, ConsistencyError if
// the count exceeds 9 sqrt(q).
std::uint64_t order_multiplicity(const CurveOrderTable& table, std::uint64_t q);

struct CongruenceCount {
  std::uint64_t count_all;   // every prime 3 <= q <= x
  std::uint64_t count_good;  // bad-reduction primes removed
  double ratio;              // count_all * phi(n) * log x / x
  double ratio_good;
};

CongruenceCount order_congruence_count(const CurveOrderTable& table, std::uint64_t x,
                                       std::uint64_t n, std::int64_t alpha);

}  // namespace romanoff
