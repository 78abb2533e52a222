#pragma once

// Representation function r(n) = #{(i, j) : a_i + b_j = n} for a pair of
// sequences, its second-moment decomposition by index comparison, and the
// threshold counts behind the density lower bound.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "romanoff/sequences.hpp"

namespace romanoff {

struct RepProfile {
  std::uint64_t x = 0;
  std::vector<std::uint32_t> counts;  // counts[n] = r(n), 0 <= n <= x
  SequenceSpec spec_a;
  SequenceSpec spec_b;
  TermMultiset a_terms;  // A up to x
  TermMultiset b_terms;  // B up to x

  std::uint32_t r(std::uint64_t n) const { return counts.at(n); }
};

// A must have distinct terms (it is indexed by its values). Throws
// OverflowError if some r(n) leaves 32 bits.
RepProfile representation_counts(const SequenceSpec& spec_a, const SequenceSpec& spec_b,
                                 std::uint64_t x, const SequenceContext& ctx,
                                 unsigned workers = 1);

// Context covering both sequences to x, and A to 2x when the S2 surrogate
// will be evaluated.
SequenceContext engine_context(const SequenceSpec& spec_a, const SequenceSpec& spec_b,
                               std::uint64_t x, unsigned workers = 1,
                               const std::optional<std::filesystem::path>& cache_dir = {});

// Largest x for which the S2 surrogate sum is evaluated.
inline constexpr std::uint64_t kSurrogateMaxX = 20000;

struct ThresholdCount {
  double c1 = 0.0;
  double threshold = 0.0;          // c1 B(x) / eta(x)
  std::uint64_t count_above = 0;   // #{n <= x : r(n) >= threshold}
  std::uint64_t sum_r_above = 0;   // sum of r(n) over that set
  double lower_bound_shape = 0.0;  // x B / (B + rho eta)
  double empirical_c2 = 0.0;       // count_above / lower_bound_shape
  bool cauchy_schwarz_holds = false;
};

struct MomentReport {
  std::uint64_t x = 0;
  std::uint64_t s1 = 0;  // equal A-indices
  std::uint64_t s2 = 0;  // i1 < i2
  std::uint64_t s3 = 0;  // i1 > i2
  std::uint64_t sum_r = 0;
  std::uint64_t sum_r2 = 0;
  bool identity_holds = false;  // sum_r2 = s1 + s2 + s3
  bool s2_equals_s3 = false;
  bool sum_r_identity_holds = false;  // sum_r = sum_i B(x - a_i)

  std::optional<std::uint64_t> s2_surrogate;  // sum_{b_j < b_k} A(x, b_k - b_j)
  bool surrogate_holds = true;

  std::uint64_t a_half = 0;  // A(x/2)
  std::uint64_t b_half = 0;  // B(x/2)
  bool lower_bound_step_holds = false;  // sum_r >= A(x/2) B(x/2)

  std::uint64_t b_count = 0;  // B(x)
  std::uint32_t rho_b = 0;
  std::uint32_t max_r = 0;
  std::uint64_t support = 0;  // #{n : r(n) >= 1}

  std::optional<ThresholdCount> density;

  bool all_checks_hold() const;
};

// S1, S2 and S3 are each computed by their own pass; the checks compare them.
// `ctx` (covering A to 2x) enables the surrogate when x <= kSurrogateMaxX.
MomentReport moment_decomposition(const RepProfile& profile, unsigned workers = 1,
                                  const SequenceContext* ctx = nullptr);

// Needs spec_a to carry eta. c1 > 0.
ThresholdCount threshold_count(const RepProfile& profile, const MomentReport& moments,
                               double c1);

MomentReport density_report(const SequenceSpec& spec_a, const SequenceSpec& spec_b,
                            std::uint64_t x, double c1, const SequenceContext& ctx,
                            unsigned workers = 1);

struct ShiftRow {
  std::uint64_t r;
  std::uint64_t count;  // A(x, r)
  double ratio;         // count phi(r) eta^2 / (r x)
};

struct ShiftedBound {
  double sup_ratio = 0.0;
  std::uint64_t argmax_r = 0;
  std::vector<ShiftRow> rows;
};

// A in {Primes, PrimitiveOddSumsTwoSquares}; 1 <= r_max <= x. eta^2 is
// (log x)^2 for primes and log x for S'. ctx must cover A to x + r_max.
ShiftedBound shifted_bound_ratio(const SequenceSpec& spec_a, std::uint64_t x,
                                 std::uint64_t r_max, const SequenceContext& ctx);

}  // namespace romanoff
