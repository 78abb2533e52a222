#include "romanoff/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "romanoff/errors.hpp"
#include "romanoff/numeric.hpp"

namespace romanoff {

namespace {

constexpr std::uint64_t kMomentBlock = 1 << 16;

using u128 = unsigned __int128;

std::uint64_t product_count(std::uint64_t a, std::uint64_t b) { return checked_mul(a, b); }

// First B term with value >= v.
std::size_t first_at_least(std::span<const Term> b, std::uint64_t v) {
  return static_cast<std::size_t>(
      std::lower_bound(b.begin(), b.end(), v,
                       [](const Term& t, std::uint64_t y) { return t.value < y; }) -
      b.begin());
}

// Ordered-pair count over one block of n, visiting A in the given direction.
std::uint64_t cross_pairs_in_block(std::span<const Term> a, std::span<const Term> b,
                                   std::uint64_t lo, std::uint64_t hi, bool ascending) {
  std::vector<std::uint64_t> partial(hi - lo, 0);
  std::uint64_t pairs = 0;
  const std::size_t n_a = a.size();
  for (std::size_t k = 0; k < n_a; ++k) {
    const Term& ai = a[ascending ? k : n_a - 1 - k];
    if (ai.value >= hi) {
      if (ascending) break;
      continue;
    }
    const std::uint64_t from = lo > ai.value ? lo - ai.value : 0;
    for (std::size_t j = first_at_least(b, from); j < b.size(); ++j) {
      const std::uint64_t n = ai.value + b[j].value;
      if (n >= hi) break;
      auto& slot = partial[n - lo];
      pairs = checked_add(pairs, product_count(slot, b[j].multiplicity));
      slot += b[j].multiplicity;
    }
  }
  return pairs;
}

std::uint64_t cross_pairs(const RepProfile& p, bool ascending, unsigned workers) {
  const std::uint64_t span = p.x + 1;
  const std::size_t n_blocks = (span + kMomentBlock - 1) / kMomentBlock;
  std::vector<std::uint64_t> per_block(n_blocks, 0);
  parallel_blocks(n_blocks, workers, [&](std::size_t blk) {
    const std::uint64_t lo = blk * kMomentBlock;
    const std::uint64_t hi = std::min(span, lo + kMomentBlock);
    per_block[blk] = cross_pairs_in_block(p.a_terms.terms(), p.b_terms.terms(), lo, hi, ascending);
  });
  std::uint64_t total = 0;
  for (const auto v : per_block) total = checked_add(total, v);
  return total;
}

std::uint64_t surrogate_sum(const RepProfile& p, const SequenceContext& ctx) {
  const std::uint64_t x = p.x;
  const auto extended = enumerate(p.spec_a, 2 * x, ctx);
  std::vector<bool> member(2 * x + 1, false);
  for (const auto& t : extended.terms()) member[t.value] = true;
  std::vector<std::int64_t> shifted(x + 1, -1);  // A(x, d), filled on demand
  auto a_shift = [&](std::uint64_t d) -> std::uint64_t {
    if (shifted[d] < 0) {
      std::int64_t c = 0;
      for (const auto& t : p.a_terms.terms()) {
        if (member[t.value + d]) c += t.multiplicity;
      }
      shifted[d] = c;
    }
    return static_cast<std::uint64_t>(shifted[d]);
  };
  const auto b = p.b_terms.terms();
  std::uint64_t total = 0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    for (std::size_t k = j + 1; k < b.size(); ++k) {
      const std::uint64_t weight = product_count(b[j].multiplicity, b[k].multiplicity);
      total = checked_add(total, checked_mul(weight, a_shift(b[k].value - b[j].value)));
    }
  }
  return total;
}

}  // namespace

SequenceContext engine_context(const SequenceSpec& spec_a, const SequenceSpec& spec_b,
                               std::uint64_t x, unsigned workers,
                               const std::optional<std::filesystem::path>& cache_dir) {
  TableRequirements req = required_tables(spec_b, x);
  req.merge(required_tables(spec_a, x <= kSurrogateMaxX ? 2 * x : x));
  return SequenceContext::from_requirements(req, workers, cache_dir);
}

RepProfile representation_counts(const SequenceSpec& spec_a, const SequenceSpec& spec_b,
                                 std::uint64_t x, const SequenceContext& ctx, unsigned workers) {
  if (x == 0) throw InvalidArgument("cutoff x must be >= 1");
  RepProfile p{x, {}, spec_a, spec_b, enumerate(spec_a, x, ctx), enumerate(spec_b, x, ctx)};
  if (p.a_terms.max_multiplicity() > 1) {
    throw InvalidArgument("A-side sequence " + spec_a.describe() + " must have distinct terms");
  }
  const auto a = p.a_terms.terms();
  const auto b = p.b_terms.terms();
  const unsigned chunks = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(
                                                                       std::max<std::size_t>(1, a.size()))));
  std::vector<std::vector<std::uint32_t>> partial(chunks);
  parallel_blocks(chunks, workers, [&](std::size_t c) {
    auto& local = partial[c];
    local.assign(x + 1, 0);
    const std::size_t begin = a.size() * c / chunks;
    const std::size_t end = a.size() * (c + 1) / chunks;
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint64_t ai = a[i].value;
      for (const auto& bj : b) {
        if (bj.value > x - ai) break;
        auto& slot = local[ai + bj.value];
        if (__builtin_add_overflow(slot, bj.multiplicity, &slot)) {
          throw OverflowError("r(n) saturated 32 bits");
        }
      }
    }
  });
  p.counts.assign(x + 1, 0);
  for (const auto& local : partial) {
    for (std::uint64_t n = 0; n <= x; ++n) {
      if (__builtin_add_overflow(p.counts[n], local[n], &p.counts[n])) {
        throw OverflowError("r(n) saturated 32 bits");
      }
    }
  }
  return p;
}

bool MomentReport::all_checks_hold() const {
  return identity_holds && s2_equals_s3 && sum_r_identity_holds && surrogate_holds &&
         lower_bound_step_holds && (!density || density->cauchy_schwarz_holds);
}

MomentReport moment_decomposition(const RepProfile& p, unsigned workers,
                                  const SequenceContext* ctx) {
  MomentReport m;
  m.x = p.x;
  for (const auto r : p.counts) {
    m.sum_r = checked_add(m.sum_r, r);
    m.sum_r2 = checked_add(m.sum_r2, product_count(r, r));
    m.max_r = std::max(m.max_r, r);
    if (r > 0) ++m.support;
  }

  // Equal-index diagonal: sum_i sum_{b_j <= x - a_i} ord(b_j).
  const auto a = p.a_terms.terms();
  const auto b = p.b_terms.terms();
  std::vector<std::uint64_t> ord_prefix(b.size() + 1, 0);  // sum of mult^2
  std::vector<std::uint64_t> count_prefix(b.size() + 1, 0);
  for (std::size_t j = 0; j < b.size(); ++j) {
    ord_prefix[j + 1] = checked_add(ord_prefix[j], product_count(b[j].multiplicity, b[j].multiplicity));
    count_prefix[j + 1] = count_prefix[j] + b[j].multiplicity;
  }
  std::uint64_t direct_sum_r = 0;
  std::size_t reach = b.size();
  for (const auto& ai : a) {
    while (reach > 0 && b[reach - 1].value > p.x - ai.value) --reach;
    m.s1 = checked_add(m.s1, checked_mul(ai.multiplicity, ord_prefix[reach]));
    direct_sum_r = checked_add(direct_sum_r, checked_mul(ai.multiplicity, count_prefix[reach]));
  }

  m.s2 = cross_pairs(p, true, workers);
  m.s3 = cross_pairs(p, false, workers);
  m.s2_equals_s3 = m.s2 == m.s3;
  m.identity_holds = static_cast<u128>(m.sum_r2) == static_cast<u128>(m.s1) + m.s2 + m.s3;
  m.sum_r_identity_holds = direct_sum_r == m.sum_r;

  if (ctx != nullptr && p.x <= kSurrogateMaxX) {
    m.s2_surrogate = surrogate_sum(p, *ctx);
    m.surrogate_holds = m.s2 <= *m.s2_surrogate;
  }

  m.a_half = p.a_terms.count_up_to(p.x / 2);
  m.b_half = p.b_terms.count_up_to(p.x / 2);
  m.lower_bound_step_holds = static_cast<u128>(m.sum_r) >= static_cast<u128>(m.a_half) * m.b_half;
  m.b_count = p.b_terms.count();
  m.rho_b = p.b_terms.max_multiplicity();
  return m;
}

ThresholdCount threshold_count(const RepProfile& p, const MomentReport& m, double c1) {
  if (!(c1 > 0.0)) throw InvalidArgument("c1 must be positive");
  const double x = static_cast<double>(p.x);
  const double eta = p.spec_a.eta(x);
  const double b = static_cast<double>(m.b_count);
  ThresholdCount t;
  t.c1 = c1;
  t.threshold = c1 * b / eta;
  for (const auto r : p.counts) {
    if (r > 0 && static_cast<double>(r) >= t.threshold) {
      ++t.count_above;
      t.sum_r_above += r;
    }
  }
  if (t.threshold <= 0.0) t.count_above = p.x;  // empty B: every n <= x qualifies
  t.lower_bound_shape = b > 0.0 ? x * b / (b + static_cast<double>(m.rho_b) * eta) : 0.0;
  t.empirical_c2 = t.lower_bound_shape > 0.0 ? static_cast<double>(t.count_above) / t.lower_bound_shape : 0.0;
  const u128 lhs = static_cast<u128>(t.sum_r_above) * t.sum_r_above;
  const u128 rhs = static_cast<u128>(t.count_above) * m.sum_r2;
  t.cauchy_schwarz_holds = lhs <= rhs;
  return t;
}

MomentReport density_report(const SequenceSpec& spec_a, const SequenceSpec& spec_b,
                            std::uint64_t x, double c1, const SequenceContext& ctx,
                            unsigned workers) {
  if (!spec_a.has_eta()) throw InvalidArgument(spec_a.describe() + " carries no eta(x)");
  if (!(c1 > 0.0)) throw InvalidArgument("c1 must be positive");
  const auto profile = representation_counts(spec_a, spec_b, x, ctx, workers);
  auto report = moment_decomposition(profile, workers, &ctx);
  report.density = threshold_count(profile, report, c1);
  return report;
}

ShiftedBound shifted_bound_ratio(const SequenceSpec& spec_a, std::uint64_t x, std::uint64_t r_max,
                                 const SequenceContext& ctx) {
  double eta_sq = 0.0;
  const double log_x = std::log(static_cast<double>(x));
  if (spec_a.kind() == SequenceKind::Primes) {
    eta_sq = log_x * log_x;
  } else if (spec_a.kind() == SequenceKind::PrimitiveOddSumsTwoSquares) {
    eta_sq = log_x;
  } else {
    throw InvalidArgument("shifted bound needs A = Primes or PrimitiveOddSumsTwoSquares");
  }
  if (r_max == 0 || r_max > x) throw InvalidArgument("need 1 <= r_max <= x");
  const auto terms = enumerate(spec_a, x + r_max, ctx);
  std::vector<bool> member(x + r_max + 1, false);
  for (const auto& t : terms.terms()) member[t.value] = true;
  ShiftedBound out;
  out.rows.reserve(r_max);
  for (std::uint64_t r = 1; r <= r_max; ++r) {
    std::uint64_t count = 0;
    for (const auto& t : terms.terms()) {
      if (t.value > x) break;
      if (member[t.value + r]) ++count;
    }
    const double ratio = static_cast<double>(count) * static_cast<double>(euler_phi(r)) * eta_sq /
                         (static_cast<double>(r) * static_cast<double>(x));
    out.rows.push_back({r, count, ratio});
    if (ratio > out.sup_ratio) {
      out.sup_ratio = ratio;
      out.argmax_r = r;
    }
  }
  return out;
}

}  // namespace romanoff
