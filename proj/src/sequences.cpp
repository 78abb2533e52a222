#include "romanoff/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "romanoff/errors.hpp"
#include "romanoff/numeric.hpp"

namespace romanoff {

namespace {

constexpr std::uint64_t kMinPrimeLimit = 1000;

enum class Domain { Naturals, Primes, SPrime };

Domain argument_domain(SequenceKind kind) {
  switch (kind) {
    case SequenceKind::PowerPoly:
      return Domain::Naturals;
    case SequenceKind::PolyOfPrimes:
    case SequenceKind::PowerPolyOfPrimes:
      return Domain::Primes;
    case SequenceKind::PolyOfSPrime:
    case SequenceKind::PowerPolyOfSPrime:
      return Domain::SPrime;
    default:
      throw InvalidArgument("sequence kind has no argument domain");
  }
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

void require_base(std::uint64_t base) {
  if (base < 2) throw InvalidArgument("power sequences need base a >= 2");
}

void require_primitive(const Polynomial& f) {
  if (!f.is_primitive()) {
    throw InvalidArgument("power sequences need gcd(gamma_d, ..., gamma_0) = 1, got f=" +
                          f.to_string());
  }
}

// Arguments n of the domain with n <= bound, ascending.
std::vector<std::uint64_t> domain_arguments(Domain domain, std::uint64_t bound,
                                            const SequenceContext& ctx) {
  std::vector<std::uint64_t> args;
  switch (domain) {
    case Domain::Naturals:
      args.reserve(bound);
      for (std::uint64_t n = 1; n <= bound; ++n) args.push_back(n);
      break;
    case Domain::Primes:
      if (bound >= 2) {
        for (const auto p : ctx.sieve(bound).primes_up_to(bound)) args.push_back(p);
      }
      break;
    case Domain::SPrime: {
      if (bound == 0) break;
      const auto& sq = ctx.squares(bound);
      for (std::uint64_t n = 1; n <= bound; n += 2) {
        if (sq.in_s_prime(n)) args.push_back(n);
      }
      break;
    }
  }
  return args;
}

// f(n) for the given arguments, keeping values <= y. Every argument passed
// must map to a positive value.
std::vector<std::uint64_t> poly_values(const Polynomial& f, std::span<const std::uint64_t> args,
                                       std::uint64_t y) {
  std::vector<std::uint64_t> out;
  for (const auto n : args) {
    const auto v = f.try_eval(static_cast<std::int64_t>(n));
    if (!v) continue;  // beyond 128 bits, certainly > y
    if (*v < 1) {
      throw InvalidArgument("polynomial " + f.to_string() + " does not map N to N: f(" +
                            std::to_string(n) + ") <= 0");
    }
    if (*v <= static_cast<__int128>(y)) out.push_back(static_cast<std::uint64_t>(*v));
  }
  return out;
}

std::vector<Term> to_terms(std::vector<std::uint64_t> values) {
  std::sort(values.begin(), values.end());
  std::vector<Term> terms;
  for (const auto v : values) {
    if (!terms.empty() && terms.back().value == v) {
      ++terms.back().multiplicity;
    } else {
      terms.push_back({v, 1});
    }
  }
  return terms;
}

std::uint64_t curve_table_limit(std::uint64_t max_order) {
  // (sqrt p - 1)^2 < #E(F_p) <= N  forces  p < (sqrt N + 1)^2 <= (isqrt N + 2)^2.
  const std::uint64_t r = isqrt(max_order) + 2;
  return std::max<std::uint64_t>(3, r * r);
}

std::uint64_t exponent_residue_key(const SequenceSpec& spec, std::uint64_t exponent,
                                   std::uint64_t p, std::uint64_t order) {
  // order == 0 marks p | a, where congruences are evaluated directly.
  if (order == 0) return powmod(spec.base(), exponent, p);
  return exponent % order;
}

}  // namespace

// ---------------------------------------------------------------------------
// SequenceSpec

std::string_view kind_name(SequenceKind kind) {
  switch (kind) {
    case SequenceKind::Primes: return "Primes";
    case SequenceKind::SumsTwoSquares: return "SumsTwoSquares";
    case SequenceKind::PrimitiveOddSumsTwoSquares: return "PrimitiveOddSumsTwoSquares";
    case SequenceKind::PowerPoly: return "PowerPoly";
    case SequenceKind::PolyOfPrimes: return "PolyOfPrimes";
    case SequenceKind::PolyOfSPrime: return "PolyOfSPrime";
    case SequenceKind::PowerPolyOfPrimes: return "PowerPolyOfPrimes";
    case SequenceKind::PowerPolyOfSPrime: return "PowerPolyOfSPrime";
    case SequenceKind::PolyOfCurveOrders: return "PolyOfCurveOrders";
  }
  return "?";
}

SequenceKind parse_kind(std::string_view name) {
  for (const auto k : {SequenceKind::Primes, SequenceKind::SumsTwoSquares,
                       SequenceKind::PrimitiveOddSumsTwoSquares, SequenceKind::PowerPoly,
                       SequenceKind::PolyOfPrimes, SequenceKind::PolyOfSPrime,
                       SequenceKind::PowerPolyOfPrimes, SequenceKind::PowerPolyOfSPrime,
                       SequenceKind::PolyOfCurveOrders}) {
    if (kind_name(k) == name) return k;
  }
  throw InvalidArgument("unknown sequence kind '" + std::string(name) + "'");
}

SequenceSpec SequenceSpec::primes() { return {SequenceKind::Primes, Normalizer::Log}; }

SequenceSpec SequenceSpec::sums_two_squares() {
  return {SequenceKind::SumsTwoSquares, Normalizer::SqrtLog};
}

SequenceSpec SequenceSpec::primitive_odd_sums_two_squares() {
  return {SequenceKind::PrimitiveOddSumsTwoSquares, Normalizer::SqrtLog};
}

SequenceSpec SequenceSpec::power_poly(std::uint64_t base, Polynomial f) {
  require_base(base);
  require_primitive(f);
  SequenceSpec s(SequenceKind::PowerPoly, Normalizer::None);
  s.base_ = base;
  s.poly_ = std::move(f);
  return s;
}

SequenceSpec SequenceSpec::poly_of_primes(Polynomial f) {
  SequenceSpec s(SequenceKind::PolyOfPrimes, Normalizer::None);
  s.poly_ = std::move(f);
  return s;
}

SequenceSpec SequenceSpec::poly_of_s_prime(Polynomial f) {
  SequenceSpec s(SequenceKind::PolyOfSPrime, Normalizer::None);
  s.poly_ = std::move(f);
  return s;
}

SequenceSpec SequenceSpec::power_poly_of_primes(std::uint64_t base, Polynomial f) {
  auto s = power_poly(base, std::move(f));
  s.kind_ = SequenceKind::PowerPolyOfPrimes;
  return s;
}

SequenceSpec SequenceSpec::power_poly_of_s_prime(std::uint64_t base, Polynomial f) {
  auto s = power_poly(base, std::move(f));
  s.kind_ = SequenceKind::PowerPolyOfSPrime;
  return s;
}

SequenceSpec SequenceSpec::poly_of_curve_orders(CurveParams curve, Polynomial f,
                                                bool include_bad_primes) {
  if (curve.discriminant() == 0) throw InvalidArgument("singular curve");
  SequenceSpec s(SequenceKind::PolyOfCurveOrders, Normalizer::None);
  s.poly_ = std::move(f);
  s.curve_ = std::move(curve);
  s.include_bad_primes_ = include_bad_primes;
  return s;
}

const Polynomial& SequenceSpec::poly() const {
  if (!poly_) throw InvalidArgument(std::string(kind_name(kind_)) + " has no polynomial");
  return *poly_;
}

const CurveParams& SequenceSpec::curve() const {
  if (!curve_) throw InvalidArgument(std::string(kind_name(kind_)) + " has no curve");
  return *curve_;
}

bool SequenceSpec::is_power_kind() const {
  return kind_ == SequenceKind::PowerPoly || kind_ == SequenceKind::PowerPolyOfPrimes ||
         kind_ == SequenceKind::PowerPolyOfSPrime;
}

double SequenceSpec::eta(double x) const {
  switch (normalizer_) {
    case Normalizer::Log: return std::log(x);
    case Normalizer::SqrtLog: return std::sqrt(std::log(x));
    case Normalizer::None: break;
  }
  throw InvalidArgument(std::string(kind_name(kind_)) + " carries no eta(x); not an A-side sequence");
}

std::optional<double> SequenceSpec::default_lambda_alpha() const {
  switch (kind_) {
    case SequenceKind::PowerPoly: return 1.0 / (2.0 * degree());
    case SequenceKind::PolyOfPrimes:
    case SequenceKind::PolyOfSPrime: return 0.5;
    case SequenceKind::PowerPolyOfPrimes:
    case SequenceKind::PowerPolyOfSPrime: return 1.0 / (3.0 * degree());
    case SequenceKind::PolyOfCurveOrders: return 1.0 / 15.0;
    default: return std::nullopt;
  }
}

std::string SequenceSpec::serialize() const {
  std::ostringstream out;
  out << "kind=" << kind_name(kind_);
  if (is_power_kind()) out << ";a=" << base_;
  if (poly_) out << ";poly=" << poly_->to_coefficient_list();
  if (curve_) {
    out << ";curve=" << curve_->id << ";bad_primes=" << (include_bad_primes_ ? "include" : "exclude");
  }
  return out.str();
}

std::string SequenceSpec::describe() const {
  const std::string f = poly_ ? poly_->to_string() : "";
  switch (kind_) {
    case SequenceKind::Primes: return "P";
    case SequenceKind::SumsTwoSquares: return "S";
    case SequenceKind::PrimitiveOddSumsTwoSquares: return "S'";
    case SequenceKind::PowerPoly: return std::to_string(base_) + "^(" + f + "), n in N";
    case SequenceKind::PolyOfPrimes: return f + ", n in P";
    case SequenceKind::PolyOfSPrime: return f + ", n in S'";
    case SequenceKind::PowerPolyOfPrimes: return std::to_string(base_) + "^(" + f + "), n in P";
    case SequenceKind::PowerPolyOfSPrime: return std::to_string(base_) + "^(" + f + "), n in S'";
    case SequenceKind::PolyOfCurveOrders: return f + ", n = #E(F_p), E=" + curve_->id;
  }
  return "?";
}

bool SequenceSpec::operator==(const SequenceSpec& other) const {
  const bool curves_equal = curve_.has_value() == other.curve_.has_value() &&
                            (!curve_ || curve_->same_curve(*other.curve_));
  return kind_ == other.kind_ && normalizer_ == other.normalizer_ && base_ == other.base_ &&
         poly_ == other.poly_ && curves_equal && include_bad_primes_ == other.include_bad_primes_;
}

SequenceSpec parse_sequence_spec(std::string_view record, const SpecDefaults& defaults) {
  std::map<std::string, std::string> fields;
  std::string text(record);
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      // a bare word is shorthand for the kind
      fields["kind"] = item;
      continue;
    }
    fields[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
  }
  if (!fields.count("kind")) throw InvalidArgument("sequence record needs kind=...");
  const SequenceKind kind = parse_kind(fields["kind"]);
  for (const auto& [key, value] : fields) {
    if (key != "kind" && key != "a" && key != "poly" && key != "curve" && key != "bad_primes") {
      throw InvalidArgument("unknown sequence record key '" + key + "'");
    }
  }

  auto base = [&]() -> std::uint64_t {
    if (fields.count("a")) {
      try {
        std::size_t used = 0;
        const auto v = std::stoull(fields["a"], &used);
        if (used == fields["a"].size()) return v;
      } catch (const std::exception&) {
      }
      throw InvalidArgument("bad base a='" + fields["a"] + "'");
    }
    if (defaults.base) return *defaults.base;
    throw InvalidArgument(std::string(kind_name(kind)) + " needs a base a");
  };
  auto poly = [&]() -> Polynomial {
    if (fields.count("poly")) return Polynomial::parse_coefficient_list(fields["poly"]);
    if (defaults.poly) return *defaults.poly;
    throw InvalidArgument(std::string(kind_name(kind)) + " needs a polynomial");
  };

  switch (kind) {
    case SequenceKind::Primes: return SequenceSpec::primes();
    case SequenceKind::SumsTwoSquares: return SequenceSpec::sums_two_squares();
    case SequenceKind::PrimitiveOddSumsTwoSquares:
      return SequenceSpec::primitive_odd_sums_two_squares();
    case SequenceKind::PowerPoly: return SequenceSpec::power_poly(base(), poly());
    case SequenceKind::PolyOfPrimes: return SequenceSpec::poly_of_primes(poly());
    case SequenceKind::PolyOfSPrime: return SequenceSpec::poly_of_s_prime(poly());
    case SequenceKind::PowerPolyOfPrimes: return SequenceSpec::power_poly_of_primes(base(), poly());
    case SequenceKind::PowerPolyOfSPrime:
      return SequenceSpec::power_poly_of_s_prime(base(), poly());
    case SequenceKind::PolyOfCurveOrders: {
      CurveParams curve;
      if (fields.count("curve")) {
        curve = find_curve(fields["curve"]);
      } else if (defaults.curve) {
        curve = *defaults.curve;
      } else {
        throw InvalidArgument("PolyOfCurveOrders needs a curve");
      }
      bool include = false;
      if (fields.count("bad_primes")) {
        if (fields["bad_primes"] == "include") {
          include = true;
        } else if (fields["bad_primes"] != "exclude") {
          throw InvalidArgument("bad_primes must be include or exclude");
        }
      }
      return SequenceSpec::poly_of_curve_orders(curve, poly(), include);
    }
  }
  throw InvalidArgument("unhandled sequence kind");
}

// ---------------------------------------------------------------------------
// TermMultiset

TermMultiset::TermMultiset(std::uint64_t cutoff, std::vector<Term> terms,
                           std::vector<std::uint64_t> exponents)
    : cutoff_(cutoff), terms_(std::move(terms)), exponents_(std::move(exponents)) {
  if (!exponents_.empty() && exponents_.size() != terms_.size()) {
    throw InvalidArgument("exponent list must align with terms");
  }
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].multiplicity == 0) throw InvalidArgument("term multiplicity must be >= 1");
    if (i > 0 && terms_[i].value <= terms_[i - 1].value) {
      throw InvalidArgument("term values must be strictly increasing");
    }
    total_ += terms_[i].multiplicity;
  }
}

std::uint64_t TermMultiset::count_up_to(std::uint64_t y) const {
  std::uint64_t c = 0;
  for (const auto& t : terms_) {
    if (t.value > y) break;
    c += t.multiplicity;
  }
  return c;
}

std::uint32_t TermMultiset::multiplicity(std::uint64_t value) const {
  const auto it = std::lower_bound(terms_.begin(), terms_.end(), value,
                                   [](const Term& t, std::uint64_t v) { return t.value < v; });
  return (it != terms_.end() && it->value == value) ? it->multiplicity : 0;
}

std::uint32_t TermMultiset::max_multiplicity() const {
  std::uint32_t m = 0;
  for (const auto& t : terms_) m = std::max(m, t.multiplicity);
  return m;
}

TermMultiset TermMultiset::restrict_to(std::uint64_t y) const {
  std::vector<Term> terms;
  std::vector<std::uint64_t> exps;
  for (std::size_t i = 0; i < terms_.size() && terms_[i].value <= y; ++i) {
    terms.push_back(terms_[i]);
    if (!exponents_.empty()) exps.push_back(exponents_[i]);
  }
  return TermMultiset(std::min(y, cutoff_), std::move(terms), std::move(exps));
}

// ---------------------------------------------------------------------------
// Tables

SquareSumTable::SquareSumTable(std::uint64_t limit) : limit_(limit) {
  if (limit < 1) throw InvalidArgument("square-sum table limit must be >= 1");
  s_.assign(limit + 1, true);
  s_prime_.assign(limit + 1, false);
  s_[0] = false;
  for (std::uint64_t n = 1; n <= limit; n += 2) s_prime_[n] = true;
  const PrimeSieve sieve(std::max<std::uint64_t>(limit, 2));
  for (const std::uint64_t p : sieve.primes()) {
    if (p % 4 != 3) continue;
    for (std::uint64_t m = p; m <= limit; m += 2 * p) s_prime_[m] = false;
    for (std::uint64_t m = p; m <= limit; m += p) {
      std::uint64_t q = m / p;
      unsigned e = 1;
      while (q % p == 0) {
        q /= p;
        ++e;
      }
      if (e % 2 == 1) s_[m] = false;
    }
  }
}

bool SquareSumTable::in_s(std::uint64_t n) const {
  if (n > limit_) throw SieveExhausted("sum-of-two-squares query beyond table", n);
  return s_[n];
}

bool SquareSumTable::in_s_prime(std::uint64_t n) const {
  if (n > limit_) throw SieveExhausted("sum-of-two-squares query beyond table", n);
  return s_prime_[n];
}

void TableRequirements::merge(const TableRequirements& other) {
  prime_limit = std::max(prime_limit, other.prime_limit);
  square_limit = std::max(square_limit, other.square_limit);
  for (const auto& [curve, limit] : other.curve_limits) {
    auto it = std::find_if(curve_limits.begin(), curve_limits.end(),
                           [&](const auto& e) { return e.first.same_curve(curve); });
    if (it == curve_limits.end()) {
      curve_limits.emplace_back(curve, limit);
    } else {
      it->second = std::max(it->second, limit);
    }
  }
}

std::uint64_t floor_log(std::uint64_t base, std::uint64_t x) {
  require_base(base);
  if (x == 0) throw InvalidArgument("floor_log of 0");
  std::uint64_t e = 0;
  std::uint64_t power = 1;
  while (power <= x / base) {
    power *= base;
    ++e;
  }
  return e;
}

TableRequirements required_tables(const SequenceSpec& spec, std::uint64_t x) {
  TableRequirements req;
  req.prime_limit = kMinPrimeLimit;
  auto need_domain = [&](SequenceKind kind, std::uint64_t bound) {
    switch (argument_domain(kind)) {
      case Domain::Naturals: break;
      case Domain::Primes: req.prime_limit = std::max(req.prime_limit, bound); break;
      case Domain::SPrime: req.square_limit = std::max(req.square_limit, bound); break;
    }
  };
  switch (spec.kind()) {
    case SequenceKind::Primes: req.prime_limit = std::max(req.prime_limit, x); break;
    case SequenceKind::SumsTwoSquares:
    case SequenceKind::PrimitiveOddSumsTwoSquares: req.square_limit = x; break;
    case SequenceKind::PolyOfPrimes:
    case SequenceKind::PolyOfSPrime: need_domain(spec.kind(), spec.poly().preimage_bound(x)); break;
    case SequenceKind::PowerPoly:
    case SequenceKind::PowerPolyOfPrimes:
    case SequenceKind::PowerPolyOfSPrime:
      need_domain(spec.kind(), spec.poly().preimage_bound(floor_log(spec.base(), std::max<std::uint64_t>(x, 1))));
      break;
    case SequenceKind::PolyOfCurveOrders:
      req.curve_limits.emplace_back(spec.curve(), curve_table_limit(spec.poly().preimage_bound(x)));
      break;
  }
  return req;
}

void SequenceContext::add_curve_table(std::shared_ptr<const CurveOrderTable> t) {
  curves_.push_back(std::move(t));
}

SequenceContext SequenceContext::from_requirements(
    const TableRequirements& req, unsigned workers,
    const std::optional<std::filesystem::path>& cache_dir) {
  SequenceContext ctx;
  ctx.set_sieve(std::make_shared<const PrimeSieve>(std::max(req.prime_limit, kMinPrimeLimit)));
  if (req.square_limit > 0) ctx.set_squares(std::make_shared<const SquareSumTable>(req.square_limit));
  for (const auto& [curve, limit] : req.curve_limits) {
    ctx.add_curve_table(std::make_shared<const CurveOrderTable>(
        load_or_build_order_table(curve, limit, workers, cache_dir)));
  }
  return ctx;
}

SequenceContext SequenceContext::covering(std::span<const SequenceSpec> specs, std::uint64_t x,
                                          unsigned workers,
                                          const std::optional<std::filesystem::path>& cache_dir) {
  TableRequirements req;
  for (const auto& s : specs) req.merge(required_tables(s, x));
  return from_requirements(req, workers, cache_dir);
}

const PrimeSieve& SequenceContext::sieve(std::uint64_t need) const {
  if (!sieve_ || sieve_->limit() < need) throw SieveExhausted("prime sieve too small", need);
  return *sieve_;
}

const SquareSumTable& SequenceContext::squares(std::uint64_t need) const {
  if (!squares_ || squares_->limit() < need) {
    throw SieveExhausted("sum-of-two-squares table too small", need);
  }
  return *squares_;
}

const CurveOrderTable& SequenceContext::curve_table(const CurveParams& curve,
                                                    std::uint64_t need) const {
  const CurveOrderTable* best = nullptr;
  for (const auto& t : curves_) {
    if (t->curve().same_curve(curve) && t->limit() >= need &&
        (best == nullptr || t->limit() < best->limit())) {
      best = t.get();
    }
  }
  if (best == nullptr) throw SieveExhausted("curve order table for " + curve.id + " too small", need);
  return *best;
}

// ---------------------------------------------------------------------------
// Enumeration and counting

TermMultiset enumerate_exponents(const SequenceSpec& spec, std::uint64_t max_exponent,
                                 const SequenceContext& ctx) {
  if (!spec.is_power_kind()) throw InvalidArgument("exponent enumeration needs a power sequence");
  const Polynomial& f = spec.poly();
  const auto args = domain_arguments(argument_domain(spec.kind()), f.preimage_bound(max_exponent), ctx);
  auto terms = to_terms(poly_values(f, args, max_exponent));
  std::vector<std::uint64_t> exponents;
  exponents.reserve(terms.size());
  for (const auto& t : terms) exponents.push_back(t.value);
  return TermMultiset(max_exponent, std::move(terms), std::move(exponents));
}

TermMultiset enumerate(const SequenceSpec& spec, std::uint64_t x, const SequenceContext& ctx) {
  if (x == 0) throw InvalidArgument("enumeration cutoff must be >= 1");
  switch (spec.kind()) {
    case SequenceKind::Primes: {
      std::vector<Term> terms;
      if (x >= 2) {
        for (const auto p : ctx.sieve(x).primes_up_to(x)) terms.push_back({p, 1});
      }
      return TermMultiset(x, std::move(terms));
    }
    case SequenceKind::SumsTwoSquares:
    case SequenceKind::PrimitiveOddSumsTwoSquares: {
      const auto& sq = ctx.squares(x);
      const bool primitive = spec.kind() == SequenceKind::PrimitiveOddSumsTwoSquares;
      std::vector<Term> terms;
      for (std::uint64_t n = 1; n <= x; ++n) {
        if (primitive ? sq.in_s_prime(n) : sq.in_s(n)) terms.push_back({n, 1});
      }
      return TermMultiset(x, std::move(terms));
    }
    case SequenceKind::PolyOfPrimes:
    case SequenceKind::PolyOfSPrime: {
      const Polynomial& f = spec.poly();
      const auto args = domain_arguments(argument_domain(spec.kind()), f.preimage_bound(x), ctx);
      return TermMultiset(x, to_terms(poly_values(f, args, x)));
    }
    case SequenceKind::PowerPoly:
    case SequenceKind::PowerPolyOfPrimes:
    case SequenceKind::PowerPolyOfSPrime: {
      const auto by_exponent = enumerate_exponents(spec, floor_log(spec.base(), x), ctx);
      std::vector<Term> terms;
      std::vector<std::uint64_t> exponents;
      for (const auto& t : by_exponent.terms()) {
        std::uint64_t value = 1;
        for (std::uint64_t k = 0; k < t.value; ++k) value *= spec.base();  // <= x by construction
        terms.push_back({value, t.multiplicity});
        exponents.push_back(t.value);
      }
      return TermMultiset(x, std::move(terms), std::move(exponents));
    }
    case SequenceKind::PolyOfCurveOrders: {
      const Polynomial& f = spec.poly();
      const std::uint64_t max_order = f.preimage_bound(x);
      const std::uint64_t limit = curve_table_limit(max_order);
      const auto& table = ctx.curve_table(spec.curve(), limit);
      std::vector<std::uint64_t> orders;
      for (const auto& e : table.entries_up_to(limit)) {
        if (e.bad && !spec.include_bad_primes()) continue;
        if (e.order <= max_order) orders.push_back(e.order);
      }
      return TermMultiset(x, to_terms(poly_values(f, orders, x)));
    }
  }
  throw InvalidArgument("unhandled sequence kind");
}

std::uint64_t count_shifted(const SequenceSpec& spec, std::uint64_t x, std::uint64_t r,
                            const SequenceContext& ctx) {
  if (r == 0) throw InvalidArgument("shift r must be >= 1");
  const auto terms = enumerate(spec, checked_add(x, r), ctx);
  std::uint64_t count = 0;
  for (const auto& t : terms.terms()) {
    if (t.value > x) break;
    if (terms.contains(t.value + r)) count += t.multiplicity;
  }
  return count;
}

namespace {

std::uint32_t checked_rho(const SequenceSpec& spec, const TermMultiset& terms,
                          std::uint64_t table_limit) {
  const std::uint32_t r = terms.max_multiplicity();
  if (!spec.is_polynomial_kind()) return r;
  const auto d = static_cast<std::uint64_t>(spec.degree());
  if (spec.kind() != SequenceKind::PolyOfCurveOrders) {
    if (r > d) {
      throw ConsistencyError("rho = " + std::to_string(r) + " exceeds degree " + std::to_string(d) +
                             " for " + spec.describe());
    }
  } else if (!spec.include_bad_primes()) {
    // ord(v) <= sum over the <= d roots of f(n) = v of #{p : #E(F_p) = root} <= d 9 sqrt(q)
    const unsigned __int128 lhs = static_cast<unsigned __int128>(r) * r;
    if (lhs > static_cast<unsigned __int128>(81) * d * d * table_limit) {
      throw ConsistencyError("curve-order multiplicity exceeds the 9 sqrt(q) envelope");
    }
  }
  return r;
}

}  // namespace

std::uint32_t rho(const SequenceSpec& spec, std::uint64_t x, const SequenceContext& ctx) {
  const auto terms = enumerate(spec, x, ctx);
  std::uint64_t table_limit = 0;
  if (spec.kind() == SequenceKind::PolyOfCurveOrders) {
    table_limit = curve_table_limit(spec.poly().preimage_bound(x));
  }
  return checked_rho(spec, terms, table_limit);
}

std::uint32_t rho_exponent(const SequenceSpec& spec, std::uint64_t max_exponent,
                           const SequenceContext& ctx) {
  return checked_rho(spec, enumerate_exponents(spec, max_exponent, ctx), 0);
}

std::uint64_t lambda(const SequenceSpec& spec, const TermMultiset& terms, std::uint64_t j_term,
                     std::uint64_t p) {
  if (!is_prime_trial(p)) throw InvalidArgument("lambda needs a prime modulus");
  const auto all = terms.terms();
  const auto it = std::lower_bound(all.begin(), all.end(), j_term,
                                   [](const Term& t, std::uint64_t v) { return t.value < v; });
  if (it == all.end() || it->value != j_term) {
    throw InvalidArgument(std::to_string(j_term) + " is not a term of " + spec.describe());
  }
  const auto j = static_cast<std::size_t>(it - all.begin());
  std::uint64_t count = 0;
  if (spec.is_power_kind()) {
    const auto exps = terms.exponents();
    const std::uint64_t order = spec.base() % p == 0 ? 0 : multiplicative_order(spec.base(), p);
    const std::uint64_t key = exponent_residue_key(spec, exps[j], p, order);
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (exponent_residue_key(spec, exps[i], p, order) == key) count += all[i].multiplicity;
    }
  } else {
    const std::uint64_t key = j_term % p;
    for (const auto& t : all) {
      if (t.value % p == key) count += t.multiplicity;
    }
  }
  return count;
}

std::uint64_t lambda(const SequenceSpec& spec, std::uint64_t x, std::uint64_t j_term,
                     std::uint64_t p, const SequenceContext& ctx) {
  return lambda(spec, enumerate(spec, x, ctx), j_term, p);
}

LambdaSum lambda_weighted_sum(const SequenceSpec& spec, const TermMultiset& terms, double log_x,
                              double alpha, const PrimeSieve& sieve) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  LambdaSum out;
  out.terms = terms.count();
  out.prime_cutoff = log_x > 0.0 ? std::pow(log_x, alpha) : 0.0;
  if (out.prime_cutoff < 2.0) {
    out.degenerate = true;
    return out;
  }
  const auto cutoff = static_cast<std::uint64_t>(std::floor(out.prime_cutoff));
  if (cutoff > sieve.limit()) throw SieveExhausted("lambda prime range beyond sieve", cutoff);
  const auto all = terms.terms();
  const auto exps = terms.exponents();
  CompensatedSum total;
  for (const std::uint64_t p : sieve.primes_up_to(cutoff)) {
    // sum_j lambda(x; b_j, p) = sum over residue classes of (class size)^2
    std::map<std::uint64_t, std::uint64_t> classes;
    if (spec.is_power_kind()) {
      const std::uint64_t order = spec.base() % p == 0 ? 0 : multiplicative_order(spec.base(), p);
      for (std::size_t i = 0; i < all.size(); ++i) {
        classes[exponent_residue_key(spec, exps[i], p, order)] += all[i].multiplicity;
      }
    } else {
      for (const auto& t : all) classes[t.value % p] += t.multiplicity;
    }
    std::uint64_t squares = 0;
    for (const auto& [key, size] : classes) squares = checked_add(squares, checked_mul(size, size));
    total.add(std::log(static_cast<double>(p)) / static_cast<double>(p) *
              static_cast<double>(squares));
    ++out.primes_used;
  }
  out.sum = total.value();
  if (out.terms > 0) {
    const double c = static_cast<double>(out.terms);
    out.ratio = out.sum / (c * c);
  }
  return out;
}

LambdaSum lambda_weighted_sum(const SequenceSpec& spec, std::uint64_t x, double alpha,
                              const SequenceContext& ctx) {
  if (x == 0) throw InvalidArgument("cutoff must be >= 1");
  const auto terms = enumerate(spec, x, ctx);
  const double log_x = std::log(static_cast<double>(x));
  const double cutoff = log_x > 0.0 ? std::pow(log_x, alpha) : 0.0;
  const auto need = cutoff >= 2.0 ? static_cast<std::uint64_t>(cutoff) : 2;
  return lambda_weighted_sum(spec, terms, log_x, alpha, ctx.sieve(need));
}

}  // namespace romanoff
