#include "romanoff/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "romanoff/errors.hpp"
#include "romanoff/numeric.hpp"

namespace romanoff {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
  while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0 || n % 3 == 0) return false;
  for (std::uint64_t i = 5; i <= n / i; i += 6) {
    if (n % i == 0 || n % (i + 2) == 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// PrimeSieve

PrimeSieve::PrimeSieve(std::uint64_t limit) : limit_(limit) {
  if (limit < 2) throw InvalidArgument("sieve limit must be at least 2");
  if (limit > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidArgument("sieve limit must fit in 32 bits");
  }
  const std::uint64_t n_odd = limit / 2 + 1;  // odd numbers 1, 3, ..., <= limit (+1 slack)
  composite_odd_.assign((n_odd + 63) / 64, 0);
  auto set = [&](std::uint64_t i) { composite_odd_[i >> 6] |= std::uint64_t{1} << (i & 63); };
  auto test = [&](std::uint64_t i) { return (composite_odd_[i >> 6] >> (i & 63)) & 1; };
  set(0);  // 1 is not prime
  for (std::uint64_t i = 1; (2 * i + 1) * (2 * i + 1) <= limit; ++i) {
    if (test(i)) continue;
    const std::uint64_t p = 2 * i + 1;
    for (std::uint64_t m = p * p; m <= limit; m += 2 * p) set(m / 2);
  }
  primes_.push_back(2);
  for (std::uint64_t n = 3; n <= limit; n += 2) {
    if (!test(n / 2)) primes_.push_back(static_cast<std::uint32_t>(n));
  }
}

bool PrimeSieve::is_prime(std::uint64_t n) const {
  if (n > limit_) throw SieveExhausted("primality query beyond sieve", n);
  if (n == 2) return true;
  if (n < 2 || n % 2 == 0) return false;
  const std::uint64_t i = n / 2;
  return !((composite_odd_[i >> 6] >> (i & 63)) & 1);
}

std::span<const std::uint32_t> PrimeSieve::primes_up_to(std::uint64_t x) const {
  if (x > limit_) throw SieveExhausted("prime range beyond sieve", x);
  const auto end = std::upper_bound(primes_.begin(), primes_.end(), x);
  return {primes_.data(), static_cast<std::size_t>(end - primes_.begin())};
}

// ---------------------------------------------------------------------------
// Factorization

Factorization::Factorization(std::vector<PrimePower> factors) : factors_(std::move(factors)) {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].exponent == 0) throw InvalidArgument("factorization exponent must be >= 1");
    if (i > 0 && factors_[i].prime <= factors_[i - 1].prime) {
      throw InvalidArgument("factorization primes must be strictly increasing");
    }
  }
}

std::uint64_t Factorization::value() const {
  std::uint64_t v = 1;
  for (const auto& [p, e] : factors_) {
    for (std::uint32_t k = 0; k < e; ++k) v = checked_mul(v, p);
  }
  return v;
}

Factorization factor_trial(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("cannot factor 0");
  std::vector<PrimePower> out;
  auto strip = [&](std::uint64_t p) {
    if (n % p != 0) return;
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  };
  strip(2);
  strip(3);
  for (std::uint64_t p = 5; p <= n / p; p += 6) {
    strip(p);
    strip(p + 2);
  }
  if (n > 1) out.push_back({n, 1});
  return Factorization(std::move(out));
}

Factorizer::Factorizer(std::shared_ptr<const PrimeSieve> sieve, std::uint64_t spf_limit)
    : sieve_(std::move(sieve)) {
  if (!sieve_) throw InvalidArgument("factorizer needs a sieve");
  if (spf_limit >= 2) {
    spf_.assign(spf_limit + 1, 0);
    for (std::uint64_t p = 2; p <= spf_limit; ++p) {
      if (spf_[p] != 0) continue;
      for (std::uint64_t m = p; m <= spf_limit; m += p) {
        if (spf_[m] == 0) spf_[m] = static_cast<std::uint32_t>(p);
      }
    }
  }
}

Factorization Factorizer::factor(std::uint64_t n) const {
  if (n == 0) throw InvalidArgument("cannot factor 0");
  std::vector<PrimePower> out;
  if (n < spf_.size()) {
    while (n > 1) {
      const std::uint64_t p = spf_[n];
      std::uint32_t e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.push_back({p, e});
    }
    return Factorization(std::move(out));
  }
  for (const std::uint32_t p : sieve_->primes()) {
    if (static_cast<std::uint64_t>(p) * p > n) break;
    if (n % p != 0) continue;
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) {
    const std::uint64_t root = isqrt(n);
    if (root > sieve_->limit()) throw SieveExhausted("trial division beyond sieve", root);
    out.push_back({n, 1});
  }
  return Factorization(std::move(out));
}

// ---------------------------------------------------------------------------
// Totient, quadratic character, multiplicative order

std::uint64_t euler_phi(const Factorization& factorization) {
  std::uint64_t phi = 1;
  for (const auto& [p, e] : factorization.factors()) {
    phi = checked_mul(phi, p - 1);
    for (std::uint32_t k = 1; k < e; ++k) phi = checked_mul(phi, p);
  }
  return phi;
}

std::uint64_t euler_phi(std::uint64_t n, const Factorization& factorization) {
  if (n == 0) throw InvalidArgument("phi(0) is undefined");
  if (factorization.value() != n) throw InvalidArgument("factorization does not match n");
  return euler_phi(factorization);
}

std::uint64_t euler_phi(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("phi(0) is undefined");
  return euler_phi(factor_trial(n));
}

QuadraticCharacter::QuadraticCharacter(std::uint64_t p) : p_(p) {
  if (p % 2 == 0 || !is_prime_trial(p)) {
    throw InvalidArgument("Legendre symbol needs an odd prime modulus, got " + std::to_string(p));
  }
}

int QuadraticCharacter::operator()(std::int64_t a) const {
  const auto m = static_cast<__int128>(p_);
  const auto r = static_cast<std::uint64_t>(((static_cast<__int128>(a) % m) + m) % m);
  if (r == 0) return 0;
  return powmod(r, (p_ - 1) / 2, p_) == 1 ? 1 : -1;
}

int legendre_symbol(std::int64_t a, std::uint64_t p) { return QuadraticCharacter(p)(a); }

std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t p,
                                   const Factorization& p_minus_one) {
  if (p < 2) throw InvalidArgument("order modulus must be prime");
  if (a % p == 0) throw InvalidArgument("p divides a; order undefined");
  std::uint64_t h = p - 1;
  for (const auto& [q, e] : p_minus_one.factors()) {
    for (std::uint32_t k = 0; k < e; ++k) {
      if (powmod(a, h / q, p) != 1) break;
      h /= q;
    }
  }
  return h;
}

std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t p) {
  if (p < 2) throw InvalidArgument("order modulus must be prime");
  if (p == 2) {
    if (a % 2 == 0) throw InvalidArgument("p divides a; order undefined");
    return 1;
  }
  return multiplicative_order(a, p, factor_trial(p - 1));
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(std::vector<std::int64_t> ascending) : coeffs_(std::move(ascending)) {
  while (coeffs_.size() > 1 && coeffs_.back() == 0) coeffs_.pop_back();
  if (coeffs_.size() < 2) throw InvalidArgument("polynomial must have degree >= 1");
  if (coeffs_.back() <= 0) throw InvalidArgument("polynomial leading coefficient must be positive");
}

Polynomial Polynomial::from_descending(std::vector<std::int64_t> descending) {
  std::reverse(descending.begin(), descending.end());
  return Polynomial(std::move(descending));
}

std::vector<std::int64_t> Polynomial::descending() const {
  return {coeffs_.rbegin(), coeffs_.rend()};
}

std::uint64_t Polynomial::content() const {
  std::uint64_t g = 0;
  for (const auto c : coeffs_) {
    g = std::gcd(g, static_cast<std::uint64_t>(c < 0 ? -static_cast<__int128>(c) : c));
  }
  return g;
}

std::optional<__int128> Polynomial::try_eval(std::int64_t n) const {
  __int128 acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    if (__builtin_mul_overflow(acc, static_cast<__int128>(n), &acc)) return std::nullopt;
    if (__builtin_add_overflow(acc, static_cast<__int128>(*it), &acc)) return std::nullopt;
  }
  return acc;
}

std::uint64_t Polynomial::eval_mod(std::uint64_t n, std::uint64_t m) const {
  if (m == 0) throw InvalidArgument("modulus must be positive");
  const auto mm = static_cast<__int128>(m);
  const std::uint64_t x = n % m;
  std::uint64_t acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    const auto c = static_cast<std::uint64_t>(((static_cast<__int128>(*it) % mm) + mm) % mm);
    acc = static_cast<std::uint64_t>((static_cast<unsigned __int128>(mulmod(acc, x, m)) + c) % m);
  }
  return acc;
}

std::uint64_t Polynomial::preimage_bound(std::uint64_t y) const {
  // f is strictly increasing on [n_inc, inf): f'(t) >= t^(d-2) (d g_d t - sum i|g_i|).
  const int d = degree();
  __int128 drift = 0;
  for (int i = 1; i < d; ++i) {
    const __int128 c = coeffs_[static_cast<std::size_t>(i)];
    drift += i * (c < 0 ? -c : c);
  }
  const auto n_inc = static_cast<std::uint64_t>(drift / (static_cast<__int128>(d) * leading())) + 1;
  const auto exceeds = [&](std::uint64_t n) {
    if (n > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) return true;
    const auto v = try_eval(static_cast<std::int64_t>(n));
    return !v || *v > static_cast<__int128>(y);
  };
  if (exceeds(n_inc)) return n_inc - 1;
  std::uint64_t lo = n_inc;  // f(lo) <= y
  std::uint64_t step = 1;
  std::uint64_t hi = lo + step;
  while (!exceeds(hi)) {
    lo = hi;
    step *= 2;
    hi = lo + step;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (exceeds(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo;
}

std::string Polynomial::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const std::int64_t c = coeffs_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    const std::uint64_t mag = c < 0 ? static_cast<std::uint64_t>(-static_cast<__int128>(c))
                                    : static_cast<std::uint64_t>(c);
    if (first) {
      if (c < 0) out << '-';
    } else {
      out << (c < 0 ? '-' : '+');
    }
    first = false;
    if (mag != 1 || i == 0) out << mag;
    if (i >= 1) out << 'n';
    if (i >= 2) out << '^' << i;
  }
  return out.str();
}

std::string Polynomial::to_coefficient_list() const {
  std::ostringstream out;
  for (int i = degree(); i >= 0; --i) {
    out << coeffs_[static_cast<std::size_t>(i)];
    if (i > 0) out << ',';
  }
  return out.str();
}

Polynomial Polynomial::parse_coefficient_list(const std::string& text) {
  std::vector<std::int64_t> desc;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    const auto b = token.find_first_not_of(" \t");
    const auto e = token.find_last_not_of(" \t");
    if (b == std::string::npos) throw InvalidArgument("empty polynomial coefficient in '" + text + "'");
    token = token.substr(b, e - b + 1);
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(token, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("bad polynomial coefficient '" + token + "'");
    }
    if (used != token.size()) throw InvalidArgument("bad polynomial coefficient '" + token + "'");
    desc.push_back(v);
  }
  if (desc.empty()) throw InvalidArgument("empty polynomial");
  if (desc.front() <= 0) {
    throw InvalidArgument("polynomial leading coefficient must be positive (gamma_d > 0), got '" +
                          text + "'");
  }
  return from_descending(std::move(desc));
}

std::vector<std::uint64_t> poly_congruence_roots(const Polynomial& f, std::uint64_t m) {
  if (m == 0) throw InvalidArgument("modulus must be positive");
  std::vector<std::uint64_t> roots;
  for (std::uint64_t x = 0; x < m; ++x) {
    if (f.eval_mod(x, m) == 0) roots.push_back(x);
  }
  return roots;
}

KonyaginReport konyagin_ratio(const Polynomial& f, std::uint64_t m) {
  if (m == 0) throw InvalidArgument("modulus must be positive");
  if (std::gcd(f.content(), m) != 1) {
    throw InvalidArgument("root bound requires (gamma_0, ..., gamma_d, m) = 1");
  }
  const auto roots = poly_congruence_roots(f, m).size();
  const double d = f.degree();
  const double shape = d * std::pow(static_cast<double>(m), 1.0 - 1.0 / d);
  return {roots, shape, static_cast<double>(roots) / shape};
}

ProgressionCount prime_count_progression(std::uint64_t x, std::uint64_t k, std::int64_t l,
                                         const PrimeSieve& sieve) {
  if (k == 0) throw InvalidArgument("progression modulus must be >= 1");
  if (x > sieve.limit()) throw SieveExhausted("progression count beyond sieve", x);
  const auto kk = static_cast<__int128>(k);
  const auto residue = static_cast<std::uint64_t>(((static_cast<__int128>(l) % kk) + kk) % kk);
  std::uint64_t count = 0;
  for (const std::uint32_t p : sieve.primes_up_to(x)) {
    if (p % k == residue) ++count;
  }
  double ratio = 0.0;
  if (x >= 2) {
    const double xd = static_cast<double>(x);
    ratio = static_cast<double>(count) * static_cast<double>(euler_phi(k)) * std::log(xd) / xd;
  }
  return {count, ratio};
}

}  // namespace romanoff
