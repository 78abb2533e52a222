#include "romanoff/elliptic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "romanoff/arith.hpp"
#include "romanoff/errors.hpp"
#include "romanoff/numeric.hpp"

namespace romanoff {

namespace {

constexpr int kCacheVersion = 1;
constexpr std::size_t kPrimesPerBlock = 64;

std::uint64_t reduce(std::int64_t v, std::uint64_t p) {
  const auto m = static_cast<__int128>(p);
  return static_cast<std::uint64_t>(((static_cast<__int128>(v) % m) + m) % m);
}

// Curve order with the square-count table in place of per-x Euler criterion
// evaluations: #{y : y^2 = v} = 1 + (v/p) for every residue v.
std::uint64_t curve_order_unchecked(const CurveParams& curve, std::uint64_t p,
                                    std::vector<std::uint8_t>& roots_of) {
  roots_of.assign(p, 0);
  auto add = [p](std::uint64_t u, std::uint64_t v) {
    const std::uint64_t w = u + v;
    return w >= p ? w - p : w;
  };
  // y^2 and x^3 + Ax + B stepped by finite differences, all kept in [0, p).
  const std::uint64_t two = 2 % p;
  std::uint64_t sq = 0;
  std::uint64_t odd = 1;
  for (std::uint64_t y = 0; y < p; ++y) {
    ++roots_of[sq];
    sq = add(sq, odd);
    odd = add(odd, two);
  }
  const std::uint64_t six = 6 % p;
  std::uint64_t rhs = reduce(curve.b, p);
  std::uint64_t d1 = add(1 % p, reduce(curve.a, p));
  std::uint64_t d2 = six;
  std::uint64_t affine = 0;
  for (std::uint64_t x = 0; x < p; ++x) {
    affine += roots_of[rhs];
    rhs = add(rhs, d1);
    d1 = add(d1, d2);
    d2 = add(d2, six);
  }
  return affine + 1;
}

std::int64_t parse_i64(const std::string& token, const std::string& what) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(token, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("bad " + what + " '" + token + "'");
  }
  if (used != token.size()) throw InvalidArgument("bad " + what + " '" + token + "'");
  return v;
}

}  // namespace

CurveParams CurveParams::make(std::int64_t a, std::int64_t b, std::string id) {
  CurveParams c{a, b, std::move(id)};
  if (c.discriminant() == 0) {
    throw InvalidArgument("singular curve: 4A^3 + 27B^2 = 0 for A=" + std::to_string(a) +
                          ", B=" + std::to_string(b));
  }
  if (c.id.empty()) c.id = std::to_string(a) + "," + std::to_string(b);
  return c;
}

__int128 CurveParams::discriminant() const {
  const __int128 A = a;
  const __int128 B = b;
  return 4 * A * A * A + 27 * B * B;
}

bool CurveParams::is_bad_prime(std::uint64_t p) const {
  if (p == 2) return true;
  return discriminant() % static_cast<__int128>(p) == 0;
}

std::span<const CurveParams> curated_curves() {
  static const std::array<CurveParams, 3> curves = {
      CurveParams{1, 1, "a1b1"},
      CurveParams{-1, 1, "am1b1"},
      CurveParams{2, 3, "a2b3"},
  };
  return curves;
}

CurveParams find_curve(std::string_view id_or_coefficients) {
  for (const auto& c : curated_curves()) {
    if (c.id == id_or_coefficients) return c;
  }
  const std::string text(id_or_coefficients);
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw InvalidArgument("unknown curve id '" + text + "'");
  return CurveParams::make(parse_i64(text.substr(0, comma), "curve coefficient A"),
                           parse_i64(text.substr(comma + 1), "curve coefficient B"));
}

std::uint64_t curve_order(const CurveParams& curve, std::uint64_t p) {
  if (p < 3 || !is_prime_trial(p)) {
    throw InvalidArgument("curve order needs an odd prime, got " + std::to_string(p));
  }
  std::vector<std::uint8_t> scratch;
  return curve_order_unchecked(curve, p, scratch);
}

bool in_hasse_interval(std::uint64_t p, std::uint64_t n) {
  // |n - (p + 1)| < 2 sqrt(p)  <=>  (n - p - 1)^2 < 4p
  const __int128 diff = static_cast<__int128>(n) - static_cast<__int128>(p) - 1;
  return diff * diff < 4 * static_cast<__int128>(p);
}

CurveOrderTable::CurveOrderTable(CurveParams curve, std::uint64_t limit,
                                 std::vector<OrderEntry> entries)
    : curve_(std::move(curve)), limit_(limit), entries_(std::move(entries)) {}

std::span<const OrderEntry> CurveOrderTable::entries_up_to(std::uint64_t x) const {
  if (x > limit_) throw SieveExhausted("curve order table too small", x);
  const auto end = std::upper_bound(entries_.begin(), entries_.end(), x,
                                    [](std::uint64_t v, const OrderEntry& e) { return v < e.prime; });
  return {entries_.data(), static_cast<std::size_t>(end - entries_.begin())};
}

std::optional<std::uint64_t> CurveOrderTable::order(std::uint64_t p) const {
  if (p > limit_) throw SieveExhausted("curve order table too small", p);
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), p,
                                   [](const OrderEntry& e, std::uint64_t v) { return e.prime < v; });
  if (it == entries_.end() || it->prime != p) return std::nullopt;
  return it->order;
}

bool CurveOrderTable::operator==(const CurveOrderTable& other) const {
  if (!curve_.same_curve(other.curve_) || limit_ != other.limit_) return false;
  return std::equal(entries_.begin(), entries_.end(), other.entries_.begin(), other.entries_.end(),
                    [](const OrderEntry& l, const OrderEntry& r) {
                      return l.prime == r.prime && l.order == r.order && l.bad == r.bad;
                    });
}

CurveOrderTable build_order_table(const CurveParams& curve, std::uint64_t limit,
                                  unsigned workers) {
  if (limit < 3) throw InvalidArgument("order table limit must be at least 3");
  const PrimeSieve sieve(limit);
  const auto all = sieve.primes();
  const std::span<const std::uint32_t> odd = all.subspan(1);
  std::vector<OrderEntry> entries(odd.size());
  const std::size_t n_blocks = (odd.size() + kPrimesPerBlock - 1) / kPrimesPerBlock;
  parallel_blocks(n_blocks, workers, [&](std::size_t block) {
    std::vector<std::uint8_t> scratch;
    const std::size_t lo = block * kPrimesPerBlock;
    const std::size_t hi = std::min(odd.size(), lo + kPrimesPerBlock);
    for (std::size_t i = lo; i < hi; ++i) {
      const std::uint32_t p = odd[i];
      const std::uint64_t order = curve_order_unchecked(curve, p, scratch);
      const bool bad = curve.is_bad_prime(p);
      if (!bad && !in_hasse_interval(p, order)) {
        throw ConsistencyError("Hasse bound violated at p=" + std::to_string(p) +
                               " with #E=" + std::to_string(order));
      }
      entries[i] = {p, static_cast<std::uint32_t>(order), bad};
    }
  });
  return CurveOrderTable(curve, limit, std::move(entries));
}

void write_order_table(const CurveOrderTable& table, std::ostream& out) {
  out << "# romanoff order table\n";
  out << table.curve().a << ',' << table.curve().b << ',' << table.limit() << ',' << kCacheVersion
      << '\n';
  for (const auto& e : table.entries()) out << e.prime << ',' << e.order << '\n';
}

CurveOrderTable read_order_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "# romanoff order table") {
    throw InvalidArgument("not an order table cache file");
  }
  if (!std::getline(in, line)) throw InvalidArgument("order table cache missing header");
  std::vector<std::string> fields;
  {
    std::istringstream hs(line);
    std::string f;
    while (std::getline(hs, f, ',')) fields.push_back(f);
  }
  if (fields.size() != 4) throw InvalidArgument("order table header must be A,B,limit,version");
  const auto curve = CurveParams::make(parse_i64(fields[0], "A"), parse_i64(fields[1], "B"));
  const auto limit = static_cast<std::uint64_t>(parse_i64(fields[2], "limit"));
  if (parse_i64(fields[3], "version") != kCacheVersion) {
    throw InvalidArgument("unsupported order table cache version");
  }
  const PrimeSieve sieve(std::max<std::uint64_t>(limit, 3));
  const auto expected = sieve.primes_up_to(limit).subspan(1);
  std::vector<OrderEntry> entries;
  entries.reserve(expected.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidArgument("bad order table row '" + line + "'");
    const auto p = static_cast<std::uint64_t>(parse_i64(line.substr(0, comma), "prime"));
    const auto n = static_cast<std::uint64_t>(parse_i64(line.substr(comma + 1), "order"));
    if (entries.size() >= expected.size() || expected[entries.size()] != p) {
      throw InvalidArgument("order table rows do not match the odd primes up to the limit");
    }
    entries.push_back({static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(n),
                       curve.is_bad_prime(p)});
  }
  if (entries.size() != expected.size()) throw InvalidArgument("truncated order table cache");
  return CurveOrderTable(curve, limit, std::move(entries));
}

std::optional<std::filesystem::path> order_cache_dir_from_env() {
  const char* dir = std::getenv("ROMANOFF_ORDER_CACHE");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return std::filesystem::path(dir);
}

CurveOrderTable load_or_build_order_table(const CurveParams& curve, std::uint64_t limit,
                                          unsigned workers,
                                          const std::optional<std::filesystem::path>& cache_dir) {
  if (!cache_dir) return build_order_table(curve, limit, workers);
  const auto file = *cache_dir / ("orders_A" + std::to_string(curve.a) + "_B" +
                                  std::to_string(curve.b) + "_L" + std::to_string(limit) + ".csv");
  if (std::ifstream in(file); in) {
    try {
      auto cached = read_order_table(in);
      if (cached.curve().same_curve(curve) && cached.limit() == limit) {
        return CurveOrderTable(curve, limit,
                               {cached.entries().begin(), cached.entries().end()});
      }
    } catch (const InvalidArgument&) {
      // unreadable cache, rebuilt below
    }
  }
  auto table = build_order_table(curve, limit, workers);
  std::error_code ec;
  std::filesystem::create_directories(*cache_dir, ec);
  const auto tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp);
    write_order_table(table, out);
  }
  std::filesystem::rename(tmp, file, ec);
  return table;
}

std::uint64_t order_multiplicity(const CurveOrderTable& table, std::uint64_t q) {
  const auto target = table.order(q);
  if (q < 3 || !target) throw InvalidArgument("q must be a tabulated odd prime");
  if (table.curve().is_bad_prime(q)) throw InvalidArgument("q is a bad-reduction prime");
  // Equal orders force overlapping Hasse intervals: |sqrt(p) - sqrt(q)| < 2.
  const double root = std::sqrt(static_cast<double>(q));
  const double lo_real = static_cast<double>(q) - 4.0 * root + 4.0;
  const auto hi = static_cast<std::uint64_t>(std::ceil(static_cast<double>(q) + 4.0 * root + 4.0)) + 1;
  const std::uint64_t lo = lo_real <= 4.0 ? 3 : static_cast<std::uint64_t>(lo_real) - 1;
  if (hi > table.limit()) throw SieveExhausted("multiplicity window exceeds order table", hi);
  const auto entries = table.entries_up_to(hi);
  std::uint64_t count = 0;
  for (const auto& e : entries) {
    if (e.prime < lo && e.prime > 13) continue;
    if (!e.bad && e.order == *target) ++count;
  }
  if (static_cast<unsigned __int128>(count) * count > 81 * static_cast<unsigned __int128>(q)) {
    throw ConsistencyError("order multiplicity exceeds 9 sqrt(q) at q=" + std::to_string(q));
  }
  return count;
}

CongruenceCount order_congruence_count(const CurveOrderTable& table, std::uint64_t x,
                                       std::uint64_t n, std::int64_t alpha) {
  if (n == 0) throw InvalidArgument("congruence modulus must be >= 1");
  const std::uint64_t residue = reduce(alpha, n);
  CongruenceCount out{0, 0, 0.0, 0.0};
  for (const auto& e : table.entries_up_to(x)) {
    if (e.order % n != residue) continue;
    ++out.count_all;
    if (!e.bad) ++out.count_good;
  }
  if (x >= 2) {
    const double xd = static_cast<double>(x);
    const double scale = static_cast<double>(euler_phi(n)) * std::log(xd) / xd;
    out.ratio = static_cast<double>(out.count_all) * scale;
    out.ratio_good = static_cast<double>(out.count_good) * scale;
  }
  return out;
}

}  // namespace romanoff
