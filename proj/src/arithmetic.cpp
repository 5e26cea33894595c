#include "resonance/arithmetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "resonance/error.hpp"
#include "resonance/numerics.hpp"

namespace resonance {

namespace {

// Sieve memory ceiling for prime_constant; beyond this the requested
// tolerance is not reachable with the integral tail bound.
constexpr std::uint64_t kMaxConstantSieve = 400'000'000;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

double constant_tail_bound(std::uint64_t P) {
  const double p = static_cast<double>(P);
  return (std::log(p) + 1.0) / (p - 1.0);
}

}  // namespace

std::size_t PrimeTable::count_upto(double x) const {
  if (x < 2) return 0;
  const double capped = std::min(x, static_cast<double>(limit));
  const auto bound = static_cast<std::uint64_t>(std::floor(capped));
  return static_cast<std::size_t>(std::upper_bound(primes.begin(), primes.end(), bound) -
                                  primes.begin());
}

PrimeTable sieve_primes(std::uint64_t limit) {
  if (limit < 2) {
    throw Error(ErrorKind::EmptyDomain, "sieve_primes: limit must be at least 2");
  }
  // Odd-only sieve: index i stands for 2i+1.
  const std::uint64_t half = (limit + 1) / 2;
  std::vector<bool> composite(half, false);
  for (std::uint64_t i = 1; (2 * i + 1) * (2 * i + 1) <= limit; ++i) {
    if (composite[i]) continue;
    const std::uint64_t p = 2 * i + 1;
    for (std::uint64_t j = p * p / 2; j < half; j += p) composite[j] = true;
  }
  PrimeTable table;
  table.limit = limit;
  table.primes.reserve(static_cast<std::size_t>(
      1.3 * static_cast<double>(limit) / std::max(1.0, std::log(static_cast<double>(limit)))));
  table.primes.push_back(2);
  for (std::uint64_t i = 1; i < half; ++i) {
    if (!composite[i]) table.primes.push_back(2 * i + 1);
  }
  return table;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  // Deterministic Miller-Rabin for 64-bit inputs.
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  std::uint64_t result = 1 % mod;
  base %= mod;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, mod);
    base = mul_mod(base, base, mod);
    exp >>= 1;
  }
  return result;
}

double von_mangoldt(std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::Domain, "von_mangoldt: n must be positive");
  if (n == 1) return 0.0;
  std::uint64_t p = 0;
  for (std::uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    if (n % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) return std::log(static_cast<double>(n));
  while (n % p == 0) n /= p;
  return n == 1 ? std::log(static_cast<double>(p)) : 0.0;
}

std::uint64_t primitive_root(std::uint64_t q) {
  if (q < 3 || !is_prime(q)) {
    throw Error(ErrorKind::Domain, "primitive_root: modulus " + std::to_string(q) +
                                       " is not an odd prime");
  }
  const auto factors = prime_factors(q - 1);
  for (std::uint64_t g = 2; g < q; ++g) {
    const bool generates = std::all_of(factors.begin(), factors.end(), [&](std::uint64_t f) {
      return pow_mod(g, (q - 1) / f, q) != 1;
    });
    if (generates) return g;
  }
  throw Error(ErrorKind::Domain, "primitive_root: none found");  // unreachable for primes
}

DiscreteLogTable build_dlog(std::uint64_t q) {
  if (q > (1ULL << 32)) {
    throw Error(ErrorKind::Domain, "build_dlog: modulus too large for a lookup table");
  }
  DiscreteLogTable table;
  table.q = q;
  table.g = primitive_root(q);
  table.dlog.assign(q, 0);
  std::uint64_t x = 1;
  for (std::uint64_t k = 0; k < q - 1; ++k) {
    table.dlog[x] = static_cast<std::uint32_t>(k);
    x = x * table.g % q;
  }
  return table;
}

SmoothSet enumerate_smooth(double X, std::uint64_t N) {
  SmoothSet set;
  set.smoothness = X;
  set.cap = N;
  if (N == 0) return set;
  std::vector<std::uint64_t> primes;
  if (X >= 2) primes = sieve_primes(static_cast<std::uint64_t>(std::floor(X))).primes;

  // Each member is produced exactly once: extend only by primes at or above
  // the largest prime already used.
  struct Frame {
    std::uint64_t value;
    std::size_t first_prime;
  };
  std::vector<Frame> stack{{1, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    set.members.push_back(f.value);
    for (std::size_t i = f.first_prime; i < primes.size(); ++i) {
      if (f.value > N / primes[i]) break;
      stack.push_back({f.value * primes[i], i});
    }
  }
  std::sort(set.members.begin(), set.members.end());
  return set;
}

double harmonic(long j) {
  if (j <= 0) throw Error(ErrorKind::Domain, "harmonic: j must be positive");
  CompensatedSum s;
  // Smallest terms first.
  for (long k = j; k >= 1; --k) s.add(1.0 / static_cast<double>(k));
  return s.value();
}

double prime_log_sum(std::uint64_t limit) {
  const PrimeTable table = sieve_primes(limit);
  CompensatedSum s;
  for (auto it = table.primes.rbegin(); it != table.primes.rend(); ++it) {
    const double p = static_cast<double>(*it);
    s.add(std::log(p) / (p * (p - 1.0)));
  }
  return s.value();
}

PrimeConstant prime_constant(double tolerance) {
  if (!(tolerance > 0)) {
    throw Error(ErrorKind::Domain, "prime_constant: tolerance must be positive");
  }
  // The constant is ~0.755; asking for less than a few ulps is meaningless.
  if (tolerance < 1e-14) {
    throw Error(ErrorKind::Precision, "prime_constant: tolerance below double precision");
  }
  std::uint64_t P = 1024;
  while (constant_tail_bound(P) >= tolerance / 2) {
    P *= 2;
    if (P > kMaxConstantSieve) {
      throw Error(ErrorKind::Precision,
                  "prime_constant: tolerance requires a sieve beyond the supported limit");
    }
  }
  PrimeConstant out;
  out.sieve_limit = P;
  out.value = prime_log_sum(P);
  out.tail_bound = constant_tail_bound(P);
  return out;
}

double mertens_product(std::uint64_t X) {
  if (X < 2) return 1.0;
  const PrimeTable table = sieve_primes(X);
  CompensatedSum log_sum;
  for (std::uint64_t p : table.primes) {
    const double pd = static_cast<double>(p);
    log_sum.add(-std::log1p(-1.0 / pd));
  }
  return std::exp(log_sum.value());
}

}  // namespace resonance
