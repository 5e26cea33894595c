#pragma once

#include <cstdint>
#include <vector>

namespace resonance {

/// Primes up to `limit`, ascending.
struct PrimeTable {
  std::uint64_t limit = 0;
  std::vector<std::uint64_t> primes;

  /// Number of primes <= x (x may be below or above limit; clamped to limit).
  std::size_t count_upto(double x) const;
};

/// (Z/qZ)^x for prime q, represented through a primitive root.
struct DiscreteLogTable {
  std::uint64_t q = 0;
  std::uint64_t g = 0;
  // dlog[a] for a in 1..q-1; dlog[0] is unused and holds 0.
  std::vector<std::uint32_t> dlog;

  std::uint32_t operator()(std::uint64_t a) const { return dlog[a % q]; }
};

struct SmoothSet {
  double smoothness = 0;
  std::uint64_t cap = 0;
  std::vector<std::uint64_t> members;
};

PrimeTable sieve_primes(std::uint64_t limit);

bool is_prime(std::uint64_t n);

/// Distinct prime factors of n, ascending.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);

/// Lambda(n): log p when n is a power of the prime p, zero otherwise.
double von_mangoldt(std::uint64_t n);

/// Smallest primitive root of the odd prime q.
std::uint64_t primitive_root(std::uint64_t q);

DiscreteLogTable build_dlog(std::uint64_t q);

/// X-smooth integers <= N, generated by depth-first search over prime
/// exponents. The bound X is real; primes are admitted when p <= floor(X).
SmoothSet enumerate_smooth(double X, std::uint64_t N);

double harmonic(long j);

struct PrimeConstant {
  double value = 0;         // partial sum over p <= sieve_limit
  std::uint64_t sieve_limit = 0;
  double tail_bound = 0;    // upper bound on the omitted p > sieve_limit part
};

/// Partial sum of log p / (p (p - 1)) over primes p <= limit.
double prime_log_sum(std::uint64_t limit);

/// sum_p log p / (p (p - 1)) to within `tolerance`.
PrimeConstant prime_constant(double tolerance = 1e-6);

/// prod_{p <= X} p / (p - 1).
double mertens_product(std::uint64_t X);

}  // namespace resonance
