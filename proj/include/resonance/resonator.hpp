#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "resonance/arithmetic.hpp"
#include "resonance/characters.hpp"

namespace resonance {

/// r(p) = 1 - p/X on p <= X (used at sigma = 1).
struct LinearKernel {
  double X = 0;
};

/// r(p) = 1 - (p/X)^sigma on p <= X (used inside the critical strip).
struct SigmaKernel {
  double X = 0;
  double sigma = 0.75;
};

using ResonanceKernel = std::variant<LinearKernel, SigmaKernel>;

double kernel_X(const ResonanceKernel& k) noexcept;

/// r(p); zero for p > floor(X).
double kernel_value(const ResonanceKernel& k, std::uint64_t p);

enum class Theorem { One = 1, Two = 2, Three = 3, Four = 4 };

std::string_view to_string(Theorem t) noexcept;

struct ResonancePair {
  double S1 = 0;
  std::complex<double> S2;
  double ratio = 0;  // Re S2 / S1
  Theorem theorem = Theorem::One;
  std::uint64_t q = 0;
  long ell = 0;
  double X = 0;
  std::uint64_t Y = 0;
  double sigma = 1.0;
};

/// Precomputed resonator data for one (group, kernel). The factor at p = q is
/// skipped since chi(q) = 0 for every character.
class Resonator {
 public:
  Resonator(const CharacterGroup& group, ResonanceKernel kernel);

  const ResonanceKernel& kernel() const noexcept { return kernel_; }
  const CharacterGroup& group() const noexcept { return *group_; }

  /// |R(chi)|^2 = prod_{p <= X} |1 - r(p) chi(p)|^{-2}.
  double squared(const Character& chi) const;

  /// |R(chi_a)|^2 for every index a.
  std::vector<double> squared_all() const;

 private:
  struct ActivePrime {
    std::uint64_t p;
    double r;
  };
  const CharacterGroup* group_;
  ResonanceKernel kernel_;
  std::vector<ActivePrime> active_;
};

double resonator_sq(const Character& chi, const ResonanceKernel& k);

double s1(const CharacterGroup& group, const ResonanceKernel& k);

struct CongruenceOracle {
  double value = 0;       // phi(q) * sum over truncated smooth pairs
  double tail_bound = 0;  // upper bound on the discarded part
};

/// phi(q) * sum_{m = n (mod q), (n,q) = 1, m,n <= N smooth} r(m) r(n).
CongruenceOracle s1_congruence_oracle(const CharacterGroup& group, const ResonanceKernel& k,
                                      std::uint64_t N);

// Per-index tables over the whole group: entry b belongs to chi_b.
std::vector<std::complex<double>> truncated_L_table(const CharacterGroup& group, double sigma,
                                                    std::uint64_t Y, const PrimeTable& primes);
std::vector<std::complex<double>> logderiv_table(const CharacterGroup& group, double sigma,
                                                 std::uint64_t Y, const PrimeTable& primes);
/// sum_{p <= Y} chi_b(p) p^{-sigma}
std::vector<std::complex<double>> prime_sum_table(const CharacterGroup& group, double sigma,
                                                  std::uint64_t Y, const PrimeTable& primes);

/// The quantity S2 weights by |R(chi)|^2, for every character index:
///   theorem 1: prod_j L(1, chi^j; Y)
///   theorem 2: sum_j sum_{p <= Y} chi^j(p) p^{-sigma}
///   theorem 3: prod_j D_j(chi) at sigma = 1
///   theorem 4: prod_j D_j(sigma, chi)
std::vector<std::complex<double>> resonance_weights(Theorem theorem, const CharacterGroup& group,
                                                    long ell, double sigma, std::uint64_t Y,
                                                    const PrimeTable& primes);

/// Per-character terms of S1 and S2: |R(chi_a)|^2 and the S2 weight of chi_a.
struct ResonanceTerms {
  std::vector<double> resonator_sq;
  std::vector<std::complex<double>> weights;
};

/// Validates (ell, X <= Y, theorem-4 range, kernel variant) and tabulates the terms.
ResonanceTerms resonance_terms(Theorem theorem, const CharacterGroup& group, long ell,
                               const ResonanceKernel& k, std::uint64_t Y, const PrimeTable& primes);

/// Compensated reduction of precomputed terms; checks Im S2 is negligible.
ResonancePair summarize(Theorem theorem, const CharacterGroup& group, long ell,
                        const ResonanceKernel& k, std::uint64_t Y, const ResonanceTerms& terms);

/// True when ell < 1/(2 - 2 sigma).
bool theorem4_admissible(long ell, double sigma) noexcept;

ResonancePair s2_thm1(const CharacterGroup& group, long ell, const LinearKernel& k,
                      std::uint64_t Y, const PrimeTable& primes);
ResonancePair s2_thm2(const CharacterGroup& group, long ell, const SigmaKernel& k,
                      std::uint64_t Y, const PrimeTable& primes);
ResonancePair s2_thm3(const CharacterGroup& group, long ell, const LinearKernel& k,
                      std::uint64_t Y, const PrimeTable& primes);
ResonancePair s2_thm4(const CharacterGroup& group, long ell, const SigmaKernel& k,
                      std::uint64_t Y, const PrimeTable& primes);

/// Dispatches on the theorem; the kernel variant must match it.
ResonancePair resonance_pair(Theorem theorem, const CharacterGroup& group, long ell,
                             const ResonanceKernel& k, std::uint64_t Y, const PrimeTable& primes);

// Lower bounds for Re S2 / S1. `skip_prime` (the modulus) drops the factor
// at p = q, matching the resonator.
double bound_thm1(const LinearKernel& k, long ell, std::uint64_t skip_prime = 0);
double bound_thm2(const SigmaKernel& k, long ell, std::uint64_t skip_prime = 0);
double bound_thm3(const LinearKernel& k, long ell, std::uint64_t skip_prime = 0);
double bound_thm4(const SigmaKernel& k, long ell, std::uint64_t skip_prime = 0);
double bound_for(Theorem theorem, const ResonanceKernel& k, long ell, std::uint64_t skip_prime = 0);

/// P_j(X) = sum_{p <= X} (log p / p) r(p)^j
double p_j_linear(const LinearKernel& k, long j, std::uint64_t skip_prime = 0);
/// P_j(sigma, X) = sum_{p <= X} (log p / p^sigma) r(p)^j
double p_j_sigma(const SigmaKernel& k, long j, std::uint64_t skip_prime = 0);

/// log X - gamma - sum_p log p/(p(p-1)) - H_j
double p_j_linear_asymptotic(double X, long j);
/// X^{1-sigma}/(1-sigma) * j! * prod_{m<j} (m + 1/sigma)^{-1}
double p_j_sigma_asymptotic(double X, double sigma, long j);
/// e^{ell gamma} (log X)^ell, the leading scale of the theorem-1 bound.
double thm1_leading_scale(double X, long ell);

}  // namespace resonance
