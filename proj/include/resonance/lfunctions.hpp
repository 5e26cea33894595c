#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "resonance/arithmetic.hpp"
#include "resonance/characters.hpp"

namespace resonance {

enum class LMethod { TruncatedEuler, DirichletPoly, HurwitzOracle, DigammaOracle };

std::string_view to_string(LMethod method) noexcept;

/// A complex L-value (or log-derivative value) tagged with how it was computed.
/// `parameter` is the truncation point Y for truncated methods, the
/// Euler-Maclaurin order or finite-difference step for the oracles.
struct LValue {
  std::complex<double> value;
  LMethod method = LMethod::TruncatedEuler;
  double sigma = 1.0;
  double parameter = 0.0;
};

/// prod_{p <= Y, p != q} (1 - chi(p) p^{-sigma})^{-1}, evaluated as the
/// exponential of a compensated sum of principal logarithms.
/// `primes` must cover Y (primes.limit >= Y) unless Y < 2.
LValue truncated_L(const Character& chi, double sigma, std::uint64_t Y, const PrimeTable& primes);
LValue truncated_L(const Character& chi, double sigma, std::uint64_t Y);

/// truncated_L at each Y of an ascending grid, in one pass over the primes.
std::vector<LValue> truncated_L_grid(const Character& chi, double sigma,
                                     std::span<const std::uint64_t> Ys, const PrimeTable& primes);

/// sum_{n <= Y} Lambda(n) chi(n) n^{-sigma}, the Dirichlet polynomial
/// approximating -L'/L(sigma, chi).
LValue logderiv_poly(const Character& chi, double sigma, std::uint64_t Y, const PrimeTable& primes);
LValue logderiv_poly(const Character& chi, double sigma, std::uint64_t Y);

std::complex<double> joint_L_product(const Character& chi, long ell, double sigma,
                                     std::uint64_t Y, const PrimeTable& primes);
std::complex<double> joint_logderiv_product(const Character& chi, long ell, double sigma,
                                            std::uint64_t Y, const PrimeTable& primes);

/// Hurwitz zeta(s, a) by Euler-Maclaurin summation. `order` is the number of
/// Bernoulli correction terms (at most 20); the direct-sum length is tied to it.
double hurwitz_zeta(double s, double a, int order = 12);

/// zeta(s, a) - 1/(s - 1); analytic through s = 1 where it equals -psi(a).
double hurwitz_zeta_regular_part(double s, double a, int order = 12);

double digamma(double x);

/// L(sigma, chi) from finite sums of Hurwitz zeta / digamma values.
LValue exact_L(const Character& chi, double sigma);

/// L'/L(sigma, chi) by a Richardson-extrapolated central difference of log L.
LValue exact_logderiv(const Character& chi, double sigma, double step = 1e-4);

}  // namespace resonance
