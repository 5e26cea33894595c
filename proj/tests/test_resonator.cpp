#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "resonance/error.hpp"
#include "resonance/lfunctions.hpp"
#include "resonance/resonator.hpp"

using namespace resonance;
using cd = std::complex<double>;

namespace {

const PrimeTable& primes() {
  static const PrimeTable table = sieve_primes(100000);
  return table;
}

// Residue-class masses of the resonator coefficients: mass[c] = sum of r(m)
// over smooth m = c (mod q). Each prime contributes the geometric series
// sum_e r^e p^e, whose class sums close up over the order of p mod q.
std::vector<double> class_masses(std::uint64_t q, const std::vector<std::pair<std::uint64_t, double>>& active) {
  std::vector<double> mass(q, 0.0);
  mass[1] = 1.0;
  for (auto [p, r] : active) {
    std::uint64_t ord = 1;
    for (std::uint64_t x = p % q; x != 1; x = x * p % q) ++ord;
    const double period = 1.0 / (1.0 - std::pow(r, static_cast<double>(ord)));
    std::vector<double> next(q, 0.0);
    for (std::uint64_t c = 1; c < q; ++c) {
      if (mass[c] == 0.0) continue;
      std::uint64_t x = c;
      double w = mass[c] * period;
      for (std::uint64_t e = 0; e < ord; ++e) {
        next[x] += w;
        x = x * p % q;
        w *= r;
      }
    }
    mass.swap(next);
  }
  return mass;
}

std::vector<std::pair<std::uint64_t, double>> active_primes(std::uint64_t q, const ResonanceKernel& k) {
  std::vector<std::pair<std::uint64_t, double>> out;
  for (std::uint64_t p : primes().primes) {
    if (p > kernel_X(k)) break;
    if (p != q && kernel_value(k, p) > 0) out.emplace_back(p, kernel_value(k, p));
  }
  return out;
}

// phi(q) * sum over classes with rm * t = rn of mass[rm] mass[rn] w(t), where
// w(t) is the total Dirichlet-coefficient weight of residue t.
double expanded_s2(std::uint64_t q, const ResonanceKernel& k, const std::vector<double>& weight_by_class) {
  const auto mass = class_masses(q, active_primes(q, k));
  double total = 0;
  for (std::uint64_t rm = 1; rm < q; ++rm)
    for (std::uint64_t t = 1; t < q; ++t) total += mass[rm] * mass[rm * t % q] * weight_by_class[t];
  return static_cast<double>(q - 1) * total;
}

// Class weights of prod_{j <= ell} D_j, with D_j = sum Lambda(n) chi^j(n) n^-sigma:
// a term n_1 ... n_ell contributes to class prod n_j^j.
std::vector<double> logderiv_class_weights(std::uint64_t q, long ell, double sigma, std::uint64_t Y) {
  std::vector<double> w(q, 0.0);
  w[1] = 1.0;
  for (long j = 1; j <= ell; ++j) {
    std::vector<double> next(q, 0.0);
    for (std::uint64_t n = 2; n <= Y; ++n) {
      const double lam = von_mangoldt(n);
      if (lam == 0 || n % q == 0) continue;
      const double c = lam * std::pow(static_cast<double>(n), -sigma);
      std::uint64_t cls = 1;
      for (long e = 0; e < j; ++e) cls = cls * (n % q) % q;
      for (std::uint64_t t = 1; t < q; ++t) next[t * cls % q] += w[t] * c;
    }
    w.swap(next);
  }
  return w;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::Validation;
}

}  // namespace

TEST_CASE("kernels") {
  CHECK(kernel_value(LinearKernel{10}, 2) == doctest::Approx(0.8));
  CHECK(kernel_value(LinearKernel{10}, 11) == 0.0);
  CHECK(kernel_value(LinearKernel{10.9}, 11) == 0.0);
  CHECK(kernel_value(SigmaKernel{16, 0.75}, 2) == doctest::Approx(1 - std::pow(0.125, 0.75)));
  CHECK(kernel_value(SigmaKernel{16, 0.75}, 2) == doctest::Approx(0.78978).epsilon(1e-5));
  CHECK(kernel_X(SigmaKernel{16, 0.75}) == 16.0);
}

TEST_CASE("resonator values") {
  const CharacterGroup g5(5);
  const LinearKernel k{3};
  CHECK(resonator_sq(g5.principal(), k) == doctest::Approx(2.25).epsilon(1e-15));
  CHECK(resonator_sq(g5.character(1), k) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(resonator_sq(g5.character(2), k) == doctest::Approx(0.5625).epsilon(1e-15));
  CHECK(resonator_sq(g5.character(1), LinearKernel{1.9}) == 1.0);
  const Resonator res(g5, k);
  const auto all = res.squared_all();
  REQUIRE(all.size() == 4);
  for (std::uint64_t a = 0; a < 4; ++a) CHECK(all[a] == doctest::Approx(res.squared(g5.character(a))));
}

TEST_CASE("S1 by enumeration and congruence oracle") {
  const CharacterGroup g5(5);
  CHECK(s1(g5, LinearKernel{3}) == doctest::Approx(4.6125).epsilon(1e-14));
  CHECK(std::fabs(4 * std::pow(81.0 / 80, 2) * (820.0 / 729) - 4.6125) < 1e-12);
  CHECK(s1(g5, LinearKernel{1.5}) == 4.0);
  CHECK(s1(CharacterGroup(13), SigmaKernel{1.0, 0.8}) == 12.0);

  const auto oracle = s1_congruence_oracle(g5, LinearKernel{3}, 3486784401ULL);
  CHECK(std::fabs(oracle.value - 4.6125) <= oracle.tail_bound + 1e-12);
  CHECK(s1_congruence_oracle(g5, LinearKernel{3}, 1).value == 4.0);

  double previous = 1e300;
  for (std::uint64_t N : {10ULL, 1000ULL, 100000ULL, 10000000ULL}) {
    const auto o = s1_congruence_oracle(g5, LinearKernel{3}, N);
    CHECK(o.tail_bound <= previous);
    previous = o.tail_bound;
  }

  for (std::uint64_t q : {11u, 13u, 29u}) {
    const CharacterGroup g(q);
    for (const ResonanceKernel& k : {ResonanceKernel{LinearKernel{7.5}}, ResonanceKernel{SigmaKernel{6, 0.7}}}) {
      const auto mass = class_masses(q, active_primes(q, k));
      double expected = 0;
      for (double m : mass) expected += m * m;
      expected *= static_cast<double>(q - 1);
      CHECK(s1(g, k) == doctest::Approx(expected).epsilon(1e-11));
    }
  }
}

TEST_CASE("theorem 1 sum") {
  const CharacterGroup g5(5);
  const auto pair = s2_thm1(g5, 1, LinearKernel{3}, 3, primes());
  cd expected = 0.0;
  for (std::uint64_t a = 0; a < 4; ++a) {
    const Character chi = g5.character(a);
    cd L = 1.0;
    for (std::uint64_t p : {2u, 3u}) L /= 1.0 - chi(p) / static_cast<double>(p);
    const double R2 = 1.0 / std::norm(1.0 - chi(2) / 3.0);
    expected += L * R2;
  }
  CHECK(std::abs(pair.S2 - expected) < 1e-13);
  CHECK(pair.S1 == doctest::Approx(4.6125));
  CHECK(pair.ratio == doctest::Approx(expected.real() / 4.6125));

  const CharacterGroup g(11);
  const auto off = s2_thm1(g, 2, LinearKernel{1.5}, 200, primes());
  cd average = 0.0;
  for (std::uint64_t a = 0; a < 10; ++a) average += joint_L_product(g.character(a), 2, 1.0, 200, primes());
  CHECK(std::abs(off.S2 - average) < 1e-12 * std::abs(average));
  CHECK(std::fabs(off.S2.imag()) < 1e-9 * off.S1);
}

TEST_CASE("theorem 2 sum") {
  const CharacterGroup g(13);
  const double sigma = 0.75;
  const auto off = s2_thm2(g, 1, SigmaKernel{1.5, sigma}, 1000, primes());
  double collapse = 0;
  for (std::uint64_t p : primes().primes) {
    if (p > 1000) break;
    if (p % 13 == 1) collapse += std::pow(static_cast<double>(p), -sigma);
  }
  CHECK(off.S2.real() == doctest::Approx(12 * collapse).epsilon(1e-12));
  CHECK(off.S2.imag() == 0.0);

  const CharacterGroup g5(5);
  const SigmaKernel k{3, sigma};
  const auto pair = s2_thm2(g5, 2, k, 100, primes());
  double expected = 0;
  for (std::uint64_t a = 0; a < 4; ++a) {
    const Character chi = g5.character(a);
    cd w = 0.0;
    for (long j = 1; j <= 2; ++j)
      for (std::uint64_t p : primes().primes) {
        if (p > 100) break;
        w += chi.power(j)(p) * std::pow(static_cast<double>(p), -sigma);
      }
    expected += w.real() * resonator_sq(chi, k);
  }
  CHECK(pair.S2.real() == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("theorem 3 sum") {
  const CharacterGroup g(7);
  const auto off = s2_thm3(g, 1, LinearKernel{1.5}, 1000, primes());
  double collapse = 0;
  for (std::uint64_t n = 2; n <= 1000; ++n)
    if (n % 7 == 1) collapse += von_mangoldt(n) / static_cast<double>(n);
  CHECK(off.S2.real() == doctest::Approx(6 * collapse).epsilon(1e-12));

  const LinearKernel k{5};
  const auto pair = s2_thm3(g, 2, k, 50, primes());
  const double expected = expanded_s2(7, k, logderiv_class_weights(7, 2, 1.0, 50));
  CHECK(pair.S2.real() == doctest::Approx(expected).epsilon(1e-11));
  CHECK(std::fabs(pair.S2.imag()) < 1e-9 * std::fabs(pair.S2.real()));
}

TEST_CASE("theorem 4 sum") {
  CHECK(theorem4_admissible(4, 0.9));
  CHECK_FALSE(theorem4_admissible(5, 0.9));
  CHECK_FALSE(theorem4_admissible(2, 0.75));
  CHECK(theorem4_admissible(1, 0.55));

  const CharacterGroup g(11);
  const SigmaKernel k{5, 0.9};
  const auto pair = s2_thm4(g, 2, k, 100, primes());
  const double expected = expanded_s2(11, k, logderiv_class_weights(11, 2, 0.9, 100));
  CHECK(pair.S2.real() == doctest::Approx(expected).epsilon(1e-11));

  const auto one = s2_thm4(g, 1, SigmaKernel{5, 0.8}, 100, primes());
  const double single = expanded_s2(11, SigmaKernel{5, 0.8}, logderiv_class_weights(11, 1, 0.8, 100));
  CHECK(one.S2.real() == doctest::Approx(single).epsilon(1e-11));
}

TEST_CASE("resonance sum preconditions") {
  const CharacterGroup g(11);
  CHECK(kind_of([&] { s2_thm1(g, 1, LinearKernel{50}, 20, primes()); }) == ErrorKind::Precondition);
  CHECK(kind_of([&] { s2_thm1(g, 0, LinearKernel{5}, 20, primes()); }) == ErrorKind::Domain);
  CHECK(kind_of([&] { s2_thm4(g, 2, SigmaKernel{5, 0.75}, 100, primes()); }) == ErrorKind::Precondition);
  CHECK_THROWS_AS(resonance_pair(Theorem::Two, g, 1, LinearKernel{5}, 100, primes()), Error);
  const PrimeTable small = sieve_primes(50);
  CHECK_THROWS_AS(s2_thm1(g, 1, LinearKernel{5}, 100, small), Error);
}

TEST_CASE("bounds") {
  CHECK(bound_thm1(LinearKernel{3}, 1) == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(bound_thm1(LinearKernel{3}, 2) == doctest::Approx(1.2 * 18.0 / 17.0).epsilon(1e-15));
  CHECK(bound_thm1(LinearKernel{3}, 2) == doctest::Approx(1.270588).epsilon(1e-6));
  CHECK(bound_thm1(LinearKernel{1.5}, 3) == 1.0);
  CHECK(bound_thm2(SigmaKernel{1.5, 0.75}, 2) == 0.0);

  double six = 0;
  for (double p : {2, 3, 5, 7, 11, 13}) six += (1 - std::pow(p / 16, 0.75)) / std::pow(p, 0.75);
  CHECK(bound_thm2(SigmaKernel{16, 0.75}, 1) == doctest::Approx(six).epsilon(1e-14));

  CHECK(p_j_linear(LinearKernel{3}, 1) == doctest::Approx(std::log(2.0) / 6).epsilon(1e-15));
  CHECK(p_j_linear(LinearKernel{3}, 1) == doctest::Approx(0.11552).epsilon(1e-4));
  CHECK(bound_thm3(LinearKernel{3}, 1) == doctest::Approx(0.11552).epsilon(1e-4));
  const double p1 = std::log(2.0) / std::pow(2.0, 0.75) * (1 - std::pow(2.0 / 3, 0.75));
  CHECK(p_j_sigma(SigmaKernel{3, 0.75}, 1) == doctest::Approx(p1).epsilon(1e-14));
  CHECK(p1 == doctest::Approx(0.10802).epsilon(1e-4));

  for (long j = 1; j < 6; ++j) {
    CHECK(p_j_linear(LinearKernel{200}, j) >= p_j_linear(LinearKernel{200}, j + 1));
    CHECK(p_j_sigma(SigmaKernel{200, 0.7}, j) >= p_j_sigma(SigmaKernel{200, 0.7}, j + 1));
    CHECK(p_j_linear(LinearKernel{200}, j + 1) >= 0);
  }
  CHECK(bound_thm3(LinearKernel{200}, 3) ==
        doctest::Approx(p_j_linear(LinearKernel{200}, 1) * p_j_linear(LinearKernel{200}, 2) *
                        p_j_linear(LinearKernel{200}, 3)));

  // Skipping p = q removes exactly one factor.
  CHECK(bound_thm1(LinearKernel{10}, 1, 7) == doctest::Approx(bound_thm1(LinearKernel{10}, 1) * (1 - 0.3 / 7)));
  CHECK(bound_for(Theorem::Four, SigmaKernel{30, 0.9}, 2, 11) == bound_thm4(SigmaKernel{30, 0.9}, 2, 11));
}

TEST_CASE("asymptotic forms") {
  const double X = 1e6;
  CHECK(std::fabs(p_j_linear(LinearKernel{X}, 1) - p_j_linear_asymptotic(X, 1)) < 0.05);
  for (long j = 1; j <= 3; ++j) {
    const double ratio = p_j_sigma(SigmaKernel{1e7, 0.75}, j) / p_j_sigma_asymptotic(1e7, 0.75, j);
    CHECK(ratio > 0.9);
    CHECK(ratio < 1.1);
  }
  CHECK(p_j_sigma_asymptotic(16, 0.75, 1) == doctest::Approx(std::pow(16, 0.25) / 0.25 * 0.75));
  CHECK(thm1_leading_scale(100, 2) == doctest::Approx(std::exp(2 * 0.5772156649015329) * std::pow(std::log(100), 2)));
}

TEST_CASE("inequality holds on small moduli") {
  for (std::uint64_t q : {5u, 7u, 11u, 13u, 31u}) {
    const CharacterGroup g(q);
    for (long ell = 1; ell <= 3; ++ell) {
      for (double X : {3.0, 8.0}) {
        const auto p1 = s2_thm1(g, ell, LinearKernel{X}, 300, primes());
        CHECK(p1.ratio >= bound_thm1(LinearKernel{X}, ell, q) * (1 - 1e-12));
        const auto p3 = s2_thm3(g, ell, LinearKernel{X}, 300, primes());
        CHECK(p3.ratio >= bound_thm3(LinearKernel{X}, ell, q) * (1 - 1e-12));
        const auto p2 = s2_thm2(g, ell, SigmaKernel{X, 0.75}, 300, primes());
        CHECK(p2.ratio >= bound_thm2(SigmaKernel{X, 0.75}, ell, q) * (1 - 1e-12));
      }
    }
  }
}
