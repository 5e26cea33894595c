#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numeric>
#include <random>

#include "resonance/characters.hpp"
#include "resonance/error.hpp"

using namespace resonance;
using cd = std::complex<double>;

namespace {

bool near(cd a, cd b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

// chi_a(n) straight from the definition: n = g^k, chi(n) = exp(2 pi i a k / (q-1)).
cd reference_value(std::uint64_t q, std::uint64_t g, std::uint64_t a, std::uint64_t n) {
  if (n % q == 0) return 0.0;
  std::uint64_t x = 1, k = 0;
  while (x != n % q) {
    x = x * g % q;
    ++k;
  }
  const double angle = 2 * M_PI * static_cast<double>((a * k) % (q - 1)) / static_cast<double>(q - 1);
  return std::polar(1.0, angle);
}

}  // namespace

TEST_CASE("evaluation") {
  const CharacterGroup g5(5);
  CHECK(g5.dlog().g == 2);
  CHECK(g5.character(1)(2) == cd(0, 1));
  for (std::uint64_t a = 0; a < 4; ++a) {
    CHECK(g5.character(a)(1) == cd(1, 0));
    CHECK(g5.character(a)(10) == cd(0, 0));
    CHECK(eval(g5.character(a), 0) == cd(0, 0));
  }
  for (std::uint64_t q : {7u, 11u, 13u, 101u}) {
    const CharacterGroup g(q);
    for (std::uint64_t a = 0; a < q - 1; a += 3)
      for (std::uint64_t n = 0; n < 2 * q; ++n)
        CHECK(near(g.character(a)(n), reference_value(q, g.dlog().g, a, n)));
  }
}

TEST_CASE("values are exact roots of unity and conjugate symmetric") {
  const CharacterGroup g(13);
  for (std::uint64_t a = 0; a < 12; ++a) {
    const Character chi = g.character(a);
    for (std::uint64_t n = 1; n < 13; ++n) {
      CHECK(std::abs(std::abs(chi(n)) - 1.0) < 1e-15);
      CHECK(chi.conjugate()(n) == std::conj(chi(n)));
    }
  }
  const Character quad = g.character(6);
  for (std::uint64_t n = 1; n < 13; ++n) CHECK(quad(n).imag() == 0.0);
}

TEST_CASE("complete multiplicativity and periodicity") {
  const CharacterGroup g(31);
  for (std::uint64_t a : {1u, 5u, 15u, 29u}) {
    const Character chi = g.character(a);
    for (std::uint64_t m = 1; m < 40; ++m)
      for (std::uint64_t n = 1; n < 40; n += 3) CHECK(near(chi(m * n), chi(m) * chi(n)));
    CHECK(chi(7) == chi(7 + 31 * 5));
  }
}

TEST_CASE("order, power and conjugate") {
  const CharacterGroup g7(7);
  CHECK(g7.character(2).order() == 3);
  CHECK(order(g7.principal()) == 1);
  CHECK(g7.character(1).order() == 6);
  CHECK(power(g7.character(2), 3).index() == 0);
  CHECK(g7.character(2).power(1) == g7.character(2));
  CHECK(g7.character(5).power(2).index() == 4);
  CHECK(g7.character(5).power(0).is_principal());
  CHECK(g7.character(1).conjugate().index() == 5);
  CHECK(g7.principal().conjugate().is_principal());
  const CharacterGroup g(101);
  for (std::uint64_t a = 0; a < 100; ++a) {
    const Character chi = g.character(a);
    CHECK(chi.order() == 100 / std::gcd<std::uint64_t>(a, 100));
    CHECK(chi.power(chi.order()).is_principal());
    for (std::uint64_t n = 2; n < 6; ++n) CHECK(near(chi.power(3)(n), std::pow(chi(n), 3)));
  }
}

TEST_CASE("index out of range") {
  const CharacterGroup g(7);
  CHECK_THROWS_AS(g.character(6), Error);
  CHECK_THROWS_AS(CharacterGroup(9), Error);
  CHECK_THROWS_AS(CharacterGroup(2), Error);
}

TEST_CASE("eligible characters") {
  const CharacterGroup g7(7);
  CHECK(eligible(g7, 2).members == std::vector<std::uint64_t>{1, 2, 4, 5});
  CHECK(eligible(g7, 6).members.empty());
  CHECK(eligible(CharacterGroup(5), 1).members == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(eligible(g7, 1, {2, 5}).members == std::vector<std::uint64_t>{1, 3, 4});
  CHECK_THROWS_AS(eligible(g7, 0), Error);
  const CharacterGroup g(101);
  for (long ell = 1; ell <= 5; ++ell)
    for (std::uint64_t a : eligible(g, ell).members)
      for (long j = 1; j <= ell; ++j) CHECK_FALSE(g.character(a).power(j).is_principal());
}

TEST_CASE("orthogonality") {
  const CharacterGroup g5(5);
  CHECK(near(orthogonality_sum(g5, 2, 2), 4.0));
  CHECK(near(orthogonality_sum(g5, 2, 3), 0.0));
  CHECK(near(orthogonality_sum(CharacterGroup(7), 9, 2), 6.0));
  CHECK(near(orthogonality_sum(g5, 5, 5), 0.0));
  const CharacterGroup g(23);
  for (std::uint64_t m = 0; m < 23; ++m)
    for (std::uint64_t n = 0; n < 23; ++n) {
      const double expected = (m == n && n != 0) ? 22.0 : 0.0;
      CHECK(near(orthogonality_sum(g, m, n), expected, 1e-11));
    }
}

TEST_CASE("root table") {
  const CharacterGroup g(101);
  CHECK(g.root(0) == cd(1.0, 0.0));
  CHECK(g.root(25) == cd(0.0, 1.0));
  CHECK(g.root(50) == cd(-1.0, 0.0));
  for (std::uint64_t k = 0; k < 100; ++k) {
    CHECK(std::fabs(std::abs(g.root(k)) - 1.0) < 1e-14);
    CHECK(g.root((100 - k) % 100) == std::conj(g.root(k)));
  }
}

TEST_CASE("multiplicativity on random pairs") {
  std::mt19937_64 rng(20261016);
  std::uniform_int_distribution<std::uint64_t> dist(1, 1000000);
  for (std::uint64_t q : {5u, 7u, 11u, 101u}) {
    const CharacterGroup g(q);
    for (int i = 0; i < 500; ++i) {
      const std::uint64_t m = dist(rng), n = dist(rng);
      const Character chi = g.character(i % (q - 1));
      CHECK(near(chi(m * n), chi(m) * chi(n)));
    }
  }
}

TEST_CASE("group structure up to 1000") {
  for (std::uint64_t q : sieve_primes(1000).primes) {
    if (q == 2) continue;
    const CharacterGroup g(q);
    for (std::uint64_t a = 0; a < q - 1; ++a) {
      const Character chi = g.character(a);
      REQUIRE(chi.power(chi.order()).is_principal());
    }
  }
}

TEST_CASE("eligible count by divisor sum") {
  auto totient = [](std::uint64_t n) {
    std::uint64_t r = n;
    for (std::uint64_t p : prime_factors(n)) r = r / p * (p - 1);
    return r;
  };
  for (std::uint64_t q : {7u, 13u, 31u, 101u, 211u, 499u}) {
    const CharacterGroup g(q);
    for (long ell = 1; ell <= 6; ++ell) {
      std::uint64_t expected = 0;
      for (std::uint64_t d = 1; d <= q - 1; ++d)
        if ((q - 1) % d == 0 && d > static_cast<std::uint64_t>(ell)) expected += totient(d);
      CHECK(eligible(g, ell).members.size() == expected);
    }
  }
}
