#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>

#include "resonance/constants.hpp"
#include "resonance/error.hpp"
#include "resonance/experiments.hpp"
#include "resonance/lfunctions.hpp"

using namespace resonance;

namespace {

const PrimeTable& primes() {
  static const PrimeTable table = sieve_primes(1000);
  return table;
}

ExperimentConfig make(Theorem t, std::uint64_t q, long ell, double X, std::uint64_t Y = 1000,
                      std::optional<double> sigma = std::nullopt) {
  ExperimentConfig c;
  c.theorem = t;
  c.q = q;
  c.ell = ell;
  c.X = X;
  c.Y = Y;
  c.sigma = sigma;
  return c;
}

std::string validation_message(const ExperimentConfig& c) {
  try {
    validate(c);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("validation") {
  CHECK(validation_message(make(Theorem::One, 101, 1, 20)).empty());
  CHECK(validation_message(make(Theorem::One, 101, 1, 20, 10)).find("X <= Y") != std::string::npos);
  CHECK(validation_message(make(Theorem::Four, 101, 2, 20, 1000, 0.75)).find("1 <= ell < (2 - 2 sigma)^{-1}") !=
        std::string::npos);
  CHECK_FALSE(validation_message(make(Theorem::Two, 101, 1, 20)).empty());
  CHECK_FALSE(validation_message(make(Theorem::One, 101, 1, 20, 1000, 0.8)).empty());
  CHECK_FALSE(validation_message(make(Theorem::One, 100, 1, 20)).empty());
  CHECK_FALSE(validation_message(make(Theorem::One, 2, 1, 1, 10)).empty());
  CHECK_FALSE(validation_message(make(Theorem::One, 101, 0, 20)).empty());
  CHECK_FALSE(validation_message(make(Theorem::Two, 101, 1, 20, 1000, 1.0)).empty());
  auto bad = make(Theorem::One, 11, 1, 5);
  bad.excluded = {10};
  CHECK_FALSE(validation_message(bad).empty());
  CHECK(validation_message(make(Theorem::Four, 499, 2, 20, 1000, 0.9)).empty());
}

TEST_CASE("default X") {
  const std::uint64_t q = 1000003;
  const double lq = std::log(static_cast<double>(q));
  const auto one = default_X(Theorem::One, q, 0.01);
  CHECK(one.X == doctest::Approx(lq * std::log(lq) / (1.01 * std::log(4.0))).epsilon(1e-14));
  CHECK(one.strict);
  const auto three = default_X(Theorem::Three, q, 0.01);
  CHECK(three.X / one.X == doctest::Approx(0.99 * 1.01).epsilon(1e-14));
  const auto edge = default_X(Theorem::One, q, 0.0);
  CHECK_FALSE(edge.strict);
  CHECK(edge.parameter == doctest::Approx(std::log(4.0)));
  const auto two = default_X(Theorem::Two, q, 0.01, 0.75);
  CHECK(two.parameter == doctest::Approx(kappa_range(0.75).upper * 0.99));
  const auto four = default_X(Theorem::Four, q, 0.01, 0.9);
  CHECK(four.parameter == doctest::Approx(eta_range(0.9).upper * 0.99));
  CHECK_THROWS_AS(default_X(Theorem::One, 13, 0.01), Error);
  CHECK_THROWS_AS(default_X(Theorem::Two, q, 0.01), Error);
  CHECK(X_from_parameter(Theorem::Two, q, 0.1) == doctest::Approx(0.1 * lq * std::log(lq)));
}

TEST_CASE("extremal search") {
  const CharacterGroup g5(5);
  const auto values = functional_values(Functional::LAbsProduct, g5, 1, 1.0, 3, primes());
  REQUIRE(values.size() == 4);
  std::uint64_t best = 1;
  for (std::uint64_t a : {1u, 2u, 3u}) {
    const double direct = std::abs(truncated_L(g5.character(a), 1.0, 3, primes()).value);
    CHECK(values[a] == doctest::Approx(direct).epsilon(1e-14));
    if (direct > std::abs(truncated_L(g5.character(best), 1.0, 3, primes()).value) * (1 + 1e-12)) best = a;
  }
  const auto result = extremal_search(g5, 1, Functional::LAbsProduct, 1.0, 3, primes());
  CHECK(result.index == best);
  // chi and its conjugate tie; the smaller index is reported, both are listed.
  CHECK(result.near_max.size() >= 1);
  CHECK(result.near_max.front() == result.index);

  std::vector<double> scaled = values;
  for (double& v : scaled) v *= 7.5;
  CHECK(extremal_search(scaled, eligible(g5, 1)).index == result.index);

  const CharacterGroup g(101);
  const auto all = functional_values(Functional::LogDerivRe, g, 2, 0.9, 1000, primes());
  const auto set = eligible(g, 2);
  const auto r = extremal_search(all, set);
  for (std::uint64_t a : set.members) CHECK(all[a] <= r.value);
  CHECK_THROWS_AS(extremal_search(CharacterGroup(7), 6, Functional::LAbsProduct, 1.0, 10, primes()), Error);
}

TEST_CASE("run_theorem examples") {
  const auto r1 = run_theorem(make(Theorem::One, 101, 1, 20), primes());
  CHECK(r1.margin >= 0);
  CHECK(r1.certificate <= r1.certificate_max);
  CHECK(r1.passed());
  CHECK(r1.failure.empty());

  const auto r4 = run_theorem(make(Theorem::Four, 499, 2, 20, 1000, 0.9), primes());
  CHECK(r4.margin >= 0);
  CHECK(r4.passed());
  CHECK(r4.abs_logderiv_max.has_value());
  CHECK(*r4.abs_logderiv_max >= r4.max_value);
}

TEST_CASE("hand-checkable run at q = 7") {
  const auto r = run_theorem(make(Theorem::One, 7, 1, 3, 3), primes());
  const CharacterGroup g(7);
  double S1 = 0, S2 = 0, excluded = 0;
  for (std::uint64_t a = 0; a < 6; ++a) {
    const Character chi = g.character(a);
    const double R2 = 1.0 / std::norm(1.0 - chi(2) / 3.0);
    const auto L = 1.0 / ((1.0 - chi(2) / 2.0) * (1.0 - chi(3) / 3.0));
    S1 += R2;
    S2 += (L * R2).real();
    if (a == 0) excluded = (L * R2).real();
  }
  CHECK(r.S1 == doctest::Approx(S1).epsilon(1e-14));
  CHECK(r.S2.real() == doctest::Approx(S2).epsilon(1e-14));
  CHECK(r.bound == doctest::Approx(1.2).epsilon(1e-14));
  CHECK(r.excluded_contribution == doctest::Approx(excluded).epsilon(1e-14));
  CHECK(r.certificate == doctest::Approx((S2 - excluded) / S1).epsilon(1e-12));
  CHECK(r.passed());
}

TEST_CASE("excluded characters enter the certificate") {
  auto c = make(Theorem::Three, 101, 1, 20);
  const auto base = run_theorem(c, primes());
  c.excluded = {base.argmax_index};
  const auto without = run_theorem(c, primes());
  CHECK(without.argmax_index != base.argmax_index);
  CHECK(without.max_value <= base.max_value);
  CHECK(without.excluded_contribution != base.excluded_contribution);
  CHECK(without.certificate_ok);
}

TEST_CASE("determinism") {
  const auto c = make(Theorem::Two, 211, 2, 30, 1000, 0.75);
  const auto a = run_theorem(c, primes());
  const auto b = run_theorem(c, primes());
  CHECK(a.S1 == b.S1);
  CHECK(a.S2 == b.S2);
  CHECK(a.certificate == b.certificate);
  CHECK(a.argmax_index == b.argmax_index);
}

TEST_CASE("oracle gap") {
  auto c = make(Theorem::One, 11, 1, 5, 1000);
  c.oracle = true;
  const auto r = run_theorem(c, primes());
  REQUIRE(r.oracle_gap.has_value());
  CHECK(*r.oracle_gap < 0.1);
}

TEST_CASE("sweep") {
  SweepOptions o;
  o.theorem = Theorem::One;
  o.q_min = 100;
  o.q_max = 200;
  o.jobs = 2;
  const auto s = sweep(o);
  CHECK(s.rows.size() == 21);
  CHECK(s.all_passed());
  for (std::size_t i = 1; i < s.rows.size(); ++i) CHECK(s.rows[i - 1].config.q < s.rows[i].config.q);
  REQUIRE(s.buckets.size() == 1);
  CHECK(s.buckets[0].lower == 100);
  CHECK(s.buckets[0].count == 21);
  for (std::size_t i = 0; i < s.rows.size(); ++i)
    CHECK(s.normalized[i] ==
          doctest::Approx(s.rows[i].ratio / thm1_leading_scale(s.rows[i].config.X, 1)));

  o.jobs = 1;
  const auto serial = sweep(o);
  for (std::size_t i = 0; i < s.rows.size(); ++i) CHECK(serial.rows[i].S2 == s.rows[i].S2);

  o.q_min = 24;
  o.q_max = 28;
  CHECK_THROWS_AS(sweep(o), Error);
}

TEST_CASE("oracle comparison") {
  const auto t = oracle_comparison(5, 1.0, {1000, 100000});
  CHECK(t.rows.size() == 3);
  for (const auto& row : t.rows) {
    CHECK(row.index != 0);
    CHECK(row.rel_errors[1] < 1e-2);
  }
  CHECK(t.max_error[1] <= t.max_error[0]);
  CHECK_THROWS_AS(oracle_comparison(503, 1.0, {1000}), Error);
  CHECK_THROWS_AS(oracle_comparison(5, 1.0, {}), Error);
}

TEST_CASE("certificate at a tiny modulus is reported, not thrown") {
  // Every eligible weight is negative at q = 5, so dividing the eligible part
  // by the full S1 lands above the maximum; the weighted mean still does not.
  const auto r = run_theorem(make(Theorem::Three, 5, 1, 20), primes());
  CHECK(r.inequality_ok);
  CHECK(r.certificate_max < 0);
  CHECK_FALSE(r.certificate_ok);
  CHECK_FALSE(r.passed());
  CHECK(r.failure.find("certificate violated") != std::string::npos);
  CHECK(r.certificate_max >= r.eligible_mean);

  const CharacterGroup g(5);
  double weighted = 0, mass = 0;
  for (std::uint64_t a : eligible(g, 1).members) {
    const double R2 = resonator_sq(g.character(a), LinearKernel{20});
    weighted += logderiv_poly(g.character(a), 1.0, 1000, primes()).value.real() * R2;
    mass += R2;
  }
  CHECK(r.eligible_mean == doctest::Approx(weighted / mass).epsilon(1e-12));
}
