#include "resonance/lfunctions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "resonance/error.hpp"
#include "resonance/numerics.hpp"

namespace resonance {

namespace {

// B_{2j} / (2j)! for j = 1..20.
constexpr std::array<double, 20> kBernoulliOverFactorial = {
    8.3333333333333333e-02,  -1.3888888888888889e-03, 3.3068783068783069e-05,
    -8.2671957671957672e-07, 2.0876756987868099e-08,  -5.2841901386874932e-10,
    1.3382536530684679e-11,  -3.3896802963225829e-13, 8.5860620562778446e-15,
    -2.1748686985580619e-16, 5.5090028283602295e-18,  -1.3954464685812523e-19,
    3.5347070396294675e-21,  -8.9535174270375469e-23, 2.2679524523376830e-24,
    -5.7447906688722024e-26, 1.4551724756148649e-27,  -3.6859949406653102e-29,
    9.3367342570950447e-31,  -2.3650224157006299e-32};

constexpr double kNearZero = 1e-8;
constexpr std::uint64_t kMaxTruncation = 1'000'000'000;

void check_sigma(double sigma, const char* who) {
  if (!(sigma > 0.5 && sigma <= 1.0)) {
    throw Error(ErrorKind::Domain, std::string(who) + ": sigma must lie in (1/2, 1]");
  }
}

void check_table(const PrimeTable& primes, std::uint64_t Y, const char* who) {
  if (Y >= 2 && primes.limit < Y) {
    throw Error(ErrorKind::Precondition,
                std::string(who) + ": prime table does not reach Y = " + std::to_string(Y));
  }
  if (Y > kMaxTruncation) {
    throw Error(ErrorKind::Precision, std::string(who) + ": truncation point too large");
  }
}

// -log(1 - z) for |z| < 1.
std::complex<double> neg_log1m(std::complex<double> z) { return -std::log(1.0 - z); }

double pow_neg(double p, double sigma) { return std::exp(-sigma * std::log(p)); }

// Exact oracle without the sigma range check; s == 1 takes the digamma route.
std::complex<double> oracle_value(const Character& chi, double s) {
  const std::uint64_t q = chi.group().modulus();
  const double qd = static_cast<double>(q);
  ComplexCompensatedSum sum;
  if (s == 1.0) {
    for (std::uint64_t a = 1; a < q; ++a) {
      sum.add(chi(a) * digamma(static_cast<double>(a) / qd));
    }
    return -sum.value() / qd;
  }
  // The pole part 1/(s-1) cancels against sum_a chi(a) = 0.
  for (std::uint64_t a = 1; a < q; ++a) {
    sum.add(chi(a) * hurwitz_zeta_regular_part(s, static_cast<double>(a) / qd));
  }
  return sum.value() * std::exp(-s * std::log(qd));
}

}  // namespace

std::string_view to_string(LMethod method) noexcept {
  switch (method) {
    case LMethod::TruncatedEuler: return "truncated-euler";
    case LMethod::DirichletPoly: return "dirichlet-poly";
    case LMethod::HurwitzOracle: return "hurwitz-oracle";
    case LMethod::DigammaOracle: return "digamma-oracle";
  }
  return "unknown";
}

LValue truncated_L(const Character& chi, double sigma, std::uint64_t Y, const PrimeTable& primes) {
  const std::uint64_t grid[] = {Y};
  return truncated_L_grid(chi, sigma, grid, primes).front();
}

LValue truncated_L(const Character& chi, double sigma, std::uint64_t Y) {
  if (Y < 2) return {1.0, LMethod::TruncatedEuler, sigma, static_cast<double>(Y)};
  return truncated_L(chi, sigma, Y, sieve_primes(Y));
}

std::vector<LValue> truncated_L_grid(const Character& chi, double sigma,
                                     std::span<const std::uint64_t> Ys, const PrimeTable& primes) {
  check_sigma(sigma, "truncated_L");
  if (!std::is_sorted(Ys.begin(), Ys.end())) {
    throw Error(ErrorKind::Precondition, "truncated_L_grid: Y grid must be ascending");
  }
  std::vector<LValue> out;
  out.reserve(Ys.size());
  if (Ys.empty()) return out;
  check_table(primes, Ys.back(), "truncated_L");

  const std::uint64_t q = chi.group().modulus();
  ComplexCompensatedSum log_sum;
  auto p_it = primes.primes.begin();
  for (std::uint64_t Y : Ys) {
    for (; p_it != primes.primes.end() && *p_it <= Y; ++p_it) {
      const std::uint64_t p = *p_it;
      if (p == q) continue;
      log_sum.add(neg_log1m(chi(p) * pow_neg(static_cast<double>(p), sigma)));
    }
    out.push_back({std::exp(log_sum.value()), LMethod::TruncatedEuler, sigma,
                   static_cast<double>(Y)});
  }
  return out;
}

LValue logderiv_poly(const Character& chi, double sigma, std::uint64_t Y, const PrimeTable& primes) {
  check_sigma(sigma, "logderiv_poly");
  check_table(primes, Y, "logderiv_poly");
  const std::uint64_t q = chi.group().modulus();
  const std::uint64_t m = chi.group().order();
  ComplexCompensatedSum sum;
  for (std::uint64_t p : primes.primes) {
    if (p > Y) break;
    if (p == q) continue;
    const double log_p = std::log(static_cast<double>(p));
    const std::uint64_t phase = chi.phase(p);
    std::uint64_t pk = p;
    for (std::uint64_t k = 1;; ++k) {
      const auto idx = static_cast<std::uint64_t>(static_cast<unsigned __int128>(phase) * k % m);
      sum.add(chi.group().root(idx) * (log_p * std::exp(-sigma * static_cast<double>(k) * log_p)));
      if (pk > Y / p) break;
      pk *= p;
    }
  }
  return {sum.value(), LMethod::DirichletPoly, sigma, static_cast<double>(Y)};
}

LValue logderiv_poly(const Character& chi, double sigma, std::uint64_t Y) {
  if (Y < 2) return {0.0, LMethod::DirichletPoly, sigma, static_cast<double>(Y)};
  return logderiv_poly(chi, sigma, Y, sieve_primes(Y));
}

std::complex<double> joint_L_product(const Character& chi, long ell, double sigma,
                                     std::uint64_t Y, const PrimeTable& primes) {
  if (ell < 1) throw Error(ErrorKind::Domain, "joint_L_product: ell must be at least 1");
  std::complex<double> product = 1.0;
  for (long j = 1; j <= ell; ++j) {
    product *= truncated_L(chi.power(static_cast<std::uint64_t>(j)), sigma, Y, primes).value;
  }
  return product;
}

std::complex<double> joint_logderiv_product(const Character& chi, long ell, double sigma,
                                            std::uint64_t Y, const PrimeTable& primes) {
  if (ell < 1) throw Error(ErrorKind::Domain, "joint_logderiv_product: ell must be at least 1");
  std::complex<double> product = 1.0;
  for (long j = 1; j <= ell; ++j) {
    product *= logderiv_poly(chi.power(static_cast<std::uint64_t>(j)), sigma, Y, primes).value;
  }
  return product;
}

double hurwitz_zeta_regular_part(double s, double a, int order) {
  if (!(s > 0.0)) throw Error(ErrorKind::Domain, "hurwitz_zeta: s must be positive");
  if (!(a > 0.0 && a <= 1.0)) throw Error(ErrorKind::Domain, "hurwitz_zeta: a must lie in (0, 1]");
  if (order < 1 || order > static_cast<int>(kBernoulliOverFactorial.size())) {
    throw Error(ErrorKind::Domain, "hurwitz_zeta: order must lie in [1, 20]");
  }
  const int n_direct = std::max(10, 2 * order);
  CompensatedSum sum;
  for (int k = n_direct - 1; k >= 0; --k) {
    sum.add(std::exp(-s * std::log(k + a)));
  }
  const double w = n_direct + a;
  const double log_w = std::log(w);
  // (w^{1-s} - 1)/(s - 1), continuous at s = 1.
  const double t = 1.0 - s;
  sum.add(t == 0.0 ? -log_w : std::expm1(t * log_w) / (-t));
  sum.add(0.5 * std::exp(-s * log_w));
  // Bernoulli corrections: B_{2j}/(2j)! * s(s+1)...(s+2j-2) * w^{-s-2j+1}.
  double rising = s;
  double w_pow = std::exp(-(s + 1.0) * log_w);
  const double inv_w2 = 1.0 / (w * w);
  for (int j = 1; j <= order; ++j) {
    sum.add(kBernoulliOverFactorial[j - 1] * rising * w_pow);
    rising *= (s + 2 * j - 1) * (s + 2 * j);
    w_pow *= inv_w2;
  }
  return sum.value();
}

double hurwitz_zeta(double s, double a, int order) {
  if (s == 1.0) throw Error(ErrorKind::Pole, "hurwitz_zeta: pole at s = 1");
  return hurwitz_zeta_regular_part(s, a, order) + 1.0 / (s - 1.0);
}

double digamma(double x) {
  if (!(x > 0.0)) throw Error(ErrorKind::Domain, "digamma: x must be positive");
  CompensatedSum shift;
  while (x < 10.0) {
    shift.add(-1.0 / x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // ln x - 1/(2x) - sum B_{2k} / (2k x^{2k})
  const double series =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                      inv2 * (1.0 / 252 -
                              inv2 * (1.0 / 240 -
                                      inv2 * (1.0 / 132 -
                                              inv2 * (691.0 / 32760 - inv2 * (1.0 / 12)))))));
  shift.add(std::log(x));
  shift.add(-0.5 * inv);
  shift.add(-series);
  return shift.value();
}

LValue exact_L(const Character& chi, double sigma) {
  check_sigma(sigma, "exact_L");
  if (chi.is_principal()) {
    throw Error(ErrorKind::Domain, "exact_L: principal character has a pole at s = 1");
  }
  if (sigma == 1.0) return {oracle_value(chi, 1.0), LMethod::DigammaOracle, sigma, 0.0};
  return {oracle_value(chi, sigma), LMethod::HurwitzOracle, sigma, 12.0};
}

LValue exact_logderiv(const Character& chi, double sigma, double step) {
  if (!(sigma > 0.55 && sigma <= 1.0)) {
    throw Error(ErrorKind::Domain, "exact_logderiv: sigma must lie in (0.55, 1]");
  }
  if (chi.is_principal()) {
    throw Error(ErrorKind::Domain, "exact_logderiv: principal character has a pole at s = 1");
  }
  const std::complex<double> centre = oracle_value(chi, sigma);
  if (std::abs(centre) < kNearZero) {
    throw Error(ErrorKind::NearZero, "exact_logderiv: |L(sigma, chi)| below 1e-8 for character " +
                                         std::to_string(chi.index()) + " (possible nearby zero)");
  }
  auto central = [&](double h) {
    const std::complex<double> up = oracle_value(chi, sigma + h);
    const std::complex<double> down = oracle_value(chi, sigma - h);
    return std::log(up / down) / (2.0 * h);
  };
  const std::complex<double> coarse = central(step);
  const std::complex<double> fine = central(step / 2);
  return {(4.0 * fine - coarse) / 3.0, LMethod::HurwitzOracle, sigma, step};
}

}  // namespace resonance
