#include "resonance/resonator.hpp"

#include <cmath>
#include <string>

#include "resonance/error.hpp"
#include "resonance/numerics.hpp"

namespace resonance {

namespace {

constexpr double kImagTolerance = 1e-9;

std::uint64_t floor_X(double X) { return X < 2 ? 0 : static_cast<std::uint64_t>(std::floor(X)); }

std::vector<std::uint64_t> primes_upto(double X) {
  const std::uint64_t limit = floor_X(X);
  if (limit < 2) return {};
  return sieve_primes(limit).primes;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

void require_Y_covers_X(double X, std::uint64_t Y) {
  if (static_cast<double>(Y) < X) {
    throw Error(ErrorKind::Precondition, "resonance sum requires X <= Y (got X = " +
                                             std::to_string(X) + ", Y = " + std::to_string(Y) +
                                             ")");
  }
}

void require_table(const PrimeTable& primes, std::uint64_t Y) {
  if (Y >= 2 && primes.limit < Y) {
    throw Error(ErrorKind::Precondition,
                "prime table does not reach Y = " + std::to_string(Y));
  }
}

double kernel_sigma(const ResonanceKernel& k) {
  if (const auto* sk = std::get_if<SigmaKernel>(&k)) return sk->sigma;
  return 1.0;
}

}  // namespace

double kernel_X(const ResonanceKernel& k) noexcept {
  return std::visit([](const auto& kk) { return kk.X; }, k);
}

double kernel_value(const ResonanceKernel& k, std::uint64_t p) {
  const double X = kernel_X(k);
  if (p < 2 || p > floor_X(X)) return 0.0;
  const double ratio = static_cast<double>(p) / X;
  if (const auto* sk = std::get_if<SigmaKernel>(&k)) return 1.0 - std::pow(ratio, sk->sigma);
  return 1.0 - ratio;
}

std::string_view to_string(Theorem t) noexcept {
  switch (t) {
    case Theorem::One: return "1";
    case Theorem::Two: return "2";
    case Theorem::Three: return "3";
    case Theorem::Four: return "4";
  }
  return "?";
}

Resonator::Resonator(const CharacterGroup& group, ResonanceKernel kernel)
    : group_(&group), kernel_(kernel) {
  for (std::uint64_t p : primes_upto(kernel_X(kernel_))) {
    if (p == group.modulus()) continue;
    const double r = kernel_value(kernel_, p);
    if (r != 0.0) active_.push_back({p, r});
  }
}

double Resonator::squared(const Character& chi) const {
  CompensatedSum log_sum;
  for (const auto& [p, r] : active_) {
    log_sum.add(-std::log(std::norm(1.0 - r * chi(p))));
  }
  return std::exp(log_sum.value());
}

std::vector<double> Resonator::squared_all() const {
  const std::uint64_t m = group_->order();
  std::vector<CompensatedSum> sums(m);
  std::vector<double> factor(m);
  for (const auto& [p, r] : active_) {
    // -log|1 - r w^k|^2 depends only on the exponent k.
    for (std::uint64_t k = 0; k < m; ++k) factor[k] = -std::log(std::norm(1.0 - r * group_->root(k)));
    const std::uint64_t d = group_->dlog()(p);
    for (std::uint64_t a = 0; a < m; ++a) sums[a].add(factor[mul_mod(a, d, m)]);
  }
  std::vector<double> out(m);
  for (std::uint64_t a = 0; a < m; ++a) out[a] = std::exp(sums[a].value());
  return out;
}

double resonator_sq(const Character& chi, const ResonanceKernel& k) {
  return Resonator(chi.group(), k).squared(chi);
}

double s1(const CharacterGroup& group, const ResonanceKernel& k) {
  CompensatedSum s;
  for (double w : Resonator(group, k).squared_all()) s.add(w);
  return s.value();
}

CongruenceOracle s1_congruence_oracle(const CharacterGroup& group, const ResonanceKernel& k,
                                      std::uint64_t N) {
  if (N < 1) throw Error(ErrorKind::Domain, "s1_congruence_oracle: cap must be at least 1");
  const std::uint64_t q = group.modulus();
  const double X = kernel_X(k);
  std::vector<std::uint64_t> primes;
  double total_mass_log = 0;  // log prod (1 - r(p))^{-1}
  for (std::uint64_t p : primes_upto(X)) {
    if (p == q) continue;
    const double r = kernel_value(k, p);
    if (r == 0.0) continue;
    primes.push_back(p);
    total_mass_log -= std::log1p(-r);
  }

  // Residue-class masses A[c] = sum_{n <= N, n = c (mod q)} r(n), built by a
  // depth-first walk over exponent vectors so r(n) comes for free.
  std::vector<CompensatedSum> mass(q);
  CompensatedSum truncated_total;
  struct Frame {
    std::uint64_t n;
    double r;
    std::size_t first;
  };
  std::vector<Frame> stack{{1, 1.0, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    mass[f.n % q].add(f.r);
    truncated_total.add(f.r);
    for (std::size_t i = f.first; i < primes.size(); ++i) {
      if (f.n > N / primes[i]) break;
      stack.push_back({f.n * primes[i], f.r * kernel_value(k, primes[i]), i});
    }
  }
  CompensatedSum pair_sum;
  for (std::uint64_t c = 1; c < q; ++c) {
    const double a = mass[c].value();
    pair_sum.add(a * a);
  }
  const double phi = static_cast<double>(group.order());
  const double total = std::exp(total_mass_log);
  const double partial = truncated_total.value();
  CongruenceOracle out;
  out.value = phi * pair_sum.value();
  // sum_c (A_c^2 - a_c^2) <= (sum A)^2 - (sum a)^2 for A_c >= a_c >= 0.
  out.tail_bound = phi * std::max(0.0, (total - partial) * (total + partial));
  return out;
}

std::vector<std::complex<double>> truncated_L_table(const CharacterGroup& group, double sigma,
                                                    std::uint64_t Y, const PrimeTable& primes) {
  require_table(primes, Y);
  const std::uint64_t m = group.order();
  const std::uint64_t q = group.modulus();
  std::vector<ComplexCompensatedSum> sums(m);
  std::vector<std::complex<double>> factor(m);
  for (std::uint64_t p : primes.primes) {
    if (p > Y) break;
    if (p == q) continue;
    const double x = std::exp(-sigma * std::log(static_cast<double>(p)));
    for (std::uint64_t k = 0; k < m; ++k) factor[k] = -std::log(1.0 - group.root(k) * x);
    const std::uint64_t d = group.dlog()(p);
    for (std::uint64_t b = 0; b < m; ++b) sums[b].add(factor[mul_mod(b, d, m)]);
  }
  std::vector<std::complex<double>> out(m);
  for (std::uint64_t b = 0; b < m; ++b) out[b] = std::exp(sums[b].value());
  return out;
}

std::vector<std::complex<double>> logderiv_table(const CharacterGroup& group, double sigma,
                                                 std::uint64_t Y, const PrimeTable& primes) {
  require_table(primes, Y);
  const std::uint64_t m = group.order();
  const std::uint64_t q = group.modulus();
  std::vector<ComplexCompensatedSum> sums(m);
  for (std::uint64_t p : primes.primes) {
    if (p > Y) break;
    if (p == q) continue;
    const double log_p = std::log(static_cast<double>(p));
    const std::uint64_t d = group.dlog()(p);
    std::uint64_t pk = p;
    for (std::uint64_t k = 1;; ++k) {
      const double coeff = log_p * std::exp(-sigma * static_cast<double>(k) * log_p);
      const std::uint64_t dk = mul_mod(d, k, m);
      for (std::uint64_t b = 0; b < m; ++b) sums[b].add(group.root(mul_mod(b, dk, m)) * coeff);
      if (pk > Y / p) break;
      pk *= p;
    }
  }
  std::vector<std::complex<double>> out(m);
  for (std::uint64_t b = 0; b < m; ++b) out[b] = sums[b].value();
  return out;
}

std::vector<std::complex<double>> prime_sum_table(const CharacterGroup& group, double sigma,
                                                  std::uint64_t Y, const PrimeTable& primes) {
  require_table(primes, Y);
  const std::uint64_t m = group.order();
  const std::uint64_t q = group.modulus();
  std::vector<ComplexCompensatedSum> sums(m);
  for (std::uint64_t p : primes.primes) {
    if (p > Y) break;
    if (p == q) continue;
    const double coeff = std::exp(-sigma * std::log(static_cast<double>(p)));
    const std::uint64_t d = group.dlog()(p);
    for (std::uint64_t b = 0; b < m; ++b) sums[b].add(group.root(mul_mod(b, d, m)) * coeff);
  }
  std::vector<std::complex<double>> out(m);
  for (std::uint64_t b = 0; b < m; ++b) out[b] = sums[b].value();
  return out;
}

std::vector<std::complex<double>> resonance_weights(Theorem theorem, const CharacterGroup& group,
                                                    long ell, double sigma, std::uint64_t Y,
                                                    const PrimeTable& primes) {
  if (ell < 1) throw Error(ErrorKind::Domain, "ell must be at least 1");
  const std::uint64_t m = group.order();
  std::vector<std::complex<double>> base;
  const bool additive = theorem == Theorem::Two;
  switch (theorem) {
    case Theorem::One: base = truncated_L_table(group, 1.0, Y, primes); break;
    case Theorem::Two: base = prime_sum_table(group, sigma, Y, primes); break;
    case Theorem::Three: base = logderiv_table(group, 1.0, Y, primes); break;
    case Theorem::Four: base = logderiv_table(group, sigma, Y, primes); break;
  }
  std::vector<std::complex<double>> out(m);
  for (std::uint64_t a = 0; a < m; ++a) {
    if (additive) {
      ComplexCompensatedSum s;
      for (long j = 1; j <= ell; ++j) s.add(base[mul_mod(a, static_cast<std::uint64_t>(j), m)]);
      out[a] = s.value();
    } else {
      std::complex<double> prod = 1.0;
      for (long j = 1; j <= ell; ++j) prod *= base[mul_mod(a, static_cast<std::uint64_t>(j), m)];
      out[a] = prod;
    }
  }
  return out;
}

bool theorem4_admissible(long ell, double sigma) noexcept {
  return ell >= 1 && sigma > 0.5 && sigma < 1.0 &&
         static_cast<double>(ell) * (2.0 - 2.0 * sigma) < 1.0 - 1e-12;
}

ResonanceTerms resonance_terms(Theorem theorem, const CharacterGroup& group, long ell,
                               const ResonanceKernel& k, std::uint64_t Y, const PrimeTable& primes) {
  if (ell < 1) throw Error(ErrorKind::Domain, "ell must be at least 1");
  const bool linear = std::holds_alternative<LinearKernel>(k);
  const bool wants_linear = theorem == Theorem::One || theorem == Theorem::Three;
  if (linear != wants_linear) {
    throw Error(ErrorKind::Precondition, "kernel variant does not match theorem " +
                                             std::string(to_string(theorem)));
  }
  require_Y_covers_X(kernel_X(k), Y);
  require_table(primes, Y);
  const double sigma = kernel_sigma(k);
  if (theorem == Theorem::Four && !theorem4_admissible(ell, sigma)) {
    throw Error(ErrorKind::Precondition,
                "theorem 4 requires 1 <= ell < 1/(2 - 2 sigma) (got ell = " + std::to_string(ell) +
                    ", sigma = " + std::to_string(sigma) + ")");
  }
  ResonanceTerms terms;
  terms.resonator_sq = Resonator(group, k).squared_all();
  terms.weights = resonance_weights(theorem, group, ell, sigma, Y, primes);
  return terms;
}

ResonancePair summarize(Theorem theorem, const CharacterGroup& group, long ell,
                        const ResonanceKernel& k, std::uint64_t Y, const ResonanceTerms& terms) {
  CompensatedSum s1_sum;
  ComplexCompensatedSum s2_sum;
  for (std::size_t a = 0; a < terms.resonator_sq.size(); ++a) {
    s1_sum.add(terms.resonator_sq[a]);
    s2_sum.add(terms.weights[a] * terms.resonator_sq[a]);
  }
  ResonancePair pair;
  pair.S1 = s1_sum.value();
  pair.S2 = s2_sum.value();
  pair.ratio = pair.S2.real() / pair.S1;
  pair.theorem = theorem;
  pair.q = group.modulus();
  pair.ell = ell;
  pair.X = kernel_X(k);
  pair.Y = Y;
  pair.sigma = kernel_sigma(k);
  if (std::abs(pair.S2.imag()) > kImagTolerance * (std::abs(pair.S2.real()) + pair.S1)) {
    throw Error(ErrorKind::Precision,
                "S2 has a non-negligible imaginary part; character pairing is broken");
  }
  return pair;
}

ResonancePair s2_thm1(const CharacterGroup& group, long ell, const LinearKernel& k,
                      std::uint64_t Y, const PrimeTable& primes) {
  return resonance_pair(Theorem::One, group, ell, k, Y, primes);
}

ResonancePair s2_thm2(const CharacterGroup& group, long ell, const SigmaKernel& k,
                      std::uint64_t Y, const PrimeTable& primes) {
  return resonance_pair(Theorem::Two, group, ell, k, Y, primes);
}

ResonancePair s2_thm3(const CharacterGroup& group, long ell, const LinearKernel& k,
                      std::uint64_t Y, const PrimeTable& primes) {
  return resonance_pair(Theorem::Three, group, ell, k, Y, primes);
}

ResonancePair s2_thm4(const CharacterGroup& group, long ell, const SigmaKernel& k,
                      std::uint64_t Y, const PrimeTable& primes) {
  return resonance_pair(Theorem::Four, group, ell, k, Y, primes);
}

ResonancePair resonance_pair(Theorem theorem, const CharacterGroup& group, long ell,
                             const ResonanceKernel& k, std::uint64_t Y, const PrimeTable& primes) {
  return summarize(theorem, group, ell, k, Y, resonance_terms(theorem, group, ell, k, Y, primes));
}

double bound_thm1(const LinearKernel& k, long ell, std::uint64_t skip_prime) {
  CompensatedSum log_sum;
  for (std::uint64_t p : primes_upto(k.X)) {
    if (p == skip_prime) continue;
    const double r = kernel_value(k, p);
    double rj = 1.0;
    for (long j = 1; j <= ell; ++j) {
      rj *= r;
      log_sum.add(-std::log1p(-rj / static_cast<double>(p)));
    }
  }
  return std::exp(log_sum.value());
}

double bound_thm2(const SigmaKernel& k, long ell, std::uint64_t skip_prime) {
  CompensatedSum sum;
  for (std::uint64_t p : primes_upto(k.X)) {
    if (p == skip_prime) continue;
    const double r = kernel_value(k, p);
    const double weight = std::pow(static_cast<double>(p), -k.sigma);
    double rj = 1.0;
    for (long j = 1; j <= ell; ++j) {
      rj *= r;
      sum.add(rj * weight);
    }
  }
  return sum.value();
}

double p_j_linear(const LinearKernel& k, long j, std::uint64_t skip_prime) {
  if (j < 0) throw Error(ErrorKind::Domain, "p_j_linear: j must be non-negative");
  CompensatedSum sum;
  for (std::uint64_t p : primes_upto(k.X)) {
    if (p == skip_prime) continue;
    const double pd = static_cast<double>(p);
    sum.add(std::log(pd) / pd * std::pow(kernel_value(k, p), static_cast<double>(j)));
  }
  return sum.value();
}

double p_j_sigma(const SigmaKernel& k, long j, std::uint64_t skip_prime) {
  if (j < 0) throw Error(ErrorKind::Domain, "p_j_sigma: j must be non-negative");
  CompensatedSum sum;
  for (std::uint64_t p : primes_upto(k.X)) {
    if (p == skip_prime) continue;
    const double pd = static_cast<double>(p);
    sum.add(std::log(pd) * std::pow(pd, -k.sigma) *
            std::pow(kernel_value(k, p), static_cast<double>(j)));
  }
  return sum.value();
}

double bound_thm3(const LinearKernel& k, long ell, std::uint64_t skip_prime) {
  double product = 1.0;
  for (long j = 1; j <= ell; ++j) product *= p_j_linear(k, j, skip_prime);
  return product;
}

double bound_thm4(const SigmaKernel& k, long ell, std::uint64_t skip_prime) {
  double product = 1.0;
  for (long j = 1; j <= ell; ++j) product *= p_j_sigma(k, j, skip_prime);
  return product;
}

double bound_for(Theorem theorem, const ResonanceKernel& k, long ell, std::uint64_t skip_prime) {
  switch (theorem) {
    case Theorem::One: return bound_thm1(std::get<LinearKernel>(k), ell, skip_prime);
    case Theorem::Two: return bound_thm2(std::get<SigmaKernel>(k), ell, skip_prime);
    case Theorem::Three: return bound_thm3(std::get<LinearKernel>(k), ell, skip_prime);
    case Theorem::Four: return bound_thm4(std::get<SigmaKernel>(k), ell, skip_prime);
  }
  return 0.0;
}

double p_j_linear_asymptotic(double X, long j) {
  static const double prime_const = prime_constant(1e-6).value;
  return std::log(X) - kEulerGamma - prime_const - harmonic(j);
}

double p_j_sigma_asymptotic(double X, double sigma, long j) {
  double value = std::pow(X, 1.0 - sigma) / (1.0 - sigma);
  for (long m = 0; m < j; ++m) value *= static_cast<double>(m + 1) / (static_cast<double>(m) + 1.0 / sigma);
  return value;
}

double thm1_leading_scale(double X, long ell) {
  return std::exp(static_cast<double>(ell) * kEulerGamma) * std::pow(std::log(X), static_cast<double>(ell));
}

}  // namespace resonance
