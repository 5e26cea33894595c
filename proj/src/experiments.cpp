#include "resonance/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "resonance/constants.hpp"
#include "resonance/error.hpp"
#include "resonance/lfunctions.hpp"
#include "resonance/numerics.hpp"

namespace resonance {

namespace {

constexpr double kSlack = 1e-12;
constexpr double kTieTolerance = 1e-9;

bool uses_sigma(Theorem t) { return t == Theorem::Two || t == Theorem::Four; }

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorKind::Validation, message);
}

double log_q_loglog_q(std::uint64_t q) {
  const double lq = std::log(static_cast<double>(q));
  return lq * std::log(lq);
}

template <typename Combine>
std::vector<double> combine_powers(const std::vector<std::complex<double>>& base, long ell,
                                   bool additive, Combine finish) {
  const std::uint64_t m = base.size();
  std::vector<double> out(m);
  for (std::uint64_t a = 0; a < m; ++a) {
    std::complex<double> acc = additive ? 0.0 : 1.0;
    for (long j = 1; j <= ell; ++j) {
      const auto& v = base[mul_mod(a, static_cast<std::uint64_t>(j), m)];
      acc = additive ? acc + v : acc * v;
    }
    out[a] = finish(acc);
  }
  return out;
}

// Largest relative gap between truncated and exact values over chi^j, j <= ell.
std::optional<double> oracle_gap(const ExperimentConfig& config, const CharacterGroup& group,
                                 std::uint64_t index, const PrimeTable& primes) {
  const double sigma = effective_sigma(config);
  double worst = 0.0;
  try {
    for (long j = 1; j <= config.ell; ++j) {
      const Character chi = group.character(index).power(static_cast<std::uint64_t>(j));
      std::complex<double> approx;
      std::complex<double> exact;
      if (config.theorem == Theorem::One || config.theorem == Theorem::Two) {
        approx = truncated_L(chi, sigma, config.Y, primes).value;
        exact = exact_L(chi, sigma).value;
      } else {
        if (sigma <= 0.55) return std::nullopt;
        approx = logderiv_poly(chi, sigma, config.Y, primes).value;
        exact = -exact_logderiv(chi, sigma).value;
      }
      worst = std::max(worst, std::abs(approx - exact) / std::abs(exact));
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NearZero) return std::nullopt;
    throw;
  }
  return worst;
}

}  // namespace

void validate(const ExperimentConfig& config) {
  const int t = static_cast<int>(config.theorem);
  if (t < 1 || t > 4) invalid("theorem must be 1, 2, 3 or 4");
  if (config.q < 3 || !is_prime(config.q)) {
    invalid("q must be an odd prime (got " + std::to_string(config.q) + ")");
  }
  if (config.ell < 1) invalid("ell must be at least 1");
  if (uses_sigma(config.theorem)) {
    if (!config.sigma) invalid("theorem " + std::to_string(t) + " requires sigma");
    if (!(*config.sigma > 0.5 && *config.sigma < 1.0)) invalid("sigma must lie in (1/2, 1)");
  } else if (config.sigma) {
    invalid("sigma is only meaningful for theorems 2 and 4");
  }
  if (!(config.X > 0.0) || !std::isfinite(config.X)) invalid("X must be positive");
  if (static_cast<double>(config.Y) < config.X) {
    invalid("X must not exceed Y (X <= Y); got X = " + std::to_string(config.X) +
            ", Y = " + std::to_string(config.Y));
  }
  if (config.theorem == Theorem::Four && !theorem4_admissible(config.ell, *config.sigma)) {
    invalid("theorem 4 requires 1 <= ell < (2 - 2 sigma)^{-1}; got ell = " +
            std::to_string(config.ell) + ", sigma = " + std::to_string(*config.sigma));
  }
  for (std::uint64_t idx : config.excluded) {
    if (idx >= config.q - 1) invalid("excluded character index out of range");
  }
}

double effective_sigma(const ExperimentConfig& config) {
  return uses_sigma(config.theorem) ? config.sigma.value() : 1.0;
}

ResonanceKernel make_kernel(const ExperimentConfig& config) {
  if (uses_sigma(config.theorem)) return SigmaKernel{config.X, config.sigma.value()};
  return LinearKernel{config.X};
}

double X_from_parameter(Theorem theorem, std::uint64_t q, double parameter) {
  if (!(parameter > 0)) throw Error(ErrorKind::Domain, "X parameter must be positive");
  if (q < 17) throw Error(ErrorKind::Domain, "parameter formulas for X need q >= 17");
  const double scale = log_q_loglog_q(q);
  return theorem == Theorem::One ? scale / parameter : scale * parameter;
}

DefaultX default_X(Theorem theorem, std::uint64_t q, double margin, std::optional<double> sigma) {
  if (q < 17) throw Error(ErrorKind::Domain, "default_X: q must be at least 17");
  if (!(margin >= 0.0 && margin < 1.0)) {
    throw Error(ErrorKind::Domain, "default_X: margin must lie in [0, 1)");
  }
  DefaultX out;
  out.strict = margin > 0.0;
  switch (theorem) {
    case Theorem::One: out.parameter = std::log(4.0) * (1.0 + margin); break;
    case Theorem::Three: out.parameter = (1.0 - margin) / std::log(4.0); break;
    case Theorem::Two:
    case Theorem::Four: {
      if (!sigma) throw Error(ErrorKind::Domain, "default_X: sigma required for theorems 2 and 4");
      const AdmissibleRange range =
          theorem == Theorem::Two ? kappa_range(*sigma) : eta_range(*sigma);
      if (range.empty) {
        throw Error(ErrorKind::EmptyInterval,
                    "default_X: no admissible " + range.parameter + " at this sigma");
      }
      out.parameter = range.upper * (1.0 - margin);
      break;
    }
  }
  out.X = X_from_parameter(theorem, q, out.parameter);
  return out;
}

std::string_view to_string(Functional f) noexcept {
  switch (f) {
    case Functional::LAbsProduct: return "prod |L(1,chi^j;Y)|";
    case Functional::LSigmaAbsProduct: return "prod |L(sigma,chi^j;Y)|";
    case Functional::PrimeSumExponent: return "Re sum_j sum_p chi^j(p) p^-sigma";
    case Functional::LogDerivRe: return "Re prod D_j(sigma,chi)";
    case Functional::LogDerivAbs: return "|prod D_j(sigma,chi)|";
  }
  return "unknown";
}

Functional theorem_functional(Theorem theorem) noexcept {
  switch (theorem) {
    case Theorem::One: return Functional::LAbsProduct;
    case Theorem::Two: return Functional::LSigmaAbsProduct;
    default: return Functional::LogDerivRe;
  }
}

Functional certificate_functional(Theorem theorem) noexcept {
  switch (theorem) {
    case Theorem::One: return Functional::LAbsProduct;
    case Theorem::Two: return Functional::PrimeSumExponent;
    default: return Functional::LogDerivRe;
  }
}

std::vector<double> functional_values(Functional f, const CharacterGroup& group, long ell,
                                      double sigma, std::uint64_t Y, const PrimeTable& primes) {
  if (ell < 1) throw Error(ErrorKind::Domain, "functional_values: ell must be at least 1");
  auto abs_of = [](std::complex<double> z) { return std::abs(z); };
  auto re_of = [](std::complex<double> z) { return z.real(); };
  switch (f) {
    case Functional::LAbsProduct:
      return combine_powers(truncated_L_table(group, 1.0, Y, primes), ell, false, abs_of);
    case Functional::LSigmaAbsProduct:
      return combine_powers(truncated_L_table(group, sigma, Y, primes), ell, false, abs_of);
    case Functional::PrimeSumExponent:
      return combine_powers(prime_sum_table(group, sigma, Y, primes), ell, true, re_of);
    case Functional::LogDerivRe:
      return combine_powers(logderiv_table(group, sigma, Y, primes), ell, false, re_of);
    case Functional::LogDerivAbs:
      return combine_powers(logderiv_table(group, sigma, Y, primes), ell, false, abs_of);
  }
  return {};
}

ExtremalResult extremal_search(const std::vector<double>& values, const EligibleSet& eligible) {
  if (eligible.members.empty()) {
    throw Error(ErrorKind::EmptyDomain, "extremal_search: no eligible characters");
  }
  ExtremalResult best;
  best.value = -std::numeric_limits<double>::infinity();
  for (std::uint64_t a : eligible.members) {
    if (values[a] > best.value) {
      best.value = values[a];
      best.index = a;
    }
  }
  const double tol = kTieTolerance * std::max(1.0, std::fabs(best.value));
  for (std::uint64_t a : eligible.members) {
    if (values[a] >= best.value - tol) best.near_max.push_back(a);
  }
  return best;
}

ExtremalResult extremal_search(const CharacterGroup& group, long ell, Functional f, double sigma,
                               std::uint64_t Y, const PrimeTable& primes,
                               const std::vector<std::uint64_t>& excluded) {
  const EligibleSet set = eligible(group, ell, excluded);
  return extremal_search(functional_values(f, group, ell, sigma, Y, primes), set);
}

TheoremReport run_theorem(const ExperimentConfig& config) {
  validate(config);
  return run_theorem(config, sieve_primes(std::max<std::uint64_t>(config.Y, 2)));
}

TheoremReport run_theorem(const ExperimentConfig& config, const PrimeTable& primes) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  const CharacterGroup group(config.q);
  const ResonanceKernel kernel = make_kernel(config);
  const double sigma = effective_sigma(config);

  const ResonanceTerms terms =
      resonance_terms(config.theorem, group, config.ell, kernel, config.Y, primes);
  const ResonancePair pair = summarize(config.theorem, group, config.ell, kernel, config.Y, terms);

  TheoremReport report;
  report.config = config;
  report.S1 = pair.S1;
  report.S2 = pair.S2;
  report.ratio = pair.ratio;
  report.bound = bound_for(config.theorem, kernel, config.ell, config.q);
  report.margin = report.ratio - report.bound;
  report.inequality_ok =
      report.margin >= -kSlack * std::max(std::fabs(report.ratio), std::fabs(report.bound));

  const EligibleSet set = eligible(group, config.ell, config.excluded);
  const ExtremalResult extremal = extremal_search(
      functional_values(theorem_functional(config.theorem), group, config.ell, sigma, config.Y,
                        primes),
      set);
  report.argmax_index = extremal.index;
  report.max_value = extremal.value;
  report.near_max = extremal.near_max;

  const ExtremalResult cert_max =
      certificate_functional(config.theorem) == theorem_functional(config.theorem)
          ? extremal
          : extremal_search(functional_values(certificate_functional(config.theorem), group,
                                              config.ell, sigma, config.Y, primes),
                            set);
  report.certificate_argmax = cert_max.index;
  report.certificate_max = cert_max.value;

  std::vector<bool> is_eligible(group.order(), false);
  for (std::uint64_t a : set.members) is_eligible[a] = true;
  CompensatedSum excluded, eligible_weighted, eligible_mass;
  for (std::uint64_t a = 0; a < group.order(); ++a) {
    const double term = terms.weights[a].real() * terms.resonator_sq[a];
    if (is_eligible[a]) {
      eligible_weighted.add(term);
      eligible_mass.add(terms.resonator_sq[a]);
    } else {
      excluded.add(term);
    }
  }
  report.excluded_contribution = excluded.value();
  report.eligible_mean = eligible_weighted.value() / eligible_mass.value();
  report.certificate = (pair.S2.real() - report.excluded_contribution) / pair.S1;
  report.certificate_ok =
      report.certificate_max >=
      report.certificate - kSlack * std::max({1.0, std::fabs(report.certificate),
                                              std::fabs(report.certificate_max)});

  if (config.theorem == Theorem::Three || config.theorem == Theorem::Four) {
    report.abs_logderiv_max =
        extremal_search(functional_values(Functional::LogDerivAbs, group, config.ell, sigma,
                                          config.Y, primes),
                        set)
            .value;
  }
  if (config.oracle) report.oracle_gap = oracle_gap(config, group, report.argmax_index, primes);

  if (!report.passed()) {
    std::ostringstream msg;
    msg.precision(17);
    if (!report.inequality_ok) {
      msg << "resonance inequality violated: Re S2/S1 = " << report.ratio
          << " < bound = " << report.bound << " (S1 = " << report.S1
          << ", Re S2 = " << report.S2.real() << ", margin = " << report.margin << "). ";
    }
    if (!report.certificate_ok) {
      msg << "certificate violated: max functional = " << report.certificate_max
          << " < (Re S2 - excluded)/S1 = " << report.certificate
          << " (excluded = " << report.excluded_contribution << ").";
    }
    report.failure = msg.str();
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

bool SweepResult::all_passed() const noexcept {
  return std::all_of(rows.begin(), rows.end(), [](const TheoremReport& r) { return r.passed(); });
}

SweepResult sweep(const SweepOptions& options) {
  if (options.q_min > options.q_max) throw Error(ErrorKind::EmptyDomain, "sweep: empty prime range");
  std::vector<std::uint64_t> qs;
  if (options.q_max >= 3) {
    for (std::uint64_t p : sieve_primes(options.q_max).primes) {
      if (p >= options.q_min && p >= 3) qs.push_back(p);
    }
  }
  if (qs.empty()) throw Error(ErrorKind::EmptyDomain, "sweep: no odd primes in range");

  std::vector<ExperimentConfig> configs;
  for (std::uint64_t q : qs) {
    ExperimentConfig c;
    c.theorem = options.theorem;
    c.q = q;
    c.ell = options.ell;
    c.sigma = options.sigma;
    c.Y = options.Y;
    c.X = options.fixed_X ? *options.fixed_X
                          : default_X(options.theorem, q, options.margin, options.sigma).X;
    validate(c);
    configs.push_back(c);
  }
  const PrimeTable primes = sieve_primes(std::max<std::uint64_t>(options.Y, 2));

  SweepResult result;
  result.theorem = options.theorem;
  result.ell = options.ell;
  result.rows.resize(configs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        result.rows[i] = run_theorem(configs[i], primes);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, configs.size()));
  std::vector<std::thread> threads;
  for (unsigned t = 1; t < jobs; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);

  for (const TheoremReport& row : result.rows) {
    const double over_bound = row.ratio / row.bound;
    result.ratio_over_bound.push_back(over_bound);
    result.normalized.push_back(options.theorem == Theorem::One
                                    ? row.ratio / thm1_leading_scale(row.config.X, options.ell)
                                    : over_bound);
  }
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const std::uint64_t q = result.rows[i].config.q;
    std::uint64_t lower = 1;
    while (lower * 10 <= q) lower *= 10;
    if (result.buckets.empty() || result.buckets.back().lower != lower) {
      result.buckets.push_back({lower, lower * 10, 0, 0.0, -std::numeric_limits<double>::infinity()});
    }
    SweepBucket& b = result.buckets.back();
    b.mean_normalized += result.normalized[i];
    b.max_normalized = std::max(b.max_normalized, result.normalized[i]);
    ++b.count;
  }
  for (SweepBucket& b : result.buckets) b.mean_normalized /= static_cast<double>(b.count);
  return result;
}

OracleTable oracle_comparison(std::uint64_t q, double sigma, const std::vector<std::uint64_t>& Ys) {
  if (q > 499) throw Error(ErrorKind::Domain, "oracle_comparison: q must be at most 499");
  if (Ys.empty() || !std::is_sorted(Ys.begin(), Ys.end())) {
    throw Error(ErrorKind::Domain, "oracle_comparison: Y grid must be non-empty and ascending");
  }
  const CharacterGroup group(q);
  const PrimeTable primes = sieve_primes(std::max<std::uint64_t>(Ys.back(), 2));
  OracleTable table;
  table.q = q;
  table.sigma = sigma;
  table.Ys = Ys;
  table.max_error.assign(Ys.size(), 0.0);
  for (std::uint64_t a = 1; a < group.order(); ++a) {
    const Character chi = group.character(a);
    const std::complex<double> exact = exact_L(chi, sigma).value;
    if (std::abs(exact) < 1e-8) {
      table.near_zero.push_back(a);
      continue;
    }
    OracleRow row;
    row.index = a;
    row.exact = exact;
    for (const LValue& v : truncated_L_grid(chi, sigma, Ys, primes)) {
      row.rel_errors.push_back(std::abs(v.value - exact) / std::abs(exact));
    }
    for (std::size_t i = 0; i < Ys.size(); ++i) {
      table.max_error[i] = std::max(table.max_error[i], row.rel_errors[i]);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace resonance
