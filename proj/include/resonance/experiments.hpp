#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "resonance/arithmetic.hpp"
#include "resonance/characters.hpp"
#include "resonance/resonator.hpp"

namespace resonance {

struct ExperimentConfig {
  Theorem theorem = Theorem::One;
  std::uint64_t q = 0;
  long ell = 1;
  std::optional<double> sigma;  // theorems 2 and 4 only
  double X = 0;
  std::uint64_t Y = 1000;
  std::vector<std::uint64_t> excluded;  // user-designated exceptional characters
  std::string output;
  bool oracle = false;  // compare the extremal character against the exact oracle
};

/// Throws Error(Validation) naming the violated condition.
void validate(const ExperimentConfig& config);

/// sigma for the kernel: the configured value for theorems 2/4, 1 otherwise.
double effective_sigma(const ExperimentConfig& config);
ResonanceKernel make_kernel(const ExperimentConfig& config);

struct DefaultX {
  double X = 0;
  double parameter = 0;  // delta, kappa, tau or eta actually used
  bool strict = true;    // false when the parameter sits on its admissible endpoint
};

/// X from the theorem's parameter formula, with the parameter taken
/// `margin` (relative) inside its admissible endpoint.
DefaultX default_X(Theorem theorem, std::uint64_t q, double margin = 0.01,
                   std::optional<double> sigma = std::nullopt);

/// X from an explicit parameter value: log q loglog q / delta for theorem 1,
/// parameter * log q loglog q otherwise.
double X_from_parameter(Theorem theorem, std::uint64_t q, double parameter);

enum class Functional {
  LAbsProduct,       // prod_j |L(1, chi^j; Y)|
  LSigmaAbsProduct,  // prod_j |L(sigma, chi^j; Y)|
  PrimeSumExponent,  // Re sum_j sum_{p <= Y} chi^j(p) p^{-sigma}
  LogDerivRe,        // Re prod_j D_j(sigma, chi)
  LogDerivAbs,       // |prod_j D_j(sigma, chi)|
};

std::string_view to_string(Functional f) noexcept;

/// The functional named by the theorem statement.
Functional theorem_functional(Theorem theorem) noexcept;
/// The functional whose weighted average is Re S2 / S1.
Functional certificate_functional(Theorem theorem) noexcept;

/// Functional value for every character index of the group.
std::vector<double> functional_values(Functional f, const CharacterGroup& group, long ell,
                                      double sigma, std::uint64_t Y, const PrimeTable& primes);

struct ExtremalResult {
  std::uint64_t index = 0;
  double value = 0;
  std::vector<std::uint64_t> near_max;  // all eligible indices within 1e-9 of the max
};

/// argmax over eligible(q, ell) minus `excluded`; ties go to the smallest index.
ExtremalResult extremal_search(const CharacterGroup& group, long ell, Functional f, double sigma,
                               std::uint64_t Y, const PrimeTable& primes,
                               const std::vector<std::uint64_t>& excluded = {});
ExtremalResult extremal_search(const std::vector<double>& values, const EligibleSet& eligible);

struct TheoremReport {
  ExperimentConfig config;
  double S1 = 0;
  std::complex<double> S2;
  double ratio = 0;
  double bound = 0;
  double margin = 0;  // ratio - bound
  std::uint64_t argmax_index = 0;
  double max_value = 0;
  std::vector<std::uint64_t> near_max;
  std::uint64_t certificate_argmax = 0;
  double certificate_max = 0;
  double excluded_contribution = 0;
  double certificate = 0;  // (Re S2 - excluded) / S1
  // Re S2 restricted to eligible characters, normalized by their own resonator
  // mass: a true weighted mean, so certificate_max dominates it unconditionally.
  double eligible_mean = 0;
  std::optional<double> abs_logderiv_max;  // corollary form, theorems 3 and 4
  std::optional<double> oracle_gap;        // max relative gap over chi^j, j <= ell
  double seconds = 0;
  bool inequality_ok = false;
  bool certificate_ok = false;
  std::string failure;

  bool passed() const noexcept { return inequality_ok && certificate_ok; }
};

/// Runs one configuration end to end. Inequality violations are recorded in
/// the report (inequality_ok / certificate_ok / failure), never thrown.
TheoremReport run_theorem(const ExperimentConfig& config);
TheoremReport run_theorem(const ExperimentConfig& config, const PrimeTable& primes);

struct SweepBucket {
  std::uint64_t lower = 0;  // inclusive
  std::uint64_t upper = 0;  // exclusive
  std::size_t count = 0;
  double mean_normalized = 0;
  double max_normalized = 0;
};

struct SweepResult {
  Theorem theorem = Theorem::One;
  long ell = 1;
  std::vector<TheoremReport> rows;
  std::vector<double> normalized;  // ratio / e^{ell gamma} (log X)^ell (theorem 1), ratio / bound otherwise
  std::vector<double> ratio_over_bound;
  std::vector<SweepBucket> buckets;  // decade buckets of q

  bool all_passed() const noexcept;
};

struct SweepOptions {
  Theorem theorem = Theorem::One;
  std::uint64_t q_min = 100;
  std::uint64_t q_max = 500;
  long ell = 1;
  std::optional<double> sigma;
  double margin = 0.01;
  std::optional<double> fixed_X;  // overrides default_X
  std::uint64_t Y = 1000;
  unsigned jobs = 1;
};

SweepResult sweep(const SweepOptions& options);

struct OracleRow {
  std::uint64_t index = 0;
  std::complex<double> exact;
  std::vector<double> rel_errors;  // one per Y
};

struct OracleTable {
  std::uint64_t q = 0;
  double sigma = 1.0;
  std::vector<std::uint64_t> Ys;
  std::vector<OracleRow> rows;
  std::vector<double> max_error;               // per Y, over rows
  std::vector<std::uint64_t> near_zero;        // excluded: |exact| < 1e-8
};

OracleTable oracle_comparison(std::uint64_t q, double sigma, const std::vector<std::uint64_t>& Ys);

}  // namespace resonance
