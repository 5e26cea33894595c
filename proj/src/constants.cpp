#include "resonance/constants.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <string>

#include "resonance/arithmetic.hpp"
#include "resonance/error.hpp"
#include "resonance/numerics.hpp"

namespace resonance {

namespace {

const double kLogLog4 = std::log(std::log(4.0));

void check_open_sigma(double sigma, const char* who) {
  if (!(sigma > 0.5 && sigma < 1.0)) {
    throw Error(ErrorKind::Domain, std::string(who) + ": sigma must lie in (1/2, 1)");
  }
}

void check_ell(long ell, const char* who) {
  if (ell < 1) throw Error(ErrorKind::Domain, std::string(who) + ": ell must be at least 1");
}

AdmissibleRange upper_bounded(std::string name, double numerator, double denominator,
                              std::string source) {
  AdmissibleRange range;
  range.parameter = std::move(name);
  range.source = std::move(source);
  range.lower = 0.0;
  range.lower_open = true;
  range.upper_open = true;
  if (numerator <= 0.0) {
    range.empty = true;
    range.upper = 0.0;
  } else {
    range.upper = numerator / denominator;
  }
  return range;
}

}  // namespace

bool AdmissibleRange::contains(double x) const noexcept {
  if (empty) return false;
  const bool above = lower_open ? x > lower : x >= lower;
  const bool below = upper_open ? x < upper : x <= upper;
  return above && below;
}

double AdmissibleRange::midpoint() const noexcept {
  if (empty || !std::isfinite(upper)) return std::numeric_limits<double>::quiet_NaN();
  return 0.5 * (lower + upper);
}

double binomial(long n, long k) {
  if (k < 0 || k > n || n < 0) return 0.0;
  if (n <= 60) {
    k = std::min(k, n - k);
    unsigned __int128 c = 1;
    for (long i = 1; i <= k; ++i) c = c * static_cast<unsigned __int128>(n - k + i) / i;
    return static_cast<double>(c);
  }
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

double c_ell(long ell) {
  check_ell(ell, "c_ell");
  return (static_cast<double>(ell) + 1.0) / 2.0 + kLogLog4;
}

double s_sigma_ell(double sigma, long ell) {
  check_open_sigma(sigma, "s_sigma_ell");
  check_ell(ell, "s_sigma_ell");
  CompensatedSum sum;
  sum.add(static_cast<double>(ell) / (1.0 - sigma));
  for (long m = 1; m <= ell; ++m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    sum.add(sign * binomial(ell + 1, m + 1) / (1.0 + sigma * static_cast<double>(m - 1)));
  }
  return sum.value();
}

double s_sigma_ell_expanded(double sigma, long ell) {
  check_open_sigma(sigma, "s_sigma_ell_expanded");
  check_ell(ell, "s_sigma_ell_expanded");
  CompensatedSum sum;
  const double l = static_cast<double>(ell);
  sum.add(l / (1.0 - sigma));
  sum.add(-(l + 1.0) * l / 2.0);
  for (long m = 2; m <= ell; ++m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    sum.add(sign * binomial(ell + 1, m + 1) / (1.0 + sigma * static_cast<double>(m - 1)));
  }
  return sum.value();
}

double q_coefficient() {
  static const double prime_const = prime_constant(1e-6).value;
  return 1.0 - kLogLog4 - kEulerGamma - prime_const;
}

double q_ell(long ell) {
  check_ell(ell, "q_ell");
  const double l = static_cast<double>(ell);
  return l * q_coefficient() - (l + 1.0) * harmonic(ell);
}

double h_factor(double sigma, long j) {
  check_open_sigma(sigma, "h_factor");
  if (j < 0) throw Error(ErrorKind::Domain, "h_factor: j must be non-negative");
  double value = 1.0 / (1.0 - sigma);
  for (long m = 0; m < j; ++m) {
    value *= static_cast<double>(m + 1) / (static_cast<double>(m) + 1.0 / sigma);
  }
  return value;
}

double h_factor_alternating(double sigma, long j) {
  check_open_sigma(sigma, "h_factor_alternating");
  if (j < 0) throw Error(ErrorKind::Domain, "h_factor_alternating: j must be non-negative");
  CompensatedSum sum;
  for (long k = 0; k <= j; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum.add(sign * binomial(j, k) / (1.0 + static_cast<double>(k - 1) * sigma));
  }
  return sum.value();
}

double h_sigma_ell(double sigma, long ell) {
  check_ell(ell, "h_sigma_ell");
  double product = 1.0;
  for (long j = 1; j <= ell; ++j) product *= h_factor(sigma, j);
  return product;
}

double c_sigma(double sigma, double tolerance) {
  check_open_sigma(sigma, "c_sigma");
  if (!(tolerance > 0)) throw Error(ErrorKind::Domain, "c_sigma: tolerance must be positive");
  // t^sigma / (2 - t^sigma), the same integrand written without t^{-sigma}.
  auto integrand = [sigma](double t) {
    const double ts = std::pow(t, sigma);
    return ts / (2.0 - ts);
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(integrand, 0.0, 1.0, tolerance);
}

bool kappa_condition(double sigma, double kappa, double tolerance) {
  const double c = c_sigma(sigma, tolerance);
  const double lhs = 2.0 * kappa * sigma + (2.25 - 1.5 * sigma) / (1.75 - 0.5 * sigma);
  const double rhs = 1.0 + kappa * sigma * (1.0 - c);
  return lhs < rhs;
}

AdmissibleRange kappa_range(double sigma, double tolerance) {
  check_open_sigma(sigma, "kappa_range");
  const double c = c_sigma(sigma, tolerance);
  const double numerator = 1.0 - (2.25 - 1.5 * sigma) / (1.75 - 0.5 * sigma);
  return upper_bounded("kappa", numerator, sigma * (1.0 + c),
                       "2 kappa sigma + (9/4 - 3 sigma/2)/(7/4 - sigma/2) < 1 + kappa sigma (1 - c(sigma))");
}

double eta_default_epsilon(double sigma) { return std::min(0.01, (sigma - 0.5) / 10.0); }

bool eta_condition(double sigma, double epsilon, double eta, double tolerance) {
  const double c = c_sigma(sigma, tolerance);
  const double lhs = 2.0 * eta * sigma + 3.0 * (1.0 - sigma + epsilon) / (2.0 - sigma + epsilon);
  const double rhs = 1.0 + eta * sigma * (1.0 - c);
  return lhs < rhs;
}

AdmissibleRange eta_range(double sigma, double epsilon, double tolerance) {
  check_open_sigma(sigma, "eta_range");
  if (!(epsilon > 0.0 && epsilon < sigma - 0.5)) {
    throw Error(ErrorKind::Domain, "eta_range: epsilon must lie in (0, sigma - 1/2)");
  }
  const double c = c_sigma(sigma, tolerance);
  const double numerator = 1.0 - 3.0 * (1.0 - sigma + epsilon) / (2.0 - sigma + epsilon);
  return upper_bounded("eta", numerator, sigma * (1.0 + c),
                       "2 eta sigma + 3(1 - sigma + eps)/(2 - sigma + eps) < 1 + eta sigma (1 - c(sigma))");
}

AdmissibleRange eta_range(double sigma) {
  check_open_sigma(sigma, "eta_range");
  return eta_range(sigma, eta_default_epsilon(sigma));
}

AdmissibleRange delta_range() {
  AdmissibleRange range;
  range.parameter = "delta";
  range.lower = std::log(4.0);
  range.upper = std::numeric_limits<double>::infinity();
  range.source = "delta > log 4";
  return range;
}

AdmissibleRange tau_range() {
  AdmissibleRange range;
  range.parameter = "tau";
  range.lower = 0.0;
  range.upper = 1.0 / std::log(4.0);
  range.source = "tau < 1/log 4";
  return range;
}

ApproximationParams approximation_params(double sigma, long ell) {
  check_open_sigma(sigma, "approximation_params");
  check_ell(ell, "approximation_params");
  ApproximationParams params;
  params.omega_lower = (1.0 - sigma) * static_cast<double>(ell - 1);
  params.omega_upper = sigma - 0.5;
  if (!(params.omega_lower < params.omega_upper - 1e-12)) {
    throw Error(ErrorKind::EmptyInterval,
                "omega interval ((1-sigma)(ell-1), sigma-1/2) is empty; need ell < 1/(2-2 sigma)");
  }
  params.omega = 0.5 * (params.omega_lower + params.omega_upper);
  params.beta_min = 1.0 / (params.omega - params.omega_lower);
  if (!(params.beta_min > 1.0)) {
    throw Error(ErrorKind::EmptyInterval, "beta lower bound does not exceed 1");
  }
  return params;
}

IdentityCheck beta_identity_check(long j, double sigma) {
  if (j < 0) throw Error(ErrorKind::Domain, "beta_identity_check: j must be non-negative");
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw Error(ErrorKind::Domain, "beta_identity_check: sigma must lie in (0, 1)");
  }
  const double alpha = (1.0 - sigma) / sigma;
  CompensatedSum sum;
  for (long k = 0; k <= j; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum.add(sign * binomial(j, k) / (static_cast<double>(k) + alpha));
  }
  IdentityCheck check;
  check.lhs = sum.value() / sigma;
  check.rhs = std::exp(std::lgamma(alpha) + std::lgamma(j + 1.0) - std::lgamma(alpha + j + 1.0)) /
              sigma;
  check.gap = std::fabs(check.lhs - check.rhs);
  return check;
}

double alternating_harmonic(long j) {
  if (j < 1) throw Error(ErrorKind::Domain, "alternating_harmonic: j must be positive");
  CompensatedSum sum;
  for (long m = 1; m <= j; ++m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    sum.add(sign * binomial(j, m) / static_cast<double>(m));
  }
  return sum.value();
}

}  // namespace resonance
