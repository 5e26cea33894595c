#pragma once

#include <limits>
#include <string>

namespace resonance {

/// An interval of admissible values for one parameter, derived from the
/// inequality named in `source`. Emptiness is a value, not an error.
struct AdmissibleRange {
  std::string parameter;
  double lower = 0;
  double upper = 0;
  bool lower_open = true;
  bool upper_open = true;
  std::string source;
  bool empty = false;

  bool contains(double x) const noexcept;
  /// Midpoint for bounded ranges, NaN when empty or unbounded above.
  double midpoint() const noexcept;
};

/// Exact binomial coefficient for n <= 60, log-Gamma route above.
double binomial(long n, long k);

/// C(ell) = (ell + 1)/2 + log log 4
double c_ell(long ell);

/// S(sigma, ell) = ell/(1-sigma) + sum_{m=1}^{ell} (-1)^m C(ell+1, m+1) / (1 + sigma (m-1))
double s_sigma_ell(double sigma, long ell);
/// The other printed form: ell/(1-sigma) - (ell+1) ell / 2 + sum_{m=2}^{ell} ...
double s_sigma_ell_expanded(double sigma, long ell);

/// 1 - log log 4 - gamma - sum_p log p / (p (p - 1)), approximately -0.659.
double q_coefficient();
/// Q(ell) = ell * q_coefficient() - (ell + 1) H_ell
double q_ell(long ell);

/// H(sigma, ell) = prod_{j=1}^{ell} (j! / (1 - sigma)) prod_{m=0}^{j-1} (m + 1/sigma)^{-1}
double h_sigma_ell(double sigma, long ell);
/// The j-th factor of H(sigma, ell), closed form.
double h_factor(double sigma, long j);
/// sum_{k=0}^{j} (-1)^k C(j, k) / (1 + (k - 1) sigma); equals h_factor(sigma, j).
double h_factor_alternating(double sigma, long j);

/// c(sigma) = int_0^1 dt / (2 t^{-sigma} - 1)
double c_sigma(double sigma, double tolerance = 1e-10);

/// 2 kappa sigma + (9/4 - 3 sigma/2)/(7/4 - sigma/2) < 1 + kappa sigma (1 - c(sigma))
bool kappa_condition(double sigma, double kappa, double tolerance = 1e-10);
AdmissibleRange kappa_range(double sigma, double tolerance = 1e-10);

double eta_default_epsilon(double sigma);
/// 2 eta sigma + 3(1 - sigma + eps)/(2 - sigma + eps) < 1 + eta sigma (1 - c(sigma))
bool eta_condition(double sigma, double epsilon, double eta, double tolerance = 1e-10);
AdmissibleRange eta_range(double sigma, double epsilon, double tolerance = 1e-10);
AdmissibleRange eta_range(double sigma);

/// delta > log 4
AdmissibleRange delta_range();
/// 0 < tau < 1 / log 4
AdmissibleRange tau_range();

struct ApproximationParams {
  double omega_lower = 0;  // (1 - sigma)(ell - 1)
  double omega_upper = 0;  // sigma - 1/2
  double omega = 0;        // midpoint
  double beta_min = 0;     // 1 / (omega - omega_lower)
};

/// Parameters of the Dirichlet-polynomial approximation to L'/L at sigma.
ApproximationParams approximation_params(double sigma, long ell);

struct IdentityCheck {
  double lhs = 0;
  double rhs = 0;
  double gap = 0;
};

/// (1/sigma) sum_{k=0}^{j} (-1)^k C(j,k)/(k + alpha) against (1/sigma) B(alpha, j+1),
/// alpha = (1 - sigma)/sigma.
IdentityCheck beta_identity_check(long j, double sigma);

/// sum_{m=1}^{j} (-1)^m C(j, m) / m, which equals -H_j.
double alternating_harmonic(long j);

}  // namespace resonance
