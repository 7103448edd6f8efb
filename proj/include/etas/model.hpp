#pragma once

#include "etas/catalog.hpp"

namespace etas {

// Natural-scale ETAS parameters for the unnormalized Omori kernel
//   lambda(t) = mu + K sum_h exp{alpha (m_h - M0)} ((t - t_h)/c + 1)^-p
struct EtasParams {
  double mu;     // background events/day
  double K;      // productivity at cutoff magnitude
  double alpha;  // productivity magnitude scaling, 1/magnitude
  double c;      // Omori offset, days
  double p;      // Omori exponent

  void validate() const;
};

// Parameters of the normalized-kernel parametrization
//   lambda(t) = mu + K sum_h exp{alpha (m_h - M0)} c^{p-1}/(p-1) (t - t_h + c)^-p
struct LegacyEtasParams {
  double mu;
  double K;
  double alpha;
  double c;
  double p;

  void validate() const;
};

// ((dt)/c + 1)^-p for dt >= 0; 1 at dt = 0, strictly decreasing.
double omori_kernel(double dt, double c, double p);
double omori_kernel_dc(double dt, double c, double p);
double omori_kernel_dp(double dt, double c, double p);

// beta * exp(-alpha dt) for dt >= 0.
double exp_kernel(double dt, double alpha, double beta);

// Closed-form integral of omori_kernel(t - t_h) over [t_lo, t_hi];
// t_hi may be +inf (requires p > 1). Near p = 1 a logarithmic branch is
// used for finite bins; line-search probes may graze that boundary.
double omori_integral(double t_lo, double t_hi, double t_h, double c, double p);
double omori_integral_dc(double t_lo, double t_hi, double t_h, double c, double p);
double omori_integral_dp(double t_lo, double t_hi, double t_h, double c, double p);

// K * exp(alpha (m - M0)) for m >= M0.
double magnitude_factor(double m, double K, double alpha, double M0);

// Ground-process intensity at t given the strict-past history (events at
// exactly t excluded, matching left continuity).
double conditional_intensity(double t, const EventCatalog& catalog, const EtasParams& params);

// Integrated intensity over [0, t] (internal units); nondecreasing in t.
double compensator(double t, const EventCatalog& catalog, const EtasParams& params);

// Eq.-(5)-style log-likelihood: -compensator(T2) + sum_h log lambda(t_h).
// Returns -inf (not an exception) if any event sits at zero intensity.
double exact_log_likelihood(const EventCatalog& catalog, const EtasParams& params);

// Same likelihood evaluated directly with the normalized kernel; kept as an
// independent route for the parametrization-equivalence checks.
double legacy_log_likelihood(const EventCatalog& catalog, const LegacyEtasParams& params);

// K_b = K / (c (p - 1)); mu, alpha, c, p carried over.
EtasParams convert_legacy(const LegacyEtasParams& params);

}  // namespace etas
