#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "etas/model.hpp"

namespace etas {

// Internal-scale parameter vector; one standard-normal coordinate per
// (mu, K, alpha, c, p).
using Theta = std::array<double, 5>;

enum ParamIndex { kMu = 0, kK = 1, kAlpha = 2, kC = 3, kP = 4 };

inline constexpr std::array<const char*, 5> kParamNames = {"mu", "K", "alpha", "c", "p"};

enum class PriorFamily { uniform, gamma, lognormal, shifted_gamma };

// Target distribution for one parameter; the probability integral transform
// maps a standard-normal internal coordinate onto this distribution.
struct PriorSpec {
  PriorFamily family;
  double a = 0.0;      // uniform lower / gamma shape / lognormal meanlog
  double b = 0.0;      // uniform upper / gamma rate / lognormal sdlog
  double shift = 0.0;  // shifted_gamma offset

  static PriorSpec Uniform(double lo, double hi);
  static PriorSpec Gamma(double shape, double rate);
  static PriorSpec LogNormal(double meanlog, double sdlog);
  static PriorSpec ShiftedGamma(double shape, double rate, double shift);

  void validate() const;
  double quantile(double u) const;  // inverse target CDF
  double cdf(double x) const;
  double pdf(double x) const;
  std::string describe() const;
};

// eta(theta) = F_Y^{-1}(Phi(theta)): strictly increasing map from the
// standard-normal internal scale onto the prior's support. |theta| beyond 8
// is clamped (counted via link_clamp_count) rather than pushed into the CDF's
// unrepresentable tail.
double link(double theta, const PriorSpec& spec);

// d eta / d theta = phi(theta) / f_Y(eta(theta)); strictly positive.
double link_jacobian(double theta, const PriorSpec& spec);

// theta = Phi^{-1}(F_Y(y)).
double link_inverse(double y, const PriorSpec& spec);

std::uint64_t link_clamp_count();

using PriorSet = std::array<PriorSpec, 5>;

EtasParams natural_params(const Theta& theta, const PriorSet& priors);
Theta internal_params(const EtasParams& params, const PriorSet& priors);

// Lognormal whose 1%/99% quantiles equal (q01, q99).
PriorSpec match_lognormal_to_quantiles(double q01, double q99);

struct QuantileTable {
  double mean, sd, q01, q25, q50, q75, q99;
};

// Monte Carlo distribution of K_b = K / (c (p-1)) under K, c ~ Unif(0,10),
// p ~ Unif(1,10).
QuantileTable empirical_Kb_prior(std::size_t n, std::uint64_t seed);

// Monte Carlo summary of a prior, drawn by pushing normals through the link.
QuantileTable prior_summary(const PriorSpec& spec, std::size_t n, std::uint64_t seed);

// Preset prior sets. "replicate" mirrors the fixed uniform/gamma set of the
// reference MCMC package with a quantile-matched lognormal on K; "gamma" uses
// scale-aware gamma priors; scaled_gamma_priors(g) keeps the gamma-case prior
// means while shrinking variance as g grows.
PriorSet replicate_priors();
PriorSet gamma_priors();
PriorSet scaled_gamma_priors(double gamma_scale);

}  // namespace etas
