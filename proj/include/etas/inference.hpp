#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "etas/linearization.hpp"

namespace etas {

using Mat5 = Eigen::Matrix<double, 5, 5>;
using Vec5 = Eigen::Matrix<double, 5, 1>;

struct FitConfig {
  PriorSet priors;
  BinningConfig binning{};
  Theta theta0{};                  // initial linearization point (prior medians)
  int max_outer = 100;
  double convergence_frac = 0.01;  // fraction of the posterior sd in the stop rule

  void validate() const;
};

// Gaussian approximation of the internal-scale posterior at the mode.
struct GaussianApprox {
  Theta mean{};
  Mat5 covariance;

  Theta sd() const;
};

struct IterationRecord {
  Theta theta_star{};
  double alpha = 0.0;           // accepted line-search step
  double exact_log_post = 0.0;  // unnormalized, at theta_star
  bool step_floor = false;      // line search hit its smallest step
};

struct PosteriorResult {
  Theta theta_star{};          // converged linearization point
  GaussianApprox gaussian{};   // at theta_star
  std::vector<IterationRecord> trace;
  bool converged = false;
  int iterations = 0;
  std::size_t dropped_rows = 0;
  PriorSet priors;
  BinningConfig binning{};
};

// Surrogate-Poisson objective: sum_i [c_i eta_i - e_i exp(eta_i)] - ||theta||^2/2
// with eta_i the row's linearized predictor. Strictly concave.
double linearized_log_posterior(const Theta& theta, const LinearizedModel& model);

// Unique maximizer of linearized_log_posterior (Newton with step halving)
// plus the inverse negative Hessian there.
GaussianApprox inner_mode(const LinearizedModel& model);

struct LineSearchResult {
  double alpha = 1.0;
  Theta theta_new{};
  bool hit_floor = false;
};

// Backtracking on the exact objective: alpha in {1, 1/2, ..., 2^-10}, first
// candidate with objective(theta_new) >= objective(theta_old) wins.
LineSearchResult line_search(const Theta& theta_old, const Theta& theta_hat,
                             const std::function<double(const Theta&)>& exact_log_post);

// Exact unnormalized log-posterior: exact likelihood at link(theta) plus the
// standard-normal internal prior.
double exact_log_posterior(const EventCatalog& catalog, const PriorSet& priors,
                           const Theta& theta);

PosteriorResult fit(const EventCatalog& catalog, const FitConfig& config);

// Natural-scale posterior draws from the Gaussian approximation pushed
// through the per-parameter links.
std::vector<EtasParams> sample_posterior(const PosteriorResult& result, std::size_t n,
                                         std::uint64_t seed, bool force = false);

struct SummaryRow {
  double mean, sd, q01, q25, q50, q75, q99;
};

std::array<SummaryRow, 5> posterior_summary(const PosteriorResult& result, std::size_t n,
                                            std::uint64_t seed, bool force = false);

}  // namespace etas
