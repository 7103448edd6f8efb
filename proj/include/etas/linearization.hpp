#pragma once

#include <vector>

#include "etas/catalog.hpp"
#include "etas/priors.hpp"

namespace etas {

// Per-event geometric time binning: t_h, t_h+delta, t_h+delta(1+growth)^k, ..., T2.
struct BinningConfig {
  double delta = 0.1;  // first-bin length, days
  double growth = 2.0; // geometric factor
  int n_max = 10;      // max geometric exponents (so at most n_max + 2 bins)

  void validate() const;
};

enum class Part { I, II, III };

struct SurrogateRow {
  Part part;
  int event = -1;          // h for parts II/III
  double t_lo = 0.0;       // bin bounds for part II
  double t_hi = 0.0;
  double count = 0.0;      // 0 for parts I/II, 1 for part III
  double exposure = 1.0;   // 1 for parts I/II, 0 for part III
};

// The pseudo-observations of the surrogate Poisson construction: one part-I
// row, one part-II row per (event, bin), one part-III row per event —
// n(B+1) + 1 rows when every event has B bins. Bins depend only on the
// catalog, so the dataset is built once per fit.
struct SurrogateDataset {
  std::vector<SurrogateRow> rows;
  BinningConfig binning;
};

// Breakpoints for the bins of event time t_h (internal units). Strictly
// increasing, starting at t_h, ending at T2, duplicates collapsed.
std::vector<double> time_bins(double t_h, const ObservationWindow& window,
                              const BinningConfig& cfg);

SurrogateDataset build_surrogate(const EventCatalog& catalog, const BinningConfig& cfg);

// Debug export: part event t_lo t_hi count exposure, one row per line.
std::string surrogate_table(const SurrogateDataset& dataset);

// Log-scale predictor value and its internal-scale gradient at theta.
struct Predictor {
  double value = 0.0;
  Theta gradient{};
  bool finite = true;  // false marks an underflowed (inert) row
};

struct Context {
  const EventCatalog* catalog;
  const PriorSet* priors;
};

Predictor predictor_part1(const Theta& theta, const Context& ctx);
Predictor predictor_part2(const Theta& theta, const SurrogateRow& row, const Context& ctx);
Predictor predictor_part3(const Theta& theta, int event_index, const Context& ctx);

// All row predictors evaluated at the linearization point, cached for the
// inner solves.
struct LinearizedModel {
  Theta theta_star{};
  const SurrogateDataset* surrogate = nullptr;
  std::vector<Predictor> predictors;   // parallel to surrogate->rows
  std::size_t dropped_rows = 0;        // underflowed part-II rows
};

LinearizedModel linearize(const Theta& theta_star, const SurrogateDataset& surrogate,
                          const Context& ctx);

// Eq.-(21)-style assembly: -exp(lin I) - sum exp(lin II) + sum (lin III),
// where each "lin" is value + gradient . (theta - theta_star).
double approx_log_likelihood(const Theta& theta, const LinearizedModel& model);

}  // namespace etas
