#include "etas/numeric.hpp"

#include <algorithm>

namespace etas {

double ks_statistic_uniform(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("ks_statistic_uniform: empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double u = values[i];
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - u);
    d = std::max(d, u - static_cast<double>(i) / n);
  }
  return d;
}

double ks_p_value(double statistic, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * statistic;
  if (lambda < 1e-8) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * lambda * lambda * k * k);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double sample_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("sample_quantile: empty sample");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("sample_quantile: q outside [0,1]");
  std::sort(values.begin(), values.end());
  const double h = q * (static_cast<double>(values.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

double sample_mean(const std::vector<double>& values) {
  NeumaierSum s;
  for (double v : values) s.add(v);
  return s.value() / static_cast<double>(values.size());
}

double sample_sd(const std::vector<double>& values) {
  const double m = sample_mean(values);
  NeumaierSum s;
  for (double v : values) s.add((v - m) * (v - m));
  return std::sqrt(s.value() / (static_cast<double>(values.size()) - 1.0));
}

}  // namespace etas
