#include "etas/result_io.hpp"

#include <charconv>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace etas {

namespace {

const char* family_name(PriorFamily f) {
  switch (f) {
    case PriorFamily::uniform: return "uniform";
    case PriorFamily::gamma: return "gamma";
    case PriorFamily::lognormal: return "lognormal";
    case PriorFamily::shifted_gamma: return "shifted_gamma";
  }
  return "?";
}

PriorFamily family_from_name(const std::string& s) {
  if (s == "uniform") return PriorFamily::uniform;
  if (s == "gamma") return PriorFamily::gamma;
  if (s == "lognormal") return PriorFamily::lognormal;
  if (s == "shifted_gamma") return PriorFamily::shifted_gamma;
  throw std::runtime_error("result file: unknown prior family `" + s + "`");
}

void append(std::string& out, const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  out += buf;
}

}  // namespace

std::string write_result(const PosteriorResult& result, std::size_t summary_draws,
                         std::uint64_t summary_seed) {
  std::string out;
  append(out, "converged %d\n", result.converged ? 1 : 0);
  append(out, "iterations %d\n", result.iterations);
  append(out, "dropped_rows %zu\n", result.dropped_rows);
  append(out, "binning %.17g %.17g %d\n", result.binning.delta, result.binning.growth,
         result.binning.n_max);
  for (std::size_t i = 0; i < 5; ++i) {
    const PriorSpec& s = result.priors[i];
    append(out, "prior.%s %s %.17g %.17g %.17g\n", kParamNames[i], family_name(s.family), s.a,
           s.b, s.shift);
  }
  out += "theta_star";
  for (double v : result.theta_star) append(out, " %.17g", v);
  out += "\nmean";
  for (double v : result.gaussian.mean) append(out, " %.17g", v);
  out += "\n";
  for (int r = 0; r < 5; ++r) {
    append(out, "cov.%d", r);
    for (int c = 0; c < 5; ++c) append(out, " %.17g", result.gaussian.covariance(r, c));
    out += "\n";
  }
  for (std::size_t k = 0; k < result.trace.size(); ++k) {
    const IterationRecord& rec = result.trace[k];
    append(out, "trace %zu %.17g %.17g %d", k + 1, rec.alpha, rec.exact_log_post,
           rec.step_floor ? 1 : 0);
    for (double v : rec.theta_star) append(out, " %.17g", v);
    out += "\n";
  }
  if (result.converged && summary_draws > 0) {
    const auto summary = posterior_summary(result, summary_draws, summary_seed);
    out += "summary.header param mean sd q01 q25 q50 q75 q99\n";
    for (std::size_t i = 0; i < 5; ++i) {
      const SummaryRow& r = summary[i];
      append(out, "summary.%s %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n", kParamNames[i],
             r.mean, r.sd, r.q01, r.q25, r.q50, r.q75, r.q99);
    }
  }
  return out;
}

PosteriorResult read_result(std::string_view text) {
  PosteriorResult result;
  bool saw_theta = false, saw_mean = false;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "converged") {
      int v;
      ls >> v;
      result.converged = v != 0;
    } else if (key == "iterations") {
      ls >> result.iterations;
    } else if (key == "dropped_rows") {
      ls >> result.dropped_rows;
    } else if (key == "binning") {
      ls >> result.binning.delta >> result.binning.growth >> result.binning.n_max;
    } else if (key.rfind("prior.", 0) == 0) {
      const std::string name = key.substr(6);
      std::size_t idx = 5;
      for (std::size_t i = 0; i < 5; ++i) {
        if (name == kParamNames[i]) idx = i;
      }
      if (idx == 5) throw std::runtime_error("result file: unknown prior key `" + key + "`");
      std::string fam;
      PriorSpec spec{};
      ls >> fam >> spec.a >> spec.b >> spec.shift;
      spec.family = family_from_name(fam);
      result.priors[idx] = spec;
    } else if (key == "theta_star") {
      for (double& v : result.theta_star) ls >> v;
      saw_theta = true;
    } else if (key == "mean") {
      for (double& v : result.gaussian.mean) ls >> v;
      saw_mean = true;
    } else if (key.rfind("cov.", 0) == 0) {
      const int r = std::stoi(key.substr(4));
      if (r < 0 || r > 4) throw std::runtime_error("result file: bad covariance row");
      for (int c = 0; c < 5; ++c) ls >> result.gaussian.covariance(r, c);
    } else if (key == "trace") {
      IterationRecord rec;
      std::size_t idx;
      int floor_flag;
      ls >> idx >> rec.alpha >> rec.exact_log_post >> floor_flag;
      rec.step_floor = floor_flag != 0;
      for (double& v : rec.theta_star) ls >> v;
      result.trace.push_back(rec);
    } else if (key.rfind("summary", 0) == 0) {
      continue;  // derived block, recomputable
    } else {
      throw std::runtime_error("result file: unknown key `" + key + "`");
    }
    if (ls.fail()) throw std::runtime_error("result file: malformed line `" + line + "`");
  }
  if (!saw_theta || !saw_mean) throw std::runtime_error("result file: incomplete");
  return result;
}

}  // namespace etas
