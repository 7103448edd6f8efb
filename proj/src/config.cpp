#include "etas/config.hpp"

#include <json.hpp>

namespace etas {

namespace {
using nlohmann::json;

json parse_json(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config is not valid JSON");
  if (!j.is_object()) throw ConfigError("config root must be an object");
  return j;
}

double get_number(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing `" + key + "`");
  if (!j.at(key).is_number()) throw ConfigError("`" + key + "` must be a number");
  return j.at(key).get<double>();
}

double get_number_or(const json& j, const std::string& key, double fallback) {
  return j.contains(key) ? get_number(j, key) : fallback;
}

std::int64_t get_integer_or(const json& j, const std::string& key, std::int64_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) throw ConfigError("`" + key + "` must be an integer");
  return j.at(key).get<std::int64_t>();
}

ObservationWindow parse_window(const json& j) {
  if (!j.contains("window")) throw ConfigError("missing `window`");
  const json& w = j.at("window");
  ObservationWindow window{get_number(w, "t_start"), get_number(w, "t_end"),
                           get_number(w, "m_cutoff")};
  window.validate();
  return window;
}

EtasParams parse_params(const json& j) {
  if (!j.contains("params")) throw ConfigError("missing `params`");
  const json& p = j.at("params");
  EtasParams params{get_number(p, "mu"), get_number(p, "K"), get_number(p, "alpha"),
                    get_number(p, "c"), get_number(p, "p")};
  params.validate();
  return params;
}

CatalogOptions parse_catalog_options(const json& j) {
  CatalogOptions opts;
  opts.window = parse_window(j);
  if (j.contains("ties")) {
    const std::string t = j.at("ties").get<std::string>();
    if (t == "reject") {
      opts.ties = TiePolicy::reject;
    } else if (t == "jitter") {
      opts.ties = TiePolicy::jitter;
    } else {
      throw ConfigError("`ties` must be \"reject\" or \"jitter\"");
    }
  }
  opts.jitter_eps = get_number_or(j, "jitter_eps", opts.jitter_eps);
  return opts;
}

PriorSpec parse_prior_spec(const json& j, const std::string& name) {
  if (!j.is_object()) throw ConfigError("prior `" + name + "` must be an object");
  if (!j.contains("family")) throw ConfigError("missing `family` in prior `" + name + "`");
  const std::string family = j.at("family").get<std::string>();
  auto num = [&](const char* key) {
    if (!j.contains(key)) {
      throw ConfigError("missing `" + std::string(key) + "` in prior `" + name + "`");
    }
    return j.at(key).get<double>();
  };
  if (family == "uniform") return PriorSpec::Uniform(num("lo"), num("hi"));
  if (family == "gamma") return PriorSpec::Gamma(num("shape"), num("rate"));
  if (family == "lognormal") return PriorSpec::LogNormal(num("meanlog"), num("sdlog"));
  if (family == "shifted_gamma") {
    return PriorSpec::ShiftedGamma(num("shape"), num("rate"), num("shift"));
  }
  throw ConfigError("unknown prior family `" + family + "` for `" + name + "`");
}

PriorSet parse_prior_set(const json& j) {
  if (!j.contains("priors")) throw ConfigError("missing `priors`");
  const json& p = j.at("priors");
  if (!p.is_object()) throw ConfigError("`priors` must be an object");

  if (p.contains("preset")) {
    const std::string preset = p.at("preset").get<std::string>();
    if (preset == "replicate") return replicate_priors();
    if (preset == "gamma") {
      if (p.contains("gamma_scale")) {
        return scaled_gamma_priors(p.at("gamma_scale").get<double>());
      }
      return gamma_priors();
    }
    throw ConfigError("unknown prior preset `" + preset + "`");
  }

  PriorSet out = gamma_priors();
  for (std::size_t i = 0; i < 5; ++i) {
    const std::string name = kParamNames[i];
    if (!p.contains(name)) throw ConfigError("missing `" + name + "` in `priors`");
    out[i] = parse_prior_spec(p.at(name), name);
    out[i].validate();
  }
  return out;
}

BinningConfig parse_binning(const json& j) {
  BinningConfig cfg;
  if (!j.contains("binning")) return cfg;
  const json& b = j.at("binning");
  cfg.delta = get_number_or(b, "delta", cfg.delta);
  cfg.growth = get_number_or(b, "growth", cfg.growth);
  cfg.n_max = static_cast<int>(get_integer_or(b, "n_max", cfg.n_max));
  cfg.validate();
  return cfg;
}
}  // namespace

SimConfig parse_sim_config(std::string_view json_text) {
  const json j = parse_json(json_text);
  SimConfig cfg;
  cfg.window = parse_window(j);
  cfg.params = parse_params(j);
  cfg.gr_beta = get_number(j, "gr_beta");
  cfg.seed = static_cast<std::uint64_t>(get_integer_or(j, "seed", 1));
  cfg.max_events =
      static_cast<std::size_t>(get_integer_or(j, "max_events", static_cast<std::int64_t>(cfg.max_events)));
  cfg.validate();
  return cfg;
}

FitFileConfig parse_fit_config(std::string_view json_text) {
  const json j = parse_json(json_text);
  FitFileConfig out;
  out.catalog = parse_catalog_options(j);
  out.fit.priors = parse_prior_set(j);
  out.fit.binning = parse_binning(j);
  if (j.contains("theta0")) {
    const json& t = j.at("theta0");
    if (!t.is_array() || t.size() != 5) throw ConfigError("`theta0` must be an array of 5 numbers");
    for (std::size_t i = 0; i < 5; ++i) out.fit.theta0[i] = t.at(i).get<double>();
  }
  out.fit.max_outer = static_cast<int>(get_integer_or(j, "max_outer", out.fit.max_outer));
  out.fit.convergence_frac = get_number_or(j, "convergence_frac", out.fit.convergence_frac);
  out.fit.validate();
  return out;
}

McmcFileConfig parse_mcmc_config(std::string_view json_text) {
  const json j = parse_json(json_text);
  McmcFileConfig out;
  out.catalog = parse_catalog_options(j);
  out.mcmc.priors = parse_prior_set(j);
  out.mcmc.n_iter = static_cast<int>(get_integer_or(j, "n_iter", out.mcmc.n_iter));
  out.mcmc.burn_in = static_cast<int>(get_integer_or(j, "burn_in", out.mcmc.burn_in));
  out.mcmc.seed = static_cast<std::uint64_t>(get_integer_or(j, "seed", 1));
  if (j.contains("proposal_scales")) {
    const json& s = j.at("proposal_scales");
    if (!s.is_array() || s.size() != 5) {
      throw ConfigError("`proposal_scales` must be an array of 5 numbers");
    }
    for (std::size_t i = 0; i < 5; ++i) out.mcmc.proposal_scales[i] = s.at(i).get<double>();
  }
  if (j.contains("prior_only")) out.mcmc.prior_only = j.at("prior_only").get<bool>();
  out.mcmc.validate();
  return out;
}

PriorSet parse_priors(std::string_view json_text) {
  return parse_prior_set(parse_json(json_text));
}

}  // namespace etas
