#include "cfpilot/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cfpilot {

namespace {

using nlohmann::json;

template <typename T>
void get_if(const json& o, const char* key, T& field) {
  if (o.contains(key)) o.at(key).get_to(field);
}

FeatureSource feature_from_name(const std::string& name) {
  if (name == "location") return FeatureSource::Location;
  if (name == "lsf") return FeatureSource::Lsf;
  if (name == "both") return FeatureSource::Both;
  throw std::invalid_argument("config: unknown feature \"" + name + "\"");
}

const char* feature_name(FeatureSource f) {
  switch (f) {
    case FeatureSource::Location: return "location";
    case FeatureSource::Lsf: return "lsf";
    case FeatureSource::Both: return "both";
  }
  return "location";
}

ExhaustiveObjective objective_from_name(const std::string& name) {
  if (name == "fitness") return ExhaustiveObjective::Fitness;
  if (name == "sum_ul_rate") return ExhaustiveObjective::SumUlRate;
  throw std::invalid_argument("config: unknown exhaustive objective \"" + name + "\"");
}

json spec_to_json(const ExperimentSpec& spec) {
  const RadioParams& r = spec.base.radio;
  json j;
  j["radio"] = {{"bandwidth_hz", r.bandwidth_hz},
                {"carrier_mhz", r.carrier_mhz},
                {"ap_height_m", r.ap_height_m},
                {"ue_height_m", r.ue_height_m},
                {"d0_m", r.d0_m},
                {"d1_m", r.d1_m},
                {"shadow_std_db", r.shadow_std_db},
                {"noise_figure_db", r.noise_figure_db},
                {"noise_temp_k", r.noise_temp_k},
                {"pilot_power_mw", r.pilot_power_mw},
                {"ul_power_mw", r.ul_power_mw},
                {"dl_power_mw", r.dl_power_mw},
                {"coherence_samples", r.coherence_samples},
                {"num_pilots", r.num_pilots}};
  j["topology"] = {{"num_aps", spec.base.num_aps},
                   {"num_ues", spec.base.num_ues},
                   {"antennas_per_ap", spec.base.antennas_per_ap},
                   {"area_km", spec.base.area_km}};
  const ImsParams& p = spec.solver.ims;
  j["solver"] = {
      {"feature", feature_name(spec.solver.feature)},
      {"loc_error_std_m", spec.solver.loc_error_std_m},
      {"greedy_iters", spec.solver.greedy_iters},
      {"ims",
       {{"initial_solutions", p.initial_solutions},
        {"non_improve_limit", p.non_improve_limit},
        {"weak_rounds", p.weak_rounds},
        {"weak_candidates", p.weak_candidates},
        {"robust_theta", p.robust_theta},
        {"time_budget_s", p.time_budget_s},
        {"deterministic", p.deterministic},
        {"sweep_budget", p.sweep_budget},
        {"weighted_swap_delta", p.weighted_swap_delta}}},
      {"exhaustive",
       {{"budget", spec.solver.exhaustive.budget},
        {"objective", spec.solver.exhaustive.objective == ExhaustiveObjective::Fitness
                          ? "fitness"
                          : "sum_ul_rate"}}}};
  json names = json::array();
  for (Scheme s : spec.schemes) names.push_back(std::string(scheme_name(s)));
  j["experiment"] = {{"schemes", std::move(names)},
                     {"drops", spec.drops},
                     {"seed", spec.seed},
                     {"ul_power", spec.ul_power == UlPowerPolicy::MaxMin ? "maxmin"
                                                                         : "full"}};
  if (spec.sweep) {
    j["experiment"]["sweep"] = {{"param", spec.sweep->param},
                                {"values", spec.sweep->values}};
  } else {
    j["experiment"]["sweep"] = nullptr;
  }
  return j;
}

ExperimentSpec spec_from_json(const json& j) {
  ExperimentSpec spec;
  if (j.contains("radio")) {
    const json& o = j.at("radio");
    RadioParams& r = spec.base.radio;
    get_if(o, "bandwidth_hz", r.bandwidth_hz);
    get_if(o, "carrier_mhz", r.carrier_mhz);
    get_if(o, "ap_height_m", r.ap_height_m);
    get_if(o, "ue_height_m", r.ue_height_m);
    get_if(o, "d0_m", r.d0_m);
    get_if(o, "d1_m", r.d1_m);
    get_if(o, "shadow_std_db", r.shadow_std_db);
    get_if(o, "noise_figure_db", r.noise_figure_db);
    get_if(o, "noise_temp_k", r.noise_temp_k);
    get_if(o, "pilot_power_mw", r.pilot_power_mw);
    get_if(o, "ul_power_mw", r.ul_power_mw);
    get_if(o, "dl_power_mw", r.dl_power_mw);
    get_if(o, "coherence_samples", r.coherence_samples);
    get_if(o, "num_pilots", r.num_pilots);
  }
  if (j.contains("topology")) {
    const json& o = j.at("topology");
    get_if(o, "num_aps", spec.base.num_aps);
    get_if(o, "num_ues", spec.base.num_ues);
    get_if(o, "antennas_per_ap", spec.base.antennas_per_ap);
    get_if(o, "area_km", spec.base.area_km);
  }
  if (j.contains("solver")) {
    const json& o = j.at("solver");
    if (o.contains("feature")) {
      spec.solver.feature = feature_from_name(o.at("feature").get<std::string>());
    }
    get_if(o, "loc_error_std_m", spec.solver.loc_error_std_m);
    get_if(o, "greedy_iters", spec.solver.greedy_iters);
    if (o.contains("ims")) {
      const json& oi = o.at("ims");
      ImsParams& p = spec.solver.ims;
      get_if(oi, "initial_solutions", p.initial_solutions);
      get_if(oi, "non_improve_limit", p.non_improve_limit);
      get_if(oi, "weak_rounds", p.weak_rounds);
      get_if(oi, "weak_candidates", p.weak_candidates);
      get_if(oi, "robust_theta", p.robust_theta);
      get_if(oi, "time_budget_s", p.time_budget_s);
      get_if(oi, "deterministic", p.deterministic);
      get_if(oi, "sweep_budget", p.sweep_budget);
      get_if(oi, "weighted_swap_delta", p.weighted_swap_delta);
    }
    if (o.contains("exhaustive")) {
      const json& oe = o.at("exhaustive");
      get_if(oe, "budget", spec.solver.exhaustive.budget);
      if (oe.contains("objective")) {
        spec.solver.exhaustive.objective =
            objective_from_name(oe.at("objective").get<std::string>());
      }
    }
  }
  if (j.contains("experiment")) {
    const json& o = j.at("experiment");
    if (o.contains("schemes")) {
      spec.schemes.clear();
      for (const json& n : o.at("schemes")) {
        const std::string name = n.get<std::string>();
        const std::optional<Scheme> s = scheme_from_name(name);
        if (!s) throw std::invalid_argument("config: unknown scheme \"" + name + "\"");
        spec.schemes.push_back(*s);
      }
    }
    get_if(o, "drops", spec.drops);
    get_if(o, "seed", spec.seed);
    if (o.contains("ul_power")) {
      const std::string name = o.at("ul_power").get<std::string>();
      if (name == "full") {
        spec.ul_power = UlPowerPolicy::Full;
      } else if (name == "maxmin") {
        spec.ul_power = UlPowerPolicy::MaxMin;
      } else {
        throw std::invalid_argument("config: unknown ul_power \"" + name + "\"");
      }
    }
    if (o.contains("sweep") && !o.at("sweep").is_null()) {
      Sweep sw;
      o.at("sweep").at("param").get_to(sw.param);
      o.at("sweep").at("values").get_to(sw.values);
      spec.sweep = std::move(sw);
    }
  }
  return spec;
}

}  // namespace

ExperimentSpec spec_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  return spec_from_json(j);
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return spec_from_json_text(buf.str());
}

void apply_override(ExperimentSpec& spec, const std::string& key_value) {
  const std::size_t eq = key_value.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw std::invalid_argument("override must look like section.key=value: " + key_value);
  }
  std::string key = key_value.substr(0, eq);
  const std::string raw = key_value.substr(eq + 1);
  for (char& c : key) {
    if (c == '.') c = '/';
  }
  const json::json_pointer ptr("/" + key);

  json j = spec_to_json(spec);
  if (!j.contains(ptr)) {
    throw std::invalid_argument("override: unknown key \"" + key_value.substr(0, eq) + "\"");
  }
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  j[ptr] = std::move(value);
  spec = spec_from_json(j);
}

std::string spec_to_json_text(const ExperimentSpec& spec) {
  return spec_to_json(spec).dump(2) + "\n";
}

}  // namespace cfpilot
