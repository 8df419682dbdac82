#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfpilot/solvers.hpp"

namespace cfpilot {

struct SolverConfig {
  ImsParams ims;
  int greedy_iters = -1;  // -1: one pass per UE
  ExhaustiveParams exhaustive;
  FeatureSource feature = FeatureSource::Location;
  double loc_error_std_m = 0.0;
};

// Uplink data-power policy for the reported rates. Full transmit power keeps
// per-UE throughput spreads intact; max-min equalizes the SINR within a drop.
enum class UlPowerPolicy { Full, MaxMin };

// Experiment-level description of a drop; positions are realized per drop.
struct ScenarioTemplate {
  RadioParams radio;
  int num_aps = 100;
  int num_ues = 40;
  int antennas_per_ap = 1;
  double area_km = 1.0;
};

// Swept parameter names: num_aps | num_ues | num_pilots | antennas_per_ap |
// loc_error_m | feature (0 location, 1 lsf, 2 both).
struct Sweep {
  std::string param;
  std::vector<double> values;
};

struct ExperimentSpec {
  ScenarioTemplate base;
  std::vector<Scheme> schemes = {Scheme::Random, Scheme::Greedy, Scheme::Repulsive,
                                 Scheme::ImsEs, Scheme::ImsVs, Scheme::Ideal};
  int drops = 100;
  std::uint64_t seed = 1;
  std::optional<Sweep> sweep;
  SolverConfig solver;
  UlPowerPolicy ul_power = UlPowerPolicy::Full;
};

struct Sample {
  Scheme scheme;
  double sweep_value;
  int drop;
  int ue;
  double ul_tput_bps;
  double dl_tput_bps;
};

struct ExperimentResult {
  std::string sweep_param = "none";
  std::vector<double> sweep_values = {0.0};
  std::vector<Scheme> schemes;
  std::vector<Sample> samples;
  std::vector<std::string> errors;  // per failed (sweep, drop, scheme) cell

  std::vector<double> select_ul(Scheme s, double sweep_value) const;
  std::vector<double> select_dl(Scheme s, double sweep_value) const;
};

Scenario make_drop_scenario(const ScenarioTemplate& base, std::uint64_t master_seed,
                            int drop_index);

// Full per-drop pipeline: topology, large-scale fading, scheme assignment,
// estimation statistics, power control, rates, throughput. Channel draws
// depend only on (master_seed, drop_index), never on the scheme.
struct DropResult {
  std::vector<double> ul_tput_bps;
  std::vector<double> dl_tput_bps;
};
DropResult run_drop(const ScenarioTemplate& base, Scheme scheme,
                    const SolverConfig& solver, std::uint64_t master_seed,
                    int drop_index, UlPowerPolicy ul_power = UlPowerPolicy::Full);

ExperimentResult run_experiment(const ExperimentSpec& spec, int jobs = 1);

// Linear-interpolated order statistic, pct in [0, 100]. Throws on empty input.
double percentile(std::vector<double> samples, double pct);

void write_samples_csv(const ExperimentResult& result, const std::string& path);
void write_summary_csv(const ExperimentResult& result, const std::string& path);
void write_json(const ExperimentResult& result, const std::string& path);

// Debug dump of the drop's beta and gamma (rows = APs, columns = UEs).
void dump_channels(const ScenarioTemplate& base, Scheme scheme,
                   const SolverConfig& solver, std::uint64_t master_seed,
                   int drop_index, const std::string& dir);

}  // namespace cfpilot
