#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cfpilot/matrix.hpp"
#include "cfpilot/scenario.hpp"

namespace cfpilot {

// Large-scale fading between every AP and UE. beta is linear; the dB parts
// are kept for diagnostics and feature construction.
struct LargeScale {
  Mat beta;       // M x K
  Mat pl_db;      // M x K
  Mat shadow_db;  // M x K
};

// MMSE channel estimation statistics. gamma(m,k) is the per-antenna variance
// of the channel estimate; it shrinks as more UEs share k's pilot.
struct EstimationStats {
  Mat c;      // M x K estimator scaling
  Mat gamma;  // M x K
};

// Fixed offset of the three-slope model (COST231 Hata style), in dB.
double hata_offset_db(const RadioParams& radio);

// Three-slope path loss in dB (negative gain), d in km.
double path_loss_db(double d_km, const RadioParams& radio);

LargeScale large_scale(const Topology& topo, const RadioParams& radio, Rng& shadow_rng);
// Convenience overload deriving the shadowing stream from the scenario seed.
LargeScale large_scale(const Scenario& sc);

// pilot_of_ue groups UEs sharing a pilot; values are arbitrary nonnegative
// group ids (the ideal scheme passes one id per UE). Pilot length and power
// always come from radio.num_pilots / radio.pilot_power_mw.
EstimationStats estimation_stats(const LargeScale& ls, std::span<const int> pilot_of_ue,
                                 const RadioParams& radio);

// Per-UE uplink term statistics estimated from explicit small-scale fading,
// pilot noise, data symbols and receiver noise draws. Used to cross-check the
// closed-form SINR; not part of the main pipeline.
struct UlDecomposition {
  std::vector<double> ds_power, bu_power, cpi_power, noise_power;
  std::vector<double> ds_amp;     // |E{combined desired amplitude}|
  std::vector<double> ds_amp_se;  // batch standard error of ds_amp
  std::vector<double> cpi_se;     // batch standard error of cpi_power
  std::vector<double> sinr;       // ds / (bu + cpi + noise)
  std::vector<double> sinr_se;    // batch standard error of sinr
  int draws = 0;
};

UlDecomposition simulate_ul_decomposition(const LargeScale& ls,
                                          std::span<const int> pilot_of_ue,
                                          const RadioParams& radio, int antennas_per_ap,
                                          std::span<const double> ul_eta, int num_draws,
                                          std::uint64_t seed,
                                          long long op_budget = 2'000'000'000);

}  // namespace cfpilot
