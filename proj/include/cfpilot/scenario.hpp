#pragma once

#include <cstdint>
#include <vector>

#include "cfpilot/rng.hpp"

namespace cfpilot {

// Radio-level constants. Defaults model a 20 MHz system at 1.9 GHz with the
// three-slope path loss and 8 dB shadowing commonly used for cell-free
// massive MIMO evaluations.
struct RadioParams {
  double bandwidth_hz = 20e6;
  double carrier_mhz = 1900.0;
  double ap_height_m = 15.0;
  double ue_height_m = 1.65;
  double d0_m = 10.0;  // three-slope breakpoints
  double d1_m = 50.0;
  double shadow_std_db = 8.0;
  double noise_figure_db = 9.0;
  double noise_temp_k = 290.0;
  double pilot_power_mw = 100.0;
  double ul_power_mw = 100.0;
  double dl_power_mw = 200.0;
  int coherence_samples = 200;  // tau_c
  int num_pilots = 10;          // tau_p, orthogonal pilots per coherence block

  void validate() const;  // throws std::invalid_argument
};

struct Coord {
  double x_km = 0.0;
  double y_km = 0.0;
};

struct Topology {
  double area_km = 1.0;     // side of the square coverage area, torus metric
  int antennas_per_ap = 1;  // L
  std::vector<Coord> aps;
  std::vector<Coord> ues;

  int num_aps() const { return static_cast<int>(aps.size()); }
  int num_ues() const { return static_cast<int>(ues.size()); }
};

// One realized drop: fixed positions plus the seed all per-drop randomness
// (shadowing, clustering noise, solver streams) is derived from.
struct Scenario {
  RadioParams radio;
  Topology topology;
  std::uint64_t seed = 1;
};

Topology generate_topology(int num_aps, int num_ues, int antennas_per_ap,
                           double area_km, Rng& rng);

// Torus (wraparound) distance on the square of side area_km.
double wrap_distance(const Coord& a, const Coord& b, double area_km);

}  // namespace cfpilot
