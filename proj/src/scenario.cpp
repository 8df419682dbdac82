#include "cfpilot/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cfpilot {

void RadioParams::validate() const {
  auto bad = [](const std::string& what) { throw std::invalid_argument("RadioParams: " + what); };
  if (bandwidth_hz <= 0) bad("bandwidth_hz must be positive");
  if (carrier_mhz <= 0) bad("carrier_mhz must be positive");
  if (ap_height_m <= 0 || ue_height_m <= 0) bad("antenna heights must be positive");
  if (!(d0_m > 0 && d0_m < d1_m)) bad("need 0 < d0_m < d1_m");
  if (shadow_std_db < 0) bad("shadow_std_db must be nonnegative");
  if (noise_temp_k <= 0) bad("noise_temp_k must be positive");
  if (pilot_power_mw <= 0 || ul_power_mw <= 0 || dl_power_mw <= 0) bad("powers must be positive");
  if (coherence_samples < 1) bad("coherence_samples must be >= 1");
  if (num_pilots < 1) bad("num_pilots must be >= 1");
  if (num_pilots > coherence_samples) bad("num_pilots cannot exceed coherence_samples");
}

Topology generate_topology(int num_aps, int num_ues, int antennas_per_ap,
                           double area_km, Rng& rng) {
  if (num_aps < 1 || num_ues < 1) throw std::invalid_argument("topology: need at least one AP and one UE");
  if (antennas_per_ap < 1) throw std::invalid_argument("topology: antennas_per_ap must be >= 1");
  if (area_km <= 0) throw std::invalid_argument("topology: area_km must be positive");

  Topology t;
  t.area_km = area_km;
  t.antennas_per_ap = antennas_per_ap;
  t.aps.reserve(num_aps);
  t.ues.reserve(num_ues);
  for (int m = 0; m < num_aps; ++m) {
    t.aps.push_back({rng.uniform(0.0, area_km), rng.uniform(0.0, area_km)});
  }
  for (int k = 0; k < num_ues; ++k) {
    t.ues.push_back({rng.uniform(0.0, area_km), rng.uniform(0.0, area_km)});
  }
  return t;
}

double wrap_distance(const Coord& a, const Coord& b, double area_km) {
  if (area_km <= 0) throw std::invalid_argument("wrap_distance: area_km must be positive");
  double dx = std::fabs(a.x_km - b.x_km);
  double dy = std::fabs(a.y_km - b.y_km);
  dx = std::min(dx, area_km - dx);
  dy = std::min(dy, area_km - dy);
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace cfpilot
