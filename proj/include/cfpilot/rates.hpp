#pragma once

#include <span>
#include <vector>

#include "cfpilot/channel.hpp"

namespace cfpilot {

struct PowerControl {
  std::vector<double> ul_eta;  // K entries in [0,1]
  Mat dl_eta;                  // M x K, per AP m: sum_k dl_eta(m,k) gamma(m,k) <= 1
};

struct RateReport {
  std::vector<double> ul_rate_bpshz;
  std::vector<double> dl_rate_bpshz;
  std::vector<double> ul_throughput_bps;
  std::vector<double> dl_throughput_bps;
};

// Noise power in mW: k_B * T0 * B * noise figure.
double noise_power_mw(const RadioParams& radio);

// Coefficients of the uplink SINR as a linear-fractional function of the UL
// power coefficients: sinr_k(eta) = a[k] eta_k / (sum_k' b(k,k') eta_k' + c[k]).
// b's diagonal carries the self beam-uncertainty term.
struct UlSinrTerms {
  std::vector<double> a;
  std::vector<double> c;
  Mat b;  // K x K
};

UlSinrTerms ul_sinr_terms(const LargeScale& ls, const EstimationStats& es,
                          std::span<const int> pilot_of_ue, const RadioParams& radio,
                          int antennas_per_ap);

std::vector<double> ul_sinr(const UlSinrTerms& t, std::span<const double> ul_eta);

// Closed-form uplink rates, bits/s/Hz.
std::vector<double> ul_rates(const LargeScale& ls, const EstimationStats& es,
                             std::span<const int> pilot_of_ue,
                             std::span<const double> ul_eta, const RadioParams& radio,
                             int antennas_per_ap);

// Closed-form downlink rates, bits/s/Hz.
std::vector<double> dl_rates(const LargeScale& ls, const EstimationStats& es,
                             std::span<const int> pilot_of_ue, const Mat& dl_eta,
                             const RadioParams& radio, int antennas_per_ap);

// Max-min uplink power control: bisection on the common SINR target with a
// monotone fixed-point feasibility solve. Output equalizes all SINRs and
// saturates at least one eta_k = 1.
std::vector<double> maxmin_ul_power(const UlSinrTerms& t, double target_tol = 1e-4,
                                    int max_bisect = 64);

// Per-AP equal-fraction downlink allocation: eta(m,k) = 1 / sum_k' gamma(m,k'),
// saturating each AP's power constraint.
Mat dl_power_alloc(const EstimationStats& es);

double throughput_bps(double rate_bpshz, const RadioParams& radio);

}  // namespace cfpilot
