#include "cfpilot/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfpilot {

double noise_power_mw(const RadioParams& radio) {
  constexpr double k_boltzmann = 1.381e-23;  // J/K
  const double figure = std::pow(10.0, radio.noise_figure_db / 10.0);
  const double watts = radio.bandwidth_hz * k_boltzmann * radio.noise_temp_k * figure;
  return watts * 1e3;
}

double throughput_bps(double rate_bpshz, const RadioParams& radio) {
  const double overhead = 1.0 - static_cast<double>(radio.num_pilots) / radio.coherence_samples;
  return radio.bandwidth_hz * overhead / 2.0 * rate_bpshz;
}

UlSinrTerms ul_sinr_terms(const LargeScale& ls, const EstimationStats& es,
                          std::span<const int> pilot_of_ue, const RadioParams& radio,
                          int antennas_per_ap) {
  const int m_count = static_cast<int>(ls.beta.rows);
  const int k_count = static_cast<int>(ls.beta.cols);
  if (!ls.beta.same_shape(es.gamma)) throw std::invalid_argument("ul_sinr_terms: shape mismatch");
  if (static_cast<int>(pilot_of_ue.size()) != k_count) {
    throw std::invalid_argument("ul_sinr_terms: assignment length != K");
  }
  const double l = antennas_per_ap;
  const double rho_u = radio.ul_power_mw / noise_power_mw(radio);

  UlSinrTerms t;
  t.a.resize(k_count);
  t.c.resize(k_count);
  t.b = Mat(k_count, k_count);
  for (int k = 0; k < k_count; ++k) {
    double gsum = 0.0;
    for (int m = 0; m < m_count; ++m) gsum += es.gamma(m, k);
    t.a[k] = l * l * rho_u * gsum * gsum;
    t.c[k] = l * gsum;
    for (int k2 = 0; k2 < k_count; ++k2) {
      double bu = 0.0;
      for (int m = 0; m < m_count; ++m) bu += es.gamma(m, k) * ls.beta(m, k2);
      double v = l * rho_u * bu;
      if (k2 != k && pilot_of_ue[k2] == pilot_of_ue[k]) {
        // coherent contamination: the co-pilot estimate is a scaled copy
        double amp = 0.0;
        for (int m = 0; m < m_count; ++m) {
          amp += es.gamma(m, k) * ls.beta(m, k2) / ls.beta(m, k);
        }
        v += l * l * rho_u * amp * amp;
      }
      t.b(k, k2) = v;
    }
  }
  return t;
}

std::vector<double> ul_sinr(const UlSinrTerms& t, std::span<const double> ul_eta) {
  const int k_count = static_cast<int>(t.a.size());
  if (static_cast<int>(ul_eta.size()) != k_count) {
    throw std::invalid_argument("ul_sinr: eta length != K");
  }
  std::vector<double> out(k_count);
  for (int k = 0; k < k_count; ++k) {
    double den = t.c[k];
    for (int k2 = 0; k2 < k_count; ++k2) den += t.b(k, k2) * ul_eta[k2];
    out[k] = t.a[k] * ul_eta[k] / den;
  }
  return out;
}

std::vector<double> ul_rates(const LargeScale& ls, const EstimationStats& es,
                             std::span<const int> pilot_of_ue,
                             std::span<const double> ul_eta, const RadioParams& radio,
                             int antennas_per_ap) {
  const UlSinrTerms t = ul_sinr_terms(ls, es, pilot_of_ue, radio, antennas_per_ap);
  std::vector<double> out = ul_sinr(t, ul_eta);
  for (double& v : out) v = std::log2(1.0 + v);
  return out;
}

std::vector<double> dl_rates(const LargeScale& ls, const EstimationStats& es,
                             std::span<const int> pilot_of_ue, const Mat& dl_eta,
                             const RadioParams& radio, int antennas_per_ap) {
  const int m_count = static_cast<int>(ls.beta.rows);
  const int k_count = static_cast<int>(ls.beta.cols);
  if (!ls.beta.same_shape(es.gamma) || !ls.beta.same_shape(dl_eta)) {
    throw std::invalid_argument("dl_rates: shape mismatch");
  }
  if (static_cast<int>(pilot_of_ue.size()) != k_count) {
    throw std::invalid_argument("dl_rates: assignment length != K");
  }
  const double l = antennas_per_ap;
  const double rho_d = radio.dl_power_mw / noise_power_mw(radio);

  std::vector<double> out(k_count);
  for (int k = 0; k < k_count; ++k) {
    double sig = 0.0;
    for (int m = 0; m < m_count; ++m) sig += std::sqrt(dl_eta(m, k)) * es.gamma(m, k);
    const double num = l * l * rho_d * sig * sig;

    double cpi = 0.0;
    for (int k2 = 0; k2 < k_count; ++k2) {
      if (k2 == k || pilot_of_ue[k2] != pilot_of_ue[k]) continue;
      double amp = 0.0;
      for (int m = 0; m < m_count; ++m) {
        amp += std::sqrt(dl_eta(m, k2)) * es.gamma(m, k2) * ls.beta(m, k) / ls.beta(m, k2);
      }
      cpi += amp * amp;
    }
    double bu = 0.0;
    for (int k2 = 0; k2 < k_count; ++k2) {
      for (int m = 0; m < m_count; ++m) bu += dl_eta(m, k2) * es.gamma(m, k2) * ls.beta(m, k);
    }
    const double den = rho_d * cpi + l * rho_d * bu + 1.0;
    out[k] = std::log2(1.0 + num / den);
  }
  return out;
}

Mat dl_power_alloc(const EstimationStats& es) {
  const int m_count = static_cast<int>(es.gamma.rows);
  const int k_count = static_cast<int>(es.gamma.cols);
  Mat eta(m_count, k_count);
  for (int m = 0; m < m_count; ++m) {
    double gsum = 0.0;
    for (int k = 0; k < k_count; ++k) gsum += es.gamma(m, k);
    const double v = 1.0 / gsum;
    for (int k = 0; k < k_count; ++k) eta(m, k) = v;
  }
  return eta;
}

namespace {

// Minimal eta with sinr_k(eta) = target for all k, found by the monotone
// fixed-point iteration eta_k <- target * (off-diagonal interference + c_k)
// / (a_k - target * b_kk). Returns false when the target is infeasible
// within eta <= 1.
bool solve_at_target(const UlSinrTerms& t, double target, std::vector<double>& eta) {
  const int k_count = static_cast<int>(t.a.size());
  for (int k = 0; k < k_count; ++k) {
    if (t.a[k] <= target * t.b(k, k)) return false;
  }
  std::vector<double> cur(k_count, 0.0), next(k_count);
  for (int it = 0; it < 500; ++it) {
    double diff = 0.0;
    for (int k = 0; k < k_count; ++k) {
      double inter = t.c[k];
      for (int k2 = 0; k2 < k_count; ++k2) {
        if (k2 != k) inter += t.b(k, k2) * cur[k2];
      }
      next[k] = target * inter / (t.a[k] - target * t.b(k, k));
      if (next[k] > 1.0 + 1e-9) return false;
      diff = std::max(diff, std::fabs(next[k] - cur[k]));
    }
    cur.swap(next);
    if (diff < 1e-13) break;
  }
  eta = cur;
  return true;
}

double min_sinr(const UlSinrTerms& t, const std::vector<double>& eta) {
  const std::vector<double> s = ul_sinr(t, eta);
  return *std::min_element(s.begin(), s.end());
}

}  // namespace

std::vector<double> maxmin_ul_power(const UlSinrTerms& t, double target_tol,
                                    int max_bisect) {
  const int k_count = static_cast<int>(t.a.size());
  if (k_count == 0) throw std::invalid_argument("maxmin_ul_power: empty instance");

  // No balanced target can exceed any UE's best-case SINR at full own power.
  double hi = std::numeric_limits<double>::infinity();
  for (int k = 0; k < k_count; ++k) {
    hi = std::min(hi, t.a[k] / (t.b(k, k) + t.c[k]));
  }
  double lo = 0.0;
  std::vector<double> eta(k_count, 0.0), trial;
  for (int it = 0; it < max_bisect && hi - lo > target_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (solve_at_target(t, mid, trial)) {
      lo = mid;
      eta = trial;
    } else {
      hi = mid;
    }
  }
  if (eta.empty() || *std::max_element(eta.begin(), eta.end()) <= 0.0) {
    // degenerate fallback under a zero-width bracket
    eta.assign(k_count, 1.0);
    return eta;
  }

  // Polish: normalize the largest coefficient to exactly 1, re-balance at the
  // achieved min SINR, repeat. Each round is feasible by construction and the
  // equalized target is non-decreasing.
  for (int round = 0; round < 64; ++round) {
    const double mx = *std::max_element(eta.begin(), eta.end());
    for (double& v : eta) v = std::min(1.0, v / mx);
    const double target = min_sinr(t, eta);
    if (!solve_at_target(t, target, trial)) break;
    eta = trial;
    if (1.0 - *std::max_element(eta.begin(), eta.end()) < 1e-10) break;
  }
  const double mx = *std::max_element(eta.begin(), eta.end());
  for (double& v : eta) v = std::min(1.0, v / mx);
  return eta;
}

}  // namespace cfpilot
