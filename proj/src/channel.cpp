#include "cfpilot/channel.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "cfpilot/errors.hpp"
#include "cfpilot/rates.hpp"

namespace cfpilot {

double hata_offset_db(const RadioParams& radio) {
  const double lf = std::log10(radio.carrier_mhz);
  return 46.3 + 33.9 * lf - 13.82 * std::log10(radio.ap_height_m) -
         (1.1 * lf - 0.7) * radio.ue_height_m + (1.56 * lf - 0.8);
}

double path_loss_db(double d_km, const RadioParams& radio) {
  if (d_km < 0) throw std::invalid_argument("path_loss_db: negative distance");
  const double off = hata_offset_db(radio);
  const double d0 = radio.d0_m / 1000.0;
  const double d1 = radio.d1_m / 1000.0;
  if (d_km > d1) return -off - 35.0 * std::log10(d_km);
  if (d_km > d0) return -off - 15.0 * std::log10(d1) - 20.0 * std::log10(d_km);
  return -off - 15.0 * std::log10(d1) - 20.0 * std::log10(d0);
}

LargeScale large_scale(const Topology& topo, const RadioParams& radio, Rng& shadow_rng) {
  radio.validate();
  const int m_count = topo.num_aps();
  const int k_count = topo.num_ues();
  LargeScale ls;
  ls.beta = Mat(m_count, k_count);
  ls.pl_db = Mat(m_count, k_count);
  ls.shadow_db = Mat(m_count, k_count);
  for (int m = 0; m < m_count; ++m) {
    for (int k = 0; k < k_count; ++k) {
      const double d = wrap_distance(topo.aps[m], topo.ues[k], topo.area_km);
      const double pl = path_loss_db(d, radio);
      const double sh = radio.shadow_std_db * shadow_rng.normal();
      ls.pl_db(m, k) = pl;
      ls.shadow_db(m, k) = sh;
      ls.beta(m, k) = std::pow(10.0, (pl + sh) / 10.0);
    }
  }
  return ls;
}

LargeScale large_scale(const Scenario& sc) {
  Rng rng(derive_seed(sc.seed, 0, Stream::Shadowing));
  return large_scale(sc.topology, sc.radio, rng);
}

EstimationStats estimation_stats(const LargeScale& ls, std::span<const int> pilot_of_ue,
                                 const RadioParams& radio) {
  const int m_count = static_cast<int>(ls.beta.rows);
  const int k_count = static_cast<int>(ls.beta.cols);
  if (static_cast<int>(pilot_of_ue.size()) != k_count) {
    throw std::invalid_argument("estimation_stats: assignment length != K");
  }
  for (int p : pilot_of_ue) {
    if (p < 0) throw std::invalid_argument("estimation_stats: negative pilot id");
  }
  const double rho_p = radio.pilot_power_mw / noise_power_mw(radio);
  const double tau_rho = radio.num_pilots * rho_p;
  const double amp = std::sqrt(tau_rho);

  EstimationStats es;
  es.c = Mat(m_count, k_count);
  es.gamma = Mat(m_count, k_count);
  for (int m = 0; m < m_count; ++m) {
    for (int k = 0; k < k_count; ++k) {
      double den = 1.0;
      for (int k2 = 0; k2 < k_count; ++k2) {
        if (pilot_of_ue[k2] == pilot_of_ue[k]) den += tau_rho * ls.beta(m, k2);
      }
      const double c = amp * ls.beta(m, k) / den;
      es.c(m, k) = c;
      es.gamma(m, k) = amp * ls.beta(m, k) * c;
    }
  }
  return es;
}

namespace {

using cd = std::complex<double>;

cd unit_cn(Rng& rng) {  // CN(0,1)
  return cd(rng.normal(), rng.normal()) * 0.7071067811865475244;
}

struct Welford {
  double mean = 0.0, m2 = 0.0;
  long n = 0;
  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  double var() const { return n > 1 ? m2 / (n - 1) : 0.0; }
};

}  // namespace

UlDecomposition simulate_ul_decomposition(const LargeScale& ls,
                                          std::span<const int> pilot_of_ue,
                                          const RadioParams& radio, int antennas_per_ap,
                                          std::span<const double> ul_eta, int num_draws,
                                          std::uint64_t seed, long long op_budget) {
  const int m_count = static_cast<int>(ls.beta.rows);
  const int k_count = static_cast<int>(ls.beta.cols);
  const int l_count = antennas_per_ap;
  if (static_cast<int>(pilot_of_ue.size()) != k_count) {
    throw std::invalid_argument("simulate_ul_decomposition: assignment length != K");
  }
  if (num_draws < 2) throw std::invalid_argument("simulate_ul_decomposition: need >= 2 draws");
  const long long ops = static_cast<long long>(m_count) * k_count * l_count * num_draws;
  if (ops > op_budget) {
    throw InstanceTooLargeError("simulate_ul_decomposition: M*K*L*draws = " +
                                std::to_string(ops) + " exceeds budget " +
                                std::to_string(op_budget));
  }

  std::vector<double> eta(k_count, 1.0);
  if (!ul_eta.empty()) {
    if (static_cast<int>(ul_eta.size()) != k_count) {
      throw std::invalid_argument("simulate_ul_decomposition: ul_eta length != K");
    }
    eta.assign(ul_eta.begin(), ul_eta.end());
  }

  const double noise_mw = noise_power_mw(radio);
  const double rho_p = radio.pilot_power_mw / noise_mw;
  const double rho_u = radio.ul_power_mw / noise_mw;
  const double pilot_amp = std::sqrt(radio.num_pilots * rho_p);
  const EstimationStats es = estimation_stats(ls, pilot_of_ue, radio);

  Rng rng(seed);
  const int batches = 25;
  const int per_batch = num_draws / batches;
  const int draws = per_batch * batches;

  // per-draw accumulators, reset per batch
  std::vector<cd> g(static_cast<std::size_t>(m_count) * k_count * l_count);
  std::vector<cd> ghat(g.size());
  std::vector<cd> a_row(k_count);  // a_row[k2] = sum_m ghat_mk^H g_mk2 for current k

  auto idx = [&](int m, int k, int l) {
    return (static_cast<std::size_t>(m) * k_count + k) * l_count + l;
  };

  std::vector<cd> a_self(static_cast<std::size_t>(draws) * k_count);
  std::vector<double> cpi_draw(a_self.size()), noise_draw(a_self.size());

  for (int b = 0; b < batches; ++b) {
    for (int t = 0; t < per_batch; ++t) {
      // channels
      for (int m = 0; m < m_count; ++m) {
        for (int k = 0; k < k_count; ++k) {
          const double sd = std::sqrt(ls.beta(m, k));
          for (int l = 0; l < l_count; ++l) g[idx(m, k, l)] = sd * unit_cn(rng);
        }
      }
      // pilot observation and MMSE estimate, one despread vector per (m,k)
      for (int m = 0; m < m_count; ++m) {
        for (int k = 0; k < k_count; ++k) {
          for (int l = 0; l < l_count; ++l) {
            cd y(0.0, 0.0);
            for (int k2 = 0; k2 < k_count; ++k2) {
              if (pilot_of_ue[k2] == pilot_of_ue[k]) y += g[idx(m, k2, l)];
            }
            ghat[idx(m, k, l)] = es.c(m, k) * (pilot_amp * y + unit_cn(rng));
          }
        }
      }
      // NOTE: co-pilot UEs share one despread observation; the loop above
      // redraws the additive noise per k, which is fine because only UE k's
      // own estimate enters its combining statistics.
      const int row = b * per_batch + t;
      for (int k = 0; k < k_count; ++k) {
        for (int k2 = 0; k2 < k_count; ++k2) {
          cd acc(0.0, 0.0);
          for (int m = 0; m < m_count; ++m) {
            for (int l = 0; l < l_count; ++l) {
              acc += std::conj(ghat[idx(m, k, l)]) * g[idx(m, k2, l)];
            }
          }
          a_row[k2] = acc;
        }
        // explicit data symbols for the interference term
        cd cpi(0.0, 0.0);
        for (int k2 = 0; k2 < k_count; ++k2) {
          if (k2 == k) continue;
          cpi += std::sqrt(rho_u * eta[k2]) * a_row[k2] * unit_cn(rng);
        }
        // explicit receiver noise filtered by the combiner
        cd nz(0.0, 0.0);
        for (int m = 0; m < m_count; ++m) {
          for (int l = 0; l < l_count; ++l) {
            nz += std::conj(ghat[idx(m, k, l)]) * unit_cn(rng);
          }
        }
        const std::size_t di = static_cast<std::size_t>(row) * k_count + k;
        a_self[di] = a_row[k];
        cpi_draw[di] = std::norm(cpi);
        noise_draw[di] = std::norm(nz);
      }
    }
  }

  UlDecomposition out;
  out.draws = draws;
  out.ds_power.assign(k_count, 0.0);
  out.bu_power.assign(k_count, 0.0);
  out.cpi_power.assign(k_count, 0.0);
  out.noise_power.assign(k_count, 0.0);
  out.ds_amp.assign(k_count, 0.0);
  out.ds_amp_se.assign(k_count, 0.0);
  out.cpi_se.assign(k_count, 0.0);
  out.sinr.assign(k_count, 0.0);
  out.sinr_se.assign(k_count, 0.0);

  for (int k = 0; k < k_count; ++k) {
    cd a_mean(0.0, 0.0);
    for (int r = 0; r < draws; ++r) {
      a_mean += a_self[static_cast<std::size_t>(r) * k_count + k];
    }
    a_mean /= static_cast<double>(draws);
    const double scale = rho_u * eta[k];
    double bu = 0.0, cpi = 0.0, nz = 0.0;
    for (int r = 0; r < draws; ++r) {
      const std::size_t di = static_cast<std::size_t>(r) * k_count + k;
      bu += std::norm(a_self[di] - a_mean);
      cpi += cpi_draw[di];
      nz += noise_draw[di];
    }
    bu = scale * bu / draws;
    cpi /= draws;
    nz /= draws;
    const double ds = scale * std::norm(a_mean);
    out.ds_power[k] = ds;
    out.bu_power[k] = bu;
    out.cpi_power[k] = cpi;
    out.noise_power[k] = nz;
    out.ds_amp[k] = std::sqrt(scale) * std::abs(a_mean);
    out.sinr[k] = ds / (bu + cpi + nz);

    // batch means for the standard errors
    Welford w_sinr, w_amp, w_cpi;
    for (int b = 0; b < batches; ++b) {
      cd am(0.0, 0.0);
      double bbu = 0.0, bcpi = 0.0, bnz = 0.0;
      for (int t = 0; t < per_batch; ++t) {
        const std::size_t di = static_cast<std::size_t>(b * per_batch + t) * k_count + k;
        am += a_self[di];
        bcpi += cpi_draw[di];
        bnz += noise_draw[di];
      }
      am /= static_cast<double>(per_batch);
      for (int t = 0; t < per_batch; ++t) {
        const std::size_t di = static_cast<std::size_t>(b * per_batch + t) * k_count + k;
        bbu += std::norm(a_self[di] - am);
      }
      bbu = scale * bbu / per_batch;
      bcpi /= per_batch;
      bnz /= per_batch;
      const double bds = scale * std::norm(am);
      w_sinr.add(bds / (bbu + bcpi + bnz));
      w_amp.add(std::sqrt(scale) * std::abs(am));
      w_cpi.add(bcpi);
    }
    out.sinr_se[k] = std::sqrt(w_sinr.var() / batches);
    out.ds_amp_se[k] = std::sqrt(w_amp.var() / batches);
    out.cpi_se[k] = std::sqrt(w_cpi.var() / batches);
  }
  return out;
}

}  // namespace cfpilot
