#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <vector>

#include "cfpilot/rates.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cfpilot;

namespace {

struct Inst {
  LargeScale ls;
  EstimationStats es;
  std::vector<int> pilot;
  RadioParams radio;
};

Inst make_inst(std::uint64_t seed, int m_count, int k_count, std::vector<int> pilot,
               int num_pilots) {
  Inst in;
  in.radio.num_pilots = num_pilots;
  Rng rng(seed);
  in.ls = oracle::wrap_ls(oracle::random_beta(m_count, k_count, rng));
  in.pilot = std::move(pilot);
  in.es = estimation_stats(in.ls, in.pilot, in.radio);
  return in;
}

void check_close(const std::vector<double>& got, const std::vector<double>& want,
                 double eps = 1e-12) {
  REQUIRE(got.size() == want.size());
  for (std::size_t k = 0; k < got.size(); ++k) {
    CHECK(got[k] == doctest::Approx(want[k]).epsilon(eps));
  }
}

}  // namespace

TEST_CASE("noise power matches the physical formula") {
  RadioParams r;
  CHECK(noise_power_mw(r) ==
        doctest::Approx(6.362410294494551e-10).scale(0.0).epsilon(1e-12));

  RadioParams wide = r;
  wide.bandwidth_hz *= 2.0;
  CHECK(noise_power_mw(wide) ==
        doctest::Approx(2.0 * noise_power_mw(r)).scale(0.0).epsilon(1e-15));

  RadioParams quiet = r;
  quiet.noise_figure_db = 0.0;  // back to thermal kTB
  CHECK(noise_power_mw(quiet) ==
        doctest::Approx(r.bandwidth_hz * 1.381e-23 * r.noise_temp_k * 1e3)
            .scale(0.0)
            .epsilon(1e-15));
}

TEST_CASE("throughput applies bandwidth, overhead, and duplexing factors") {
  RadioParams r;
  CHECK(throughput_bps(1.0, r) == doctest::Approx(9.5e6).epsilon(1e-12));
  CHECK(throughput_bps(0.0, r) == 0.0);
  CHECK(throughput_bps(2.5, r) == doctest::Approx(2.375e7).epsilon(1e-12));

  RadioParams all_pilots = r;
  all_pilots.num_pilots = all_pilots.coherence_samples;
  CHECK(throughput_bps(1.0, all_pilots) == 0.0);
}

TEST_CASE("uplink terms for one user match hand-derived coefficients") {
  Inst in = make_inst(7, 3, 1, {0}, 2);
  const int l_count = 2;
  const UlSinrTerms t = ul_sinr_terms(in.ls, in.es, in.pilot, in.radio, l_count);
  REQUIRE(t.a.size() == 1);
  REQUIRE(t.b.rows == 1);

  const Mat g = oracle::gamma_of(in.ls.beta, in.pilot, in.radio);
  const double rho_u = in.radio.ul_power_mw / oracle::noise_mw(in.radio);
  double gsum = 0.0, gb = 0.0;
  for (std::size_t m = 0; m < in.ls.beta.rows; ++m) {
    gsum += g(m, 0);
    gb += g(m, 0) * in.ls.beta(m, 0);
  }
  const double l = l_count;
  CHECK(t.a[0] == doctest::Approx(l * l * rho_u * gsum * gsum).scale(0.0).epsilon(1e-12));
  CHECK(t.c[0] == doctest::Approx(l * gsum).scale(0.0).epsilon(1e-12));
  CHECK(t.b(0, 0) == doctest::Approx(l * rho_u * gb).scale(0.0).epsilon(1e-12));

  const std::vector<double> eta{1.0};
  const std::vector<double> s = ul_sinr(t, eta);
  CHECK(s[0] == doctest::Approx(t.a[0] / (t.b(0, 0) + t.c[0])).epsilon(1e-12));
}

TEST_CASE("uplink rates match the oracle with orthogonal pilots") {
  Inst in = make_inst(17, 4, 3, {0, 1, 2}, 3);
  const std::vector<double> eta{1.0, 0.55, 0.3};
  check_close(ul_rates(in.ls, in.es, in.pilot, eta, in.radio, 2),
              oracle::ul_rates(in.ls.beta, in.pilot, eta, in.radio, 2));
}

TEST_CASE("uplink rates match the oracle with a shared pilot") {
  Inst in = make_inst(18, 3, 2, {0, 0}, 1);
  const std::vector<double> eta{1.0, 0.8};
  check_close(ul_rates(in.ls, in.es, in.pilot, eta, in.radio, 1),
              oracle::ul_rates(in.ls.beta, in.pilot, eta, in.radio, 1));
}

TEST_CASE("uplink rates match the oracle on a mixed reuse instance") {
  Inst in = make_inst(19, 5, 6, {0, 1, 2, 0, 1, 2}, 3);
  Rng rng(97);
  std::vector<double> eta(6);
  for (double& e : eta) e = rng.uniform(0.1, 1.0);

  const auto lib = ul_rates(in.ls, in.es, in.pilot, eta, in.radio, 2);
  check_close(lib, oracle::ul_rates(in.ls.beta, in.pilot, eta, in.radio, 2));

  // the terms-based path is the same function
  const UlSinrTerms t = ul_sinr_terms(in.ls, in.es, in.pilot, in.radio, 2);
  const auto sinr = ul_sinr(t, eta);
  for (std::size_t k = 0; k < lib.size(); ++k) {
    CHECK(lib[k] == doctest::Approx(std::log2(1.0 + sinr[k])).epsilon(1e-12));
  }
}

TEST_CASE("downlink rates match the oracle") {
  for (std::uint64_t seed : {41u, 42u, 43u}) {
    Inst in = seed == 41u ? make_inst(seed, 4, 3, {0, 1, 2}, 3)
              : seed == 42u ? make_inst(seed, 3, 2, {0, 0}, 1)
                            : make_inst(seed, 5, 6, {0, 1, 2, 0, 1, 2}, 3);
    const int l_count = seed == 43u ? 2 : 1;
    const Mat dl_eta = dl_power_alloc(in.es);
    check_close(dl_rates(in.ls, in.es, in.pilot, dl_eta, in.radio, l_count),
                oracle::dl_rates(in.ls.beta, in.pilot, dl_eta, in.radio, l_count));
  }
}

TEST_CASE("single-link downlink rate reduces to the scalar closed form") {
  Inst in = make_inst(11, 1, 1, {0}, 2);
  const double g = in.es.gamma(0, 0);
  const double beta = in.ls.beta(0, 0);
  const double rho_d = in.radio.dl_power_mw / oracle::noise_mw(in.radio);
  for (int l_count : {1, 4}) {
    Mat dl_eta(1, 1);
    dl_eta(0, 0) = 1.0 / g;  // AP spends its whole budget on the one user
    const auto rate = dl_rates(in.ls, in.es, in.pilot, dl_eta, in.radio, l_count);
    const double l = l_count;
    const double sinr = l * l * rho_d * g / (l * rho_d * beta + 1.0);
    CHECK(rate[0] == doctest::Approx(std::log2(1.0 + sinr)).epsilon(1e-12));
  }
}

TEST_CASE("max-min with one user returns full power") {
  Inst in = make_inst(23, 4, 1, {0}, 2);
  const UlSinrTerms t = ul_sinr_terms(in.ls, in.es, in.pilot, in.radio, 1);
  const auto eta = maxmin_ul_power(t);
  REQUIRE(eta.size() == 1);
  CHECK(eta[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("max-min keeps full power on a mirror-symmetric pair") {
  Mat beta(2, 2);
  beta(0, 0) = 1e-7;
  beta(1, 0) = 2e-8;
  beta(0, 1) = 2e-8;
  beta(1, 1) = 1e-7;
  const LargeScale ls = oracle::wrap_ls(std::move(beta));
  RadioParams radio;
  radio.num_pilots = 1;
  const std::vector<int> pilot{0, 0};
  const EstimationStats es = estimation_stats(ls, pilot, radio);
  const UlSinrTerms t = ul_sinr_terms(ls, es, pilot, radio, 1);

  const auto eta = maxmin_ul_power(t);
  CHECK(eta[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(eta[1] == doctest::Approx(1.0).epsilon(1e-9));
  const auto sinr = ul_sinr(t, eta);
  CHECK(sinr[0] == doctest::Approx(sinr[1]).epsilon(1e-9));
}

TEST_CASE("max-min equalizes SINRs and saturates at least one user") {
  Inst in = make_inst(29, 6, 5, {0, 1, 0, 1, 0}, 2);
  const UlSinrTerms t = ul_sinr_terms(in.ls, in.es, in.pilot, in.radio, 1);
  const auto eta = maxmin_ul_power(t);
  REQUIRE(eta.size() == 5);

  double emax = 0.0;
  for (double e : eta) {
    CHECK(e >= 0.0);
    CHECK(e <= 1.0 + 1e-9);
    emax = std::max(emax, e);
  }
  CHECK(emax == doctest::Approx(1.0).epsilon(1e-9));

  // the final feasibility rescale trades a little equality for a better
  // minimum, so the spread bound is looser than the bisection tolerance
  const auto sinr = ul_sinr(t, eta);
  const auto [lo, hi] = std::minmax_element(sinr.begin(), sinr.end());
  CHECK(*hi - *lo <= 5e-3 * *hi);

  // full power is feasible, so the optimized minimum cannot be worse
  const auto full = ul_sinr(t, std::vector<double>(5, 1.0));
  CHECK(*lo >= *std::min_element(full.begin(), full.end()) * (1.0 - 1e-6));
}

TEST_CASE("max-min matches a fine grid search for two users") {
  Inst in = make_inst(31, 3, 2, {0, 0}, 1);
  const UlSinrTerms t = ul_sinr_terms(in.ls, in.es, in.pilot, in.radio, 1);
  const auto eta = maxmin_ul_power(t);
  const auto sinr = ul_sinr(t, eta);
  const double got = std::min(sinr[0], sinr[1]);

  double best = 0.0;
  const int n = 400;
  std::vector<double> probe(2);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      probe[0] = static_cast<double>(i) / n;
      probe[1] = static_cast<double>(j) / n;
      const auto s = ul_sinr(t, probe);
      best = std::max(best, std::min(s[0], s[1]));
    }
  }
  CHECK(got >= best * (1.0 - 2e-3));
}

TEST_CASE("downlink allocation saturates every AP power budget") {
  Inst in = make_inst(13, 5, 6, {0, 1, 2, 0, 1, 2}, 3);
  const Mat eta = dl_power_alloc(in.es);
  REQUIRE(eta.rows == 5);
  REQUIRE(eta.cols == 6);
  for (std::size_t m = 0; m < eta.rows; ++m) {
    double used = 0.0;
    for (std::size_t k = 0; k < eta.cols; ++k) used += eta(m, k) * in.es.gamma(m, k);
    CHECK(used == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("downlink allocation closed forms for simple estimate variances") {
  EstimationStats es;
  es.gamma = Mat(2, 3);
  for (double& v : es.gamma.a) v = 0.25;
  const Mat eta = dl_power_alloc(es);
  for (double v : eta.a) CHECK(v == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

  EstimationStats one;
  one.gamma = Mat(3, 1);
  one.gamma(0, 0) = 0.5;
  one.gamma(1, 0) = 0.125;
  one.gamma(2, 0) = 2.0;
  const Mat solo = dl_power_alloc(one);
  CHECK(solo(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(solo(1, 0) == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(solo(2, 0) == doctest::Approx(0.5).epsilon(1e-15));
}
