#include "cfpilot/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace cfpilot {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

std::vector<double> ExperimentResult::select_ul(Scheme s, double sweep_value) const {
  std::vector<double> out;
  for (const Sample& x : samples) {
    if (x.scheme == s && x.sweep_value == sweep_value) out.push_back(x.ul_tput_bps);
  }
  return out;
}

std::vector<double> ExperimentResult::select_dl(Scheme s, double sweep_value) const {
  std::vector<double> out;
  for (const Sample& x : samples) {
    if (x.scheme == s && x.sweep_value == sweep_value) out.push_back(x.dl_tput_bps);
  }
  return out;
}

Scenario make_drop_scenario(const ScenarioTemplate& base, std::uint64_t master_seed,
                            int drop_index) {
  base.radio.validate();
  Scenario sc;
  sc.radio = base.radio;
  sc.seed = derive_seed(master_seed, static_cast<std::uint64_t>(drop_index));
  Rng place(derive_seed(sc.seed, 0, Stream::Placement));
  sc.topology = generate_topology(base.num_aps, base.num_ues, base.antennas_per_ap,
                                  base.area_km, place);
  return sc;
}

namespace {

std::vector<int> solve_assignment(Scheme scheme, const Scenario& sc,
                                  const LargeScale& ls, const SolverConfig& solver) {
  const int k_count = sc.topology.num_ues();
  const int pilots = sc.radio.num_pilots;
  Rng rng(derive_seed(sc.seed, 0, Stream::Solver, static_cast<std::uint64_t>(scheme)));
  switch (scheme) {
    case Scheme::Random:
      return random_assignment(k_count, pilots, rng);
    case Scheme::Greedy:
      return greedy_assignment(ls, sc.radio, sc.topology.antennas_per_ap, pilots,
                               solver.greedy_iters, rng);
    case Scheme::Ideal:
      return ideal_assignment(k_count);
    case Scheme::Repulsive: {
      const DiversityMatrix dm =
          build_diversity(sc, &ls, solver.feature, solver.loc_error_std_m);
      return repulsive_assignment(dm, pilots, rng);
    }
    case Scheme::ImsEs:
    case Scheme::ImsVs: {
      const DiversityMatrix dm =
          build_diversity(sc, &ls, solver.feature, solver.loc_error_std_m);
      const Bounds b = scheme == Scheme::ImsEs ? es_bounds(k_count, pilots)
                                               : vs_bounds(k_count, pilots);
      return ims(dm, pilots, b.lb, b.ub, solver.ims, rng).best.pilot_of_ue;
    }
    case Scheme::Exhaustive: {
      const DiversityMatrix dm =
          build_diversity(sc, &ls, solver.feature, solver.loc_error_std_m);
      const Bounds b = es_bounds(k_count, pilots);
      const RateContext ctx{&ls, &sc.radio, sc.topology.antennas_per_ap};
      return exhaustive_assignment(dm, pilots, b.lb, b.ub, solver.exhaustive, &ctx);
    }
  }
  throw std::invalid_argument("solve_assignment: unknown scheme");
}

}  // namespace

DropResult run_drop(const ScenarioTemplate& base, Scheme scheme,
                    const SolverConfig& solver, std::uint64_t master_seed,
                    int drop_index, UlPowerPolicy ul_power) {
  const Scenario sc = make_drop_scenario(base, master_seed, drop_index);
  const LargeScale ls = large_scale(sc);
  const std::vector<int> assign = solve_assignment(scheme, sc, ls, solver);

  const int l_count = sc.topology.antennas_per_ap;
  const EstimationStats es = estimation_stats(ls, assign, sc.radio);
  const UlSinrTerms terms = ul_sinr_terms(ls, es, assign, sc.radio, l_count);
  const std::vector<double> ul_eta = ul_power == UlPowerPolicy::MaxMin
                                         ? maxmin_ul_power(terms)
                                         : std::vector<double>(assign.size(), 1.0);
  std::vector<double> ul = ul_sinr(terms, ul_eta);
  for (double& v : ul) v = std::log2(1.0 + v);
  const Mat dl_eta = dl_power_alloc(es);
  const std::vector<double> dl = dl_rates(ls, es, assign, dl_eta, sc.radio, l_count);

  DropResult out;
  out.ul_tput_bps.resize(ul.size());
  out.dl_tput_bps.resize(dl.size());
  for (std::size_t k = 0; k < ul.size(); ++k) {
    out.ul_tput_bps[k] = throughput_bps(ul[k], sc.radio);
    out.dl_tput_bps[k] = throughput_bps(dl[k], sc.radio);
  }
  return out;
}

namespace {

void apply_sweep_value(const std::string& param, double value, ScenarioTemplate& base,
                       SolverConfig& solver) {
  auto as_int = [&](const char* what) {
    const int v = static_cast<int>(std::llround(value));
    if (v < 1) throw std::invalid_argument(std::string("sweep: bad value for ") + what);
    return v;
  };
  if (param == "num_aps") {
    base.num_aps = as_int("num_aps");
  } else if (param == "num_ues") {
    base.num_ues = as_int("num_ues");
  } else if (param == "num_pilots") {
    base.radio.num_pilots = as_int("num_pilots");
  } else if (param == "antennas_per_ap") {
    base.antennas_per_ap = as_int("antennas_per_ap");
  } else if (param == "loc_error_m") {
    if (value < 0) throw std::invalid_argument("sweep: negative loc_error_m");
    solver.loc_error_std_m = value;
  } else if (param == "feature") {
    const int v = static_cast<int>(std::llround(value));
    if (v < 0 || v > 2) throw std::invalid_argument("sweep: feature must be 0, 1 or 2");
    solver.feature = static_cast<FeatureSource>(v);
  } else {
    throw std::invalid_argument("sweep: unknown parameter " + param);
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, int jobs) {
  if (spec.drops < 1) throw std::invalid_argument("run_experiment: drops must be >= 1");
  if (spec.schemes.empty()) throw std::invalid_argument("run_experiment: no schemes");
  spec.base.radio.validate();

  ExperimentResult res;
  res.schemes = spec.schemes;
  if (spec.sweep) {
    if (spec.sweep->values.empty()) throw std::invalid_argument("run_experiment: empty sweep");
    // reject unknown params or bad values here, before any worker can throw
    for (double v : spec.sweep->values) {
      ScenarioTemplate base = spec.base;
      SolverConfig solver = spec.solver;
      apply_sweep_value(spec.sweep->param, v, base, solver);
    }
    res.sweep_param = spec.sweep->param;
    res.sweep_values = spec.sweep->values;
  }
  const int n_sweep = static_cast<int>(res.sweep_values.size());
  const int n_schemes = static_cast<int>(spec.schemes.size());
  const long long cells = static_cast<long long>(n_sweep) * spec.drops * n_schemes;

  struct Cell {
    DropResult result;
    std::string error;
  };
  std::vector<Cell> grid(cells);

  auto run_cell = [&](long long idx) {
    const int si = static_cast<int>(idx / (static_cast<long long>(spec.drops) * n_schemes));
    const int rem = static_cast<int>(idx % (static_cast<long long>(spec.drops) * n_schemes));
    const int drop = rem / n_schemes;
    const int ci = rem % n_schemes;
    ScenarioTemplate base = spec.base;
    SolverConfig solver = spec.solver;
    if (spec.sweep) apply_sweep_value(spec.sweep->param, res.sweep_values[si], base, solver);
    try {
      grid[idx].result =
          run_drop(base, spec.schemes[ci], solver, spec.seed, drop, spec.ul_power);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "sweep=" << res.sweep_values[si] << " drop=" << drop
          << " scheme=" << scheme_name(spec.schemes[ci]) << ": " << e.what();
      grid[idx].error = msg.str();
    }
  };

  int workers = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
  workers = static_cast<int>(std::max<long long>(1, std::min<long long>(workers, cells)));
  if (workers == 1) {
    for (long long i = 0; i < cells; ++i) run_cell(i);
  } else {
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (long long i = next.fetch_add(1); i < cells; i = next.fetch_add(1)) {
          run_cell(i);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  for (long long i = 0; i < cells; ++i) {
    const int si = static_cast<int>(i / (static_cast<long long>(spec.drops) * n_schemes));
    const int rem = static_cast<int>(i % (static_cast<long long>(spec.drops) * n_schemes));
    const int drop = rem / n_schemes;
    const int ci = rem % n_schemes;
    if (!grid[i].error.empty()) {
      res.errors.push_back(grid[i].error);
      continue;
    }
    const DropResult& dr = grid[i].result;
    for (std::size_t k = 0; k < dr.ul_tput_bps.size(); ++k) {
      res.samples.push_back({spec.schemes[ci], res.sweep_values[si], drop,
                             static_cast<int>(k), dr.ul_tput_bps[k], dr.dl_tput_bps[k]});
    }
  }
  return res;
}

double percentile(std::vector<double> samples, double pct) {
  if (samples.empty()) throw std::invalid_argument("percentile: empty sample");
  if (pct < 0.0 || pct > 100.0) throw std::invalid_argument("percentile: pct outside [0,100]");
  std::sort(samples.begin(), samples.end());
  const double pos = pct / 100.0 * (static_cast<double>(samples.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, samples.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return samples[lo] + frac * (samples[hi] - samples[lo]);
}

void write_samples_csv(const ExperimentResult& result, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "scheme,sweep_param,sweep_value,drop,ue,ul_tput_bps,dl_tput_bps\n";
  for (const Sample& s : result.samples) {
    out << scheme_name(s.scheme) << ',' << result.sweep_param << ','
        << fmt_double(s.sweep_value) << ',' << s.drop << ',' << s.ue << ','
        << fmt_double(s.ul_tput_bps) << ',' << fmt_double(s.dl_tput_bps) << '\n';
  }
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

namespace {

struct SummaryRow {
  Scheme scheme;
  double sweep_value;
  const char* metric;
  double value;
};

std::vector<SummaryRow> summarize(const ExperimentResult& result) {
  std::vector<SummaryRow> rows;
  for (Scheme s : result.schemes) {
    for (double v : result.sweep_values) {
      const std::vector<double> ul = result.select_ul(s, v);
      const std::vector<double> dl = result.select_dl(s, v);
      if (ul.empty()) continue;
      auto mean = [](const std::vector<double>& x) {
        double acc = 0.0;
        for (double e : x) acc += e;
        return acc / static_cast<double>(x.size());
      };
      rows.push_back({s, v, "mean_ul_tput_bps", mean(ul)});
      rows.push_back({s, v, "p5_ul_tput_bps", percentile(ul, 5)});
      rows.push_back({s, v, "p50_ul_tput_bps", percentile(ul, 50)});
      rows.push_back({s, v, "p95_ul_tput_bps", percentile(ul, 95)});
      rows.push_back({s, v, "mean_dl_tput_bps", mean(dl)});
      rows.push_back({s, v, "p5_dl_tput_bps", percentile(dl, 5)});
      rows.push_back({s, v, "p50_dl_tput_bps", percentile(dl, 50)});
      rows.push_back({s, v, "p95_dl_tput_bps", percentile(dl, 95)});
    }
  }
  return rows;
}

}  // namespace

void write_summary_csv(const ExperimentResult& result, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "scheme,sweep_value,metric,value\n";
  for (const SummaryRow& r : summarize(result)) {
    out << scheme_name(r.scheme) << ',' << fmt_double(r.sweep_value) << ',' << r.metric
        << ',' << fmt_double(r.value) << '\n';
  }
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

void write_json(const ExperimentResult& result, const std::string& path) {
  nlohmann::json j;
  j["sweep_param"] = result.sweep_param;
  j["sweep_values"] = result.sweep_values;
  j["errors"] = result.errors;
  nlohmann::json rows = nlohmann::json::array();
  for (const Sample& s : result.samples) {
    rows.push_back({{"scheme", scheme_name(s.scheme)},
                    {"sweep_value", s.sweep_value},
                    {"drop", s.drop},
                    {"ue", s.ue},
                    {"ul_tput_bps", s.ul_tput_bps},
                    {"dl_tput_bps", s.dl_tput_bps}});
  }
  j["samples"] = std::move(rows);
  nlohmann::json summary = nlohmann::json::array();
  for (const SummaryRow& r : summarize(result)) {
    summary.push_back({{"scheme", scheme_name(r.scheme)},
                       {"sweep_value", r.sweep_value},
                       {"metric", r.metric},
                       {"value", r.value}});
  }
  j["summary"] = std::move(summary);
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

void dump_channels(const ScenarioTemplate& base, Scheme scheme,
                   const SolverConfig& solver, std::uint64_t master_seed,
                   int drop_index, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const Scenario sc = make_drop_scenario(base, master_seed, drop_index);
  const LargeScale ls = large_scale(sc);
  const std::vector<int> assign = solve_assignment(scheme, sc, ls, solver);
  const EstimationStats es = estimation_stats(ls, assign, sc.radio);

  auto write_mat = [&](const Mat& m, const std::string& name) {
    std::ofstream out = open_out(dir + "/" + name);
    for (std::size_t r = 0; r < m.rows; ++r) {
      for (std::size_t c = 0; c < m.cols; ++c) {
        out << (c ? "," : "") << fmt_double(m(r, c));
      }
      out << '\n';
    }
    if (!out.good()) throw std::runtime_error("write failed: " + dir + "/" + name);
  };
  write_mat(ls.beta, "beta.csv");
  write_mat(es.gamma, "gamma.csv");
}

}  // namespace cfpilot
