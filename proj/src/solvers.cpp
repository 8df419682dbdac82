#include "cfpilot/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cfpilot/errors.hpp"

namespace cfpilot {

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Random: return "random";
    case Scheme::Greedy: return "greedy";
    case Scheme::Repulsive: return "repulsive";
    case Scheme::ImsEs: return "ims-es";
    case Scheme::ImsVs: return "ims-vs";
    case Scheme::Exhaustive: return "exhaustive";
    case Scheme::Ideal: return "ideal";
  }
  return "unknown";
}

std::optional<Scheme> scheme_from_name(std::string_view name) {
  for (Scheme s : {Scheme::Random, Scheme::Greedy, Scheme::Repulsive, Scheme::ImsEs,
                   Scheme::ImsVs, Scheme::Exhaustive, Scheme::Ideal}) {
    if (scheme_name(s) == name) return s;
  }
  return std::nullopt;
}

Bounds es_bounds(int num_ues, int num_clusters) {
  return {num_ues / num_clusters, (num_ues + num_clusters - 1) / num_clusters};
}

Bounds vs_bounds(int num_ues, int num_clusters) {
  return {num_ues >= num_clusters ? 1 : 0, num_ues};
}

PilotSolution initial_feasible(int num_ues, int num_clusters, int lb, int ub,
                               const DiversityMatrix& dm, Rng& rng) {
  if (num_clusters < 1) throw std::invalid_argument("initial_feasible: need >= 1 cluster");
  if (lb < 0 || ub < lb) throw std::invalid_argument("initial_feasible: bad bounds");
  const long long capacity = static_cast<long long>(ub) * num_clusters;
  const long long floor = static_cast<long long>(lb) * num_clusters;
  if (floor > num_ues || capacity < num_ues) {
    throw std::invalid_argument("initial_feasible: bounds cannot host " +
                                std::to_string(num_ues) + " UEs");
  }

  std::vector<int> order(num_ues);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  std::vector<int> assign(num_ues, -1);
  std::vector<int> size(num_clusters, 0);
  int next = 0;
  for (int p = 0; p < num_clusters; ++p) {
    for (int i = 0; i < lb; ++i) {
      assign[order[next++]] = p;
      ++size[p];
    }
  }
  std::vector<int> open;
  for (; next < num_ues; ++next) {
    open.clear();
    for (int p = 0; p < num_clusters; ++p) {
      if (size[p] < ub) open.push_back(p);
    }
    const int p = open[rng.uniform_index(open.size())];
    assign[order[next]] = p;
    ++size[p];
  }
  return make_solution(std::move(assign), num_clusters, lb, ub, dm);
}

long long local_search(PilotSolution& sol, MoveMatrix& mm, const DiversityMatrix& dm,
                       bool weighted_swap, std::vector<double>* fitness_trace) {
  const int k_count = sol.num_ues();
  const int p_count = sol.num_clusters();
  long long sweeps = 0;
  bool improved = true;
  while (improved) {
    improved = false;
    ++sweeps;
    for (int k = 0; k < k_count; ++k) {
      const int i = sol.pilot_of_ue[k];
      if (sol.cluster_size[i] <= sol.lb) continue;
      for (int j = 0; j < p_count; ++j) {
        if (j == i || sol.cluster_size[j] >= sol.ub) continue;
        if (delta_one_move(sol, mm, k, j) > 0.0) {
          apply_one_move(sol, mm, dm, k, j);
          if (fitness_trace) fitness_trace->push_back(cached_fitness(sol));
          improved = true;
          break;
        }
      }
    }
    for (int a = 0; a < k_count; ++a) {
      for (int b = a + 1; b < k_count; ++b) {
        if (sol.pilot_of_ue[a] == sol.pilot_of_ue[b]) continue;
        if (delta_swap(sol, mm, dm, a, b, weighted_swap) > 0.0) {
          apply_swap(sol, mm, dm, a, b);
          if (fitness_trace) fitness_trace->push_back(cached_fitness(sol));
          improved = true;
          break;
        }
      }
    }
  }
  return sweeps;
}

namespace {

struct Move {
  bool is_swap = false;
  int k = 0;
  int j = 0;  // target cluster (one-move) or second UE (swap)
};

// All feasible single reassignments and cross-cluster exchanges.
std::vector<Move> feasible_moves(const PilotSolution& sol, bool one_moves, bool swaps) {
  std::vector<Move> out;
  const int k_count = sol.num_ues();
  const int p_count = sol.num_clusters();
  if (one_moves) {
    for (int k = 0; k < k_count; ++k) {
      const int i = sol.pilot_of_ue[k];
      if (sol.cluster_size[i] <= sol.lb) continue;
      for (int j = 0; j < p_count; ++j) {
        if (j != i && sol.cluster_size[j] < sol.ub) out.push_back({false, k, j});
      }
    }
  }
  if (swaps) {
    for (int a = 0; a < k_count; ++a) {
      for (int b = a + 1; b < k_count; ++b) {
        if (sol.pilot_of_ue[a] != sol.pilot_of_ue[b]) out.push_back({true, a, b});
      }
    }
  }
  return out;
}

double move_delta(const PilotSolution& sol, const MoveMatrix& mm,
                  const DiversityMatrix& dm, const Move& mv, bool weighted_swap) {
  return mv.is_swap ? delta_swap(sol, mm, dm, mv.k, mv.j, weighted_swap)
                    : delta_one_move(sol, mm, mv.k, mv.j);
}

void apply(PilotSolution& sol, MoveMatrix& mm, const DiversityMatrix& dm, const Move& mv) {
  if (mv.is_swap) {
    apply_swap(sol, mm, dm, mv.k, mv.j);
  } else {
    apply_one_move(sol, mm, dm, mv.k, mv.j);
  }
}

}  // namespace

void weak_perturbation(PilotSolution& sol, MoveMatrix& mm, const DiversityMatrix& dm,
                       int rounds, int candidates, Rng& rng, bool weighted_swap) {
  for (int r = 0; r < rounds; ++r) {
    const std::vector<Move> moves = feasible_moves(sol, true, true);
    if (moves.empty()) return;
    Move best = moves[rng.uniform_index(moves.size())];
    double best_delta = move_delta(sol, mm, dm, best, weighted_swap);
    for (int c = 0; c < candidates; ++c) {
      const Move& cand = moves[rng.uniform_index(moves.size())];
      const double d = move_delta(sol, mm, dm, cand, weighted_swap);
      if (d > best_delta) {
        best = cand;
        best_delta = d;
      }
    }
    apply(sol, mm, dm, best);
  }
}

void robust_perturbation(PilotSolution& sol, MoveMatrix& mm, const DiversityMatrix& dm,
                         int num_moves, Rng& rng) {
  for (int i = 0; i < num_moves; ++i) {
    const std::vector<Move> moves = feasible_moves(sol, true, true);
    if (moves.empty()) return;
    apply(sol, mm, dm, moves[rng.uniform_index(moves.size())]);
  }
}

SolverResult ims(const DiversityMatrix& dm, int num_clusters, int lb, int ub,
                 const ImsParams& params, Rng& rng) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const int k_count = dm.num_ues();
  const int candidates = params.weak_candidates < 0 ? k_count : params.weak_candidates;
  const int robust_moves = static_cast<int>(
      std::lround(params.robust_theta * k_count / num_clusters));

  SolverResult res;
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };
  auto budget_ok = [&] {
    return params.deterministic ? res.sweeps < params.sweep_budget
                                : elapsed() < params.time_budget_s;
  };

  PilotSolution best;
  double best_f = -std::numeric_limits<double>::infinity();
  PilotSolution cur;
  MoveMatrix mm;
  for (int i = 0; i < std::max(1, params.initial_solutions); ++i) {
    if (i > 0 && !budget_ok()) break;
    cur = initial_feasible(k_count, num_clusters, lb, ub, dm, rng);
    mm = build_move_matrix(cur, dm);
    res.sweeps += local_search(cur, mm, dm, params.weighted_swap_delta);
    ++res.local_searches;
    const double f = cached_fitness(cur);
    if (f > best_f) {
      best = cur;
      best_f = f;
    }
  }

  cur = best;
  mm = build_move_matrix(cur, dm);
  while (budget_ok()) {
    int misses = 0;
    while (misses < params.non_improve_limit && budget_ok()) {
      weak_perturbation(cur, mm, dm, params.weak_rounds, candidates, rng,
                        params.weighted_swap_delta);
      res.sweeps += local_search(cur, mm, dm, params.weighted_swap_delta);
      ++res.local_searches;
      const double f = cached_fitness(cur);
      if (f > best_f) {
        best = cur;
        best_f = f;
        misses = 0;
      } else {
        ++misses;
      }
    }
    if (budget_ok()) robust_perturbation(cur, mm, dm, robust_moves, rng);
  }

  // return with freshly built bookkeeping so the c/s invariants hold exactly
  res.best = make_solution(best.pilot_of_ue, num_clusters, lb, ub, dm);
  res.fitness = fitness(res.best, dm);
  res.elapsed_s = elapsed();
  return res;
}

std::vector<int> random_assignment(int num_ues, int num_pilots, Rng& rng) {
  if (num_pilots < 1) throw std::invalid_argument("random_assignment: need >= 1 pilot");
  std::vector<int> out(num_ues);
  for (int& p : out) p = static_cast<int>(rng.uniform_index(num_pilots));
  return out;
}

std::vector<int> greedy_assignment(const LargeScale& ls, const RadioParams& radio,
                                   int antennas_per_ap, int num_pilots, int iters,
                                   Rng& rng) {
  const int m_count = static_cast<int>(ls.beta.rows);
  const int k_count = static_cast<int>(ls.beta.cols);
  std::vector<int> p = random_assignment(k_count, num_pilots, rng);
  if (iters < 0) iters = k_count;

  // total fading per UE, reused in the contamination metric
  std::vector<double> beta_sum(k_count, 0.0);
  for (int k = 0; k < k_count; ++k) {
    for (int m = 0; m < m_count; ++m) beta_sum[k] += ls.beta(m, k);
  }
  const std::vector<double> full_power(k_count, 1.0);
  for (int it = 0; it < iters; ++it) {
    const EstimationStats es = estimation_stats(ls, p, radio);
    const std::vector<double> rate = ul_rates(ls, es, p, full_power, radio, antennas_per_ap);
    int worst = 0;
    for (int k = 1; k < k_count; ++k) {
      if (rate[k] < rate[worst]) worst = k;
    }
    int best_pilot = 0;
    double best_metric = std::numeric_limits<double>::infinity();
    for (int q = 0; q < num_pilots; ++q) {
      double metric = 0.0;
      for (int k = 0; k < k_count; ++k) {
        if (k != worst && p[k] == q) metric += beta_sum[k];
      }
      if (metric < best_metric) {
        best_metric = metric;
        best_pilot = q;
      }
    }
    if (p[worst] == best_pilot) break;  // fixed point
    p[worst] = best_pilot;
  }
  return p;
}

std::vector<int> repulsive_assignment(const DiversityMatrix& dm, int num_pilots,
                                      Rng& rng) {
  const int k_count = dm.num_ues();
  if (num_pilots < 1) throw std::invalid_argument("repulsive_assignment: need >= 1 pilot");
  std::vector<int> order(k_count);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<int> assign(k_count);
  for (int i = 0; i < k_count; ++i) assign[order[i]] = i % num_pilots;

  const Bounds b = es_bounds(k_count, num_pilots);
  PilotSolution sol = make_solution(std::move(assign), num_pilots, b.lb, b.ub, dm);
  MoveMatrix mm = build_move_matrix(sol, dm);

  // pairwise-exchange hill climbing on the unweighted total diversity
  bool improved = true;
  while (improved) {
    improved = false;
    for (int a = 0; a < k_count; ++a) {
      for (int bb = a + 1; bb < k_count; ++bb) {
        if (sol.pilot_of_ue[a] == sol.pilot_of_ue[bb]) continue;
        if (delta_swap(sol, mm, dm, a, bb, false) > 0.0) {
          apply_swap(sol, mm, dm, a, bb);
          improved = true;
        }
      }
    }
  }
  return sol.pilot_of_ue;
}

namespace {

struct ExhaustiveState {
  const DiversityMatrix* dm = nullptr;
  const ExhaustiveParams* params = nullptr;
  const RateContext* rate_ctx = nullptr;
  int k_count = 0, p_count = 0, lb = 0, ub = 0;
  std::vector<int> assign, size;
  std::vector<double> div;
  int used = 0;
  long long visited = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<int> best;

  double leaf_value() {
    if (params->objective == ExhaustiveObjective::Fitness) {
      double f = 0.0;
      for (int p = 0; p < used; ++p) f += div[p] / size[p];
      return f;
    }
    const std::vector<double> eta(k_count, 1.0);
    const EstimationStats es = estimation_stats(*rate_ctx->ls, assign, *rate_ctx->radio);
    const std::vector<double> r = ul_rates(*rate_ctx->ls, es, assign, eta,
                                           *rate_ctx->radio, rate_ctx->antennas_per_ap);
    double sum = 0.0;
    for (double v : r) sum += v;
    return sum;
  }

  // minimum UEs still required to lift every cluster to lb
  int deficit() const {
    int need = 0;
    for (int p = 0; p < used; ++p) need += std::max(0, lb - size[p]);
    need += (p_count - used) * lb;
    return need;
  }

  void dfs(int t) {
    if (t == k_count) {
      if (deficit() > 0) return;
      if (++visited > params->budget) {
        throw BudgetExceededError("exhaustive_assignment: budget exceeded after " +
                                  std::to_string(params->budget) + " assignments");
      }
      const double v = leaf_value();
      if (v > best_value) {
        best_value = v;
        best = assign;
      }
      return;
    }
    const int limit = std::min(used, p_count - 1);  // used == new label
    for (int j = 0; j <= limit; ++j) {
      const bool opens = j == used;
      if (!opens && size[j] >= ub) continue;
      double gain = 0.0;
      for (int u = 0; u < t; ++u) {
        if (assign[u] == j) gain += dm->d(t, u);
      }
      assign[t] = j;
      ++size[j];
      div[j] += gain;
      if (opens) ++used;
      if (deficit() <= k_count - t - 1) dfs(t + 1);
      if (opens) --used;
      div[j] -= gain;
      --size[j];
      assign[t] = -1;
    }
  }
};

}  // namespace

std::vector<int> exhaustive_assignment(const DiversityMatrix& dm, int num_pilots,
                                       int lb, int ub, const ExhaustiveParams& params,
                                       const RateContext* rate_ctx) {
  const int k_count = dm.num_ues();
  if (num_pilots < 1) throw std::invalid_argument("exhaustive_assignment: need >= 1 pilot");
  if (lb < 0 || ub < lb) throw std::invalid_argument("exhaustive_assignment: bad bounds");
  if (static_cast<long long>(ub) * num_pilots < k_count ||
      static_cast<long long>(lb) * num_pilots > k_count) {
    throw std::invalid_argument("exhaustive_assignment: infeasible bounds");
  }
  if (params.objective == ExhaustiveObjective::SumUlRate &&
      (rate_ctx == nullptr || rate_ctx->ls == nullptr || rate_ctx->radio == nullptr)) {
    throw std::invalid_argument("exhaustive_assignment: rate objective needs a RateContext");
  }

  ExhaustiveState st;
  st.dm = &dm;
  st.params = &params;
  st.rate_ctx = rate_ctx;
  st.k_count = k_count;
  st.p_count = num_pilots;
  st.lb = lb;
  st.ub = ub;
  st.assign.assign(k_count, -1);
  st.size.assign(num_pilots, 0);
  st.div.assign(num_pilots, 0.0);
  st.dfs(0);
  if (st.best.empty()) {
    throw std::invalid_argument("exhaustive_assignment: no feasible assignment");
  }
  return st.best;
}

std::vector<int> ideal_assignment(int num_ues) {
  std::vector<int> out(num_ues);
  std::iota(out.begin(), out.end(), 0);
  return out;
}

}  // namespace cfpilot
