#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cfpilot/clustering.hpp"
#include "cfpilot/rates.hpp"

namespace cfpilot {

// Enum values double as RNG stream tags: append only, never renumber.
enum class Scheme : int {
  Random = 0,
  Greedy = 1,
  Repulsive = 2,
  ImsEs = 3,
  ImsVs = 4,
  Exhaustive = 5,
  Ideal = 6,
};

std::string_view scheme_name(Scheme s);
std::optional<Scheme> scheme_from_name(std::string_view name);

struct ImsParams {
  int initial_solutions = 10;     // multi-start count
  int non_improve_limit = 20;     // weak-perturbation rounds without improvement
  int weak_rounds = 3;            // moves applied per weak perturbation
  int weak_candidates = -1;       // extra candidates per round; -1 means K
  double robust_theta = 1.5;      // robust strength = round(theta * K / clusters)
  double time_budget_s = 1.0;
  bool deterministic = false;     // budget in local-search sweeps, not wall clock
  long long sweep_budget = 2000;
  bool weighted_swap_delta = true;
};

struct SolverResult {
  PilotSolution best;
  double fitness = 0.0;        // exact recomputation on best
  long long sweeps = 0;        // local-search sweeps consumed
  long long local_searches = 0;
  double elapsed_s = 0.0;
};

struct Bounds {
  int lb = 0;
  int ub = 0;
};
Bounds es_bounds(int num_ues, int num_clusters);  // as equal as possible
// Sizes float freely, but no pilot goes unused (lb 1 whenever K >= clusters).
Bounds vs_bounds(int num_ues, int num_clusters);

// Every cluster first receives lb random UEs; the rest go to uniformly random
// non-full clusters. Throws std::invalid_argument when lb/ub cannot host K.
PilotSolution initial_feasible(int num_ues, int num_clusters, int lb, int ub,
                               const DiversityMatrix& dm, Rng& rng);

// First-improvement sweeps over single reassignments then pairwise exchanges
// until a full sweep applies nothing. Returns sweeps executed; appends the
// cached fitness after every accepted move to *trace when given.
long long local_search(PilotSolution& sol, MoveMatrix& mm, const DiversityMatrix& dm,
                       bool weighted_swap = true,
                       std::vector<double>* fitness_trace = nullptr);

// `rounds` applied moves; each one is the best of 1 + `candidates` uniformly
// sampled feasible neighbors of the current solution.
void weak_perturbation(PilotSolution& sol, MoveMatrix& mm, const DiversityMatrix& dm,
                       int rounds, int candidates, Rng& rng, bool weighted_swap = true);

// num_moves unconditional random feasible single reassignments (falls back to
// exchanges when the capacity bounds admit no reassignment).
void robust_perturbation(PilotSolution& sol, MoveMatrix& mm, const DiversityMatrix& dm,
                         int num_moves, Rng& rng);

// Multi-start local search with weak perturbations until non_improve_limit
// misses, then a robust shake; repeats until the time or sweep budget runs out.
SolverResult ims(const DiversityMatrix& dm, int num_clusters, int lb, int ub,
                 const ImsParams& params, Rng& rng);

std::vector<int> random_assignment(int num_ues, int num_pilots, Rng& rng);

// Iteratively reassigns the lowest-rate UE to the pilot with the least total
// co-pilot fading; iters < 0 runs one pass per UE.
std::vector<int> greedy_assignment(const LargeScale& ls, const RadioParams& radio,
                                   int antennas_per_ap, int num_pilots, int iters,
                                   Rng& rng);

// Near-equal random clusters improved by pairwise-exchange hill climbing on
// the unweighted total diversity.
std::vector<int> repulsive_assignment(const DiversityMatrix& dm, int num_pilots,
                                      Rng& rng);

enum class ExhaustiveObjective { Fitness, SumUlRate };

struct ExhaustiveParams {
  long long budget = 10'000'000;  // canonical assignments enumerated
  ExhaustiveObjective objective = ExhaustiveObjective::Fitness;
};

struct RateContext {
  const LargeScale* ls = nullptr;
  const RadioParams* radio = nullptr;
  int antennas_per_ap = 1;
};

// Enumerates set partitions in canonical (restricted growth) form so cluster
// relabelings are visited once. Throws BudgetExceededError past the budget.
std::vector<int> exhaustive_assignment(const DiversityMatrix& dm, int num_pilots,
                                       int lb, int ub, const ExhaustiveParams& params,
                                       const RateContext* rate_ctx = nullptr);

// Contamination-free reference: every UE in its own group, same pilot overhead.
std::vector<int> ideal_assignment(int num_ues);

}  // namespace cfpilot
