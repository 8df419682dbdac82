#pragma once

#include <span>
#include <vector>

#include "cfpilot/channel.hpp"
#include "cfpilot/matrix.hpp"
#include "cfpilot/scenario.hpp"

namespace cfpilot {

enum class FeatureSource { Location, Lsf, Both };

// Pairwise UE diversity. Symmetric, zero diagonal, nonnegative.
struct DiversityMatrix {
  Mat d;  // K x K
  FeatureSource source = FeatureSource::Location;
  int num_ues() const { return static_cast<int>(d.rows); }
};

// Location uses the torus metric on (optionally error-perturbed) coordinates.
// Lsf uses the per-UE vector of large-scale fading in dB. Both concatenates
// z-scored coordinates and dB fading and uses plain Euclidean distance.
// The error stream is derived from sc.seed, so different error levels reuse
// the same perturbation draw scaled by loc_error_std_m.
DiversityMatrix build_diversity(const Scenario& sc, const LargeScale* ls,
                                FeatureSource source, double loc_error_std_m);

// Partition of UEs into capacity-bounded pilot clusters together with the
// incremental bookkeeping the local search needs: per-cluster diversity sums
// c and sizes s.
struct PilotSolution {
  std::vector<int> pilot_of_ue;     // 0-based cluster id per UE
  std::vector<double> cluster_div;  // c, one entry per cluster
  std::vector<int> cluster_size;    // s
  int lb = 0;
  int ub = 0;

  int num_ues() const { return static_cast<int>(pilot_of_ue.size()); }
  int num_clusters() const { return static_cast<int>(cluster_size.size()); }
};

// Builds c/s from the assignment and validates Lb <= s_p <= Ub.
PilotSolution make_solution(std::vector<int> pilot_of_ue, int num_clusters, int lb,
                            int ub, const DiversityMatrix& dm);

// Objective recomputed from scratch in O(K^2): sum over clusters of the
// intra-cluster pairwise diversity divided by the cluster size. Empty
// clusters contribute 0. This is the reference every delta is tested against.
double fitness(const PilotSolution& sol, const DiversityMatrix& dm);

// Same objective from the cached c/s state, O(tau_p).
double cached_fitness(const PilotSolution& sol);

// m(k,p) = summed diversity from UE k to every UE currently in cluster p.
// Row sums are invariant: sum_p m(k,p) = sum_k' d(k,k').
struct MoveMatrix {
  Mat m;  // K x num_clusters
};

MoveMatrix build_move_matrix(const PilotSolution& sol, const DiversityMatrix& dm);

// Exact fitness change of reassigning UE k from its cluster i to cluster j.
// Throws InfeasibleMoveError when j == i, s_i == lb or s_j == ub.
double delta_one_move(const PilotSolution& sol, const MoveMatrix& mm, int ue,
                      int to_cluster);

// Exact fitness change of exchanging the clusters of two UEs when
// size_weighted; with size_weighted = false returns the plain change of the
// unweighted cluster sums (both orderings coincide for equal-size clusters).
// Throws InfeasibleMoveError when both UEs share a cluster.
double delta_swap(const PilotSolution& sol, const MoveMatrix& mm,
                  const DiversityMatrix& dm, int ue_a, int ue_b,
                  bool size_weighted = true);

// O(K) state updates keeping (p, c, s, m) consistent with a full rebuild.
void apply_one_move(PilotSolution& sol, MoveMatrix& mm, const DiversityMatrix& dm,
                    int ue, int to_cluster);
void apply_swap(PilotSolution& sol, MoveMatrix& mm, const DiversityMatrix& dm,
                int ue_a, int ue_b);

}  // namespace cfpilot
