#include "cfpilot/clustering.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cfpilot/errors.hpp"

namespace cfpilot {

namespace {

// Plain Euclidean distance matrix over per-UE feature rows.
Mat feature_distances(const Mat& feats) {
  const int k_count = static_cast<int>(feats.rows);
  Mat d(k_count, k_count);
  for (int a = 0; a < k_count; ++a) {
    for (int b = a + 1; b < k_count; ++b) {
      double acc = 0.0;
      for (std::size_t j = 0; j < feats.cols; ++j) {
        const double v = feats(a, j) - feats(b, j);
        acc += v * v;
      }
      d(a, b) = d(b, a) = std::sqrt(acc);
    }
  }
  return d;
}

void zscore_columns(Mat& feats) {
  const int rows = static_cast<int>(feats.rows);
  for (std::size_t j = 0; j < feats.cols; ++j) {
    double mean = 0.0;
    for (int i = 0; i < rows; ++i) mean += feats(i, j);
    mean /= rows;
    double var = 0.0;
    for (int i = 0; i < rows; ++i) {
      const double v = feats(i, j) - mean;
      var += v * v;
    }
    const double sd = std::sqrt(var / rows);
    for (int i = 0; i < rows; ++i) {
      feats(i, j) = sd > 0.0 ? (feats(i, j) - mean) / sd : 0.0;
    }
  }
}

}  // namespace

DiversityMatrix build_diversity(const Scenario& sc, const LargeScale* ls,
                                FeatureSource source, double loc_error_std_m) {
  const Topology& topo = sc.topology;
  const int k_count = topo.num_ues();
  if (source != FeatureSource::Location && ls == nullptr) {
    throw std::invalid_argument("build_diversity: source needs large-scale fading");
  }
  if (ls != nullptr && static_cast<int>(ls->beta.cols) != k_count) {
    throw std::invalid_argument("build_diversity: fading/topology UE count mismatch");
  }

  // Same error stream regardless of the std, so sweeping the error level
  // rescales one fixed perturbation instead of redrawing it.
  std::vector<Coord> pos = topo.ues;
  if (loc_error_std_m > 0.0) {
    Rng noise(derive_seed(sc.seed, 0, Stream::LocationError));
    const double std_km = loc_error_std_m / 1000.0;
    for (Coord& c : pos) {
      c.x_km = std::fmod(c.x_km + std_km * noise.normal(), topo.area_km);
      c.y_km = std::fmod(c.y_km + std_km * noise.normal(), topo.area_km);
      if (c.x_km < 0) c.x_km += topo.area_km;
      if (c.y_km < 0) c.y_km += topo.area_km;
    }
  }

  DiversityMatrix dm;
  dm.source = source;
  if (source == FeatureSource::Location) {
    dm.d = Mat(k_count, k_count);
    for (int a = 0; a < k_count; ++a) {
      for (int b = a + 1; b < k_count; ++b) {
        dm.d(a, b) = dm.d(b, a) = wrap_distance(pos[a], pos[b], topo.area_km);
      }
    }
    return dm;
  }

  const int m_count = static_cast<int>(ls->beta.rows);
  // dB-domain fading; linear beta spans too many orders of magnitude to give
  // a usable Euclidean geometry
  if (source == FeatureSource::Lsf) {
    Mat feats(k_count, m_count);
    for (int k = 0; k < k_count; ++k) {
      for (int m = 0; m < m_count; ++m) {
        feats(k, m) = ls->pl_db(m, k) + ls->shadow_db(m, k);
      }
    }
    dm.d = feature_distances(feats);
    return dm;
  }

  Mat feats(k_count, 2 + m_count);
  for (int k = 0; k < k_count; ++k) {
    feats(k, 0) = pos[k].x_km;
    feats(k, 1) = pos[k].y_km;
    for (int m = 0; m < m_count; ++m) {
      feats(k, 2 + m) = ls->pl_db(m, k) + ls->shadow_db(m, k);
    }
  }
  zscore_columns(feats);
  dm.d = feature_distances(feats);
  return dm;
}

PilotSolution make_solution(std::vector<int> pilot_of_ue, int num_clusters, int lb,
                            int ub, const DiversityMatrix& dm) {
  const int k_count = static_cast<int>(pilot_of_ue.size());
  if (k_count != dm.num_ues()) {
    throw std::invalid_argument("make_solution: assignment/diversity size mismatch");
  }
  if (num_clusters < 1) throw std::invalid_argument("make_solution: need >= 1 cluster");
  if (lb < 0 || ub < lb) throw std::invalid_argument("make_solution: bad bounds");

  PilotSolution sol;
  sol.pilot_of_ue = std::move(pilot_of_ue);
  sol.cluster_div.assign(num_clusters, 0.0);
  sol.cluster_size.assign(num_clusters, 0);
  sol.lb = lb;
  sol.ub = ub;
  for (int k = 0; k < k_count; ++k) {
    const int p = sol.pilot_of_ue[k];
    if (p < 0 || p >= num_clusters) {
      throw std::invalid_argument("make_solution: cluster id out of range");
    }
    ++sol.cluster_size[p];
  }
  for (int p = 0; p < num_clusters; ++p) {
    if (sol.cluster_size[p] < lb || sol.cluster_size[p] > ub) {
      throw std::invalid_argument("make_solution: cluster " + std::to_string(p) +
                                  " size " + std::to_string(sol.cluster_size[p]) +
                                  " outside [" + std::to_string(lb) + ", " +
                                  std::to_string(ub) + "]");
    }
  }
  for (int a = 0; a < k_count; ++a) {
    for (int b = a + 1; b < k_count; ++b) {
      if (sol.pilot_of_ue[a] == sol.pilot_of_ue[b]) {
        sol.cluster_div[sol.pilot_of_ue[a]] += dm.d(a, b);
      }
    }
  }
  return sol;
}

double fitness(const PilotSolution& sol, const DiversityMatrix& dm) {
  const int k_count = sol.num_ues();
  std::vector<double> div(sol.num_clusters(), 0.0);
  std::vector<int> size(sol.num_clusters(), 0);
  for (int k = 0; k < k_count; ++k) ++size[sol.pilot_of_ue[k]];
  for (int a = 0; a < k_count; ++a) {
    for (int b = a + 1; b < k_count; ++b) {
      if (sol.pilot_of_ue[a] == sol.pilot_of_ue[b]) {
        div[sol.pilot_of_ue[a]] += dm.d(a, b);
      }
    }
  }
  double f = 0.0;
  for (int p = 0; p < sol.num_clusters(); ++p) {
    if (size[p] > 0) f += div[p] / size[p];
  }
  return f;
}

double cached_fitness(const PilotSolution& sol) {
  double f = 0.0;
  for (int p = 0; p < sol.num_clusters(); ++p) {
    if (sol.cluster_size[p] > 0) f += sol.cluster_div[p] / sol.cluster_size[p];
  }
  return f;
}

MoveMatrix build_move_matrix(const PilotSolution& sol, const DiversityMatrix& dm) {
  const int k_count = sol.num_ues();
  MoveMatrix mm;
  mm.m = Mat(k_count, sol.num_clusters());
  for (int k = 0; k < k_count; ++k) {
    for (int k2 = 0; k2 < k_count; ++k2) {
      mm.m(k, sol.pilot_of_ue[k2]) += dm.d(k, k2);
    }
  }
  return mm;
}

namespace {

void check_one_move(const PilotSolution& sol, int ue, int to_cluster) {
  if (ue < 0 || ue >= sol.num_ues() || to_cluster < 0 || to_cluster >= sol.num_clusters()) {
    throw std::invalid_argument("one-move: index out of range");
  }
  const int from = sol.pilot_of_ue[ue];
  if (from == to_cluster) throw InfeasibleMoveError("one-move: UE already in target cluster");
  if (sol.cluster_size[from] <= sol.lb) {
    throw InfeasibleMoveError("one-move: source cluster at lower bound");
  }
  if (sol.cluster_size[to_cluster] >= sol.ub) {
    throw InfeasibleMoveError("one-move: target cluster at upper bound");
  }
}

void check_swap(const PilotSolution& sol, int ue_a, int ue_b) {
  if (ue_a < 0 || ue_a >= sol.num_ues() || ue_b < 0 || ue_b >= sol.num_ues()) {
    throw std::invalid_argument("swap: index out of range");
  }
  if (sol.pilot_of_ue[ue_a] == sol.pilot_of_ue[ue_b]) {
    throw InfeasibleMoveError("swap: UEs share a cluster");
  }
}

}  // namespace

double delta_one_move(const PilotSolution& sol, const MoveMatrix& mm, int ue,
                      int to_cluster) {
  check_one_move(sol, ue, to_cluster);
  const int i = sol.pilot_of_ue[ue];
  const int j = to_cluster;
  const double ci = sol.cluster_div[i];
  const double cj = sol.cluster_div[j];
  const int si = sol.cluster_size[i];
  const int sj = sol.cluster_size[j];
  // the 0/0 cases: a singleton source leaves nothing behind, an empty target
  // contributed nothing before
  const double i_after = si > 1 ? (ci - mm.m(ue, i)) / (si - 1) : 0.0;
  const double j_before = sj > 0 ? cj / sj : 0.0;
  return (cj + mm.m(ue, j)) / (sj + 1) - j_before + i_after - ci / si;
}

double delta_swap(const PilotSolution& sol, const MoveMatrix& mm,
                  const DiversityMatrix& dm, int ue_a, int ue_b, bool size_weighted) {
  check_swap(sol, ue_a, ue_b);
  const int i = sol.pilot_of_ue[ue_a];
  const int j = sol.pilot_of_ue[ue_b];
  const double dab = dm.d(ue_a, ue_b);
  const double dci = mm.m(ue_b, i) - mm.m(ue_a, i) - dab;
  const double dcj = mm.m(ue_a, j) - mm.m(ue_b, j) - dab;
  if (!size_weighted) return dci + dcj;
  return dci / sol.cluster_size[i] + dcj / sol.cluster_size[j];
}

void apply_one_move(PilotSolution& sol, MoveMatrix& mm, const DiversityMatrix& dm,
                    int ue, int to_cluster) {
  check_one_move(sol, ue, to_cluster);
  const int i = sol.pilot_of_ue[ue];
  const int j = to_cluster;
  sol.cluster_div[i] -= mm.m(ue, i);
  sol.cluster_div[j] += mm.m(ue, j);
  --sol.cluster_size[i];
  ++sol.cluster_size[j];
  sol.pilot_of_ue[ue] = j;
  for (int u = 0; u < sol.num_ues(); ++u) {
    const double d = dm.d(u, ue);
    mm.m(u, i) -= d;
    mm.m(u, j) += d;
  }
}

void apply_swap(PilotSolution& sol, MoveMatrix& mm, const DiversityMatrix& dm,
                int ue_a, int ue_b) {
  check_swap(sol, ue_a, ue_b);
  const int i = sol.pilot_of_ue[ue_a];
  const int j = sol.pilot_of_ue[ue_b];
  const double dab = dm.d(ue_a, ue_b);
  sol.cluster_div[i] += mm.m(ue_b, i) - mm.m(ue_a, i) - dab;
  sol.cluster_div[j] += mm.m(ue_a, j) - mm.m(ue_b, j) - dab;
  sol.pilot_of_ue[ue_a] = j;
  sol.pilot_of_ue[ue_b] = i;
  for (int u = 0; u < sol.num_ues(); ++u) {
    const double shift = dm.d(u, ue_b) - dm.d(u, ue_a);
    mm.m(u, i) += shift;
    mm.m(u, j) -= shift;
  }
}

}  // namespace cfpilot
