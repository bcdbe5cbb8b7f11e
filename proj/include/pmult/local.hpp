#pragma once

#include <utility>
#include <vector>

#include "pmult/linalg.hpp"
#include "pmult/model.hpp"

namespace pmult {

/// Orthonormal frame for the span of the kernel vectors at `points`.
/// Rank can drop below the point count when kernels coincide or vanish.
Frame span_kernels(const ModelSpace& model, const std::vector<Complex>& points,
                   const ToleranceConfig& tol = {});

struct TautVerdict {
  bool taut = false;
  std::vector<Complex> witness;  // minimal kernel-spanning subset when taut
};

/// Exhaustively searches subsets F0 of F with #F0 = rank(M) for one whose
/// kernel span coincides with M (gap <= 1e-8). #F must stay <= 12.
TautVerdict taut_check(const Frame& M, const std::vector<Complex>& F,
                       const ModelSpace& model, const ToleranceConfig& tol = {});

enum class LocalStatus { decomposed, non_kernel_limit, not_local_evidence };

struct SupportCluster {
  Complex center;
  double radius = 0.0;  // projective spread of the tracked points
};

struct LocalSearchReport {
  Frame target;
  std::vector<Complex> grid;  // candidate points the search drew from
  std::vector<std::vector<Complex>> witness_subsets;  // improving sequence
  std::vector<double> gap_curve;                      // nonincreasing
  double best_gap = 1.0;
  std::vector<SupportCluster> support_clusters;
  std::vector<Frame> punctual_components;  // present only when decomposed
  double decomposition_residual = 1.0;
  LocalStatus status = LocalStatus::not_local_evidence;
  std::string diagnostics;
};

/// Heuristic search for point subsets E (|E| = rank(M)) whose kernel span
/// approaches M: multi-start greedy placement over `grid`, then coordinate
/// descent on the point positions with a shrinking step. `budget` caps the
/// number of candidate-gap evaluations. A poor best_gap is evidence against
/// locality, never a proof.
LocalSearchReport local_search(const Frame& M, const std::vector<Complex>& grid,
                               const ModelSpace& model, int budget = 20000,
                               const ToleranceConfig& tol = {});

/// Vector phrasing: searches for span{v} and reports on the line it spans.
LocalSearchReport local_search(const Vector& v, const std::vector<Complex>& grid,
                               const ModelSpace& model, int budget = 20000,
                               const ToleranceConfig& tol = {});

/// Tracks each witness point across the improving subsets, clusters the
/// tracked limits in the projective metric, keeps the clusters whose center
/// kernel lies in the target (relative defect <= 1e-6), and records them on
/// the report. Returns the recorded clusters.
std::vector<SupportCluster> support_points(LocalSearchReport& report,
                                           const ModelSpace& model);

/// Attaches one kernel line per support cluster as punctual components and
/// grades the sum against the target: status `decomposed` when the combined
/// span matches within 1e-6 and the dimensions add up, `non_kernel_limit`
/// (with coefficient-growth diagnostics) otherwise.
LocalSearchReport punctual_decomposition(LocalSearchReport report,
                                         const ModelSpace& model,
                                         const ToleranceConfig& tol = {});

/// Distance from k_alpha to the kernel span over F in a truncated Hardy
/// model, next to the Blaschke closed form |b(alpha)| / sqrt(1 - |alpha|^2).
std::pair<double, double> kernel_distance_formula(const ModelSpace& model,
                                                  Complex alpha,
                                                  const std::vector<Complex>& F);

/// From frames converging to M and bounded u_j in frames_j, extracts a
/// norm-convergent subsequence and its limit, asserting the limit lies in M
/// within 1e-8. Returns (limit, subsequence indices).
std::pair<Vector, std::vector<int>> bounded_limit_probe(
    const std::vector<Frame>& frames, const std::vector<Vector>& u,
    const Frame& M);

}  // namespace pmult
