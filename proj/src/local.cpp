#include "pmult/local.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

namespace pmult {

namespace {

constexpr double kLocalityThreshold = 0.1;
constexpr double kTautGapTol = 1e-8;
constexpr double kSupportMembershipTol = 1e-6;
constexpr double kDecompositionTol = 1e-6;

// Largest distance from a unit vector of M to V. Equals gap(M, V) when the
// ranks agree; stays meaningful while a subset is still being grown.
double containment_defect(const Frame& M, const Frame& V) {
  if (!M.valid() || M.rank() == 0) return 0.0;
  const Matrix Mo = M.ortho_columns();
  if (V.rank() == 0) return 1.0;
  const Matrix Vo = V.ortho_columns();
  const Matrix R = Mo - Vo * (Vo.adjoint() * Mo);
  Eigen::JacobiSVD<Matrix> svd(R);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

// Relative distance from the kernel line at c to the frame M.
double kernel_membership_defect(const ModelSpace& model, const Frame& M,
                                Complex c) {
  if (!model.evaluable(c)) return 2.0;
  const Vector k = model.kernel_vector(c);
  const double nk = model.space()->norm(k);
  if (nk <= 0.0 || !std::isfinite(nk)) return 2.0;
  return model.space()->norm(k - project_onto(k, M)) / nk;
}

double safe_metric_p(const ModelSpace& model, Complex a, Complex b) {
  if (a == b) return 0.0;
  return metric_p(model, a, b);
}

}  // namespace

Frame span_kernels(const ModelSpace& model, const std::vector<Complex>& points,
                   const ToleranceConfig& tol) {
  std::vector<Vector> vecs;
  vecs.reserve(points.size());
  for (const Complex& p : points) {
    if (!model.evaluable(p)) {
      std::ostringstream os;
      os << "span_kernels: point (" << p.real() << ", " << p.imag()
         << ") is not evaluable in this model";
      throw SpaceError(os.str());
    }
    vecs.push_back(model.kernel_vector(p));
  }
  if (vecs.empty()) return Frame::zero(model.space());
  return orthonormalize(vecs, model.space(), tol);
}

TautVerdict taut_check(const Frame& M, const std::vector<Complex>& F,
                       const ModelSpace& model, const ToleranceConfig& tol) {
  if (!M.valid()) throw SpaceError("taut_check: invalid target frame");
  if (F.size() > 12) {
    throw SpaceError(
        "taut_check: point set too large for exhaustive subset search "
        "(at most 12 points)");
  }
  const int r = M.rank();
  TautVerdict verdict;
  if (r == 0) {
    verdict.taut = true;
    return verdict;
  }
  if (static_cast<size_t>(r) > F.size()) return verdict;
  // Enumerate size-r subsets in lexicographic order.
  std::vector<int> idx(r);
  std::iota(idx.begin(), idx.end(), 0);
  const int n = static_cast<int>(F.size());
  while (true) {
    std::vector<Complex> subset;
    subset.reserve(r);
    for (int i : idx) subset.push_back(F[i]);
    const Frame V = span_kernels(model, subset, tol);
    if (V.rank() == r && gap(V, M) <= kTautGapTol) {
      verdict.taut = true;
      verdict.witness = std::move(subset);
      return verdict;
    }
    // Advance the combination.
    int k = r - 1;
    while (k >= 0 && idx[k] == n - r + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
  return verdict;
}

LocalSearchReport local_search(const Frame& M, const std::vector<Complex>& grid,
                               const ModelSpace& model, int budget,
                               const ToleranceConfig& tol) {
  if (!M.valid() || M.rank() < 1) {
    throw SpaceError("local_search: target must have rank at least 1");
  }
  if (budget <= 0) throw SpaceError("local_search: budget must be positive");

  std::vector<Complex> pts;
  pts.reserve(grid.size());
  for (const Complex& g : grid) {
    if (model.evaluable(g)) pts.push_back(g);
  }
  const int n = M.rank();
  if (static_cast<int>(pts.size()) < n) {
    throw SpaceError("local_search: fewer evaluable candidate points than the "
                     "target rank");
  }

  LocalSearchReport rep;
  rep.target = M;
  rep.grid = grid;

  int evals = 0;
  const auto subset_gap = [&](const std::vector<Complex>& E) -> double {
    ++evals;
    const Frame V = span_kernels(model, E, tol);
    if (V.rank() != n) return 2.0;  // collided or vanishing kernels
    return gap(V, M);
  };
  const auto subset_defect = [&](const std::vector<Complex>& E) -> double {
    ++evals;
    const Frame V = span_kernels(model, E, tol);
    if (V.rank() != static_cast<int>(E.size())) return 2.0;
    return containment_defect(M, V);
  };

  // Seed starts at the grid points whose kernel lines best align with M.
  std::vector<std::pair<double, Complex>> scored;
  scored.reserve(pts.size());
  for (const Complex& p : pts) {
    scored.emplace_back(kernel_membership_defect(model, M, p), p);
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  const int starts = std::min<int>(6, static_cast<int>(scored.size()));

  std::vector<Complex> best_subset;
  double best = 2.0;
  for (int s = 0; s < starts && evals < budget; ++s) {
    std::vector<Complex> E = {scored[s].second};
    // Greedy growth: each new point minimizes how far M sticks out of the
    // kernel span so far.
    while (static_cast<int>(E.size()) < n && evals < budget) {
      double step_best = 3.0;
      Complex step_arg = 0.0;
      bool found = false;
      for (const Complex& q : pts) {
        if (std::find(E.begin(), E.end(), q) != E.end()) continue;
        std::vector<Complex> trial = E;
        trial.push_back(q);
        const double d = subset_defect(trial);
        if (d < step_best) {
          step_best = d;
          step_arg = q;
          found = true;
        }
        if (evals >= budget) break;
      }
      if (!found) break;
      E.push_back(step_arg);
    }
    if (static_cast<int>(E.size()) != n) continue;
    const double g = subset_gap(E);
    if (g < best) {
      best = g;
      best_subset = E;
    }
  }
  if (best_subset.empty()) {
    rep.best_gap = 2.0;
    rep.status = LocalStatus::not_local_evidence;
    rep.diagnostics = "greedy placement found no full-rank kernel subset";
    return rep;
  }

  rep.witness_subsets.push_back(best_subset);
  rep.gap_curve.push_back(best);

  // Coordinate descent on the point positions with a shrinking step.
  double h = 0.0;
  {
    // Step scale: distance from the best seed to its nearest grid neighbor.
    double nn = 0.0;
    for (const Complex& q : pts) {
      if (q == best_subset.front()) continue;
      const double d = std::abs(q - best_subset.front());
      if (nn == 0.0 || d < nn) nn = d;
    }
    h = nn > 0.0 ? nn : 0.1;
  }
  const Complex dirs[4] = {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
  const auto try_trial = [&](std::vector<Complex>&& trial) -> bool {
    for (const Complex& p : trial) {
      if (!model.evaluable(p)) return false;
    }
    const double g = subset_gap(trial);
    if (g < best) {
      best = g;
      best_subset = std::move(trial);
      rep.witness_subsets.push_back(best_subset);
      rep.gap_curve.push_back(best);
      return true;
    }
    return false;
  };
  while (h > 1e-9 && evals < budget && best > 1e-13) {
    bool improved = false;
    for (int i = 0; i < n && evals < budget; ++i) {
      for (const Complex& d : dirs) {
        std::vector<Complex> trial = best_subset;
        trial[i] += h * d;
        improved = try_trial(std::move(trial)) || improved;
        if (evals >= budget) break;
      }
    }
    // Collective moves let point pairs converge toward a shared limit, which
    // per-point axis steps cannot follow (they must shrink together).
    for (double s : {1.0 - h, 1.0 + h}) {
      if (evals >= budget) break;
      std::vector<Complex> trial = best_subset;
      for (Complex& p : trial) p *= s;
      improved = try_trial(std::move(trial)) || improved;
    }
    for (const Complex& d : dirs) {
      if (evals >= budget) break;
      std::vector<Complex> trial = best_subset;
      for (Complex& p : trial) p += h * d;
      improved = try_trial(std::move(trial)) || improved;
    }
    if (!improved) h *= 0.5;
  }

  rep.best_gap = best;
  if (best > kLocalityThreshold) {
    rep.status = LocalStatus::not_local_evidence;
    return rep;
  }
  support_points(rep, model);
  return punctual_decomposition(std::move(rep), model, tol);
}

LocalSearchReport local_search(const Vector& v, const std::vector<Complex>& grid,
                               const ModelSpace& model, int budget,
                               const ToleranceConfig& tol) {
  if (model.space()->norm(v) <= tol.rank_tol) {
    throw SpaceError("local_search: zero vector spans no line");
  }
  const Frame line = orthonormalize(std::vector<Vector>{v}, model.space(), tol);
  return local_search(line, grid, model, budget, tol);
}

std::vector<SupportCluster> support_points(LocalSearchReport& report,
                                           const ModelSpace& model) {
  if (report.witness_subsets.empty()) {
    throw SpaceError("support_points: report has no witness subsets");
  }
  const size_t n = report.witness_subsets.front().size();
  for (const auto& E : report.witness_subsets) {
    if (E.size() != n) {
      throw SpaceError("support_points: witness subsets have mixed cardinality");
    }
  }
  if (n > 8) {
    throw SpaceError("support_points: too many tracked points for exhaustive "
                     "matching (at most 8)");
  }
  const double cluster_radius = std::max(10.0 * report.best_gap, 1e-6);

  // Track the i-th point across the witness sequence by matching each subset
  // to the previous positions with the cheapest projective assignment.
  std::vector<std::vector<Complex>> tracks(n);
  for (size_t i = 0; i < n; ++i) {
    tracks[i].push_back(report.witness_subsets.front()[i]);
  }
  for (size_t j = 1; j < report.witness_subsets.size(); ++j) {
    const auto& cur = report.witness_subsets[j];
    std::vector<int> perm(n), best_perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best_cost = -1.0, second_cost = -1.0;
    std::vector<int> runner(n);
    do {
      double cost = 0.0;
      for (size_t i = 0; i < n; ++i) {
        cost += safe_metric_p(model, tracks[i].back(), cur[perm[i]]);
      }
      if (best_cost < 0.0 || cost < best_cost) {
        second_cost = best_cost;
        runner = best_perm;
        best_cost = cost;
        best_perm = perm;
      } else if (second_cost < 0.0 || cost < second_cost) {
        second_cost = cost;
        runner = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (n > 1 && second_cost >= 0.0 &&
        second_cost - best_cost <= 1e-12 && runner != best_perm) {
      // Two assignments are equally cheap; if the contested points are far
      // apart the tracks genuinely swapped within one step.
      double contested = 0.0;
      for (size_t i = 0; i < n; ++i) {
        if (best_perm[i] != runner[i]) {
          contested = std::max(
              contested, safe_metric_p(model, cur[best_perm[i]], cur[runner[i]]));
        }
      }
      if (contested > cluster_radius) {
        throw NumericError(
            "support_points: point tracking became ambiguous (two tracks "
            "swapped within one step); rerun the search with a finer "
            "refinement schedule");
      }
    }
    for (size_t i = 0; i < n; ++i) tracks[i].push_back(cur[best_perm[i]]);
  }

  // Recent per-track motion; tracks still converging toward a common limit
  // keep moving on the scale of their mutual distance.
  std::vector<Complex> finals(n);
  std::vector<double> motion(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const auto& t = tracks[i];
    finals[i] = t.back();
    const size_t steps = std::min<size_t>(5, t.size() - 1);
    for (size_t s = 0; s < steps; ++s) {
      motion[i] += safe_metric_p(model, t[t.size() - 1 - s], t[t.size() - 2 - s]);
    }
  }

  // Union-find merge of tracks sharing a limit.
  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), size_t{0});
  const auto find = [&](size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double d = safe_metric_p(model, finals[i], finals[j]);
      if (d <= std::max(cluster_radius, 5.0 * (motion[i] + motion[j]))) {
        parent[find(i)] = find(j);
      }
    }
  }

  std::vector<SupportCluster> kept;
  std::ostringstream diag;
  for (size_t root = 0; root < n; ++root) {
    if (find(root) != root) continue;
    std::vector<size_t> members;
    for (size_t i = 0; i < n; ++i) {
      if (find(i) == root) members.push_back(i);
    }
    // Candidate centers: each member's final position and their mean.
    std::vector<Complex> candidates;
    Complex mean = 0.0;
    for (size_t i : members) {
      candidates.push_back(finals[i]);
      mean += finals[i];
    }
    mean /= static_cast<double>(members.size());
    candidates.push_back(mean);
    Complex center = candidates.front();
    double center_defect = 3.0;
    for (const Complex& c : candidates) {
      const double d = kernel_membership_defect(model, report.target, c);
      if (d < center_defect) {
        center_defect = d;
        center = c;
      }
    }
    double radius = 0.0;
    for (size_t i : members) {
      radius = std::max(radius, safe_metric_p(model, center, finals[i]));
    }
    if (center_defect <= kSupportMembershipTol) {
      kept.push_back({center, radius});
    } else {
      diag << "dropped candidate support point (" << center.real() << ", "
           << center.imag() << "): kernel lies outside the target (relative "
           << "defect " << center_defect << "); ";
    }
  }
  if (diag.tellp() > 0) report.diagnostics += diag.str();
  report.support_clusters = kept;
  return kept;
}

LocalSearchReport punctual_decomposition(LocalSearchReport report,
                                         const ModelSpace& model,
                                         const ToleranceConfig& tol) {
  report.punctual_components.clear();
  std::vector<Frame> components;
  Frame combined = Frame::zero(model.space());
  for (const SupportCluster& c : report.support_clusters) {
    Frame line = span_kernels(model, {c.center}, tol);
    combined = combine(combined, line, CombineMode::sum, tol);
    components.push_back(std::move(line));
  }
  int sum_dim = 0;
  for (const Frame& f : components) sum_dim += f.rank();
  const double residual =
      components.empty() ? 1.0 : gap(combined, report.target);
  report.decomposition_residual = residual;
  if (!components.empty() && residual <= kDecompositionTol &&
      sum_dim == report.target.rank()) {
    report.status = LocalStatus::decomposed;
    report.punctual_components = std::move(components);
    return report;
  }
  report.status = LocalStatus::non_kernel_limit;
  std::ostringstream diag;
  diag << "kernel lines at the support points span dimension " << sum_dim
       << " against target dimension " << report.target.rank()
       << " (residual " << residual << ")";
  // How large the coefficients get when the target is expressed in the final
  // witness kernels; blow-up explains why no kernel-line decomposition exists.
  if (!report.witness_subsets.empty()) {
    const auto& E = report.witness_subsets.back();
    std::vector<Vector> kers;
    kers.reserve(E.size());
    for (const Complex& p : E) kers.push_back(model.kernel_vector(p));
    Matrix K(model.dim(), static_cast<Eigen::Index>(kers.size()));
    for (size_t i = 0; i < kers.size(); ++i) K.col(static_cast<Eigen::Index>(i)) = kers[i];
    const Matrix Ko = model.space()->to_ortho(K);
    const Matrix Mo = report.target.ortho_columns();
    const Matrix C = Ko.completeOrthogonalDecomposition().solve(Mo);
    diag << "; expressing the target in the final witness kernels needs "
         << "coefficients of size up to " << C.cwiseAbs().maxCoeff();
  }
  if (!report.diagnostics.empty()) report.diagnostics += "; ";
  report.diagnostics += diag.str();
  return report;
}

std::pair<double, double> kernel_distance_formula(
    const ModelSpace& model, Complex alpha, const std::vector<Complex>& F) {
  if (model.kind() != ModelKind::coefficient || model.min_degree() != 0) {
    throw SpaceError(
        "kernel_distance_formula: needs a truncated Hardy coefficient model");
  }
  for (size_t i = 0; i < F.size(); ++i) {
    for (size_t j = i + 1; j < F.size(); ++j) {
      if (F[i] == F[j]) {
        throw SpaceError("kernel_distance_formula: points must be distinct");
      }
    }
  }
  const Frame V = span_kernels(model, F);
  const Vector k = model.kernel_vector(alpha);
  const double numeric = model.space()->norm(k - project_onto(k, V));
  Complex b = 1.0;
  for (const Complex& f : F) {
    b *= (alpha - f) / (1.0 - std::conj(f) * alpha);
  }
  const double closed = std::abs(b) / std::sqrt(1.0 - std::norm(alpha));
  return {numeric, closed};
}

std::pair<Vector, std::vector<int>> bounded_limit_probe(
    const std::vector<Frame>& frames, const std::vector<Vector>& u,
    const Frame& M) {
  if (u.empty() || frames.size() != u.size()) {
    throw SpaceError("bounded_limit_probe: empty or mismatched inputs");
  }
  const auto& sp = M.space();
  for (size_t j = 0; j < u.size(); ++j) {
    const double nu = sp->norm(u[j]);
    if (!std::isfinite(nu) || nu > 1e8) {
      throw SpaceError("bounded_limit_probe: inputs not bounded");
    }
    const double defect = sp->norm(u[j] - project_onto(u[j], frames[j]));
    if (defect > 1e-6 * std::max(1.0, nu)) {
      throw SpaceError(
          "bounded_limit_probe: a vector escapes its own frame");
    }
  }
  // Subsequence extraction: keep the accumulation cluster around the final
  // element; in a finite-dimensional ball that cluster is always infinite.
  const Vector& ref = u.back();
  const double sep = 0.5 * std::max(1.0, sp->norm(ref));
  std::vector<int> idx;
  std::vector<Vector> sub;
  for (size_t j = 0; j < u.size(); ++j) {
    if (sp->norm(u[j] - ref) <= sep) {
      idx.push_back(static_cast<int>(j));
      sub.push_back(u[j]);
    }
  }
  Vector limit = sub.size() >= 4 ? sequence_limit(sub) : sub.back();
  if (!limit.allFinite()) limit = sub.back();
  const double nl = sp->norm(limit);
  const double escape = sp->norm(limit - project_onto(limit, M));
  if (escape > 1e-8 * std::max(1.0, nl)) {
    throw NumericError(
        "bounded_limit_probe: the extracted limit escapes the target "
        "subspace");
  }
  return {limit, idx};
}

}  // namespace pmult
