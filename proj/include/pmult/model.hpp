#pragma once

#include "pmult/linalg.hpp"

#include <functional>
#include <optional>
#include <utility>

namespace pmult {

enum class ModelKind { coefficient, kernel_sample, composed };
enum class ComposeMode { direct_sum, glued };

/// A basis entry of a kernel-sample model: the representer of the functional
/// f -> f^(deriv)(z).
struct SamplePoint {
  Complex z;
  int deriv = 0;
};

/// A reproducing kernel k(lambda, mu) = k_mu(lambda), Hermitian in the sense
/// k(lambda, mu) = conj(k(mu, lambda)). Optionally differentiable in both
/// slots (needed for derivative representers).
class KernelFormula {
 public:
  using Evaluator = std::function<Complex(Complex, Complex)>;
  using DerivEvaluator = std::function<Complex(Complex, Complex, int, int)>;

  static KernelFormula szego();
  static KernelFormula zh2();
  /// W^{1,2}[0,1] kernel: cosech(1) cosh(1 - max) cosh(min).
  static KernelFormula sobolev();
  /// Second-order Sobolev kernel for <f,g> = f(0)g(0) + f'(0)g'(0) +
  /// int f'' g'': k(t, s) = 1 + t s + int_0^min (t-u)(s-u) du.
  static KernelFormula sobolev_second_order();
  static KernelFormula table(std::vector<Complex> points, Matrix values);
  /// Text format: n, then n lines "re im", then n rows of 2n numbers.
  static KernelFormula load_table(const std::string& path);

  const std::string& name() const { return name_; }
  Complex operator()(Complex lambda, Complex mu) const;
  /// d^{dl}/d lambda^{dl} d^{dm}/d conj(mu)^{dm} of k.
  Complex eval(Complex lambda, Complex mu, int dl, int dm) const;
  bool supports_derivatives() const { return static_cast<bool>(deriv_); }

 private:
  std::string name_;
  Evaluator eval_;
  DerivEvaluator deriv_;
};

/// A finite-dimensional model of a Hilbert function space: an inner-product
/// space together with point-evaluation machinery (kernel representers).
class ModelSpace {
 public:
  ModelKind kind() const { return kind_; }
  const SpacePtr& space() const { return space_; }
  int dim() const { return space_->dim(); }
  const std::string& label() const { return space_->label(); }

  /// component: -1 for plain models; 0/1 select a side of a composed model.
  bool evaluable(Complex z, int component = -1) const;
  Vector kernel_vector(Complex z, int deriv = 0, int component = -1) const;
  Complex evaluate(const Vector& f, Complex z, int component = -1) const;

  // Coefficient models.
  int degree() const { return max_degree_; }
  int min_degree() const { return min_degree_; }

  // Kernel-sample models.
  const std::vector<SamplePoint>& sample_points() const { return points_; }
  const KernelFormula& kernel() const;

  // Composed models.
  ComposeMode compose_mode() const { return compose_mode_; }
  const ModelSpace& part(int component) const;
  /// Glued models: embed subspace coordinates into the ambient direct sum.
  Vector embed(const Vector& f) const;
  /// Glued models: Gram-orthogonal projection of an ambient vector,
  /// expressed in subspace coordinates.
  Vector restrict_ambient(const Vector& ambient) const;
  /// Direct-sum coordinate embedding of a component vector.
  Vector embed_component(const Vector& f, int component) const;

  friend ModelSpace build_coefficient_model(int, const std::vector<double>&,
                                            int, std::string);
  friend ModelSpace build_kernel_sample_model(std::vector<SamplePoint>,
                                              const KernelFormula&,
                                              const ToleranceConfig&,
                                              std::string);
  friend ModelSpace compose_models(const ModelSpace&, const ModelSpace&,
                                   ComposeMode, const std::vector<Vector>&,
                                   const ToleranceConfig&);

 private:
  ModelKind kind_ = ModelKind::coefficient;
  SpacePtr space_;

  // coefficient
  int min_degree_ = 0;
  int max_degree_ = 0;
  std::vector<double> weights_;

  // kernel_sample
  std::vector<SamplePoint> points_;
  std::shared_ptr<const KernelFormula> kernel_;

  // composed
  ComposeMode compose_mode_ = ComposeMode::direct_sum;
  std::shared_ptr<const ModelSpace> a_, b_;
  SpacePtr ambient_;   // block Gram of A (+) B
  Matrix embedding_;   // glued: ambient-orthonormal basis of the subspace
};

/// Polynomials of degree min_degree..degree with a (diagonal) coefficient
/// inner product; weights default to 1, giving a truncated Hardy space.
ModelSpace build_coefficient_model(int degree,
                                   const std::vector<double>& weights = {},
                                   int min_degree = 0, std::string label = "");

ModelSpace build_kernel_sample_model(std::vector<SamplePoint> points,
                                     const KernelFormula& kernel,
                                     const ToleranceConfig& tol = {},
                                     std::string label = "");

/// direct_sum ignores `constraints`; glued restricts A (+) B to the joint
/// null space of the constraint functionals (given as ambient vectors).
ModelSpace compose_models(const ModelSpace& a, const ModelSpace& b,
                          ComposeMode mode,
                          const std::vector<Vector>& constraints = {},
                          const ToleranceConfig& tol = {});

double metric_d(const ModelSpace& model, Complex alpha, Complex beta,
                int component = -1);

enum class ProjectiveMetricVariant { standard, opnorm };
double metric_p(const ModelSpace& model, Complex alpha, Complex beta,
                ProjectiveMetricVariant variant =
                    ProjectiveMetricVariant::standard,
                double rank_tol = 1e-9, int component = -1);

/// For lambda, mu in the open unit disc: the pseudo-hyperbolic distance and
/// the correction factor h with p_szego = sqrt(2) * ph * h, h in
/// [1/sqrt(2), 1].
std::pair<double, double> pseudo_hyperbolic_factorization(Complex lambda,
                                                          Complex mu);

enum class Membership { in_space, diverges, inconclusive };

struct MembershipVerdict {
  Membership status = Membership::inconclusive;
  std::vector<std::pair<double, double>> norm_estimates;  // (eps, estimate)
  std::optional<double> divergence_rate;
};

/// Estimates the W^{1,2} norm of chi*f on [eps, 1] over a refinement
/// schedule and classifies the limit. Detects log(1/eps) divergence by the
/// fitted slope. Grid is graded toward 0: t = (i/m)^2.
MembershipVerdict sobolev_membership(
    const std::function<double(double)>& f,
    const std::function<double(double)>& chi,
    std::vector<double> eps_levels = {}, int grid_m = 512);

struct NonvanishingReport {
  bool pass = false;
  double min_modulus = 0.0;
  Complex arg_min_a, arg_min_b;
};

NonvanishingReport kernel_nonvanishing_check(const ModelSpace& model,
                                             double rank_tol = 1e-9);

/// Limit estimate for a convergent sequence (iterated Aitken delta-squared
/// and Wynn's rho, chosen per coordinate by drop-last self-consistency).
Complex sequence_limit(const std::vector<Complex>& xs);
Vector sequence_limit(const std::vector<Vector>& xs);

struct ProjectiveProbeReport {
  Vector limit;  // extrapolated limit-line representative (unit vector)
  std::vector<double> projective_increments;  // p-steps along the sequence
  double min_kernel_distance = 0.0;  // projective distance to kernel manifold
  Complex nearest_point;
  bool limit_is_kernel = false;
};

/// Follows u_j = c_j k_{alpha_j}, then measures the projective distance from
/// the limit line to the kernel lines over the caller's search grid.
/// Evidence only; a finite model cannot certify projective completeness.
ProjectiveProbeReport projective_completeness_probe(
    const ModelSpace& model, const std::vector<Complex>& coefficients,
    const std::vector<Complex>& points, const std::vector<Complex>& search_grid,
    double rank_tol = 1e-9);

}  // namespace pmult
