#include "pmult/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pmult {

namespace {

constexpr double kPointMatchTol = 1e-12;

bool points_match(Complex a, Complex b) {
  return std::abs(a - b) <= kPointMatchTol * std::max(1.0, std::abs(a));
}

double sobolev2_base(double t, double s) {
  const double m = std::min(t, s), big = std::max(t, s);
  return 1.0 + t * s + 0.5 * m * m * (big - m / 3.0);
}

// d^dl/dt^dl d^dm/ds^dm of sobolev2_base, dl, dm <= 1.
double sobolev2_deriv(double t, double s, int dl, int dm) {
  if (dl > 1 || dm > 1 || dl < 0 || dm < 0) {
    throw NumericError("sobolev_second_order kernel: derivative order > 1");
  }
  if (dl == 0 && dm == 0) return sobolev2_base(t, s);
  if (dl == 1 && dm == 1) return 1.0 + std::min(t, s);
  if (dl == 0 && dm == 1) {
    return s <= t ? t + t * s - 0.5 * s * s : t + 0.5 * t * t;
  }
  return sobolev2_deriv(s, t, 0, 1);  // symmetry in the real case
}

}  // namespace

KernelFormula KernelFormula::szego() {
  KernelFormula k;
  k.name_ = "szego";
  k.eval_ = [](Complex lambda, Complex mu) {
    return 1.0 / (1.0 - std::conj(mu) * lambda);
  };
  return k;
}

KernelFormula KernelFormula::zh2() {
  KernelFormula k;
  k.name_ = "zh2";
  k.eval_ = [](Complex lambda, Complex mu) {
    const Complex w = std::conj(mu) * lambda;
    return w / (1.0 - w);
  };
  return k;
}

KernelFormula KernelFormula::sobolev() {
  KernelFormula k;
  k.name_ = "sobolev";
  k.eval_ = [](Complex lambda, Complex mu) -> Complex {
    const double t = lambda.real(), s = mu.real();
    const double lo = std::min(t, s), hi = std::max(t, s);
    return (1.0 / std::sinh(1.0)) * std::cosh(1.0 - hi) * std::cosh(lo);
  };
  return k;
}

KernelFormula KernelFormula::sobolev_second_order() {
  KernelFormula k;
  k.name_ = "sobolev2";
  k.eval_ = [](Complex lambda, Complex mu) -> Complex {
    return sobolev2_base(lambda.real(), mu.real());
  };
  k.deriv_ = [](Complex lambda, Complex mu, int dl, int dm) -> Complex {
    return sobolev2_deriv(lambda.real(), mu.real(), dl, dm);
  };
  return k;
}

KernelFormula KernelFormula::table(std::vector<Complex> points, Matrix values) {
  const int n = static_cast<int>(points.size());
  if (values.rows() != n || values.cols() != n) {
    throw SpaceError("kernel table: matrix shape does not match point count");
  }
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  if ((values - values.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw NumericError(
        "kernel table: values are not Hermitian symmetric; tables are not "
        "silently symmetrized");
  }
  KernelFormula k;
  k.name_ = "table";
  auto pts = std::make_shared<std::vector<Complex>>(std::move(points));
  auto vals = std::make_shared<Matrix>(std::move(values));
  k.eval_ = [pts, vals](Complex lambda, Complex mu) -> Complex {
    int i = -1, j = -1;
    for (int a = 0; a < static_cast<int>(pts->size()); ++a) {
      if (points_match(lambda, (*pts)[a])) i = a;
      if (points_match(mu, (*pts)[a])) j = a;
    }
    if (i < 0 || j < 0) {
      throw SpaceError("kernel table: point not tabulated");
    }
    return (*vals)(i, j);
  };
  return k;
}

KernelFormula KernelFormula::load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open kernel table: " + path);
  int n = 0;
  in >> n;
  if (!in || n <= 0) {
    throw std::runtime_error("kernel table: bad point count in " + path);
  }
  std::vector<Complex> pts(n);
  for (auto& p : pts) {
    double re, im;
    in >> re >> im;
    p = Complex(re, im);
  }
  Matrix values(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double re, im;
      in >> re >> im;
      values(i, j) = Complex(re, im);
    }
  }
  if (!in) throw std::runtime_error("kernel table: truncated file " + path);
  return table(std::move(pts), std::move(values));
}

Complex KernelFormula::operator()(Complex lambda, Complex mu) const {
  return eval_(lambda, mu);
}

Complex KernelFormula::eval(Complex lambda, Complex mu, int dl, int dm) const {
  if (dl == 0 && dm == 0) return eval_(lambda, mu);
  if (!deriv_) {
    throw NumericError("kernel '" + name_ +
                       "' does not support derivative representers");
  }
  return deriv_(lambda, mu, dl, dm);
}

ModelSpace build_coefficient_model(int degree,
                                   const std::vector<double>& weights,
                                   int min_degree, std::string label) {
  if (degree < 1 || min_degree < 0 || min_degree > degree) {
    throw SpaceError("build_coefficient_model: bad degree range");
  }
  const int n = degree - min_degree + 1;
  Matrix gram = Matrix::Identity(n, n);
  if (!weights.empty()) {
    if (static_cast<int>(weights.size()) != n) {
      throw SpaceError("build_coefficient_model: weight count mismatch");
    }
    for (int i = 0; i < n; ++i) {
      if (weights[i] <= 0.0) {
        throw SpaceError("build_coefficient_model: nonpositive weight");
      }
      gram(i, i) = weights[i];
    }
  }
  if (label.empty()) {
    label = "coeff[z^" + std::to_string(min_degree) + "..z^" +
            std::to_string(degree) + "]";
  }
  ModelSpace m;
  m.kind_ = ModelKind::coefficient;
  m.space_ = InnerProductSpace::make(std::move(gram), std::move(label));
  m.min_degree_ = min_degree;
  m.max_degree_ = degree;
  m.weights_ = weights;
  return m;
}

ModelSpace build_kernel_sample_model(std::vector<SamplePoint> points,
                                     const KernelFormula& kernel,
                                     const ToleranceConfig& tol,
                                     std::string label) {
  tol.validate();
  const int n = static_cast<int>(points.size());
  if (n == 0) throw SpaceError("build_kernel_sample_model: no points");
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (points_match(points[i].z, points[j].z) &&
          points[i].deriv == points[j].deriv) {
        throw SpaceError("build_kernel_sample_model: duplicate sample point");
      }
    }
  }
  Matrix gram(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      gram(i, j) =
          kernel.eval(points[i].z, points[j].z, points[i].deriv,
                      points[j].deriv);
    }
  }
  const double scale = std::max(1.0, gram.cwiseAbs().maxCoeff());
  if ((gram - gram.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw NumericError("build_kernel_sample_model: kernel is not Hermitian "
                       "on the sample pairs");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (gram + gram.adjoint()));
  if (es.eigenvalues().minCoeff() <= tol.rank_tol *
                                         es.eigenvalues().maxCoeff()) {
    // Name the offenders: a zero kernel or a near-duplicate pair.
    std::ostringstream msg;
    msg << "build_kernel_sample_model: singular Gram;";
    bool named = false;
    for (int i = 0; i < n; ++i) {
      if (std::abs(gram(i, i)) <= tol.rank_tol * scale) {
        msg << " kernel vanishes at point (" << points[i].z.real() << ","
            << points[i].z.imag() << ")";
        named = true;
      }
    }
    if (!named) {
      for (int i = 0; i < n && !named; ++i) {
        for (int j = i + 1; j < n && !named; ++j) {
          const double c = std::abs(gram(i, j)) /
                           std::sqrt(std::abs(gram(i, i)) *
                                     std::abs(gram(j, j)));
          if (c > 1.0 - 1e-6) {
            msg << " near-duplicate kernels at points ("
                << points[i].z.real() << "," << points[i].z.imag()
                << ") and (" << points[j].z.real() << ","
                << points[j].z.imag() << ")";
            named = true;
          }
        }
      }
    }
    throw NumericError(msg.str());
  }
  if (label.empty()) {
    label = kernel.name() + "-sample[" + std::to_string(n) + "]";
  }
  ModelSpace m;
  m.kind_ = ModelKind::kernel_sample;
  m.space_ = InnerProductSpace::make(std::move(gram), std::move(label),
                                     tol.rank_tol);
  m.points_ = std::move(points);
  m.kernel_ = std::make_shared<const KernelFormula>(kernel);
  return m;
}

const KernelFormula& ModelSpace::kernel() const {
  if (!kernel_) {
    throw SpaceError("ModelSpace: not a kernel-sample model");
  }
  return *kernel_;
}

const ModelSpace& ModelSpace::part(int component) const {
  if (kind_ != ModelKind::composed || component < 0 || component > 1) {
    throw SpaceError("ModelSpace::part: not a composed model");
  }
  return component == 0 ? *a_ : *b_;
}

Vector ModelSpace::embed_component(const Vector& f, int component) const {
  if (kind_ != ModelKind::composed) {
    throw SpaceError("embed_component: not a composed model");
  }
  const int na = a_->dim(), nb = b_->dim();
  Vector amb = Vector::Zero(na + nb);
  if (component == 0) {
    if (f.size() != na) throw SpaceError("embed_component: length mismatch");
    amb.head(na) = f;
  } else if (component == 1) {
    if (f.size() != nb) throw SpaceError("embed_component: length mismatch");
    amb.tail(nb) = f;
  } else {
    throw SpaceError("embed_component: component must be 0 or 1");
  }
  return amb;
}

Vector ModelSpace::embed(const Vector& f) const {
  if (kind_ != ModelKind::composed) {
    throw SpaceError("embed: not a composed model");
  }
  if (compose_mode_ == ComposeMode::direct_sum) return f;
  return embedding_ * f;
}

Vector ModelSpace::restrict_ambient(const Vector& ambient) const {
  if (kind_ != ModelKind::composed) {
    throw SpaceError("restrict_ambient: not a composed model");
  }
  if (compose_mode_ == ComposeMode::direct_sum) return ambient;
  return embedding_.adjoint() * (ambient_->gram() * ambient);
}

ModelSpace compose_models(const ModelSpace& a, const ModelSpace& b,
                          ComposeMode mode,
                          const std::vector<Vector>& constraints,
                          const ToleranceConfig& tol) {
  tol.validate();
  const int na = a.dim(), nb = b.dim();
  Matrix block = Matrix::Zero(na + nb, na + nb);
  block.topLeftCorner(na, na) = a.space()->gram();
  block.bottomRightCorner(nb, nb) = b.space()->gram();

  ModelSpace m;
  m.kind_ = ModelKind::composed;
  m.compose_mode_ = mode;
  m.a_ = std::make_shared<const ModelSpace>(a);
  m.b_ = std::make_shared<const ModelSpace>(b);
  m.ambient_ = InnerProductSpace::make(
      block, a.label() + " (+) " + b.label(), tol.rank_tol);

  if (mode == ComposeMode::direct_sum) {
    m.space_ = m.ambient_;
    return m;
  }
  if (constraints.empty()) {
    throw SpaceError("compose_models: glued mode needs constraints");
  }
  Frame cf = orthonormalize(constraints, m.ambient_, tol);
  if (cf.rank() != static_cast<int>(constraints.size())) {
    throw NumericError(
        "compose_models: constraint functionals are linearly dependent");
  }
  Frame sub = complement(cf, tol);
  m.embedding_ = sub.columns();
  m.space_ = InnerProductSpace::euclidean(
      sub.rank(), a.label() + " ~ " + b.label());
  return m;
}

bool ModelSpace::evaluable(Complex z, int component) const {
  switch (kind_) {
    case ModelKind::coefficient:
      return true;
    case ModelKind::kernel_sample:
      for (const auto& p : points_) {
        if (p.deriv == 0 && points_match(z, p.z)) return true;
      }
      return false;
    case ModelKind::composed:
      if (component == 0 || component == 1) {
        return part(component).evaluable(z);
      }
      return a_->evaluable(z) || b_->evaluable(z);
  }
  return false;
}

Vector ModelSpace::kernel_vector(Complex z, int deriv, int component) const {
  switch (kind_) {
    case ModelKind::coefficient: {
      const int n = dim();
      Vector v = Vector::Zero(n);
      const Complex zc = std::conj(z);
      for (int j = 0; j < n; ++j) {
        const int e = min_degree_ + j;
        if (e < deriv) continue;
        double fall = 1.0;
        for (int r = 0; r < deriv; ++r) fall *= static_cast<double>(e - r);
        v(j) = fall * std::pow(zc, e - deriv);
        if (!weights_.empty()) v(j) /= weights_[j];
      }
      return v;
    }
    case ModelKind::kernel_sample: {
      for (int i = 0; i < dim(); ++i) {
        if (points_[i].deriv == deriv && points_match(z, points_[i].z)) {
          Vector e = Vector::Zero(dim());
          e(i) = 1.0;
          return e;
        }
      }
      throw SpaceError("kernel_vector: point not evaluable in sample model");
    }
    case ModelKind::composed: {
      int c = component;
      if (c < 0) c = a_->evaluable(z) ? 0 : 1;
      const Vector amb =
          embed_component(part(c).kernel_vector(z, deriv), c);
      if (compose_mode_ == ComposeMode::direct_sum) return amb;
      return restrict_ambient(amb);
    }
  }
  throw SpaceError("kernel_vector: unknown model kind");
}

Complex ModelSpace::evaluate(const Vector& f, Complex z, int component) const {
  if (f.size() != dim()) throw SpaceError("evaluate: length mismatch");
  switch (kind_) {
    case ModelKind::coefficient: {
      Complex acc = 0.0;
      for (int j = dim() - 1; j >= 0; --j) acc = acc * z + f(j);
      return acc * std::pow(z, min_degree_);
    }
    case ModelKind::kernel_sample: {
      for (int i = 0; i < dim(); ++i) {
        if (points_[i].deriv == 0 && points_match(z, points_[i].z)) {
          return (space_->gram() * f)(i);
        }
      }
      throw SpaceError("evaluate: point not evaluable in sample model");
    }
    case ModelKind::composed: {
      const Vector amb = compose_mode_ == ComposeMode::direct_sum
                             ? Vector(f)
                             : Vector(embedding_ * f);
      int c = component;
      if (c < 0) c = a_->evaluable(z) ? 0 : 1;
      const int na = a_->dim();
      if (c == 0) return a_->evaluate(amb.head(na), z);
      return b_->evaluate(amb.tail(b_->dim()), z);
    }
  }
  throw SpaceError("evaluate: unknown model kind");
}

double metric_d(const ModelSpace& model, Complex alpha, Complex beta,
                int component) {
  const Vector ka = model.kernel_vector(alpha, 0, component);
  const Vector kb = model.kernel_vector(beta, 0, component);
  return model.space()->norm(ka - kb);
}

double metric_p(const ModelSpace& model, Complex alpha, Complex beta,
                ProjectiveMetricVariant variant, double rank_tol,
                int component) {
  const Vector ka = model.kernel_vector(alpha, 0, component);
  const Vector kb = model.kernel_vector(beta, 0, component);
  const double na = model.space()->norm(ka), nb = model.space()->norm(kb);
  if (na <= rank_tol || nb <= rank_tol) {
    throw NumericError("metric_p: kernel vanishes at a requested point");
  }
  double c = std::abs(model.space()->inner(ka, kb)) / (na * nb);
  c = std::min(c, 1.0);
  if (variant == ProjectiveMetricVariant::standard) {
    return std::sqrt(2.0 * (1.0 - c));
  }
  return std::sqrt(std::max(0.0, 1.0 - c * c * c * c));
}

std::pair<double, double> pseudo_hyperbolic_factorization(Complex lambda,
                                                          Complex mu) {
  if (std::abs(lambda) >= 1.0 || std::abs(mu) >= 1.0) {
    throw SpaceError(
        "pseudo_hyperbolic_factorization: points must lie in the open disc");
  }
  const double denom = std::abs(1.0 - std::conj(lambda) * mu);
  const double ph = std::abs(lambda - mu) / denom;
  const double cross = std::sqrt((1.0 - std::norm(lambda)) *
                                 (1.0 - std::norm(mu)));
  const double h = 1.0 / std::sqrt(1.0 + cross / denom);
  return {ph, h};
}

MembershipVerdict sobolev_membership(const std::function<double(double)>& f,
                                     const std::function<double(double)>& chi,
                                     std::vector<double> eps_levels,
                                     int grid_m) {
  if (eps_levels.empty()) {
    for (int k = 2; k <= 8; ++k) eps_levels.push_back(std::pow(4.0, -k));
  }
  if (eps_levels.size() < 3) {
    throw SpaceError("sobolev_membership: fewer than 3 refinement levels");
  }
  std::sort(eps_levels.begin(), eps_levels.end(), std::greater<double>());
  if (grid_m < 8) throw SpaceError("sobolev_membership: grid too coarse");

  std::vector<double> t(grid_m + 1), g(grid_m + 1);
  for (int i = 0; i <= grid_m; ++i) {
    const double x = static_cast<double>(i) / grid_m;
    t[i] = x * x;
    g[i] = chi(t[i]) * f(t[i]);
  }

  MembershipVerdict verdict;
  for (double eps : eps_levels) {
    double est = 0.0;
    for (int i = 0; i + 1 <= grid_m; ++i) {
      if (t[i] < eps) continue;
      const double dt = t[i + 1] - t[i];
      const double dg = g[i + 1] - g[i];
      est += 0.5 * (g[i] * g[i] + g[i + 1] * g[i + 1]) * dt;  // |chi f|^2
      est += dg * dg / dt;                                    // |(chi f)'|^2
    }
    verdict.norm_estimates.emplace_back(eps, est);
  }

  // Fit est ~ a + slope * log(1/eps) over the finest levels.
  const int k = static_cast<int>(verdict.norm_estimates.size());
  const int fit = std::min(4, k);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = k - fit; i < k; ++i) {
    const double x = std::log(1.0 / verdict.norm_estimates[i].first);
    const double y = verdict.norm_estimates[i].second;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (fit * sxy - sx * sy) / (fit * sxx - sx * sx);
  const double f0 = f(0.0);
  const double slope_tol = std::max(0.05 * f0 * f0, 1e-4);

  if (slope > slope_tol) {
    verdict.status = Membership::diverges;
    verdict.divergence_rate = slope;
    return verdict;
  }
  bool cauchy = true;
  for (int i = k - 2; i < k; ++i) {
    const double prev = verdict.norm_estimates[i - 1].second;
    const double cur = verdict.norm_estimates[i].second;
    if (std::abs(cur - prev) > 0.01 * std::max(cur, 1e-12)) cauchy = false;
  }
  verdict.status = cauchy ? Membership::in_space : Membership::inconclusive;
  return verdict;
}

NonvanishingReport kernel_nonvanishing_check(const ModelSpace& model,
                                             double rank_tol) {
  if (model.kind() != ModelKind::kernel_sample) {
    throw SpaceError("kernel_nonvanishing_check: kernel-sample models only");
  }
  NonvanishingReport rep;
  rep.min_modulus = std::numeric_limits<double>::infinity();
  const auto& pts = model.sample_points();
  for (const auto& a : pts) {
    if (a.deriv != 0) continue;
    for (const auto& b : pts) {
      if (b.deriv != 0) continue;
      const double v = std::abs(model.kernel()(a.z, b.z));
      if (v < rep.min_modulus) {
        rep.min_modulus = v;
        rep.arg_min_a = a.z;
        rep.arg_min_b = b.z;
      }
    }
  }
  rep.pass = rep.min_modulus > rank_tol;
  return rep;
}

namespace {

// Iterated Aitken delta-squared acceleration of a scalar sequence.
Complex aitken_limit(std::vector<Complex> xs) {
  while (xs.size() >= 3) {
    std::vector<Complex> next;
    next.reserve(xs.size() - 2);
    for (size_t i = 0; i + 2 < xs.size(); ++i) {
      const Complex d1 = xs[i + 1] - xs[i];
      const Complex d2 = xs[i + 2] - xs[i + 1];
      const Complex den = d2 - d1;
      if (std::abs(den) < 1e-14 * (std::abs(xs[i + 2]) + 1.0)) {
        next.push_back(xs[i + 2]);
      } else {
        next.push_back(xs[i + 2] - d2 * d2 / den);
      }
    }
    xs = std::move(next);
  }
  return xs.back();
}

// Wynn's rho algorithm with nodes t_j = j; suits sequences with an
// asymptotic expansion in 1/j (logarithmic convergence), where Aitken stalls.
Complex rho_limit(const std::vector<Complex>& xs) {
  const size_t n = xs.size();
  if (n == 0) return 0.0;
  std::vector<Complex> prev2(n + 1, Complex(0.0));  // rho_{-1}
  std::vector<Complex> prev1(xs);                   // rho_0
  Complex best = xs.back();
  for (size_t k = 1; k < n; ++k) {
    std::vector<Complex> cur(n - k);
    bool degenerate = false;
    for (size_t j = 0; j + k < n; ++j) {
      const Complex den = prev1[j + 1] - prev1[j];
      if (std::abs(den) < 1e-14 * (std::abs(prev1[j + 1]) + 1.0)) {
        cur[j] = prev1[j + 1];
        degenerate = true;
        continue;
      }
      cur[j] = prev2[j + 1] + static_cast<double>(k) / den;
    }
    if (degenerate) break;
    prev2 = std::move(prev1);
    prev1 = std::move(cur);
    if (k % 2 == 0) best = prev1.back();  // even columns estimate the limit
  }
  return best;
}

Complex extrapolate_scalar(const std::vector<Complex>& xs) {
  if (xs.size() < 4) return xs.back();
  std::vector<Complex> head(xs.begin(), xs.end() - 1);
  const Complex a_full = aitken_limit(xs), a_head = aitken_limit(head);
  const Complex r_full = rho_limit(xs), r_head = rho_limit(head);
  // Prefer the method that is stable under dropping the last term.
  const double a_score = std::abs(a_full - a_head);
  const double r_score = std::abs(r_full - r_head);
  Complex pick = a_score <= r_score ? a_full : r_full;
  if (!std::isfinite(pick.real()) || !std::isfinite(pick.imag())) {
    pick = xs.back();
  }
  return pick;
}

double projective_line_distance(const ModelSpace& model, const Vector& u,
                                Complex beta, double rank_tol) {
  const Vector kb = model.kernel_vector(beta);
  const double nu = model.space()->norm(u);
  const double nk = model.space()->norm(kb);
  if (nk <= rank_tol) return 2.0;  // off the projective space
  double c = std::abs(model.space()->inner(u, kb)) / (nu * nk);
  c = std::min(c, 1.0);
  return std::sqrt(2.0 * (1.0 - c));
}

}  // namespace

Complex sequence_limit(const std::vector<Complex>& xs) {
  if (xs.empty()) throw SpaceError("sequence_limit: empty sequence");
  return extrapolate_scalar(xs);
}

Vector sequence_limit(const std::vector<Vector>& xs) {
  if (xs.empty()) throw SpaceError("sequence_limit: empty sequence");
  const Eigen::Index n = xs.front().size();
  Vector out(n);
  std::vector<Complex> coord(xs.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (size_t j = 0; j < xs.size(); ++j) {
      if (xs[j].size() != n) throw SpaceError("sequence_limit: ragged input");
      coord[j] = xs[j](i);
    }
    out(i) = extrapolate_scalar(coord);
  }
  return out;
}

ProjectiveProbeReport projective_completeness_probe(
    const ModelSpace& model, const std::vector<Complex>& coefficients,
    const std::vector<Complex>& points, const std::vector<Complex>& search_grid,
    double rank_tol) {
  if (coefficients.size() != points.size() || coefficients.empty()) {
    throw SpaceError("projective_completeness_probe: bad sequence");
  }
  std::vector<Vector> u;
  u.reserve(points.size());
  for (size_t j = 0; j < points.size(); ++j) {
    Vector v = coefficients[j] * model.kernel_vector(points[j]);
    if (model.space()->norm(v) <= rank_tol) {
      throw NumericError("projective_completeness_probe: zero term");
    }
    u.push_back(std::move(v));
  }
  ProjectiveProbeReport rep;
  for (size_t j = 0; j + 1 < u.size(); ++j) {
    const double na = model.space()->norm(u[j]);
    const double nb = model.space()->norm(u[j + 1]);
    double c = std::abs(model.space()->inner(u[j], u[j + 1])) / (na * nb);
    c = std::min(c, 1.0);
    rep.projective_increments.push_back(std::sqrt(2.0 * (1.0 - c)));
  }
  if (rep.projective_increments.size() >= 2) {
    const double tail = rep.projective_increments.back();
    const double growth = model.space()->norm(u.back()) /
                          model.space()->norm(u.front());
    if (tail > 0.1 && growth > 1e3) {
      throw NumericError(
          "projective_completeness_probe: sequence diverges in norm without "
          "projective convergence");
    }
  }
  // Extrapolate the sequence of lines: phase-align unit iterates against the
  // last one (in orthonormal coordinates) and accelerate each coordinate.
  {
    const size_t take = std::min<size_t>(u.size(), 32);
    std::vector<Vector> d;
    d.reserve(take);
    for (size_t j = u.size() - take; j < u.size(); ++j) {
      Vector w = model.space()->to_ortho(u[j]);
      w /= w.norm();
      d.push_back(std::move(w));
    }
    const Vector& ref = d.back();
    for (auto& w : d) {
      const Complex c = ref.dot(w);
      if (std::abs(c) > 1e-6) w *= std::conj(c) / std::abs(c);
    }
    Vector ext(ref.size());
    for (Eigen::Index i = 0; i < ref.size(); ++i) {
      std::vector<Complex> xs;
      xs.reserve(d.size());
      for (const auto& w : d) xs.push_back(w(i));
      ext(i) = extrapolate_scalar(xs);
    }
    if (ext.allFinite() && ext.norm() > 0.5) {
      rep.limit = model.space()->from_ortho(ext / ext.norm());
    } else {
      rep.limit = model.space()->from_ortho(ref);
    }
  }

  double best = std::numeric_limits<double>::infinity();
  Complex best_beta = 0.0;
  for (Complex beta : search_grid) {
    const double d = projective_line_distance(model, rep.limit, beta,
                                              rank_tol);
    if (d < best) {
      best = d;
      best_beta = beta;
    }
  }
  rep.min_kernel_distance = best;
  rep.nearest_point = best_beta;
  rep.limit_is_kernel = best <= 1e-8;
  return rep;
}

}  // namespace pmult
