#include "pmult/pseudomult.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace pmult {

namespace {

bool near(Complex a, Complex b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(a));
}

Vector trim_poly(const Vector& p) {
  int n = static_cast<int>(p.size());
  while (n > 1 && std::abs(p(n - 1)) == 0.0) --n;
  return p.head(n);
}

std::vector<Complex> poly_roots(const Vector& poly) {
  const Vector p = trim_poly(poly);
  const int d = static_cast<int>(p.size()) - 1;
  std::vector<Complex> roots;
  if (d < 1) return roots;
  Matrix comp = Matrix::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -p(i) / p(d);
  Eigen::ComplexEigenSolver<Matrix> es(comp, false);
  for (int i = 0; i < d; ++i) roots.push_back(es.eigenvalues()(i));
  return roots;
}

RegularSpacePath decide_path(const ModelSpace& model,
                             const PseudomultiplierSpec& spec) {
  if (!spec.declared_constraints.empty()) return RegularSpacePath::declared;
  if (spec.rational && model.kind() == ModelKind::coefficient) {
    return RegularSpacePath::exact;
  }
  if (spec.pointwise && model.kind() == ModelKind::kernel_sample) {
    return RegularSpacePath::finite_model;
  }
  throw SpaceError(
      "pseudomultiplier spec does not match the model: need a rational "
      "symbol on a coefficient model, a pointwise symbol on a kernel-sample "
      "model, or declared constraints");
}

void validate_spec(const ModelSpace& model, const PseudomultiplierSpec& spec,
                   const ToleranceConfig& tol) {
  tol.validate();
  for (const auto& [pt, val] : spec.overrides) {
    (void)val;
    if (!in_domain(spec, pt)) {
      throw SpaceError("override at an excluded point");
    }
    if (model.kind() == ModelKind::kernel_sample && !model.evaluable(pt)) {
      throw SpaceError("override at a point the model cannot evaluate");
    }
  }
  if (model.kind() == ModelKind::kernel_sample) {
    // In-model uniqueness: the data determining an extension (evaluation
    // functionals over the domain plus any forced functionals) must span.
    std::vector<Vector> rows;
    for (int i = 0; i < model.dim(); ++i) {
      const auto& p = model.sample_points()[i];
      if (p.deriv != 0 || !in_domain(spec, p.z)) continue;
      rows.push_back(model.kernel_vector(p.z));
    }
    for (const auto& w : spec.forced_zero_functionals) rows.push_back(w);
    if (rows.empty() ||
        orthonormalize(rows, model.space(), tol).rank() < model.dim()) {
      throw SpaceError(
          "domain is not a set of uniqueness for the model: evaluation "
          "functionals do not span");
    }
  }
}

// Monomial division data for the rational path: z^j num = den Q_j + R_j.
struct MonomialQuotients {
  std::vector<Vector> Q, R;
};

MonomialQuotients monomial_quotients(const ModelSpace& model,
                                     const PseudomultiplierSpec& spec) {
  const Vector num = trim_poly(spec.rational->first);
  const Vector den = trim_poly(spec.rational->second);
  MonomialQuotients mq;
  for (int j = 0; j <= model.degree(); ++j) {
    Vector q, r;
    poly_divmod(poly_shift(num, j), den, q, r);
    mq.Q.push_back(std::move(q));
    mq.R.push_back(std::move(r));
  }
  return mq;
}

Frame regular_space_exact(const ModelSpace& model,
                          const PseudomultiplierSpec& spec,
                          const ToleranceConfig& tol) {
  if (model.min_degree() != 0) {
    throw SpaceError("rational path expects a coefficient model based at z^0");
  }
  const Vector den = trim_poly(spec.rational->second);
  // Every denominator zero must be either excluded from the domain or
  // covered by a redefinition; otherwise the symbol has no value there.
  for (Complex root : poly_roots(den)) {
    bool covered = false;
    for (Complex ex : spec.exclusions) {
      if (near(root, ex, 1e-8)) covered = true;
    }
    for (const auto& [pt, val] : spec.overrides) {
      (void)val;
      if (near(root, pt, 1e-8)) covered = true;
    }
    if (!covered) {
      throw SpaceError(
          "denominator zero lies inside the domain without a redefinition");
    }
  }

  const int n = model.dim();
  const int N = model.degree();
  const MonomialQuotients mq = monomial_quotients(model, spec);
  std::vector<Vector> rows;  // linear conditions on coefficient vectors

  // Divisibility: the remainder of f*num modulo den vanishes.
  const int rem_len = static_cast<int>(mq.R[0].size());
  for (int r = 0; r < rem_len; ++r) {
    Vector row(n);
    for (int j = 0; j < n; ++j) row(j) = mq.R[j](r);
    if (row.cwiseAbs().maxCoeff() > 0) rows.push_back(row);
  }
  // Quotient stays inside the model: coefficients above degree N vanish.
  int max_q = 0;
  for (const auto& q : mq.Q) max_q = std::max<int>(max_q, q.size());
  for (int r = N + 1; r < max_q; ++r) {
    Vector row = Vector::Zero(n);
    for (int j = 0; j < n; ++j) {
      if (r < mq.Q[j].size()) row(j) = mq.Q[j](r);
    }
    if (row.cwiseAbs().maxCoeff() > 0) rows.push_back(row);
  }
  // Redefinitions: the extension must take the redefined value,
  // g(alpha) = val * f(alpha).
  for (const auto& [pt, val] : spec.overrides) {
    Vector row(n);
    for (int j = 0; j < n; ++j) {
      row(j) = poly_eval(mq.Q[j], pt) - val * std::pow(pt, j);
    }
    rows.push_back(row);
  }

  if (rows.empty()) return Frame::full(model.space());
  Matrix T(rows.size(), n);
  for (size_t i = 0; i < rows.size(); ++i) T.row(i) = rows[i].transpose();
  return null_space(T, model.space(), tol);
}

Frame regular_space_declared(const ModelSpace& model,
                             const PseudomultiplierSpec& spec,
                             const ToleranceConfig& tol) {
  std::vector<Vector> reps;
  for (const Vector& c : spec.declared_constraints) {
    Vector rep = c;
    if (model.kind() == ModelKind::composed &&
        model.compose_mode() == ComposeMode::glued &&
        c.size() != model.dim()) {
      rep = model.restrict_ambient(c);
    }
    if (spec.constraint_oracle && !spec.constraint_oracle(rep)) {
      throw NumericError("declared constraint rejected by the oracle");
    }
    reps.push_back(std::move(rep));
  }
  return complement(orthonormalize(reps, model.space(), tol), tol);
}

Matrix operator_exact(const ModelSpace& model,
                      const PseudomultiplierSpec& spec, const Frame& E) {
  const int n = model.dim();
  const MonomialQuotients mq = monomial_quotients(model, spec);
  Matrix X(n, E.rank());
  for (int c = 0; c < E.rank(); ++c) {
    const Vector f = E.column(c);
    Vector g = Vector::Zero(n);
    double spill = 0.0;
    for (int j = 0; j < n; ++j) {
      const Vector& q = mq.Q[j];
      for (int r = 0; r < q.size(); ++r) {
        if (r < n) {
          g(r) += f(j) * q(r);
        } else {
          spill += std::abs(f(j) * q(r));
        }
      }
    }
    if (spill > 1e-10) {
      throw NumericError(
          "extension system inconsistent: quotient leaves the model "
          "(E was not the regular space)");
    }
    X.col(c) = g;
  }
  return X;
}

Matrix operator_interpolated(const ModelSpace& model,
                             const PseudomultiplierSpec& spec, const Frame& E,
                             const ToleranceConfig& tol) {
  const int n = model.dim();
  const Matrix& G = model.space()->gram();
  // Rows of the extension system: g(lambda) = phi(lambda) f(lambda) over the
  // domain, plus any forced functionals <g, w> = 0.
  std::vector<Vector> rows;      // row^T g = rhs
  std::vector<int> value_index;  // sample index for the right-hand side
  if (model.kind() == ModelKind::kernel_sample) {
    for (int i = 0; i < n; ++i) {
      const auto& p = model.sample_points()[i];
      if (p.deriv != 0 || !in_domain(spec, p.z)) continue;
      rows.push_back(G.row(i).transpose());
      value_index.push_back(i);
    }
  } else if (model.kind() == ModelKind::composed) {
    if (spec.probe_points.empty()) {
      throw SpaceError("composed model interpolation needs probe points");
    }
    for (const auto& pp : spec.probe_points) {
      const Vector k = model.kernel_vector(pp.z, 0, pp.component);
      rows.push_back((G * k).conjugate());
      value_index.push_back(-1);
    }
  } else {
    throw SpaceError("interpolation path needs a kernel-sample model");
  }
  const size_t npts = rows.size();
  for (const Vector& w : spec.forced_zero_functionals) {
    rows.push_back((G * w).conjugate());
  }

  Matrix M(rows.size(), n);
  for (size_t i = 0; i < rows.size(); ++i) M.row(i) = rows[i].transpose();
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(M);

  Matrix X(n, E.rank());
  for (int c = 0; c < E.rank(); ++c) {
    const Vector f = E.column(c);
    Vector rhs = Vector::Zero(rows.size());
    for (size_t i = 0; i < npts; ++i) {
      Complex z, fz;
      int comp = -1;
      if (value_index[i] >= 0) {
        z = model.sample_points()[value_index[i]].z;
        fz = (G * f)(value_index[i]);
      } else {
        z = spec.probe_points[i].z;
        comp = spec.probe_points[i].component;
        fz = model.evaluate(f, z, comp);
      }
      rhs(i) = symbol_value(spec, z, comp) * fz;
    }
    Vector g = cod.solve(rhs);
    const double resid = (M * g - rhs).norm();
    if (resid > tol.residual_tol * std::max(1.0, rhs.norm())) {
      throw NumericError(
          "extension system inconsistent (E was not the regular space)");
    }
    X.col(c) = g;
  }
  return X;
}

}  // namespace

Complex symbol_value(const PseudomultiplierSpec& spec, Complex z,
                     int component) {
  if (!spec.parts.empty() && component >= 0) {
    return symbol_value(spec.parts[component], z);
  }
  for (const auto& [pt, val] : spec.overrides) {
    if (near(z, pt)) return val;
  }
  if (spec.rational) {
    const Complex den = poly_eval(spec.rational->second, z);
    if (std::abs(den) < 1e-14) {
      throw NumericError("symbol has no value at this point");
    }
    return poly_eval(spec.rational->first, z) / den;
  }
  if (spec.pointwise) return spec.pointwise(z);
  throw SpaceError("spec carries no symbol");
}

bool in_domain(const PseudomultiplierSpec& spec, Complex z) {
  for (Complex ex : spec.exclusions) {
    if (near(z, ex)) return false;
  }
  return true;
}

Frame regular_space(const ModelSpace& model, const PseudomultiplierSpec& spec,
                    const ToleranceConfig& tol, RegularSpacePath* path_out) {
  validate_spec(model, spec, tol);
  const RegularSpacePath path = decide_path(model, spec);
  if (path_out) *path_out = path;
  switch (path) {
    case RegularSpacePath::exact:
      return regular_space_exact(model, spec, tol);
    case RegularSpacePath::declared:
      return regular_space_declared(model, spec, tol);
    case RegularSpacePath::finite_model:
      // Full-rank sample models extend every f; finite function spaces have
      // no proper singularities, and the path label records that.
      return Frame::full(model.space());
  }
  throw SpaceError("unknown regular-space path");
}

std::pair<Matrix, Matrix> multiplication_operator(
    const ModelSpace& model, const PseudomultiplierSpec& spec, const Frame& E,
    const ToleranceConfig& tol) {
  Matrix X;
  if (spec.rational && model.kind() == ModelKind::coefficient &&
      spec.declared_constraints.empty()) {
    X = operator_exact(model, spec, E);
  } else {
    X = operator_interpolated(model, spec, E, tol);
  }
  const auto edom = InnerProductSpace::euclidean(E.rank());
  const Matrix X_star = adjoint_of(X, *edom, *model.space());
  return {X, X_star};
}

PseudomultiplierAnalysis analyze(const ModelSpace& model,
                                 const PseudomultiplierSpec& spec,
                                 const ToleranceConfig& tol) {
  PseudomultiplierAnalysis an;
  an.space = model.space();

  if (!spec.parts.empty() &&
      model.kind() == ModelKind::composed &&
      model.compose_mode() == ComposeMode::direct_sum) {
    const auto a = analyze(model.part(0), spec.parts[0], tol);
    const auto b = analyze(model.part(1), spec.parts[1], tol);
    const int na = model.part(0).dim(), nb = model.part(1).dim();
    Matrix cols = Matrix::Zero(na + nb, a.E.rank() + b.E.rank());
    cols.topLeftCorner(na, a.E.rank()) = a.E.columns();
    cols.bottomRightCorner(nb, b.E.rank()) = b.E.columns();
    an.E = Frame(model.space(), cols, tol.ortho_tol);
    an.X = Matrix::Zero(na + nb, a.E.rank() + b.E.rank());
    an.X.topLeftCorner(na, a.E.rank()) = a.X;
    an.X.bottomRightCorner(nb, b.E.rank()) = b.X;
    an.path = RegularSpacePath(std::max(static_cast<int>(a.path),
                                        static_cast<int>(b.path)));
    const auto edom = InnerProductSpace::euclidean(an.E.rank());
    an.X_star = adjoint_of(an.X, *edom, *model.space());
  } else {
    an.E = regular_space(model, spec, tol, &an.path);
    std::tie(an.X, an.X_star) = multiplication_operator(model, spec, an.E,
                                                        tol);
  }

  an.S = complement(an.E, tol);
  Frame ker = an.E.rank() > 0
                  ? null_space(an.X_star, model.space(), tol)
                  : Frame::full(model.space());
  an.A = combine(an.S, ker, CombineMode::intersect, tol);
  an.P = combine(an.S, complement(an.A, tol), CombineMode::intersect, tol);
  an.order = an.S.rank();
  an.x_norm = 0.0;
  if (an.X.cols() > 0) {
    Eigen::JacobiSVD<Matrix> svd(model.space()->to_ortho(an.X));
    an.x_norm = svd.singularValues().maxCoeff();
  }
  return an;
}

}  // namespace pmult
