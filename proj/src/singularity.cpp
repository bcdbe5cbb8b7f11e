#include "pmult/singularity.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace pmult {

namespace {

bool near(Complex a, Complex b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(a));
}

}  // namespace

VisibilityVerdict sees_vector(const PseudomultiplierAnalysis& analysis,
                              const Vector& v, const ToleranceConfig& tol) {
  tol.validate();
  const auto& sp = analysis.space;
  VisibilityVerdict verdict;
  const double nv = sp->norm(v);
  if (nv == 0.0) {
    verdict.status = VisibilityStatus::ambiguous;
    return verdict;
  }
  const Vector w = project_onto(v, analysis.E);
  const Vector r = analysis.E.rank() > 0
                       ? Vector(analysis.E.columns() * (analysis.X_star * v))
                       : Vector(Vector::Zero(v.size()));
  const double nw = sp->norm(w);
  const double nr = sp->norm(r);
  if (nw <= tol.rank_tol * nv) {
    verdict.residual = nr;
    verdict.status = nr <= tol.residual_tol * nv ? VisibilityStatus::ambiguous
                                                 : VisibilityStatus::not_visible;
    return verdict;
  }
  const Complex cbar = sp->inner(r, w) / (nw * nw);
  verdict.residual = sp->norm(r - cbar * w);
  if (verdict.residual <= tol.residual_tol * nv) {
    verdict.status = VisibilityStatus::visible;
    verdict.value = std::conj(cbar);
  } else {
    verdict.status = VisibilityStatus::not_visible;
  }
  return verdict;
}

std::tuple<Frame, Frame, Frame> decompose_singular_space(
    const PseudomultiplierAnalysis& analysis, const ToleranceConfig& tol) {
  const auto& an = analysis;
  if (an.A.rank() + an.P.rank() != an.S.rank()) {
    throw NumericError("singular space dimensions do not add up");
  }
  if (gap(an.S, combine(an.A, an.P, CombineMode::sum, tol)) > 1e-8) {
    throw NumericError("A + P does not reconstruct the singular space");
  }
  if (an.A.rank() > 0 && an.P.rank() > 0) {
    const Matrix cross =
        an.A.columns().adjoint() * an.space->gram() * an.P.columns();
    if (cross.cwiseAbs().maxCoeff() > 1e-10) {
      throw NumericError("A and P are not orthogonal");
    }
  }
  return {an.S, an.A, an.P};
}

Complex definable_value(const PseudomultiplierAnalysis& analysis,
                        const Vector& d, const ToleranceConfig& tol) {
  const double nd = analysis.space->norm(d);
  if (nd == 0.0) {
    throw NumericError("not definable: the zero vector carries no value");
  }
  const VisibilityVerdict verdict = sees_vector(analysis, d, tol);
  if (verdict.status == VisibilityStatus::ambiguous) {
    throw NumericError("not definable: the vector is ambiguous");
  }
  if (verdict.status == VisibilityStatus::not_visible) {
    throw NumericError("not definable: the vector is not seen");
  }
  if (analysis.A.rank() > 0) {
    const Vector pa = project_onto(d, analysis.A);
    if (analysis.space->norm(pa) > tol.rank_tol * nd) {
      throw NumericError(
          "not definable: the vector is not orthogonal to the all-values "
          "space");
    }
  }
  return verdict.value;
}

std::vector<std::pair<Vector, Complex>> polar_witness(
    const PseudomultiplierAnalysis& analysis, const Vector& p,
    const std::vector<Complex>& c_schedule, const ToleranceConfig& tol) {
  tol.validate();
  const auto& sp = analysis.space;
  const double np = sp->norm(p);
  if (np == 0.0) {
    throw SpaceError("zero vector is not polar");
  }
  if (sp->norm(p - project_onto(p, analysis.P)) > tol.residual_tol * np) {
    throw SpaceError("vector does not lie in the polar space");
  }
  const Matrix Xse = analysis.x_star_embedded();
  const Eigen::ComplexEigenSolver<Matrix> es(Xse, false);
  const auto& eigs = es.eigenvalues();
  const double margin = 1e-6;
  const Complex rot = std::polar(1.0, M_PI / 7.0);
  const Matrix id = Matrix::Identity(Xse.rows(), Xse.cols());

  std::vector<std::pair<Vector, Complex>> out;
  for (Complex c : c_schedule) {
    int guard = 0;
    while ((eigs.array() - std::conj(c)).abs().minCoeff() < margin) {
      c *= rot;
      if (++guard > 64) {
        throw NumericError("could not steer the schedule off the spectrum");
      }
    }
    const Complex cbar = std::conj(c);
    const Vector v =
        cbar * (cbar * id - Xse).partialPivLu().solve(Vector(p));
    const Vector w = v - project_onto(v, analysis.A);
    const Complex got = definable_value(analysis, w, tol);
    if (std::abs(got - c) > tol.residual_tol * std::max(1.0, std::abs(c))) {
      throw NumericError("witness value drifted from the requested schedule");
    }
    out.emplace_back(w, c);
  }
  return out;
}

PointClassification classify_point(const ModelSpace& model,
                                   const PseudomultiplierSpec& spec,
                                   const PseudomultiplierAnalysis& analysis,
                                   Complex alpha, const ToleranceConfig& tol) {
  tol.validate();
  const auto& sp = analysis.space;
  PointClassification pc;
  const Vector k = model.kernel_vector(alpha);
  const double nk = sp->norm(k);
  const VisibilityVerdict verdict = sees_vector(analysis, k, tol);
  const bool ambiguous = verdict.status == VisibilityStatus::ambiguous;
  if (in_domain(spec, alpha)) {
    // Cross-check: for domain points, ambiguity of the kernel is equivalent
    // to E lying inside k_alpha-perp.
    const bool perp =
        sp->norm(project_onto(k, analysis.E)) <= tol.rank_tol * nk;
    if (perp != ambiguous) {
      throw NumericError(
          "ambiguity criteria disagree at the requested point");
    }
  }
  if (!ambiguous) {
    pc.kind = PointKind::unambiguous;
    pc.residual = verdict.residual;
    pc.evidence = "kernel vector is not ambiguous";
    return pc;
  }

  // Re-analyze with alpha removed from the domain. Declared regular spaces
  // do not depend on the point set, so E' = E there.
  Frame eprime = analysis.E;
  PseudomultiplierSpec reduced = spec;
  if (spec.declared_constraints.empty()) {
    reduced.exclusions.push_back(alpha);
    std::erase_if(reduced.overrides,
                  [&](const auto& ov) { return near(ov.first, alpha); });
    eprime = regular_space(model, reduced, tol);
  }
  const Vector pk = project_onto(k, eprime);
  const double npk = sp->norm(pk);
  if (npk <= tol.rank_tol * nk) {
    pc.kind = PointKind::essential;
    pc.residual = npk;
    pc.evidence = "excluding the point leaves every candidate vanishing at it";
    return pc;
  }

  const auto [Xp, Xp_star] =
      multiplication_operator(model, reduced, eprime, tol);
  (void)Xp_star;
  const Matrix G = sp->gram();
  auto coords_of = [&](const Vector& f) {
    return Vector(eprime.columns().adjoint() * (G * f));
  };
  // f0 normalized to f0(alpha) = 1; its extension value at alpha is gamma.
  const Vector f0 = pk / model.evaluate(pk, alpha);
  const Complex gamma = model.evaluate(Xp * coords_of(f0), alpha);
  // Lemma-style uniqueness: the same gamma must arise from every basis
  // vector adjusted to take the value 1 at alpha.
  double worst = 0.0;
  for (int i = 0; i < eprime.rank(); ++i) {
    const Vector b = eprime.column(i);
    const Vector fi = b + (1.0 - model.evaluate(b, alpha)) * f0;
    const Complex gi = model.evaluate(Xp * coords_of(fi), alpha);
    worst = std::max(worst, std::abs(gi - gamma));
  }
  if (worst > 1e-8 * std::max(1.0, std::abs(gamma))) {
    throw NumericError(
        "repairing value is not unique across the basis (tolerance "
        "violation)");
  }
  pc.kind = PointKind::removable;
  pc.gamma = gamma;
  pc.residual = worst;
  pc.evidence = "re-analysis after excluding the point yields one value";
  return pc;
}

PseudopoleReport pseudopole_check(const ModelSpace& model,
                                  const PseudomultiplierAnalysis& analysis,
                                  Complex alpha, const Vector& h,
                                  const ToleranceConfig& tol) {
  tol.validate();
  const auto& sp = analysis.space;
  const double nh = sp->norm(h);
  if (nh == 0.0 ||
      sp->norm(h - project_onto(h, analysis.E)) > tol.residual_tol * nh) {
    throw SpaceError("witness must lie in the regular space");
  }
  if (std::abs(model.evaluate(h, alpha)) > tol.residual_tol * nh) {
    throw SpaceError("witness must vanish at the point");
  }
  const Matrix G = sp->gram();
  const Vector coords = analysis.E.columns().adjoint() * (G * h);
  const Vector xh = analysis.X * coords;
  if (std::abs(model.evaluate(xh, alpha)) <= tol.residual_tol * nh) {
    throw SpaceError("extension also vanishes at the point: no pole witness");
  }
  const Vector k = model.kernel_vector(alpha);
  const Vector cand = k - project_onto(k, analysis.A);
  PseudopoleReport rep;
  rep.residual = sp->norm(cand - project_onto(cand, analysis.P)) /
                 std::max(sp->norm(cand), 1e-300);
  rep.pass = rep.residual <= 1e-8;
  return rep;
}

}  // namespace pmult
