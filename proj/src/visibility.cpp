#include "pmult/visibility.hpp"

namespace pmult {

SubspaceVerdict sees_subspace(const PseudomultiplierAnalysis& analysis,
                              const Frame& V, const ToleranceConfig& tol) {
  tol.validate();
  const auto& sp = analysis.space;
  SubspaceVerdict verdict;
  const Frame reach = combine(V, analysis.S, CombineMode::sum, tol);
  double worst = 0.0;
  for (int i = 0; i < V.rank(); ++i) {
    const Vector v = V.column(i);
    const Vector r = analysis.E.rank() > 0
                         ? Vector(analysis.E.columns() * (analysis.X_star * v))
                         : Vector(Vector::Zero(v.size()));
    worst = std::max(worst, sp->norm(r - project_onto(r, reach)));
  }
  verdict.residual = worst;
  verdict.sees = worst <= tol.residual_tol;
  if (verdict.sees) {
    verdict.regular =
        combine(V, analysis.S, CombineMode::intersect, tol).rank() == 0;
    verdict.value_operator = value_operator(analysis, V, tol);
  }
  return verdict;
}

Matrix value_operator(const PseudomultiplierAnalysis& analysis, const Frame& V,
                      const ToleranceConfig& tol) {
  tol.validate();
  const auto& sp = analysis.space;
  const Matrix& G = sp->gram();
  const int r = V.rank();
  const int ne = analysis.E.rank();
  // V-coordinates of P_V f and P_V X f over the E-basis.
  Matrix Xc(r, ne), Yc(r, ne);
  for (int i = 0; i < ne; ++i) {
    const Vector f = analysis.E.column(i);
    Vector coords = Vector::Zero(ne);
    coords(i) = 1.0;
    const Vector xf = analysis.X * coords;
    Xc.col(i) = V.columns().adjoint() * (G * f);
    Yc.col(i) = V.columns().adjoint() * (G * xf);
  }
  // C = Yc * pinv(Xc): least squares over the E-basis, zero on the
  // orthogonal complement of P_V E inside V.
  Eigen::JacobiSVD<Matrix> svd(Xc,
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double cutoff = s.size() > 0 ? tol.rank_tol * s(0) : 0.0;
  Matrix sinv = Matrix::Zero(s.size(), s.size());
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) sinv(i, i) = 1.0 / s(i);
  }
  const Matrix C =
      Yc * svd.matrixV() * sinv * svd.matrixU().adjoint();
  // Defining identity over the E-basis.
  for (int i = 0; i < ne; ++i) {
    if ((Yc.col(i) - C * Xc.col(i)).norm() >
        tol.residual_tol * std::max(1.0, Xc.col(i).norm())) {
      throw NumericError(
          "value operator does not exist: subspace is not seen");
    }
  }
  return C;
}

}  // namespace pmult
