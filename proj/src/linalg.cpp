#include "pmult/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace pmult {

void ToleranceConfig::validate() const {
  auto ok = [](double t) { return t > 0.0 && t < 1.0; };
  if (!ok(rank_tol) || !ok(residual_tol) || !ok(ortho_tol)) {
    throw std::invalid_argument(
        "ToleranceConfig: all tolerances must lie in (0, 1)");
  }
}

InnerProductSpace::InnerProductSpace(Matrix gram, std::string label,
                                     double rank_tol)
    : dim_(static_cast<int>(gram.rows())),
      gram_(std::move(gram)),
      label_(std::move(label)) {
  if (gram_.rows() != gram_.cols() || dim_ < 1) {
    throw SpaceError("InnerProductSpace: gram must be square and nonempty");
  }
  const double scale = gram_.cwiseAbs().maxCoeff();
  if ((gram_ - gram_.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw NumericError("InnerProductSpace: gram matrix is not Hermitian");
  }
  gram_ = 0.5 * (gram_ + gram_.adjoint().eval());
  identity_gram_ = (gram_ - Matrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff() <
                   1e-14 * std::max(1.0, scale);

  Eigen::SelfAdjointEigenSolver<Matrix> es(gram_);
  const double lam_max = es.eigenvalues().maxCoeff();
  const double lam_min = es.eigenvalues().minCoeff();
  if (lam_min <= rank_tol * lam_max) {
    throw NumericError("InnerProductSpace: gram matrix is not positive "
                       "definite at the configured rank tolerance");
  }
  Eigen::LLT<Matrix> llt(gram_);
  if (llt.info() != Eigen::Success) {
    throw NumericError("InnerProductSpace: Cholesky factorization failed");
  }
  chol_lower_ = llt.matrixL();
}

SpacePtr InnerProductSpace::euclidean(int dim, std::string label) {
  return std::make_shared<const InnerProductSpace>(Matrix::Identity(dim, dim),
                                                   std::move(label));
}

SpacePtr InnerProductSpace::make(Matrix gram, std::string label,
                                 double rank_tol) {
  return std::make_shared<const InnerProductSpace>(std::move(gram),
                                                   std::move(label), rank_tol);
}

Complex InnerProductSpace::inner(const Vector& x, const Vector& y) const {
  if (x.size() != dim_ || y.size() != dim_) {
    throw SpaceError("inner: vector length does not match space dimension");
  }
  if (identity_gram_) return y.dot(x);
  return y.dot(gram_ * x);
}

double InnerProductSpace::norm(const Vector& x) const {
  return std::sqrt(std::max(0.0, inner(x, x).real()));
}

Matrix InnerProductSpace::to_ortho(const Matrix& x) const {
  if (identity_gram_) return x;
  return chol_lower_.adjoint() * x;
}

Matrix InnerProductSpace::from_ortho(const Matrix& w) const {
  if (identity_gram_) return w;
  return chol_lower_.adjoint()
      .triangularView<Eigen::Upper>()
      .solve(w);
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->dim() != b->dim()) return false;
  const double scale = std::max(a->gram().cwiseAbs().maxCoeff(),
                                b->gram().cwiseAbs().maxCoeff());
  return (a->gram() - b->gram()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

Frame::Frame(SpacePtr space, Matrix columns, double ortho_tol)
    : space_(std::move(space)), columns_(std::move(columns)) {
  if (!space_) throw SpaceError("Frame: null space");
  if (columns_.size() == 0) {
    columns_.resize(space_->dim(), 0);
  }
  if (columns_.rows() != space_->dim()) {
    throw SpaceError("Frame: column length does not match space dimension");
  }
  if (columns_.cols() > space_->dim()) {
    throw SpaceError("Frame: rank exceeds space dimension");
  }
  if (columns_.cols() > 0) {
    const Matrix g = columns_.adjoint() * space_->gram() * columns_;
    const Matrix eye = Matrix::Identity(columns_.cols(), columns_.cols());
    if ((g - eye).cwiseAbs().maxCoeff() > ortho_tol) {
      throw NumericError("Frame: columns are not Gram-orthonormal");
    }
  }
}

Frame Frame::zero(SpacePtr space) {
  return Frame(std::move(space), Matrix());
}

Frame Frame::full(SpacePtr space) {
  Matrix eye = Matrix::Identity(space->dim(), space->dim());
  return Frame(space, space->from_ortho(eye));
}

Matrix Frame::ortho_columns() const {
  return space_->to_ortho(columns_);
}

Frame orthonormalize(const Matrix& vectors, SpacePtr space,
                     const ToleranceConfig& tol) {
  tol.validate();
  if (!space) throw SpaceError("orthonormalize: null space");
  if (vectors.cols() == 0) return Frame::zero(space);
  if (vectors.rows() != space->dim()) {
    throw SpaceError("orthonormalize: vector length mismatch");
  }
  const Matrix w = space->to_ortho(vectors);
  Eigen::JacobiSVD<Matrix> svd(w, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return Frame::zero(space);
  int r = 0;
  while (r < sv.size() && sv(r) > tol.rank_tol * sv(0)) ++r;
  if (r == 0) return Frame::zero(space);
  return Frame(space, space->from_ortho(svd.matrixU().leftCols(r)),
               tol.ortho_tol);
}

Frame orthonormalize(const std::vector<Vector>& vectors, SpacePtr space,
                     const ToleranceConfig& tol) {
  Matrix m(space ? space->dim() : 0, static_cast<int>(vectors.size()));
  for (size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != m.rows()) {
      throw SpaceError("orthonormalize: vector length mismatch");
    }
    m.col(static_cast<int>(i)) = vectors[i];
  }
  return orthonormalize(m, std::move(space), tol);
}

Vector project_onto(const Vector& v, const Frame& M) {
  if (!M.valid()) throw SpaceError("project_onto: invalid frame");
  if (v.size() != M.dim()) {
    throw SpaceError("project_onto: vector does not belong to frame's space");
  }
  if (M.rank() == 0) return Vector::Zero(M.dim());
  return M.columns() * (M.columns().adjoint() * (M.space()->gram() * v));
}

Frame complement(const Frame& M, const ToleranceConfig& tol) {
  tol.validate();
  if (!M.valid()) throw SpaceError("complement: invalid frame");
  const auto& space = M.space();
  const int n = space->dim();
  if (M.rank() == 0) return Frame::full(space);
  const Matrix w = M.ortho_columns();  // n x r, orthonormal
  Eigen::JacobiSVD<Matrix> svd(w, Eigen::ComputeFullU);
  const int r = M.rank();
  if (r == n) return Frame::zero(space);
  const Matrix rest = svd.matrixU().rightCols(n - r);
  return Frame(space, space->from_ortho(rest), tol.ortho_tol);
}

Frame combine(const Frame& A, const Frame& B, CombineMode mode,
              const ToleranceConfig& tol) {
  tol.validate();
  if (!A.valid() || !B.valid()) throw SpaceError("combine: invalid frame");
  if (!same_space(A.space(), B.space())) {
    throw SpaceError("combine: frames belong to different spaces");
  }
  if (mode == CombineMode::sum) {
    Matrix m(A.dim(), A.rank() + B.rank());
    m.leftCols(A.rank()) = A.columns();
    m.rightCols(B.rank()) = B.columns();
    return orthonormalize(m, A.space(), tol);
  }
  return complement(
      combine(complement(A, tol), complement(B, tol), CombineMode::sum, tol),
      tol);
}

Matrix adjoint_of(const Matrix& T, const InnerProductSpace& dom,
                  const InnerProductSpace& cod) {
  if (T.cols() != dom.dim() || T.rows() != cod.dim()) {
    throw SpaceError("adjoint_of: operator shape does not match spaces");
  }
  if (dom.identity_gram() && cod.identity_gram()) return T.adjoint();
  const Matrix rhs = T.adjoint() * cod.gram();
  return dom.gram().ldlt().solve(rhs);
}

double gap(const Frame& M, const Frame& N) {
  if (!M.valid() || !N.valid()) throw SpaceError("gap: invalid frame");
  if (!same_space(M.space(), N.space())) {
    throw SpaceError("gap: frames belong to different spaces");
  }
  const int n = M.dim();
  Matrix diff = Matrix::Zero(n, n);
  if (M.rank() > 0) {
    const Matrix qm = M.ortho_columns();
    diff += qm * qm.adjoint();
  }
  if (N.rank() > 0) {
    const Matrix qn = N.ortho_columns();
    diff -= qn * qn.adjoint();
  }
  if (diff.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(diff);
  return svd.singularValues()(0);
}

Frame null_space(const Matrix& T, SpacePtr space, const ToleranceConfig& tol) {
  tol.validate();
  if (!space || T.cols() != space->dim()) {
    throw SpaceError("null_space: operator does not act on the space");
  }
  if (T.rows() == 0) return Frame::full(space);
  // Null space of T in w-coordinates, mapped back to model coordinates.
  const Matrix b = T * space->from_ortho(
                           Matrix::Identity(space->dim(), space->dim()));
  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  int r = 0;
  while (r < sv.size() && sv(r) > tol.rank_tol * smax) ++r;
  const int n = space->dim();
  if (r == n) return Frame::zero(space);
  const Matrix w0 = svd.matrixV().rightCols(n - r);
  return Frame(space, space->from_ortho(w0), tol.ortho_tol);
}

Vector poly_mul(const Vector& a, const Vector& b) {
  if (a.size() == 0 || b.size() == 0) return Vector();
  Vector c = Vector::Zero(a.size() + b.size() - 1);
  for (int i = 0; i < a.size(); ++i) {
    for (int j = 0; j < b.size(); ++j) c(i + j) += a(i) * b(j);
  }
  return c;
}

namespace {
int poly_degree(const Vector& a) {
  for (int d = static_cast<int>(a.size()) - 1; d >= 0; --d) {
    if (std::abs(a(d)) > 0.0) return d;
  }
  return -1;
}
}  // namespace

void poly_divmod(const Vector& a, const Vector& b, Vector& quot, Vector& rem) {
  const int db = poly_degree(b);
  if (db < 0) throw std::invalid_argument("poly_divmod: zero divisor");
  rem = a;
  const int da = poly_degree(a);
  if (da < db) {
    quot = Vector::Zero(1);
    Vector padded = Vector::Zero(std::max(1, db));
    const int keep = std::min<int>(da + 1, static_cast<int>(padded.size()));
    if (keep > 0) padded.head(keep) = a.head(keep);
    rem = std::move(padded);
    return;
  }
  quot = Vector::Zero(da - db + 1);
  for (int d = da; d >= db; --d) {
    const Complex c = rem(d) / b(db);
    quot(d - db) = c;
    for (int j = 0; j <= db; ++j) rem(d - db + j) -= c * b(j);
  }
  rem.conservativeResize(std::max(1, db));
}

Complex poly_eval(const Vector& a, Complex z) {
  Complex acc = 0.0;
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i) {
    acc = acc * z + a(i);
  }
  return acc;
}

Vector poly_shift(const Vector& a, int k) {
  Vector out = Vector::Zero(a.size() + k);
  out.tail(a.size()) = a;
  return out;
}

}  // namespace pmult
