#pragma once

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmult {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Thrown when two objects belong to different inner-product spaces or
/// dimensions do not line up.
class SpaceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a computation fails numerically (singular Gram, inconsistent
/// extension system, spectrum collision, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ToleranceConfig {
  double rank_tol = 1e-9;
  double residual_tol = 1e-8;
  double ortho_tol = 1e-9;

  void validate() const;
};

/// A finite-dimensional complex inner-product space with a fixed (possibly
/// non-identity) Hermitian positive-definite Gram matrix. The inner product
/// of coordinate vectors x, y is <x,y> = y^H G x.
///
/// All Gram-weighted computations go through the Cholesky factor G = L L^H:
/// w = L^H x are coordinates in which the standard inner product applies.
class InnerProductSpace {
 public:
  InnerProductSpace(Matrix gram, std::string label = "",
                    double rank_tol = 1e-9);

  static std::shared_ptr<const InnerProductSpace> euclidean(
      int dim, std::string label = "");
  static std::shared_ptr<const InnerProductSpace> make(
      Matrix gram, std::string label = "", double rank_tol = 1e-9);

  int dim() const { return dim_; }
  const Matrix& gram() const { return gram_; }
  const std::string& label() const { return label_; }
  bool identity_gram() const { return identity_gram_; }

  Complex inner(const Vector& x, const Vector& y) const;
  double norm(const Vector& x) const;

  /// Change of basis into the orthonormal (L^H) coordinates and back.
  Matrix to_ortho(const Matrix& x) const;
  Matrix from_ortho(const Matrix& w) const;

 private:
  int dim_;
  Matrix gram_;
  std::string label_;
  Matrix chol_lower_;  // G = L L^H
  bool identity_gram_ = false;
};

using SpacePtr = std::shared_ptr<const InnerProductSpace>;

bool same_space(const SpacePtr& a, const SpacePtr& b);

/// An orthonormal basis of a closed subspace: columns^H G columns = I_r.
/// Rank 0 means the zero subspace. Immutable.
class Frame {
 public:
  Frame() = default;
  Frame(SpacePtr space, Matrix columns, double ortho_tol = 1e-9);

  static Frame zero(SpacePtr space);
  static Frame full(SpacePtr space);

  const SpacePtr& space() const { return space_; }
  const Matrix& columns() const { return columns_; }
  int rank() const { return static_cast<int>(columns_.cols()); }
  int dim() const { return space_ ? space_->dim() : 0; }
  Vector column(int i) const { return columns_.col(i); }
  bool valid() const { return static_cast<bool>(space_); }

  /// Columns in L^H coordinates (orthonormal in the standard metric).
  Matrix ortho_columns() const;

 private:
  SpacePtr space_;
  Matrix columns_;
};

Frame orthonormalize(const Matrix& vectors, SpacePtr space,
                     const ToleranceConfig& tol = {});
Frame orthonormalize(const std::vector<Vector>& vectors, SpacePtr space,
                     const ToleranceConfig& tol = {});

Vector project_onto(const Vector& v, const Frame& M);

Frame complement(const Frame& M, const ToleranceConfig& tol = {});

enum class CombineMode { sum, intersect };

Frame combine(const Frame& A, const Frame& B, CombineMode mode,
              const ToleranceConfig& tol = {});

/// Adjoint of T : dom -> cod with respect to the two Gram inner products,
/// T* = G_dom^{-1} T^H G_cod.
Matrix adjoint_of(const Matrix& T, const InnerProductSpace& dom,
                  const InnerProductSpace& cod);

/// Operator norm of P_M - P_N in the Gram inner product.
double gap(const Frame& M, const Frame& N);

/// Orthonormal frame for the null space of a linear map given in model
/// coordinates of `space` (null space measured in the Gram inner product).
Frame null_space(const Matrix& T, SpacePtr space,
                 const ToleranceConfig& tol = {});

// Dense polynomial helpers, coefficients in ascending degree order.
Vector poly_mul(const Vector& a, const Vector& b);
void poly_divmod(const Vector& a, const Vector& b, Vector& quot, Vector& rem);
Complex poly_eval(const Vector& a, Complex z);
Vector poly_shift(const Vector& a, int k);  // multiply by z^k (k >= 0)

}  // namespace pmult
