#pragma once

#include "pmult/pseudomult.hpp"

namespace pmult {

enum class VisibilityStatus { not_visible, visible, ambiguous };

/// Outcome of testing whether a symbol sees a vector: invisible, visible
/// with one value, or seen with every value (ambiguous).
struct VisibilityVerdict {
  VisibilityStatus status = VisibilityStatus::not_visible;
  Complex value;  // meaningful only when status == visible
  double residual = 0.0;
};

/// X* v = conj(c) P_E v decides visibility; c is recovered by least squares
/// in the Gram metric and certified by the residual.
VisibilityVerdict sees_vector(const PseudomultiplierAnalysis& analysis,
                              const Vector& v, const ToleranceConfig& tol = {});

/// (S, A, P) re-exposed with the orthogonality and dimension checks applied.
std::tuple<Frame, Frame, Frame> decompose_singular_space(
    const PseudomultiplierAnalysis& analysis, const ToleranceConfig& tol = {});

/// The unique value carried by a definable vector (nonzero, visible,
/// orthogonal to A). Throws NumericError naming the failing clause.
Complex definable_value(const PseudomultiplierAnalysis& analysis,
                        const Vector& d, const ToleranceConfig& tol = {});

/// Resolvent witnesses for a polar vector p: v_n = conj(c_n)
/// (conj(c_n) I - X*)^{-1} p, returned as w_n = P_{A-perp} v_n with the
/// value actually used (schedule entries colliding with the spectrum of X*
/// are rotated by e^{i pi/7} until clear of the 1e-6 margin). Each witness
/// is certified definable with value c_n.
std::vector<std::pair<Vector, Complex>> polar_witness(
    const PseudomultiplierAnalysis& analysis, const Vector& p,
    const std::vector<Complex>& c_schedule, const ToleranceConfig& tol = {});

enum class PointKind { unambiguous, removable, essential };

struct PointClassification {
  PointKind kind = PointKind::unambiguous;
  Complex gamma;  // the unique repairing value, for removable points
  double residual = 0.0;
  std::string evidence;
};

/// Classifies a point: ambiguous iff its kernel vector is ambiguous
/// (cross-checked against P_E k_alpha = 0 for domain points); ambiguous
/// points are essential when excluding the point leaves E inside
/// k_alpha-perp, else removable with the unique gamma recovered from the
/// re-analysis (verified across an E'-basis).
PointClassification classify_point(const ModelSpace& model,
                                   const PseudomultiplierSpec& spec,
                                   const PseudomultiplierAnalysis& analysis,
                                   Complex alpha,
                                   const ToleranceConfig& tol = {});

struct PseudopoleReport {
  bool pass = false;
  double residual = 0.0;
};

/// Given a witness h in E with h(alpha) = 0 but (Xh)(alpha) != 0, checks
/// that P_{A-perp} k_alpha lies in the polar space.
PseudopoleReport pseudopole_check(const ModelSpace& model,
                                  const PseudomultiplierAnalysis& analysis,
                                  Complex alpha, const Vector& h,
                                  const ToleranceConfig& tol = {});

}  // namespace pmult
