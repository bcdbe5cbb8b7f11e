#pragma once

#include "pmult/pseudomult.hpp"

namespace pmult {

/// Whether a symbol sees a closed subspace, whether the subspace is regular
/// for it, and (when seen) the induced value operator in the frame's basis.
struct SubspaceVerdict {
  bool sees = false;
  bool regular = false;
  double residual = 0.0;
  std::optional<Matrix> value_operator;  // r x r, in V's orthonormal basis
};

/// V is seen iff X* V lies inside V + E-perp; regular iff additionally
/// V meets E-perp trivially.
SubspaceVerdict sees_subspace(const PseudomultiplierAnalysis& analysis,
                              const Frame& V, const ToleranceConfig& tol = {});

/// The value operator C with C P_V f = P_V X f for f in E, built by least
/// squares with a rank_tol pseudoinverse cutoff (so C vanishes on
/// V minus P_V E). Throws when the subspace is not seen.
Matrix value_operator(const PseudomultiplierAnalysis& analysis, const Frame& V,
                      const ToleranceConfig& tol = {});

}  // namespace pmult
