#pragma once

#include "pmult/model.hpp"

namespace pmult {

/// How the regular space was obtained; downstream assertions need to know
/// whether E is exact, trusted from declared constraints, or simply the
/// whole finite model.
enum class RegularSpacePath { exact, declared, finite_model };

/// An interpolation node for composed models: a point together with the
/// component it belongs to (-1 lets the model pick).
struct ProbePoint {
  Complex z;
  int component = -1;
};

/// A symbol on a model: either a rational function (coefficient lists,
/// ascending) or a pointwise formula, with optional redefinitions at
/// individual points and an exclusion list carving out the domain.
struct PseudomultiplierSpec {
  std::optional<std::pair<Vector, Vector>> rational;  // (num, den)
  std::function<Complex(Complex)> pointwise;

  std::vector<std::pair<Complex, Complex>> overrides;  // (point, new value)
  std::vector<Complex> exclusions;

  /// Declared path: E = joint null space of these functionals (given as
  /// their representers in model coordinates; ambient coordinates for glued
  /// composed models).
  std::vector<Vector> declared_constraints;
  /// Extra rows of the extension system: <g, w> = 0 for each w (used when
  /// point interpolation alone does not determine g).
  std::vector<Vector> forced_zero_functionals;
  /// Optional certifier for declared constraints; analysis fails when a
  /// constraint representer is rejected.
  std::function<bool(const Vector&)> constraint_oracle;

  /// Composed models: one sub-spec per component.
  std::vector<PseudomultiplierSpec> parts;
  /// Interpolation nodes for the extension system on composed models.
  std::vector<ProbePoint> probe_points;

  std::string label;
};

/// Symbol value at a point (overrides first, then rational or pointwise).
/// For composed specs, `component` selects the sub-spec.
Complex symbol_value(const PseudomultiplierSpec& spec, Complex z,
                     int component = -1);
bool in_domain(const PseudomultiplierSpec& spec, Complex z);

/// The bundle computed for one symbol on one model.
struct PseudomultiplierAnalysis {
  SpacePtr space;  // the model's inner-product space
  Frame E;         // regular space
  Matrix X;        // E-coordinates -> model coordinates
  Matrix X_star;   // model coordinates -> E-coordinates
  int order = 0;   // dim S
  Frame S;         // E-perp
  Frame A;         // S with X* kernel: all-values vectors
  Frame P;         // S minus A
  RegularSpacePath path = RegularSpacePath::exact;
  double x_norm = 0.0;  // sigma_max of X in the Gram metric

  /// X* as a square matrix on the model, via the inclusion of E.
  Matrix x_star_embedded() const { return E.columns() * X_star; }
};

Frame regular_space(const ModelSpace& model, const PseudomultiplierSpec& spec,
                    const ToleranceConfig& tol = {},
                    RegularSpacePath* path_out = nullptr);

/// X column-by-column (exact polynomial quotients on the rational path,
/// interpolation/extension systems otherwise) plus its adjoint into
/// E-coordinates. Throws NumericError when the extension system is
/// inconsistent (E was not the regular space).
std::pair<Matrix, Matrix> multiplication_operator(
    const ModelSpace& model, const PseudomultiplierSpec& spec, const Frame& E,
    const ToleranceConfig& tol = {});

PseudomultiplierAnalysis analyze(const ModelSpace& model,
                                 const PseudomultiplierSpec& spec,
                                 const ToleranceConfig& tol = {});

}  // namespace pmult
