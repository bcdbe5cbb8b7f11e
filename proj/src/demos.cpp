#include "pmult/demos.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "pmult/config.hpp"
#include "pmult/local.hpp"
#include "pmult/pseudomult.hpp"
#include "pmult/singularity.hpp"
#include "pmult/visibility.hpp"

namespace pmult {

namespace {

Vector poly(std::initializer_list<Complex> cs) {
  Vector v(static_cast<Eigen::Index>(cs.size()));
  Eigen::Index i = 0;
  for (const Complex& c : cs) v(i++) = c;
  return v;
}

Frame line(const ModelSpace& m, const Vector& v) {
  return orthonormalize(std::vector<Vector>{v}, m.space());
}

double dist_to(const ModelSpace& m, const Vector& v, const Frame& f) {
  return m.space()->norm(v - project_onto(v, f));
}

// Collects pass/fail checks and the values behind them.
struct Grader {
  Json checks = Json::array();
  std::string first_fail;

  void expect(bool cond, const std::string& what) {
    checks.push_back({{"check", what}, {"pass", cond}});
    if (!cond && first_fail.empty()) first_fail = what;
  }
  void expect_le(double value, double bound, const std::string& what) {
    std::ostringstream os;
    os << what << " (" << value << " <= " << bound << ")";
    expect(value <= bound, os.str());
  }
  DemoResult finish(const std::string& name, Json values) {
    DemoResult r;
    r.name = name;
    r.passed = first_fail.empty();
    r.message = first_fail;
    r.report = std::move(values);
    r.report["checks"] = std::move(checks);
    r.report["passed"] = r.passed;
    return r;
  }
};

PseudomultiplierSpec reciprocal_spec() {
  PseudomultiplierSpec s;
  s.rational = {poly({1.0}), poly({0.0, 1.0})};
  s.exclusions = {0.0};
  s.label = "1/z";
  return s;
}

DemoResult demo_reciprocal_shift() {
  auto m = build_coefficient_model(24);
  auto an = analyze(m, reciprocal_spec());
  Grader g;
  g.expect(an.order == 1, "order is 1");
  g.expect(an.A.rank() == 0, "no ambiguous vectors");
  g.expect(an.P.rank() == 1, "polar space is a line");
  Vector one = Vector::Zero(m.dim());
  one(0) = 1.0;
  g.expect_le(dist_to(m, one, an.P), 1e-10, "constants span the polar space");
  return g.finish("reciprocal-shift",
                  {{"order", an.order},
                   {"dim_A", an.A.rank()},
                   {"dim_P", an.P.rank()},
                   {"P", frame_descriptor(an.P)}});
}

DemoResult demo_reciprocal_power(const std::string& name, int n) {
  auto m = build_coefficient_model(24);
  PseudomultiplierSpec s;
  Vector den = Vector::Zero(n + 1);
  den(n) = 1.0;
  s.rational = {poly({1.0}), den};
  s.overrides = {{0.0, 1.0}};  // the symbol takes the value 1 at the origin
  auto an = analyze(m, s);
  Grader g;
  g.expect(m.dim() - an.E.rank() == n + 1, "regular space has codimension n+1");
  Vector one = Vector::Zero(m.dim());
  one(0) = 1.0;
  g.expect(an.A.rank() == 1, "ambiguous space is a line");
  g.expect_le(dist_to(m, one, an.A), 1e-10, "constants are ambiguous");
  std::vector<Vector> monos;
  for (int j = 1; j <= n; ++j) {
    Vector e = Vector::Zero(m.dim());
    e(j) = 1.0;
    monos.push_back(e);
  }
  const Frame expect_p = orthonormalize(monos, m.space());
  g.expect(an.P.rank() == n, "polar space has dimension n");
  g.expect_le(gap(an.P, expect_p), 1e-10, "polar space is span{z..z^n}");
  return g.finish(name, {{"n", n},
                         {"codim_E", m.dim() - an.E.rank()},
                         {"dim_A", an.A.rank()},
                         {"dim_P", an.P.rank()}});
}

DemoResult demo_two_point_poles() {
  auto m = build_coefficient_model(40);
  PseudomultiplierSpec s;
  s.rational = {poly({1.0}), poly({0.0, -0.5, 1.0})};  // z(z - 1/2)
  s.exclusions = {0.0, 0.5};
  auto an = analyze(m, s);
  Grader g;
  g.expect(an.A.rank() == 0, "no ambiguous vectors");
  g.expect(an.P.rank() == 2, "polar space has dimension 2");
  const Frame kernels = span_kernels(m, {0.0, 0.5});
  g.expect_le(gap(an.P, kernels), 1e-10,
              "polar space is the span of the kernels at the poles");
  return g.finish("two-point-poles", {{"dim_A", an.A.rank()},
                                      {"dim_P", an.P.rank()},
                                      {"order", an.order}});
}

ModelSpace sobolev_grid_model() {
  std::vector<SamplePoint> pts;
  pts.push_back({0.0, 0});
  for (int i = 1; i <= 12; ++i) pts.push_back({i / 12.0, 0});
  return build_kernel_sample_model(pts, KernelFormula::sobolev());
}

DemoResult demo_sobolev_sqrt() {
  auto m = sobolev_grid_model();
  PseudomultiplierSpec s;
  s.pointwise = [](Complex z) { return Complex(std::sqrt(z.real())); };
  s.declared_constraints = {m.kernel_vector(0.0)};
  s.label = "sqrt(t)";
  auto an = analyze(m, s);
  Grader g;
  g.expect(an.A.rank() == 1, "ambiguous space is a line");
  g.expect(an.P.rank() == 0, "no polar vectors");
  const Vector k0 = m.kernel_vector(0.0);
  g.expect_le(dist_to(m, k0, an.A), 1e-8 * m.space()->norm(k0),
              "the kernel at 0 is ambiguous");
  const auto pc = classify_point(m, s, an, 0.0);
  g.expect(pc.kind == PointKind::essential, "0 is an essential ambiguity");
  return g.finish("sobolev-sqrt", {{"dim_A", an.A.rank()},
                                   {"dim_P", an.P.rank()},
                                   {"point_0", "essential"}});
}

DemoResult demo_sobolev_bending() {
  std::vector<SamplePoint> pts;
  pts.push_back({0.0, 0});
  pts.push_back({0.0, 1});  // derivative sample at 0
  for (int i = 1; i <= 8; ++i) pts.push_back({i / 8.0, 0});
  auto m = build_kernel_sample_model(pts, KernelFormula::sobolev_second_order());
  PseudomultiplierSpec s;
  s.pointwise = [](Complex z) { return Complex(std::sqrt(z.real())); };
  s.declared_constraints = {m.kernel_vector(0.0, 0), m.kernel_vector(0.0, 1)};
  // (sqrt(t) f)'(0) = 0 whenever f(0) = f'(0) = 0; this pins the derivative
  // coordinate of the extension, which value interpolation alone leaves free.
  s.forced_zero_functionals = {m.kernel_vector(0.0, 1)};
  auto an = analyze(m, s);
  Grader g;
  g.expect(an.S.rank() == 2, "singular space has dimension 2");
  g.expect(an.A.rank() == 2, "everything singular is ambiguous");
  g.expect(an.P.rank() == 0, "no polar vectors");
  const Frame expect_a = orthonormalize(
      std::vector<Vector>{m.kernel_vector(0.0, 0), m.kernel_vector(0.0, 1)},
      m.space());
  g.expect_le(gap(an.A, expect_a), 1e-8,
              "ambiguous space is span{k_0, s_0}");
  return g.finish("sobolev-bending", {{"dim_S", an.S.rank()},
                                      {"dim_A", an.A.rank()},
                                      {"dim_P", an.P.rank()}});
}

DemoResult demo_table_removable() {
  auto m = build_coefficient_model(16);
  const Complex a = 2.0;
  PseudomultiplierSpec s;
  s.rational = {poly({a}), poly({1.0})};
  s.overrides = {{0.0, -1.0}};  // tabulated value disagrees at the origin
  auto an = analyze(m, s);
  const auto pc = classify_point(m, s, an, 0.0);
  Grader g;
  g.expect(pc.kind == PointKind::removable, "the origin is removable");
  g.expect_le(std::abs(pc.gamma - a), 1e-10, "recovered value is a");
  return g.finish("table-removable",
                  {{"gamma", complex_to_json(pc.gamma)},
                   {"expected", complex_to_json(a)}});
}

DemoResult demo_metric_factorization() {
  auto m = build_coefficient_model(80);
  std::mt19937 rng(20260826);
  std::uniform_real_distribution<double> rad(0.0, 0.8), ang(0.0, 2.0 * M_PI);
  Grader g;
  double worst = 0.0, hmin = 1.0, hmax = 0.0;
  for (int i = 0; i < 60; ++i) {
    const Complex a = std::polar(rad(rng), ang(rng));
    const Complex b = std::polar(rad(rng), ang(rng));
    const double p = metric_p(m, a, b);
    const auto [ph, h] = pseudo_hyperbolic_factorization(a, b);
    worst = std::max(worst, std::abs(p - std::sqrt(2.0) * ph * h));
    hmin = std::min(hmin, h);
    hmax = std::max(hmax, h);
  }
  g.expect_le(worst, 1e-10, "p = sqrt(2) * ph * h");
  g.expect(hmin >= 1.0 / std::sqrt(2.0) - 1e-12 && hmax <= 1.0 + 1e-12,
           "h stays within [1/sqrt(2), 1]");
  return g.finish("metric-factorization",
                  {{"worst_error", worst}, {"h_min", hmin}, {"h_max", hmax}});
}

DemoResult demo_blaschke_distance() {
  auto m = build_coefficient_model(64);
  Grader g;
  double worst = 0.0;
  const std::vector<std::pair<Complex, std::vector<Complex>>> cases = {
      {0.8, {0.1, 0.2, 0.3}},
      {0.5, {0.0}},
      {Complex(0.3, 0.4), {Complex(-0.2, 0.1), 0.25}},
      {Complex(0.0, 0.7), {0.1, Complex(0.2, -0.3), -0.4}},
      {0.2, {0.2, 0.5}},
  };
  for (const auto& [alpha, F] : cases) {
    const auto [numeric, closed] = kernel_distance_formula(m, alpha, F);
    worst = std::max(worst, std::abs(numeric - closed));
  }
  g.expect_le(worst, 1e-6, "model distance matches the Blaschke closed form");
  return g.finish("blaschke-distance", {{"worst_error", worst}});
}

DemoResult demo_monomial_ladders() {
  auto m = build_coefficient_model(24);
  auto an = analyze(m, reciprocal_spec());
  Grader g;
  double worst = 0.0;
  for (int deg = 1; deg <= 24; ++deg) {
    std::vector<Vector> vecs;
    for (int j = deg; j <= 24; ++j) {
      Vector e = Vector::Zero(m.dim());
      e(j) = 1.0;
      vecs.push_back(e);
    }
    const Frame V = orthonormalize(vecs, m.space());
    const auto verdict = sees_subspace(an, V);
    if (!verdict.sees) {
      worst = 2.0;
      break;
    }
    worst = std::max(worst, verdict.residual);
  }
  g.expect_le(worst, 1e-10, "all monomial tails are seen");
  return g.finish("monomial-ladders", {{"worst_residual", worst}});
}

std::vector<Complex> demo_disc_grid() {
  std::vector<Complex> grid = {0.0};
  for (int r = 1; r <= 9; ++r) {
    for (int a = 0; a < 16; ++a) {
      grid.push_back(std::polar(0.1 * r, 2.0 * M_PI * a / 16.0));
    }
  }
  return grid;
}

DemoResult demo_line_not_local() {
  auto m = build_coefficient_model(40);
  Vector zed = Vector::Zero(m.dim());
  zed(1) = 1.0;
  const auto rep = local_search(zed, demo_disc_grid(), m);
  Grader g;
  g.expect(rep.status == LocalStatus::not_local_evidence,
           "no single-kernel limit exists");
  g.expect(rep.best_gap >= 0.86, "best gap stays near the sqrt(3)/2 bound");
  return g.finish("line-not-local", {{"best_gap", rep.best_gap}});
}

DemoResult demo_merging_kernels() {
  auto m = build_coefficient_model(40);
  Vector one = Vector::Zero(m.dim()), zed = Vector::Zero(m.dim());
  one(0) = 1.0;
  zed(1) = 1.0;
  const Frame M = orthonormalize(std::vector<Vector>{one, zed}, m.space());
  const auto rep = local_search(M, demo_disc_grid(), m);
  Grader g;
  g.expect_le(rep.best_gap, 1e-3, "kernel pairs approach the target");
  g.expect(rep.status == LocalStatus::non_kernel_limit,
           "no kernel-line decomposition exists");
  bool near0 = !rep.support_clusters.empty();
  for (const auto& c : rep.support_clusters) {
    near0 = near0 && std::abs(c.center) <= 1e-2;
  }
  g.expect(near0, "support concentrates at the origin");
  return g.finish("merging-kernels",
                  {{"best_gap", rep.best_gap},
                   {"status", "non_kernel_limit"},
                   {"diagnostics", rep.diagnostics}});
}

DemoResult demo_hybrid_glued() {
  auto a = build_coefficient_model(24);
  std::vector<SamplePoint> pts;
  for (int i = 0; i <= 12; ++i) pts.push_back({i / 12.0, 0});
  auto b = build_kernel_sample_model(pts, KernelFormula::sobolev());
  Vector c = Vector::Zero(a.dim() + b.dim());
  c.head(a.dim()) = a.kernel_vector(0.0);
  c.tail(b.dim()) = -b.kernel_vector(0.0);
  auto m = compose_models(a, b, ComposeMode::glued, {c});

  PseudomultiplierSpec s;
  s.parts.resize(2);
  s.parts[0] = reciprocal_spec();
  s.parts[1].pointwise = [](Complex z) { return Complex(std::sqrt(z.real())); };
  s.declared_constraints = {m.kernel_vector(0.0, 0, 0),
                            m.kernel_vector(0.0, 1, 0)};
  for (int j = 0; j < 28; ++j) {
    s.probe_points.push_back({std::polar(0.6, 2.0 * M_PI * j / 28.0), 0});
  }
  for (const auto& p : pts) s.probe_points.push_back({p.z, 1});
  auto an = analyze(m, s);

  Grader g;
  g.expect(an.S.rank() == 2, "singular space has dimension 2");
  Vector amb_k0 = Vector::Zero(m.dim() + 1);
  amb_k0.tail(b.dim()) = b.kernel_vector(0.0);
  g.expect(an.A.rank() == 1 &&
               gap(an.A, line(m, m.restrict_ambient(amb_k0))) <= 1e-6,
           "ambiguous space is the glued Sobolev kernel at 0");
  Vector amb_z = Vector::Zero(m.dim() + 1);
  amb_z(1) = 1.0;
  g.expect(an.P.rank() == 1 &&
               gap(an.P, line(m, m.restrict_ambient(amb_z))) <= 1e-6,
           "polar space is the line through (z, 0)");
  return g.finish("hybrid-glued", {{"dim_S", an.S.rank()},
                                   {"dim_A", an.A.rank()},
                                   {"dim_P", an.P.rank()}});
}

DemoResult demo_zero_kernel_metric() {
  auto m = build_coefficient_model(20, {}, 1);  // every function vanishes at 0
  Grader g;
  bool threw = false;
  try {
    metric_p(m, 0.0, 0.5);
  } catch (const NumericError&) {
    threw = true;
  }
  g.expect(threw, "projective metric rejects the vanishing kernel at 0");
  return g.finish("zero-kernel-metric", {{"raised", threw}});
}

DemoResult demo_incomplete_projective() {
  auto m = build_coefficient_model(40, {}, 1);
  std::vector<Complex> coeffs, points, grid;
  for (int j = 2; j <= 40; ++j) {
    coeffs.push_back(static_cast<double>(j));
    points.push_back(1.0 / static_cast<double>(j));
  }
  for (int r = 1; r <= 9; ++r) {
    for (int a = 0; a < 16; ++a) {
      grid.push_back(std::polar(0.1 * r, 2.0 * M_PI * a / 16.0));
    }
  }
  const auto rep = projective_completeness_probe(m, coeffs, points, grid);
  Grader g;
  g.expect(!rep.limit_is_kernel,
           "the scaled kernel sequence leaves the kernel manifold");
  g.expect(rep.min_kernel_distance >= 0.1,
           "the limit line stays away from every kernel line");
  return g.finish("incomplete-projective",
                  {{"min_kernel_distance", rep.min_kernel_distance}});
}

DemoResult demo_finite_samples() {
  auto m = build_kernel_sample_model(
      {{0.0, 0}, {0.3, 0}, {-0.4, 0}, {Complex(0.1, 0.5), 0}},
      KernelFormula::szego());
  PseudomultiplierSpec s;
  s.pointwise = [](Complex z) { return z + 2.0; };
  auto an = analyze(m, s);
  Grader g;
  g.expect(an.path == RegularSpacePath::finite_model,
           "full-rank sample models take the finite-model path");
  g.expect(an.order == 0, "no singular vectors on the full space");
  return g.finish("finite-samples", {{"order", an.order}});
}

using DemoFn = std::function<DemoResult()>;

const std::vector<std::pair<std::string, DemoFn>>& catalog() {
  static const std::vector<std::pair<std::string, DemoFn>> entries = {
      {"reciprocal-shift", demo_reciprocal_shift},
      {"reciprocal-square",
       [] { return demo_reciprocal_power("reciprocal-square", 2); }},
      {"reciprocal-cube",
       [] { return demo_reciprocal_power("reciprocal-cube", 3); }},
      {"two-point-poles", demo_two_point_poles},
      {"sobolev-sqrt", demo_sobolev_sqrt},
      {"sobolev-bending", demo_sobolev_bending},
      {"table-removable", demo_table_removable},
      {"metric-factorization", demo_metric_factorization},
      {"blaschke-distance", demo_blaschke_distance},
      {"monomial-ladders", demo_monomial_ladders},
      {"line-not-local", demo_line_not_local},
      {"merging-kernels", demo_merging_kernels},
      {"hybrid-glued", demo_hybrid_glued},
      {"zero-kernel-metric", demo_zero_kernel_metric},
      {"incomplete-projective", demo_incomplete_projective},
      {"finite-samples", demo_finite_samples},
  };
  return entries;
}

}  // namespace

std::vector<std::string> demo_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : catalog()) {
    (void)fn;
    names.push_back(name);
  }
  return names;
}

DemoResult run_demo(const std::string& name) {
  for (const auto& [entry, fn] : catalog()) {
    if (entry == name) return fn();
  }
  std::ostringstream os;
  os << "unknown demo \"" << name << "\"; available:";
  for (const auto& n : demo_names()) os << " " << n;
  throw ConfigError(os.str());
}

}  // namespace pmult
