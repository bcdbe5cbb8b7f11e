#include "doctest.h"
#include "pmult/linalg.hpp"

#include <cmath>

using namespace pmult;

namespace {

SpacePtr szego_two_point_space() {
  // Gram of {k_0, k_{1/2}} in the Hardy space.
  Matrix g(2, 2);
  g << 1.0, 1.0, 1.0, 4.0 / 3.0;
  return InnerProductSpace::make(g, "szego-2pt");
}

}  // namespace

TEST_CASE("inner product follows the Gram matrix") {
  auto sp = szego_two_point_space();
  Vector e0 = Vector::Zero(2), e1 = Vector::Zero(2);
  e0(0) = 1.0;
  e1(1) = 1.0;
  CHECK(sp->inner(e0, e0).real() == doctest::Approx(1.0));
  CHECK(sp->inner(e1, e1).real() == doctest::Approx(4.0 / 3.0));
  CHECK(sp->inner(e0, e1).real() == doctest::Approx(1.0));
  CHECK(sp->norm(e1 - e0) == doctest::Approx(std::sqrt(1.0 / 3.0)));
}

TEST_CASE("Gram matrix must be Hermitian positive-definite") {
  Matrix bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3, -1
  CHECK_THROWS_AS(InnerProductSpace::make(bad), NumericError);
  Matrix asym(2, 2);
  asym << 1.0, Complex(0, 1), Complex(0, 1), 1.0;
  CHECK_THROWS_AS(InnerProductSpace::make(asym), NumericError);
}

TEST_CASE("orthonormalize and project in a weighted space") {
  auto sp = szego_two_point_space();
  Matrix v(2, 1);
  v << 1.0, 0.0;  // k_0
  Frame line = orthonormalize(v, sp);
  REQUIRE(line.rank() == 1);
  // Project k_{1/2} onto span{k_0}: <k_half, k_0>/<k_0,k_0> k_0 = k_0.
  Vector khalf = Vector::Zero(2);
  khalf(1) = 1.0;
  Vector p = project_onto(khalf, line);
  Vector expected(2);
  expected << 1.0, 0.0;
  CHECK(sp->norm(p - expected) < 1e-12);
  // Pythagoras: |k_half|^2 = |p|^2 + |k_half - p|^2.
  CHECK(sp->norm(khalf) * sp->norm(khalf) ==
        doctest::Approx(sp->norm(p) * sp->norm(p) +
                        sp->norm(khalf - p) * sp->norm(khalf - p)));
}

TEST_CASE("rank detection drops dependent vectors") {
  auto sp = InnerProductSpace::euclidean(3);
  Matrix v(3, 3);
  v << 1, 1, 2,
       0, 1, 1,
       0, 0, 0;
  Frame f = orthonormalize(v, sp);
  CHECK(f.rank() == 2);
}

TEST_CASE("complement and combine") {
  auto sp = szego_two_point_space();
  Matrix v(2, 1);
  v << 1.0, 0.0;
  Frame line = orthonormalize(v, sp);
  Frame comp = complement(line);
  REQUIRE(comp.rank() == 1);
  CHECK(std::abs(sp->inner(comp.column(0), line.column(0))) < 1e-12);
  Frame whole = combine(line, comp, CombineMode::sum);
  CHECK(whole.rank() == 2);
  Frame meet = combine(line, comp, CombineMode::intersect);
  CHECK(meet.rank() == 0);
}

TEST_CASE("gap between kernel lines at 0 and 1/2 is 1/2") {
  auto sp = szego_two_point_space();
  Matrix a(2, 1), b(2, 1);
  a << 1.0, 0.0;
  b << 0.0, 1.0;
  Frame m = orthonormalize(a, sp);
  Frame n = orthonormalize(b, sp);
  CHECK(gap(m, n) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(gap(m, m) == doctest::Approx(0.0));
  Frame zero = Frame::zero(sp);
  CHECK(gap(m, zero) == doctest::Approx(1.0));
}

TEST_CASE("adjoint satisfies the defining identity") {
  auto sp = szego_two_point_space();
  Matrix t(2, 2);
  t << Complex(1, 1), 0.5, Complex(0, -2), 3.0;
  Matrix ts = adjoint_of(t, *sp, *sp);
  Vector x(2), y(2);
  x << Complex(0.3, 0.7), Complex(-1, 0.2);
  y << Complex(2, -1), Complex(0.1, 0.4);
  CHECK(std::abs(sp->inner(t * x, y) - sp->inner(x, ts * y)) < 1e-12);
}

TEST_CASE("null_space in a weighted metric") {
  auto sp = szego_two_point_space();
  Matrix t(1, 2);
  t << 1.0, 1.0;  // f -> f_0 + f_1
  Frame ker = null_space(t, sp);
  REQUIRE(ker.rank() == 1);
  CHECK((t * ker.column(0)).norm() < 1e-12);
  CHECK(sp->norm(ker.column(0)) == doctest::Approx(1.0));
}

TEST_CASE("polynomial helpers") {
  Vector a(3), b(2);
  a << -1.0, 0.0, 1.0;  // z^2 - 1
  b << 1.0, 1.0;        // z + 1
  Vector q, r;
  poly_divmod(a, b, q, r);
  CHECK(std::abs(poly_eval(q, 2.0) - 1.0) < 1e-14);  // q = z - 1
  CHECK(r.cwiseAbs().maxCoeff() < 1e-14);
  Vector prod = poly_mul(q, b);
  CHECK((prod - a).norm() < 1e-14);
  Vector shifted = poly_shift(b, 2);  // z^3 + z^2
  CHECK(std::abs(poly_eval(shifted, 2.0) - 12.0) < 1e-12);
}
