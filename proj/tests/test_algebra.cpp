#include <doctest.h>

#include "transchar/algebra.hpp"

using namespace transchar;

TEST_CASE("quotient algebra arithmetic and reduction") {
  RingSpec E = RingSpec::E_flavor(2, 2, 6, 8);
  // R[x]/(x^2 - u1 x) as a toy modulus (monic, not distinguished; fine here)
  Series m(E, 8);
  m.set_coeff(2, RingElem::one(E));
  m.set_coeff(1, -RingElem::variable(E, 1));
  Algebra A(E, {m});
  CHECK(A.rank() == 2);
  auto x = A.gen(0);
  auto x2 = A.mul(x, x);
  // x^2 = u1 x
  CHECK(x2[0].is_zero());
  CHECK(x2[1] == RingElem::variable(E, 1));
  // tensor of two quotients
  Series m2(E, 8);
  m2.set_coeff(3, RingElem::one(E));
  m2.set_coeff(0, RingElem::constant(E, 2));
  Algebra B(E, {m, m2});
  CHECK(B.rank() == 6);
  auto z = B.gen(1);
  auto z3 = B.pow(z, 3);
  CHECK(z3[0] == RingElem::constant(E, -2));
  // mixed product reduces both variables
  auto w = B.mul(B.gen(0, 1), B.gen(1, 2));
  auto w2 = B.mul(w, w);  // x^2 z^4 = (u1 x)(-2 z)
  auto expect = B.scale(B.mul(B.gen(0), B.gen(1)),
                        RingElem::variable(E, 1).scale(-2));
  CHECK(B.equal(w2, expect));
}

TEST_CASE("berkowitz determinant matches cofactor values") {
  RingSpec E = RingSpec::E_flavor(2, 2, 6, 8);
  auto c = [&](int64_t v) { return RingElem::constant(E, v); };
  Matrix M1 = {{c(2)}};
  CHECK(det_berkowitz(M1, E) == c(2));
  Matrix M2 = {{c(1), c(2)}, {c(3), c(4)}};
  CHECK(det_berkowitz(M2, E) == c(-2));
  Matrix M3 = {{c(1), c(2), c(3)}, {c(4), c(5), c(6)}, {c(7), c(8), c(10)}};
  CHECK(det_berkowitz(M3, E) == c(-3));
  // with ring entries: det [[u1, 1],[2, u1]] = u1^2 - 2
  RingElem u = RingElem::variable(E, 1);
  Matrix M4 = {{u, c(1)}, {c(2), u}};
  CHECK(det_berkowitz(M4, E) == u * u - c(2));
}

TEST_CASE("norm, unit certificate, minimal polynomial") {
  RingSpec E = RingSpec::E_flavor(2, 2, 6, 8);
  RingSpec L = RingSpec::Lt_flavor(2, 2, 6, 8, 1, 8);
  // Lt[x]/(x^2 + u1 x + 2): x is invertible iff the norm is a unit
  Series m(L, 8);
  m.set_coeff(2, RingElem::one(L));
  m.set_coeff(1, RingElem::variable(L, 1));
  m.set_coeff(0, RingElem::constant(L, 2));
  Algebra A(L, {m});
  auto x = A.gen(0);
  auto cert = A.unit_certificate(x);
  // norm of x = constant term = 2 (up to sign): not a unit in Lt
  CHECK(!cert.is_unit);
  // x + u1 has norm with unit part
  auto y = A.add(x, A.scalar(RingElem::variable(L, 1)));
  // norm(y) = y * conj = (u1)^2 - ... just certify through the API
  auto certy = A.unit_certificate(y);
  if (certy.is_unit) {
    CHECK(A.equal(A.mul(y, *certy.inverse), A.one()));
  }
  // minimal polynomial of x is the modulus itself
  auto mp = A.minimal_polynomial(x, 2);
  REQUIRE(mp.status == Algebra::MinPoly::Ok);
  CHECK(mp.poly == m);
  // scalar elements are dependent at degree 1
  auto mps = A.minimal_polynomial(A.scalar(RingElem::constant(L, 3)), 2);
  CHECK(mps.status == Algebra::MinPoly::DependenceTooEarly);
}

TEST_CASE("determinant over an algebra (entries in a quotient ring)") {
  RingSpec E = RingSpec::E_flavor(2, 2, 6, 8);
  Series m(E, 8);
  m.set_coeff(2, RingElem::one(E));
  m.set_coeff(0, -RingElem::variable(E, 1));  // x^2 = u1
  Algebra A(E, {m});
  auto x = A.gen(0);
  std::vector<std::vector<Algebra::Elem>> M = {
      {x, A.one()},
      {A.scalar(RingElem::variable(E, 1)), x}};
  // det = x^2 - u1 = 0
  auto d = det_berkowitz_alg(A, M);
  CHECK(A.is_zero(d));
  std::vector<std::vector<Algebra::Elem>> M2 = {
      {x, A.one()}, {A.one(), x}};
  auto d2 = det_berkowitz_alg(A, M2);  // u1 - 1
  auto expect = A.scalar(RingElem::variable(E, 1) - RingElem::one(E));
  CHECK(A.equal(d2, expect));
}
