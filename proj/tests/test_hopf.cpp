#include <doctest.h>

#include "transchar/hopf.hpp"

using namespace transchar;

namespace {
FglStore& flagship_store() {
  static FglStore store(
      PSeriesSpec::standard(RingSpec::E_flavor(2, 2, 6, 8)));
  return store;
}
}  // namespace

TEST_CASE("hopf level k=1 flagship: canonical factor and coproduct checks") {
  auto res = make_hopf_level(flagship_store(), 1);
  REQUIRE(res.status == HopfLevelResult::Ok);
  const HopfLevel& H = res.level;
  CHECK(H.rank == 4);
  CHECK(H.f_k.is_distinguished_of_degree(4));
  // mod 2 the factor is a polynomial in x^2 with x^2-coefficient of lowest
  // u1-degree 1 (the displayed p-series congruence [2] = u1 x^2 + ... mod 2)
  Series fbar = H.f_k.reduce_mod_ph(1);
  CHECK(fbar.coeff(4).is_one());
  CHECK(fbar.coeff(1).is_zero());
  CHECK(fbar.coeff(3).is_zero());
  CHECK(fbar.coeff(0).is_zero());
  RingElem c2 = fbar.coeff(2);
  REQUIRE(!c2.is_zero());
  CHECK(c2.terms().begin()->first == Exp{1});  // lowest term u1^1
  // pk = f_k * w_k exactly at the working precision
  CHECK(H.f_k * H.w_k == H.pk);
  CHECK(H.checks_passed);
  MESSAGE("death exponent Z = ", H.death);
  CHECK(H.death > 4);
}

TEST_CASE("hopf sums: torsion group structure in O_E") {
  auto res = make_hopf_level(flagship_store(), 1);
  REQUIRE(res.status == HopfLevelResult::Ok);
  const HopfLevel& H = res.level;
  Algebra OE = H.make_OE();
  auto x = OE.gen(0);

  // unit law and commutativity
  CHECK(OE.equal(hopf_sum(H, OE, x, OE.zero()), x));
  auto x2 = OE.mul(x, x);
  CHECK(OE.equal(hopf_sum(H, OE, x, x2), hopf_sum(H, OE, x2, x)));

  // x generates p-torsion: [p](x) = 0 and [p+1](x) = x
  auto two_x = hopf_cmul(H, OE, 2, x);
  CHECK(OE.is_zero(two_x));
  CHECK(OE.equal(hopf_cmul(H, OE, 3, x), x));
  // naturality against the series route: [2](x) mod f_k via the p-series
  const Fgl& F = flagship_store().at_least(H.D_used / 2 + 14);
  Series p1 = p_series(F, H.D_used);
  auto via_series = OE.eval_poly(p1, x);
  CHECK(OE.equal(two_x, via_series));

  // distinct points live in the tensor square: u = x1, v = x2
  Algebra OO(H.ps.espec, {H.f_k, H.f_k});
  auto u = OO.gen(0);
  auto v = OO.gen(1);
  auto s = hopf_sum(H, OO, u, v);
  CHECK(!OO.is_zero(s));
  CHECK(OO.equal(s, hopf_sum(H, OO, v, u)));
  // the sum of torsion points is torsion: f_k(u + v) = 0
  CHECK(OO.is_zero(OO.eval_poly(H.f_k, s)));
  // associativity inside the tensor square
  auto l = hopf_sum(H, OO, s, u);
  auto rr = hopf_sum(H, OO, u, hopf_sum(H, OO, v, u));
  CHECK(OO.equal(l, rr));
  // [2](u + v) = [2]u + [2]v = 0
  CHECK(OO.is_zero(hopf_cmul(H, OO, 2, s)));
}

TEST_CASE("hopf level k=2 flagship builds with exact coproduct") {
  RingSpec E = RingSpec::E_flavor(2, 2, 5, 8);
  FglStore store(PSeriesSpec::standard(E));
  auto res = make_hopf_level(store, 2);
  REQUIRE(res.status == HopfLevelResult::Ok);
  const HopfLevel& H = res.level;
  CHECK(H.rank == 16);
  CHECK(H.checks_passed);
  MESSAGE("k=2 death exponent Z = ", H.death, ", D_used = ", H.D_used);
  Algebra OE = H.make_OE();
  auto x = OE.gen(0);
  // x has exact order p^2 = 4
  CHECK(OE.is_zero(hopf_cmul(H, OE, 4, x)));
  CHECK(!OE.is_zero(hopf_cmul(H, OE, 2, x)));
  // the level-1 factor kills [2](x) inside O(f_2): f_1([2](x)) = 0
  auto res1 = make_hopf_level(store, 1);
  REQUIRE(res1.status == HopfLevelResult::Ok);
  auto two_x = hopf_cmul(H, OE, 2, x);
  auto f1_at = OE.eval_poly(res1.level.f_k, two_x);
  CHECK(OE.is_zero(f1_at));
}
