/****************************************************************
 * Torsion algebras of the p-divisible group and their
 * connected-etale splitting over Lt:
 *   f_k = g_k h_k,  Lt[x]/(f_k) ~ Lt[x]/(g_k) x Lt[x]/(h_k)
 * with an exact Bezout certificate A g + B h = 1 and idempotent,
 * the etale coordinate Y = det(multiplication by mu* x) over the
 * z-basis (the norm construction), its minimal polynomial j_k,
 * the etaleness certificate j_k'(Y) in units, and the subtraction
 * units  (x -_F y) = (x - y) * u  for both the formal and etale
 * torsion algebras.
 ****************************************************************/
#pragma once

#include "transchar/hopf.hpp"

namespace transchar {

struct TorsionAlgebra {
  RingSpec spec;   // E or Lt flavor
  int k = 0;
  Series modulus;  // f_k over E, g_k over Lt
  Algebra alg;
};

// modulus from the canonical Weierstrass factor over the requested flavor
TorsionAlgebra torsion_algebra_E(const HopfLevel& H);
TorsionAlgebra torsion_algebra_Lt(const HopfLevel& H, const RingSpec& lt);

struct SplitData {
  RingSpec lt;
  Series f;  // base-changed f_k
  Series g;  // monic degree p^{kt}, distinguished over Lt
  Series v;  // unit cofactor of the Lt preparation
  Series h;  // f / g exactly, monic degree p^{k(n-t)}
  Algebra Of;           // Lt[x]/(f)
  std::vector<RingElem> bezout_A, bezout_B;  // A g + B h = 1 as polynomials
  Algebra::Elem idem;   // e = B(x) h(x) mod f: the etale-support idempotent
  bool ok = false;
  std::string detail;
  // paper-facing checks
  bool g_bar_is_power = false;      // g = x^{p^{kt}} mod m_t
  bool h_constant_ok = false;       // h(0) mod m_t has lowest u_t-degree
                                    // (p^{kt}-1)/(p^t-1)
  bool idem_exact = false;          // e^2 = e exactly
};

SplitData split_connected_etale(const HopfLevel& H, const RingSpec& lt);

struct EtaleData {
  Algebra::Elem Y;      // in Of
  Series Y_poly;        // Y as a polynomial in x of degree < p^{kn}
  Series j_k;           // monic of degree p^{k(n-t)}
  Algebra::Elem jprime_at_Y;
  bool ok = false;
  std::string detail;
  // certificates
  bool y_congruence = false;        // Y = x^{p^{kt}} mod m_t
  bool divisible_by_g = false;      // Y = g * Q exactly in Of
  Series divisibility_quotient;
  bool formal_component_zero = false;  // the norm restricted to g vanishes
  bool jk_at_Y_zero = false;
  bool jk_root_at_zero = false;     // j_k(0) = 0
  bool jk_matches_prepared_pk_t = false;  // j_k = prep([p^k]_t) mod m_t
  bool derivative_unit_in_Of = false;
  bool derivative_unit_in_Oj = false;
};

EtaleData etale_data(const HopfLevel& H, const SplitData& S);

// forced-failure probe: the smoothness check on a tampered polynomial
bool etale_smoothness_check(const SplitData& S, const Series& jk,
                            const Algebra::Elem& Y);

struct SubtractionUnit {
  bool ok = false;
  std::string detail;
  Algebra T2;            // R[x]/(m) (x) R[y]/(m)
  Algebra::Elem diff;    // x -_F y
  Algebra::Elem unit;    // the certified unit u with x -_F y = (x - y) u
  Algebra::Elem unit_inverse;
  RingElem unit_det;
};

// formal-side subtraction unit: modulus distinguished with zero constant
// term (f_k over E, g_k over Lt)
SubtractionUnit subtraction_unit(const HopfLevel& H, const TorsionAlgebra& T);

struct EtaleSubtraction {
  bool ok = false;
  std::string detail;
  // sigma(y1, y2) = Y(x1 -_F x2) expressed on the basis y1^a y2^b
  std::vector<std::vector<RingElem>> sigma;
  Algebra OJ2;           // Lt[y1]/(j) (x) Lt[y2]/(j)
  Algebra::Elem unit;    // sigma = (y1 - y2) * unit, certified
  Algebra::Elem unit_inverse;
};

// the etale quotient's subtraction data in the j_k-coordinate, obtained by
// pushing the group subtraction through Y and solving on the y-basis
EtaleSubtraction etale_subtraction_unit(const HopfLevel& H, const SplitData& S,
                                        const EtaleData& E);

}  // namespace transchar
