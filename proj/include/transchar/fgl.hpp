/****************************************************************
 * The universal-deformation formal group law over the E-flavor
 * coefficient ring, normalized so that
 *   [p](x) = p·x +_F u_1 x^p +_F ... +_F u_{n-1} x^{p^{n-1}} +_F x^{p^n}
 * (the Araki normalization: the p-series is the *formal* sum of
 * the monomials of f(x) = px + u_1 x^p + ... + x^{p^n}).
 *
 * F is a bivariate series of total degree <= D_F with
 *   F(x,0) = x, F(0,y) = y, F symmetric, F associative,
 * and the displayed p-series identity, all exact at the box
 * precision.  [p^k](x) is the k-fold composite of the p-series,
 * an exactly computable series whose Weierstrass monic factor has
 * degree p^{kn} over E and p^{kt} over Lt.
 *
 * At height n = 1 there are no deformation variables and the
 * plain-sum normalization [p] = px + x^p exists (p = 2 gives the
 * multiplicative law x + y + xy); it is built by the classical
 * degree-by-degree solve.
 ****************************************************************/
#pragma once

#include <map>
#include <utility>

#include "transchar/series.hpp"

namespace transchar {

struct PSeriesSpec {
  RingSpec espec;  // E flavor
  // the monomial data p x + u_1 x^p + ... + x^{p^n}
  Series f;

  static PSeriesSpec standard(const RingSpec& espec);
  uint64_t content_hash() const;
};

struct FglBuildResult;

class Fgl {
public:
  Fgl() = default;

  const PSeriesSpec& pseries() const { return ps_; }
  int degree_bound() const { return DF_; }
  const std::map<std::pair<int, int>, RingElem>& terms() const { return c_; }
  RingElem coeff(int i, int j) const;
  void set_coeff(int i, int j, const RingElem& v);

  // F(s, t) for one-variable series arguments with zero constant term
  Series sum_series(const Series& s, const Series& t) const;

  // exact check of [p](x) = px +_F u_1 x^p +_F ... +_F x^{p^n}
  bool p_series_identity_holds(int up_to_degree) const;
  // diagnostic: first degree at which f(F(x,y)) - F(f(x),f(y)) fails for the
  // *plain polynomial* f, or -1 when it holds through the bound (attainable
  // only at n = 1; see the project notes)
  int plain_f_equivariance_failure_degree(int up_to_degree) const;
  bool axioms_hold(int up_to_degree) const;  // unit, symmetry, associativity

  uint64_t content_hash() const;

  friend FglBuildResult lubin_tate_fgl(const PSeriesSpec& ps, int DF);
  static Fgl from_terms(PSeriesSpec ps, int DF,
                        std::map<std::pair<int, int>, RingElem> terms);

private:
  PSeriesSpec ps_;
  int DF_ = 0;
  std::map<std::pair<int, int>, RingElem> c_;
};

struct FglBuildResult {
  enum Status { Ok, SolveFailure } status;
  Fgl fgl;
  int stuck_degree = -1;
};

// n = 1: degree-by-degree solve of f(F) = F(f,f) (each correction is
// error/(p^m - p), exact after internal padding).  n >= 2: Araki-log
// construction, validated after reduction by the p-series identity and the
// axioms.
FglBuildResult lubin_tate_fgl(const PSeriesSpec& ps, int DF);

// [m](x) to x-precision D via binary addition chains of formal sums
Series int_series(const Fgl& F, uint64_t m, int D);
// the p-series in the Araki normalization (formal sum of the f-monomials)
Series p_series(const Fgl& F, int D);
// [p^k](x) as the k-fold composite of the p-series
Series pk_series(const Fgl& F, int k, int D);

struct CongruenceReport {
  bool pass = false;
  int h = 0, k = 0;
  Series reduced;    // [p^k] mod (p, u_1..u_{h-1}), a series in x^{p^{kh}}
  Series extracted;  // [p^k]_h(y)
  std::string detail;
};

// checks [p^k](x) = [p^k]_h(x^{p^{kh}}) with leading term
// u_h^{(p^{hk}-1)/(p^h-1)} x^{p^{kh}} modulo (p, u_1, ..., u_{h-1})
CongruenceReport congruence_check(const Fgl& F, int h, int k, int D);

}  // namespace transchar
