/****************************************************************
 * One-variable truncated series over a RingSpec base, with the
 * Weierstrass machinery: distinguished degree detection, division
 * by a distinguished monic polynomial, and preparation
 *   s = (monic distinguished polynomial) * (unit series).
 *
 * Coefficients of x^0..x^D are stored sparsely; products truncate
 * above x-degree D.
 ****************************************************************/
#pragma once

#include <map>
#include <optional>

#include "transchar/ring.hpp"

namespace transchar {

class Series {
public:
  Series() = default;
  Series(RingSpec base, int D) : base_(std::move(base)), D_(D) {}

  static Series zero(const RingSpec& b, int D) { return Series(b, D); }
  static Series one(const RingSpec& b, int D);
  static Series x(const RingSpec& b, int D, int power = 1);
  static Series constant(const RingSpec& b, int D, int64_t c);

  const RingSpec& base() const { return base_; }
  int precision() const { return D_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const;  // max stored degree, -1 for zero
  const RingElem coeff(int i) const;
  void set_coeff(int i, const RingElem& v);
  const std::map<int, RingElem>& coeffs() const { return c_; }

  Series operator+(const Series& o) const;
  Series operator-(const Series& o) const;
  Series operator*(const Series& o) const;
  Series operator-() const;
  bool operator==(const Series& o) const;
  bool operator!=(const Series& o) const { return !(*this == o); }

  Series scale(const RingElem& c) const;
  Series scale_int(int64_t c) const;
  Series truncate(int new_D) const;     // may raise or lower the precision
  Series shift_down(int m) const;       // divide by x^m, discarding lower part
  Series low_part(int m) const;         // degrees < m
  Series derivative() const;

  // substitute a series with zero constant term
  Series compose(const Series& inner) const;

  // substitute a ring element for x^step, i.e. read this series as a series
  // in x^step and evaluate; exponents must all be multiples of step
  Series substitute_power(int step) const;

  bool is_monic_of_degree(int m) const;
  // all coefficients below the leading one have mt_weight >= 1
  bool is_distinguished_of_degree(int m) const;
  bool any_precision_loss() const;

  Series base_change_to_lt(int t, int e) const;
  Series map_coeffs(RingElem (*f)(const RingElem&)) const;
  Series reduce_mod_ph(int h) const;  // coefficient-wise
  Series reduce_mod_mt() const;

  std::string str() const;
  uint64_t content_hash() const;

private:
  RingSpec base_;
  int D_ = 0;
  std::map<int, RingElem> c_;  // nonzero coefficients only
};

// least degree whose coefficient passes the unit check (Unit or
// PrecisionExceeded both certify unit-ness modulo the relevant ideal)
struct WeierstrassDegree {
  enum Status { Found, NoUnitCoefficient } status;
  int degree = -1;
};
WeierstrassDegree weierstrass_degree(const Series& s);

struct Division {
  enum Status { Ok, NonConvergence } status;
  Series q, r;
};
// divide f by a distinguished monic g; exact to the common precision
Division weierstrass_divide(const Series& f, const Series& g);

struct Prepared {
  enum Status { Ok, NoUnitCoefficient, NonConvergence } status;
  Series monic, unit;
  int w_degree = -1;
};
Prepared weierstrass_prepare(const Series& s);

// multiplicative inverse of a series whose constant term has an exact
// base-ring inverse
std::optional<Series> series_inverse(const Series& s);

}  // namespace transchar
