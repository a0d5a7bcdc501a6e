#include "transchar/series.hpp"

#include <sstream>

namespace transchar {

Series Series::one(const RingSpec& b, int D) { return constant(b, D, 1); }

Series Series::x(const RingSpec& b, int D, int power) {
  Series s(b, D);
  if (power <= D) s.c_[power] = RingElem::one(b);
  return s;
}

Series Series::constant(const RingSpec& b, int D, int64_t c) {
  Series s(b, D);
  RingElem e = RingElem::constant(b, c);
  if (!e.is_zero()) s.c_[0] = e;
  return s;
}

int Series::degree() const { return c_.empty() ? -1 : c_.rbegin()->first; }

const RingElem Series::coeff(int i) const {
  auto it = c_.find(i);
  return it == c_.end() ? RingElem::zero(base_) : it->second;
}

void Series::set_coeff(int i, const RingElem& v) {
  if (i < 0 || i > D_) throw Error("set_coeff: degree out of range");
  if (v.is_zero() && !v.precision_loss())
    c_.erase(i);
  else
    c_[i] = v;
}

Series Series::operator+(const Series& o) const {
  if (!(base_ == o.base_)) throw Error("series add: base mismatch");
  Series r(base_, std::min(D_, o.D_));
  for (const auto& [i, v] : c_)
    if (i <= r.D_) r.c_[i] = v;
  for (const auto& [i, v] : o.c_) {
    if (i > r.D_) continue;
    auto it = r.c_.find(i);
    if (it == r.c_.end()) {
      r.c_.emplace(i, v);
    } else {
      it->second += v;
      if (it->second.is_zero() && !it->second.precision_loss()) r.c_.erase(it);
    }
  }
  return r;
}

Series Series::operator-(const Series& o) const { return *this + (-o); }

Series Series::operator-() const {
  Series r(base_, D_);
  for (const auto& [i, v] : c_) r.c_[i] = -v;
  return r;
}

Series Series::operator*(const Series& o) const {
  if (!(base_ == o.base_)) throw Error("series mul: base mismatch");
  Series r(base_, std::min(D_, o.D_));
  std::map<int, RingElem> acc;
  for (const auto& [i, vi] : c_) {
    if (i > r.D_) break;
    for (const auto& [j, vj] : o.c_) {
      if (i + j > r.D_) break;
      RingElem prod = vi * vj;
      if (prod.is_zero() && !prod.precision_loss()) continue;
      auto it = acc.find(i + j);
      if (it == acc.end())
        acc.emplace(i + j, prod);
      else
        it->second += prod;
    }
  }
  for (const auto& [k, v] : acc)
    if (!v.is_zero() || v.precision_loss()) r.c_[k] = v;
  return r;
}

bool Series::operator==(const Series& o) const {
  if (!(base_ == o.base_)) return false;
  auto norm = [](const std::map<int, RingElem>& m) {
    std::map<int, RingElem> out;
    for (const auto& [i, v] : m)
      if (!v.is_zero()) out.emplace(i, v);
    return out;
  };
  return norm(c_) == norm(o.c_);
}

Series Series::scale(const RingElem& k) const {
  Series r(base_, D_);
  for (const auto& [i, v] : c_) {
    RingElem s = v * k;
    if (!s.is_zero() || s.precision_loss()) r.c_[i] = s;
  }
  return r;
}

Series Series::scale_int(int64_t k) const {
  return scale(RingElem::constant(base_, k));
}

Series Series::truncate(int new_D) const {
  Series r(base_, new_D);
  for (const auto& [i, v] : c_)
    if (i <= new_D) r.c_[i] = v;
  return r;
}

Series Series::shift_down(int m) const {
  Series r(base_, D_);
  for (const auto& [i, v] : c_)
    if (i >= m) r.c_[i - m] = v;
  return r;
}

Series Series::low_part(int m) const {
  Series r(base_, D_);
  for (const auto& [i, v] : c_)
    if (i < m) r.c_[i] = v;
  return r;
}

Series Series::derivative() const {
  Series r(base_, D_);
  for (const auto& [i, v] : c_) {
    if (i == 0) continue;
    RingElem s = v.scale(i);
    if (!s.is_zero()) r.c_[i - 1] = s;
  }
  return r;
}

Series Series::compose(const Series& inner) const {
  if (!(base_ == inner.base_)) throw Error("compose: base mismatch");
  if (!inner.coeff(0).is_zero())
    throw Error("compose: inner constant term must vanish");
  int D = std::min(D_, inner.D_);
  Series r(base_, D);
  int top = degree();
  if (top < 0) return r;
  for (int i = top; i >= 0; --i) {  // Horner
    r = r * inner;
    RingElem ci = coeff(i);
    if (!ci.is_zero()) {
      Series cs(base_, D);
      cs.set_coeff(0, ci);
      r = r + cs;
    }
  }
  return r;
}

Series Series::substitute_power(int step) const {
  Series r(base_, D_);
  for (const auto& [i, v] : c_) {
    if (i % step != 0)
      throw Error("substitute_power: exponent not a multiple of step");
    r.c_[i / step] = v;
  }
  return r;
}

bool Series::is_monic_of_degree(int m) const {
  if (degree() != m) return false;
  return coeff(m).is_one();
}

bool Series::is_distinguished_of_degree(int m) const {
  if (!is_monic_of_degree(m)) return false;
  for (const auto& [i, v] : c_) {
    if (i >= m) continue;
    auto w = v.mt_weight();
    if (w.has_value() && *w < 1) return false;
  }
  return true;
}

bool Series::any_precision_loss() const {
  for (const auto& [i, v] : c_)
    if (v.precision_loss()) return true;
  return false;
}

Series Series::base_change_to_lt(int t, int e) const {
  Series r(RingSpec::Lt_flavor(base_.p, base_.n, base_.a, base_.d, t, e), D_);
  for (const auto& [i, v] : c_) r.set_coeff(i, v.base_change_to_lt(t, e));
  return r;
}

Series Series::reduce_mod_ph(int h) const {
  Series r(base_, D_);
  for (const auto& [i, v] : c_) {
    RingElem w = v.reduce_mod_ph(h);
    if (!w.is_zero()) r.c_[i] = w;
  }
  return r;
}

Series Series::reduce_mod_mt() const {
  Series r(base_, D_);
  for (const auto& [i, v] : c_) {
    RingElem w = v.reduce_mod_mt();
    if (!w.is_zero()) r.c_[i] = w;
  }
  return r;
}

std::string Series::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, v] : c_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << v.str() << ")";
    if (i > 0) os << "*x^" << i;
  }
  return os.str();
}

uint64_t Series::content_hash() const {
  uint64_t h = 14695981039346656037ull;
  for (const auto& [i, v] : c_) {
    if (v.is_zero()) continue;
    h ^= static_cast<uint64_t>(i) + 0x517c;
    h *= 1099511628211ull;
    h ^= v.content_hash();
    h *= 1099511628211ull;
  }
  return h;
}

WeierstrassDegree weierstrass_degree(const Series& s) {
  for (const auto& [i, v] : s.coeffs()) {
    UnitCheck u = v.is_unit_with_inverse();
    if (u.kind == UnitCheck::Unit || u.kind == UnitCheck::PrecisionExceeded)
      return {WeierstrassDegree::Found, i};
  }
  return {WeierstrassDegree::NoUnitCoefficient, -1};
}

Division weierstrass_divide(const Series& f, const Series& g) {
  int m = g.degree();
  if (!g.is_distinguished_of_degree(m))
    throw Error("weierstrass_divide: divisor must be monic distinguished");
  const RingSpec& b = f.base();
  int D = std::min(f.precision(), g.precision());
  // stored supports are polynomials, so top-down monic division is exact
  Series q = Series::zero(b, D);
  Series rem = f.truncate(D);
  while (rem.degree() >= m) {
    int j = rem.degree();
    RingElem c = rem.coeff(j);
    q.set_coeff(j - m, q.coeff(j - m) + c);
    Series sub = g.truncate(D).scale(c);
    Series shifted(b, D);
    for (const auto& [i, v] : sub.coeffs())
      if (i + (j - m) <= D) shifted.set_coeff(i + (j - m), v);
    rem = rem - shifted;
    if (rem.degree() >= j) return {Division::NonConvergence, {}, {}};
  }
  return {Division::Ok, q, rem};
}

std::optional<Series> series_inverse(const Series& s) {
  UnitCheck u0 = s.coeff(0).is_unit_with_inverse();
  if (u0.kind != UnitCheck::Unit) return std::nullopt;
  const RingSpec& b = s.base();
  int D = s.precision();
  Series v(b, D);
  v.set_coeff(0, *u0.inverse);
  Series one = Series::one(b, D);
  Series two = Series::constant(b, D, 2);
  int correct = 1;  // x-adic Newton doubles the correct degree range
  while (correct <= D) {
    v = v * (two - s * v);
    correct *= 2;
  }
  if (!(s * v == one)) return std::nullopt;
  return v;
}

namespace {

// inverse of u modulo x^m (x-adic Newton); requires an exact base-ring
// inverse of the constant term
std::optional<Series> inverse_mod_xm(const Series& u, int m) {
  UnitCheck c0 = u.coeff(0).is_unit_with_inverse();
  if (c0.kind != UnitCheck::Unit) return std::nullopt;
  const RingSpec& b = u.base();
  Series uu = u.truncate(m - 1);
  Series v(b, m - 1);
  v.set_coeff(0, *c0.inverse);
  Series two = Series::constant(b, m - 1, 2);
  for (int correct = 1; correct <= m - 1; correct *= 2) v = v * (two - uu * v);
  if (!(uu * v == Series::one(b, m - 1))) return std::nullopt;
  return v.truncate(u.precision());
}

}  // namespace

// Preparation by weight-graded Hensel lifting of the factorization
// s = x^m * (upper part) mod the weight ideal.  The stored support of s is a
// polynomial, so monic and unit come out as exact polynomial factors.
Prepared weierstrass_prepare(const Series& s) {
  WeierstrassDegree wd = weierstrass_degree(s);
  if (wd.status != WeierstrassDegree::Found)
    return {Prepared::NoUnitCoefficient, {}, {}, -1};
  int m = wd.degree;
  const RingSpec& b = s.base();
  int D = s.precision();
  if (m == 0) return {Prepared::Ok, Series::one(b, D), s, 0};
  Series M = Series::x(b, D, m);
  Series U = s.shift_down(m);
  auto T = inverse_mod_xm(U, m);
  // the leading coefficient is a unit by choice of m; failure means its
  // inverse expansion left the coefficient box
  if (!T.has_value()) return {Prepared::NonConvergence, {}, {}, -1};
  int t_eff = b.flavor == Flavor::E ? b.n : b.t;
  int max_iter = b.a + (t_eff - 1) * b.d + 3;
  for (int it = 0; it <= max_iter; ++it) {
    Series e = s - M * U;
    if (e.is_zero()) {
      if (!M.is_distinguished_of_degree(m)) break;
      return {Prepared::Ok, M, U, m};
    }
    Series dM = (e * *T).low_part(m);
    Series rest = e - dM * U;
    auto dv = weierstrass_divide(rest, M);
    if (dv.status != Division::Ok) break;
    M = M + dM;
    U = U + dv.q;
  }
  return {Prepared::NonConvergence, {}, {}, -1};
}

}  // namespace transchar
