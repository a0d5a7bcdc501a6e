#include "transchar/fgl.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace transchar {

PSeriesSpec PSeriesSpec::standard(const RingSpec& espec) {
  if (espec.flavor != Flavor::E) throw Error("PSeriesSpec: E flavor required");
  int64_t p = espec.p;
  int64_t q = 1;
  for (int i = 0; i < espec.n; ++i) q *= p;
  PSeriesSpec ps;
  ps.espec = espec;
  Series f(espec, static_cast<int>(q));
  f.set_coeff(1, RingElem::constant(espec, p));
  int64_t pi = 1;
  for (int i = 1; i <= espec.n - 1; ++i) {
    pi *= p;
    f.set_coeff(static_cast<int>(pi), RingElem::variable(espec, i));
  }
  f.set_coeff(static_cast<int>(q), RingElem::one(espec));
  ps.f = f;
  return ps;
}

uint64_t PSeriesSpec::content_hash() const {
  uint64_t h = f.content_hash();
  auto mix = [&h](uint64_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6); };
  mix(static_cast<uint64_t>(espec.p));
  mix(static_cast<uint64_t>(espec.n));
  mix(static_cast<uint64_t>(espec.a));
  mix(static_cast<uint64_t>(espec.d));
  return h;
}

RingElem Fgl::coeff(int i, int j) const {
  auto it = c_.find({i, j});
  return it == c_.end() ? RingElem::zero(ps_.espec) : it->second;
}

void Fgl::set_coeff(int i, int j, const RingElem& v) {
  if (v.is_zero())
    c_.erase({i, j});
  else
    c_[{i, j}] = v;
}

Fgl Fgl::from_terms(PSeriesSpec ps, int DF,
                    std::map<std::pair<int, int>, RingElem> terms) {
  Fgl F;
  F.ps_ = std::move(ps);
  F.DF_ = DF;
  F.c_ = std::move(terms);
  return F;
}

namespace {

// bivariate polynomial over the base ring, truncated at total degree D
struct BiPoly {
  RingSpec base;
  int D = 0;
  std::map<std::pair<int, int>, RingElem> c;

  static BiPoly zero(const RingSpec& b, int D) { return {b, D, {}}; }

  void add_term(int i, int j, const RingElem& v) {
    if (i + j > D || v.is_zero()) return;
    auto key = std::make_pair(i, j);
    auto it = c.find(key);
    if (it == c.end()) {
      c.emplace(key, v);
    } else {
      it->second += v;
      if (it->second.is_zero()) c.erase(it);
    }
  }

  BiPoly operator+(const BiPoly& o) const {
    BiPoly r = *this;
    for (const auto& [k, v] : o.c) r.add_term(k.first, k.second, v);
    return r;
  }

  BiPoly operator-() const {
    BiPoly r{base, D, {}};
    for (const auto& [k, v] : c) r.c[k] = -v;
    return r;
  }

  BiPoly operator*(const BiPoly& o) const {
    BiPoly r{base, D, {}};
    for (const auto& [k1, v1] : c) {
      int d1 = k1.first + k1.second;
      for (const auto& [k2, v2] : o.c) {
        if (d1 + k2.first + k2.second > D) continue;
        r.add_term(k1.first + k2.first, k1.second + k2.second, v1 * v2);
      }
    }
    return r;
  }

  BiPoly homogeneous_part(int m) const {
    BiPoly r{base, D, {}};
    for (const auto& [k, v] : c)
      if (k.first + k.second == m) r.c[k] = v;
    return r;
  }
};

BiPoly substitute_powers(const RingSpec& b, int D,
                         const std::vector<Series>& fpow, int i, int j,
                         const RingElem& coeff) {
  BiPoly r = BiPoly::zero(b, D);
  const Series& gi = fpow[static_cast<size_t>(i)];
  const Series& gj = fpow[static_cast<size_t>(j)];
  for (const auto& [da, va] : gi.coeffs()) {
    if (da > D) continue;
    for (const auto& [db, vb] : gj.coeffs()) {
      if (da + db > D) break;
      r.add_term(da, db, coeff * (va * vb));
    }
  }
  return r;
}

RingElem reduce_elem_to(const RingElem& x, const RingSpec& target) {
  RingElem r(target);
  for (const auto& [e, c] : x.terms()) {
    bool fits = true;
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i] > target.d) fits = false;
    if (!fits) continue;
    uint64_t cc = c % target.modulus();
    if (cc != 0) r += RingElem::monomial(target, e, static_cast<int64_t>(cc));
  }
  return r;
}

// height-1 construction: degree-by-degree solve of f(F) = F(f,f); the
// correction at degree m is error/(p^m - p), performed at padded precision
FglBuildResult build_height_one(const PSeriesSpec& ps, int DF) {
  int pad = 3;
  for (int64_t m = 1; m < DF; m *= ps.espec.p) ++pad;
  RingSpec wide = RingSpec::E_flavor(ps.espec.p, ps.espec.n,
                                     ps.espec.a + pad, ps.espec.d);
  PSeriesSpec wps = PSeriesSpec::standard(wide);
  const RingSpec& b = wide;
  int64_t p = b.p;
  uint64_t pa = b.modulus();

  std::vector<Series> fpow;
  fpow.push_back(Series::one(b, DF));
  Series f = wps.f.truncate(DF);
  for (int i = 1; i <= DF; ++i) fpow.push_back(fpow.back() * f);

  Fgl F = Fgl::from_terms(wps, DF, {});
  F.set_coeff(1, 0, RingElem::one(b));
  F.set_coeff(0, 1, RingElem::one(b));

  int fdeg = wps.f.degree();
  BiPoly Fb = BiPoly::zero(b, DF);
  Fb.add_term(1, 0, RingElem::one(b));
  Fb.add_term(0, 1, RingElem::one(b));
  std::vector<BiPoly> Fpow;
  Fpow.push_back(BiPoly::zero(b, DF));
  Fpow[0].add_term(0, 0, RingElem::one(b));
  for (int i = 1; i <= fdeg; ++i) Fpow.push_back(Fpow.back() * Fb);

  BiPoly Fff = BiPoly::zero(b, DF);
  Fff = Fff + substitute_powers(b, DF, fpow, 1, 0, RingElem::one(b));
  Fff = Fff + substitute_powers(b, DF, fpow, 0, 1, RingElem::one(b));

  auto f_of_F = [&]() {
    BiPoly r = BiPoly::zero(b, DF);
    for (const auto& [deg, cf] : wps.f.coeffs()) {
      if (deg > DF) continue;
      for (const auto& [k, v] : Fpow[static_cast<size_t>(deg)].c)
        r.add_term(k.first, k.second, v * cf);
    }
    return r;
  };

  for (int m = 2; m <= DF; ++m) {
    BiPoly err = (f_of_F() + (-Fff)).homogeneous_part(m);
    if (err.c.empty()) continue;
    int64_t pm1 = 1;
    for (int i = 0; i < m - 1; ++i) pm1 = (pm1 * p) % static_cast<int64_t>(pa);
    int64_t vv = (pm1 - 1) % static_cast<int64_t>(pa);
    if (vv < 0) vv += static_cast<int64_t>(pa);
    uint64_t divisor_inv = inverse_mod_pk(p, pa, static_cast<uint64_t>(vv));
    BiPoly h = BiPoly::zero(b, DF);
    for (const auto& [k, v] : err.c) {
      RingElem hv(b);
      for (const auto& [ex, cc] : v.terms()) {
        if (cc % static_cast<uint64_t>(p) != 0)
          return {FglBuildResult::SolveFailure, {}, m};
        uint64_t cred = cc / static_cast<uint64_t>(p);
        uint64_t hc = (cred * divisor_inv) % pa;
        hv += RingElem::monomial(b, ex, static_cast<int64_t>(hc));
      }
      if (!hv.is_zero()) h.c[k] = hv;
    }
    for (const auto& [k, v] : h.c)
      F.set_coeff(k.first, k.second, F.coeff(k.first, k.second) + v);
    Fb = Fb + h;
    for (int i = 1; i <= fdeg; ++i)
      Fpow[static_cast<size_t>(i)] = Fpow[static_cast<size_t>(i - 1)] * Fb;
    for (const auto& [k, v] : h.c)
      Fff = Fff + substitute_powers(b, DF, fpow, k.first, k.second, v);
  }
  // reduce to the declared precision
  std::map<std::pair<int, int>, RingElem> reduced;
  for (const auto& [k, v] : F.terms()) {
    RingElem r = reduce_elem_to(v, ps.espec);
    if (!r.is_zero()) reduced[k] = r;
  }
  return {FglBuildResult::Ok, Fgl::from_terms(ps, DF, std::move(reduced)), -1};
}

// scaled Araki-log coefficients: mhat_r = p^r m_r where
//   l(x) = sum_r m_r x^{p^r},  p m_r (1 - p^{p^r - 1}) = sum_{s<r} m_s v_{r-s}^{p^s}
// with v_0 = p, v_i = u_i (i < n), v_n = 1.  The scaled recursion is
// division-free, so the mhat_r are exact at the working precision.
std::vector<RingElem> araki_log_scaled(const RingSpec& b, int smax) {
  int64_t p = b.p;
  uint64_t pa = b.modulus();
  int n = b.n;
  auto v_gen = [&](int i) -> RingElem {
    if (i == n) return RingElem::one(b);
    if (i >= 1 && i <= n - 1) return RingElem::variable(b, i);
    return RingElem::zero(b);
  };
  std::vector<RingElem> mh(static_cast<size_t>(smax + 1), RingElem::zero(b));
  mh[0] = RingElem::one(b);
  for (int r = 1; r <= smax; ++r) {
    RingElem acc = RingElem::zero(b);
    int64_t ppow = 1;  // p^{r-1-s}
    for (int s = r - 1; s >= 0; --s) {
      int i = r - s;
      RingElem vi = v_gen(i);
      if (!vi.is_zero()) {
        // v_i^{p^s}
        uint64_t e = 1;
        for (int j = 0; j < s; ++j) e *= static_cast<uint64_t>(p);
        acc += mh[static_cast<size_t>(s)].scale(ppow) * vi.pow(e);
      }
      ppow = (ppow * p) % static_cast<int64_t>(pa);
    }
    // divide by the unit 1 - p^{p^r - 1} (trivially 1 mod p^a once p^r-1 >= a)
    int64_t unit = 1;
    {
      int64_t steps = 1;
      for (int j = 0; j < r; ++j) steps *= p;  // p^r
      int64_t q = 1;
      for (int64_t j = 0; j < steps - 1 && q != 0; ++j)
        q = (q * p) % static_cast<int64_t>(pa);
      unit = (1 - q) % static_cast<int64_t>(pa);
      if (unit < 0) unit += static_cast<int64_t>(pa);
    }
    uint64_t uinv = inverse_mod_pk(p, pa, static_cast<uint64_t>(unit));
    mh[static_cast<size_t>(r)] = acc.scale(static_cast<int64_t>(uinv));
  }
  return mh;
}

// Dense coefficient arithmetic for the builder: an element of the box ring
// is a flat vector over the exponent box, one residue per u-monomial.
struct DenseRing {
  int64_t p;
  uint64_t pa;
  int nvars;
  int d;
  size_t size;  // (d+1)^nvars

  using C = std::vector<uint64_t>;

  C zero() const { return C(size, 0); }

  static DenseRing from(const RingSpec& s) {
    DenseRing r;
    r.p = s.p;
    r.pa = s.modulus();
    r.nvars = s.nvars();
    r.d = s.d;
    r.size = 1;
    for (int i = 0; i < r.nvars; ++i) r.size *= static_cast<size_t>(s.d + 1);
    return r;
  }

  C from_elem(const RingElem& x) const {
    C c = zero();
    for (const auto& [e, cc] : x.terms()) {
      size_t idx = 0;
      for (int v = 0; v < nvars; ++v)
        idx = idx * static_cast<size_t>(d + 1) +
              static_cast<size_t>(e[static_cast<size_t>(v)]);
      c[idx] = cc % pa;
    }
    return c;
  }

  RingElem to_elem(const C& c, const RingSpec& target) const {
    RingElem r(target);
    uint64_t tm = target.modulus();
    Exp e(static_cast<size_t>(nvars), 0);
    for (size_t idx = 0; idx < size; ++idx) {
      if (c[idx] == 0) continue;
      size_t rest = idx;
      for (int v = nvars - 1; v >= 0; --v) {
        e[static_cast<size_t>(v)] = static_cast<int32_t>(
            rest % static_cast<size_t>(d + 1));
        rest /= static_cast<size_t>(d + 1);
      }
      uint64_t cc = c[idx] % tm;
      if (cc != 0) r += RingElem::monomial(target, e, static_cast<int64_t>(cc));
    }
    return r;
  }

  void add_inplace(C& a, const C& b) const {
    for (size_t i = 0; i < size; ++i) a[i] = (a[i] + b[i]) % pa;
  }

  void sub_inplace(C& a, const C& b) const {
    for (size_t i = 0; i < size; ++i) a[i] = (a[i] + pa - b[i]) % pa;
  }

  bool is_zero(const C& a) const {
    for (uint64_t v : a)
      if (v != 0) return false;
    return true;
  }

  // a += x*y (convolution over exponent boxes, truncating above d)
  void addmul(C& acc, const C& x, const C& y) const {
    if (nvars == 0) {
      acc[0] = (acc[0] + x[0] * y[0]) % pa;
      return;
    }
    if (nvars == 1) {
      for (int i = 0; i <= d; ++i) {
        uint64_t xi = x[static_cast<size_t>(i)];
        if (xi == 0) continue;
        for (int j = 0; j + i <= d; ++j) {
          uint64_t yj = y[static_cast<size_t>(j)];
          if (yj == 0) continue;
          size_t k = static_cast<size_t>(i + j);
          acc[k] = (acc[k] + xi * yj) % pa;
        }
      }
      return;
    }
    // generic: decode indices (rare at desk scale)
    std::vector<int> ex(static_cast<size_t>(nvars));
    std::vector<int> ey(static_cast<size_t>(nvars));
    for (size_t ix = 0; ix < size; ++ix) {
      if (x[ix] == 0) continue;
      size_t rest = ix;
      for (int v = nvars - 1; v >= 0; --v) {
        ex[static_cast<size_t>(v)] = static_cast<int>(rest % static_cast<size_t>(d + 1));
        rest /= static_cast<size_t>(d + 1);
      }
      for (size_t iy = 0; iy < size; ++iy) {
        if (y[iy] == 0) continue;
        rest = iy;
        bool fits = true;
        size_t idx = 0;
        for (int v = nvars - 1; v >= 0; --v) {
          ey[static_cast<size_t>(v)] = static_cast<int>(rest % static_cast<size_t>(d + 1));
          rest /= static_cast<size_t>(d + 1);
        }
        for (int v = 0; v < nvars; ++v) {
          int s = ex[static_cast<size_t>(v)] + ey[static_cast<size_t>(v)];
          if (s > d) {
            fits = false;
            break;
          }
          idx = idx * static_cast<size_t>(d + 1) + static_cast<size_t>(s);
        }
        if (fits) acc[idx] = (acc[idx] + x[ix] * y[iy]) % pa;
      }
    }
  }

  void scale_inplace(C& a, uint64_t c) const {
    c %= pa;
    for (size_t i = 0; i < size; ++i) a[i] = (a[i] * c) % pa;
  }
};

// homogeneous slice of a bivariate series: coefficients of x^i y^{m-i}
using Slice = std::vector<DenseRing::C>;  // index i = 0..m

// F from l(F) = l(x) + l(y) by degree-wise extraction:
//   p^S F_m = p^S (lx+ly)_m - sum_{s>=1} p^{S-s} mhat_s [F^{p^s}]_m
// with S = floor(log_p m).  Slices of the power chain F^{p^s} are computed
// once per degree in a single pass: the degree-m slice of any power only
// involves F-slices of degree < m.
FglBuildResult build_araki(const PSeriesSpec& ps, int DF, int pad) {
  RingSpec wide = RingSpec::E_flavor(ps.espec.p, ps.espec.n,
                                     ps.espec.a + pad, ps.espec.d);
  const DenseRing R = DenseRing::from(wide);
  int64_t p = wide.p;
  int smax = 0;
  for (int64_t q = 1; q * p <= DF; q *= p) ++smax;
  std::vector<RingElem> mh_elems = araki_log_scaled(wide, smax);
  std::vector<DenseRing::C> mh;
  for (const auto& e : mh_elems) mh.push_back(R.from_elem(e));

  // chains[c] for c = 0..Cn: powers F^{j_c} with j_0 = 1 and each next index
  // obtained by multiplying by the previous chain element so that every
  // F^{p^s} appears.  For the slice recurrences we just keep F^j for every
  // j along p-fold ladders: F, F^2, ..., F^p, F^{2p}, ..., F^{p^2}, ...
  // Simpler: keep F^j for j in the multiplicative ladder
  //   1, 2, ..., p, 2p, 3p, ..., p^2, 2p^2, ..., p^smax
  // where each entry is prev + step; every slice is a convolution of two
  // earlier ladder entries' slices.
  struct Ladder {
    std::vector<int64_t> exps;           // ladder exponents
    std::vector<std::pair<int, int>> of;  // exps[k] = exps[of[k].first] + exps[of[k].second]
  };
  Ladder lad;
  lad.exps.push_back(1);
  lad.of.push_back({-1, -1});
  {
    int64_t step = 1;
    for (int s = 0; s < smax; ++s) {
      int64_t base = step;  // p^s
      int prev = 0;
      for (size_t k = 0; k < lad.exps.size(); ++k)
        if (lad.exps[k] == base) prev = static_cast<int>(k);
      int base_idx = prev;
      int64_t cur = base;
      int cur_idx = base_idx;
      for (int r = 2; r <= p; ++r) {
        cur += base;
        lad.exps.push_back(cur);
        lad.of.push_back({cur_idx, base_idx});
        cur_idx = static_cast<int>(lad.exps.size()) - 1;
      }
      step *= p;
    }
  }
  // slices[k][m] = degree-m homogeneous slice of F^{lad.exps[k]}
  size_t L = lad.exps.size();
  std::vector<std::vector<Slice>> slices(
      L, std::vector<Slice>(static_cast<size_t>(DF + 1)));
  auto zero_slice = [&](int m) {
    return Slice(static_cast<size_t>(m + 1), R.zero());
  };
  // F-slices at degree 1
  slices[0][1] = zero_slice(1);
  slices[0][1][0] = R.from_elem(RingElem::one(wide));
  slices[0][1][1] = slices[0][1][0];
  for (size_t k = 1; k < L; ++k) {
    // lowest degree of F^{exps[k]} is exps[k]; nothing below
    (void)k;
  }
  auto conv_slice = [&](size_t k, int m) {
    // slice m of chain k from its two factors
    int ka = lad.of[k].first;
    int kb = lad.of[k].second;
    int64_t la = lad.exps[static_cast<size_t>(ka)];
    int64_t lb = lad.exps[static_cast<size_t>(kb)];
    Slice out = zero_slice(m);
    bool any = false;
    for (int ma = static_cast<int>(la); ma <= m - static_cast<int>(lb); ++ma) {
      int mb = m - ma;
      const Slice& A = slices[static_cast<size_t>(ka)][static_cast<size_t>(ma)];
      const Slice& B = slices[static_cast<size_t>(kb)][static_cast<size_t>(mb)];
      if (A.empty() || B.empty()) continue;
      any = true;
      for (int ia = 0; ia <= ma; ++ia) {
        bool za = true;
        for (uint64_t vv : A[static_cast<size_t>(ia)])
          if (vv) {
            za = false;
            break;
          }
        if (za) continue;
        for (int ib = 0; ib <= mb; ++ib)
          R.addmul(out[static_cast<size_t>(ia + ib)],
                   A[static_cast<size_t>(ia)], B[static_cast<size_t>(ib)]);
      }
    }
    if (any) slices[k][static_cast<size_t>(m)] = std::move(out);
  };

  // indices of F^{p^s} in the ladder
  std::vector<size_t> pk_idx(static_cast<size_t>(smax + 1), 0);
  {
    int64_t q = 1;
    for (int s = 0; s <= smax; ++s) {
      for (size_t k = 0; k < L; ++k)
        if (lad.exps[k] == q) pk_idx[static_cast<size_t>(s)] = k;
      q *= p;
    }
  }

  for (int m = 2; m <= DF; ++m) {
    // fill power slices at degree m (uses F-slices of degree < m only)
    for (size_t k = 1; k < L; ++k)
      if (lad.exps[k] <= m) conv_slice(k, m);
    int S = 0;
    for (int64_t q = 1; q * p <= m; q *= p) ++S;
    int64_t pS = 1;
    for (int j = 0; j < S; ++j) pS *= p;
    Slice rhs = zero_slice(m);
    {
      int64_t q = 1;
      for (int j = 0; j < S; ++j) q *= p;
      if (q == m) {
        rhs[0] = mh[static_cast<size_t>(S)];
        rhs[static_cast<size_t>(m)] = mh[static_cast<size_t>(S)];
      }
    }
    int64_t scale = pS;
    DenseRing::C tmp = R.zero();
    for (int s = 1; s <= S; ++s) {
      scale /= p;
      const Slice& pw = slices[pk_idx[static_cast<size_t>(s)]][static_cast<size_t>(m)];
      if (pw.empty()) continue;
      DenseRing::C factor = mh[static_cast<size_t>(s)];
      R.scale_inplace(factor, static_cast<uint64_t>(scale));
      for (int i = 0; i <= m; ++i) {
        tmp.assign(R.size, 0);
        R.addmul(tmp, pw[static_cast<size_t>(i)], factor);
        R.sub_inplace(rhs[static_cast<size_t>(i)], tmp);
      }
    }
    // divide by p^S and store as the F-slice at degree m
    Slice fm = zero_slice(m);
    bool nonzero = false;
    for (int i = 0; i <= m; ++i) {
      for (size_t idx = 0; idx < R.size; ++idx) {
        uint64_t cc = rhs[static_cast<size_t>(i)][idx];
        if (cc == 0) continue;
        if (cc % static_cast<uint64_t>(pS) != 0)
          return {FglBuildResult::SolveFailure, {}, m};
        fm[static_cast<size_t>(i)][idx] = cc / static_cast<uint64_t>(pS);
        nonzero = true;
      }
    }
    if (nonzero) slices[0][static_cast<size_t>(m)] = std::move(fm);
  }

  // reduce to the declared precision
  std::map<std::pair<int, int>, RingElem> reduced;
  // degree-1 terms
  reduced[{1, 0}] = RingElem::one(ps.espec);
  reduced[{0, 1}] = RingElem::one(ps.espec);
  for (int m = 2; m <= DF; ++m) {
    const Slice& sl = slices[0][static_cast<size_t>(m)];
    if (sl.empty()) continue;
    for (int i = 0; i <= m; ++i) {
      RingElem r = R.to_elem(sl[static_cast<size_t>(i)], ps.espec);
      if (!r.is_zero()) reduced[{i, m - i}] = r;
    }
  }
  return {FglBuildResult::Ok, Fgl::from_terms(ps, DF, std::move(reduced)), -1};
}

}  // namespace

FglBuildResult lubin_tate_fgl(const PSeriesSpec& ps, int DF) {
  if (ps.espec.n == 1) return build_height_one(ps, DF);
  int base_pad = 4;
  for (int64_t m = 1; m < DF; m *= ps.espec.p) base_pad += 2;
  // the modulus must stay within the exact-arithmetic range
  while (base_pad > 4) {
    double bits = (ps.espec.a + base_pad) * std::log2(double(ps.espec.p));
    if (bits <= 31.0) break;
    --base_pad;
  }
  // padded build with a stability check: rebuilding with extra padding must
  // reduce to the same terms, and the p-series identity must verify exactly
  for (int attempt = 0; attempt < 3; ++attempt) {
    int pad = base_pad + 4 * attempt;
    FglBuildResult r1 = build_araki(ps, DF, pad);
    if (r1.status != FglBuildResult::Ok) return r1;
    FglBuildResult r2 = build_araki(ps, DF, pad + 3);
    if (r2.status != FglBuildResult::Ok) return r2;
    if (r1.fgl.terms() == r2.fgl.terms() &&
        r1.fgl.p_series_identity_holds(std::min(DF, 40)))
      return r1;
  }
  return {FglBuildResult::SolveFailure, {}, DF};
}

Series Fgl::sum_series(const Series& s, const Series& t) const {
  if (!s.coeff(0).is_zero() || !t.coeff(0).is_zero())
    throw Error("fgl sum_series: arguments must have zero constant term");
  int D = std::min(s.precision(), t.precision());
  const RingSpec& b = ps_.espec;
  // powers vanish once the argument's order pushes past the precision
  std::vector<Series> spow{Series::one(b, D)};
  std::vector<Series> tpow{Series::one(b, D)};
  for (int i = 1; i <= DF_ && !spow.back().is_zero(); ++i)
    spow.push_back(spow.back() * s);
  for (int j = 1; j <= DF_ && !tpow.back().is_zero(); ++j)
    tpow.push_back(tpow.back() * t);
  Series r = Series::zero(b, D);
  for (const auto& [k, v] : c_) {
    if (k.first >= static_cast<int>(spow.size()) ||
        k.second >= static_cast<int>(tpow.size()))
      continue;  // the corresponding power vanished below the precision
    Series term = spow[static_cast<size_t>(k.first)] *
                  tpow[static_cast<size_t>(k.second)];
    if (term.is_zero()) continue;
    r = r + term.scale(v);
  }
  return r;
}

Series p_series(const Fgl& F, int D) {
  const RingSpec& b = F.pseries().espec;
  // formal sum of the monomials of f, lowest degree first
  Series acc = Series::zero(b, D);
  bool first = true;
  for (const auto& [deg, c] : F.pseries().f.coeffs()) {
    Series mono(b, D);
    if (deg <= D) mono.set_coeff(deg, c);
    if (first) {
      acc = mono;
      first = false;
    } else {
      acc = F.sum_series(acc, mono);
    }
  }
  return acc;
}

Series pk_series(const Fgl& F, int k, int D) {
  const RingSpec& b = F.pseries().espec;
  Series r = Series::x(b, D);
  Series ps = p_series(F, D);
  for (int i = 0; i < k; ++i) r = ps.compose(r);
  return r;
}

Series int_series(const Fgl& F, uint64_t m, int D) {
  const RingSpec& b = F.pseries().espec;
  if (m == 0) return Series::zero(b, D);
  Series x = Series::x(b, D);
  Series half = int_series(F, m / 2, D);
  Series r = (m / 2 == 0) ? Series::zero(b, D) : F.sum_series(half, half);
  if (m % 2 == 1) r = r.is_zero() ? x : F.sum_series(r, x);
  return r;
}

bool Fgl::p_series_identity_holds(int up_to_degree) const {
  int D = std::min(DF_, up_to_degree);
  Series lhs = int_series(*this, static_cast<uint64_t>(ps_.espec.p), D);
  Series rhs = p_series(*this, D);
  return lhs == rhs;
}

int Fgl::plain_f_equivariance_failure_degree(int up_to_degree) const {
  const RingSpec& b = ps_.espec;
  int D = std::min(DF_, up_to_degree);
  BiPoly Fb = BiPoly::zero(b, DF_);
  for (const auto& [k, v] : c_) Fb.add_term(k.first, k.second, v);
  int fdeg = ps_.f.degree();
  std::vector<BiPoly> Fpow{BiPoly::zero(b, DF_)};
  Fpow[0].add_term(0, 0, RingElem::one(b));
  for (int i = 1; i <= fdeg; ++i) Fpow.push_back(Fpow.back() * Fb);
  BiPoly foF = BiPoly::zero(b, DF_);
  for (const auto& [deg, cf] : ps_.f.coeffs()) {
    if (deg > DF_) continue;
    for (const auto& [k, v] : Fpow[static_cast<size_t>(deg)].c)
      foF.add_term(k.first, k.second, v * cf);
  }
  std::vector<Series> fpow{Series::one(b, DF_)};
  Series f = ps_.f.truncate(DF_);
  for (int i = 1; i <= DF_; ++i) fpow.push_back(fpow.back() * f);
  BiPoly Fff = BiPoly::zero(b, DF_);
  for (const auto& [k, v] : c_)
    Fff = Fff + substitute_powers(b, DF_, fpow, k.first, k.second, v);
  BiPoly diff = foF + (-Fff);
  for (int m = 0; m <= D; ++m)
    if (!diff.homogeneous_part(m).c.empty()) return m;
  return -1;
}

bool Fgl::axioms_hold(int up_to_degree) const {
  const RingSpec& b = ps_.espec;
  int D = std::min(DF_, up_to_degree);
  for (const auto& [k, v] : c_) {
    if (k.second == 0 && !(k.first == 1 && v.is_one())) return false;
    if (k.first == 0 && !(k.second == 1 && v.is_one())) return false;
  }
  for (const auto& [k, v] : c_) {
    auto it = c_.find({k.second, k.first});
    if (it == c_.end() || !(it->second == v)) return false;
  }
  // associativity via trivariate expansion through total degree D
  using Key = std::array<int, 3>;
  using Tri = std::map<Key, RingElem>;
  auto tri_add = [](Tri& r, const Key& k, const RingElem& v) {
    if (v.is_zero()) return;
    auto it = r.find(k);
    if (it == r.end())
      r.emplace(k, v);
    else {
      it->second += v;
      if (it->second.is_zero()) r.erase(it);
    }
  };
  auto tri_mul = [&](const Tri& u, const Tri& v) {
    Tri r;
    for (const auto& [ku, cu] : u)
      for (const auto& [kv, cv] : v) {
        Key k{ku[0] + kv[0], ku[1] + kv[1], ku[2] + kv[2]};
        if (k[0] + k[1] + k[2] > D) continue;
        tri_add(r, k, cu * cv);
      }
    return r;
  };
  auto fgl_of = [&](const Tri& u, const Tri& v) {
    std::vector<Tri> up{Tri{{Key{0, 0, 0}, RingElem::one(b)}}};
    std::vector<Tri> vp = up;
    for (int i = 1; i <= D; ++i) {
      up.push_back(tri_mul(up.back(), u));
      vp.push_back(tri_mul(vp.back(), v));
    }
    Tri r;
    for (const auto& [k, cf] : c_) {
      if (k.first > D || k.second > D) continue;
      Tri term = tri_mul(up[static_cast<size_t>(k.first)],
                         vp[static_cast<size_t>(k.second)]);
      for (const auto& [kk, vv] : term) tri_add(r, kk, vv * cf);
    }
    return r;
  };
  Tri x{{Key{1, 0, 0}, RingElem::one(b)}};
  Tri y{{Key{0, 1, 0}, RingElem::one(b)}};
  Tri z{{Key{0, 0, 1}, RingElem::one(b)}};
  Tri lhs = fgl_of(fgl_of(x, y), z);
  Tri rhs = fgl_of(x, fgl_of(y, z));
  return lhs == rhs;
}

uint64_t Fgl::content_hash() const {
  uint64_t h = ps_.content_hash() ^ (static_cast<uint64_t>(DF_) << 32);
  for (const auto& [k, v] : c_) {
    h ^= (static_cast<uint64_t>(k.first) << 17) ^
         (static_cast<uint64_t>(k.second) << 3) ^ v.content_hash();
    h *= 1099511628211ull;
  }
  return h;
}

CongruenceReport congruence_check(const Fgl& F, int h, int k, int D) {
  CongruenceReport rep;
  rep.h = h;
  rep.k = k;
  const RingSpec& b = F.pseries().espec;
  Series pk = pk_series(F, k, D);
  Series red = pk.reduce_mod_ph(h);
  rep.reduced = red;
  int64_t step = 1;
  for (int i = 0; i < h * k; ++i) step *= b.p;
  for (const auto& [i, v] : red.coeffs()) {
    (void)v;
    if (i % step != 0) {
      rep.pass = false;
      rep.detail = "exponent not a multiple of p^{kh}";
      return rep;
    }
  }
  rep.extracted = red.substitute_power(static_cast<int>(step));
  int64_t ph = 1;
  for (int i = 0; i < h; ++i) ph *= b.p;
  int64_t exponent = 0, acc = 1;
  for (int i = 0; i < k; ++i) {
    exponent += acc;
    acc *= ph;
  }
  RingElem expected_lead(b);
  if (h == 0) {
    int64_t c = 1;
    for (int i = 0; i < exponent; ++i) c *= b.p;
    expected_lead = RingElem::constant(b, c);
  } else {
    if (exponent > b.d) {
      rep.pass = false;
      rep.detail = "leading exponent exceeds the degree box";
      return rep;
    }
    expected_lead =
        RingElem::variable(b, h, static_cast<int>(exponent)).reduce_mod_ph(h);
  }
  RingElem lead = rep.extracted.coeff(1);
  if (!(lead == expected_lead)) {
    rep.pass = false;
    rep.detail = "leading coefficient mismatch";
    return rep;
  }
  rep.pass = true;
  return rep;
}

}  // namespace transchar
