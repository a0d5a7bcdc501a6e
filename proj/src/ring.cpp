#include "transchar/ring.hpp"

#include <algorithm>
#include <sstream>

namespace transchar {

uint64_t RingSpec::modulus() const {
  uint64_t m = 1;
  for (int i = 0; i < a; ++i) {
    if (m > (1ull << 31)) throw Error("p^a too large for exact arithmetic");
    m *= static_cast<uint64_t>(p);
  }
  return m;
}

void RingSpec::validate() const {
  if (p < 2) throw Error("prime p must be >= 2");
  if (n < 1) throw Error("height n must be >= 1");
  if (a < 1) throw Error("p-precision a must be >= 1");
  if (d < 1) throw Error("degree box d must be >= 1");
  if (flavor == Flavor::Lt) {
    if (t < 1 || t >= n) throw Error("Lt flavor requires 1 <= t < n");
    if (e < 0) throw Error("laurent depth e must be >= 0");
  }
  if (modulus() > (1ull << 31)) throw Error("p^a exceeds the supported coefficient range");
}

bool RingSpec::compatible(const RingSpec& o) const {
  return p == o.p && n == o.n && a == o.a && d == o.d;
}

bool RingSpec::operator==(const RingSpec& o) const {
  return p == o.p && n == o.n && a == o.a && flavor == o.flavor && t == o.t &&
         d == o.d && e == o.e;
}

RingSpec RingSpec::E_flavor(int64_t p, int n, int a, int d) {
  RingSpec s;
  s.p = p; s.n = n; s.a = a; s.d = d; s.flavor = Flavor::E; s.t = 0; s.e = 0;
  s.validate();
  return s;
}

RingSpec RingSpec::Lt_flavor(int64_t p, int n, int a, int d, int t, int e) {
  RingSpec s;
  s.p = p; s.n = n; s.a = a; s.d = d; s.flavor = Flavor::Lt; s.t = t; s.e = e;
  s.validate();
  return s;
}

namespace {

uint64_t norm_coeff(const RingSpec& s, int64_t c) {
  int64_t m = static_cast<int64_t>(s.modulus());
  int64_t r = c % m;
  if (r < 0) r += m;
  return static_cast<uint64_t>(r);
}

int vp(const RingSpec& s, uint64_t c) {
  int v = 0;
  while (c != 0 && c % static_cast<uint64_t>(s.p) == 0) {
    c /= static_cast<uint64_t>(s.p);
    ++v;
  }
  return v;
}

// whether the exponent vector fits the spec's box; underflow is set when a
// u_t exponent falls below -e in Lt flavor, the flagged direction.  Discards
// above d are silent in both flavors: positive exponents only grow under
// multiplication, so the upper truncation behaves like a quotient for the
// in-window part of any product.
bool in_box(const RingSpec& s, const Exp& x, bool* ut_underflow) {
  for (int i = 0; i < s.nvars(); ++i) {
    int32_t v = x[static_cast<size_t>(i)];
    if (s.flavor == Flavor::Lt && i == s.ut_index()) {
      if (v < -s.e) {
        if (ut_underflow) *ut_underflow = true;
        return false;
      }
      if (v > s.d) return false;
    } else {
      if (v < 0 || v > s.d) return false;
    }
  }
  return true;
}

uint64_t inverse_mod_pa(const RingSpec& s, uint64_t c) {
  return inverse_mod_pk(s.p, s.modulus(), c);
}

}  // namespace

uint64_t inverse_mod_pk(int64_t p, uint64_t pa, uint64_t c) {
  c %= pa;
  uint64_t cp = c % static_cast<uint64_t>(p);
  if (cp == 0) throw Error("inverse_mod_pk: not invertible");
  uint64_t x = 1;  // seed with the inverse mod p, then Newton-lift
  for (uint64_t i = 1; i < static_cast<uint64_t>(p); ++i)
    if ((cp * i) % static_cast<uint64_t>(p) == 1) {
      x = i;
      break;
    }
  for (int it = 0; it < 10 && (c * x) % pa != 1; ++it)
    x = (x * (2 + pa - (c * x) % pa)) % pa;
  if ((c * x) % pa != 1) throw Error("inverse_mod_pk: lift failed");
  return x;
}

RingElem RingElem::constant(const RingSpec& s, int64_t c) {
  RingElem r(s);
  uint64_t cc = norm_coeff(s, c);
  if (cc != 0) r.terms_[Exp(static_cast<size_t>(s.nvars()), 0)] = cc;
  return r;
}

RingElem RingElem::variable(const RingSpec& s, int var, int power) {
  if (var < 1 || var > s.nvars()) throw Error("variable index out of range");
  Exp e(static_cast<size_t>(s.nvars()), 0);
  e[static_cast<size_t>(var - 1)] = power;
  return monomial(s, e, 1);
}

RingElem RingElem::monomial(const RingSpec& s, const Exp& exp, int64_t c) {
  if (exp.size() != static_cast<size_t>(s.nvars()))
    throw Error("monomial: exponent vector length mismatch");
  RingElem r(s);
  uint64_t cc = norm_coeff(s, c);
  if (cc == 0) return r;
  bool oow = false;
  if (!in_box(s, exp, &oow)) throw Error("monomial: exponent outside the box");
  r.terms_[exp] = cc;
  return r;
}

bool RingElem::is_one() const {
  if (terms_.size() != 1) return false;
  const auto& [e, c] = *terms_.begin();
  if (c != 1) return false;
  return std::all_of(e.begin(), e.end(), [](int32_t v) { return v == 0; });
}

uint64_t RingElem::coeff(const Exp& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0 : it->second;
}

int64_t RingElem::constant_term() const {
  return static_cast<int64_t>(coeff(Exp(static_cast<size_t>(spec_.nvars()), 0)));
}

void RingElem::insert_term(const Exp& e, uint64_t c) {
  if (c != 0) terms_[e] = c;
}

RingElem RingElem::operator+(const RingElem& o) const {
  if (!(spec_ == o.spec_)) throw Error("add: ring spec mismatch");
  RingElem r(spec_);
  r.precision_loss_ = precision_loss_ || o.precision_loss_;
  r.terms_ = terms_;
  uint64_t m = spec_.modulus();
  for (const auto& [e, c] : o.terms_) {
    uint64_t& slot = r.terms_[e];
    slot = (slot + c) % m;
    if (slot == 0) r.terms_.erase(e);
  }
  return r;
}

RingElem RingElem::operator-(const RingElem& o) const {
  return *this + (-o);
}

RingElem RingElem::operator-() const {
  RingElem r(spec_);
  uint64_t m = spec_.modulus();
  for (const auto& [e, c] : terms_) r.terms_[e] = m - c;
  r.precision_loss_ = precision_loss_;
  return r;
}

RingElem mul_impl(const RingElem& x, const RingElem& y) {
  const RingSpec& s = x.spec_;
  uint64_t m = s.modulus();
  RingElem r(s);
  r.precision_loss_ = x.precision_loss_ || y.precision_loss_;
  std::map<Exp, uint64_t> acc;
  Exp e(static_cast<size_t>(s.nvars()), 0);
  for (const auto& [ex, cx] : x.terms_) {
    for (const auto& [ey, cy] : y.terms_) {
      for (size_t i = 0; i < e.size(); ++i) e[i] = ex[i] + ey[i];
      uint64_t c = (cx * cy) % m;
      if (c == 0) continue;
      bool oow = false;
      if (!in_box(s, e, &oow)) {
        if (oow) r.precision_loss_ = true;
        continue;
      }
      uint64_t& slot = acc[e];
      slot = (slot + c) % m;
    }
  }
  for (const auto& [ee, cc] : acc)
    if (cc != 0) r.terms_[ee] = cc;
  return r;
}

RingElem RingElem::operator*(const RingElem& o) const {
  if (!(spec_ == o.spec_)) throw Error("mul: ring spec mismatch");
  return mul_impl(*this, o);
}

bool RingElem::operator==(const RingElem& o) const {
  return spec_ == o.spec_ && terms_ == o.terms_;
}

RingElem RingElem::scale(int64_t c) const {
  RingElem k = RingElem::constant(spec_, c);
  return *this * k;
}

RingElem RingElem::pow(uint64_t k) const {
  RingElem r = RingElem::one(spec_);
  RingElem b = *this;
  while (k) {
    if (k & 1) r = r * b;
    b = b * b;
    k >>= 1;
  }
  return r;
}

std::optional<int> RingElem::mt_weight() const {
  if (terms_.empty()) return std::nullopt;
  int best = INT32_MAX;
  int wv = spec_.weight_vars();
  for (const auto& [e, c] : terms_) {
    int w = vp(spec_, c);
    for (int i = 0; i < wv; ++i) w += e[static_cast<size_t>(i)];
    best = std::min(best, w);
  }
  return best;
}

RingElem RingElem::reduce_mod_mt() const {
  if (spec_.flavor != Flavor::Lt) throw Error("reduce_mod_mt: Lt flavor required");
  RingElem r(spec_);
  r.precision_loss_ = precision_loss_;
  int wv = spec_.weight_vars();
  for (const auto& [e, c] : terms_) {
    uint64_t cp = c % static_cast<uint64_t>(spec_.p);
    if (cp == 0) continue;
    bool low = false;
    for (int i = 0; i < wv; ++i)
      if (e[static_cast<size_t>(i)] > 0) { low = true; break; }
    if (low) continue;
    r.terms_[e] = cp;
  }
  return r;
}

RingElem RingElem::reduce_mod_ph(int h) const {
  if (h < 0 || h > spec_.nvars()) throw Error("reduce_mod_ph: bad h");
  RingElem r(spec_);
  r.precision_loss_ = precision_loss_;
  for (const auto& [e, c] : terms_) {
    uint64_t cp = (h == 0) ? c : c % static_cast<uint64_t>(spec_.p);
    if (cp == 0) continue;
    bool low = false;
    for (int i = 0; i <= h - 2; ++i) {
      if (e[static_cast<size_t>(i)] > 0) { low = true; break; }
    }
    if (low) continue;
    r.terms_[e] = cp;
  }
  return r;
}

UnitCheck RingElem::is_unit_with_inverse() const {
  if (spec_.flavor == Flavor::E) {
    int64_t c0 = constant_term();
    if (c0 % spec_.p == 0) return {UnitCheck::NotUnit, std::nullopt};
    // Newton: v <- v(2 - x v), exact in the quotient ring
    RingElem v = RingElem::constant(spec_, static_cast<int64_t>(
        inverse_mod_pa(spec_, static_cast<uint64_t>(c0))));
    RingElem two = RingElem::constant(spec_, 2);
    for (int it = 0; it < 64; ++it) {
      RingElem err = RingElem::one(spec_) - (*this) * v;
      if (err.is_zero()) return {UnitCheck::Unit, v};
      v = v * (two - (*this) * v);
    }
    throw Error("is_unit_with_inverse: Newton failed to converge over E");
  }
  // Lt flavor: residue mod m_t must be invertible in the Laurent residue
  // ring; its inverse expansion must terminate inside the box.
  RingElem res = reduce_mod_mt();
  if (res.is_zero()) return {UnitCheck::NotUnit, std::nullopt};
  // leading pure-u_t term of the residue
  int ut = spec_.ut_index();
  bool found = false;
  int32_t vmin = 0;
  uint64_t lead = 0;
  for (const auto& [e, c] : res.terms_) {
    bool pure = true;
    for (int i = 0; i < spec_.nvars(); ++i)
      if (i != ut && e[static_cast<size_t>(i)] != 0) { pure = false; break; }
    if (!pure) continue;
    int32_t v = e[static_cast<size_t>(ut)];
    if (!found || v < vmin) { found = true; vmin = v; lead = c; }
  }
  if (!found) return {UnitCheck::NotUnit, std::nullopt};
  // x = lead * u_t^vmin * (1 + eps); invert by geometric series
  Exp le(static_cast<size_t>(spec_.nvars()), 0);
  le[static_cast<size_t>(ut)] = -vmin;
  if (-vmin < -spec_.e || -vmin > spec_.d)
    return {UnitCheck::PrecisionExceeded, std::nullopt};
  RingElem lead_inv = RingElem::monomial(
      spec_, le, static_cast<int64_t>(inverse_mod_pa(spec_, lead)));
  RingElem eps = RingElem::one(spec_) - lead_inv * (*this);
  RingElem inv = lead_inv;
  RingElem term = lead_inv;
  int cap = spec_.a + spec_.nvars() * spec_.d + spec_.e + 4;
  for (int it = 0; it < cap && !term.is_zero(); ++it) {
    term = term * eps;
    inv = inv + term;
  }
  if (!term.is_zero()) return {UnitCheck::PrecisionExceeded, std::nullopt};
  RingElem check = (*this) * inv;
  if (check.precision_loss() || !check.is_one())
    return {UnitCheck::PrecisionExceeded, std::nullopt};
  if (inv.precision_loss())
    return {UnitCheck::PrecisionExceeded, std::nullopt};
  return {UnitCheck::Unit, inv};
}

RingElem RingElem::base_change_to_lt(int t, int e) const {
  if (spec_.flavor != Flavor::E) throw Error("base_change_to_lt: E flavor input required");
  RingSpec ls = RingSpec::Lt_flavor(spec_.p, spec_.n, spec_.a, spec_.d, t, e);
  RingElem r(ls);
  r.terms_ = terms_;
  r.precision_loss_ = precision_loss_;
  return r;
}

std::string RingElem::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c;
    for (int i = 0; i < spec_.nvars(); ++i) {
      int32_t v = e[static_cast<size_t>(i)];
      if (v != 0) os << "*u" << (i + 1) << "^" << v;
    }
  }
  return os.str();
}

uint64_t RingElem::content_hash() const {
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (const auto& [e, c] : terms_) {
    for (int32_t v : e) mix(static_cast<uint64_t>(static_cast<int64_t>(v)) + 0x9e37);
    mix(c);
  }
  return h;
}

namespace {

// Finds a unit pivot in column `col` among rows >= row; returns row index and
// the inverse, or -1.
int find_pivot(const Matrix& M, const std::vector<int>& rowperm, int row,
               int col, int nrows, RingElem* inv_out) {
  for (int r = row; r < nrows; ++r) {
    const RingElem& cand = M[static_cast<size_t>(rowperm[static_cast<size_t>(r)])]
                            [static_cast<size_t>(col)];
    if (cand.is_zero()) continue;
    UnitCheck u = cand.is_unit_with_inverse();
    if (u.kind == UnitCheck::Unit) {
      *inv_out = *u.inverse;
      return r;
    }
  }
  return -1;
}

}  // namespace

namespace {

// one round of Gauss elimination with unit pivots; the result may be off by
// deep-weight window junk in Lt flavor, which the caller repairs by
// iterative refinement against the exact residual
LinearSolveResult eliminate_once(const Matrix& M0,
                                 const std::vector<RingElem>& b0) {
  int nrows = static_cast<int>(M0.size());
  if (nrows == 0) return {LinearSolveResult::Solved, {}, -1};
  int ncols = static_cast<int>(M0[0].size());
  Matrix M = M0;
  std::vector<RingElem> b = b0;
  std::vector<int> rowperm(static_cast<size_t>(nrows));
  for (int i = 0; i < nrows; ++i) rowperm[static_cast<size_t>(i)] = i;

  std::vector<int> pivot_row_of_col(static_cast<size_t>(ncols), -1);
  int row = 0;
  for (int col = 0; col < ncols && row < nrows; ++col) {
    RingElem inv;
    int pr = find_pivot(M, rowperm, row, col, nrows, &inv);
    if (pr < 0) {
      bool all_zero = true;
      for (int r = row; r < nrows; ++r)
        if (!M[static_cast<size_t>(rowperm[static_cast<size_t>(r)])]
              [static_cast<size_t>(col)].is_zero())
          all_zero = false;
      if (all_zero) continue;  // free-ish column with zero tail: skip
      return {LinearSolveResult::NoSolution, {}, col};
    }
    std::swap(rowperm[static_cast<size_t>(row)], rowperm[static_cast<size_t>(pr)]);
    int prow = rowperm[static_cast<size_t>(row)];
    // scale pivot row
    for (int c = col; c < ncols; ++c)
      M[static_cast<size_t>(prow)][static_cast<size_t>(c)] =
          M[static_cast<size_t>(prow)][static_cast<size_t>(c)] * inv;
    b[static_cast<size_t>(prow)] = b[static_cast<size_t>(prow)] * inv;
    // eliminate everywhere else
    for (int r = 0; r < nrows; ++r) {
      int rr = rowperm[static_cast<size_t>(r)];
      if (rr == prow) continue;
      RingElem f = M[static_cast<size_t>(rr)][static_cast<size_t>(col)];
      if (f.is_zero()) continue;
      for (int c = col; c < ncols; ++c)
        M[static_cast<size_t>(rr)][static_cast<size_t>(c)] =
            M[static_cast<size_t>(rr)][static_cast<size_t>(c)] -
            f * M[static_cast<size_t>(prow)][static_cast<size_t>(c)];
      b[static_cast<size_t>(rr)] = b[static_cast<size_t>(rr)] -
                                   f * b[static_cast<size_t>(prow)];
    }
    pivot_row_of_col[static_cast<size_t>(col)] = prow;
    ++row;
  }
  // residual rows must vanish
  for (int r = row; r < nrows; ++r) {
    int rr = rowperm[static_cast<size_t>(r)];
    if (!b[static_cast<size_t>(rr)].is_zero())
      return {LinearSolveResult::NoSolution, {}, ncols};
  }
  const RingSpec& s = M0[0][0].spec();
  std::vector<RingElem> sol(static_cast<size_t>(ncols), RingElem::zero(s));
  for (int col = 0; col < ncols; ++col) {
    int prow = pivot_row_of_col[static_cast<size_t>(col)];
    if (prow >= 0) sol[static_cast<size_t>(col)] = b[static_cast<size_t>(prow)];
  }
  return {LinearSolveResult::Solved, sol, -1};
}

}  // namespace

LinearSolveResult solve_linear_system(const Matrix& M0,
                                      const std::vector<RingElem>& b0) {
  int nrows = static_cast<int>(M0.size());
  if (nrows == 0) return {LinearSolveResult::Solved, {}, -1};
  int ncols = static_cast<int>(M0[0].size());
  const RingSpec& s = M0[0][0].spec();
  std::vector<RingElem> sol(static_cast<size_t>(ncols), RingElem::zero(s));
  std::vector<RingElem> resid = b0;
  int max_refine = 2 * s.a + s.nvars() * s.d + s.e + 8;
  for (int round = 0; round <= max_refine; ++round) {
    bool zero = true;
    for (const auto& r : resid)
      if (!r.is_zero()) {
        zero = false;
        break;
      }
    if (zero) return {LinearSolveResult::Solved, sol, -1};
    auto step = eliminate_once(M0, resid);
    if (step.status != LinearSolveResult::Solved)
      return {LinearSolveResult::NoSolution, {}, step.stuck_column};
    bool progress = false;
    for (int c = 0; c < ncols; ++c)
      if (!step.solution[static_cast<size_t>(c)].is_zero()) progress = true;
    if (!progress) return {LinearSolveResult::NoSolution, {}, ncols};
    for (int c = 0; c < ncols; ++c)
      sol[static_cast<size_t>(c)] += step.solution[static_cast<size_t>(c)];
    // exact residual from single products
    for (int r = 0; r < nrows; ++r) {
      RingElem acc = RingElem::zero(s);
      for (int c = 0; c < ncols; ++c)
        acc += M0[static_cast<size_t>(r)][static_cast<size_t>(c)] *
               sol[static_cast<size_t>(c)];
      resid[static_cast<size_t>(r)] = b0[static_cast<size_t>(r)] - acc;
    }
  }
  return {LinearSolveResult::NoSolution, {}, ncols};
}

LinearSolveResult linear_solve(const Matrix& M, const std::vector<RingElem>& b) {
  if (M.size() != b.size()) throw Error("linear_solve: shape mismatch");
  for (const auto& row : M)
    if (row.size() != M.size()) throw Error("linear_solve: matrix must be square");
  return solve_linear_system(M, b);
}

}  // namespace transchar
